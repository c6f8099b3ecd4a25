// Hadamard walk on a 16-node chain, started in the middle.

use chainwalk::scalar_walk::{evolve, Coin, WalkConfig};

pub fn run_example() -> chainwalk::Result<String> {
    let config = WalkConfig::new(16, Coin::hadamard(), 8)?;
    let evo = evolve(&config, 6, true)?;
    let records = evo.records.expect("recording was requested");
    let mut out = String::new();
    for (t, p) in records.steps().iter().enumerate() {
        let row: Vec<String> = p.iter().map(|x| format!("{x:.3}")).collect();
        out.push_str(&format!("t={t:<2} {}\n", row.join(" ")));
    }
    out.push_str(&format!("norm after 6 steps: {:.15}\n", evo.state.norm()));
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
