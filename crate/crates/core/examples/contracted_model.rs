// The walk on d nodes packed into ceil(log2 d) qubits.

use chainwalk::backends::build_contracted;
use chainwalk::scalar_walk::{evolve, Coin, WalkConfig};
use chainwalk::numerics::max_abs_diff;

pub fn run_example() -> chainwalk::Result<String> {
    let config = WalkConfig::new(6, Coin::hadamard(), 2)?;
    let model = build_contracted(&config)?;
    let steps = 5;
    let reg = model.run(&config.start, steps)?;
    let scalar = evolve(&config, steps, false)?.state;

    let mut out = format!("{} nodes on {} qubits ({} basis states)\n", model.nodes(), model.qubits(), model.dim());
    for (i, p) in model.distribution(&reg).iter().enumerate() {
        out.push_str(&format!("|{}> p={p:.6}\n", model.label(i)));
    }
    let pad: f64 = (model.nodes()..model.dim()).map(|i| reg[i].norm_sqr()).sum();
    out.push_str(&format!("probability on padding: {pad:.2e}\n"));
    out.push_str(&format!(
        "deviation from scalar walk: {:.2e}\n",
        max_abs_diff(&reg[..model.nodes()], scalar.amplitudes())
    ));
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
