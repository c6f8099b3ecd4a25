// Per-step cost of the subspace and statevector backends as d grows.

use chainwalk::bench::{scaling_slope, time_statevector, time_subspace, to_csv, BenchBackend};
use chainwalk::scalar_walk::Coin;

pub fn run_example() -> chainwalk::Result<String> {
    let coin = Coin::hadamard();
    let mut rows = Vec::new();
    for e in 10..=16 {
        rows.push(time_subspace(1 << e, &coin, 200, 3)?);
    }
    for d in [8, 10, 12] {
        rows.push(time_statevector(d, &coin, 20, 3)?);
    }
    let mut out = to_csv(&rows);
    match scaling_slope(&rows, BenchBackend::Subspace) {
        Ok(s) => out.push_str(&format!("subspace log-log slope: {s:.3}\n")),
        Err(e) => out.push_str(&format!("subspace slope unavailable: {e}\n")),
    }
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
