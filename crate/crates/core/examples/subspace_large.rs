// A thousand walk steps on a chain of 2^16 qubits, run in the
// single-excitation subspace.

use std::time::Instant;

use chainwalk::backends::{SubspaceProgram, SubspaceState};
use chainwalk::matchgate::walk_step_circuit;
use chainwalk::scalar_walk::{ChainState, Coin};

pub fn run_example() -> chainwalk::Result<String> {
    let d = 1 << 16;
    let steps = 1000;
    let program = SubspaceProgram::compile(&walk_step_circuit(d, &Coin::hadamard())?)?;
    let mut state = SubspaceState::new(&ChainState::basis(d, d / 2)?);
    let t0 = Instant::now();
    for _ in 0..steps {
        program.apply(&mut state)?;
    }
    let elapsed = t0.elapsed();
    let p = state.probabilities();
    let total: f64 = p.iter().sum();
    let (peak, pmax) = p
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (i, &x)| if x > best.1 { (i, x) } else { best });
    Ok(format!(
        "d={d} steps={steps} elapsed={:.3}s total probability={total:.12} peak node={peak} (p={pmax:.4})\n",
        elapsed.as_secs_f64()
    ))
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
