// OpenQASM 2.0 for two Hadamard walk steps on four qubits, checked against
// the circuit it came from.

use chainwalk::matchgate::build_staggered_walk_circuit;
use chainwalk::qasm_emit::{emit_qasm, verify_qasm, EmitOptions};
use chainwalk::scalar_walk::Coin;

pub fn run_example() -> chainwalk::Result<String> {
    let circuit = build_staggered_walk_circuit(4, &Coin::hadamard(), 2)?;
    let opts = EmitOptions {
        measure: true,
        ..EmitOptions::default()
    };
    let text = emit_qasm(&circuit, &opts)?;
    let report = verify_qasm(&text, &circuit)?;
    Ok(format!(
        "{text}// {} applications, deviation {:.2e}, pass={}\n",
        report.applications, report.max_deviation, report.pass
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
