// Evolving under the full 2^d Hamiltonian and under its d x d
// single-excitation block gives the same chain state.

use chainwalk::backends::QubitState;
use chainwalk::numerics::{hermitian_exp, max_abs_diff};
use chainwalk::scalar_walk::ChainState;
use chainwalk::spin_chain::{
    build_hamiltonian, commutator_norm, number_operator, restricted_hamiltonian_block, EmbeddingMap,
    HamiltonianParams,
};

pub fn run_example() -> chainwalk::Result<String> {
    let d = 5;
    let params = HamiltonianParams::new(
        vec![1.0, 0.7, 0.9, 1.1],
        vec![0.2, 0.4, -0.3, 0.6],
        vec![0.3, -0.2, 0.5, 0.1, 0.0],
    )?;
    let h = build_hamiltonian(&params)?;
    let comm = commutator_norm(&h, &number_operator(d)?)?;

    let map = EmbeddingMap::new(d)?;
    let psi = ChainState::basis(d, 0)?;
    let t = 2.5;
    let full = hermitian_exp(&h, t)?.matvec(map.embed(&psi)?.amplitudes())?;
    let full = QubitState::new(d, full)?;
    let small = hermitian_exp(&restricted_hamiltonian_block(&params)?, t)?.matvec(psi.amplitudes())?;

    let projected = map.project(&full)?;
    Ok(format!(
        "||[H, N]|| = {comm:.2e}\nleaked norm = {:.2e}\nfull vs block deviation = {:.2e}\n",
        map.leaked_norm(&full),
        max_abs_diff(projected.amplitudes(), &small)
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
