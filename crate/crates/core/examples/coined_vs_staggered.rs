// The staggered walk with coin C matches the coined walk with X·C·X under
// node = 2k + c.

use chainwalk::numerics::max_abs_diff;
use chainwalk::scalar_walk::{
    coined_step, coined_to_staggered, staggered_step, Boundary, ChainState, Coin, CoinedState, SwapPhase,
};

pub fn run_example() -> chainwalk::Result<String> {
    let sites = 6;
    let coin = Coin::hadamard();
    let start = coined_to_staggered(0, 3, sites)?;

    let mut chain = ChainState::basis(2 * sites, start)?;
    let mut coined = CoinedState::from_chain(&chain)?;
    let swapped = coin.conjugated_by_x();

    let mut out = String::new();
    for t in 1..=8 {
        chain = staggered_step(&chain, &coin, SwapPhase::ONE)?;
        coined = coined_step(&coined, &swapped, Boundary::Reflecting);
        let dev = max_abs_diff(chain.amplitudes(), coined.to_chain().amplitudes());
        out.push_str(&format!("t={t} max amplitude difference {dev:.2e}\n"));
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
