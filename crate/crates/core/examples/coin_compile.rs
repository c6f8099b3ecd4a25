// Compiling coins to M(theta, phi, lambda) and checking the resulting gate.

use chainwalk::matchgate::{classify_gate, coin_to_params, param_matrix, GateClass};
use chainwalk::scalar_walk::{Coin, CoinPreset};

pub fn run_example() -> chainwalk::Result<String> {
    let mut out = String::new();
    for preset in [CoinPreset::Hadamard, CoinPreset::Balanced, CoinPreset::Identity] {
        let coin = Coin::preset(preset);
        let c = coin_to_params(&coin);
        let class = classify_gate(&param_matrix(&c.params))?;
        out.push_str(&format!(
            "{:<9} theta={:+.6} phi={:+.6} lambda={:+.6} alpha={:.3}{:+.3}i conserving={}\n",
            preset.name(),
            // `+ 0.0` folds -0.0 into 0.0 for display.
            c.params.theta + 0.0,
            c.params.phi + 0.0,
            c.params.lambda + 0.0,
            c.alpha.re + 0.0,
            c.alpha.im + 0.0,
            class == GateClass::NumberConserving
        ));
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
