// Seeded measurement shots from a walk distribution.

use chainwalk::backends::{sample, OutcomeLabels};
use chainwalk::scalar_walk::{evolve, Coin, WalkConfig};

pub fn run_example() -> chainwalk::Result<String> {
    let config = WalkConfig::new(8, Coin::hadamard(), 4)?;
    let probs = evolve(&config, 4, false)?.state.probabilities();
    let hist = sample(&probs, 10_000, 7)?;
    let again = sample(&probs, 10_000, 7)?;
    assert_eq!(hist.counts(), again.counts());

    let mut out = hist.to_csv();
    out.push_str(&hist.clone().with_labels(OutcomeLabels::Bits(3)).to_csv());
    out.push_str(&serde_json::to_string(&hist)?);
    out.push('\n');
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
