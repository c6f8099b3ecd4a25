// All four backends on one walk, then again with a deliberately wrong gate.

use chainwalk::backends::{cross_validate, CrossValidationOptions};
use chainwalk::scalar_walk::Coin;

pub fn run_example() -> chainwalk::Result<String> {
    let mut opts = CrossValidationOptions::new(8, Coin::hadamard(), 10, 1e-10);
    let good = cross_validate(&opts)?;
    opts.inject_fault = true;
    let bad = cross_validate(&opts)?;
    Ok(format!(
        "clean run: pass={}\n{}\nfaulty run: pass={}\n{}",
        good.pass,
        good.summary(),
        bad.pass,
        bad.summary()
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
