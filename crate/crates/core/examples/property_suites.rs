//! The empirical property suites that back `pipoly check`.

use pipoly::checks::{
    cosign_suite, decades, psi_suite, residual_suite, sign_expectations, sign_monotone_suite,
};
use pipoly::inequality::Evaluator;
use pipoly::prime_engine::PrimeCounter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let counter = PrimeCounter::shared();
    let ev = Evaluator::new(counter);
    let xs: Vec<u64> = (3..=8).map(|k| 10u64.pow(k)).collect();
    print!("{}", psi_suite(counter, &xs)?.render());
    print!("{}", residual_suite(counter, &xs)?.render());
    print!("{}", cosign_suite(&ev, &decades(4, 10))?.render());
    print!(
        "{}",
        sign_monotone_suite(&ev, &sign_expectations(), &decades(4, 10))?.render()
    );
    Ok(())
}
