//! ψ(x), θ(x) and the normalized deviations bounded by the order estimates.

use pipoly::prime_engine::PrimeCounter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let counter = PrimeCounter::shared();
    println!("x,psi,theta,prime_powers,psi_dev,pi_residual");
    for k in 3..=9 {
        let x = 10u64.pow(k);
        let c = counter.chebyshev(x)?;
        println!(
            "{x},{},{},{},{:.3e},{:.4}",
            c.psi,
            c.theta,
            c.term_count,
            counter.psi_deviation(x)?,
            counter.pi_residual(x)?
        );
    }
    Ok(())
}
