//! Exact π(x) at powers of ten, a batch sharing quotient tables, and a
//! persistent cache file.

use pipoly::prime_engine::{PrimeCountCache, PrimeCounter};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let counter = PrimeCounter::shared();
    for k in 1..=10 {
        let x = 10u64.pow(k);
        println!("pi(10^{k}) = {}", counter.count(x)?);
    }

    // Every argument here is ⌊10^10 / j⌋, so one table answers them all.
    let xs: Vec<u64> = (1..=8).map(|j| 10_000_000_000 / j).collect();
    println!("batch {:?}", counter.count_batch(&xs)?);

    let dir = std::env::temp_dir().join("pipoly-example-cache.bin");
    let cached = PrimeCounter::new().with_cache(PrimeCountCache::open(&dir)?);
    cached.count(123_456_789_012)?;
    cached.cache().save()?;
    println!(
        "cache at {} holds {} values",
        dir.display(),
        cached.cache().len()
    );
    Ok(())
}
