//! Exact prime counting and Chebyshev sums.
//!
//! `π(x)` comes from the in-memory prime list below the sieve limit and from
//! Lucy_Hedgehog's quotient tables above it, memoized in a
//! [`PrimeCountCache`]. `θ` and `ψ` are summed over segmented sieves with
//! compensated summation.

mod cache;
mod lucy;
mod sieve;

pub use cache::{PrimeCountCache, CACHE_MAGIC};
pub use lucy::LucyTable;
pub use sieve::{count_primes_segmented, fold_segments, prime_counts_at, small_primes};

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::numerics::Neumaier;
use sieve::{iroot, isqrt};

pub const DEFAULT_PI_CAP: u64 = 10_000_000_000_000;
pub const DEFAULT_PSI_CAP: u64 = 10_000_000_000;
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;
/// Upper bound for [`sieve_primes`], which materializes every prime.
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

/// Quotient tables kept around for follow-up queries such as `π(x/k)`.
const RECENT_TABLES: usize = 2;
/// Tables above this size are not retained (about 16 MB each).
const RETAIN_TABLE_MAX_N: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrimeError {
    #[error("argument {0} is negative or not finite")]
    InvalidArgument(f64),
    #[error("floor(x) = {value} exceeds the exact prime-count cap {cap}")]
    AboveCap { value: u64, cap: u64 },
    #[error("sieve limit {0} outside the supported range 2..=1e9")]
    SieveRange(u64),
    #[error("Chebyshev argument {x} outside 1..={cap}")]
    ChebyshevRange { x: u64, cap: u64 },
    #[error("{what} requires x >= {min}, got {x}")]
    BelowMinimum {
        what: &'static str,
        x: u64,
        min: u64,
    },
    #[error("von Mangoldt function is undefined at 0")]
    MangoldtZero,
    #[error("cache file: {0}")]
    Cache(String),
}

/// `ψ(x)`, `θ(x)` and the number of prime powers summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevResult {
    pub x: u64,
    pub psi: f64,
    pub theta: f64,
    pub term_count: u64,
}

/// Exact `π` with a memo, plus the Chebyshev functions.
///
/// Safe to share across threads: the base prime list is immutable, the cache
/// takes concurrent readers and serialized writers.
#[derive(Debug)]
pub struct PrimeCounter {
    primes: Vec<u32>,
    sieve_limit: u64,
    pi_cap: u64,
    psi_cap: u64,
    cache: PrimeCountCache,
    recent: Mutex<Vec<Arc<LucyTable>>>,
}

impl Default for PrimeCounter {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeCounter {
    pub fn new() -> Self {
        Self::with_limits(DEFAULT_SIEVE_LIMIT, DEFAULT_PI_CAP, DEFAULT_PSI_CAP)
    }

    pub fn with_limits(sieve_limit: u64, pi_cap: u64, psi_cap: u64) -> Self {
        let sieve_limit = sieve_limit.clamp(2, MAX_SIEVE_LIMIT);
        PrimeCounter {
            primes: small_primes(sieve_limit),
            sieve_limit,
            pi_cap,
            psi_cap,
            cache: PrimeCountCache::new(),
            recent: Mutex::new(Vec::new()),
        }
    }

    pub fn with_cache(mut self, cache: PrimeCountCache) -> Self {
        self.cache = cache;
        self
    }

    /// Process-wide counter with default limits and no persistence.
    pub fn shared() -> &'static PrimeCounter {
        static SHARED: OnceLock<PrimeCounter> = OnceLock::new();
        SHARED.get_or_init(PrimeCounter::new)
    }

    pub fn cache(&self) -> &PrimeCountCache {
        &self.cache
    }

    pub fn sieve_limit(&self) -> u64 {
        self.sieve_limit
    }

    pub fn pi_cap(&self) -> u64 {
        self.pi_cap
    }

    pub fn psi_cap(&self) -> u64 {
        self.psi_cap
    }

    /// `π(⌊x⌋)` for a real argument.
    pub fn prime_count(&self, x: f64) -> Result<u64, PrimeError> {
        self.count(floor_arg(x)?)
    }

    /// `π(n)` for an integer argument.
    pub fn count(&self, n: u64) -> Result<u64, PrimeError> {
        self.check_cap(n)?;
        if n <= self.sieve_limit {
            return Ok(self.count_small(n));
        }
        if let Some(pi) = self.cache.get(n) {
            return Ok(pi);
        }
        if let Some(pi) = self.recent_lookup(n) {
            self.cache.insert(n, pi);
            return Ok(pi);
        }
        let table = LucyTable::new(n);
        let pi = table.count();
        self.cache.insert(n, pi);
        self.retain(table);
        Ok(pi)
    }

    /// Element-wise [`prime_count`](Self::prime_count) sharing quotient tables.
    pub fn prime_count_batch(&self, xs: &[f64]) -> Result<Vec<u64>, PrimeError> {
        let ns = xs
            .iter()
            .map(|&x| floor_arg(x))
            .collect::<Result<Vec<_>, _>>()?;
        self.count_batch(&ns)
    }

    /// Element-wise [`count`](Self::count). Large arguments are resolved from
    /// the fewest Lucy tables: the largest outstanding argument is counted
    /// first and every other argument of the form `⌊X / i⌋` is read off its
    /// table.
    pub fn count_batch(&self, ns: &[u64]) -> Result<Vec<u64>, PrimeError> {
        for &n in ns {
            self.check_cap(n)?;
        }
        let mut pending: BTreeSet<u64> = ns
            .iter()
            .copied()
            .filter(|&n| n > self.sieve_limit && self.cache.get(n).is_none())
            .collect();
        while let Some(&top) = pending.iter().next_back() {
            let table = LucyTable::new(top);
            pending.retain(|&v| match table.get(v) {
                Some(pi) => {
                    self.cache.insert(v, pi);
                    false
                }
                None => true,
            });
            self.retain(table);
        }
        ns.iter().map(|&n| self.count(n)).collect()
    }

    fn check_cap(&self, n: u64) -> Result<(), PrimeError> {
        if n > self.pi_cap {
            return Err(PrimeError::AboveCap {
                value: n,
                cap: self.pi_cap,
            });
        }
        Ok(())
    }

    fn count_small(&self, n: u64) -> u64 {
        self.primes.partition_point(|&p| u64::from(p) <= n) as u64
    }

    fn recent_lookup(&self, n: u64) -> Option<u64> {
        let recent = self.recent.lock().unwrap();
        recent.iter().rev().find_map(|t| t.get(n))
    }

    fn retain(&self, table: LucyTable) {
        if table.n() > RETAIN_TABLE_MAX_N {
            return;
        }
        let mut recent = self.recent.lock().unwrap();
        if recent.len() == RECENT_TABLES {
            recent.remove(0);
        }
        recent.push(Arc::new(table));
    }

    /// `ψ(x)` and `θ(x)`, with `ψ = Σ_{m≥1} θ(x^{1/m})`.
    pub fn chebyshev(&self, x: u64) -> Result<ChebyshevResult, PrimeError> {
        if x == 0 || x > self.psi_cap {
            return Err(PrimeError::ChebyshevRange {
                x,
                cap: self.psi_cap,
            });
        }
        let parts = fold_segments(x, |_, ps| {
            let acc: Neumaier = ps.iter().map(|&p| (p as f64).ln()).collect();
            (acc, ps.len() as u64)
        });
        let mut theta_acc = Neumaier::new();
        let mut prime_count = 0u64;
        for (acc, count) in &parts {
            theta_acc.merge(acc);
            prime_count += count;
        }
        let theta = theta_acc.value();

        let base = small_primes(isqrt(x));
        let mut psi_acc = theta_acc;
        let mut term_count = prime_count;
        for m in 2..64 {
            let root = iroot(x, m);
            if root < 2 {
                break;
            }
            let upto = base.partition_point(|&p| u64::from(p) <= root);
            let theta_m: Neumaier = base[..upto].iter().map(|&p| f64::from(p).ln()).collect();
            psi_acc.merge(&theta_m);
            term_count += upto as u64;
        }
        Ok(ChebyshevResult {
            x,
            psi: psi_acc.value(),
            theta,
            term_count,
        })
    }

    /// `(ψ(x) − x) / (√x · (log x)²)`.
    pub fn psi_deviation(&self, x: u64) -> Result<f64, PrimeError> {
        let (psi, xf, l) = self.psi_parts(x)?;
        Ok((psi - xf) / (xf.sqrt() * l * l))
    }

    /// `(ψ(x) − x) / (x · (log x)²)`, the normalization with a linear factor.
    pub fn psi_deviation_linear(&self, x: u64) -> Result<f64, PrimeError> {
        let (psi, xf, l) = self.psi_parts(x)?;
        Ok((psi - xf) / (xf * l * l))
    }

    fn psi_parts(&self, x: u64) -> Result<(f64, f64, f64), PrimeError> {
        if x < 2 {
            return Err(PrimeError::BelowMinimum {
                what: "psi deviation",
                x,
                min: 2,
            });
        }
        let psi = self.chebyshev(x)?.psi;
        let xf = x as f64;
        Ok((psi, xf, xf.ln()))
    }

    /// `(π(x) − ψ(x)/log x) · (log x)² / x`.
    pub fn pi_residual(&self, x: u64) -> Result<f64, PrimeError> {
        if x < 2 {
            return Err(PrimeError::BelowMinimum {
                what: "pi residual",
                x,
                min: 2,
            });
        }
        let psi = self.chebyshev(x)?.psi;
        let pi = self.count(x)? as f64;
        let xf = x as f64;
        let l = xf.ln();
        Ok((pi - psi / l) * l * l / xf)
    }
}

fn floor_arg(x: f64) -> Result<u64, PrimeError> {
    if !x.is_finite() || x < 0.0 {
        return Err(PrimeError::InvalidArgument(x));
    }
    let f = x.floor();
    if f >= u64::MAX as f64 {
        return Err(PrimeError::AboveCap {
            value: u64::MAX,
            cap: DEFAULT_PI_CAP,
        });
    }
    Ok(f as u64)
}

/// Every prime `≤ limit`, ascending, for `2 ≤ limit ≤ 1e9`.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>, PrimeError> {
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(PrimeError::SieveRange(limit));
    }
    Ok(fold_segments(limit, |_, ps| ps.to_vec())
        .into_iter()
        .flatten()
        .collect())
}

/// `Λ(n)`: `log p` when `n = p^m`, else 0.
pub fn mangoldt(n: u64) -> Result<f64, PrimeError> {
    if n == 0 {
        return Err(PrimeError::MangoldtZero);
    }
    if n == 1 {
        return Ok(0.0);
    }
    let p = smallest_prime_factor(n);
    let mut rest = n;
    while rest % p == 0 {
        rest /= p;
    }
    Ok(if rest == 1 { (p as f64).ln() } else { 0.0 })
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counter() -> PrimeCounter {
        PrimeCounter::with_limits(1000, DEFAULT_PI_CAP, DEFAULT_PSI_CAP)
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        assert!(sieve_primes(1).is_err());
        assert!(sieve_primes(MAX_SIEVE_LIMIT + 1).is_err());
    }

    #[test]
    fn prime_count_examples() {
        let c = counter();
        assert_eq!(c.prime_count(10.0).unwrap(), 4);
        assert_eq!(c.prime_count(1e4).unwrap(), 1229);
        assert_eq!(c.prime_count(3678.79).unwrap(), c.count(3678).unwrap());
        assert_eq!(c.prime_count(0.0).unwrap(), 0);
        assert_eq!(c.prime_count(1.99).unwrap(), 0);
        assert!(c.prime_count(-1.0).is_err());
        assert!(c.prime_count(f64::NAN).is_err());
    }

    #[test]
    fn cap_is_enforced_and_named() {
        let c = PrimeCounter::with_limits(100, 1_000_000, 1000);
        let err = c.count(1_000_001).unwrap_err();
        assert!(err.to_string().contains("1000000"), "{err}");
        assert!(c.count(1_000_000).is_ok());
    }

    #[test]
    fn batch_matches_pointwise() {
        let c = counter();
        assert_eq!(c.prime_count_batch(&[10.0, 100.0]).unwrap(), vec![4, 25]);
        assert!(c.prime_count_batch(&[]).unwrap().is_empty());
        let xs: Vec<f64> = (0..40).map(|i| 1e5 / (1.0 + i as f64 * 0.37)).collect();
        let batch = c.prime_count_batch(&xs).unwrap();
        let fresh = counter();
        let single: Vec<u64> = xs.iter().map(|&x| fresh.prime_count(x).unwrap()).collect();
        assert_eq!(batch, single);
    }

    #[test]
    fn mangoldt_examples() {
        assert_eq!(mangoldt(8).unwrap(), 2f64.ln());
        assert_eq!(mangoldt(6).unwrap(), 0.0);
        assert_eq!(mangoldt(1).unwrap(), 0.0);
        assert_eq!(mangoldt(97).unwrap(), 97f64.ln());
        assert_eq!(mangoldt(81).unwrap(), 3f64.ln());
        assert!(mangoldt(0).is_err());
    }

    #[test]
    fn chebyshev_small() {
        let c = counter();
        let r = c.chebyshev(1).unwrap();
        assert_eq!((r.psi, r.theta, r.term_count), (0.0, 0.0, 0));
        let r = c.chebyshev(10).unwrap();
        let expected = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((r.psi - expected).abs() < 1e-12);
        assert!((r.psi - 7.832_015).abs() < 1e-6);
        assert_eq!(r.term_count, 7); // 2 3 4 5 7 8 9
        assert!(c.chebyshev(0).is_err());
    }

    #[test]
    fn deviation_closed_form_at_two() {
        let c = counter();
        let l = 2f64.ln();
        let expected = (l - 2.0) / (2f64.sqrt() * l * l);
        assert!((c.psi_deviation(2).unwrap() - expected).abs() < 1e-15);
        assert!(c.psi_deviation(1).is_err());
    }

    #[test]
    fn residual_at_ten() {
        let c = counter();
        let psi = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        let l = 10f64.ln();
        let expected = (4.0 - psi / l) * l * l / 10.0;
        assert!((c.pi_residual(10).unwrap() - expected).abs() < 1e-12);
    }
}
