//! Odd-only sieves of Eratosthenes: a plain one for base primes and a
//! segmented, rayon-parallel one for large ranges.

use rayon::prelude::*;

/// Numbers covered per segment (even, so segments start on even numbers).
const SEGMENT_SPAN: u64 = 1 << 21;

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Largest `r` with `r^m ≤ n`.
pub(crate) fn iroot(n: u64, m: u32) -> u64 {
    if m == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / f64::from(m)).round() as u64;
    let fits = |r: u64| r.checked_pow(m).is_some_and(|p| p <= n);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

/// All primes `≤ limit` with a single odd-only bit of state per number.
pub fn small_primes(limit: u64) -> Vec<u32> {
    assert!(
        limit < u64::from(u32::MAX),
        "small_primes limit must fit u32"
    );
    if limit < 2 {
        return Vec::new();
    }
    let half = (limit as usize + 1) / 2;
    // composite[i] describes 2i + 1
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(half / 8 + 1);
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (2 * i + 1) as u32),
    );
    primes
}

/// Primes in `[lo, hi)` (`lo` even), clipped to `≤ limit`.
fn sieve_segment(lo: u64, hi: u64, limit: u64, base: &[u32]) -> Vec<u64> {
    let len = ((hi - lo) / 2) as usize;
    // composite[i] describes lo + 2i + 1
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        let p = u64::from(p);
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(lo.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut j = ((start - lo - 1) / 2) as usize;
        let step = p as usize;
        while j < len {
            composite[j] = true;
            j += step;
        }
    }
    let mut out = Vec::with_capacity(len / 8 + 1);
    if lo == 0 && limit >= 2 {
        out.push(2);
    }
    for (i, &c) in composite.iter().enumerate() {
        let n = lo + 2 * i as u64 + 1;
        if n > limit {
            break;
        }
        if !c && n >= 3 {
            out.push(n);
        }
    }
    out
}

/// Maps every segment of `[0, limit]` to a value, in ascending segment order.
///
/// `f` receives the segment's lower bound and its primes. Segments are
/// sieved in parallel; the output order never depends on the thread count.
pub fn fold_segments<T, F>(limit: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &[u64]) -> T + Sync,
{
    let base = small_primes(isqrt(limit) + 1);
    let segments = limit / SEGMENT_SPAN + 1;
    (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = s * SEGMENT_SPAN;
            let hi = lo + SEGMENT_SPAN;
            let primes = sieve_segment(lo, hi, limit, &base);
            f(lo, &primes)
        })
        .collect()
}

/// Number of primes `≤ limit` by segmented sieving.
pub fn count_primes_segmented(limit: u64) -> u64 {
    fold_segments(limit, |_, ps| ps.len() as u64)
        .into_iter()
        .sum()
}

/// `π(c)` for every checkpoint `c`, from a single segmented pass.
pub fn prime_counts_at(checkpoints: &[u64]) -> Vec<u64> {
    let Some(&max) = checkpoints.iter().max() else {
        return Vec::new();
    };
    let partial = fold_segments(max, |_, ps| {
        checkpoints
            .iter()
            .map(|&c| ps.partition_point(|&p| p <= c) as u64)
            .collect::<Vec<_>>()
    });
    let mut totals = vec![0u64; checkpoints.len()];
    for seg in partial {
        for (t, c) in totals.iter_mut().zip(seg) {
            *t += c;
        }
    }
    totals
}
