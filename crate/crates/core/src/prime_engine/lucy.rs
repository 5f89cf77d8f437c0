//! Lucy_Hedgehog's combinatorial prime count, `O(n^{3/4})` time and
//! `O(n^{1/2})` space.
//!
//! After the run, `π(v)` is known for every `v = ⌊n / i⌋`, so one table
//! answers a whole family of quotient queries.

use super::sieve::isqrt;

#[derive(Debug, Clone)]
pub struct LucyTable {
    n: u64,
    root: u64,
    /// `small[v] = π(v)` for `v ≤ root`.
    small: Vec<u64>,
    /// `large[i] = π(⌊n / i⌋)` for `1 ≤ i ≤ root`.
    large: Vec<u64>,
}

impl LucyTable {
    pub fn new(n: u64) -> Self {
        let root = isqrt(n);
        let r = root as usize;
        let mut small: Vec<u64> = (0..=root).map(|v| v.saturating_sub(1)).collect();
        let mut large: Vec<u64> = (0..=root)
            .map(|i| if i == 0 { 0 } else { n / i - 1 })
            .collect();
        for p in 2..=r {
            if small[p] == small[p - 1] {
                continue;
            }
            let pc = small[p - 1];
            let p64 = p as u64;
            let p2 = p64 * p64;
            let lim = root.min(n / p2) as usize;
            for i in 1..=lim {
                let d = i * p;
                let v = if d <= r {
                    large[d]
                } else {
                    small[(n / d as u64) as usize]
                };
                large[i] -= v - pc;
            }
            let p2 = p2 as usize;
            if p2 <= r {
                for v in (p2..=r).rev() {
                    small[v] -= small[v / p] - pc;
                }
            }
        }
        LucyTable {
            n,
            root,
            small,
            large,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `π(n)`.
    pub fn count(&self) -> u64 {
        self.get(self.n).expect("n is its own quotient")
    }

    /// `π(v)` when `v ≤ √n` or `v = ⌊n / i⌋` for some `i`.
    pub fn get(&self, v: u64) -> Option<u64> {
        if v <= self.root {
            return Some(self.small[v as usize]);
        }
        if v > self.n {
            return None;
        }
        let i = self.n / v;
        (self.n / i == v).then(|| self.large[i as usize])
    }
}
