//! Exhaustive folds over subsets of `[n]` with the sumset kept incrementally.

use rayon::prelude::*;

use crate::arith::binomial_u128;
use crate::error::{domain, Error, Result};
use crate::sumset::Bits;

pub const DEFAULT_EXACT_BUDGET: u64 = 10_000_000;

/// What the tail checks need from one subset `S ⊆ [n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetProfile {
    pub size: usize,
    /// `|{2, ..., 2n} \ (S+S)|`.
    pub missing: usize,
    /// Largest `M` with `{M+1, ..., 2n-M+1} ⊄ S+S`, or `0` when no such `M >= 1`.
    pub middle_depth: usize,
}

fn profile(n: usize, size: usize, sums: &Bits) -> SubsetProfile {
    let mut missing = 0;
    let mut depth = 0;
    for x in 2..=2 * n {
        if !sums.get(x) {
            missing += 1;
            depth = depth.max((x - 1).min(2 * n + 1 - x));
        }
    }
    SubsetProfile {
        size,
        missing,
        middle_depth: depth,
    }
}

struct Walker {
    n: usize,
    k: Option<usize>,
    sums: Vec<Bits>,
    prefix: Vec<Bits>,
}

impl Walker {
    fn new(n: usize, k: Option<usize>) -> Self {
        let depth = k.unwrap_or(n) + 1;
        Walker {
            n,
            k,
            sums: vec![Bits::zeros(2 * n + 1); depth],
            prefix: vec![Bits::zeros(n + 1); depth],
        }
    }

    fn push(&mut self, d: usize, x: usize) {
        let (lo, hi) = self.sums.split_at_mut(d + 1);
        hi[0].clone_from(&lo[d]);
        hi[0].or_shifted(&self.prefix[d], x);
        hi[0].set(2 * x);
        let (lo, hi) = self.prefix.split_at_mut(d + 1);
        hi[0].clone_from(&lo[d]);
        hi[0].set(x);
    }

    fn walk(&mut self, d: usize, last: usize, visit: &mut dyn FnMut(SubsetProfile)) {
        match self.k {
            Some(k) if d == k => {
                visit(profile(self.n, d, &self.sums[d]));
                return;
            }
            None => visit(profile(self.n, d, &self.sums[d])),
            _ => {}
        }
        let end = match self.k {
            Some(k) => self.n + 1 - (k - d),
            None => self.n,
        };
        for x in last + 1..=end {
            self.push(d, x);
            self.walk(d + 1, x, visit);
        }
    }

    fn run_from(&mut self, first: usize, visit: &mut dyn FnMut(SubsetProfile)) {
        self.sums[0].clear();
        self.prefix[0].clear();
        self.push(0, first);
        self.walk(1, first, visit);
    }
}

/// Folds over all `k`-subsets of `[n]` (or all subsets when `k` is `None`),
/// sharded by the least element; the empty set is visited first in the
/// all-subsets mode.
pub fn fold_subsets<T, I, V, M>(n: usize, k: Option<usize>, budget: u64, init: I, visit: V, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, SubsetProfile) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    if n == 0 || n > 4096 {
        return domain(format!("exact enumeration needs 1 <= n <= 4096 (got {n})"));
    }
    let count: u128 = match k {
        Some(k) if k > n => return domain(format!("k = {k} exceeds n = {n}")),
        Some(k) => binomial_u128(n as u64, k as u64).unwrap_or(u128::MAX),
        None if n >= 127 => u128::MAX,
        None => 1u128 << n,
    };
    if count > budget as u128 {
        return Err(Error::Budget {
            what: format!("exact enumeration over subsets of [{n}]"),
            limit: budget,
            partial: format!("{count} subsets needed; use the Monte Carlo estimator instead"),
        });
    }
    let mut acc = init();
    if k.is_none() || k == Some(0) {
        visit(&mut acc, profile(n, 0, &Bits::zeros(2 * n + 1)));
        if k == Some(0) {
            return Ok(acc);
        }
    }
    let last_first = match k {
        Some(k) => n + 1 - k,
        None => n,
    };
    let parts: Vec<T> = (1..=last_first)
        .into_par_iter()
        .map_init(
            || Walker::new(n, k),
            |w, first| {
                let mut part = init();
                w.run_from(first, &mut |p| visit(&mut part, p));
                part
            },
        )
        .collect();
    Ok(parts.into_iter().fold(acc, &merge))
}

/// `hist[j]` = number of `k`-subsets with exactly `j` missing sums.
pub fn missing_histogram(n: usize, k: usize, budget: u64) -> Result<Vec<u64>> {
    let len = 2 * n;
    fold_subsets(
        n,
        Some(k),
        budget,
        || vec![0u64; len],
        |h, p| h[p.missing] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// `hist[d]` = number of `k`-subsets with middle depth `d`.
pub fn middle_depth_histogram(n: usize, k: usize, budget: u64) -> Result<Vec<u64>> {
    let len = n + 1;
    fold_subsets(
        n,
        Some(k),
        budget,
        || vec![0u64; len],
        |h, p| h[p.middle_depth] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// `hist[size][j]` over all `2^n` subsets.
pub fn missing_by_size(n: usize, budget: u64) -> Result<Vec<Vec<u64>>> {
    let len = 2 * n;
    fold_subsets(
        n,
        None,
        budget,
        || vec![vec![0u64; len]; n + 1],
        |h, p| h[p.size][p.missing] += 1,
        |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                ra.iter_mut().zip(rb).for_each(|(x, y)| *x += y);
            }
            a
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumset::{sumset, IntegerSet};

    fn naive_profile(n: usize, s: &IntegerSet) -> (usize, usize) {
        let ss = if s.is_empty() { IntegerSet::empty() } else { sumset(s, s).unwrap() };
        let missing: Vec<i64> = (2..=2 * n as i64).filter(|&x| !ss.contains(x)).collect();
        let depth = missing.iter().map(|&x| (x - 1).min(2 * n as i64 + 1 - x)).max().unwrap_or(0);
        (missing.len(), depth as usize)
    }

    #[test]
    fn histograms_match_naive_enumeration() {
        let n = 8;
        for k in 1..=n {
            let h = missing_histogram(n, k, DEFAULT_EXACT_BUDGET).unwrap();
            let d = middle_depth_histogram(n, k, DEFAULT_EXACT_BUDGET).unwrap();
            let mut want_h = vec![0u64; 2 * n];
            let mut want_d = vec![0u64; n + 1];
            for m in 0u64..1 << n {
                if m.count_ones() as usize == k {
                    let (miss, depth) = naive_profile(n, &IntegerSet::from_mask(m, 1));
                    want_h[miss] += 1;
                    want_d[depth] += 1;
                }
            }
            assert_eq!(h, want_h, "k={k}");
            assert_eq!(d, want_d, "k={k}");
        }
        let all = missing_by_size(n, DEFAULT_EXACT_BUDGET).unwrap();
        assert_eq!(all[0][2 * n - 1], 1);
        assert_eq!(all.iter().flatten().sum::<u64>(), 1 << n);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(missing_histogram(40, 20, 1000), Err(Error::Budget { .. })));
    }
}
