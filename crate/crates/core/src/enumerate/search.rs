//! Depth-first enumeration of `Lambda(n, k, lambda)`.
//!
//! Prefixes are extended in ascending order while their self-sumset is kept
//! as a bit-vector over `{0, ..., 2n}`. Adding `x` to a prefix `P` adds
//! `(P + x) ∪ {2x}`, one shifted OR. A prefix whose sumset already exceeds
//! `lambda*k` is cut: sumsets only grow along a branch.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::sumset::{IntegerSet, LambdaParams};

/// Largest `n` the engine accepts.
pub const MAX_N: i64 = 4096;

const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumOptions {
    /// Rayon worker count; `0` uses the global pool.
    pub workers: usize,
    /// Abort after visiting this many search nodes.
    pub max_nodes: Option<u64>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            workers: 0,
            max_nodes: Some(2_000_000_000),
        }
    }
}

/// A subtree fixed by its first one or two elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Shard {
    first: i64,
    second: Option<i64>,
}

struct Search<'a> {
    n: i64,
    k: usize,
    cap: u32,
    elems: Vec<i64>,
    /// `sums[d]`: sumset of the first `d` elements.
    sums: Vec<Vec<u64>>,
    /// `prefix[d]`: the first `d` elements as a bit-vector over `{0, ..., n}`.
    prefix: Vec<Vec<u64>>,
    nodes: u64,
    counter: &'a AtomicU64,
    limit: u64,
    abort: &'a AtomicBool,
}

#[inline]
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    let n = dst.len();
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let lo = i + ws;
        if lo >= n {
            break;
        }
        dst[lo] |= w << bs;
        if bs != 0 && lo + 1 < n {
            dst[lo + 1] |= w >> (64 - bs);
        }
    }
}

#[inline]
fn set_bit(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

#[inline]
fn popcount(v: &[u64]) -> u32 {
    v.iter().map(|w| w.count_ones()).sum()
}

impl<'a> Search<'a> {
    fn new(params: &LambdaParams, counter: &'a AtomicU64, limit: u64, abort: &'a AtomicBool) -> Self {
        let n = params.n;
        let k = params.k as usize;
        let words = (2 * n as usize + 1).div_ceil(64);
        let pwords = (n as usize + 1).div_ceil(64);
        Search {
            n,
            k,
            cap: params.sumset_cap().clamp(0, u32::MAX as i64) as u32,
            elems: vec![0; k],
            sums: vec![vec![0; words]; k + 1],
            prefix: vec![vec![0; pwords]; k + 1],
            nodes: 0,
            counter,
            limit,
            abort,
        }
    }

    /// Pushes `x` at depth `d`; false when the new sumset is over the cap.
    #[inline]
    fn push(&mut self, d: usize, x: i64) -> bool {
        let (lo, hi) = self.sums.split_at_mut(d + 1);
        let next = &mut hi[0];
        next.copy_from_slice(&lo[d]);
        or_shifted(next, &self.prefix[d], x as usize);
        set_bit(next, 2 * x as usize);
        if popcount(next) > self.cap {
            return false;
        }
        let (lo, hi) = self.prefix.split_at_mut(d + 1);
        hi[0].copy_from_slice(&lo[d]);
        set_bit(&mut hi[0], x as usize);
        self.elems[d] = x;
        true
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(FLUSH_EVERY) {
            let seen = self.counter.fetch_add(FLUSH_EVERY, Ordering::Relaxed) + FLUSH_EVERY;
            if seen > self.limit {
                self.abort.store(true, Ordering::Relaxed);
            }
            return !self.abort.load(Ordering::Relaxed);
        }
        true
    }

    fn dfs(&mut self, d: usize, visit: &mut dyn FnMut(&[i64])) -> bool {
        if d == self.k {
            visit(&self.elems);
            return true;
        }
        let start = if d == 0 { 1 } else { self.elems[d - 1] + 1 };
        let end = self.n - (self.k - d - 1) as i64;
        for x in start..=end {
            if !self.tick() {
                return false;
            }
            if self.push(d, x) && !self.dfs(d + 1, visit) {
                return false;
            }
        }
        true
    }

    fn run(&mut self, shard: Shard, visit: &mut dyn FnMut(&[i64])) -> bool {
        self.sums[0].iter_mut().for_each(|w| *w = 0);
        self.prefix[0].iter_mut().for_each(|w| *w = 0);
        if !self.push(0, shard.first) {
            return true;
        }
        match shard.second {
            None => self.dfs(1, visit),
            Some(s) => !self.push(1, s) || self.dfs(2, visit),
        }
    }

    fn flush(&mut self) {
        self.counter.fetch_add(self.nodes % FLUSH_EVERY, Ordering::Relaxed);
    }
}

fn validate(params: &LambdaParams) -> Result<()> {
    if params.k < 1 || params.k > params.n {
        return domain(format!("need 1 <= k <= n (n={}, k={})", params.n, params.k));
    }
    if params.n > MAX_N {
        return domain(format!("n = {} exceeds the engine limit {MAX_N}", params.n));
    }
    Ok(())
}

fn shards(params: &LambdaParams) -> Vec<Shard> {
    let (n, k) = (params.n, params.k);
    if k == 1 {
        return (1..=n).map(|first| Shard { first, second: None }).collect();
    }
    let mut out = Vec::new();
    for first in 1..=n - k + 1 {
        for second in first + 1..=n - k + 2 {
            out.push(Shard {
                first,
                second: Some(second),
            });
        }
    }
    out
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build a pool of {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Folds every member of `Lambda(n, k, lambda)` into per-shard accumulators.
///
/// Shards are the subtrees below a fixed first pair of elements; the returned
/// accumulators follow shard order, and members arrive in lexicographic
/// order within each shard, so concatenating them gives the global
/// lexicographic order for any worker count.
pub fn fold_lambda<T, I, V>(params: &LambdaParams, opts: &EnumOptions, init: I, visit: V) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, &[i64]) + Sync + Send,
{
    validate(params)?;
    let shards = shards(params);
    let counter = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let limit = opts.max_nodes.unwrap_or(u64::MAX);
    let parts: Vec<(T, u64, bool)> = with_pool(opts.workers, || {
        shards
            .par_iter()
            .map_init(
                || Search::new(params, &counter, limit, &abort),
                |search, &shard| {
                    let mut acc = init();
                    let mut members = 0u64;
                    let done = !abort.load(Ordering::Relaxed)
                        && search.run(shard, &mut |elems| {
                            members += 1;
                            visit(&mut acc, elems)
                        });
                    search.flush();
                    search.nodes = 0;
                    (acc, members, done)
                },
            )
            .collect()
    })?;
    if abort.load(Ordering::Relaxed) || parts.iter().any(|p| !p.2) {
        let done = parts.iter().filter(|p| p.2).count();
        let members: u64 = parts.iter().filter(|p| p.2).map(|p| p.1).sum();
        return Err(Error::Budget {
            what: format!("enumeration of Lambda(n={}, k={}) search nodes", params.n, params.k),
            limit,
            partial: format!(
                "{done} of {} shards completed with {members} members; {} nodes visited",
                parts.len(),
                counter.load(Ordering::Relaxed)
            ),
        });
    }
    Ok(parts.into_iter().map(|p| p.0).collect())
}

/// Every member, in lexicographic order.
pub fn enumerate_lambda(params: &LambdaParams, opts: &EnumOptions) -> Result<Vec<IntegerSet>> {
    let parts = fold_lambda(params, opts, Vec::new, |acc: &mut Vec<IntegerSet>, e| {
        acc.push(IntegerSet::new(e.iter().copied()))
    })?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn count_lambda(params: &LambdaParams, opts: &EnumOptions) -> Result<u64> {
    let parts = fold_lambda(params, opts, || 0u64, |acc, _| *acc += 1)?;
    Ok(parts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;

    use super::*;
    use crate::sumset::sumset;

    fn p(n: i64, k: i64, num: i64, den: i64) -> LambdaParams {
        LambdaParams::new(n, k, Rational64::new(num, den)).unwrap()
    }

    fn naive(params: &LambdaParams) -> Vec<IntegerSet> {
        let n = params.n as u32;
        let mut out: Vec<IntegerSet> = (0u64..1 << n)
            .filter(|m| m.count_ones() as i64 == params.k)
            .map(|m| IntegerSet::from_mask(m, 1))
            .filter(|a| params.admits(sumset(a, a).unwrap().len()))
            .collect();
        out.sort_by(|a, b| a.elements().cmp(b.elements()));
        out
    }

    #[test]
    fn small_examples() {
        let o = EnumOptions::default();
        assert_eq!(count_lambda(&p(6, 3, 2, 1), &o).unwrap(), 20);
        let aps = enumerate_lambda(&p(6, 3, 5, 3), &o).unwrap();
        assert_eq!(aps.len(), 6);
        assert!(aps.iter().all(|a| a.elements()[1] * 2 == a.elements()[0] + a.elements()[2]));
    }

    #[test]
    fn matches_naive_filter_in_order() {
        let o = EnumOptions::default();
        for (n, k, num, den) in [(9, 4, 2, 1), (10, 1, 3, 2), (11, 3, 5, 2), (12, 5, 3, 1), (8, 8, 3, 1)] {
            let params = p(n, k, num, den);
            assert_eq!(enumerate_lambda(&params, &o).unwrap(), naive(&params), "{n} {k}");
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let params = p(14, 5, 3, 1);
        let one = enumerate_lambda(&params, &EnumOptions { workers: 1, max_nodes: None }).unwrap();
        let four = enumerate_lambda(&params, &EnumOptions { workers: 4, max_nodes: None }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn budget_aborts_with_a_partial_report() {
        let opts = EnumOptions {
            workers: 1,
            max_nodes: Some(10_000),
        };
        match count_lambda(&p(40, 8, 3, 1), &opts) {
            Err(Error::Budget { partial, .. }) => assert!(partial.contains("shards completed")),
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn bad_sizes_are_rejected() {
        assert!(count_lambda(&p(MAX_N + 1, 2, 2, 1), &EnumOptions::default()).is_err());
    }
}
