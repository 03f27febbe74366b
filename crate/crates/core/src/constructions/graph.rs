//! Independent `k`-sets in graphs with loops, against the hypergeometric FKG bound.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::binomial_u128;
use crate::arith::interval::{Interval, Truth, DEFAULT_PRECISION};
use crate::error::{domain, parameter, Result};
use crate::lemmas::SweepSummary;
use crate::prob::{wilson_interval, Method, SeededSampler, TailOptions};
use crate::ratio::{big_from_ints, RationalRepr};

/// A graph on vertices `0..vertex_count` whose loops are single vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub loops: Vec<usize>,
}

impl LoopGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, loops: Vec<usize>) -> Result<Self> {
        let g = LoopGraph {
            vertex_count,
            edges,
            loops,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count;
        if n == 0 {
            return parameter("a graph needs at least one vertex");
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                return parameter(format!("edge ({u}, {v}) has an endpoint outside 0..{n}"));
            }
            if u == v {
                return parameter(format!("edge ({u}, {u}) is a loop; list it under loops"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return parameter(format!("edge ({u}, {v}) appears twice"));
            }
        }
        let mut loops = BTreeSet::new();
        for &v in &self.loops {
            if v >= n {
                return parameter(format!("loop at {v} is outside 0..{n}"));
            }
            if !loops.insert(v) {
                return parameter(format!("loop at {v} appears twice"));
            }
        }
        Ok(())
    }

    fn neighbour_masks(&self) -> (Vec<u64>, u64) {
        let mut adj = vec![0u64; self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        let looped = self.loops.iter().fold(0u64, |m, &v| m | 1 << v);
        (adj, looped)
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let inside: BTreeSet<usize> = set.iter().copied().collect();
        self.loops.iter().all(|v| !inside.contains(v))
            && self.edges.iter().all(|(u, v)| !(inside.contains(u) && inside.contains(v)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FkgReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub loop_count: usize,
    pub k: usize,
    pub method: Method,
    pub independent: u64,
    pub trials: u64,
    pub exact: Option<RationalRepr>,
    pub estimate: f64,
    pub ci: Option<(f64, f64)>,
    /// `exp(-9mk^2/(2n^2) - 3lk/n) - exp(-k/16)` as an enclosure.
    pub bound: String,
    pub holds: Truth,
}

/// Enclosure of the lower bound for `n` vertices, `m` edges, `l` loops and `k`-subsets.
pub fn fkg_bound(n: usize, m: usize, l: usize, k: usize) -> Interval {
    let (n, m, l, k) = (n as i64, m as i64, l as i64, k as i64);
    let first = big_from_ints(-9 * m * k * k, 2 * n * n) - big_from_ints(3 * l * k, n);
    let second = big_from_ints(-k, 16);
    let e1 = Interval::from_rational(&first, DEFAULT_PRECISION).exp();
    let e2 = Interval::from_rational(&second, DEFAULT_PRECISION).exp();
    e1.sub(&e2)
}

fn count_independent(adj: &[u64], looped: u64, n: usize, k: usize) -> u64 {
    fn go(adj: &[u64], n: usize, from: usize, left: usize, blocked: u64) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for v in from..n {
            if n - v < left {
                break;
            }
            if blocked >> v & 1 == 0 {
                total += go(adj, n, v + 1, left - 1, blocked | adj[v]);
            }
        }
        total
    }
    go(adj, n, 0, k, looped)
}

/// Probability that a uniform `k`-subset of the vertices is independent (no
/// edge inside, no looped vertex), exact when the enumeration fits the budget.
pub fn fkg_independent_check(g: &LoopGraph, k: usize, opts: &TailOptions) -> Result<FkgReport> {
    g.validate()?;
    let n = g.vertex_count;
    if k > n / 2 {
        return domain(format!("need k <= floor(n/2) = {} (got k = {k})", n / 2));
    }
    let bound = fkg_bound(n, g.edges.len(), g.loops.len(), k);
    let total = binomial_u128(n as u64, k as u64).unwrap_or(u128::MAX);
    let report = |method, independent, trials, exact: Option<BigRational>, ci: Option<(f64, f64)>, holds| FkgReport {
        vertex_count: n,
        edge_count: g.edges.len(),
        loop_count: g.loops.len(),
        k,
        method,
        independent,
        trials,
        estimate: independent as f64 / trials as f64,
        exact: exact.as_ref().map(RationalRepr::from),
        ci,
        bound: bound.to_string_digits(12),
        holds,
    };
    if n <= 64 && total <= opts.exact_budget as u128 {
        let (adj, looped) = g.neighbour_masks();
        let hits = count_independent(&adj, looped, n, k);
        let p = BigRational::new(BigInt::from(hits), BigInt::from(total));
        let holds = bound.le(&Interval::from_rational(&p, DEFAULT_PRECISION));
        return Ok(report(Method::Exact, hits, total as u64, Some(p), None, holds));
    }
    if opts.mc_trials == 0 {
        return domain("Monte Carlo fallback needs at least one trial");
    }
    let mut sampler = SeededSampler::new(opts.seed, opts.stream_id);
    let mut hits = 0;
    for _ in 0..opts.mc_trials {
        let s: Vec<usize> = sampler.k_subset(0, n, k).into_iter().map(|x| x as usize).collect();
        hits += g.is_independent(&s) as u64;
    }
    let ci = wilson_interval(hits, opts.mc_trials, opts.z);
    // one-sided: only a CI lying wholly below the bound counts against it
    let holds = Truth::from_bool(ci.1 >= bound.midpoint_f64());
    let method = Method::MonteCarlo {
        sampler: sampler.id(),
        z: opts.z,
    };
    Ok(report(method, hits, opts.mc_trials, None, Some(ci), holds))
}

/// Every graph on `1..=max_n` vertices with at most `max_edges` edges and
/// `max_loops` loops (labelled, not up to isomorphism), every `1 <= k <= min(max_k, n/2)`.
pub fn fkg_sweep(max_n: usize, max_edges: usize, max_loops: usize, max_k: usize) -> Result<SweepSummary> {
    if max_n > 10 {
        return parameter("exhaustive graph sweep is limited to 10 vertices");
    }
    let mut summary = SweepSummary::new(
        "fkg-independent",
        format!("graphs on <= {max_n} vertices, <= {max_edges} edges, <= {max_loops} loops, k <= {max_k}"),
    );
    let mut bounds: HashMap<(usize, usize, usize, usize), Interval> = HashMap::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for edges in subsets_up_to(&pairs, max_edges) {
            let mut adj = vec![0u64; n];
            for &(u, v) in &edges {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            let verts: Vec<usize> = (0..n).collect();
            for loops in subsets_up_to(&verts, max_loops) {
                summary.bump("graphs", 1);
                let looped = loops.iter().fold(0u64, |m, &v| m | 1 << v);
                for k in 1..=max_k.min(n / 2) {
                    let total = binomial_u128(n as u64, k as u64).unwrap_or(u128::MAX);
                    let hits = count_independent(&adj, looped, n, k);
                    let key = (n, edges.len(), loops.len(), k);
                    let bound = bounds.entry(key).or_insert_with(|| fkg_bound(n, key.1, key.2, k));
                    let p = BigRational::new(BigInt::from(hits), BigInt::from(total));
                    let truth = bound.le(&Interval::from_rational(&p, DEFAULT_PRECISION));
                    summary.record(true, truth.holds(), || {
                        format!("n={n} edges={edges:?} loops={loops:?} k={k}: {hits}/{total} vs {}", bound.to_string_digits(8))
                    });
                }
            }
        }
    }
    Ok(summary)
}

fn subsets_up_to<T: Copy>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 0usize)];
    for _ in 0..max {
        let mut next = Vec::new();
        for (set, from) in frontier {
            for (i, &item) in items.iter().enumerate().skip(from) {
                let mut s: Vec<T> = set.clone();
                s.push(item);
                out.push(s.clone());
                next.push((s, i + 1));
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn opts() -> TailOptions {
        TailOptions::default()
    }

    #[test]
    fn single_edge_on_four_vertices() {
        let g = LoopGraph::new(4, vec![(0, 1)], vec![]).unwrap();
        let r = fkg_independent_check(&g, 2, &opts()).unwrap();
        assert_eq!(r.exact.unwrap().to_big().unwrap(), big_from_ints(5, 6));
        assert!(r.holds.holds());
        assert!(fkg_bound(4, 1, 0, 2).hi() < &0);
    }

    #[test]
    fn edgeless_graph_is_always_independent() {
        let g = LoopGraph::new(6, vec![], vec![]).unwrap();
        let r = fkg_independent_check(&g, 3, &opts()).unwrap();
        assert_eq!(r.independent, 20);
        assert!(r.holds.holds());
    }

    #[test]
    fn validation_and_preconditions() {
        assert!(LoopGraph::new(3, vec![(0, 3)], vec![]).is_err());
        assert!(LoopGraph::new(3, vec![(0, 1), (1, 0)], vec![]).is_err());
        assert!(LoopGraph::new(3, vec![], vec![2, 2]).is_err());
        let g = LoopGraph::new(4, vec![], vec![]).unwrap();
        assert!(fkg_independent_check(&g, 3, &opts()).is_err());
        let json = serde_json::to_string(&LoopGraph::new(4, vec![(0, 1)], vec![3]).unwrap()).unwrap();
        assert_eq!(json, r#"{"vertex_count":4,"edges":[[0,1]],"loops":[3]}"#);
    }

    #[test]
    fn counts_match_naive_enumeration() {
        let mut s = SeededSampler::new(5, 0);
        for _ in 0..40 {
            let n = 8;
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = s.rng().gen_range(0..=6);
            let edges: Vec<_> = s.k_subset(0, pairs.len(), m).into_iter().map(|i| pairs[i as usize]).collect();
            let l = s.rng().gen_range(0..=2);
            let loops: Vec<usize> = s.k_subset(0, n, l).into_iter().map(|x| x as usize).collect();
            let g = LoopGraph::new(n, edges, loops).unwrap();
            for k in 2..=4 {
                let r = fkg_independent_check(&g, k, &opts()).unwrap();
                let naive = (0u32..1 << n)
                    .filter(|m| m.count_ones() as usize == k)
                    .filter(|m| g.is_independent(&(0..n).filter(|v| m >> v & 1 == 1).collect::<Vec<_>>()))
                    .count() as u64;
                assert_eq!(r.independent, naive);
                assert!(r.holds.holds());
            }
        }
    }

    #[test]
    fn monte_carlo_fallback() {
        let g = LoopGraph::new(8, vec![(0, 1), (2, 3)], vec![4]).unwrap();
        let o = TailOptions {
            exact_budget: 1,
            mc_trials: 2000,
            ..opts()
        };
        let r = fkg_independent_check(&g, 3, &o).unwrap();
        assert!(r.exact.is_none() && r.ci.is_some() && r.holds.holds());
    }

    #[test]
    fn small_sweep() {
        let s = fkg_sweep(5, 3, 1, 2).unwrap();
        assert!(s.all_hold() && s.checked > 0);
    }
}
