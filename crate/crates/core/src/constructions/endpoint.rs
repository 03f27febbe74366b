//! Sets `R ∪ {1, lambda k/2 + r}` and the window-avoidance implication behind them.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use super::{ConstructionReport, SumsetScratch};
use crate::arith::binomial_big;
use crate::error::{parameter, Error, Result};
use crate::prob::SeededSampler;
use crate::ratio::{fmt_rational64, serde_r64, to_big};
use crate::sumset::Bits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointParams {
    pub k: i64,
    #[serde(with = "serde_r64")]
    pub lambda: Rational64,
    pub r: i64,
    /// Side length `b` of the window `X`, which has `b^2` points.
    pub b: i64,
}

/// Samples `members` sets `A = R ∪ {1, v}`, `v = lambda k/2 + r`, `R` a uniform
/// `(k-2)`-subset of `[2, v-1]`, and checks: if `(A'+B) ∩ X = ∅` and
/// `|B+B| <= b^2` then `|A+A| <= lambda k`, where `A' = A ∩ [1, lambda k/2 - r]`,
/// `B = A \ A'` and `X = [lambda k - 2r + 1, lambda k - 2r + b^2]`.
///
/// The floor is `(1/lambda^2)((lambda k + 2r)/(lambda k))^k C(lambda k/2, k)`
/// against the family size `C(v-2, k-2)`.
pub fn endpoint_family_fkg(p: &EndpointParams, sampler: &mut SeededSampler, members: u64) -> Result<ConstructionReport> {
    let EndpointParams { k, lambda, r, b } = *p;
    let half_exact = lambda * k / 2;
    if !half_exact.is_integer() {
        return parameter(format!("lambda k/2 = {} is not an integer", fmt_rational64(&half_exact)));
    }
    let half = half_exact.to_integer();
    if k < 3 || r < 1 || b < 1 {
        return parameter(format!("need k >= 3, r >= 1, b >= 1 (k = {k}, r = {r}, b = {b})"));
    }
    if half <= r {
        return parameter(format!("need lambda k/2 > r (lambda k/2 = {half}, r = {r})"));
    }
    if b * b > 2 * r {
        return Err(Error::Precondition(format!("the implication needs b^2 <= 2r (b^2 = {}, 2r = {})", b * b, 2 * r)));
    }
    let v = half + r;
    let lk = 2 * half;
    let split = half - r;
    let x_lo = lk - 2 * r + 1;
    let x_hi = lk - 2 * r + b * b;

    let lam = to_big(&lambda);
    let growth = BigRational::new(BigInt::from(lk + 2 * r), BigInt::from(lk));
    let floor = Pow::pow(&growth, k as usize) * BigRational::from_integer(binomial_big(half, k).into()) / (&lam * &lam);
    let mut report = ConstructionReport::new("endpoint-family", binomial_big(v - 2, k - 2), &floor);
    report.notes.push("the probability claim is stated for lambda >= 2^30 and is not asserted".into());

    // the graph whose independent sets R force (A'+B) ∩ X = ∅
    let in_x = |s: i64| (x_lo..=x_hi).contains(&s);
    let mut edges = 0u64;
    let mut loop_mask = Bits::zeros(v as usize + 1);
    let mut adj: Vec<Vec<i64>> = vec![Vec::new(); v as usize + 1];
    for x in 1..=split {
        for y in split + 1..=v {
            if in_x(x + y) {
                adj[x as usize].push(y);
                edges += 1;
            }
        }
        if in_x(x + v) {
            loop_mask.set(x as usize);
        }
    }
    report.bump("graph_edges", edges);
    report.bump("graph_loops", loop_mask.count_ones() as u64);

    let mut scratch = SumsetScratch::new(v as usize);
    let mut in_r = Bits::zeros(v as usize + 1);
    let mut set = Vec::with_capacity(k as usize);
    for _ in 0..members {
        let rest = sampler.k_subset(2, (v - 2) as usize, (k - 2) as usize);
        set.clear();
        set.push(1);
        set.extend_from_slice(&rest);
        set.push(v);
        report.verified_members += 1;
        if set.len() as i64 != k || set[0] != 1 || set[set.len() - 1] != v {
            report.violation(|| format!("malformed member {set:?}"));
            continue;
        }
        let cut = set.partition_point(|&x| x <= split);
        let (a_prime, b_part) = set.split_at(cut);
        let avoids = !a_prime.iter().any(|&x| b_part.iter().any(|&y| in_x(x + y)));
        let bb = {
            let shifted: Vec<i64> = b_part.iter().map(|&y| y - split).collect();
            scratch.size(&shifted)
        };
        let size = scratch.size(&set) as i64;
        let fits = size <= lk;
        in_r.clear();
        rest.iter().for_each(|&x| in_r.set(x as usize));
        let independent = rest.iter().all(|&x| !loop_mask.get(x as usize) && adj[x as usize].iter().all(|&y| !in_r.get(y as usize)));

        report.bump("window_avoided", avoids as u64);
        report.bump("small_bb", (bb as i64 <= b * b) as u64);
        report.bump("sumset_fits", fits as u64);
        report.bump("graph_independent", independent as u64);
        if independent && !avoids {
            report.bump("independent_but_window_hit", 1);
        }
        if avoids && bb as i64 <= b * b {
            report.bump("antecedent", 1);
            if !fits {
                report.violation(|| format!("{set:?}: window avoided, |B+B| = {bb}, yet |A+A| = {size} > {lk}"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumset::{sumset, IntegerSet};

    fn params(k: i64, lambda: i64, r: i64, b: i64) -> EndpointParams {
        EndpointParams {
            k,
            lambda: Rational64::from_integer(lambda),
            r,
            b,
        }
    }

    #[test]
    fn implication_never_fails() {
        let mut s = SeededSampler::new(2, 0);
        let r = endpoint_family_fkg(&params(200, 8, 2, 2), &mut s, 500).unwrap();
        assert_eq!(r.violation_count, 0);
        assert_eq!(r.verified_members, 500);
        assert!(r.floor_met);
        assert_eq!(r.counters.get("independent_but_window_hit"), None);
    }

    #[test]
    fn antecedent_is_reached_on_small_instances() {
        let mut s = SeededSampler::new(3, 0);
        let r = endpoint_family_fkg(&params(10, 4, 4, 2), &mut s, 2000).unwrap();
        assert!(r.counters["antecedent"] > 0);
        assert_eq!(r.violation_count, 0);
    }

    #[test]
    fn exhaustive_small_family() {
        // every member of a small family, checked against a naive sumset
        let (k, half, r, b) = (4i64, 6i64, 3i64, 2i64);
        let v = half + r;
        let split = half - r;
        let x = (2 * half - 2 * r + 1)..=(2 * half - 2 * r + b * b);
        for mask in 0u32..1 << (v - 2) {
            if mask.count_ones() as i64 != k - 2 {
                continue;
            }
            let mut a = vec![1, v];
            a.extend((0..v - 2).filter(|i| mask >> i & 1 == 1).map(|i| i + 2));
            let a = IntegerSet::new(a);
            let ap = a.filter(|t| t <= split);
            let bp = a.filter(|t| t > split);
            let avoid = ap.iter().all(|s| bp.iter().all(|t| !x.contains(&(s + t))));
            if avoid && sumset(&bp, &bp).unwrap().len() as i64 <= b * b {
                assert!(sumset(&a, &a).unwrap().len() as i64 <= 2 * half, "{a}");
            }
        }
    }

    #[test]
    fn preconditions() {
        let mut s = SeededSampler::new(0, 0);
        assert!(endpoint_family_fkg(&params(200, 8, 2, 3), &mut s, 1).is_err());
        assert!(endpoint_family_fkg(
            &EndpointParams {
                k: 3,
                lambda: Rational64::new(5, 2),
                r: 2,
                b: 1
            },
            &mut s,
            1
        )
        .is_err());
    }
}
