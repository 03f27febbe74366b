use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SweepRow, SweepSummary};
use crate::error::{domain, Result};
use crate::ratio::{fmt_rational64, serde_r64};
use crate::sumset::{sumset, IntegerSet};

/// Two intervals `S1, S2`, `Y = S1 ∪ S2`, `X = (S1+S1) ∪ (S2+S2)`, and the
/// sets `C ⊆ X`, `D ⊆ Y` of one supersaturation instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersatConfig {
    /// Inclusive `(lo, hi)`.
    pub s1: (i64, i64),
    pub s2: (i64, i64),
    #[serde(with = "serde_r64")]
    pub gamma: Rational64,
    pub c_set: IntegerSet,
    pub d_set: IntegerSet,
}

fn interval(s: (i64, i64)) -> IntegerSet {
    IntegerSet::new(s.0..=s.1)
}

pub fn y_set(s1: (i64, i64), s2: (i64, i64)) -> IntegerSet {
    interval(s1).union(&interval(s2))
}

pub fn x_set(s1: (i64, i64), s2: (i64, i64)) -> IntegerSet {
    let (a, b) = (interval(s1), interval(s2));
    sumset(&a, &a)
        .expect("non-empty interval")
        .union(&sumset(&b, &b).expect("non-empty interval"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersatOutcome {
    /// Ordered pairs `(b1, b2) ∈ D × D` with `b1 + b2 ∈ C`.
    pub pair_count: u64,
    /// `|D| >= (1 + 4 gamma)|Y| - |C|/2`.
    pub hypothesis_holds: bool,
    /// `pair_count >= gamma^2 |D|^2`.
    pub conclusion_holds: bool,
}

fn check_gamma(gamma: Rational64) -> Result<()> {
    if !gamma.is_positive() || gamma >= Rational64::new(1, 4) {
        return domain(format!("gamma must lie in (0, 1/4), got {}", fmt_rational64(&gamma)));
    }
    Ok(())
}

/// `2q|D| >= 2(q + 4p)|Y| - q|C|` for `gamma = p/q`.
fn hypothesis(gamma: Rational64, y: usize, c: usize, d: usize) -> bool {
    let (p, q) = (*gamma.numer() as i128, *gamma.denom() as i128);
    2 * q * d as i128 >= 2 * (q + 4 * p) * y as i128 - q * c as i128
}

/// `pairs q^2 >= p^2 |D|^2`.
fn conclusion(gamma: Rational64, pairs: u64, d: usize) -> bool {
    let (p, q) = (*gamma.numer() as i128, *gamma.denom() as i128);
    pairs as i128 * q * q >= p * p * (d as i128) * (d as i128)
}

pub fn supersat_pairs(cfg: &SupersatConfig) -> Result<SupersatOutcome> {
    check_gamma(cfg.gamma)?;
    if cfg.s1.0 > cfg.s1.1 || cfg.s2.0 > cfg.s2.1 {
        return domain("intervals must be non-empty (lo <= hi)");
    }
    let y = y_set(cfg.s1, cfg.s2);
    let x = x_set(cfg.s1, cfg.s2);
    if !cfg.c_set.is_subset(&x) {
        return domain("C is not a subset of X");
    }
    if !cfg.d_set.is_subset(&y) {
        return domain("D is not a subset of Y");
    }
    let d = cfg.d_set.elements();
    let mut pairs = 0u64;
    for &b1 in d {
        for &b2 in d {
            if cfg.c_set.contains(b1 + b2) {
                pairs += 1;
            }
        }
    }
    Ok(SupersatOutcome {
        pair_count: pairs,
        hypothesis_holds: hypothesis(cfg.gamma, y.len(), cfg.c_set.len(), d.len()),
        conclusion_holds: conclusion(cfg.gamma, pairs, d.len()),
    })
}

/// An interval pair up to translation, with its `Y` and `X`.
#[derive(Clone, Debug)]
pub struct IntervalLayout {
    pub s1: (i64, i64),
    pub s2: (i64, i64),
    pub y: Vec<i64>,
    pub x: Vec<i64>,
    pub overlapping: bool,
}

/// Every interval pair with `|Y| <= max_y`, up to translation and swapping.
///
/// `S1 = [0, l1-1]`, `S2 = [p, p+l2-1]`. Once `p > max(2l1-2, l1+l2-2)` no
/// sum of `D` lands in the other interval's part of `X`, so larger gaps
/// repeat the last layout and are not listed.
pub fn interval_layouts(max_y: usize) -> Vec<IntervalLayout> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let m = max_y as i64;
    for l1 in 1..=m {
        for l2 in 1..=m {
            let p_sep = (2 * l1 - 2).max(l1 + l2 - 2) + 1;
            for p in 0..=p_sep {
                let (s1, s2) = ((0, l1 - 1), (p, p + l2 - 1));
                let y = y_set(s1, s2);
                if y.len() > max_y {
                    continue;
                }
                let x = x_set(s1, s2);
                let key = (y.elements().to_vec(), x.elements().to_vec());
                if !seen.insert(key.clone()) {
                    continue;
                }
                out.push(IntervalLayout {
                    s1,
                    s2,
                    y: key.0,
                    x: key.1,
                    overlapping: p < l1,
                });
            }
        }
    }
    out
}

/// Admissible `C` count and, if the conclusion fails, a violating `C` with its pair count.
type WorstCase = (u64, Option<(Vec<i64>, u64)>);

/// For fixed `D`, whether some admissible `C` breaks the conclusion. The pair
/// count is additive over `C`, so the worst `C` of each size takes the
/// smallest representation counts `r_D(s)`, and since the hypothesis only
/// gets easier as `|C|` grows, the smallest admissible size decides.
///
/// Returns `(admissible C count, violating witness)`.
fn worst_case(layout: &IntervalLayout, d: &[i64], gamma: Rational64) -> WorstCase {
    let (p, q) = (*gamma.numer() as i128, *gamma.denom() as i128);
    let (ny, nx) = (layout.y.len() as i128, layout.x.len());
    let x0 = layout.x[0];
    let mut reps = vec![0u64; (layout.x[nx - 1] - x0 + 1) as usize];
    for &b1 in d {
        for &b2 in d {
            let s = b1 + b2 - x0;
            if s >= 0 && (s as usize) < reps.len() {
                reps[s as usize] += 1;
            }
        }
    }
    let mut by_count: Vec<(u64, i64)> = layout.x.iter().map(|&s| (reps[(s - x0) as usize], s)).collect();
    by_count.sort_unstable();
    // |C| >= 2(1 + 4 gamma)|Y| - 2|D| = (2(q + 4p)|Y| - 2q|D|) / q
    let num = 2 * (q + 4 * p) * ny - 2 * q * d.len() as i128;
    let c0 = if num <= 0 { 0 } else { ((num + q - 1) / q) as usize };
    if c0 > nx {
        return (0, None);
    }
    let admissible: u64 = (c0..=nx).map(|c| binom_small(nx, c)).sum();
    let pairs: u64 = by_count[..c0].iter().map(|&(r, _)| r).sum();
    if conclusion(gamma, pairs, d.len()) {
        (admissible, None)
    } else {
        let mut c: Vec<i64> = by_count[..c0].iter().map(|&(_, s)| s).collect();
        c.sort_unstable();
        (admissible, Some((c, pairs)))
    }
}

fn binom_small(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Exhaustive sweep over all interval layouts with `|Y| <= max_y`, all
/// `D ⊆ Y`, all `C ⊆ X` (via [`worst_case`]) and each `gamma`.
///
/// One record per `(layout, gamma, D)`: applicable when some `C` satisfies
/// the hypothesis, violated when some such `C` breaks the conclusion.
pub fn sweep_supersat(
    max_y: usize,
    gammas: &[Rational64],
    mut sink: Option<&mut dyn FnMut(&SweepRow)>,
) -> Result<SweepSummary> {
    if max_y > 16 {
        return domain(format!("supersaturation sweep supports |Y| <= 16 (got {max_y})"));
    }
    for &g in gammas {
        check_gamma(g)?;
    }
    let layouts = interval_layouts(max_y);
    let mut summary = SweepSummary::new(
        "supersat",
        format!(
            "interval pairs with |Y| <= {max_y}, all C ⊆ X, D ⊆ Y, gamma in {{{}}}",
            gammas.iter().map(fmt_rational64).collect::<Vec<_>>().join(", ")
        ),
    );
    let want_rows = sink.is_some();
    for layout in &layouts {
        let expected_x = if layout.overlapping {
            2 * layout.y.len() - 1
        } else {
            2 * layout.y.len() - 2
        };
        summary.bump(if layout.overlapping { "layouts_overlapping" } else { "layouts_disjoint" }, 1);
        if layout.x.len() != expected_x {
            summary.bump("x_size_identity_failures", 1);
        }
        let ny = layout.y.len();
        let results: Vec<Vec<WorstCase>> = (0u32..(1u32 << ny))
            .into_par_iter()
            .map(|mask| {
                let d: Vec<i64> = (0..ny).filter(|i| mask >> i & 1 == 1).map(|i| layout.y[i]).collect();
                gammas.iter().map(|&g| worst_case(layout, &d, g)).collect()
            })
            .collect();
        for (mask, per_gamma) in results.into_iter().enumerate() {
            for (&g, (admissible, witness)) in gammas.iter().zip(per_gamma) {
                let describe = || {
                    let d = (0..ny).filter(|i| mask >> i & 1 == 1).map(|i| layout.y[i]);
                    format!(
                        "S1=[{},{}];S2=[{},{}];gamma={};D={}",
                        layout.s1.0,
                        layout.s1.1,
                        layout.s2.0,
                        layout.s2.1,
                        fmt_rational64(&g),
                        IntegerSet::new(d)
                    )
                };
                summary.bump("cd_pairs_total", 1u64 << layout.x.len());
                summary.bump("cd_pairs_hypothesis", admissible);
                let holds = witness.is_none();
                summary.record(admissible > 0, holds, describe);
                if want_rows {
                    let w = match &witness {
                        Some((c, pairs)) => format!("C={};pairs={pairs}", IntegerSet::new(c.iter().copied())),
                        None => String::new(),
                    };
                    let row = SweepRow {
                        input: describe(),
                        applicable: admissible > 0,
                        holds,
                        witness: w,
                    };
                    if let Some(sink) = sink.as_mut() {
                        sink(&row);
                    }
                }
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn two_block_example() {
        let (s1, s2) = ((1, 5), (11, 15));
        let cfg = SupersatConfig {
            s1,
            s2,
            gamma: r(1, 5),
            c_set: x_set(s1, s2),
            d_set: y_set(s1, s2),
        };
        let out = supersat_pairs(&cfg).unwrap();
        assert!(out.hypothesis_holds);
        assert_eq!(out.pair_count, 50);
        assert!(out.conclusion_holds);
        let empty = SupersatConfig {
            d_set: IntegerSet::empty(),
            ..cfg.clone()
        };
        assert!(!supersat_pairs(&empty).unwrap().hypothesis_holds);
        let bad = SupersatConfig {
            c_set: IntegerSet::new([100]),
            ..cfg
        };
        assert!(supersat_pairs(&bad).is_err());
    }

    #[test]
    fn layouts_cover_both_cases_with_exact_x_sizes() {
        let ls = interval_layouts(6);
        assert!(ls.iter().any(|l| l.overlapping) && ls.iter().any(|l| !l.overlapping));
        for l in &ls {
            let want = if l.overlapping { 2 * l.y.len() - 1 } else { 2 * l.y.len() - 2 };
            assert_eq!(l.x.len(), want, "{:?}", l);
        }
    }

    /// Literal enumeration of every `(C, D)` against the worst-case reduction.
    #[test]
    fn reduction_matches_literal_enumeration() {
        for layout in interval_layouts(4) {
            let nx = layout.x.len();
            let ny = layout.y.len();
            for gamma in [r(1, 8), r(1, 5), r(6, 25)] {
                for dm in 0u32..(1 << ny) {
                    let d: Vec<i64> = (0..ny).filter(|i| dm >> i & 1 == 1).map(|i| layout.y[i]).collect();
                    let mut admissible = 0u64;
                    let mut violated = false;
                    for cm in 0u32..(1 << nx) {
                        let c = IntegerSet::new((0..nx).filter(|i| cm >> i & 1 == 1).map(|i| layout.x[i]));
                        let out = supersat_pairs(&SupersatConfig {
                            s1: layout.s1,
                            s2: layout.s2,
                            gamma,
                            c_set: c,
                            d_set: IntegerSet::new(d.iter().copied()),
                        })
                        .unwrap();
                        if out.hypothesis_holds {
                            admissible += 1;
                            violated |= !out.conclusion_holds;
                        }
                    }
                    let (adm, witness) = worst_case(&layout, &d, gamma);
                    assert_eq!(adm, admissible);
                    assert_eq!(witness.is_some(), violated, "{:?} D={:?}", layout, d);
                }
            }
        }
    }

    #[test]
    fn gamma_domain() {
        assert!(check_gamma(r(1, 5)).is_ok());
        assert!(check_gamma(r(1, 4)).is_err());
        assert!(check_gamma(r(0, 1)).is_err());
    }
}
