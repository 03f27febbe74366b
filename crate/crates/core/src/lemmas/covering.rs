use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SweepRow, SweepSummary};
use crate::error::{domain, Error, Result};
use crate::ratio::serde_r64;
use crate::sumset::{difference_set, sumset, Bits, IntegerSet};

/// Translates `x_set` of `A - A` that cover `B`, with `mu = |A+B| / |A|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringWitness {
    pub x_set: IntegerSet,
    #[serde(with = "serde_r64")]
    pub mu: Rational64,
}

/// Greedy maximal `X ⊆ B` with the translates `A + x` pairwise disjoint,
/// scanning `B` in ascending order. Maximality gives `B ⊆ A - A + X`, and
/// disjointness gives `|A| |X| <= |A + B|`; both are checked before returning.
pub fn ruzsa_cover(a: &IntegerSet, b: &IntegerSet) -> Result<CoveringWitness> {
    if a.is_empty() || b.is_empty() {
        return domain("ruzsa_cover needs non-empty operands");
    }
    let (alo, ahi) = a.window();
    let bmin = b.min().unwrap();
    let width = (ahi - alo) + (b.max().unwrap() - bmin) + 1;
    let mut a_bits = Bits::zeros((ahi - alo + 1) as usize);
    for x in a.iter() {
        a_bits.set((x - alo) as usize);
    }
    let mut covered = Bits::zeros(width as usize);
    let mut chosen = Vec::new();
    for x in b.iter() {
        let shift = (x - bmin) as usize;
        if !covered.intersects_shifted(&a_bits, shift) {
            covered.or_shifted(&a_bits, shift);
            chosen.push(x);
        }
    }
    let x_set = IntegerSet::new(chosen);
    let a_plus_b = sumset(a, b)?;
    let mu = Rational64::new(a_plus_b.len() as i64, a.len() as i64);
    if (x_set.len() * a.len()) > a_plus_b.len() {
        return Err(Error::Invariant(format!(
            "covering of size {} exceeds |A+B|/|A| = {}/{}",
            x_set.len(),
            a_plus_b.len(),
            a.len()
        )));
    }
    let cover = sumset(&difference_set(a, a)?, &x_set)?;
    if !b.is_subset(&cover) {
        return Err(Error::Invariant("B is not covered by A - A + X".into()));
    }
    Ok(CoveringWitness { x_set, mu })
}

/// Mask form of the greedy for sets inside `{0, ..., 20}`: returns
/// `(X mask, |A+B|, covered)` where `covered` is `B ⊆ A - A + X`.
#[inline]
pub(crate) fn cover_masks(a: u64, b: u64, ground: u32) -> (u64, u32, bool) {
    let mut taken: u64 = 0;
    let mut x_mask: u64 = 0;
    let mut sum: u64 = 0;
    let mut rest = b;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        let tr = a << x;
        sum |= tr;
        if taken & tr == 0 {
            taken |= tr;
            x_mask |= 1 << x;
        }
    }
    // A - A shifted by `ground` so every difference is a non-negative bit.
    let mut diff: u64 = 0;
    let mut rest = a;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        diff |= a << (ground - y);
    }
    let mut reach: u64 = 0;
    let mut rest = x_mask;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        reach |= diff << x;
    }
    let covered = (b << ground) & !reach == 0;
    (x_mask, sum.count_ones(), covered)
}

/// Exhaustive check over all non-empty `A, B ⊆ {0, ..., max}`.
///
/// Rows go to `sink` when given (one per pair, so only for small `max`).
pub fn sweep_covering(max: u32, sink: Option<&mut dyn FnMut(&SweepRow)>) -> Result<SweepSummary> {
    if max > 20 {
        return domain(format!("covering sweep supports max <= 20 (got {max})"));
    }
    let ground = max;
    let full: u64 = (1u64 << (max + 1)) - 1;
    let masks: Vec<u64> = (1..=full).collect();
    let want_rows = sink.is_some();
    let mut summary = SweepSummary::new("covering", format!("non-empty A, B in {{0..{max}}}"));
    let mut sink = sink;
    for block in masks.chunks(64) {
        let parts: Vec<(SweepSummary, Vec<SweepRow>)> = block
            .par_iter()
            .map(|&a| {
                let mut s = SweepSummary::new("covering", String::new());
                let mut rows = Vec::new();
                let a_len = a.count_ones();
                for b in 1..=full {
                    let (x, sum, covered) = cover_masks(a, b, ground);
                    let holds = covered && x.count_ones() * a_len <= sum;
                    s.record(true, holds, || describe_pair(a, b));
                    if want_rows {
                        rows.push(SweepRow {
                            input: describe_pair(a, b),
                            applicable: true,
                            holds,
                            witness: IntegerSet::from_mask(x, 0).to_string(),
                        });
                    }
                }
                (s, rows)
            })
            .collect();
        for (s, rows) in parts {
            summary.absorb(s);
            if let Some(sink) = sink.as_mut() {
                rows.iter().for_each(sink);
            }
        }
    }
    Ok(summary)
}

fn describe_pair(a: u64, b: u64) -> String {
    format!("A={};B={}", IntegerSet::from_mask(a, 0), IntegerSet::from_mask(b, 0))
}
