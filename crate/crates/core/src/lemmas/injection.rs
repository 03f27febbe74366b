use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{SweepRow, SweepSummary};
use crate::error::{domain, Error, Result};
use crate::sumset::{difference_set, sumset, IntegerSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionEntry {
    pub d: i64,
    pub c: i64,
    pub image: (i64, i64),
}

/// The injection `(A - A) x A -> (A + A)^2`, `(d, c) -> (x + c, y + c)` where
/// `(x, y)` is the lexicographically least pair of `A` with `x - y = d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionTable {
    pub entries: Vec<InjectionEntry>,
    pub difference_size: usize,
    pub set_size: usize,
    pub sumset_size: usize,
}

impl InjectionTable {
    /// `|A - A| |A| <= |A + A|^2`.
    pub fn bound_holds(&self) -> bool {
        self.difference_size * self.set_size <= self.sumset_size * self.sumset_size
    }
}

pub fn pr_injection(a: &IntegerSet) -> Result<InjectionTable> {
    if a.is_empty() {
        return domain("pr_injection needs a non-empty set");
    }
    let diffs = difference_set(a, a)?;
    let sums = sumset(a, a)?;
    let mut entries = Vec::with_capacity(diffs.len() * a.len());
    for d in diffs.iter() {
        let (x, y) = a
            .iter()
            .find_map(|x| a.contains(x - d).then_some((x, x - d)))
            .ok_or_else(|| Error::Invariant(format!("difference {d} has no representation")))?;
        for c in a.iter() {
            entries.push(InjectionEntry {
                d,
                c,
                image: (x + c, y + c),
            });
        }
    }
    let mut seen = HashSet::with_capacity(entries.len());
    for e in &entries {
        if !sums.contains(e.image.0) || !sums.contains(e.image.1) {
            return Err(Error::Invariant(format!("image {:?} leaves A+A", e.image)));
        }
        if !seen.insert(e.image) {
            return Err(Error::Invariant(format!("image {:?} is hit twice", e.image)));
        }
    }
    Ok(InjectionTable {
        entries,
        difference_size: diffs.len(),
        set_size: a.len(),
        sumset_size: sums.len(),
    })
}

/// Every non-empty `A ⊆ {0, ..., max}`.
pub fn sweep_injection(max: u32, mut sink: Option<&mut dyn FnMut(&SweepRow)>) -> Result<SweepSummary> {
    if max > 30 {
        return domain(format!("injection sweep supports max <= 30 (got {max})"));
    }
    let mut summary = SweepSummary::new("injection", format!("non-empty A in {{0..{max}}}"));
    let full: u64 = (1u64 << (max + 1)) - 1;
    for mask in 1..=full {
        let a = IntegerSet::from_mask(mask, 0);
        let (holds, witness) = match pr_injection(&a) {
            Ok(t) => (
                t.bound_holds() && t.entries.len() == t.difference_size * t.set_size,
                format!("{}*{}<={}^2", t.difference_size, t.set_size, t.sumset_size),
            ),
            Err(e) => (false, e.to_string()),
        };
        summary.record(true, holds, || a.to_string());
        if let Some(sink) = sink.as_mut() {
            sink(&SweepRow {
                input: a.to_string(),
                applicable: true,
                holds,
                witness,
            });
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet {
        IntegerSet::new(v.iter().copied())
    }

    #[test]
    fn examples() {
        let t = pr_injection(&set(&[0, 1])).unwrap();
        assert_eq!(t.entries.len(), 6);
        assert_eq!(t.sumset_size, 3);
        assert!(t.bound_holds());
        let t = pr_injection(&set(&[5])).unwrap();
        assert_eq!(t.entries, vec![InjectionEntry { d: 0, c: 5, image: (10, 10) }]);
        let t = pr_injection(&set(&[0, 1, 3])).unwrap();
        assert_eq!((t.difference_size, t.set_size, t.sumset_size), (7, 3, 6));
    }

    #[test]
    fn lexicographic_choice() {
        let t = pr_injection(&set(&[0, 2, 4])).unwrap();
        let e = t.entries.iter().find(|e| e.d == 2 && e.c == 0).unwrap();
        assert_eq!(e.image, (2, 0));
    }
}
