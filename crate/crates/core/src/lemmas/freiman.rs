use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SweepRow, SweepSummary};
use crate::error::{domain, Result};
use crate::sumset::{smallest_progression, sumset, IntegerSet, Progression};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreimanCheck {
    /// `|A+A| <= 3|A| - 4`.
    pub applicable: bool,
    /// `l(A) <= |A+A| - |A| + 1`; vacuously true when not applicable.
    pub holds: bool,
    pub witness: Progression,
    pub sumset_size: usize,
    /// `|A+A| - |A| + 1`.
    pub bound: i64,
}

pub fn freiman_3k4_check(a: &IntegerSet) -> Result<FreimanCheck> {
    if a.len() < 3 {
        return domain(format!("the 3k-4 check needs |A| >= 3 (got {})", a.len()));
    }
    let k = a.len() as i64;
    let s = sumset(a, a)?.len() as i64;
    let witness = smallest_progression(a)?;
    let applicable = s <= 3 * k - 4;
    let bound = s - k + 1;
    Ok(FreimanCheck {
        applicable,
        holds: !applicable || witness.length <= bound,
        witness,
        sumset_size: s as usize,
        bound,
    })
}

/// All `A ⊆ {0, ..., max}` with `min_size <= |A| <= max_size`.
pub fn sweep_freiman(
    max: u32,
    min_size: u32,
    max_size: u32,
    mut sink: Option<&mut dyn FnMut(&SweepRow)>,
) -> Result<SweepSummary> {
    if max > 40 || min_size < 3 {
        return domain("freiman sweep needs max <= 40 and min_size >= 3");
    }
    let full: u64 = (1u64 << (max + 1)) - 1;
    let masks: Vec<u64> = (1..=full)
        .filter(|m| (min_size..=max_size).contains(&m.count_ones()))
        .collect();
    let mut summary = SweepSummary::new(
        "freiman",
        format!("A in {{0..{max}}}, {min_size} <= |A| <= {max_size}"),
    );
    let want_rows = sink.is_some();
    for block in masks.chunks(4096) {
        let parts: Vec<(bool, bool, Option<SweepRow>)> = block
            .par_iter()
            .map(|&m| {
                let a = IntegerSet::from_mask(m, 0);
                let c = freiman_3k4_check(&a).expect("sizes filtered above");
                let row = want_rows.then(|| SweepRow {
                    input: a.to_string(),
                    applicable: c.applicable,
                    holds: c.holds,
                    witness: format!(
                        "{}+{}*[0,{})",
                        c.witness.start, c.witness.step, c.witness.length
                    ),
                });
                (c.applicable, c.holds, row)
            })
            .collect();
        for (&m, (applicable, holds, row)) in block.iter().zip(parts) {
            summary.record(applicable, holds, || IntegerSet::from_mask(m, 0).to_string());
            if let (Some(sink), Some(row)) = (sink.as_mut(), row) {
                sink(&row);
            }
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
        let c = freiman_3k4_check(&set(&[0, 1, 2, 4])).unwrap();
        assert!(c.applicable && c.holds);
        assert_eq!((c.sumset_size, c.witness.length, c.bound), (8, 5, 5));
        for k in 3..10 {
            let c = freiman_3k4_check(&IntegerSet::new(0..k)).unwrap();
            assert!(c.applicable && c.holds);
            assert_eq!(c.witness.length, c.bound);
        }
        let c = freiman_3k4_check(&set(&[0, 1, 5])).unwrap();
        assert!(!c.applicable && c.holds);
        assert!(freiman_3k4_check(&set(&[0, 1])).is_err());
    }

    #[test]
    fn small_sweep() {
        let s = sweep_freiman(9, 3, 5, None).unwrap();
        assert_eq!(s.violations, 0);
        assert!(s.applicable > 0 && s.applicable < s.checked);
    }
}
