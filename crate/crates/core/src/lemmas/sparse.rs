use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::serde_r64;
use crate::sumset::{IntegerSet, LambdaParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseDiagnostics {
    /// `A' = a ∩ [lambda*k/2]`.
    pub a_prime: IntegerSet,
    /// `B = a \ A'`.
    pub b_set: IntegerSet,
    pub y_set: IntegerSet,
    /// `m(B) = r(B) / (8 lambda)`.
    #[serde(with = "serde_r64")]
    pub m_b: Rational64,
}

/// `Y = {x <= 0 : x - min B ∈ A'} ∪ {x > lambda*k : x - max B ∈ A'}`.
pub fn sparse_diagnostics(a: &IntegerSet, params: &LambdaParams) -> Result<SparseDiagnostics> {
    let half = params.half_lambda_k()?;
    let top = params.lambda_k()?;
    let a_prime = a.filter(|x| (1..=half).contains(&x));
    let b_set = a.difference(&a_prime);
    let (Some(lo), Some(hi)) = (b_set.min(), b_set.max()) else {
        return Err(Error::Precondition("B = a \\ [lambda*k/2] is empty".into()));
    };
    if lo > 0 || hi <= half {
        return Err(Error::Precondition(format!(
            "B = {b_set} must have min(B) <= 0 and max(B) > {half}"
        )));
    }
    let left = a_prime.iter().map(|x| x + lo).filter(|&y| y <= 0);
    let right = a_prime.iter().map(|x| x + hi).filter(|&y| y > top);
    let y_set = IntegerSet::new(left.chain(right));
    let r_b = Rational64::from_integer(hi - lo) - params.half_lambda_k_exact();
    let m_b = r_b / (params.lambda * 8);
    Ok(SparseDiagnostics {
        a_prime,
        b_set,
        y_set,
        m_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumset::sumset;

    fn params(k: i64, lambda: i64) -> LambdaParams {
        LambdaParams::new(64, k, Rational64::from_integer(lambda)).unwrap()
    }

    #[test]
    fn worked_example() {
        let d = sparse_diagnostics(&IntegerSet::new([0, 1, 5, 8]), &params(4, 3)).unwrap();
        assert_eq!(d.a_prime, IntegerSet::new([1, 5]));
        assert_eq!(d.b_set, IntegerSet::new([0, 8]));
        assert_eq!(d.y_set, IntegerSet::new([13]));
        assert_eq!(d.m_b, Rational64::new(1, 12));
    }

    #[test]
    fn left_part_empty_when_min_is_zero() {
        let p = params(4, 3);
        let d = sparse_diagnostics(&IntegerSet::new([0, 2, 3, 5, 7]), &p).unwrap();
        assert!(d.y_set.iter().all(|y| y > 12));
    }

    #[test]
    fn one_sided_or_empty_b_is_rejected() {
        let p = params(4, 3);
        for a in [vec![1, 2, 3], vec![1, 2, 9], vec![-1, 2, 3]] {
            assert!(matches!(
                sparse_diagnostics(&IntegerSet::new(a), &p),
                Err(Error::Precondition(_))
            ));
        }
    }

    /// Brute force over small sets with a two-sided `B`.
    #[test]
    fn y_avoids_the_window_and_sits_in_the_sumset() {
        let p = params(4, 3);
        for mask in 1u64..(1 << 12) {
            let a = IntegerSet::from_mask(mask, -3);
            let Ok(d) = sparse_diagnostics(&a, &p) else { continue };
            let aa = sumset(&a, &a).unwrap();
            assert!(d.y_set.iter().all(|y| !(1..=12).contains(&y)));
            assert!(d.y_set.is_subset(&aa));
            if !d.a_prime.is_empty() {
                assert!(d.y_set.is_subset(&sumset(&d.a_prime, &d.b_set).unwrap()));
                assert!(d.y_set.is_disjoint(&sumset(&d.a_prime, &d.a_prime).unwrap()));
            }
        }
    }
}
