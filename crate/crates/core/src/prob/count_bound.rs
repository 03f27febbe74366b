//! Log-scale evaluation of the count bound `e^{2 delta m} ((lambda-2)/lambda)^{m/2} binom(lambda k/2, k-b)`.

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::binomial_big;
use crate::arith::constants::delta;
use crate::arith::interval::{Interval, Truth, DEFAULT_PRECISION};
use crate::error::{domain, parameter, Result};
use crate::ratio::{abbrev_int, big_from_ints, serde_r64, to_big};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountBoundReport {
    #[serde(with = "serde_r64")]
    pub lambda: Rational64,
    pub k: u64,
    pub m: u64,
    pub b: u64,
    pub binomial: String,
    /// Natural log of the bound, `None` when the binomial vanishes.
    pub log_bound: Option<String>,
    pub log_weak_bound: Option<String>,
    /// `2 delta m + (m/2) ln((lambda-2)/lambda) <= (m/2) ln((lambda-1)/lambda)`.
    pub weak_dominates: Truth,
}

/// Evaluates the bound and its weak form `((lambda-1)/lambda)^{m/2} binom(...)`.
pub fn count_bound(lambda: Rational64, k: u64, m: u64, b: u64) -> Result<CountBoundReport> {
    if lambda <= Rational64::from_integer(2) {
        return domain(format!("lambda must exceed 2 (got {lambda})"));
    }
    let len = lambda * Rational64::from_integer(k as i64) / 2;
    if !len.is_integer() {
        return parameter(format!("lambda k / 2 = {len} is not an integer"));
    }
    let prec = DEFAULT_PRECISION;
    let lam = to_big(&lambda);
    let half_m = Interval::from_rational(&big_from_ints(m, 2u64), prec);
    let ratio = |shift: i64| {
        let r = (&lam - BigRational::from_integer(shift.into())) / &lam;
        half_m.mul(&Interval::from_rational(&r, prec).ln())
    };
    let two_delta_m = delta(&lam) * BigRational::from_integer((2 * m).into());
    let strong = Interval::from_rational(&two_delta_m, prec).add(&ratio(2));
    let weak = ratio(1);
    let weak_dominates = if m == 0 { Truth::Holds } else { strong.le(&weak) };

    let binom = if b > k {
        num_bigint::BigUint::zero()
    } else {
        binomial_big(*len.numer(), (k - b) as i64)
    };
    let (log_bound, log_weak_bound) = if binom.is_zero() {
        (None, None)
    } else {
        let lb = if binom.is_one() {
            Interval::zero(prec)
        } else {
            Interval::from_biguint(&binom, prec).ln()
        };
        (
            Some(strong.add(&lb).to_string_digits(15)),
            Some(weak.add(&lb).to_string_digits(15)),
        )
    };
    Ok(CountBoundReport {
        lambda,
        k,
        m,
        b,
        binomial: abbrev_int(&binom.into()),
        log_bound,
        log_weak_bound,
        weak_dominates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_form_dominates() {
        let r = count_bound(Rational64::from_integer(3), 4, 1, 0).unwrap();
        assert!(r.weak_dominates.holds());
        let r = count_bound(Rational64::from_integer(4), 10, 1_000_000, 0).unwrap();
        assert!(r.weak_dominates.holds());
        assert_eq!(r.binomial, "184756");
    }

    #[test]
    fn zero_m_is_the_binomial() {
        let r = count_bound(Rational64::from_integer(4), 6, 0, 2).unwrap();
        assert_eq!(r.binomial, "495");
        let lb = r.log_bound.unwrap();
        assert_eq!(lb, r.log_weak_bound.unwrap());
        assert!(lb.starts_with("[6.20455776256869"), "{lb}");
    }

    #[test]
    fn rejects_small_lambda_and_fractional_length() {
        assert!(count_bound(Rational64::from_integer(2), 4, 1, 0).is_err());
        assert!(count_bound(Rational64::new(5, 2), 3, 1, 0).is_err());
        assert!(count_bound(Rational64::new(5, 2), 4, 1, 0).is_ok());
    }
}
