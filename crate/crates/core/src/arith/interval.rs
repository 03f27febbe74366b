//! Outward-rounded interval arithmetic on MPFR floats.
//!
//! Every endpoint is computed with directed rounding (lower end towards
//! -inf, upper end towards +inf), so a comparison that the intervals decide is
//! a certified comparison of the underlying reals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

pub const DEFAULT_PRECISION: u32 = 256;

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    Holds,
    Fails,
    /// The enclosures overlap; no claim either way.
    Indeterminate,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::Holds
        } else {
            Truth::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Truth::Holds
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::Holds => "holds",
            Truth::Fails => "fails",
            Truth::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn big_to_rug(i: &BigInt) -> Integer {
    Integer::from_str_radix(&i.to_str_radix(16), 16).expect("hex digits always parse")
}

pub fn rational_to_rug(q: &BigRational) -> Rational {
    Rational::from((big_to_rug(q.numer()), big_to_rug(q.denom())))
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "reversed interval");
        Interval { lo, hi }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    /// Tightest enclosure of a rational.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let r = rational_to_rug(q);
        let (lo, _) = Float::with_val_round(prec, &r, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &r, Round::Up);
        Interval { lo, hi }
    }

    pub fn from_int(i: i64, prec: u32) -> Self {
        let (lo, _) = Float::with_val_round(prec, i, Round::Down);
        let (hi, _) = Float::with_val_round(prec, i, Round::Up);
        Interval { lo, hi }
    }

    pub fn from_biguint(u: &BigUint, prec: u32) -> Self {
        let i = big_to_rug(&BigInt::from(u.clone()));
        let (lo, _) = Float::with_val_round(prec, &i, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &i, Round::Up);
        Interval { lo, hi }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_int(0, prec)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec();
        let (lo, _) = Float::with_val_round(p, &self.lo + &o.lo, Round::Down);
        let (hi, _) = Float::with_val_round(p, &self.hi + &o.hi, Round::Up);
        Interval { lo, hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec();
        let (lo, _) = Float::with_val_round(p, &self.lo - &o.hi, Round::Down);
        let (hi, _) = Float::with_val_round(p, &self.hi - &o.lo, Round::Up);
        Interval { lo, hi }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(self.prec(), -&self.hi),
            hi: Float::with_val(self.prec(), -&self.lo),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec();
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let (d, _) = Float::with_val_round(p, a * b, Round::Down);
            let (u, _) = Float::with_val_round(p, a * b, Round::Up);
            if lo.as_ref().is_none_or(|l| d < *l) {
                lo = Some(d);
            }
            if hi.as_ref().is_none_or(|h| u > *h) {
                hi = Some(u);
            }
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo > 0 || o.hi < 0, "division by an interval containing zero");
        let p = self.prec();
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let (d, _) = Float::with_val_round(p, a / b, Round::Down);
            let (u, _) = Float::with_val_round(p, a / b, Round::Up);
            if lo.as_ref().is_none_or(|l| d < *l) {
                lo = Some(d);
            }
            if hi.as_ref().is_none_or(|h| u > *h) {
                hi = Some(u);
            }
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Natural log; the interval must be strictly positive.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0, "ln of a non-positive interval");
        let p = self.prec();
        let (lo, _) = Float::with_val_round(p, self.lo.ln_ref(), Round::Down);
        let (hi, _) = Float::with_val_round(p, self.hi.ln_ref(), Round::Up);
        Interval { lo, hi }
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        let (lo, _) = Float::with_val_round(p, self.lo.exp_ref(), Round::Down);
        let (hi, _) = Float::with_val_round(p, self.hi.exp_ref(), Round::Up);
        Interval { lo, hi }
    }

    /// `ln Gamma(x)` for `x > 0`.
    pub fn ln_gamma(&self) -> Interval {
        assert!(self.lo > 0, "ln_gamma needs a positive argument");
        let p = self.prec();
        let down = |x: &Float| Float::with_val_round(p, x.ln_gamma_ref(), Round::Down).0;
        let up = |x: &Float| Float::with_val_round(p, x.ln_gamma_ref(), Round::Up).0;
        // Gamma has its minimum on (1.46, 1.47); it is monotone on either side.
        if self.lo >= 1.47 {
            Interval {
                lo: down(&self.lo),
                hi: up(&self.hi),
            }
        } else if self.hi <= 1.46 {
            Interval {
                lo: down(&self.hi),
                hi: up(&self.lo),
            }
        } else {
            let floor = Float::with_val(p, -0.125);
            let a = up(&self.lo);
            let b = up(&self.hi);
            Interval {
                lo: floor,
                hi: if a > b { a } else { b },
            }
        }
    }

    /// Certified `self <= other`.
    pub fn le(&self, other: &Interval) -> Truth {
        if self.hi <= other.lo {
            Truth::Holds
        } else if self.lo > other.hi {
            Truth::Fails
        } else {
            Truth::Indeterminate
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn cmp_zero(&self) -> Option<Ordering> {
        if self.lo > 0 {
            Some(Ordering::Greater)
        } else if self.hi < 0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn midpoint_f64(&self) -> f64 {
        let m = Float::with_val(self.prec(), &self.lo + &self.hi) / 2u32;
        m.to_f64()
    }

    /// Short decimal rendering `[lo, hi]` with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up)
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_digits(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_enclosure_is_tight_and_ordered() {
        let i = Interval::from_rational(&q(1, 3), 128);
        assert!(i.lo() < i.hi());
        let exact = Interval::from_rational(&q(3, 4), 128);
        assert_eq!(exact.lo(), exact.hi());
    }

    #[test]
    fn ln_and_exp_bracket_known_values() {
        let two = Interval::from_int(2, 256);
        let ln2 = two.ln();
        assert!(ln2.lo().to_f64() <= std::f64::consts::LN_2);
        assert!(ln2.hi().to_f64() >= std::f64::consts::LN_2 - 1e-15);
        let back = ln2.exp();
        assert!(back.lo() <= &2 && back.hi() >= &2);
    }

    #[test]
    fn ln_gamma_of_integers_matches_factorials() {
        // ln Gamma(6) = ln 120
        let g = Interval::from_int(6, 256).ln_gamma();
        let ln120 = Interval::from_int(120, 256).ln();
        assert!(g.le(&ln120) != Truth::Fails && ln120.le(&g) != Truth::Fails);
        let around_min = Interval::new(Float::with_val(64, 1.4), Float::with_val(64, 1.5)).ln_gamma();
        assert!(around_min.lo() <= &-0.1214 && around_min.hi() >= &-0.1214);
    }

    #[test]
    fn comparison_is_three_valued() {
        let a = Interval::from_rational(&q(1, 3), 64);
        let b = Interval::from_rational(&q(1, 2), 64);
        assert_eq!(a.le(&b), Truth::Holds);
        assert_eq!(b.le(&a), Truth::Fails);
        assert_eq!(a.le(&a), Truth::Indeterminate);
    }
}
