//! The numeric constants derived from `(lambda, epsilon)`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::error::{domain, Result};
use crate::ratio::{fmt_big, fmt_rational64, to_big};

/// Error parameter. `ExpNeg(t)` stands for `e^-t`, which keeps `log(1/epsilon)`
/// exact for the common choice `epsilon = 1/e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Epsilon {
    Rational(Rational64),
    ExpNeg(Rational64),
}

impl Epsilon {
    pub fn validate(&self) -> Result<()> {
        match self {
            Epsilon::Rational(e) if e.is_positive() && *e < Rational64::one() => Ok(()),
            Epsilon::ExpNeg(t) if t.is_positive() => Ok(()),
            Epsilon::Rational(e) => domain(format!("epsilon must lie in (0,1), got {}", fmt_rational64(e))),
            Epsilon::ExpNeg(t) => domain(format!("epsilon = e^-t needs t > 0, got t = {}", fmt_rational64(t))),
        }
    }

    /// `log(1/epsilon)` when it is rational.
    pub fn log_inverse_exact(&self) -> Option<BigRational> {
        match self {
            Epsilon::ExpNeg(t) => Some(to_big(t)),
            Epsilon::Rational(_) => None,
        }
    }

    pub fn log_inverse(&self, prec: u32) -> Interval {
        match self {
            Epsilon::ExpNeg(t) => Interval::from_rational(&to_big(t), prec),
            Epsilon::Rational(e) => Interval::from_rational(&to_big(&e.recip()), prec).ln(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Epsilon::Rational(e) => fmt_rational64(e),
            Epsilon::ExpNeg(t) => format!("e^-({})", fmt_rational64(t)),
        }
    }
}

/// `c(lambda, epsilon) = 2^20 lambda^2 log(1/epsilon) + 2^560 lambda^32`, kept
/// as its exact polynomial pieces plus the log term.
#[derive(Clone, Debug)]
pub struct CValue {
    /// `2^560 lambda^32`, exact.
    pub giant: BigRational,
    /// `2^20 lambda^2`, exact.
    pub log_coefficient: BigRational,
    /// `log(1/epsilon)` when rational.
    pub log_exact: Option<BigRational>,
    /// Enclosure of `log(1/epsilon)`.
    pub log_interval: Interval,
}

impl CValue {
    /// The whole constant when `log(1/epsilon)` is rational.
    pub fn exact(&self) -> Option<BigRational> {
        self.log_exact
            .as_ref()
            .map(|l| &self.giant + &self.log_coefficient * l)
    }

    pub fn interval(&self) -> Interval {
        let p = self.log_interval.prec();
        Interval::from_rational(&self.giant, p)
            .add(&Interval::from_rational(&self.log_coefficient, p).mul(&self.log_interval))
    }
}

#[derive(Clone, Debug)]
pub struct ConstantBundle {
    pub lambda: Rational64,
    pub epsilon: Epsilon,
    /// `2^-32 lambda^-3`
    pub delta: BigRational,
    /// `2^10 lambda^3`
    pub f_lambda: BigRational,
    /// `2^-7 lambda^-1`, equal to `2^25 lambda^2 delta`.
    pub alpha: BigRational,
    pub c_value: CValue,
}

fn pow2(e: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << e)
}

pub fn delta(lambda: &BigRational) -> BigRational {
    (pow2(32) * lambda.pow(3)).recip()
}

pub fn f_lambda(lambda: &BigRational) -> BigRational {
    pow2(10) * lambda.pow(3)
}

pub fn alpha(lambda: &BigRational) -> BigRational {
    (pow2(7) * lambda).recip()
}

/// All constants for `lambda > 2`, `0 < epsilon < 1`; `prec` bits for the log term.
pub fn constants(lambda: Rational64, epsilon: Epsilon, prec: u32) -> Result<ConstantBundle> {
    if lambda <= Rational64::from_integer(2) {
        return domain(format!("lambda must exceed 2, got {}", fmt_rational64(&lambda)));
    }
    epsilon.validate()?;
    let l = to_big(&lambda);
    let c_value = CValue {
        giant: pow2(560) * l.pow(32),
        log_coefficient: pow2(20) * l.pow(2),
        log_exact: epsilon.log_inverse_exact(),
        log_interval: epsilon.log_inverse(prec),
    };
    Ok(ConstantBundle {
        delta: delta(&l),
        f_lambda: f_lambda(&l),
        alpha: alpha(&l),
        lambda,
        epsilon,
        c_value,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantBundleRepr {
    pub lambda: String,
    pub epsilon: String,
    pub delta: String,
    pub f_lambda: String,
    pub alpha: String,
    pub c_giant: String,
    pub c_log_coefficient: String,
    pub c_exact: Option<String>,
    pub c_interval: String,
}

impl ConstantBundle {
    pub fn repr(&self) -> ConstantBundleRepr {
        ConstantBundleRepr {
            lambda: fmt_rational64(&self.lambda),
            epsilon: self.epsilon.describe(),
            delta: fmt_big(&self.delta),
            f_lambda: fmt_big(&self.f_lambda),
            alpha: fmt_big(&self.alpha),
            c_giant: fmt_big(&self.c_value.giant),
            c_log_coefficient: fmt_big(&self.c_value.log_coefficient),
            c_exact: self.c_value.exact().map(|c| fmt_big(&c)),
            c_interval: self.c_value.interval().to_string_digits(30),
        }
    }
}
