use num_rational::Rational64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{parameter, Result};
use crate::ratio::{fmt_rational64, serde_r64};

/// Ambient interval `[n] = {1, ..., n}`, set size `k` and the exact doubling cap `lambda`.
///
/// `floor_mode` lets `lambda*k` and `lambda*k/2` be rounded down when they are
/// not integers; without it such parameters are rejected wherever the
/// integer value is needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LambdaParams {
    pub n: i64,
    pub k: i64,
    #[serde(with = "serde_r64")]
    pub lambda: Rational64,
    #[serde(default)]
    pub floor_mode: bool,
}

impl LambdaParams {
    pub fn new(n: i64, k: i64, lambda: Rational64) -> Result<Self> {
        if n < 1 || k < 1 {
            return parameter(format!("n and k must be positive (n={n}, k={k})"));
        }
        if k > n {
            return parameter(format!("k={k} exceeds n={n}"));
        }
        if !lambda.is_positive() {
            return parameter(format!("lambda must be positive (got {})", fmt_rational64(&lambda)));
        }
        Ok(LambdaParams {
            n,
            k,
            lambda,
            floor_mode: false,
        })
    }

    pub fn with_floor_mode(mut self, on: bool) -> Self {
        self.floor_mode = on;
        self
    }

    /// `lambda * k` as an exact rational.
    pub fn lambda_k_exact(&self) -> Rational64 {
        self.lambda * self.k
    }

    /// Largest integer sumset size admitted by `|A+A| <= lambda*k`.
    pub fn sumset_cap(&self) -> i64 {
        let (p, q) = (*self.lambda.numer() as i128, *self.lambda.denom() as i128);
        (p * self.k as i128).div_euclid(q) as i64
    }

    /// Exact test of `size <= lambda*k` by cross-multiplication.
    pub fn admits(&self, size: usize) -> bool {
        let (p, q) = (*self.lambda.numer() as i128, *self.lambda.denom() as i128);
        size as i128 * q <= p * self.k as i128
    }

    /// `lambda*k` as an integer; floors in floor mode, errors otherwise.
    pub fn lambda_k(&self) -> Result<i64> {
        self.integral(self.lambda_k_exact(), "lambda*k")
    }

    /// `lambda*k/2` as an integer; floors in floor mode, errors otherwise.
    pub fn half_lambda_k(&self) -> Result<i64> {
        self.integral(self.lambda_k_exact() / 2, "lambda*k/2")
    }

    pub fn half_lambda_k_exact(&self) -> Rational64 {
        self.lambda_k_exact() / 2
    }

    fn integral(&self, v: Rational64, what: &str) -> Result<i64> {
        if v.is_integer() {
            Ok(v.to_integer())
        } else if self.floor_mode {
            Ok(v.floor().to_integer())
        } else {
            parameter(format!(
                "{what} = {} is not an integer (n={}, k={}, lambda={}); pass floor mode to round down",
                fmt_rational64(&v),
                self.n,
                self.k,
                fmt_rational64(&self.lambda)
            ))
        }
    }

    /// Labels describing non-default handling, echoed into outputs.
    pub fn flags(&self) -> Vec<String> {
        let mut flags = Vec::new();
        if self.floor_mode {
            if !self.lambda_k_exact().is_integer() {
                flags.push("floor-mode: lambda*k rounded down".to_string());
            }
            if !self.half_lambda_k_exact().is_integer() {
                flags.push("floor-mode: lambda*k/2 rounded down".to_string());
            }
            if flags.is_empty() {
                flags.push("floor-mode: enabled (no rounding needed)".to_string());
            }
        }
        flags
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, k: i64, num: i64, den: i64) -> LambdaParams {
        LambdaParams::new(n, k, Rational64::new(num, den)).unwrap()
    }

    #[test]
    fn threshold_is_exact() {
        let params = p(6, 3, 5, 3);
        assert_eq!(params.sumset_cap(), 5);
        assert!(params.admits(5));
        assert!(!params.admits(6));
        let params = p(10, 3, 3, 2);
        assert_eq!(params.sumset_cap(), 4);
        assert!(!params.admits(5));
    }

    #[test]
    fn odd_lambda_k_needs_floor_mode() {
        let params = p(10, 3, 3, 1);
        assert_eq!(params.lambda_k().unwrap(), 9);
        assert!(params.half_lambda_k().is_err());
        let params = params.with_floor_mode(true);
        assert_eq!(params.half_lambda_k().unwrap(), 4);
        assert_eq!(params.flags(), vec!["floor-mode: lambda*k/2 rounded down"]);
    }

    #[test]
    fn rejects_k_above_n() {
        assert!(LambdaParams::new(3, 4, Rational64::from_integer(2)).is_err());
    }
}
