//! Certified comparison of products of binomials, rational powers and
//! exponentials.
//!
//! `compare(lhs, rhs)` decides `lhs <= rhs`. When every binomial is integral
//! and small and the exponent denominators have a small lcm `Q`, both sides are
//! raised to the `Q`-th power and compared as exact rationals; any `e^q`
//! factors are then bracketed by rational Taylor bounds. Otherwise the
//! comparison runs on outward-rounded log intervals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::binomial::binomial_big;
use super::interval::{Interval, Truth};
use crate::error::{domain, Result};
use crate::ratio::{abbrev_big, fmt_big};

/// Largest binomial top evaluated exactly.
const EXACT_BINOM_TOP: i64 = 20_000;
/// Largest lcm of exponent denominators cleared in exact mode.
const EXACT_MAX_ROOT: i64 = 64;
/// Rough bit budget for the cleared powers.
const EXACT_BIT_BUDGET: u64 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictMode {
    Exact,
    Interval,
}

impl fmt::Display for VerdictMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictMode::Exact => "exact",
            VerdictMode::Interval => "interval",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// Generalised binomial `Gamma(top+1) / (Gamma(bottom+1) Gamma(top-bottom+1))`.
    Binom { top: BigRational, bottom: BigRational },
    /// `base^exp` with `base >= 0`.
    Pow { base: BigRational, exp: BigRational },
    /// `e^q`.
    Exp(BigRational),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Binom { top, bottom } => write!(f, "C({},{})", abbrev_big(top), abbrev_big(bottom)),
            Factor::Pow { base, exp } if exp.is_one() => write!(f, "{}", abbrev_big(base)),
            Factor::Pow { base, exp } => write!(f, "({})^({})", abbrev_big(base), abbrev_big(exp)),
            Factor::Exp(q) => write!(f, "e^({})", abbrev_big(q)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Product(pub Vec<Factor>);

impl Product {
    pub fn one() -> Self {
        Product(Vec::new())
    }

    pub fn binom(mut self, top: BigRational, bottom: BigRational) -> Self {
        self.0.push(Factor::Binom { top, bottom });
        self
    }

    pub fn binom_int(self, top: i64, bottom: i64) -> Self {
        self.binom(BigRational::from_integer(top.into()), BigRational::from_integer(bottom.into()))
    }

    pub fn pow(mut self, base: BigRational, exp: BigRational) -> Self {
        self.0.push(Factor::Pow { base, exp });
        self
    }

    pub fn scalar(self, c: BigRational) -> Self {
        self.pow(c, BigRational::one())
    }

    pub fn exp(mut self, q: BigRational) -> Self {
        self.0.push(Factor::Exp(q));
        self
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, factor) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CompareOptions {
    pub precision: u32,
    /// When false, always use the interval path.
    pub allow_exact: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            precision: super::interval::DEFAULT_PRECISION,
            allow_exact: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub truth: Truth,
    pub mode: VerdictMode,
    pub lhs: String,
    pub rhs: String,
}

enum Simplified {
    One,
    Zero,
    Keep(Factor),
}

fn simplify(f: &Factor) -> Result<Simplified> {
    match f {
        Factor::Binom { top, bottom } => {
            if bottom.is_integer() {
                if bottom.is_negative() {
                    return Ok(Simplified::Zero);
                }
                if bottom.is_zero() {
                    return Ok(Simplified::One);
                }
                if top.is_integer() {
                    if top.is_negative() {
                        return domain(format!("binomial with negative top {}", fmt_big(top)));
                    }
                    if bottom > top {
                        return Ok(Simplified::Zero);
                    }
                    if bottom == top {
                        return Ok(Simplified::One);
                    }
                    return Ok(Simplified::Keep(f.clone()));
                }
            }
            let one = BigRational::one();
            let diff = top - bottom;
            if !(top + &one).is_positive() || !(bottom + &one).is_positive() || !(diff + &one).is_positive() {
                return domain(format!(
                    "generalised binomial C({}, {}) outside the positive Gamma domain",
                    fmt_big(top),
                    fmt_big(bottom)
                ));
            }
            Ok(Simplified::Keep(f.clone()))
        }
        Factor::Pow { base, exp } => {
            if exp.is_zero() || base.is_one() {
                return Ok(Simplified::One);
            }
            if base.is_negative() {
                return domain(format!("negative base {} in a power", fmt_big(base)));
            }
            if base.is_zero() {
                return if exp.is_positive() {
                    Ok(Simplified::Zero)
                } else {
                    domain("zero raised to a non-positive power")
                };
            }
            Ok(Simplified::Keep(f.clone()))
        }
        Factor::Exp(q) => Ok(if q.is_zero() {
            Simplified::One
        } else {
            Simplified::Keep(f.clone())
        }),
    }
}

/// Simplified factors, or `None` when the product is zero.
fn reduce(p: &Product) -> Result<Option<Vec<Factor>>> {
    let mut out = Vec::with_capacity(p.0.len());
    let mut zero = false;
    for f in &p.0 {
        match simplify(f)? {
            Simplified::One => {}
            Simplified::Zero => zero = true,
            Simplified::Keep(f) => out.push(f),
        }
    }
    Ok(if zero { None } else { Some(out) })
}

fn cancel_common(lhs: &mut Vec<Factor>, rhs: &mut Vec<Factor>) {
    let mut i = 0;
    while i < lhs.len() {
        if let Some(j) = rhs.iter().position(|g| *g == lhs[i]) {
            lhs.swap_remove(i);
            rhs.swap_remove(j);
        } else {
            i += 1;
        }
    }
}

/// Decides `lhs <= rhs`.
pub fn compare(lhs: &Product, rhs: &Product, opts: CompareOptions) -> Result<Comparison> {
    let l = reduce(lhs)?;
    let r = reduce(rhs)?;
    let (mut l, mut r) = match (l, r) {
        (None, _) => {
            return Ok(Comparison {
                truth: Truth::Holds,
                mode: VerdictMode::Exact,
                lhs: "0".into(),
                rhs: rhs.to_string(),
            })
        }
        (Some(_), None) => {
            return Ok(Comparison {
                truth: Truth::Fails,
                mode: VerdictMode::Exact,
                lhs: lhs.to_string(),
                rhs: "0".into(),
            })
        }
        (Some(l), Some(r)) => (l, r),
    };
    cancel_common(&mut l, &mut r);
    if opts.allow_exact {
        if let Some(c) = compare_exact(&l, &r, lhs, rhs) {
            return Ok(c);
        }
    }
    compare_interval(&l, &r, opts.precision)
}

fn small_int(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

fn exact_eligible(l: &[Factor], r: &[Factor]) -> Option<i64> {
    let mut root = BigInt::one();
    for f in l.iter().chain(r) {
        match f {
            Factor::Binom { top, bottom } => {
                let t = small_int(top)?;
                small_int(bottom)?;
                if t > EXACT_BINOM_TOP {
                    return None;
                }
            }
            Factor::Pow { exp, .. } => root = root.lcm(exp.denom()),
            Factor::Exp(_) => {}
        }
    }
    let root = root.to_i64().filter(|&q| q <= EXACT_MAX_ROOT)?;
    let mut bits: u64 = 0;
    for f in l.iter().chain(r) {
        match f {
            Factor::Binom { top, .. } => bits += small_int(top)? as u64 * root as u64,
            Factor::Pow { base, exp } => {
                let e = (exp * BigInt::from(root)).to_integer().abs().to_u64()?;
                let b = base.numer().bits() + base.denom().bits();
                bits = bits.saturating_add(e.saturating_mul(b));
            }
            Factor::Exp(_) => {}
        }
        if bits > EXACT_BIT_BUDGET {
            return None;
        }
    }
    Some(root)
}

/// `(rational part, exponent of e)` of a side raised to the `root` power.
fn exact_side(fs: &[Factor], root: i64) -> (BigRational, BigRational) {
    let mut value = BigRational::one();
    let mut e = BigRational::zero();
    for f in fs {
        match f {
            Factor::Binom { top, bottom } => {
                let b = binomial_big(small_int(top).unwrap(), small_int(bottom).unwrap());
                let b = BigInt::from(b).pow(root as u32);
                value *= BigRational::from_integer(b);
            }
            Factor::Pow { base, exp } => {
                let k = (exp * BigInt::from(root)).to_integer();
                let mag = k.abs().to_u32().expect("exponent size checked");
                let p = BigRational::new(base.numer().pow(mag), base.denom().pow(mag));
                if k.is_negative() {
                    value /= p;
                } else {
                    value *= p;
                }
            }
            Factor::Exp(q) => e += q * BigInt::from(root),
        }
    }
    (value, e)
}

fn compare_exact(l: &[Factor], r: &[Factor], lhs: &Product, rhs: &Product) -> Option<Comparison> {
    let root = exact_eligible(l, r)?;
    let (lv, le) = exact_side(l, root);
    let (rv, re) = exact_side(r, root);
    let d = &re - &le;
    let truth = if d.is_zero() {
        Truth::from_bool(lv <= rv)
    } else {
        // lv <= rv * e^d  <=>  lv / rv <= e^d
        let ratio = &lv / &rv;
        let mut terms = 16usize;
        loop {
            let (lo, hi) = exp_bracket(&d, terms);
            if ratio <= lo {
                break Truth::Holds;
            }
            if ratio > hi {
                break Truth::Fails;
            }
            if terms >= 2048 {
                return None;
            }
            terms *= 2;
        }
    };
    let show = |p: &Product, v: &BigRational, e: &BigRational| {
        if root == 1 && e.is_zero() {
            abbrev_big(v)
        } else {
            p.to_string()
        }
    };
    Some(Comparison {
        truth,
        mode: VerdictMode::Exact,
        lhs: show(lhs, &lv, &le),
        rhs: show(rhs, &rv, &re),
    })
}

/// Rational bounds `lo <= e^d <= hi` from the first `terms` Taylor terms.
pub fn exp_bracket(d: &BigRational, terms: usize) -> (BigRational, BigRational) {
    if d.is_negative() {
        let (lo, hi) = exp_bracket(&-d, terms);
        return (hi.recip(), lo.recip());
    }
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut n = 0usize;
    // Make sure the remainder bound below applies: n + 2 > d.
    let needed = d.ceil().to_integer().to_usize().unwrap_or(usize::MAX).saturating_add(2);
    let terms = terms.max(needed);
    while n <= terms {
        sum += &term;
        n += 1;
        term = term * d / BigInt::from(n);
    }
    // `term` is d^(N+1)/(N+1)!; the tail is at most term / (1 - d/(N+2)).
    let ratio = d / BigInt::from(n + 1);
    let tail = &term / (BigRational::one() - ratio);
    let hi = &sum + tail;
    (sum, hi)
}

fn ln_factor(f: &Factor, prec: u32) -> Interval {
    match f {
        Factor::Binom { top, bottom } => {
            if let (Some(t), Some(b)) = (small_int(top), small_int(bottom)) {
                if t <= EXACT_BINOM_TOP {
                    return Interval::from_biguint(&binomial_big(t, b), prec).ln();
                }
            }
            let one = BigRational::one();
            let g = |x: BigRational| Interval::from_rational(&x, prec).ln_gamma();
            g(top + &one).sub(&g(bottom + &one)).sub(&g(top - bottom + &one))
        }
        Factor::Pow { base, exp } => {
            Interval::from_rational(exp, prec).mul(&Interval::from_rational(base, prec).ln())
        }
        Factor::Exp(q) => Interval::from_rational(q, prec),
    }
}

fn ln_side(fs: &[Factor], prec: u32) -> Interval {
    fs.iter()
        .fold(Interval::zero(prec), |acc, f| acc.add(&ln_factor(f, prec)))
}

fn compare_interval(l: &[Factor], r: &[Factor], prec: u32) -> Result<Comparison> {
    let ll = ln_side(l, prec);
    let lr = ln_side(r, prec);
    Ok(Comparison {
        truth: ll.le(&lr),
        mode: VerdictMode::Interval,
        lhs: format!("exp{}", ll.to_string_digits(15)),
        rhs: format!("exp{}", lr.to_string_digits(15)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn exact_binomial_comparison() {
        // C(8,3) = 56 <= (7/10)^2 * C(10,3) = 58.8
        let lhs = Product::one().binom_int(8, 3);
        let rhs = Product::one().pow(q(7, 10), int(2)).binom_int(10, 3);
        let c = compare(&lhs, &rhs, CompareOptions::default()).unwrap();
        assert_eq!(c.truth, Truth::Holds);
        assert_eq!(c.mode, VerdictMode::Exact);
        assert_eq!(c.lhs, "56");
        assert_eq!(c.rhs, "294/5");
        let c = compare(&rhs, &lhs, CompareOptions::default()).unwrap();
        assert_eq!(c.truth, Truth::Fails);
    }

    #[test]
    fn fractional_exponents_are_cleared() {
        // 2^(1/2) <= 3/2 and (3/2)^2 > 2.
        let lhs = Product::one().pow(int(2), q(1, 2));
        let rhs = Product::one().scalar(q(3, 2));
        assert_eq!(compare(&lhs, &rhs, CompareOptions::default()).unwrap().truth, Truth::Holds);
        let rhs = Product::one().scalar(q(7, 5));
        assert_eq!(compare(&lhs, &rhs, CompareOptions::default()).unwrap().truth, Truth::Fails);
    }

    #[test]
    fn exponential_factors_are_bracketed() {
        // e^1 vs 2718/1000 and 2719/1000
        let e = Product::one().exp(int(1));
        let below = Product::one().scalar(q(2718, 1000));
        let above = Product::one().scalar(q(2719, 1000));
        assert_eq!(compare(&below, &e, CompareOptions::default()).unwrap().truth, Truth::Holds);
        assert_eq!(compare(&above, &e, CompareOptions::default()).unwrap().truth, Truth::Fails);
        let (lo, hi) = exp_bracket(&q(-3, 2), 30);
        assert!(lo < hi && lo.to_f64().unwrap() < 0.2232 && hi.to_f64().unwrap() > 0.2231);
    }

    #[test]
    fn common_factors_cancel_to_equality() {
        let big_top = int(1 << 41);
        let lhs = Product::one().binom(big_top.clone(), int(1 << 40));
        let rhs = Product::one().exp(int(0)).pow(q(1, 3), int(0)).binom(big_top, int(1 << 40));
        let c = compare(&lhs, &rhs, CompareOptions::default()).unwrap();
        assert_eq!(c.truth, Truth::Holds);
        assert_eq!(c.mode, VerdictMode::Exact);
    }

    #[test]
    fn interval_path_agrees_with_exact_path() {
        let lhs = Product::one().binom_int(30, 8);
        let rhs = Product::one().pow(q(3, 2), q(31, 2));
        let exact = compare(&lhs, &rhs, CompareOptions::default()).unwrap();
        let interval = compare(
            &lhs,
            &rhs,
            CompareOptions {
                precision: 128,
                allow_exact: false,
            },
        )
        .unwrap();
        assert_eq!(interval.mode, VerdictMode::Interval);
        assert_eq!(exact.truth, interval.truth);
    }

    #[test]
    fn zero_sides() {
        let zero = Product::one().binom_int(3, 5);
        let one = Product::one();
        assert_eq!(compare(&zero, &one, CompareOptions::default()).unwrap().truth, Truth::Holds);
        assert_eq!(compare(&one, &zero, CompareOptions::default()).unwrap().truth, Truth::Fails);
    }

    #[test]
    fn generalised_binomial_matches_integer_case() {
        // C(5.5, 2) = 5.5*4.5/2 = 99/8
        let lhs = Product::one().binom(q(11, 2), int(2));
        let c = compare(&lhs, &Product::one().scalar(q(99, 8)), CompareOptions::default()).unwrap();
        assert_eq!(c.mode, VerdictMode::Interval);
        assert_eq!(c.truth, Truth::Indeterminate);
        let c = compare(&lhs, &Product::one().scalar(q(100, 8)), CompareOptions::default()).unwrap();
        assert_eq!(c.truth, Truth::Holds);
        let c = compare(&lhs, &Product::one().scalar(q(98, 8)), CompareOptions::default()).unwrap();
        assert_eq!(c.truth, Truth::Fails);
    }
}
