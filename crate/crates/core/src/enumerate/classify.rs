//! Classification of a single set into the `Lambda*`, `F`, `I`, sparse/dense,
//! `D(b, mu)`, `D*` and `T(b)` taxonomy.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::constants::{self, CValue, Epsilon};
use crate::arith::interval::{Interval, DEFAULT_PRECISION};
use crate::error::{parameter, Result};
use crate::ratio::{fmt_big, fmt_rational64, serde_r64, to_big};
use crate::sumset::{ell, sumset_unchecked, IntegerSet, LambdaParams};

#[derive(Clone, Debug)]
pub struct ClassifierParams {
    pub base: LambdaParams,
    pub epsilon: Epsilon,
    pub delta_override: Option<Rational64>,
    pub f_override: Option<Rational64>,
    pub c_override: Option<Rational64>,
}

impl ClassifierParams {
    /// Formula constants with `epsilon = 1/2`.
    pub fn new(base: LambdaParams) -> Self {
        ClassifierParams {
            base,
            epsilon: Epsilon::Rational(Rational64::new(1, 2)),
            delta_override: None,
            f_override: None,
            c_override: None,
        }
    }

    pub fn with_overrides(
        mut self,
        delta: Option<Rational64>,
        f: Option<Rational64>,
        c: Option<Rational64>,
    ) -> Self {
        self.delta_override = delta;
        self.f_override = f;
        self.c_override = c;
        self
    }

    pub fn has_overrides(&self) -> bool {
        self.delta_override.is_some() || self.f_override.is_some() || self.c_override.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        self.epsilon.validate()?;
        for (name, v) in [
            ("delta", self.delta_override),
            ("f", self.f_override),
            ("c", self.c_override),
        ] {
            if let Some(v) = v {
                if !v.is_positive() {
                    return parameter(format!("{name} override must be positive, got {}", fmt_rational64(&v)));
                }
            }
        }
        Ok(())
    }

    /// The formula values of `delta`, `f(lambda)` and `c(lambda, epsilon)`.
    pub fn formula_thresholds(&self) -> Result<Thresholds> {
        self.validate()?;
        let l = to_big(&self.base.lambda);
        let c = CValue {
            giant: BigRational::from_integer(BigInt::from(1) << 560u32) * l.pow(32),
            log_coefficient: BigRational::from_integer(BigInt::from(1) << 20u32) * l.pow(2),
            log_exact: self.epsilon.log_inverse_exact(),
            log_interval: self.epsilon.log_inverse(DEFAULT_PRECISION),
        };
        Ok(Thresholds {
            label: "formula".into(),
            delta: constants::delta(&l),
            f: constants::f_lambda(&l),
            c: CBound::Formula(Box::new(c)),
        })
    }

    /// Formula values with each supplied override substituted; `None` without overrides.
    pub fn override_thresholds(&self) -> Result<Option<Thresholds>> {
        if !self.has_overrides() {
            return Ok(None);
        }
        let mut t = self.formula_thresholds()?;
        t.label = "override".into();
        if let Some(d) = self.delta_override {
            t.delta = to_big(&d);
        }
        if let Some(f) = self.f_override {
            t.f = to_big(&f);
        }
        if let Some(c) = self.c_override {
            t.c = CBound::Exact(to_big(&c));
        }
        Ok(Some(t))
    }

    /// The thresholds `classify` uses: overrides when given, else the formula values.
    pub fn thresholds(&self) -> Result<Thresholds> {
        Ok(match self.override_thresholds()? {
            Some(t) => t,
            None => self.formula_thresholds()?,
        })
    }
}

/// The constant `c` of `Lambda*` and `I`.
#[derive(Clone, Debug)]
pub enum CBound {
    Exact(BigRational),
    /// `giant + log_coefficient * log(1/epsilon)` with the log term enclosed.
    Formula(Box<CValue>),
}

impl CBound {
    /// `v <= c`.
    fn at_least(&self, v: &BigRational) -> bool {
        match self {
            CBound::Exact(c) => v <= c,
            CBound::Formula(c) => {
                if *v <= c.giant {
                    return true;
                }
                let iv = Interval::from_rational(v, DEFAULT_PRECISION);
                iv.le(&c.interval()).holds()
            }
        }
    }

    /// `v >= c`.
    fn at_most(&self, v: &BigRational) -> bool {
        match self {
            CBound::Exact(c) => v >= c,
            CBound::Formula(c) => {
                if *v < c.giant {
                    return false;
                }
                let iv = Interval::from_rational(v, DEFAULT_PRECISION);
                c.interval().le(&iv).holds()
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CBound::Exact(c) => fmt_big(c),
            CBound::Formula(_) => "2^20 lambda^2 log(1/eps) + 2^560 lambda^32".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Thresholds {
    pub label: String,
    pub delta: BigRational,
    pub f: BigRational,
    pub c: CBound,
}

impl Thresholds {
    /// `floor(delta * k)`: the largest count with `count <= delta k`.
    fn delta_k_floor(&self, k: i64) -> i64 {
        (&self.delta * BigRational::from_integer(k.into()))
            .floor()
            .to_integer()
            .to_i64()
            .unwrap_or(i64::MAX)
    }
}

/// Flags of one set under Definition-2.1-style membership.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Taxonomy {
    pub in_family_i: bool,
    /// `Some(r > f b)` inside `I`, `None` outside.
    pub is_sparse: Option<bool>,
    /// `(b, |(B+B) \ [lambda k]|)` for dense members of `I`.
    pub d_class: Option<(i64, i64)>,
    /// Dense, `mu = mu_b / b` with `mu > 2` and `lambda/2 <= mu <= 2 lambda`, and `r <= 2^11 mu b`.
    pub in_d_star: bool,
    /// In `I` with `M(A) ⊆ X(b)`.
    pub in_t_of_b: bool,
}

/// The image `phi(A) = {j : start + j*step ∈ A}` of a set in `F \ Lambda*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub start: i64,
    pub step: i64,
    pub image: IntegerSet,
    pub b: i64,
    pub r: i64,
    pub mu_times_b: i64,
    #[serde(flatten)]
    pub taxonomy: Taxonomy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingRecord {
    pub set_ref: IntegerSet,
    pub sumset_size: usize,
    #[serde(with = "serde_r64")]
    pub doubling: Rational64,
    pub ell: i64,
    pub b: i64,
    pub r: i64,
    pub mu_times_b: i64,
    /// `|A+A| <= lambda k`.
    pub in_lambda: bool,
    pub in_lambda_star: bool,
    pub in_family_f: bool,
    #[serde(flatten)]
    pub taxonomy: Taxonomy,
    pub reduction: Option<Reduction>,
    pub thresholds: String,
}

/// `b`, `r` and `|(B+B) \ [top]|` for `B = s \ [half]`.
fn b_r_mu(s: &IntegerSet, half: i64, top: i64) -> (i64, i64, i64) {
    let outside = s.filter(|x| x < 1 || x > half);
    let r = s.max().unwrap() - s.min().unwrap() - half;
    let mu_b = if outside.is_empty() {
        0
    } else {
        sumset_unchecked(&outside, &outside)
            .iter()
            .filter(|&x| x < 1 || x > top)
            .count() as i64
    };
    (outside.len() as i64, r, mu_b)
}

struct Frame {
    k: i64,
    half: i64,
    top: i64,
    lambda: Rational64,
    dk: i64,
}

fn taxonomy(s: &IntegerSet, sums: &IntegerSet, params: &LambdaParams, th: &Thresholds, f: &Frame) -> Taxonomy {
    let (b, r, mu_b) = b_r_mu(s, f.half, f.top);
    let in_window = s.min().unwrap() >= -f.half && s.max().unwrap() <= f.top;
    let ends = s.min().unwrap() <= 0 && s.max().unwrap() > f.half;
    let in_i = in_window
        && s.len() as i64 == f.k
        && params.admits(sums.len())
        && b <= f.dk
        && th.c.at_most(&BigRational::from_integer(r.into()))
        && ends;
    if !in_i {
        return Taxonomy::default();
    }
    let sparse = BigRational::from_integer(r.into()) > &th.f * BigRational::from_integer(b.into());
    let mut t = Taxonomy {
        in_family_i: true,
        is_sparse: Some(sparse),
        ..Taxonomy::default()
    };
    if !sparse {
        t.d_class = Some((b, mu_b));
        let mu = Rational64::new(mu_b, b);
        t.in_d_star = mu > Rational64::from_integer(2)
            && f.lambda / 2 <= mu
            && mu <= f.lambda * 2
            && r <= 2048 * mu_b;
    }
    // X(b) = [0, 2h] ∪ [2(half - h), 2 half] with h = floor(2^18 lambda^2 b).
    let h = (to_big(&(f.lambda * f.lambda)) * BigRational::from_integer((BigInt::from(b)) << 18u32))
        .floor()
        .to_integer()
        .to_i64()
        .unwrap_or(i64::MAX / 4)
        .min(i64::MAX / 4);
    t.in_t_of_b = (1..=f.top)
        .filter(|&m| !sums.contains(m))
        .all(|m| m <= 2 * h || m >= 2 * (f.half - h));
    t
}

/// Search for `(a, d)` witnessing `F`: `A ⊆ {a + jd : -half <= j <= top}` with
/// at most `delta k` elements off `{a + jd : 1 <= j <= half}`. Also returns the
/// first witness whose two end-sets `{j <= 0}` and `{j > half}` are both
/// non-empty, which defines `phi`.
fn search_f(a: &IntegerSet, f: &Frame) -> (bool, Option<(i64, i64, Vec<i64>)>) {
    let xs = a.elements();
    let x1 = xs[0];
    let g = xs.windows(2).fold(0i64, |g, w| num_integer::gcd(g, w[1] - w[0]));
    let g = if g == 0 { 1 } else { g };
    let mut divisors: Vec<i64> = (1..).take_while(|d| d * d <= g).filter(|d| g % d == 0).collect();
    let big: Vec<i64> = divisors.iter().rev().map(|d| g / d).filter(|&q| q * q != g).collect();
    divisors.extend(big);
    let mut in_f = false;
    for step in divisors {
        let pos: Vec<i64> = xs.iter().map(|x| (x - x1) / step).collect();
        let w = *pos.last().unwrap();
        let neg: Vec<i64> = pos.iter().rev().map(|o| w - o).collect();
        for (sign, offs) in [(1i64, &pos), (-1i64, &neg)] {
            for s in -f.half..=f.top - w {
                let left = offs.partition_point(|&o| o < 1 - s);
                let right = offs.len() - offs.partition_point(|&o| o <= f.half - s);
                if (left + right) as i64 > f.dk {
                    continue;
                }
                in_f = true;
                if left > 0 && right > 0 {
                    let start = if sign > 0 { x1 - s * step } else { x1 + (s + w) * step };
                    let image = offs.iter().map(|o| s + o).collect();
                    return (true, Some((start, sign * step, image)));
                }
            }
        }
    }
    (in_f, None)
}

fn frame(params: &LambdaParams, th: &Thresholds) -> Result<Frame> {
    Ok(Frame {
        k: params.k,
        half: params.half_lambda_k()?,
        top: params.lambda_k()?,
        lambda: params.lambda,
        dk: th.delta_k_floor(params.k),
    })
}

pub(crate) fn classify_with(a: &IntegerSet, params: &LambdaParams, th: &Thresholds) -> Result<DoublingRecord> {
    if a.len() as i64 != params.k {
        return parameter(format!("classify needs |A| = k = {} (got {})", params.k, a.len()));
    }
    let f = frame(params, th)?;
    let sums = sumset_unchecked(a, a);
    let l = ell(a)?;
    let (b, r, mu_b) = b_r_mu(a, f.half, f.top);
    let in_lambda = params.admits(sums.len());
    let in_lambda_star = th
        .c
        .at_least(&(BigRational::from_integer(l.into()) - to_big(&params.half_lambda_k_exact())));
    let (found_f, witness) = if in_lambda { search_f(a, &f) } else { (false, None) };
    let reduction = match witness {
        Some((start, step, image)) if !in_lambda_star => {
            let image = IntegerSet::new(image);
            let isums = sumset_unchecked(&image, &image);
            let (rb, rr, rmu) = b_r_mu(&image, f.half, f.top);
            Some(Reduction {
                taxonomy: taxonomy(&image, &isums, params, th, &f),
                start,
                step,
                image,
                b: rb,
                r: rr,
                mu_times_b: rmu,
            })
        }
        _ => None,
    };
    Ok(DoublingRecord {
        taxonomy: taxonomy(a, &sums, params, th, &f),
        set_ref: a.clone(),
        sumset_size: sums.len(),
        doubling: Rational64::new(sums.len() as i64, a.len() as i64),
        ell: l,
        b,
        r,
        mu_times_b: mu_b,
        in_lambda,
        in_lambda_star,
        in_family_f: found_f,
        reduction,
        thresholds: th.label.clone(),
    })
}

/// Classifies `a` under the override thresholds if any were given, else the formula thresholds.
pub fn classify(a: &IntegerSet, params: &ClassifierParams) -> Result<DoublingRecord> {
    if a.is_empty() {
        return parameter("classify needs a non-empty set");
    }
    classify_with(a, &params.base, &params.thresholds()?)
}

/// Whether `b`, `r` and the threshold-free flags match a direct re-evaluation.
pub fn record_is_consistent(rec: &DoublingRecord, params: &LambdaParams) -> bool {
    let Ok(half) = params.half_lambda_k() else { return false };
    let a = &rec.set_ref;
    let sums = sumset_unchecked(a, a);
    let b = a.iter().filter(|&x| x < 1 || x > half).count() as i64;
    let r = a.max().unwrap() - a.min().unwrap() - half;
    sums.len() == rec.sumset_size
        && b == rec.b
        && r == rec.r
        && rec.in_lambda == params.admits(sums.len())
        && (rec.taxonomy.is_sparse.is_some() == rec.taxonomy.in_family_i)
        && (rec.taxonomy.d_class.is_some() == (rec.taxonomy.is_sparse == Some(false)))
        && (!rec.in_family_f || rec.in_lambda)
        && rec.ell >= a.len() as i64
        && !rec.doubling.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(n: i64, k: i64, lambda: i64) -> LambdaParams {
        LambdaParams::new(n, k, Rational64::from_integer(lambda)).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn relaxed_constants_put_a_set_in_i() {
        let cp = ClassifierParams::new(base(16, 4, 3)).with_overrides(Some(r(1, 2)), None, Some(r(1, 1)));
        let rec = classify(&IntegerSet::new([0, 2, 4, 7]), &cp).unwrap();
        assert_eq!((rec.b, rec.r, rec.sumset_size), (2, 1, 9));
        assert!(rec.taxonomy.in_family_i);
        assert_eq!(rec.taxonomy.is_sparse, Some(false));
        // B + B = {0, 7, 14} leaves [12] at 0 and 14.
        assert_eq!(rec.taxonomy.d_class, Some((2, 2)));
        assert!(record_is_consistent(&rec, &cp.base));
        let cp = cp.with_overrides(Some(r(1, 2)), Some(r(1, 2)), Some(r(1, 1)));
        assert_eq!(classify(&IntegerSet::new([0, 2, 4, 7]), &cp).unwrap().taxonomy.is_sparse, Some(false));
        let cp = cp.with_overrides(Some(r(1, 2)), Some(r(1, 3)), Some(r(1, 1)));
        assert_eq!(classify(&IntegerSet::new([0, 2, 4, 7]), &cp).unwrap().taxonomy.is_sparse, Some(true));
    }

    #[test]
    fn inside_the_half_window_is_never_in_i() {
        let cp = ClassifierParams::new(base(16, 4, 3)).with_overrides(Some(r(1, 1)), None, Some(r(1, 1)));
        let rec = classify(&IntegerSet::new([1, 2, 4, 6]), &cp).unwrap();
        assert_eq!(rec.b, 0);
        assert!(!rec.taxonomy.in_family_i);
    }

    #[test]
    fn formula_constants_keep_i_empty_and_lambda_star_full() {
        let cp = ClassifierParams::new(base(16, 4, 3));
        for a in [[0, 2, 4, 7], [1, 2, 3, 16], [-5, 0, 1, 12]] {
            let rec = classify(&IntegerSet::new(a), &cp).unwrap();
            assert!(!rec.taxonomy.in_family_i);
            assert!(rec.in_lambda_star);
        }
    }

    #[test]
    fn f_membership_and_reduction() {
        // lambda k / 2 = 6 with the progression 10 + 2j: the set sits in j = 1..6.
        let p = base(40, 4, 3);
        let th = ClassifierParams::new(p).with_overrides(Some(r(1, 2)), None, Some(r(1, 1))).thresholds().unwrap();
        let rec = classify_with(&IntegerSet::new([12, 14, 18, 22]), &p, &th).unwrap();
        assert!(rec.in_family_f && rec.in_lambda_star && rec.reduction.is_none());
        // Span 8 needs 9 slots, so one element sits on each side of the middle.
        let rec = classify_with(&IntegerSet::new([1, 2, 3, 9]), &p, &th).unwrap();
        assert!(rec.in_lambda);
        assert!(!rec.in_lambda_star);
        let red = rec.reduction.expect("F minus Lambda* has a reduction");
        let back: Vec<i64> = red.image.iter().map(|j| red.start + j * red.step).collect();
        assert_eq!(back, vec![1, 2, 3, 9]);
        assert!(red.image.min().unwrap() <= 0 && red.image.max().unwrap() > 6);
        // With delta k < 1 the set must fit the middle six slots.
        let th0 = ClassifierParams::new(p).with_overrides(Some(r(1, 8)), None, Some(r(1, 1))).thresholds().unwrap();
        let rec = classify_with(&IntegerSet::new([1, 2, 3, 9]), &p, &th0).unwrap();
        assert!(!rec.in_family_f);
        // In F only with both outliers on the right, so phi is undefined.
        let rec = classify_with(&IntegerSet::new([1, 2, 8, 9]), &p, &th).unwrap();
        assert!(rec.in_family_f && !rec.in_lambda_star && rec.reduction.is_none());
    }

    #[test]
    fn non_integral_half_needs_floor_mode() {
        let p = LambdaParams::new(10, 3, r(5, 3)).unwrap();
        let cp = ClassifierParams::new(p);
        assert!(classify(&IntegerSet::new([1, 2, 3]), &cp).is_err());
        let cp = ClassifierParams::new(p.with_floor_mode(true));
        assert!(classify(&IntegerSet::new([1, 2, 3]), &cp).is_ok());
    }
}
