//! The two tail-count binomial bounds used when counting sets whose sumset
//! misses many sums near the middle.
//!
//! For `b <= delta k`, `lambda/2 <= mu <= 2 lambda`, `mu > 2` and
//! `s <= t <= 2^22 lambda^2 b`:
//!
//! ```text
//! C(lk/2 - mu b - s, k-b-s)
//!     <= e^(alpha b) ((l-2)/l)^(mu b) (2/(l-2))^b C(lk/2 - s, k-s)
//! C(lk/2 - mu b/2 - s/2 - t + delta b, k-b-s)
//!     <= e^(alpha b) ((l-2)/l)^(mu b/2) (2/(l-2))^b C(lk/2 - s/2 - t, k-s)
//! ```
//!
//! The hypotheses force `k` far beyond exact binomials, so paper mode works on
//! log-Gamma intervals. Relaxed mode drops the hypotheses and is diagnostic.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::constants::{alpha, delta};
use super::expr::{compare, CompareOptions, Product};
use super::inequalities::{run_family, GridSummary, InequalityId, InequalityVerdict, Tally, VerdictSink};
use super::interval::DEFAULT_PRECISION;
use crate::error::{parameter, Result};
use crate::ratio::{fmt_rational64, serde_r64, to_big};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    /// Hypotheses enforced; a violation is a parameter error.
    Paper,
    /// Any positive parameters; failures carry no meaning.
    Relaxed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailCountParams {
    #[serde(with = "serde_r64")]
    pub lambda: Rational64,
    #[serde(with = "serde_r64")]
    pub mu: Rational64,
    pub b: i64,
    pub s: i64,
    pub t: i64,
    pub k: i64,
}

impl TailCountParams {
    pub fn point(&self) -> String {
        format!(
            "lambda={};mu={};b={};s={};t={};k={}",
            fmt_rational64(&self.lambda),
            fmt_rational64(&self.mu),
            self.b,
            self.s,
            self.t,
            self.k
        )
    }

    /// Every violated hypothesis, by name.
    pub fn violated_hypotheses(&self) -> Vec<String> {
        let mut v = Vec::new();
        let l = to_big(&self.lambda);
        let mu = to_big(&self.mu);
        let two = BigRational::from_integer(2.into());
        if mu <= two {
            v.push("mu > 2".to_string());
        }
        if mu < &l / &two || mu > &l * &two {
            v.push("lambda/2 <= mu <= 2*lambda".to_string());
        }
        if BigRational::from_integer(self.b.into()) > delta(&l) * BigInt::from(self.k) {
            v.push("b <= delta*k".to_string());
        }
        let t_cap = BigRational::from_integer((BigInt::one() << 22) * BigInt::from(self.b)) * l.pow(2);
        if self.s < 0 || self.s > self.t || BigRational::from_integer(self.t.into()) > t_cap {
            v.push("0 <= s <= t <= 2^22*lambda^2*b".to_string());
        }
        v
    }

    fn basic_domain(&self) -> Result<()> {
        if self.lambda <= Rational64::from_integer(2) {
            return parameter(format!("lambda must exceed 2, got {}", fmt_rational64(&self.lambda)));
        }
        if !self.mu.is_positive() || self.b < 0 || self.s < 0 || self.t < 0 || self.k < 1 {
            return parameter(format!("tail-count parameters must be positive: {}", self.point()));
        }
        Ok(())
    }

    /// Both sides of the two bounds.
    pub fn sides(&self) -> [(Product, Product); 2] {
        let l = to_big(&self.lambda);
        let mu = to_big(&self.mu);
        let r = |n: i64| BigRational::from_integer(n.into());
        let two = r(2);
        let (k, b, s, t) = (r(self.k), r(self.b), r(self.s), r(self.t));
        let half_lk = &l * &k / &two;
        let shrink = (&l - &two) / &l;
        let boost = &two / (&l - &two);
        let ab = alpha(&l) * &b;
        let db = delta(&l) * &b;
        let bottom_l = &k - &b - &s;
        let bottom_r = &k - &s;

        let first_l = Product::one().binom(&half_lk - &mu * &b - &s, bottom_l.clone());
        let first_r = Product::one()
            .exp(ab.clone())
            .pow(shrink.clone(), &mu * &b)
            .pow(boost.clone(), b.clone())
            .binom(&half_lk - &s, bottom_r.clone());

        let second_top = &half_lk - &mu * &b / &two - &s / &two - &t + &db;
        let second_l = Product::one().binom(second_top, bottom_l);
        let second_r = Product::one()
            .exp(ab)
            .pow(shrink, &mu * &b / &two)
            .pow(boost, b)
            .binom(&half_lk - &s / &two - &t, bottom_r);
        [(first_l, first_r), (second_l, second_r)]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailCountReport {
    pub params: TailCountParams,
    pub mode: TailMode,
    pub first: InequalityVerdict,
    pub second: InequalityVerdict,
    pub violated_hypotheses: Vec<String>,
}

pub fn check_appendix_b(params: &TailCountParams, mode: TailMode, precision: u32) -> Result<TailCountReport> {
    params.basic_domain()?;
    let violated = params.violated_hypotheses();
    if mode == TailMode::Paper && !violated.is_empty() {
        return parameter(format!(
            "paper-mode hypothesis violated at {}: {}",
            params.point(),
            violated.join(", ")
        ));
    }
    let note = (!violated.is_empty()).then(|| format!("hypotheses violated: {}", violated.join(", ")));
    let opts = CompareOptions {
        precision,
        allow_exact: true,
    };
    let [first, second] = params.sides();
    let verdict = |id: InequalityId, (lhs, rhs): &(Product, Product)| -> Result<InequalityVerdict> {
        let c = compare(lhs, rhs, opts)?;
        Ok(InequalityVerdict {
            inequality_id: id,
            point: params.point(),
            mode: c.mode,
            truth: c.truth,
            holds: c.truth.holds(),
            lhs: c.lhs,
            rhs: c.rhs,
            note: note.clone(),
        })
    };
    Ok(TailCountReport {
        params: params.clone(),
        mode,
        first: verdict(InequalityId::TailCountFirst, &first)?,
        second: verdict(InequalityId::TailCountSecond, &second)?,
        violated_hypotheses: violated,
    })
}

/// Paper-mode sweep points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailCountGrid {
    #[serde(with = "crate::ratio::serde_r64_vec")]
    pub lambdas: Vec<Rational64>,
    pub bs: Vec<i64>,
    pub st_pairs: Vec<(i64, i64)>,
    pub k: i64,
    /// For points with `b > delta k`, also run them at the least power of two
    /// `k' >= k` satisfying the hypothesis.
    pub lift_k: bool,
    pub precision: u32,
}

impl Default for TailCountGrid {
    fn default() -> Self {
        TailCountGrid {
            lambdas: vec![Rational64::from_integer(3), Rational64::from_integer(4), Rational64::from_integer(8)],
            bs: vec![1, 10],
            st_pairs: vec![(0, 0), (0, 1), (1, 1), (0, 5), (2, 7), (3, 64)],
            k: 1 << 40,
            lift_k: true,
            precision: DEFAULT_PRECISION,
        }
    }
}

/// `mu in {lambda/2 + 1, lambda, 2 lambda}`.
pub fn mu_choices(lambda: Rational64) -> Vec<Rational64> {
    let mut v = vec![lambda / 2 + 1, lambda, lambda * 2];
    v.dedup();
    v
}

/// Least `k' >= k`, a power of two when lifted, with `b <= delta k'`.
fn lifted_k(lambda: Rational64, b: i64, k: i64) -> Option<i64> {
    let l = to_big(&lambda);
    let need = BigRational::from_integer(b.into()) / delta(&l);
    let mut kk = k;
    while BigRational::from_integer(kk.into()) < need {
        kk = kk.checked_mul(2)?;
    }
    (kk != k).then_some(kk)
}

pub fn check_appendix_b_grid(grid: &TailCountGrid, mut sink: VerdictSink<'_>) -> Result<GridSummary> {
    let mut points = Vec::new();
    for &lambda in &grid.lambdas {
        for mu in mu_choices(lambda) {
            for &b in &grid.bs {
                for &(s, t) in &grid.st_pairs {
                    let p = TailCountParams {
                        lambda,
                        mu,
                        b,
                        s,
                        t,
                        k: grid.k,
                    };
                    points.push(p.clone());
                    if grid.lift_k {
                        if let Some(k) = lifted_k(lambda, b, grid.k) {
                            points.push(TailCountParams { k, ..p });
                        }
                    }
                }
            }
        }
    }
    let prec = grid.precision;
    let mut out = GridSummary::default();
    for (index, id) in [InequalityId::TailCountFirst, InequalityId::TailCountSecond].into_iter().enumerate() {
        let run = |p: &TailCountParams, want_all: bool| {
            let mut tally = Tally::default();
            match check_appendix_b(p, TailMode::Paper, prec) {
                Ok(rep) => {
                    let v = if index == 0 { rep.first } else { rep.second };
                    tally.push(v.truth, want_all, || v.clone());
                }
                Err(e) => tally.skip(id, || p.point(), &e.to_string()),
            }
            tally
        };
        out.extend(run_family(id, &points, &mut sink, run));
    }
    Ok(out)
}
