//! Tail probabilities for the number of sums a random `k`-subset of `[n]` misses.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{middle_depth_histogram, missing_by_size, missing_histogram, DEFAULT_EXACT_BUDGET};
use super::sampler::{SamplerId, SeededSampler};
use super::wilson::{wilson_interval, Z95};
use crate::arith::interval::{Interval, Truth, DEFAULT_PRECISION};
use crate::error::{domain, Error, Result};
use crate::ratio::{big_from_ints, RationalRepr};
use crate::sumset::Bits;

pub const TAIL_CSV_HEADER: [&str; 7] = ["n", "k", "m_or_M", "exact_num", "exact_den", "bound", "holds"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailEvent {
    /// At least `m` of `{2, ..., 2n}` are missing from `S+S`.
    MissingAtLeast,
    /// `{M+1, ..., 2n-M+1}` is not contained in `S+S`.
    MiddleUncovered,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo { sampler: SamplerId, z: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBound {
    pub formula: String,
    /// Decimal value, or `exp([lo, hi])` when only the logarithm is printable.
    pub value: String,
    pub holds: Truth,
}

/// `log(tail)/m` next to the rate `log(1-p)/2` the bound predicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeDiagnostic {
    pub observed: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub event: TailEvent,
    pub n: usize,
    pub k: usize,
    pub threshold: usize,
    pub method: Method,
    pub hits: u64,
    pub trials: u64,
    pub exact: Option<RationalRepr>,
    pub estimate: f64,
    pub ci: Option<(f64, f64)>,
    pub bound: Option<AnalyticBound>,
    pub slope: Option<SlopeDiagnostic>,
    pub notes: Vec<String>,
}

impl TailEstimate {
    pub fn exact_value(&self) -> Option<BigRational> {
        self.exact.as_ref().and_then(RationalRepr::to_big)
    }

    pub fn bound_holds(&self) -> bool {
        self.bound.as_ref().is_none_or(|b| b.holds.holds())
    }

    pub fn csv_record(&self) -> [String; 7] {
        let (num, den) = match &self.exact {
            Some(r) => (r.num.clone(), r.den.clone()),
            None => (self.hits.to_string(), self.trials.to_string()),
        };
        let (bound, holds) = match &self.bound {
            Some(b) => (b.value.clone(), b.holds.to_string()),
            None => (String::new(), String::new()),
        };
        [
            self.n.to_string(),
            self.k.to_string(),
            self.threshold.to_string(),
            num,
            den,
            bound,
            holds,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailOptions {
    pub exact_budget: u64,
    pub mc_trials: u64,
    pub seed: u64,
    pub stream_id: u64,
    pub z: f64,
}

impl Default for TailOptions {
    fn default() -> Self {
        TailOptions {
            exact_budget: DEFAULT_EXACT_BUDGET,
            mc_trials: 100_000,
            seed: 0,
            stream_id: 0,
            z: Z95,
        }
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return domain(format!("need 1 <= k <= n (got n = {n}, k = {k})"));
    }
    Ok(())
}

fn density(n: usize, k: usize) -> BigRational {
    big_from_ints(k as u64, n as u64)
}

fn suffix(hist: &[u64], from: usize) -> u64 {
    hist.iter().skip(from).sum()
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn mpfr(q: &BigRational) -> Interval {
    Interval::from_rational(q, DEFAULT_PRECISION)
}

/// `ln(exp(2^16 m^{7/8}) (1-p)^{m/2})` as an interval; requires `p < 1`.
fn missing_bound_log(p: &BigRational, m: usize) -> Interval {
    let prec = DEFAULT_PRECISION;
    let growth = if m == 0 {
        Interval::zero(prec)
    } else {
        let root = Interval::from_rational(&big_from_ints(7, 8), prec)
            .mul(&Interval::from_int(m as i64, prec).ln())
            .exp();
        Interval::from_int(1 << 16, prec).mul(&root)
    };
    let q = BigRational::one() - p;
    let decay = Interval::from_rational(&big_from_ints(m as u64, 2u64), prec).mul(&mpfr(&q).ln());
    growth.add(&decay)
}

fn missing_bound(n: usize, k: usize, m: usize, prob: Option<&BigRational>, estimate: f64) -> (Option<AnalyticBound>, Option<String>) {
    if 3 * k > 2 * n {
        return (None, Some(format!("bound not evaluated: k = {k} > 2n/3")));
    }
    let log = missing_bound_log(&density(n, k), m);
    let holds = match prob {
        Some(pr) if pr.is_zero() => Truth::Holds,
        Some(pr) => mpfr(pr).ln().le(&log),
        None => Truth::from_bool(estimate == 0.0 || estimate.ln() <= log.midpoint_f64()),
    };
    let bound = AnalyticBound {
        formula: "exp(2^16 m^(7/8)) (1-p)^(m/2)".into(),
        value: format!("exp({})", log.to_string_digits(12)),
        holds,
    };
    (Some(bound), None)
}

fn slope(n: usize, k: usize, m: usize, estimate: f64) -> Option<SlopeDiagnostic> {
    if m == 0 || estimate <= 0.0 || k >= n {
        return None;
    }
    Some(SlopeDiagnostic {
        observed: estimate.ln() / m as f64,
        predicted: (1.0 - k as f64 / n as f64).ln() / 2.0,
    })
}

fn exact_missing_from(n: usize, k: usize, m: usize, hist: &[u64]) -> TailEstimate {
    let total: u64 = hist.iter().sum();
    let hits = suffix(hist, m);
    let prob = big_from_ints(hits, total);
    let estimate = to_f64(&prob);
    let (bound, note) = missing_bound(n, k, m, Some(&prob), estimate);
    TailEstimate {
        event: TailEvent::MissingAtLeast,
        n,
        k,
        threshold: m,
        method: Method::Exact,
        hits,
        trials: total,
        exact: Some(RationalRepr::from(&prob)),
        estimate,
        ci: None,
        bound,
        slope: slope(n, k, m, estimate),
        notes: note.into_iter().collect(),
    }
}

/// Exact `Pr(|{2..2n} \ (S+S)| >= m)` for a uniform `k`-subset `S` of `[n]`.
pub fn exact_tail_missing(n: usize, k: usize, m: usize, budget: u64) -> Result<TailEstimate> {
    check_nk(n, k)?;
    let hist = missing_histogram(n, k, budget)?;
    Ok(exact_missing_from(n, k, m, &hist))
}

/// Exact tails for every `m` in `0..=2n-1` from one enumeration.
pub fn exact_tail_sweep(n: usize, k: usize, budget: u64) -> Result<Vec<TailEstimate>> {
    check_nk(n, k)?;
    let hist = missing_histogram(n, k, budget)?;
    Ok((0..2 * n).map(|m| exact_missing_from(n, k, m, &hist)).collect())
}

fn sample_profile(sampler: &mut SeededSampler, n: usize, k: usize, sums: &mut Bits, prefix: &mut Bits) -> (usize, usize) {
    let s = sampler.k_subset(1, n, k);
    sums.clear();
    prefix.clear();
    for &x in &s {
        prefix.set(x as usize);
    }
    for &x in &s {
        sums.or_shifted(prefix, x as usize);
    }
    let mut missing = 0;
    let mut depth = 0;
    for x in 2..=2 * n {
        if !sums.get(x) {
            missing += 1;
            depth = depth.max((x - 1).min(2 * n + 1 - x));
        }
    }
    (missing, depth)
}

fn monte_carlo(
    event: TailEvent,
    n: usize,
    k: usize,
    threshold: usize,
    trials: u64,
    sampler: &mut SeededSampler,
    z: f64,
) -> Result<TailEstimate> {
    check_nk(n, k)?;
    if trials == 0 {
        return domain("Monte Carlo needs at least one trial");
    }
    let id = sampler.id();
    let mut sums = Bits::zeros(2 * n + 1);
    let mut prefix = Bits::zeros(n + 1);
    let mut hits = 0u64;
    for _ in 0..trials {
        let (missing, depth) = sample_profile(sampler, n, k, &mut sums, &mut prefix);
        let hit = match event {
            TailEvent::MissingAtLeast => missing >= threshold,
            TailEvent::MiddleUncovered => depth >= threshold,
        };
        hits += hit as u64;
    }
    let estimate = hits as f64 / trials as f64;
    let (bound, note) = match event {
        TailEvent::MissingAtLeast => missing_bound(n, k, threshold, None, estimate),
        TailEvent::MiddleUncovered => (Some(middle_bound(n, k, threshold, None, estimate)), None),
    };
    let mut notes: Vec<String> = note.into_iter().collect();
    notes.push("bound verdict compares the point estimate".into());
    Ok(TailEstimate {
        event,
        n,
        k,
        threshold,
        method: Method::MonteCarlo { sampler: id, z },
        hits,
        trials,
        exact: None,
        estimate,
        ci: Some(wilson_interval(hits, trials, z)),
        bound,
        slope: match event {
            TailEvent::MissingAtLeast => slope(n, k, threshold, estimate),
            TailEvent::MiddleUncovered => None,
        },
        notes,
    })
}

/// Monte Carlo estimate of the same tail with a Wilson interval.
pub fn mc_tail_missing(n: usize, k: usize, m: usize, trials: u64, sampler: &mut SeededSampler, z: f64) -> Result<TailEstimate> {
    monte_carlo(TailEvent::MissingAtLeast, n, k, m, trials, sampler, z)
}

/// `(8/p^2)(1-p^2)^{M/2}` against `prob`, exactly; odd `M` compares squares.
fn middle_bound(n: usize, k: usize, big_m: usize, prob: Option<&BigRational>, estimate: f64) -> AnalyticBound {
    let p = density(n, k);
    let p2 = &p * &p;
    let q = BigRational::one() - &p2;
    let scale = BigRational::from_integer(BigInt::from(8)) / &p2;
    let value_f = to_f64(&scale) * to_f64(&q).powf(big_m as f64 / 2.0);
    let holds = match prob {
        Some(pr) => {
            let ok = if big_m.is_multiple_of(2) {
                *pr <= &scale * Pow::pow(&q, big_m / 2)
            } else {
                pr * pr <= &scale * &scale * Pow::pow(&q, big_m)
            };
            Truth::from_bool(ok)
        }
        None => Truth::from_bool(estimate <= value_f),
    };
    let value = if big_m.is_multiple_of(2) {
        crate::ratio::abbrev_big(&(&scale * Pow::pow(&q, big_m / 2)))
    } else {
        format!("{value_f:.6e}")
    };
    AnalyticBound {
        formula: "(8/p^2) (1-p^2)^(M/2)".into(),
        value,
        holds,
    }
}

fn exact_middle_from(n: usize, k: usize, big_m: usize, hist: &[u64]) -> TailEstimate {
    let total: u64 = hist.iter().sum();
    let hits = suffix(hist, big_m);
    let prob = big_from_ints(hits, total);
    let mut notes = Vec::new();
    if 2 * big_m > 2 * n {
        notes.push("target segment is empty".into());
    }
    TailEstimate {
        event: TailEvent::MiddleUncovered,
        n,
        k,
        threshold: big_m,
        method: Method::Exact,
        hits,
        trials: total,
        exact: Some(RationalRepr::from(&prob)),
        estimate: to_f64(&prob),
        ci: None,
        bound: Some(middle_bound(n, k, big_m, Some(&prob), 0.0)),
        slope: None,
        notes,
    }
}

/// `Pr({M+1, ..., 2n-M+1} ⊄ S+S)`, exact when the enumeration fits the
/// budget and Monte Carlo otherwise.
pub fn middle_cover_check(n: usize, k: usize, big_m: usize, opts: &TailOptions) -> Result<TailEstimate> {
    check_nk(n, k)?;
    if big_m == 0 {
        return domain("M must be at least 1");
    }
    match middle_depth_histogram(n, k, opts.exact_budget) {
        Ok(hist) => Ok(exact_middle_from(n, k, big_m, &hist)),
        Err(Error::Budget { .. }) => {
            let mut sampler = SeededSampler::new(opts.seed, opts.stream_id);
            monte_carlo(TailEvent::MiddleUncovered, n, k, big_m, opts.mc_trials, &mut sampler, opts.z)
        }
        Err(e) => Err(e),
    }
}

/// Exact middle-cover probabilities for `M = 1..=n` from one enumeration.
pub fn middle_cover_sweep(n: usize, k: usize, budget: u64) -> Result<Vec<TailEstimate>> {
    check_nk(n, k)?;
    let hist = middle_depth_histogram(n, k, budget)?;
    Ok((1..=n).map(|m| exact_middle_from(n, k, m, &hist)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PittelReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub uniform_prob: RationalRepr,
    pub p_random_prob: RationalRepr,
    /// The weights `p^|S| (1-p)^(n-|S|)` summed over all subsets equal 1.
    pub weights_sum_to_one: bool,
    pub holds: bool,
}

fn pittel_from(n: usize, k: usize, m: usize, uniform: &[u64], by_size: &[Vec<u64>]) -> PittelReport {
    let p = density(n, k);
    let q = BigRational::one() - &p;
    let total: u64 = uniform.iter().sum();
    let u = big_from_ints(suffix(uniform, m), total);
    let mut pr = BigRational::zero();
    let mut weight_total = BigRational::zero();
    for (j, row) in by_size.iter().enumerate() {
        let w = Pow::pow(&p, j) * Pow::pow(&q, n - j);
        let all: u64 = row.iter().sum();
        weight_total += &w * BigRational::from_integer(BigInt::from(all));
        pr += w * BigRational::from_integer(BigInt::from(suffix(row, m)));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    PittelReport {
        n,
        k,
        m,
        holds: u <= &two * &pr,
        uniform_prob: RationalRepr::from(&u),
        p_random_prob: RationalRepr::from(&pr),
        weights_sum_to_one: weight_total.is_one(),
    }
}

/// Uniform `k`-subset tail against twice the `p`-random tail, `p = k/n`, both exact.
pub fn pittel_compare(n: usize, k: usize, m: usize, budget: u64) -> Result<PittelReport> {
    check_nk(n, k)?;
    let uniform = missing_histogram(n, k, budget)?;
    let by_size = missing_by_size(n, budget)?;
    Ok(pittel_from(n, k, m, &uniform, &by_size))
}

/// [`pittel_compare`] for every `m` in `0..=2n-1`.
pub fn pittel_sweep(n: usize, k: usize, budget: u64) -> Result<Vec<PittelReport>> {
    check_nk(n, k)?;
    let uniform = missing_histogram(n, k, budget)?;
    let by_size = missing_by_size(n, budget)?;
    Ok((0..2 * n).map(|m| pittel_from(n, k, m, &uniform, &by_size)).collect())
}

/// Number of `k`-subsets of `[n]`, for callers sizing an exact run.
pub fn subset_count(n: usize, k: usize) -> BigUint {
    crate::arith::binomial_big(n as i64, k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(t: &TailEstimate) -> BigRational {
        t.exact_value().unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        big_from_ints(a, b)
    }

    #[test]
    fn small_missing_tails() {
        assert_eq!(exact(&exact_tail_missing(4, 2, 4, DEFAULT_EXACT_BUDGET).unwrap()), q(1, 1));
        assert_eq!(exact(&exact_tail_missing(4, 2, 5, DEFAULT_EXACT_BUDGET).unwrap()), q(0, 1));
        let t = exact_tail_missing(7, 3, 0, DEFAULT_EXACT_BUDGET).unwrap();
        assert_eq!(exact(&t), q(1, 1));
        assert!(t.bound_holds());
        assert_eq!(t.csv_record()[3..5], ["1".to_string(), "1".to_string()]);
    }

    #[test]
    fn bound_needs_k_at_most_two_thirds_n() {
        let t = exact_tail_missing(6, 5, 2, DEFAULT_EXACT_BUDGET).unwrap();
        assert!(t.bound.is_none() && !t.notes.is_empty());
        let t = exact_tail_missing(6, 4, 2, DEFAULT_EXACT_BUDGET).unwrap();
        assert!(t.bound.is_some());
    }

    #[test]
    fn sweep_is_monotone_and_bounded() {
        let sweep = exact_tail_sweep(12, 6, DEFAULT_EXACT_BUDGET).unwrap();
        assert!(sweep.iter().all(TailEstimate::bound_holds));
        assert!(sweep.windows(2).all(|w| exact(&w[0]) >= exact(&w[1])));
        assert_eq!(sweep[0].trials, 924);
    }

    #[test]
    fn monte_carlo_basics() {
        let mut s = SeededSampler::new(3, 0);
        let t = mc_tail_missing(4, 2, 4, 500, &mut s, Z95).unwrap();
        assert_eq!((t.hits, t.trials), (500, 500));
        assert!(mc_tail_missing(4, 2, 4, 0, &mut s, Z95).is_err());
        let a = mc_tail_missing(12, 6, 8, 2000, &mut SeededSampler::new(9, 4), Z95).unwrap();
        let b = mc_tail_missing(12, 6, 8, 2000, &mut SeededSampler::new(9, 4), Z95).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn middle_cover_examples() {
        let t = middle_cover_check(4, 3, 2, &TailOptions::default()).unwrap();
        assert_eq!(exact(&t), q(1, 1));
        assert!(t.bound_holds());
        assert_eq!(t.bound.as_ref().unwrap().value, "56/9");
        let t = middle_cover_check(4, 2, 5, &TailOptions::default()).unwrap();
        assert_eq!(exact(&t), q(0, 1));
        let sweep = middle_cover_sweep(12, 6, DEFAULT_EXACT_BUDGET).unwrap();
        assert!(sweep.iter().all(TailEstimate::bound_holds));
        assert!(sweep.windows(2).all(|w| exact(&w[0]) >= exact(&w[1])));
    }

    #[test]
    fn middle_cover_falls_back_to_monte_carlo() {
        let opts = TailOptions {
            exact_budget: 10,
            mc_trials: 200,
            ..TailOptions::default()
        };
        let t = middle_cover_check(12, 6, 3, &opts).unwrap();
        assert!(matches!(t.method, Method::MonteCarlo { .. }) && t.trials == 200);
    }

    #[test]
    fn pittel_examples() {
        let r = pittel_compare(4, 2, 4, DEFAULT_EXACT_BUDGET).unwrap();
        assert_eq!(r.uniform_prob.to_big().unwrap(), q(1, 1));
        assert_eq!(r.p_random_prob.to_big().unwrap(), q(11, 16));
        assert!(r.holds && r.weights_sum_to_one);
        let r = pittel_compare(4, 2, 0, DEFAULT_EXACT_BUDGET).unwrap();
        assert_eq!(r.p_random_prob.to_big().unwrap(), q(1, 1));
        assert!(pittel_sweep(6, 3, DEFAULT_EXACT_BUDGET).unwrap().iter().all(|r| r.holds && r.weights_sum_to_one));
    }
}
