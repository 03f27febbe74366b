//! Random sets `A' ∪ {0, v}` with `A'` packed below the middle and `v = lambda k/2 + r`.

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{SumsetScratch, MAX_EXAMPLES};
use crate::error::{parameter, Result};
use crate::prob::{wilson_interval, SamplerId, SeededSampler, Z95};
use crate::ratio::{fmt_rational64, floor64, serde_r64};
use crate::sumset::{ell, IntegerSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPointReport {
    pub k: i64,
    #[serde(with = "serde_r64")]
    pub lambda: Rational64,
    pub r: i64,
    /// `floor(lambda k/2)`.
    pub half: i64,
    pub v: i64,
    /// `A'` is drawn from `[window]`, `window = half - floor(8r/lambda)`.
    pub window: i64,
    pub sampler: SamplerId,
    pub trials: u64,
    pub successes: u64,
    pub success_fraction: f64,
    pub std_error: f64,
    pub ci: (f64, f64),
    pub markov_floor: f64,
    /// `success_fraction >= markov_floor - 3 * std_error`.
    pub floor_met: bool,
    /// Members with `gcd = 1`, whose smallest progression must have length `v + 1`.
    pub ell_checked: u64,
    pub structural_violations: u64,
    pub examples: Vec<String>,
    pub notes: Vec<String>,
}

impl TwoPointReport {
    pub fn passes(&self) -> bool {
        self.floor_met && self.structural_violations == 0
    }
}

pub fn two_point_extension(k: i64, lambda: Rational64, r: i64, sampler: &mut SeededSampler, trials: u64) -> Result<TwoPointReport> {
    if lambda < Rational64::from_integer(4) {
        return parameter(format!("need lambda >= 4 (got {})", fmt_rational64(&lambda)));
    }
    if r < 0 || k < 2 {
        return parameter(format!("need r >= 0 and k >= 2 (r = {r}, k = {k})"));
    }
    let sixteen = Rational64::from_integer(16 * r) / lambda;
    if floor64(&sixteen) > k {
        return parameter(format!("need k >= floor(16r/lambda) = {}", floor64(&sixteen)));
    }
    if trials == 0 {
        return parameter("need at least one trial");
    }
    let lk = lambda * k;
    let half_exact = lk / 2;
    let half = floor64(&half_exact);
    let eight = Rational64::from_integer(8 * r) / lambda;
    let window = half - floor64(&eight);
    if window < k - 2 {
        return parameter(format!("window [{window}] cannot hold k - 2 = {} elements", k - 2));
    }
    let v = half + r;
    let cap = floor64(&lk);
    let mut notes = Vec::new();
    if !half_exact.is_integer() {
        notes.push(format!("lambda k/2 = {} floored to {half}", fmt_rational64(&half_exact)));
    }
    if !eight.is_integer() {
        notes.push(format!("8r/lambda = {} floored to {}", fmt_rational64(&eight), floor64(&eight)));
    }
    if !sixteen.is_integer() {
        notes.push(format!("16r/lambda = {} floored for the k precondition", fmt_rational64(&sixteen)));
    }

    let id = sampler.id();
    let mut scratch = SumsetScratch::new(v as usize);
    let mut successes = 0u64;
    let mut ell_checked = 0u64;
    let mut violations = 0u64;
    let mut examples = Vec::new();
    let mut set = Vec::with_capacity(k as usize);
    for _ in 0..trials {
        set.clear();
        set.push(0);
        set.extend(sampler.k_subset(1, window as usize, (k - 2) as usize));
        set.push(v);
        let size = scratch.size(&set);
        let success = size as i64 <= cap;
        successes += success as u64;
        let mut bad = None;
        if set.len() as i64 != k || set[set.len() - 1] - set[0] != v {
            bad = Some("size or diameter");
        } else if success && set.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1 {
            ell_checked += 1;
            if ell(&IntegerSet::new(set.iter().copied()))? != v + 1 {
                bad = Some("smallest progression shorter than v + 1");
            }
        }
        if let Some(what) = bad {
            violations += 1;
            if examples.len() < MAX_EXAMPLES {
                examples.push(format!("{what}: {set:?}"));
            }
        }
    }
    let p = successes as f64 / trials as f64;
    let std_error = (p * (1.0 - p) / trials as f64).sqrt();
    Ok(TwoPointReport {
        k,
        lambda,
        r,
        half,
        v,
        window,
        sampler: id,
        trials,
        successes,
        success_fraction: p,
        std_error,
        ci: wilson_interval(successes, trials, Z95),
        markov_floor: 0.5,
        floor_met: p >= 0.5 - 3.0 * std_error,
        ell_checked,
        structural_violations: violations,
        examples,
        notes,
    })
}
