//! Subsets of arithmetic progressions that contain both endpoints.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{ConstructionReport, SumsetScratch};
use crate::arith::binomial_big;
use crate::error::{parameter, Error, Result};
use crate::prob::SeededSampler;
use crate::ratio::{fmt_rational64, to_big};
use crate::sumset::LambdaParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyOptions {
    /// Verify every member when the family is at most this large, else sample.
    pub exhaustive_limit: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            exhaustive_limit: 1_000_000,
            samples: 10_000,
            seed: 0,
        }
    }
}

/// Number of progressions of length `len >= 2` inside `[n]`.
pub fn progression_count(n: i64, len: i64) -> u64 {
    (1..)
        .map(|d| n - (len - 1) * d)
        .take_while(|&starts| starts > 0)
        .map(|s| s as u64)
        .sum()
}

/// `(1/lambda^3) (n^2/k) C(lambda k/2, k)`.
pub fn ap_family_floor(params: &LambdaParams) -> Result<BigRational> {
    let half = params.half_lambda_k()?;
    let lam = to_big(&params.lambda);
    let n2k = BigRational::new(BigInt::from(params.n * params.n), BigInt::from(params.k));
    Ok(n2k * BigRational::from_integer(binomial_big(half, params.k).into()) / (&lam * &lam * &lam))
}

struct Progressions {
    n: i64,
    len: i64,
    unit_only: bool,
}

impl Progressions {
    fn list(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        let mut d = 1;
        while self.n - (self.len - 1) * d > 0 {
            out.extend((1..=self.n - (self.len - 1) * d).map(|a| (a, d)));
            if self.unit_only {
                break;
            }
            d += 1;
        }
        out
    }
}

/// Calls `visit` on every `k`-subset of `{a, a+d, ..., a+(len-1)d}` containing both ends.
fn for_each_member(a: i64, d: i64, len: i64, k: i64, visit: &mut dyn FnMut(&[i64])) {
    let inner = (k - 2) as usize;
    let mut idx: Vec<i64> = (1..=inner as i64).collect();
    let mut set = vec![0i64; k as usize];
    loop {
        set[0] = a;
        for (slot, &i) in set[1..=inner].iter_mut().zip(&idx) {
            *slot = a + i * d;
        }
        set[inner + 1] = a + (len - 1) * d;
        visit(&set);
        // next combination of `inner` indices from 1..=len-2
        let mut j = inner;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if idx[j] < len - 2 - (inner - 1 - j) as i64 {
                idx[j] += 1;
                for t in j + 1..inner {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn check_member(params: &LambdaParams, a: i64, d: i64, len: i64, set: &[i64], scratch: &mut SumsetScratch) -> Option<String> {
    let describe = || format!("{set:?} from progression (start {a}, step {d})");
    if set.len() as i64 != params.k || set.windows(2).any(|w| w[0] >= w[1]) {
        return Some(format!("{} is not a {}-set", describe(), params.k));
    }
    if set[0] < 1 || set[set.len() - 1] > params.n {
        return Some(format!("{} leaves [{}]", describe(), params.n));
    }
    if set[0] != a || set[set.len() - 1] != a + (len - 1) * d {
        return Some(format!("{} does not pin its progression", describe()));
    }
    let size = scratch.size(set);
    if !params.admits(size) {
        return Some(format!("{} has |A+A| = {size}", describe()));
    }
    None
}

fn build(name: &str, params: &LambdaParams, unit_only: bool, floor: BigRational, opts: &FamilyOptions) -> Result<ConstructionReport> {
    let (n, k) = (params.n, params.k);
    let len = params.half_lambda_k()?;
    if k < 2 || len < k {
        return parameter(format!("the family needs 2 <= k <= lambda*k/2 (k = {k}, lambda*k/2 = {len})"));
    }
    let aps = Progressions { n, len, unit_only }.list();
    let per_ap = binomial_big(len - 2, k - 2);
    let size = BigUint::from(aps.len()) * &per_ap;
    let mut report = ConstructionReport::new(name, size.clone(), &floor);
    report.bump("progressions", aps.len() as u64);
    report.notes.extend(params.flags());

    let exhaustive = size.to_u64().is_some_and(|s| s <= opts.exhaustive_limit);
    if exhaustive {
        let parts: Vec<(u64, Vec<String>, Vec<Vec<i64>>)> = aps
            .par_iter()
            .map_init(
                || SumsetScratch::new(n as usize),
                |scratch, &(a, d)| {
                    let mut count = 0;
                    let mut bad = Vec::new();
                    let mut members = Vec::new();
                    for_each_member(a, d, len, k, &mut |set| {
                        count += 1;
                        if let Some(v) = check_member(params, a, d, len, set, scratch) {
                            bad.push(v);
                        }
                        members.push(set.to_vec());
                    });
                    (count, bad, members)
                },
            )
            .collect();
        let mut seen = HashSet::new();
        let mut duplicates = 0u64;
        for (count, bad, members) in parts {
            report.verified_members += count;
            for v in bad {
                report.violation(|| v);
            }
            for m in members {
                if !seen.insert(m) {
                    duplicates += 1;
                }
            }
        }
        if duplicates > 0 {
            report.violation(|| format!("{duplicates} members generated more than once"));
        }
        if BigUint::from(seen.len()) != size {
            report.violation(|| format!("{} distinct members generated, closed form says {size}", seen.len()));
        }
        report.bump("distinct_members", seen.len() as u64);
    } else {
        let mut sampler = SeededSampler::new(opts.seed, 0);
        let mut scratch = SumsetScratch::new(n as usize);
        let mut set = Vec::with_capacity(k as usize);
        for _ in 0..opts.samples {
            let i = rand::Rng::gen_range(sampler.rng(), 0..aps.len());
            let (a, d) = aps[i];
            set.clear();
            set.push(a);
            set.extend(sampler.k_subset(1, (len - 2) as usize, (k - 2) as usize).into_iter().map(|j| a + j * d));
            set.push(a + (len - 1) * d);
            report.verified_members += 1;
            if let Some(v) = check_member(params, a, d, len, &set, &mut scratch) {
                report.violation(|| v);
            }
        }
        report.notes.push(format!(
            "{} sampled members verified (uniform progression, then uniform subset)",
            opts.samples
        ));
    }
    Ok(report)
}

/// All `k`-subsets of progressions of length `lambda k/2` in `[n]` that contain both ends.
pub fn ap_subset_family(params: &LambdaParams) -> Result<ConstructionReport> {
    ap_subset_family_with(params, &FamilyOptions::default())
}

pub fn ap_subset_family_with(params: &LambdaParams, opts: &FamilyOptions) -> Result<ConstructionReport> {
    let lk = params.lambda_k_exact();
    if lk > num_rational::Rational64::from_integer(params.n) {
        return Err(Error::Precondition(format!(
            "lambda*k = {} exceeds n = {}; use the unit-window family for n <= lambda*k <= 2n",
            fmt_rational64(&lk),
            params.n
        )));
    }
    let floor = ap_family_floor(params)?;
    let mut report = build("ap-family", params, false, floor, opts)?;
    if params.lambda < num_rational::Rational64::from_integer(3) {
        report.notes.push("lambda below 3: floor evaluated outside the stated range".into());
    }
    Ok(report)
}

/// Unit-step windows only, for `n <= lambda k <= 2n`; floor `(1/lambda^2)(n - lambda k/2 + 1) C(lambda k/2, k)`.
pub fn appc_family(params: &LambdaParams) -> Result<ConstructionReport> {
    appc_family_with(params, &FamilyOptions::default())
}

pub fn appc_family_with(params: &LambdaParams, opts: &FamilyOptions) -> Result<ConstructionReport> {
    let lk = params.lambda_k_exact();
    let n = num_rational::Rational64::from_integer(params.n);
    if lk < n || lk > n * 2 {
        return parameter(format!("need n <= lambda*k <= 2n (n = {}, lambda*k = {})", params.n, fmt_rational64(&lk)));
    }
    if params.lambda < num_rational::Rational64::from_integer(3) {
        return parameter(format!("need lambda >= 3 (got {})", fmt_rational64(&params.lambda)));
    }
    let half = params.half_lambda_k()?;
    let lam = to_big(&params.lambda);
    let floor = BigRational::from_integer(BigInt::from(params.n - half + 1) * BigInt::from(binomial_big(half, params.k)))
        / (&lam * &lam);
    build("appc-family", params, true, floor, opts)
}
