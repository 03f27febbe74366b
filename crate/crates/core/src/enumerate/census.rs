use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use super::classify::{classify_with, ClassifierParams, DoublingRecord, Taxonomy, Thresholds};
use super::search::{fold_lambda, EnumOptions};
use crate::arith::binomial_big;
use crate::error::{domain, Result};
use crate::ratio::{fmt_rational64, RationalRepr};
use crate::sumset::{ell, IntegerSet, LambdaParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusParams {
    pub n: i64,
    pub k: i64,
    pub lambda: String,
    pub floor_mode: bool,
    pub epsilon: String,
    pub delta_override: Option<String>,
    pub f_override: Option<String>,
    pub c_override: Option<String>,
}

impl CensusParams {
    fn from(p: &ClassifierParams) -> Self {
        let s = |v: &Option<Rational64>| v.as_ref().map(fmt_rational64);
        CensusParams {
            n: p.base.n,
            k: p.base.k,
            lambda: fmt_rational64(&p.base.lambda),
            floor_mode: p.base.floor_mode,
            epsilon: p.epsilon.describe(),
            delta_override: s(&p.delta_override),
            f_override: s(&p.f_override),
            c_override: s(&p.c_override),
        }
    }
}

/// Counts of `Lambda(n, k, lambda)` by `l(A)` and by class.
///
/// Class keys are `<thresholds>:<class>` where thresholds is `formula` or
/// `override` and class is one of `lambda_star`, `F`, `F\lambda_star`, `I`,
/// `S`, `D`, `D(b,mub)`, `D*`, `T`, or the same behind `phi:` for the images
/// of `F \ Lambda*` under the reduction map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountLedger {
    pub params: CensusParams,
    pub flags: Vec<String>,
    #[serde(with = "crate::ratio::serde_biguint")]
    pub total: BigUint,
    pub by_ell: BTreeMap<i64, u64>,
    pub by_class: BTreeMap<String, u64>,
    /// `total / ((n^2/k) C(lambda k/2, k))`.
    pub ratio: Option<RationalRepr>,
}

impl CountLedger {
    pub fn ratio_value(&self) -> Option<BigRational> {
        self.ratio.as_ref().and_then(RationalRepr::to_big)
    }

    pub fn class(&self, key: &str) -> u64 {
        self.by_class.get(key).copied().unwrap_or(0)
    }
}

const BASE_CLASSES: [&str; 14] = [
    "lambda_star",
    "F",
    "F\\lambda_star",
    "I",
    "S",
    "D",
    "D*",
    "T",
    "phi",
    "phi:I",
    "phi:S",
    "phi:D",
    "phi:D*",
    "phi:T",
];

#[derive(Default)]
struct Part {
    total: u64,
    by_ell: BTreeMap<i64, u64>,
    by_class: BTreeMap<String, u64>,
    members: Vec<IntegerSet>,
}

fn bump(map: &mut BTreeMap<String, u64>, key: String) {
    *map.entry(key).or_default() += 1;
}

fn tally_taxonomy(t: &Taxonomy, prefix: &str, map: &mut BTreeMap<String, u64>) {
    if !t.in_family_i {
        return;
    }
    bump(map, format!("{prefix}:I"));
    if t.is_sparse == Some(true) {
        bump(map, format!("{prefix}:S"));
    } else {
        bump(map, format!("{prefix}:D"));
    }
    if let Some((b, mub)) = t.d_class {
        bump(map, format!("{prefix}:D({b},{mub})"));
    }
    if t.in_d_star {
        bump(map, format!("{prefix}:D*"));
    }
    if t.in_t_of_b {
        bump(map, format!("{prefix}:T"));
    }
}

fn tally(rec: &DoublingRecord, map: &mut BTreeMap<String, u64>) {
    let p = rec.thresholds.as_str();
    if rec.in_lambda_star {
        bump(map, format!("{p}:lambda_star"));
    }
    if rec.in_family_f {
        bump(map, format!("{p}:F"));
        if !rec.in_lambda_star {
            bump(map, format!("{p}:F\\lambda_star"));
        }
    }
    tally_taxonomy(&rec.taxonomy, p, map);
    if let Some(red) = &rec.reduction {
        bump(map, format!("{p}:phi"));
        tally_taxonomy(&red.taxonomy, &format!("{p}:phi"), map);
    }
}

/// `(n^2/k) C(lambda k/2, k)`, or `None` when `lambda k/2` is unavailable or the binomial vanishes.
pub fn normalizer(params: &LambdaParams) -> Option<BigRational> {
    let half = params.half_lambda_k().ok()?;
    let binom = binomial_big(half, params.k);
    if binom == BigUint::from(0u32) {
        return None;
    }
    let n2 = BigInt::from(params.n) * BigInt::from(params.n);
    Some(BigRational::new(n2 * BigInt::from(binom), BigInt::from(params.k)))
}

/// Census of `Lambda(n, k, lambda)`; with `keep_members` the members come back
/// in lexicographic order.
pub fn census_with_members(
    params: &ClassifierParams,
    opts: &EnumOptions,
    keep_members: bool,
) -> Result<(CountLedger, Vec<IntegerSet>)> {
    params.validate()?;
    let base = params.base;
    let mut flags = base.flags();
    let classifying = base.half_lambda_k().is_ok() && base.lambda_k().is_ok();
    let mut tiers: Vec<Thresholds> = Vec::new();
    if classifying {
        tiers.push(params.formula_thresholds()?);
        if let Some(t) = params.override_thresholds()? {
            flags.push(format!(
                "override columns: delta={}, f={}, c={}",
                params.delta_override.map_or("formula".into(), |v| fmt_rational64(&v)),
                params.f_override.map_or("formula".into(), |v| fmt_rational64(&v)),
                params.c_override.map_or("formula".into(), |v| fmt_rational64(&v)),
            ));
            tiers.push(t);
        }
        if base.lambda < Rational64::from_integer(3) {
            flags.push("formula constants evaluated below their stated range lambda >= 3".into());
        }
    } else {
        flags.push(format!(
            "classification skipped: lambda*k/2 = {} is not an integer (enable floor mode)",
            fmt_rational64(&base.half_lambda_k_exact())
        ));
    }
    let parts = fold_lambda(&base, opts, Part::default, |part, elems| {
        let a = IntegerSet::new(elems.iter().copied());
        part.total += 1;
        *part.by_ell.entry(ell(&a).expect("non-empty")).or_default() += 1;
        for th in &tiers {
            let rec = classify_with(&a, &base, th).expect("parameters validated before the search");
            tally(&rec, &mut part.by_class);
        }
        if keep_members {
            part.members.push(a);
        }
    })?;
    let mut total = 0u64;
    let mut by_ell = BTreeMap::new();
    let mut by_class = BTreeMap::new();
    for th in &tiers {
        for c in BASE_CLASSES {
            by_class.insert(format!("{}:{c}", th.label), 0);
        }
    }
    let mut members = Vec::new();
    for part in parts {
        total += part.total;
        for (l, c) in part.by_ell {
            *by_ell.entry(l).or_default() += c;
        }
        for (key, c) in part.by_class {
            *by_class.entry(key).or_default() += c;
        }
        members.extend(part.members);
    }
    let ratio = match normalizer(&base) {
        Some(norm) => Some(RationalRepr::from(&(BigRational::from_integer(BigInt::from(total)) / norm))),
        None => {
            flags.push("ratio unavailable: lambda*k/2 not integral or C(lambda*k/2, k) = 0".into());
            None
        }
    };
    let ledger = CountLedger {
        params: CensusParams::from(params),
        flags,
        total: BigUint::from(total),
        by_ell,
        by_class,
        ratio,
    };
    Ok((ledger, members))
}

pub fn census(params: &ClassifierParams, opts: &EnumOptions) -> Result<CountLedger> {
    census_with_members(params, opts, false).map(|(l, _)| l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub c: i64,
    pub fraction: RationalRepr,
}

/// `fraction(c) = |{A : l(A) <= lambda k/2 + c}| / |Lambda|` for `c = 0..=c_max`.
pub fn structure_curve(ledger: &CountLedger, params: &LambdaParams, c_max: i64) -> Result<Vec<CurvePoint>> {
    let total = BigInt::from(ledger.total.clone());
    if total == BigInt::from(0) {
        return domain("structure curve of an empty family");
    }
    if c_max < 0 {
        return domain(format!("c_max must be non-negative, got {c_max}"));
    }
    let (p, q) = (*params.lambda.numer() as i128, *params.lambda.denom() as i128);
    Ok((0..=c_max)
        .map(|c| {
            // l <= lambda k/2 + c  <=>  2 (l - c) q <= p k
            let hits: u64 = ledger
                .by_ell
                .iter()
                .filter(|(&l, _)| 2 * (l as i128 - c as i128) * q <= p * params.k as i128)
                .map(|(_, &n)| n)
                .sum();
            CurvePoint {
                c,
                fraction: RationalRepr::from(&BigRational::new(BigInt::from(hits), total.clone())),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(n: i64, k: i64, num: i64, den: i64) -> ClassifierParams {
        ClassifierParams::new(LambdaParams::new(n, k, Rational64::new(num, den)).unwrap())
    }

    fn frac(r: &RationalRepr) -> BigRational {
        r.to_big().unwrap()
    }

    #[test]
    fn all_three_sets_of_six() {
        let params = cp(6, 3, 2, 1);
        let l = census(&params, &EnumOptions::default()).unwrap();
        assert_eq!(l.total, BigUint::from(20u32));
        // l = 5: {1,2,5}, {1,4,5}, {2,3,6}, {2,5,6}; l = 6: {1,m,6} for m = 2..5.
        assert_eq!(l.by_ell, BTreeMap::from([(3, 6), (4, 6), (5, 4), (6, 4)]));
        let curve = structure_curve(&l, &params.base, 3).unwrap();
        let want = [(6, 20), (12, 20), (16, 20), (20, 20)];
        for (pt, (num, den)) in curve.iter().zip(want) {
            assert_eq!(frac(&pt.fraction), BigRational::new(num.into(), den.into()));
        }
    }

    #[test]
    fn odd_lambda_k_still_counts() {
        let l = census(&cp(6, 3, 5, 3), &EnumOptions::default()).unwrap();
        assert_eq!(l.total, BigUint::from(6u32));
        assert_eq!(l.by_ell, BTreeMap::from([(3, 6)]));
        assert!(l.flags.iter().any(|f| f.starts_with("classification skipped")));
        assert!(l.ratio.is_none());
    }

    #[test]
    fn override_columns_partition_i() {
        let params = cp(14, 4, 3, 1).with_overrides(Some(Rational64::new(1, 2)), Some(Rational64::new(1, 2)), Some(Rational64::from_integer(1)));
        let (l, members) = census_with_members(&params, &EnumOptions::default(), true).unwrap();
        assert_eq!(BigUint::from(members.len()), l.total);
        assert_eq!(l.by_ell.values().sum::<u64>(), members.len() as u64);
        for p in ["formula", "override", "override:phi"] {
            assert_eq!(l.class(&format!("{p}:S")) + l.class(&format!("{p}:D")), l.class(&format!("{p}:I")));
        }
        assert_eq!(l.class("formula:I"), 0);
        assert_eq!(l.class("formula:lambda_star") as usize, members.len());
        assert!(l.class("override:F\\lambda_star") > 0);
        // Sets like {1,2,8,9} fit the window with both outliers on one side only.
        assert!(l.class("override:phi") < l.class("override:F\\lambda_star"));
        let json = serde_json::to_string(&l).unwrap();
        let back: CountLedger = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
    }
}
