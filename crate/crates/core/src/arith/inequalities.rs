//! Grid sweeps over the binomial and analytic inequalities used in the
//! counting arguments.
//!
//! The four- and three-parameter binomial families run through dedicated
//! kernels that walk one parameter incrementally and compare cross-multiplied
//! big integers; the remaining families go through [`super::expr::compare`].

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::binomial::{binomial_big, pascal_rows};
use super::expr::{compare, CompareOptions, Product, VerdictMode};
use super::interval::{Truth, DEFAULT_PRECISION};
use crate::error::Result;
use crate::ratio::{abbrev_big, fmt_rational64, to_big};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityId {
    /// `C(a-c, b) <= ((a-b)/a)^c C(a, b)`
    BinomShrinkTop,
    /// `C(a-c, b-d) <= ((a-c)/a)^(b-d) (b/(a-b))^d C(a, b)`
    BinomShrinkBoth,
    /// `C(lk/2, k-b) <= (2/(l-2))^b C(lk/2, k)`
    BinomDropBottom,
    /// `C(a+c, b) <= (1 + c/(a-b))^b C(a, b)`
    BinomGrowTop,
    /// `C(a-c, b-c) <= (b/a)^c C(a, b)`
    BinomShrinkDiagonal,
    /// `C(ca, a) <= (c^c / (c-1)^(c-1))^a`
    CentralBinomEntropy,
    /// `(x-2) (x/(x-2))^(x/2) <= (y-2) (y/(y-2))^(x/2)` for `x, y > 2`
    LogConcavityMinimum,
    /// First tail-count bound, see [`super::appendix_b`].
    TailCountFirst,
    /// Second tail-count bound, see [`super::appendix_b`].
    TailCountSecond,
}

impl InequalityId {
    pub const PRIMITIVE: [InequalityId; 7] = [
        InequalityId::BinomShrinkTop,
        InequalityId::BinomShrinkBoth,
        InequalityId::BinomDropBottom,
        InequalityId::BinomGrowTop,
        InequalityId::BinomShrinkDiagonal,
        InequalityId::CentralBinomEntropy,
        InequalityId::LogConcavityMinimum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::BinomShrinkTop => "binom-shrink-top",
            InequalityId::BinomShrinkBoth => "binom-shrink-both",
            InequalityId::BinomDropBottom => "binom-drop-bottom",
            InequalityId::BinomGrowTop => "binom-grow-top",
            InequalityId::BinomShrinkDiagonal => "binom-shrink-diagonal",
            InequalityId::CentralBinomEntropy => "central-binom-entropy",
            InequalityId::LogConcavityMinimum => "log-concavity-minimum",
            InequalityId::TailCountFirst => "tail-count-first",
            InequalityId::TailCountSecond => "tail-count-second",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub inequality_id: InequalityId,
    /// `name=value` pairs joined by `;`.
    pub point: String,
    pub mode: VerdictMode,
    pub truth: Truth,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub const VERDICT_CSV_HEADER: [&str; 6] = ["inequality_id", "point", "mode", "holds", "lhs_repr", "rhs_repr"];

impl InequalityVerdict {
    pub fn csv_record(&self) -> [String; 6] {
        let holds = match self.truth {
            Truth::Holds => "true",
            Truth::Fails => "false",
            Truth::Indeterminate => "indeterminate",
        };
        [
            self.inequality_id.to_string(),
            self.point.clone(),
            self.mode.to_string(),
            holds.to_string(),
            self.lhs.clone(),
            self.rhs.clone(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub inequality_id: InequalityId,
    pub point: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub inequality_id: Option<InequalityId>,
    pub checked: u64,
    pub holds: u64,
    pub fails: u64,
    pub indeterminate: u64,
    pub skipped: u64,
}

impl FamilySummary {
    pub fn all_hold(&self) -> bool {
        self.checked > 0 && self.fails == 0 && self.indeterminate == 0
    }
}

/// Skipped points kept verbatim per family; the rest are only counted.
const SKIP_EXAMPLES: usize = 20;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GridSummary {
    pub families: Vec<FamilySummary>,
    /// Every verdict that did not certify `holds`.
    pub failures: Vec<InequalityVerdict>,
    pub skipped_examples: Vec<SkippedPoint>,
}

impl GridSummary {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty() && self.families.iter().all(FamilySummary::all_hold)
    }

    pub fn family(&self, id: InequalityId) -> Option<&FamilySummary> {
        self.families.iter().find(|f| f.inequality_id == Some(id))
    }

    pub fn extend(&mut self, other: GridSummary) {
        self.families.extend(other.families);
        self.failures.extend(other.failures);
        self.skipped_examples.extend(other.skipped_examples);
    }
}

/// Receives verdicts in grid order.
pub type VerdictSink<'a> = Option<&'a mut dyn FnMut(&InequalityVerdict)>;

#[derive(Default)]
pub(crate) struct Tally {
    pub summary: FamilySummary,
    pub emitted: Vec<InequalityVerdict>,
    pub failures: Vec<InequalityVerdict>,
    pub skipped: Vec<SkippedPoint>,
}

impl Tally {
    pub fn push(&mut self, truth: Truth, want_all: bool, make: impl FnOnce() -> InequalityVerdict) {
        self.summary.checked += 1;
        match truth {
            Truth::Holds => self.summary.holds += 1,
            Truth::Fails => self.summary.fails += 1,
            Truth::Indeterminate => self.summary.indeterminate += 1,
        }
        if want_all || truth != Truth::Holds {
            let v = make();
            if truth != Truth::Holds {
                self.failures.push(v.clone());
            }
            if want_all {
                self.emitted.push(v);
            }
        }
    }

    pub fn skip(&mut self, id: InequalityId, point: impl FnOnce() -> String, reason: &str) {
        self.summary.skipped += 1;
        if self.skipped.len() < SKIP_EXAMPLES {
            self.skipped.push(SkippedPoint {
                inequality_id: id,
                point: point(),
                reason: reason.to_string(),
            });
        }
    }

    pub fn skip_many(&mut self, count: u64, id: InequalityId, example: impl FnOnce() -> String, reason: &str) {
        self.skip(id, example, reason);
        self.summary.skipped += count - 1;
    }

    fn absorb(&mut self, other: Tally) {
        let s = &mut self.summary;
        s.checked += other.summary.checked;
        s.holds += other.summary.holds;
        s.fails += other.summary.fails;
        s.indeterminate += other.summary.indeterminate;
        s.skipped += other.summary.skipped;
        self.failures.extend(other.failures);
        let room = SKIP_EXAMPLES.saturating_sub(self.skipped.len());
        self.skipped.extend(other.skipped.into_iter().take(room));
    }
}

/// Runs `kernel` over `items` in parallel blocks, feeding the sink in item order.
pub(crate) fn run_family<T: Sync>(
    id: InequalityId,
    items: &[T],
    sink: &mut VerdictSink<'_>,
    kernel: impl Fn(&T, bool) -> Tally + Sync,
) -> GridSummary {
    let want_all = sink.is_some();
    let mut total = Tally::default();
    for block in items.chunks(16) {
        let parts: Vec<Tally> = block.par_iter().map(|item| kernel(item, want_all)).collect();
        for mut part in parts {
            if let Some(sink) = sink.as_mut() {
                for v in part.emitted.drain(..) {
                    sink(&v);
                }
            }
            total.absorb(part);
        }
    }
    total.summary.inequality_id = Some(id);
    GridSummary {
        families: vec![total.summary],
        failures: total.failures,
        skipped_examples: total.skipped,
    }
}

fn ratio(num: BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den.clone()))
}

fn exact_verdict(id: InequalityId, point: String, truth: Truth, lhs: BigRational, rhs: BigRational) -> InequalityVerdict {
    InequalityVerdict {
        inequality_id: id,
        point,
        mode: VerdictMode::Exact,
        truth,
        holds: truth.holds(),
        lhs: abbrev_big(&lhs),
        rhs: abbrev_big(&rhs),
        note: None,
    }
}

fn biguint(n: i64) -> BigUint {
    BigUint::from(n as u64)
}

fn binom_u(a: i64, b: i64) -> BigUint {
    binomial_big(a, b)
}

/// Sweep ranges for [`check_primitive_inequalities`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimitiveGrid {
    /// `a` range for the shrink-top, shrink-diagonal and grow-top families.
    pub a_max: i64,
    /// Up to this `a` the shrink-both family is swept over every `(b, c, d)`.
    pub shrink_both_full_max: i64,
    /// Beyond the full range and up to this `a`, shrink-both is sampled on
    /// `d in {0, 1, b-1}` and five values of `c` including both ends.
    pub shrink_both_slice_max: i64,
    pub grow_c_max: i64,
    #[serde(with = "crate::ratio::serde_r64_vec")]
    pub drop_lambdas: Vec<Rational64>,
    pub drop_k_max: i64,
    #[serde(with = "crate::ratio::serde_r64_vec")]
    pub central_cs: Vec<Rational64>,
    pub central_a_max: i64,
    /// `x, y` run over `j/den` in `(2, concavity_max]` for each listed denominator.
    pub concavity_denominators: Vec<i64>,
    pub concavity_max: i64,
    pub precision: u32,
}

impl Default for PrimitiveGrid {
    fn default() -> Self {
        PrimitiveGrid {
            a_max: 200,
            shrink_both_full_max: 200,
            shrink_both_slice_max: 200,
            grow_c_max: 40,
            drop_lambdas: [(5, 2), (3, 1), (7, 2), (4, 1), (9, 2), (5, 1), (6, 1), (8, 1), (10, 1)]
                .iter()
                .map(|&(n, d)| Rational64::new(n, d))
                .collect(),
            drop_k_max: 200,
            central_cs: [(3, 2), (2, 1), (3, 1), (10, 1)]
                .iter()
                .map(|&(n, d)| Rational64::new(n, d))
                .collect(),
            central_a_max: 40,
            concavity_denominators: vec![2, 3],
            concavity_max: 50,
            precision: DEFAULT_PRECISION,
        }
    }
}

impl PrimitiveGrid {
    /// A few seconds' worth of the default grid, for smoke runs.
    pub fn small() -> Self {
        PrimitiveGrid {
            a_max: 40,
            shrink_both_full_max: 20,
            shrink_both_slice_max: 40,
            grow_c_max: 10,
            drop_k_max: 40,
            central_a_max: 12,
            concavity_denominators: vec![2],
            concavity_max: 12,
            ..PrimitiveGrid::default()
        }
    }
}

/// Sweeps every primitive family on `grid`. All verdicts go to `sink` when one
/// is given; non-holding verdicts are always kept in the summary.
pub fn check_primitive_inequalities(grid: &PrimitiveGrid, mut sink: VerdictSink<'_>) -> Result<GridSummary> {
    let mut out = GridSummary::default();
    let a_values: Vec<i64> = (1..=grid.a_max).collect();
    out.extend(run_family(InequalityId::BinomShrinkTop, &a_values, &mut sink, shrink_top));
    let both: Vec<(i64, bool)> = (2..=grid.shrink_both_slice_max.max(grid.shrink_both_full_max))
        .map(|a| (a, a <= grid.shrink_both_full_max))
        .collect();
    let pascal = pascal_rows(grid.shrink_both_slice_max.max(grid.shrink_both_full_max).max(1) as usize);
    out.extend(run_family(InequalityId::BinomShrinkBoth, &both, &mut sink, |&(a, full), w| {
        shrink_both(a, full, &pascal, w)
    }));
    let drop: Vec<(Rational64, i64)> = grid
        .drop_lambdas
        .iter()
        .flat_map(|&l| (1..=grid.drop_k_max).map(move |k| (l, k)))
        .collect();
    out.extend(run_family(InequalityId::BinomDropBottom, &drop, &mut sink, |&(l, k), w| {
        drop_bottom(l, k, w)
    }));
    let c_max = grid.grow_c_max;
    out.extend(run_family(InequalityId::BinomGrowTop, &a_values, &mut sink, |&a, w| {
        grow_top(&a, c_max, w)
    }));
    out.extend(run_family(InequalityId::BinomShrinkDiagonal, &a_values, &mut sink, shrink_diagonal));

    let opts = CompareOptions {
        precision: grid.precision,
        allow_exact: true,
    };
    let central: Vec<(Rational64, i64)> = grid
        .central_cs
        .iter()
        .flat_map(|&c| (1..=grid.central_a_max).map(move |a| (c, a)))
        .collect();
    out.extend(run_family(InequalityId::CentralBinomEntropy, &central, &mut sink, |&(c, a), w| {
        central_binom(c, a, opts, w)
    }));
    let xs = concavity_values(grid);
    let pairs: Vec<(BigRational, Vec<BigRational>)> = xs.iter().map(|x| (x.clone(), xs.clone())).collect();
    out.extend(run_family(InequalityId::LogConcavityMinimum, &pairs, &mut sink, |(x, ys), w| {
        log_concavity(x, ys, opts, w)
    }));
    Ok(out)
}

fn concavity_values(grid: &PrimitiveGrid) -> Vec<BigRational> {
    let mut xs: Vec<BigRational> = Vec::new();
    for &den in &grid.concavity_denominators {
        for j in (2 * den + 1)..=(grid.concavity_max * den) {
            xs.push(BigRational::new(j.into(), den.into()));
        }
    }
    xs.sort();
    xs.dedup();
    xs
}

fn shrink_top(&a: &i64, want_all: bool) -> Tally {
    let id = InequalityId::BinomShrinkTop;
    let mut t = Tally::default();
    for b in 0..=a {
        let binom_ab = binom_u(a, b);
        // x = C(a-c, b), pa = a^c, pab = (a-b)^c
        let mut x = binom_ab.clone();
        let mut pa = BigUint::one();
        let mut pab = BigUint::one();
        for c in 0..=a {
            let truth = Truth::from_bool(x.is_zero() || &x * &pa <= &pab * &binom_ab);
            t.push(truth, want_all, || {
                exact_verdict(
                    id,
                    format!("a={a};b={b};c={c}"),
                    truth,
                    ratio(x.clone(), &BigUint::one()),
                    ratio(&pab * &binom_ab, &pa),
                )
            });
            if c < a {
                // C(a-c-1, b) = C(a-c, b) (a-c-b) / (a-c)
                x = if a - c - b > 0 {
                    x * biguint(a - c - b) / biguint(a - c)
                } else {
                    BigUint::zero()
                };
            }
            pa *= biguint(a);
            pab *= biguint(a - b);
        }
    }
    t
}

fn shrink_diagonal(&a: &i64, want_all: bool) -> Tally {
    let id = InequalityId::BinomShrinkDiagonal;
    let mut t = Tally::default();
    for b in 0..=a {
        let binom_ab = binom_u(a, b);
        // x = C(a-c, b-c), pa = a^c, pb = b^c
        let mut x = binom_ab.clone();
        let mut pa = BigUint::one();
        let mut pb = BigUint::one();
        for c in 0..=b {
            let truth = Truth::from_bool(&x * &pa <= &pb * &binom_ab);
            t.push(truth, want_all, || {
                exact_verdict(
                    id,
                    format!("a={a};b={b};c={c}"),
                    truth,
                    ratio(x.clone(), &BigUint::one()),
                    ratio(&pb * &binom_ab, &pa),
                )
            });
            if c < b {
                x = x * biguint(b - c) / biguint(a - c);
            }
            pa *= biguint(a);
            pb *= biguint(b);
        }
    }
    t
}

fn grow_top(&a: &i64, c_max: i64, want_all: bool) -> Tally {
    let id = InequalityId::BinomGrowTop;
    let mut t = Tally::default();
    for b in 0..a {
        let binom_ab = binom_u(a, b);
        let gap = a - b;
        let lhs_pow = biguint(gap).pow(b as u32);
        // x = C(a+c, b)
        let mut x = binom_ab.clone();
        for c in 0..=c_max {
            let rhs_pow = biguint(gap + c).pow(b as u32);
            let truth = Truth::from_bool(&x * &lhs_pow <= &rhs_pow * &binom_ab);
            t.push(truth, want_all, || {
                exact_verdict(
                    id,
                    format!("a={a};b={b};c={c}"),
                    truth,
                    ratio(x.clone(), &BigUint::one()),
                    ratio(&rhs_pow * &binom_ab, &lhs_pow),
                )
            });
            x = x * biguint(a + c + 1) / biguint(a + c + 1 - b);
        }
    }
    t
}

fn drop_bottom(lambda: Rational64, k: i64, want_all: bool) -> Tally {
    let id = InequalityId::BinomDropBottom;
    let mut t = Tally::default();
    let half = lambda * k / 2;
    let point = |b: i64| format!("lambda={};k={k};b={b}", fmt_rational64(&lambda));
    if !half.is_integer() {
        t.skip(id, || point(0), "lambda*k/2 is not an integer");
        return t;
    }
    let n = half.to_integer();
    let (p, q) = (*lambda.numer(), *lambda.denom());
    // (2/(lambda-2))^b = (2q)^b / (p-2q)^b
    let top_base = biguint(2 * q);
    let bottom_base = biguint(p - 2 * q);
    let binom_nk = binom_u(n, k);
    let mut y = binom_nk.clone();
    let mut pt = BigUint::one();
    let mut pbot = BigUint::one();
    for b in 0..=k {
        let truth = Truth::from_bool(&y * &pbot <= &pt * &binom_nk);
        t.push(truth, want_all, || {
            exact_verdict(
                id,
                point(b),
                truth,
                ratio(y.clone(), &BigUint::one()),
                ratio(&pt * &binom_nk, &pbot),
            )
        });
        if b < k {
            // C(n, k-b-1) = C(n, k-b) (k-b) / (n-k+b+1)
            y = y * biguint(k - b) / biguint(n - k + b + 1);
        }
        pt *= &top_base;
        pbot *= &bottom_base;
    }
    t
}

fn shrink_both(a: i64, full: bool, pascal: &[Vec<BigUint>], want_all: bool) -> Tally {
    let id = InequalityId::BinomShrinkBoth;
    let mut t = Tally::default();
    // pw[base][e] = base^e for base, e <= a
    let pw: Vec<Vec<BigUint>> = (0..=a)
        .map(|base| {
            let mut row = Vec::with_capacity(a as usize + 1);
            row.push(BigUint::one());
            for e in 1..=a as usize {
                let next = &row[e - 1] * biguint(base);
                row.push(next);
            }
            row
        })
        .collect();
    let p = |base: i64, e: i64| &pw[base as usize][e as usize];
    for b in 1..a {
        let binom_ab = &pascal[a as usize][b as usize];
        let ds: Vec<i64> = if full {
            (0..b).collect()
        } else {
            let mut v = vec![0, 1.min(b - 1), b - 1];
            v.dedup();
            v
        };
        for d in ds {
            let e = b - d;
            let c_top = a - e;
            let k = p(a, e) * p(a - b, d);
            let m = p(b, d) * binom_ab;
            let mut cs: Vec<i64> = if full {
                (0..=c_top).collect()
            } else {
                vec![0, 1, 2, c_top / 2, c_top]
            };
            cs.retain(|&c| c <= c_top);
            cs.sort_unstable();
            cs.dedup();
            for c in cs {
                let x = &pascal[(a - c) as usize][e as usize];
                let rhs_pow = p(a - c, e);
                let truth = Truth::from_bool(x * &k <= rhs_pow * &m);
                t.push(truth, want_all, || {
                    exact_verdict(
                        id,
                        format!("a={a};b={b};c={c};d={d}"),
                        truth,
                        ratio(x.clone(), &BigUint::one()),
                        ratio(rhs_pow * &m, &k),
                    )
                });
            }
            if full && c_top + 1 < a {
                t.skip_many(
                    (a - 1 - c_top) as u64,
                    id,
                    || format!("a={a};b={b};c={};d={d}", c_top + 1),
                    "left side vanishes (b-d > a-c)",
                );
            }
        }
    }
    t
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn comparison_verdict(
    id: InequalityId,
    point: String,
    lhs: &Product,
    rhs: &Product,
    opts: CompareOptions,
    t: &mut Tally,
    want_all: bool,
) {
    match compare(lhs, rhs, opts) {
        Ok(c) => t.push(c.truth, want_all, || InequalityVerdict {
            inequality_id: id,
            point,
            mode: c.mode,
            truth: c.truth,
            holds: c.truth.holds(),
            lhs: c.lhs,
            rhs: c.rhs,
            note: None,
        }),
        Err(e) => t.skip(id, || point, &e.to_string()),
    }
}

fn central_binom(c: Rational64, a: i64, opts: CompareOptions, want_all: bool) -> Tally {
    let id = InequalityId::CentralBinomEntropy;
    let mut t = Tally::default();
    let point = format!("c={};a={a}", fmt_rational64(&c));
    let ca = c * a;
    if c <= Rational64::one() {
        t.skip(id, || point, "c must exceed 1");
        return t;
    }
    if !ca.is_integer() {
        t.skip(id, || point, "c*a is not an integer");
        return t;
    }
    let cb = to_big(&c);
    let cm1 = &cb - BigRational::one();
    let lhs = Product::one().binom_int(ca.to_integer(), a);
    let rhs = Product::one()
        .pow(cb.clone(), &cb * int(a))
        .pow(cm1.clone(), -(&cm1 * int(a)));
    comparison_verdict(id, point, &lhs, &rhs, opts, &mut t, want_all);
    t
}

fn log_concavity(x: &BigRational, ys: &[BigRational], opts: CompareOptions, want_all: bool) -> Tally {
    let id = InequalityId::LogConcavityMinimum;
    let mut t = Tally::default();
    let two = int(2);
    let half_x = x / &two;
    for y in ys {
        let point = format!("x={};y={}", abbrev_big(x), abbrev_big(y));
        let side = |z: &BigRational| {
            Product::one()
                .scalar(z - &two)
                .pow(z / (z - &two), half_x.clone())
        };
        comparison_verdict(id, point, &side(x), &side(y), opts, &mut t, want_all);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> PrimitiveGrid {
        PrimitiveGrid {
            a_max: 14,
            shrink_both_full_max: 10,
            shrink_both_slice_max: 16,
            grow_c_max: 5,
            drop_k_max: 12,
            central_a_max: 6,
            concavity_denominators: vec![2],
            concavity_max: 6,
            ..PrimitiveGrid::default()
        }
    }

    #[test]
    fn classic_example_point() {
        let t = shrink_top(&10, true);
        let v = t.emitted.iter().find(|v| v.point == "a=10;b=3;c=2").unwrap();
        assert!(v.holds);
        assert_eq!(v.lhs, "56");
        assert_eq!(v.rhs, "294/5");
    }

    #[test]
    fn tiny_grid_holds_everywhere() {
        let mut rows = 0usize;
        let mut sink = |_: &InequalityVerdict| rows += 1;
        let s = check_primitive_inequalities(&tiny(), Some(&mut sink)).unwrap();
        assert!(s.all_hold(), "{:?}", s.failures.first());
        let checked: u64 = s.families.iter().map(|f| f.checked).sum();
        assert_eq!(rows as u64, checked);
        assert_eq!(s.families.len(), 7);
    }

    fn naive(id: InequalityId, a: i64, b: i64, c: i64, d: i64) -> bool {
        let q = |n: i64, m: i64| BigRational::new(n.into(), m.into());
        let bin = |x: i64, y: i64| BigRational::from_integer(BigInt::from(binomial_big(x, y)));
        let powq = |base: BigRational, e: i64| {
            let mut acc = BigRational::one();
            for _ in 0..e {
                acc *= &base;
            }
            acc
        };
        match id {
            InequalityId::BinomShrinkTop => bin(a - c, b) <= powq(q(a - b, a), c) * bin(a, b),
            InequalityId::BinomShrinkBoth => {
                bin(a - c, b - d) <= powq(q(a - c, a), b - d) * powq(q(b, a - b), d) * bin(a, b)
            }
            InequalityId::BinomGrowTop => bin(a + c, b) <= powq(q(a - b + c, a - b), b) * bin(a, b),
            InequalityId::BinomShrinkDiagonal => bin(a - c, b - c) <= powq(q(b, a), c) * bin(a, b),
            _ => unreachable!(),
        }
    }

    #[test]
    fn kernels_agree_with_direct_rational_evaluation() {
        for a in 1..=9 {
            for v in shrink_top(&a, true).emitted {
                let p: Vec<i64> = v.point.split(';').map(|kv| kv[2..].parse().unwrap()).collect();
                assert_eq!(v.holds, naive(v.inequality_id, p[0], p[1], p[2], 0));
            }
            for v in shrink_diagonal(&a, true).emitted {
                let p: Vec<i64> = v.point.split(';').map(|kv| kv[2..].parse().unwrap()).collect();
                assert_eq!(v.holds, naive(v.inequality_id, p[0], p[1], p[2], 0));
            }
            for v in grow_top(&a, 4, true).emitted {
                let p: Vec<i64> = v.point.split(';').map(|kv| kv[2..].parse().unwrap()).collect();
                assert_eq!(v.holds, naive(v.inequality_id, p[0], p[1], p[2], 0));
            }
            for v in shrink_both(a + 1, true, &pascal_rows(12), true).emitted {
                let p: Vec<i64> = v.point.split(';').map(|kv| kv[2..].parse().unwrap()).collect();
                assert_eq!(v.holds, naive(v.inequality_id, p[0], p[1], p[2], p[3]));
            }
        }
    }

    #[test]
    fn sliced_shrink_both_matches_full_sweep() {
        let pascal = pascal_rows(30);
        let full = shrink_both(30, true, &pascal, true);
        let sliced = shrink_both(30, false, &pascal, true);
        assert!(sliced.summary.checked < full.summary.checked);
        for v in &sliced.emitted {
            assert!(full.emitted.contains(v));
        }
    }

    #[test]
    fn central_binomial_example() {
        let t = central_binom(Rational64::from_integer(2), 3, CompareOptions::default(), true);
        assert_eq!(t.emitted[0].lhs, "20");
        assert_eq!(t.emitted[0].rhs, "64");
        assert!(t.emitted[0].holds);
    }

    #[test]
    fn concavity_diagonal_is_exact_equality() {
        let x = BigRational::new(7.into(), 2.into());
        let t = log_concavity(&x, std::slice::from_ref(&x), CompareOptions::default(), true);
        assert!(t.emitted[0].holds);
        assert_eq!(t.emitted[0].mode, VerdictMode::Exact);
    }

    #[test]
    fn interval_verdicts_never_flip_with_precision() {
        let xs: Vec<BigRational> = (7..=16).map(|j| BigRational::new(j.into(), 3.into())).collect();
        for prec in [64, 128, 256] {
            let opts = CompareOptions {
                precision: prec,
                allow_exact: false,
            };
            for x in &xs {
                let t = log_concavity(x, &xs, opts, false);
                assert_eq!(t.summary.fails, 0, "precision {prec}");
            }
        }
    }
}
