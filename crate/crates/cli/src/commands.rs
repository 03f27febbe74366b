use std::fs;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sumlab::arith::{
    check_appendix_b_grid, check_primitive_inequalities, constants, inequalities::VERDICT_CSV_HEADER, Epsilon,
    InequalityVerdict, TailCountGrid,
};
use sumlab::arith::inequalities::{GridSummary, PrimitiveGrid};
use sumlab::constructions::{
    ap_subset_family_with, appc_family_with, endpoint_family_fkg, fkg_independent_check, fkg_sweep, two_point_extension,
    EndpointParams, FamilyOptions, LoopGraph,
};
use sumlab::enumerate::{census_with_members, structure_curve, ClassifierParams, EnumOptions};
use sumlab::lemmas::{
    sweep_covering, sweep_freiman, sweep_injection, sweep_supersat, SweepRow, SweepSummary, SWEEP_CSV_HEADER,
};
use sumlab::prob::{exact_tail_sweep, middle_cover_sweep, pittel_sweep, SeededSampler, TailOptions, TAIL_CSV_HEADER};
use sumlab::ratio::fmt_rational64;
use sumlab::sumset::LambdaParams;
use sumlab::{Error, Result};

use crate::cli::{Common, ConstructArgs, Construction, EnumerateArgs, GridSize, Suite, VerifyArgs};
use crate::run::{csv_text, RunOutput};

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn missing(flag: &str, what: &str) -> Error {
    Error::Parameter(format!("{what} needs --{flag}"))
}

pub fn enumerate_config(common: &Common, args: &EnumerateArgs) -> Result<Value> {
    let mut cfg = json!({ "command": "enumerate", "common": to_value(common)?, "params": to_value(args)? });
    if args.lambda > Rational64::from_integer(2) {
        let bundle = constants(args.lambda, Epsilon::Rational(args.epsilon), sumlab::arith::interval::DEFAULT_PRECISION)?;
        cfg["constants"] = to_value(&bundle.repr())?;
    }
    Ok(cfg)
}

pub fn enumerate(common: &Common, args: &EnumerateArgs) -> Result<RunOutput> {
    let base = LambdaParams::new(args.n, args.k, args.lambda)?.with_floor_mode(args.floor_mode);
    let mut params = ClassifierParams::new(base).with_overrides(args.delta, args.f, args.c);
    params.epsilon = Epsilon::Rational(args.epsilon);
    let opts = EnumOptions {
        workers: common.workers,
        max_nodes: Some(args.max_nodes),
    };
    let (ledger, members) = census_with_members(&params, &opts, args.members)?;
    let mut files = vec![(
        "ell_histogram.csv".to_string(),
        csv_text(&["ell", "count"], ledger.by_ell.iter().map(|(l, c)| [l.to_string(), c.to_string()]))?,
    )];
    let mut summary = vec![format!(
        "enumerate n={} k={} lambda={}: total {}",
        args.n,
        args.k,
        fmt_rational64(&args.lambda),
        ledger.total
    )];
    let mut curve_value = Value::Null;
    if args.emit_curve && ledger.total > 0u32.into() {
        let c_max = args.c_max.unwrap_or_else(|| args.n - (args.lambda * args.k / 2).floor().to_integer());
        let curve = structure_curve(&ledger, &base, c_max.max(0))?;
        let monotone = curve
            .windows(2)
            .all(|w| w[0].fraction.to_big() <= w[1].fraction.to_big());
        summary.push(format!("structure curve: {} points, monotone {monotone}", curve.len()));
        files.push((
            "curve.csv".to_string(),
            csv_text(
                &["c", "fraction_num", "fraction_den", "fraction"],
                curve.iter().map(|p| {
                    let f = p.fraction.to_big().and_then(|q| q.to_f64()).unwrap_or(f64::NAN);
                    [p.c.to_string(), p.fraction.num.clone(), p.fraction.den.clone(), format!("{f:.6}")]
                }),
            )?,
        ));
        curve_value = to_value(&curve)?;
    }
    if args.members {
        let mut lines = String::new();
        for m in &members {
            lines.push_str(&serde_json::to_string(m.elements())?);
            lines.push('\n');
        }
        files.push(("members.jsonl".to_string(), lines));
    }
    Ok(RunOutput {
        result: json!({ "ledger": to_value(&ledger)?, "curve": curve_value }),
        files,
        passed: true,
        summary,
    })
}

pub fn verify_config(common: &Common, args: &VerifyArgs) -> Result<Value> {
    Ok(json!({ "command": "verify", "common": to_value(common)?, "params": to_value(args)? }))
}

fn sweep_output(suite: &str, s: SweepSummary, rows: Vec<SweepRow>) -> Result<RunOutput> {
    let line = format!(
        "{suite}: {} violations / {} applicable ({} checked)",
        s.violations, s.applicable, s.checked
    );
    let files = if rows.is_empty() {
        Vec::new()
    } else {
        vec![(format!("verify-{suite}.csv"), csv_text(&SWEEP_CSV_HEADER, rows.iter().map(SweepRow::csv_record))?)]
    };
    Ok(RunOutput {
        passed: s.all_hold(),
        result: to_value(&s)?,
        files,
        summary: vec![line],
    })
}

fn grid_output(suite: &str, g: GridSummary, all: Vec<InequalityVerdict>) -> Result<RunOutput> {
    let mut summary = Vec::new();
    for f in &g.families {
        let id = f.inequality_id.map(|i| i.to_string()).unwrap_or_default();
        summary.push(format!(
            "{suite} {id}: {} fails, {} indeterminate / {} checked ({} skipped)",
            f.fails, f.indeterminate, f.checked, f.skipped
        ));
    }
    let rows: Vec<&InequalityVerdict> = if all.is_empty() { g.failures.iter().collect() } else { all.iter().collect() };
    let csv = csv_text(&VERDICT_CSV_HEADER, rows.iter().map(|v| v.csv_record()))?;
    Ok(RunOutput {
        passed: g.all_hold(),
        result: to_value(&g)?,
        files: vec![(format!("verify-{suite}.csv"), csv)],
        summary,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<RunOutput> {
    let mut rows = Vec::new();
    let mut push = |r: &SweepRow| rows.push(r.clone());
    let sink: Option<&mut dyn FnMut(&SweepRow)> = if args.rows { Some(&mut push) } else { None };
    match args.suite {
        Suite::Covering => {
            let s = sweep_covering(args.max.unwrap_or(12), sink)?;
            sweep_output("covering", s, rows)
        }
        Suite::Injection => {
            let s = sweep_injection(args.max.unwrap_or(12), sink)?;
            sweep_output("injection", s, rows)
        }
        Suite::Freiman => {
            let s = sweep_freiman(args.max.unwrap_or(17), args.min_size, args.max_size, sink)?;
            sweep_output("freiman", s, rows)
        }
        Suite::Supersat => {
            let s = sweep_supersat(args.max_y, &args.gammas, sink)?;
            sweep_output("supersat", s, rows)
        }
        Suite::Fkg => {
            let s = fkg_sweep(args.max_vertices, args.max_edges, args.max_loops, args.max_k)?;
            sweep_output("fkg", s, rows)
        }
        Suite::Tails => verify_tails(args.n, args.k),
        Suite::Pittel => verify_pittel(args.n, args.k),
        Suite::Inequalities => {
            let grid = match args.grid {
                GridSize::Default => PrimitiveGrid::default(),
                GridSize::Small => PrimitiveGrid::small(),
            };
            let mut all = Vec::new();
            let mut keep = |v: &InequalityVerdict| all.push(v.clone());
            let g = check_primitive_inequalities(&grid, if args.rows { Some(&mut keep) } else { None })?;
            grid_output("inequalities", g, all)
        }
        Suite::AppendixB => {
            let mut all = Vec::new();
            let mut keep = |v: &InequalityVerdict| all.push(v.clone());
            let g = check_appendix_b_grid(&TailCountGrid::default(), if args.rows { Some(&mut keep) } else { None })?;
            grid_output("appendix-b", g, all)
        }
    }
}

fn verify_tails(n: usize, k: usize) -> Result<RunOutput> {
    let budget = TailOptions::default().exact_budget;
    let missing = exact_tail_sweep(n, k, budget)?;
    let middle = middle_cover_sweep(n, k, budget)?;
    let fails = missing.iter().chain(&middle).filter(|t| !t.bound_holds()).count();
    let monotone = |v: &[sumlab::prob::TailEstimate]| v.windows(2).all(|w| w[0].exact_value() >= w[1].exact_value());
    let mono = monotone(&missing) && monotone(&middle);
    let header: Vec<&str> = std::iter::once("event").chain(TAIL_CSV_HEADER).collect();
    let csv = csv_text(
        &header,
        missing
            .iter()
            .map(|t| ("missing_at_least", t))
            .chain(middle.iter().map(|t| ("middle_uncovered", t)))
            .map(|(e, t)| std::iter::once(e.to_string()).chain(t.csv_record()).collect::<Vec<_>>()),
    )?;
    let evaluated = missing.iter().chain(&middle).filter(|t| t.bound.is_some()).count();
    Ok(RunOutput {
        passed: fails == 0 && mono,
        result: json!({ "missing": to_value(&missing)?, "middle": to_value(&middle)?, "monotone": mono }),
        files: vec![("verify-tails.csv".into(), csv)],
        summary: vec![format!(
            "tails n={n} k={k}: {fails} violations / {evaluated} bounds evaluated, monotone {mono}"
        )],
    })
}

fn verify_pittel(n: usize, k: usize) -> Result<RunOutput> {
    let reports = pittel_sweep(n, k, TailOptions::default().exact_budget)?;
    let fails = reports.iter().filter(|r| !(r.holds && r.weights_sum_to_one)).count();
    let csv = csv_text(
        &["n", "k", "m", "uniform_num", "uniform_den", "p_random_num", "p_random_den", "holds"],
        reports.iter().map(|r| {
            [
                r.n.to_string(),
                r.k.to_string(),
                r.m.to_string(),
                r.uniform_prob.num.clone(),
                r.uniform_prob.den.clone(),
                r.p_random_prob.num.clone(),
                r.p_random_prob.den.clone(),
                r.holds.to_string(),
            ]
        }),
    )?;
    Ok(RunOutput {
        passed: fails == 0,
        result: to_value(&reports)?,
        files: vec![("verify-pittel.csv".into(), csv)],
        summary: vec![format!("pittel n={n} k={k}: {fails} violations / {} values of m", reports.len())],
    })
}

pub fn construct_config(common: &Common, args: &ConstructArgs) -> Result<Value> {
    let mut cfg = json!({ "command": "construct", "common": to_value(common)?, "params": to_value(args)? });
    if let Some(path) = &args.graph {
        let g = read_graph(path)?;
        cfg["graph"] = to_value(&g)?;
    }
    Ok(cfg)
}

fn read_graph(path: &std::path::Path) -> Result<LoopGraph> {
    let g: LoopGraph = serde_json::from_slice(&fs::read(path)?)?;
    g.validate()?;
    Ok(g)
}

fn lambda_params(args: &ConstructArgs, what: &str) -> Result<LambdaParams> {
    let n = args.n.ok_or_else(|| missing("n", what))?;
    let k = args.k.ok_or_else(|| missing("k", what))?;
    let lambda = args.lambda.ok_or_else(|| missing("lambda", what))?;
    Ok(LambdaParams::new(n, k, lambda)?.with_floor_mode(args.floor_mode))
}

pub fn construct(common: &Common, args: &ConstructArgs) -> Result<RunOutput> {
    let family_opts = FamilyOptions {
        exhaustive_limit: args.exhaustive_limit,
        samples: args.trials,
        seed: common.seed,
    };
    let (result, passed, line) = match args.name {
        Construction::ApFamily | Construction::AppcFamily => {
            let params = lambda_params(args, "this family")?;
            let r = if args.name == Construction::ApFamily {
                ap_subset_family_with(&params, &family_opts)?
            } else {
                appc_family_with(&params, &family_opts)?
            };
            let line = format!(
                "{}: family_size {}, floor {}/{}, {} verified, {} violations",
                r.construction, r.family_size, r.claimed_floor.num, r.claimed_floor.den, r.verified_members, r.violation_count
            );
            (to_value(&r)?, r.passes(), line)
        }
        Construction::TwoPoint => {
            let k = args.k.ok_or_else(|| missing("k", "two-point"))?;
            let lambda = args.lambda.ok_or_else(|| missing("lambda", "two-point"))?;
            let r = args.r.ok_or_else(|| missing("r", "two-point"))?;
            let mut sampler = SeededSampler::new(common.seed, 0);
            let rep = two_point_extension(k, lambda, r, &mut sampler, args.trials)?;
            let line = format!(
                "two-point: success_fraction {:.4} (std error {:.4}) vs floor 0.5, {} structural violations",
                rep.success_fraction, rep.std_error, rep.structural_violations
            );
            (to_value(&rep)?, rep.passes(), line)
        }
        Construction::Fkg => {
            let path = args.graph.as_ref().ok_or_else(|| missing("graph", "fkg"))?;
            let g = read_graph(path)?;
            let k = args.k.ok_or_else(|| missing("k", "fkg"))?;
            let opts = TailOptions {
                mc_trials: args.trials,
                seed: common.seed,
                ..TailOptions::default()
            };
            let rep = fkg_independent_check(&g, k.max(0) as usize, &opts)?;
            let value = match &rep.exact {
                Some(q) => format!("{}/{}", q.num, q.den),
                None => format!("{:.6}", rep.estimate),
            };
            let line = format!("fkg: independent probability {value} vs bound {}: {}", rep.bound, rep.holds);
            (to_value(&rep)?, rep.holds.holds(), line)
        }
        Construction::Endpoint => {
            let p = EndpointParams {
                k: args.k.ok_or_else(|| missing("k", "endpoint"))?,
                lambda: args.lambda.ok_or_else(|| missing("lambda", "endpoint"))?,
                r: args.r.ok_or_else(|| missing("r", "endpoint"))?,
                b: args.b.ok_or_else(|| missing("b", "endpoint"))?,
            };
            let mut sampler = SeededSampler::new(common.seed, 0);
            let rep = endpoint_family_fkg(&p, &mut sampler, args.trials)?;
            let line = format!(
                "endpoint: {} members, {} implication violations, floor met {}",
                rep.verified_members, rep.violation_count, rep.floor_met
            );
            (to_value(&rep)?, rep.passes(), line)
        }
    };
    Ok(RunOutput {
        result,
        files: Vec::new(),
        passed,
        summary: vec![line],
    })
}
