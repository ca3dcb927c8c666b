use std::collections::BTreeSet;

use hsym::analysis::{theorem3_check, theorem4_check, ChsCombination, CombinationKind, Interval, VerdictStatus};
use hsym::bspline::{evaluate as eval_form, BSplineForm, KnotVector};
use hsym::chs::{evaluate, h_classical_monomial, h_classical_recurrence, h_equal, h_fractional, h_via_integral, PointTuple};
use hsym::semigroup::{compare_to_limit, length_multiset, GeneratorSet};
use hsym::suites::{run_suite, Suite, SuiteOptions};
use hsym::ComplexDegree;
use serde_json::Value;

use crate::config::{BsplineArgs, ChsArgs, ChsPath, ComboArgs, FileConfig, RunConfig, SemigroupArgs, VerifyArgs};
use crate::output::{Cell, Report, Table};
use crate::CliError;

/// Whether a completed command counts as success (exit 0) or a failed check (exit 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

pub const DEFAULT_BSPLINE_GRID: usize = 101;
pub const DEFAULT_COMBO_GRID: usize = 201;
pub const DEFAULT_COMBO_REFINE: usize = 50;

pub fn bspline(args: &BsplineArgs, file: &FileConfig) -> Result<(Report, Outcome), CliError> {
    let kv = KnotVector::new(args.knots.clone(), true)?;
    let form = match args.form.as_deref().or(file.form.as_deref()) {
        Some(s) => s.parse::<BSplineForm>()?,
        None if kv.is_strictly_increasing() => BSplineForm::Truncated,
        None => BSplineForm::Recurrence,
    };
    let grid = args.grid.or(file.grid).unwrap_or(DEFAULT_BSPLINE_GRID);
    if grid == 0 {
        return Err(CliError::Input("--grid must be positive".into()));
    }
    let (a, b) = (kv.first(), kv.last());
    let mut t = Table::new("rows", &["x", "f"]);
    for i in 0..grid {
        let x = if grid == 1 { a } else { a + (b - a) * i as f64 / (grid - 1) as f64 };
        t.push(vec![x.into(), eval_form(form, x, &kv)?.into()]);
    }
    let knots: Vec<String> = kv.knots().iter().map(f64::to_string).collect();
    let report = Report::new("bspline").meta("form", form.to_string()).meta("knots", knots.join(",")).table(t);
    Ok((report, Outcome::Pass))
}

pub fn chs(args: &ChsArgs, file: &FileConfig, rc: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let re = args.z.or(file.z_re).ok_or_else(|| CliError::Input("--z is required".into()))?;
    let z = ComplexDegree::new(re, args.z_im.or(file.z_im).unwrap_or(0.0));
    let pts = PointTuple::new(args.points.clone())?;
    let classical = |f: fn(u32, &PointTuple) -> f64| -> Result<f64, CliError> {
        if !z.is_nonnegative_integer() || z.re > u32::MAX as f64 {
            return Err(CliError::Input(format!("the {:?} path needs a nonnegative integer degree, got {z}", args.path)));
        }
        Ok(f(z.re as u32, &pts))
    };
    let (value, path, kappa): (hsym::Complex64, String, Option<f64>) = match args.path {
        ChsPath::Auto => {
            let r = evaluate(z, &pts)?;
            (r.value, r.path.to_string(), Some(r.condition_estimate))
        }
        ChsPath::Bialternant => {
            let r = h_fractional(z, &pts)?;
            (r.value, r.path.to_string(), Some(r.condition_estimate))
        }
        ChsPath::Integral => (integral(z, &pts, rc)?, "integral".into(), None),
        ChsPath::Equal => {
            if !pts.all_equal() {
                return Err(CliError::Input("the equal path needs all points equal".into()));
            }
            (h_equal(z, pts.points()[0], pts.len())?, "all_equal_formula".into(), None)
        }
        ChsPath::Monomial => (classical(h_classical_monomial)?.into(), "monomial_sum".into(), None),
        ChsPath::Recurrence => (classical(h_classical_recurrence)?.into(), "recurrence".into(), None),
    };
    let check = if args.cross_check { Some(integral(z, &pts, rc)?) } else { None };
    let mut t = Table::new(
        "result",
        &["z_re", "z_im", "value_re", "value_im", "path", "condition_estimate", "integral_re", "integral_im", "discrepancy"],
    );
    t.push(vec![
        z.re.into(),
        z.im.into(),
        value.re.into(),
        value.im.into(),
        path.into(),
        kappa.into(),
        check.map(|c| c.re).into(),
        check.map(|c| c.im).into(),
        check.map(|c| (c - value).norm()).into(),
    ]);
    Ok((Report::new("chs").table(t), Outcome::Pass))
}

fn integral(z: ComplexDegree, pts: &PointTuple, rc: &RunConfig) -> Result<hsym::Complex64, CliError> {
    let mut knots = pts.points().to_vec();
    knots.sort_by(f64::total_cmp);
    let kv = KnotVector::strict(knots)?;
    Ok(h_via_integral(z, &kv, &rc.quadrature)?)
}

pub fn verify(args: &VerifyArgs, file: &FileConfig, rc: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let suite: Suite = args.suite.parse()?;
    let opts = SuiteOptions {
        seed: rc.seed,
        samples: args.samples.or(file.samples),
        n: args.n.or(file.n),
        mu: args.mu.or(file.mu),
        p: args.p.or(file.p),
        q: args.q.or(file.q),
        z_re: args.z_re.or(file.z_re),
        z_im: args.z_im.or(file.z_im),
    };
    let report = run_suite(suite, &opts)?;
    let mut t = Table::new("cases", &["case", "passed", "checked", "skipped", "worst", "threshold", "detail"]);
    for c in &report.cases {
        t.push(vec![
            c.name.as_str().into(),
            c.passed.into(),
            c.checked.into(),
            c.skipped.into(),
            c.worst.into(),
            c.threshold.into(),
            c.detail.as_str().into(),
        ]);
        if !c.passed {
            log::error!("{suite}: {} failed: worst {:e} vs {:e}; {}", c.name, c.worst, c.threshold, c.detail);
        }
    }
    let passed = report.passed();
    eprintln!("{} {suite} ({} cases)", if passed { "PASS" } else { "FAIL" }, report.cases.len());
    let out = Report::new("verify").meta("suite", suite.name()).meta("seed", rc.seed).meta("passed", passed).table(t);
    Ok((out, if passed { Outcome::Pass } else { Outcome::Fail }))
}

pub fn parse_interval(s: &str) -> Result<Interval, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("all") {
        return Ok(Interval::whole());
    }
    let parse = |t: &str| -> Result<f64, CliError> {
        let t = t.trim();
        match t {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => t.parse().map_err(|_| CliError::Input(format!("invalid interval end `{t}`"))),
        }
    };
    let (r, s) = s
        .split_once(',')
        .ok_or_else(|| CliError::Input(format!("interval must be `all` or `r,s`, got `{s}`")))?;
    Ok(Interval::new(parse(r)?, parse(s)?)?)
}

fn read_combination(args: &ComboArgs) -> Result<ChsCombination, CliError> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.file.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed coefficient file: {e}")))?;
    let obj = v.as_object().ok_or_else(|| CliError::Input("coefficient file must hold a JSON object".into()))?;
    let allowed: BTreeSet<&str> = ["kind", "n", "c", "interval"].into();
    if let Some(k) = obj.keys().find(|k| !allowed.contains(k.as_str())) {
        return Err(CliError::Input(format!("unknown key `{k}` in coefficient file")));
    }
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Input("coefficient file needs a positive integer `n`".into()))?;
    let kind: CombinationKind = serde_json::from_value(serde_json::json!({
        "kind": obj.get("kind").cloned().unwrap_or(Value::Null),
        "c": obj.get("c").cloned().unwrap_or(Value::Null),
    }))
    .map_err(|e| CliError::Input(format!("malformed coefficients: {e}")))?;
    let interval = match (&args.interval, obj.get("interval")) {
        (Some(s), _) => parse_interval(s)?,
        (None, Some(Value::String(s))) => parse_interval(s)?,
        (None, Some(_)) => return Err(CliError::Input("`interval` must be a string such as \"all\" or \"0,inf\"".into())),
        (None, None) => Interval::whole(),
    };
    Ok(ChsCombination::new(kind, n as usize, interval)?)
}

pub fn combo(args: &ComboArgs, file: &FileConfig, rc: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let comb = read_combination(args)?;
    let verdict = match comb.kind {
        CombinationKind::Linear(_) => theorem3_check(&comb)?,
        CombinationKind::Product(_) => theorem4_check(
            &comb,
            args.grid.or(file.grid).unwrap_or(DEFAULT_COMBO_GRID),
            args.refine.or(file.refine).unwrap_or(DEFAULT_COMBO_REFINE),
            rc.seed,
        )?,
    };
    let w = verdict.witness.clone().unwrap_or_default();
    let mut t = Table::new(
        "verdict",
        &["status", "witness_x", "witness_y", "rational_witness", "witness_exact", "sampled_min", "detail"],
    );
    t.push(vec![
        verdict.status.to_string().into(),
        w.first().copied().into(),
        w.get(1).copied().into(),
        verdict.rational_witness.clone().into(),
        verdict.witness_exact.into(),
        verdict.sampled_min.into(),
        verdict.detail.clone().into(),
    ]);
    let kind = match comb.kind {
        CombinationKind::Linear(_) => "linear",
        CombinationKind::Product(_) => "product",
    };
    let outcome = match verdict.status {
        VerdictStatus::Positive | VerdictStatus::NotFalsified => Outcome::Pass,
        VerdictStatus::NotPositive | VerdictStatus::Falsified => Outcome::Fail,
    };
    let report = Report::new("combo")
        .meta("kind", kind)
        .meta("n", comb.n)
        .meta("interval", comb.interval.to_string())
        .meta("seed", rc.seed)
        .table(t);
    Ok((report, outcome))
}

/// `start:end:step` with an additive step, or a multiplicative one written `kx`.
pub fn parse_range(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Input(format!("--m-range must look like 100:10000:10x or 10:100:5, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(bad());
    };
    let start: u64 = start.trim().parse().map_err(|_| bad())?;
    let end: u64 = end.trim().parse().map_err(|_| bad())?;
    let step = step.trim();
    let mut out = Vec::new();
    if let Some(factor) = step.strip_suffix('x') {
        let factor: u64 = factor.parse().map_err(|_| bad())?;
        if factor < 2 || start == 0 {
            return Err(CliError::Input("a multiplicative range needs a factor ≥ 2 and a positive start".into()));
        }
        let mut m = start;
        while m <= end {
            out.push(m);
            m = m.checked_mul(factor).ok_or_else(bad)?;
        }
    } else {
        let step: u64 = step.parse().map_err(|_| bad())?;
        if step == 0 {
            return Err(CliError::Input("range step must be positive".into()));
        }
        out.extend((start..=end).step_by(step as usize));
    }
    Ok(out)
}

pub fn semigroup(args: &SemigroupArgs) -> Result<(Report, Outcome), CliError> {
    let gs = GeneratorSet::new(args.gens.clone())?;
    let ms = match (args.m, &args.m_range) {
        (Some(m), _) => vec![m],
        (None, Some(r)) => parse_range(r)?,
        (None, None) => return Err(CliError::Input("one of --m or --m-range is required".into())),
    };
    let mut dist = Table::new("distances", &["m", "total", "distinct_lengths", "sup_cdf_distance"]);
    let mut hist = Table::new("histogram", &["m", "length", "count"]);
    for m in ms {
        let d = length_multiset(m, &gs)?;
        if d.is_empty() {
            dist.push(vec![m.into(), 0u64.into(), 0usize.into(), Cell::Empty]);
            continue;
        }
        let c = compare_to_limit(m, &gs)?;
        dist.push(vec![m.into(), c.total.into(), c.distinct_lengths.into(), c.sup_cdf_distance.into()]);
        if args.histogram {
            for (&l, &k) in &d.counts {
                hist.push(vec![m.into(), l.into(), k.into()]);
            }
        }
    }
    let gens: Vec<String> = gs.gens().iter().map(u64::to_string).collect();
    let mut report = Report::new("semigroup").meta("gens", gens.join(",")).table(dist);
    if args.histogram {
        report = report.table(hist);
    }
    Ok((report, Outcome::Pass))
}
