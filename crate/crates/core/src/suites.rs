//! Randomized and fixed-case verification suites, one per identity family.
//!
//! Each suite returns a list of named cases with the worst observed metric
//! and the threshold it is held to. The command-line front end and the
//! acceptance harness both run these.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_hunter, check_im_sign, check_negative_orthant, classify_mu, spiral_witness, verify_theorem2, CONDITION_LIMIT,
};
use crate::bspline::{
    divided_difference, eval_determinant, eval_symmetric, eval_truncated, moments, peano_check, KnotVector,
    SampledFunction,
};
use crate::chs::{h_fractional, h_via_integral, PointTuple};
use crate::error::{Error, Result};
use crate::numerics::{ComplexDegree, QuadratureSpec};
use crate::sampling::{draw_knots, draw_tuple, stream_rng, Region};
use crate::schur::{check_prop_negative, check_prop_rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem1,
    Theorem2,
    Hunter,
    Prop2,
    Ex1,
    Ex2,
    Peano,
    Bspline,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Hunter,
        Suite::Prop2,
        Suite::Ex1,
        Suite::Ex2,
        Suite::Peano,
        Suite::Bspline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Theorem1 => "theorem1",
            Self::Theorem2 => "theorem2",
            Self::Hunter => "hunter",
            Self::Prop2 => "prop2",
            Self::Ex1 => "ex1",
            Self::Ex2 => "ex2",
            Self::Peano => "peano",
            Self::Bspline => "bspline",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Optional overrides; `None` selects the suite's default grid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: Option<usize>,
    pub n: Option<usize>,
    pub mu: Option<f64>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    /// The worst observed value of the case's metric.
    pub worst: f64,
    /// The value `worst` is compared against; see `detail` for the direction.
    pub threshold: f64,
    pub detail: String,
}

impl CaseResult {
    fn at_most(name: impl Into<String>, checked: usize, worst: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: worst <= threshold,
            checked,
            skipped: 0,
            worst,
            threshold,
            detail: detail.into(),
        }
    }

    fn at_least(name: impl Into<String>, checked: usize, worst: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: worst >= threshold,
            checked,
            skipped: 0,
            worst,
            threshold,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let cases = match suite {
        Suite::Theorem1 => theorem1(opts)?,
        Suite::Theorem2 => theorem2(opts)?,
        Suite::Hunter => hunter(opts)?,
        Suite::Prop2 => prop2(opts)?,
        Suite::Ex1 => ex1(opts)?,
        Suite::Ex2 => ex2(opts)?,
        Suite::Peano => peano(opts)?,
        Suite::Bspline => bspline(opts)?,
    };
    Ok(SuiteReport { suite, seed: opts.seed, cases })
}

fn n_list(opts: &SuiteOptions, default: &[usize]) -> Vec<usize> {
    opts.n.map_or_else(|| default.to_vec(), |n| vec![n])
}

/// Bialternant against the integral representation on random degrees and knots.
fn theorem1(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let samples = opts.samples.unwrap_or(200);
    let spec = QuadratureSpec::default();
    let draws: Vec<Option<(f64, String)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(opts.seed, i as u64);
            let n = opts.n.unwrap_or_else(|| rng.gen_range(2..=6));
            let re = opts.z_re.unwrap_or_else(|| rng.gen_range(-0.9..4.0));
            let im = opts.z_im.unwrap_or_else(|| [0.0, 1.0, -1.0][rng.gen_range(0..3)]);
            let z = ComplexDegree::new(re, im);
            let mut knots = draw_tuple(&mut rng, n, Region::Whole, false);
            knots.sort_by(f64::total_cmp);
            let f = h_fractional(z, &PointTuple::new(knots.clone())?)?;
            if f.condition_estimate > CONDITION_LIMIT {
                return Ok(None);
            }
            let g = h_via_integral(z, &KnotVector::strict(knots.clone())?, &spec)?;
            let ratio = (f.value - g).norm() / (1e-7 * (1.0 + f.value.norm()));
            Ok(Some((ratio, format!("z = {z}, knots = {knots:?}"))))
        })
        .collect::<Result<_>>()?;
    let skipped = draws.iter().filter(|d| d.is_none()).count();
    let (worst, at) = draws
        .iter()
        .flatten()
        .fold((0.0f64, String::new()), |acc, (r, s)| if *r > acc.0 { (*r, s.clone()) } else { acc });
    let checked = samples - skipped;
    let mut agreement = CaseResult::at_most(
        "bialternant vs integral",
        checked,
        worst,
        1.0,
        format!("max |difference| / (1e-7 (1 + |h|)); worst at {at}"),
    );
    agreement.skipped = skipped;
    let fraction = skipped as f64 / samples.max(1) as f64;
    let skip = CaseResult::at_most(
        "skipped fraction",
        samples,
        fraction,
        0.2,
        format!("draws with condition estimate above {CONDITION_LIMIT:e}"),
    );
    Ok(vec![agreement, skip])
}

const THEOREM2_MUS: [f64; 10] = [0.0, 0.3, 0.5, 1.0, 1.1, 1.5, 2.0, 2.4, 3.5, 4.0];

/// Sign of `Re h_μ`, plus the imaginary-part and negative-orthant direction checks.
fn theorem2(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let samples = opts.samples.unwrap_or(1000);
    let mus = opts.mu.map_or_else(|| THEOREM2_MUS.to_vec(), |m| vec![m]);
    let mut cases = Vec::new();
    for &mu in &mus {
        let class = classify_mu(mu)?;
        for n in n_list(opts, &[2, 3, 5]) {
            let r = verify_theorem2(mu, n, samples, opts.seed)?;
            let checked = r.outcomes.iter().map(|o| o.checked).sum();
            let skipped = r.outcomes.iter().map(|o| o.skipped).sum();
            let claims: Vec<String> = r.outcomes.iter().map(|o| format!("{}: {:?}", o.region, o.claim)).collect();
            let mut detail = format!("{:?}; {}", class.case, claims.join(", "));
            if let Some(v) = r.violations.first() {
                detail.push_str(&format!("; witness {:?} gives Re h = {:e}", v.tuple, v.value));
            }
            let mut c = CaseResult::at_most(format!("re sign mu={mu} n={n}"), checked, r.violations.len() as f64, 0.0, detail);
            c.skipped = skipped;
            cases.push(c);

            let q = check_negative_orthant(mu, n, samples, opts.seed)?;
            let detail = format!(
                "expected (sign Re, sign Im) = {:?} on the open negative orthant{}",
                q.expected,
                q.mismatches.first().map(|a| format!("; witness {a:?}")).unwrap_or_default()
            );
            cases.push(CaseResult::at_most(
                format!("negative orthant direction mu={mu} n={n}"),
                q.checked,
                q.mismatches.len() as f64,
                0.0,
                detail,
            ));

            let frac = mu - 2.0 * (mu / 2.0).floor();
            if frac > 0.0 && frac < 1.0 {
                let r = check_im_sign(mu, n, samples, opts.seed)?;
                let violations = r.sign.violations.len() + r.sphere_violations.len();
                let witness = r
                    .sign
                    .violations
                    .first()
                    .or(r.sphere_violations.first())
                    .map(|v| format!("; witness {:?} gives Im h = {:e}", v.tuple, v.value))
                    .unwrap_or_default();
                let detail = format!(
                    "Im h > 0 off [0,inf)^n, = 0 on it; sphere min {:.6e} vs sine bound {:.6e}{witness}",
                    r.sphere_min, r.sine_bound
                );
                let mut c = CaseResult::at_most(format!("im sign mu={mu} n={n}"), samples * 4, violations as f64, 0.0, detail);
                c.skipped = r.sign.outcomes.iter().map(|o| o.skipped).sum();
                cases.push(c);
            }
        }
    }
    Ok(cases)
}

/// Unit-sphere minima of `Re h_μ` against the closed-form lower bound.
fn hunter(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let samples = opts.samples.unwrap_or(100_000);
    let mut grid: Vec<(f64, usize)> = Vec::new();
    match (opts.mu, opts.p) {
        (Some(mu), _) => grid.extend(n_list(opts, &[3]).into_iter().map(|n| (mu, n))),
        (None, Some(p)) => grid.extend(n_list(opts, &[2, 3, 4]).into_iter().map(|n| (2.0 * p as f64, n))),
        (None, None) => {
            for p in 0..=2 {
                grid.extend(n_list(opts, &[2, 3, 4]).into_iter().map(|n| (2.0 * p as f64, n)));
            }
            grid.extend([(1.8, 3), (2.2, 3)]);
        }
    }
    let mut cases = Vec::new();
    for (mu, n) in grid {
        let r = check_hunter(mu, n, samples, opts.seed)?;
        let detail = format!(
            "min sample value {:.12} vs bound {:.12}; integral fallbacks {}",
            r.min_value, r.bound, r.integral_fallbacks
        );
        cases.push(CaseResult::at_least(format!("bound mu={mu} n={n}"), samples, r.min_value, r.bound - 1e-9, detail));
        if mu == 2.0 {
            // h_2 = (Σa² + (Σa)²)/2 attains 1/2 on the unit sphere wherever Σa = 0
            cases.push(CaseResult::at_most(
                format!("sharpness mu={mu} n={n}"),
                samples,
                r.relative_gap(),
                0.05,
                "relative gap between the sample minimum and the bound",
            ));
        } else if mu.fract() == 0.0 && mu >= 4.0 {
            let mut c = CaseResult::at_most(
                format!("sharpness mu={mu} n={n} (reported)"),
                samples,
                r.relative_gap(),
                f64::INFINITY,
                "relative gap, not asserted: the bound is not attained at small n",
            );
            c.passed = true;
            cases.push(c);
        }
    }
    Ok(cases)
}

/// Spiral witnesses for complex degrees, re-checked against an independent complex power.
fn prop2(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let grid: Vec<(ComplexDegree, usize)> = match (opts.z_re, opts.z_im) {
        (re, Some(im)) => n_list(opts, &[3]).into_iter().map(|n| (ComplexDegree::new(re.unwrap_or(0.0), im), n)).collect(),
        _ => vec![
            (ComplexDegree::new(0.0, 1.0), 3),
            (ComplexDegree::new(1.0, 1.0), 2),
            (ComplexDegree::new(0.5, 2.0), 4),
        ],
    };
    let mut cases = Vec::new();
    for (z, n) in grid {
        let w = spiral_witness(z, n)?;
        let expected = [(true, true), (false, true), (false, false), (true, false)];
        let zc = z.to_complex();
        let mut binom = Complex64::new(1.0, 0.0);
        for j in 1..n {
            binom *= (zc + j as f64) / j as f64;
        }
        let wrong = w
            .iter()
            .zip(expected)
            .filter(|(&a, (re, im))| {
                let h = binom * Complex64::new(a, 0.0).powc(zc);
                (h.re > 0.0, h.im > 0.0) != (*re, *im)
            })
            .count();
        cases.push(CaseResult::at_most(
            format!("spiral z={z} n={n}"),
            4,
            wrong as f64,
            0.0,
            format!("a = {w:?} realize (+,+), (-,+), (-,-), (+,-)"),
        ));
    }
    Ok(cases)
}

/// `h_{-z}` against its Schur-polynomial expression.
fn ex1(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let samples = opts.samples.unwrap_or(100);
    let mut cases = Vec::new();
    let fixed = PointTuple::new(vec![1.0, 2.0, 3.0])?;
    for z in 2..=4 {
        let r = check_prop_negative(z, &fixed)?;
        cases.push(CaseResult::at_most(
            format!("z={z} at (1,2,3)"),
            1,
            r.residual,
            1e-10,
            format!("h = {:.17e}, schur side = {:.17e}", r.lhs, r.rhs),
        ));
    }
    for n in n_list(opts, &[2, 3, 4, 5]) {
        for z in 1..=2 * n as u32 {
            let worst = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(opts.seed, ((n as u64) << 32) + ((z as u64) << 20) + i as u64);
                    let a = draw_tuple(&mut rng, n, Region::Whole, false);
                    let pts = PointTuple::new(a)?;
                    let r = check_prop_negative(z, &pts)?;
                    Ok(r.residual / (1e-9 * (1.0 + r.lhs.abs())))
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            cases.push(CaseResult::at_most(
                format!("z={z} n={n}"),
                samples,
                worst,
                1.0,
                "max residual / (1e-9 (1 + |h|))",
            ));
        }
    }
    Ok(cases)
}

const EX2_PAIRS: [(u32, u32); 5] = [(1, 2), (3, 2), (1, 3), (2, 3), (4, 3)];

/// `h_{p/q}` against the Schur expression in the `q`-th roots.
fn ex2(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let samples = opts.samples.unwrap_or(100);
    let mut cases = Vec::new();
    let pairs = match (opts.p, opts.q) {
        (Some(p), Some(q)) => vec![(p, q)],
        _ => EX2_PAIRS.to_vec(),
    };
    let single = opts.p.is_some() && opts.q.is_some();
    if !single || (opts.p, opts.q, opts.n) == (Some(2), Some(3), Some(4)) {
        let r = check_prop_rational(2, 3, &PointTuple::new(vec![1.0, 2.0, 3.0, 4.0])?)?;
        cases.push(CaseResult::at_most(
            "p/q=2/3 n=4 at (1,2,3,4)",
            1,
            r.residual,
            1e-8,
            format!("lambda = {}; h = {:.17e}", r.partition.expect("rational partition"), r.lhs),
        ));
    }
    for (p, q) in pairs {
        for n in n_list(opts, &[2, 3, 4]) {
            let lam = crate::schur::rational_partition(p, q, n)?;
            let worst = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(opts.seed, ((n as u64) << 40) + ((p as u64) << 32) + ((q as u64) << 24) + i as u64);
                    let pts = PointTuple::new(draw_tuple(&mut rng, n, Region::NonNegative, false))?;
                    let r = check_prop_rational(p, q, &pts)?;
                    Ok(r.residual / (1e-7 * (1.0 + r.lhs.abs())))
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            cases.push(CaseResult::at_most(
                format!("p/q={p}/{q} n={n}"),
                samples,
                worst,
                1.0,
                format!("lambda = {lam}; max residual / (1e-7 (1 + |h|))"),
            ));
        }
    }
    Ok(cases)
}

/// Divided differences against the integral of `f^{(n-1)}` times the density.
fn peano(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let spec = QuadratureSpec::default();
    let k = KnotVector::strict(vec![0.0, 1.0, 2.0])?;
    let cube = SampledFunction::new(|x| x * x * x).with_derivative(|x| 6.0 * x);
    let exp = SampledFunction::new(f64::exp).with_derivative(f64::exp);
    let constant = SampledFunction::new(|_| 3.0).with_derivative(|_| 0.0);
    let mut cases = vec![
        CaseResult::at_most("x^3 at (0,1,2)", 1, peano_check(&cube, &k, &spec)?, 1e-8, "residual"),
        CaseResult::at_most("exp at (0,1,2)", 1, peano_check(&exp, &k, &spec)?, 1e-8, "residual"),
        CaseResult::at_most("constant at (0,1,2)", 1, peano_check(&constant, &k, &spec)?, 1e-12, "residual"),
    ];
    let samples = opts.samples.unwrap_or(50);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = stream_rng(opts.seed, i as u64);
        let n = opts.n.unwrap_or_else(|| rng.gen_range(2..=6));
        let kv = KnotVector::strict(draw_knots(&mut rng, n))?;
        // f = exp(x/2): f^{(n-1)} = 2^{1-n} exp(x/2)
        let scale = 0.5f64.powi(n as i32 - 1);
        let f = SampledFunction::new(|x: f64| (x / 2.0).exp()).with_derivative(move |x: f64| scale * (x / 2.0).exp());
        worst = worst.max(peano_check(&f, &kv, &spec)?);
    }
    cases.push(CaseResult::at_most("exp(x/2) at random knots", samples, worst, 1e-8, "max residual"));
    Ok(cases)
}

/// Nonnegativity, support, unit integral, cross-form agreement, unimodality,
/// and divided-difference consistency on random knot vectors.
fn bspline(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let spec = QuadratureSpec::default();
    let vectors = opts.samples.unwrap_or(40);
    let ns: Vec<usize> = n_list(opts, &[2, 3, 4, 5, 6, 7, 8]);
    struct Stats {
        min_value: f64,
        support: f64,
        integral: f64,
        cross: f64,
        unimodal_violations: usize,
        dd: f64,
        points: usize,
    }
    let per_vector: Vec<Stats> = (0..vectors * ns.len())
        .into_par_iter()
        .map(|idx| {
            let n = ns[idx % ns.len()];
            let mut rng = stream_rng(opts.seed, idx as u64);
            let knots = draw_knots(&mut rng, n);
            let kv = KnotVector::strict(knots.clone())?;
            let (a, b) = (kv.first(), kv.last());
            let density_scale = (n - 1) as f64 / (b - a);
            let mut s = Stats {
                min_value: f64::INFINITY,
                support: 0.0,
                integral: (moments(&kv, 0, &spec)? - 1.0).abs(),
                cross: 0.0,
                unimodal_violations: 0,
                dd: 0.0,
                points: 0,
            };
            let forms = |x: f64| -> Result<Vec<f64>> {
                let mut v = vec![eval_truncated(x, &kv)?];
                if n >= 3 {
                    v.push(eval_symmetric(x, &kv)?);
                    v.push(eval_determinant(x, &kv)?);
                }
                Ok(v)
            };
            for _ in 0..1000 {
                let x = rng.gen_range(a..b);
                let v = forms(x)?;
                s.points += 1;
                s.min_value = s.min_value.min(v.iter().copied().fold(f64::INFINITY, f64::min));
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        s.cross = s.cross.max((v[i] - v[j]).abs() / density_scale);
                    }
                }
            }
            for x in [a - 1.0 - rng.gen::<f64>(), b + rng.gen::<f64>(), b] {
                let v = forms(x)?;
                s.support = s.support.max(if v[0] == 0.0 { 0.0 } else { f64::INFINITY });
                s.support = s.support.max(v[1..].iter().fold(0.0f64, |m, y| m.max(y.abs())));
            }
            if n >= 3 {
                let grid: Vec<f64> = (0..1000).map(|i| eval_truncated(a + (b - a) * (i as f64 + 0.5) / 1000.0, &kv)).collect::<Result<_>>()?;
                s.unimodal_violations = usize::from(!is_unimodal(&grid, 1e-9));
            }
            let values: Vec<f64> = knots.iter().map(|x| (x / 3.0).sin() + x * x).collect();
            let d = divided_difference(&values, &kv)?;
            s.dd = (d.value - d.explicit_sum).abs() / d.scale;
            Ok(s)
        })
        .collect::<Result<_>>()?;
    let total = per_vector.len();
    let points: usize = per_vector.iter().map(|s| s.points).sum();
    let fold = |f: &dyn Fn(&Stats) -> f64| per_vector.iter().map(f).fold(0.0f64, f64::max);
    let min_value = per_vector.iter().map(|s| s.min_value).fold(f64::INFINITY, f64::min);
    Ok(vec![
        CaseResult::at_least("nonnegativity", points, min_value, -1e-12, "smallest interior value over all forms"),
        CaseResult::at_most("support", total * 3, fold(&|s| s.support), 1e-10, "largest |F| at or beyond the ends"),
        CaseResult::at_most("unit integral", total, fold(&|s| s.integral), 1e-9, "max |∫F - 1|"),
        CaseResult::at_most(
            "cross-form agreement",
            points,
            fold(&|s| s.cross),
            1e-9,
            "max pairwise difference relative to (n-1)/(a_n-a_1)",
        ),
        CaseResult::at_most(
            "unimodality",
            total,
            per_vector.iter().map(|s| s.unimodal_violations).sum::<usize>() as f64,
            0.0,
            "grids with a second local maximum",
        ),
        CaseResult::at_most("divided-difference consistency", total, fold(&|s| s.dd), 1e-8, "max |table - sum| / Σ|f(a_j)/∏(a_j - a_k)|"),
    ])
}

/// Rises to one maximum and then falls, ignoring wiggles below `prominence`.
pub fn is_unimodal(values: &[f64], prominence: f64) -> bool {
    let Some((peak, _)) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return true;
    };
    let rising = values[..=peak].windows(2).all(|w| w[1] >= w[0] - prominence);
    let falling = values[peak..].windows(2).all(|w| w[1] <= w[0] + prominence);
    rising && falling
}
