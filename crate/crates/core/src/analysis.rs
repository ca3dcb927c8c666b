//! Positivity of `h_μ` for real `μ`, indefiniteness for complex degrees, and
//! positivity of linear and product combinations of classical `h_j`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bspline::KnotVector;
use crate::chs::{h_classical, h_equal, h_fractional, h_via_integral, PointTuple};
use crate::error::{Error, Result};
use crate::numerics::{binom_shifted_real, cos_pi, sin_pi, ComplexDegree, QuadratureSpec};
use crate::poly::{count_roots_open, isolate_roots, rational_from_f64, rational_to_f64, simplest_between, Bound, RationalPoly};
use crate::sampling::{draw_in_interval, draw_tuple, draw_unit_sphere, stream_rng, Region};

/// Draws whose bialternant condition estimate exceeds this are skipped.
pub const CONDITION_LIMIT: f64 = 1e8;
/// Absolute tolerance for claims of the form `value = 0`.
pub const ZERO_TOL: f64 = 1e-9;
/// Distance from a half-integer below which `μ` is treated as one.
pub const HALF_INTEGER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MuCase {
    CosPositive,
    CosNegative,
    CosZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuClass {
    pub case: MuCase,
    /// `p` with `|μ-2p| < 1/2`, `|μ-(2p-1)| < 1/2` or `|μ-p| = 1/2` respectively.
    pub nearest_anchor: i64,
    pub cos_mu_pi: f64,
}

pub fn classify_mu(mu: f64) -> Result<MuClass> {
    if !mu.is_finite() || mu <= -1.0 {
        return Err(Error::Domain(format!("mu must be a finite number above -1, got {mu}")));
    }
    let half = mu.floor() + 0.5;
    if (mu - half).abs() < HALF_INTEGER_TOL {
        return Ok(MuClass { case: MuCase::CosZero, nearest_anchor: (half.floor() as i64).max(0), cos_mu_pi: 0.0 });
    }
    let c = cos_pi(mu);
    let nearest = mu.round() as i64;
    if nearest.rem_euclid(2) == 0 {
        Ok(MuClass { case: MuCase::CosPositive, nearest_anchor: nearest / 2, cos_mu_pi: c })
    } else {
        Ok(MuClass { case: MuCase::CosNegative, nearest_anchor: (nearest + 1) / 2, cos_mu_pi: c })
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Lower bound for `Re h_μ` on the unit sphere when `cos μπ > 0`.
pub fn hunter_lower_bound(mu: f64, n: usize) -> Result<f64> {
    let class = classify_mu(mu)?;
    if class.case != MuCase::CosPositive {
        return Err(Error::Domain(format!("the bound needs cos(mu pi) > 0, mu = {mu}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let p = class.nearest_anchor as u32;
    let q = if mu <= 2.0 * p as f64 { p } else { p + 1 };
    let ratio = binom_shifted_real(mu, n) / binom_shifted_real(2.0 * q as f64, n);
    Ok(ratio * class.cos_mu_pi / (2f64.powi(q as i32) * factorial(q)))
}

/// Lower bound for `Im h_μ` on the unit sphere inside the nonpositive orthant,
/// for `2p < μ < 2p+1`.
pub fn im_lower_bound(mu: f64, n: usize) -> Result<f64> {
    let p = im_anchor(mu)?;
    let q = p + 1;
    let ratio = binom_shifted_real(mu, n) / binom_shifted_real(2.0 * q as f64, n);
    Ok(ratio * sin_pi(mu) / (2f64.powi(q as i32) * factorial(q)))
}

fn im_anchor(mu: f64) -> Result<u32> {
    let p = (mu / 2.0).floor();
    if !(mu > 2.0 * p && mu < 2.0 * p + 1.0) || p < 0.0 {
        return Err(Error::Domain(format!("mu = {mu} is not in (2p, 2p+1) for an integer p >= 0")));
    }
    Ok(p as u32)
}

/// What a suite asserts about a real quantity on one sampling region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClaim {
    Positive,
    Negative,
    NonNegative,
    Zero,
    Unconstrained,
}

impl SignClaim {
    /// Slack of `value` against the claim, normalized by `scale`; negative means violated.
    fn margin(self, value: f64, scale: f64) -> f64 {
        let scale = scale.max(f64::MIN_POSITIVE);
        match self {
            Self::Positive => {
                if value > 0.0 {
                    value / scale
                } else {
                    -1.0 - value.abs() / scale
                }
            }
            Self::Negative => {
                if value < 0.0 {
                    -value / scale
                } else {
                    -1.0 - value.abs() / scale
                }
            }
            Self::NonNegative => value / scale + ZERO_TOL,
            Self::Zero => ZERO_TOL - value.abs(),
            Self::Unconstrained => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionOutcome {
    pub region: Region,
    pub claim: SignClaim,
    pub checked: usize,
    pub skipped: usize,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub region: Region,
    pub claim: SignClaim,
    pub tuple: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub mu: f64,
    pub n: usize,
    pub outcomes: Vec<RegionOutcome>,
    pub violations: Vec<Violation>,
}

impl SignReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn skipped_fraction(&self) -> f64 {
        let skipped: usize = self.outcomes.iter().map(|o| o.skipped).sum();
        let total: usize = self.outcomes.iter().map(|o| o.skipped + o.checked).sum();
        if total == 0 {
            0.0
        } else {
            skipped as f64 / total as f64
        }
    }
}

enum Draw {
    Skipped,
    Checked { tuple: Vec<f64>, value: f64, scale: f64 },
}

/// Evaluates `pick(h_μ)` on `count` draws from `region` and folds them against `claim`.
fn run_region(
    mu: f64,
    n: usize,
    region: Region,
    count: usize,
    seed: u64,
    stream_base: u64,
    claim: impl Fn(&[f64]) -> SignClaim + Sync,
    pick: impl Fn(num_complex::Complex64) -> f64 + Sync,
    outcome_claim: SignClaim,
) -> (RegionOutcome, Vec<Violation>) {
    let draws: Vec<Draw> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, stream_base + i as u64);
            let with_zero = n >= 2 && i % 4 == 3;
            let tuple = draw_tuple(&mut rng, n, region, with_zero);
            let r = h_fractional(mu.into(), &PointTuple::new(tuple.clone()).expect("finite draw"))
                .expect("distinct draw with Re z > -1");
            if r.condition_estimate > CONDITION_LIMIT {
                return Draw::Skipped;
            }
            let scale = r.value.norm() * r.condition_estimate.min(CONDITION_LIMIT);
            Draw::Checked { tuple, value: pick(r.value), scale }
        })
        .collect();
    let mut outcome = RegionOutcome { region, claim: outcome_claim, checked: 0, skipped: 0, worst_margin: f64::INFINITY };
    let mut violations = Vec::new();
    for d in draws {
        match d {
            Draw::Skipped => outcome.skipped += 1,
            Draw::Checked { tuple, value, scale } => {
                outcome.checked += 1;
                let c = claim(&tuple);
                let m = c.margin(value, scale);
                outcome.worst_margin = outcome.worst_margin.min(m);
                if m < 0.0 {
                    violations.push(Violation { region, claim: c, tuple, value });
                }
            }
        }
    }
    (outcome, violations)
}

const REGIONS: [Region; 3] = [Region::Whole, Region::NonNegative, Region::NonPositive];

fn stream_base(region_index: usize) -> u64 {
    (region_index as u64) << 40
}

/// The sign pattern of `Re h_μ` asserted on each region for the case of `μ`.
pub fn theorem2_claims(case: MuCase) -> [SignClaim; 3] {
    match case {
        MuCase::CosPositive => [SignClaim::Positive; 3],
        MuCase::CosNegative => [SignClaim::Unconstrained, SignClaim::Positive, SignClaim::Negative],
        MuCase::CosZero => [SignClaim::NonNegative, SignClaim::NonNegative, SignClaim::Zero],
    }
}

/// Samples `ℝⁿ`, `[0,∞)ⁿ` and `(−∞,0]ⁿ` (every fourth draw with one zero
/// coordinate) and checks the sign of `Re h_μ` for the case of `μ`.
pub fn verify_theorem2(mu: f64, n: usize, sample_count: usize, seed: u64) -> Result<SignReport> {
    let class = classify_mu(mu)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let claims = theorem2_claims(class.case);
    let mut report = SignReport { mu, n, outcomes: Vec::new(), violations: Vec::new() };
    for (i, (&region, &claim)) in REGIONS.iter().zip(&claims).enumerate() {
        let (o, v) = run_region(mu, n, region, sample_count, seed, stream_base(i), |_| claim, |h| h.re, claim);
        report.outcomes.push(o);
        report.violations.extend(v);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HunterReport {
    pub mu: f64,
    pub n: usize,
    pub bound: f64,
    pub samples: usize,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub violations: Vec<Violation>,
    /// Draws evaluated through the integral path because the bialternant was ill-conditioned.
    pub integral_fallbacks: usize,
}

impl HunterReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// `min_value / bound - 1`.
    pub fn relative_gap(&self) -> f64 {
        self.min_value / self.bound - 1.0
    }
}

/// `Re h_μ` at a point of the unit sphere, robust to near-coincident coordinates.
fn re_h_on_sphere(mu: f64, a: &[f64], spec: &QuadratureSpec) -> Result<(f64, bool)> {
    if mu >= 0.0 && mu.fract() == 0.0 {
        return Ok((h_classical(mu as u32, &PointTuple::new(a.to_vec())?), false));
    }
    let r = h_fractional(mu.into(), &PointTuple::new(a.to_vec())?)?;
    if r.condition_estimate <= CONDITION_LIMIT {
        return Ok((r.value.re, false));
    }
    let mut sorted = a.to_vec();
    sorted.sort_by(f64::total_cmp);
    let v = h_via_integral(mu.into(), &KnotVector::strict(sorted)?, spec)?;
    Ok((v.re, true))
}

/// Minimum of `Re h_μ` over random unit-sphere tuples against [`hunter_lower_bound`].
pub fn check_hunter(mu: f64, n: usize, samples: usize, seed: u64) -> Result<HunterReport> {
    let bound = hunter_lower_bound(mu, n)?;
    let spec = QuadratureSpec::default();
    let values: Vec<(Vec<f64>, f64, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let a = draw_unit_sphere(&mut stream_rng(seed, i as u64), n, Region::Whole);
            let (v, fallback) = re_h_on_sphere(mu, &a, &spec)?;
            Ok((a, v, fallback))
        })
        .collect::<Result<_>>()?;
    let mut report = HunterReport {
        mu,
        n,
        bound,
        samples,
        min_value: f64::INFINITY,
        argmin: Vec::new(),
        violations: Vec::new(),
        integral_fallbacks: 0,
    };
    for (a, v, fallback) in values {
        report.integral_fallbacks += usize::from(fallback);
        if v < report.min_value {
            report.min_value = v;
            report.argmin = a.clone();
        }
        if v < bound - ZERO_TOL {
            report.violations.push(Violation { region: Region::Whole, claim: SignClaim::NonNegative, tuple: a, value: v });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImSignReport {
    pub sign: SignReport,
    pub sine_bound: f64,
    pub sphere_samples: usize,
    pub sphere_min: f64,
    pub sphere_violations: Vec<Violation>,
}

impl ImSignReport {
    pub fn passed(&self) -> bool {
        self.sign.passed() && self.sphere_violations.is_empty()
    }
}

/// For `2p < μ < 2p+1`: `Im h_μ > 0` whenever some coordinate is negative,
/// `Im h_μ = 0` on `[0,∞)ⁿ`, and on the unit sphere in `(−∞,0]ⁿ`
/// `Im h_μ ≥` [`im_lower_bound`].
pub fn check_im_sign(mu: f64, n: usize, samples: usize, seed: u64) -> Result<ImSignReport> {
    let sine_bound = im_lower_bound(mu, n)?;
    let claim_for = |a: &[f64]| {
        if a.iter().any(|&x| x < 0.0) {
            SignClaim::Positive
        } else {
            SignClaim::Zero
        }
    };
    let mut sign = SignReport { mu, n, outcomes: Vec::new(), violations: Vec::new() };
    for (i, &region) in REGIONS.iter().enumerate() {
        let summary = match region {
            Region::Whole => SignClaim::Unconstrained,
            Region::NonNegative => SignClaim::Zero,
            Region::NonPositive => SignClaim::Positive,
        };
        let (o, v) = run_region(mu, n, region, samples, seed, stream_base(i), claim_for, |h| h.im, summary);
        sign.outcomes.push(o);
        sign.violations.extend(v);
    }
    let spec = QuadratureSpec::default();
    let values: Vec<(Vec<f64>, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let a = draw_unit_sphere(&mut stream_rng(seed, stream_base(3) + i as u64), n, Region::NonPositive);
            let r = h_fractional(mu.into(), &PointTuple::new(a.clone())?)?;
            let im = if r.condition_estimate <= CONDITION_LIMIT {
                r.value.im
            } else {
                let mut s = a.clone();
                s.sort_by(f64::total_cmp);
                h_via_integral(mu.into(), &KnotVector::strict(s)?, &spec)?.im
            };
            Ok((a, im))
        })
        .collect::<Result<_>>()?;
    let mut report = ImSignReport { sign, sine_bound, sphere_samples: samples, sphere_min: f64::INFINITY, sphere_violations: Vec::new() };
    for (a, im) in values {
        report.sphere_min = report.sphere_min.min(im);
        if im < sine_bound - ZERO_TOL {
            report.sphere_violations.push(Violation {
                region: Region::NonPositive,
                claim: SignClaim::NonNegative,
                tuple: a,
                value: im,
            });
        }
    }
    Ok(report)
}

/// Signs `(sign Re, sign Im)` of `h_μ` on the open negative orthant, where
/// `h_μ = C(μ+n-1, n-1) e^{iμπ} ∫|x|^μ F` has the direction of `e^{iμπ}`.
pub fn negative_orthant_signs(mu: f64) -> (i8, i8) {
    let s = |x: f64| if x > 0.0 { 1 } else if x < 0.0 { -1 } else { 0 };
    (s(cos_pi(mu)), s(sin_pi(mu)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadrantReport {
    pub mu: f64,
    pub n: usize,
    pub expected: (i8, i8),
    pub checked: usize,
    pub mismatches: Vec<Vec<f64>>,
}

/// Checks [`negative_orthant_signs`] on random tuples from `(−∞,0)ⁿ`.
pub fn check_negative_orthant(mu: f64, n: usize, samples: usize, seed: u64) -> Result<QuadrantReport> {
    classify_mu(mu)?;
    let expected = negative_orthant_signs(mu);
    let sign = |x: f64, scale: f64| {
        if x.abs() <= 1e-12 * scale {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    let mismatches: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .filter_map(|i| {
            let a = draw_tuple(&mut stream_rng(seed, i as u64), n, Region::NonPositive, false);
            let r = h_fractional(mu.into(), &PointTuple::new(a.clone()).ok()?).ok()?;
            let scale = r.value.norm() * r.condition_estimate;
            let got = (sign(r.value.re, scale), sign(r.value.im, scale));
            (got != expected).then_some(a)
        })
        .collect();
    Ok(QuadrantReport { mu, n, expected, checked: samples, mismatches })
}

/// Four `a > 0` at which `h_z(a, …, a)` lies in the quadrants
/// `(+,+)`, `(−,+)`, `(−,−)`, `(+,−)` in that order.
pub fn spiral_witness(z: ComplexDegree, n: usize) -> Result<[f64; 4]> {
    if z.im == 0.0 {
        return Err(Error::Domain("the degree must have a nonzero imaginary part".into()));
    }
    if !(z.re > -1.0) {
        return Err(Error::Domain(format!("Re z must exceed -1, got {}", z.re)));
    }
    // arg h_z(e^t, …) = arg C + ν t, so a t-window of length 2π/|ν| sweeps a full turn
    let width = 1.5 * std::f64::consts::TAU / z.im.abs();
    let steps = 4096;
    let mut found: [Option<f64>; 4] = [None; 4];
    for k in 0..=steps {
        let t = -width / 2.0 + width * k as f64 / steps as f64;
        let a = t.exp();
        let h = h_equal(z, a, n)?;
        let tol = 1e-9 * h.norm();
        if h.re.abs() <= tol || h.im.abs() <= tol {
            continue;
        }
        let idx = match (h.re > 0.0, h.im > 0.0) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        };
        found[idx].get_or_insert(a);
    }
    match found {
        [Some(a), Some(b), Some(c), Some(d)] => Ok([a, b, c, d]),
        _ => Err(Error::NonConvergence { estimate: width, tolerance: 0.0 }),
    }
}

/// Open interval `(r, s)` with `−∞ ≤ r < s ≤ ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub r: f64,
    pub s: f64,
}

impl Interval {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if r.is_nan() || s.is_nan() || r >= s || r == f64::INFINITY || s == f64::NEG_INFINITY {
            return Err(Error::InvalidSpec(format!("({r}, {s}) is not a nonempty interval")));
        }
        Ok(Self { r, s })
    }

    pub fn whole() -> Self {
        Self { r: f64::NEG_INFINITY, s: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.r && x < self.s
    }

    fn bounds(&self) -> Result<(Bound, Bound)> {
        Ok((Bound::from_f64(self.r)?, Bound::from_f64(self.s)?))
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.r, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "c", rename_all = "lowercase")]
pub enum CombinationKind {
    /// `H = Σ_j c_j h_j`, `j = 0..=m`.
    Linear(Vec<f64>),
    /// `H = Σ_{j,k} c_{jk} h_j h_k`, `j, k = 0..=m`, with `h_0 = 1`.
    Product(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChsCombination {
    pub kind: CombinationKind,
    pub n: usize,
    pub interval: Interval,
}

impl ChsCombination {
    pub fn new(kind: CombinationKind, n: usize, interval: Interval) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        let finite = match &kind {
            CombinationKind::Linear(c) => !c.is_empty() && c.iter().all(|x| x.is_finite()),
            CombinationKind::Product(c) => {
                !c.is_empty() && c.iter().all(|row| row.len() == c.len() && row.iter().all(|x| x.is_finite()))
            }
        };
        if !finite {
            return Err(Error::InvalidSpec(
                "coefficients must be a nonempty finite list (linear) or square matrix (product)".into(),
            ));
        }
        Interval::new(interval.r, interval.s)?;
        Ok(Self { kind, n, interval })
    }

    pub fn linear(c: Vec<f64>, n: usize, interval: Interval) -> Result<Self> {
        Self::new(CombinationKind::Linear(c), n, interval)
    }

    pub fn product(c: Vec<Vec<f64>>, n: usize, interval: Interval) -> Result<Self> {
        Self::new(CombinationKind::Product(c), n, interval)
    }
}

/// `C(j+n-1, n-1)` as an exact integer.
fn binom_exact(j: usize, n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 1..n {
        acc = acc * BigInt::from(j + k) / BigInt::from(k);
    }
    acc
}

/// Coefficients of `P(x) = H(x, …, x) = Σ C(j+n-1, n-1) c_j x^j`.
pub fn reduce_linear(comb: &ChsCombination) -> Result<Vec<f64>> {
    let CombinationKind::Linear(c) = &comb.kind else {
        return Err(Error::InvalidSpec("expected a linear combination".into()));
    };
    Ok(c.iter().enumerate().map(|(j, cj)| binom_shifted_real(j as f64, comb.n) * cj).collect())
}

/// [`reduce_linear`] in exact arithmetic, coefficients promoted from their double values.
pub fn reduce_linear_exact(comb: &ChsCombination) -> Result<RationalPoly> {
    let CombinationKind::Linear(c) = &comb.kind else {
        return Err(Error::InvalidSpec("expected a linear combination".into()));
    };
    let coeffs = c
        .iter()
        .enumerate()
        .map(|(j, &cj)| Ok(rational_from_f64(cj)? * BigRational::from_integer(binom_exact(j, comb.n))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalPoly::new(coeffs))
}

/// Exact coefficient matrix of `P(x, y) = Σ C(j+n-1,n-1) C(k+n-1,n-1) c_{jk} x^j y^k`.
pub fn reduce_product_exact(comb: &ChsCombination) -> Result<Vec<Vec<BigRational>>> {
    let CombinationKind::Product(c) = &comb.kind else {
        return Err(Error::InvalidSpec("expected a product combination".into()));
    };
    c.iter()
        .enumerate()
        .map(|(j, row)| {
            row.iter()
                .enumerate()
                .map(|(k, &cjk)| {
                    let b = binom_exact(j, comb.n) * binom_exact(k, comb.n);
                    Ok(rational_from_f64(cjk)? * BigRational::from_integer(b))
                })
                .collect()
        })
        .collect()
}

/// Product coefficients `c_{jk}` that make `P(x, y) = Σ p_{jk} x^j y^k` for the given `n`.
pub fn product_from_target(target: &[(usize, usize, f64)], n: usize) -> Vec<Vec<f64>> {
    let m = target.iter().map(|&(j, k, _)| j.max(k)).max().unwrap_or(0);
    let mut c = vec![vec![0.0; m + 1]; m + 1];
    for &(j, k, p) in target {
        c[j][k] += p / (binom_shifted_real(j as f64, n) * binom_shifted_real(k as f64, n));
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    Positive,
    NotPositive,
    NotFalsified,
    Falsified,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Positive => "Positive",
            Self::NotPositive => "NotPositive",
            Self::NotFalsified => "NotFalsified",
            Self::Falsified => "Falsified",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub status: VerdictStatus,
    /// `[x]` for a diagonal witness (`H(x, …, x) ≤ 0`), `[x, y]` for `P(x, y) < 0`.
    pub witness: Option<Vec<f64>>,
    /// Exact value of a diagonal witness, as `p/q`.
    pub rational_witness: Option<String>,
    /// False only when the witness approximates an irrational root of even multiplicity.
    pub witness_exact: bool,
    pub detail: String,
    pub sampled_min: Option<f64>,
}

impl PositivityVerdict {
    fn diagonal(status: VerdictStatus, x: Option<(&BigRational, bool)>, detail: String) -> Self {
        Self {
            status,
            witness: x.map(|(x, _)| vec![rational_to_f64(x)]),
            rational_witness: x.map(|(x, _)| x.to_string()),
            witness_exact: x.is_none_or(|(_, e)| e),
            detail,
            sampled_min: None,
        }
    }
}

/// A rational point in each nonempty half of `(r, s) ∖ {0}`.
fn test_points(r: &Bound, s: &Bound) -> Vec<BigRational> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let pick = |lo: &Bound, hi: &Bound| -> Option<BigRational> {
        match (lo, hi) {
            (Bound::Finite(a), Bound::Finite(b)) => (a < b).then(|| (a + b) / BigRational::from_integer(2.into())),
            (Bound::Finite(a), Bound::PosInfinity) => Some(a + &one),
            (Bound::NegInfinity, Bound::Finite(b)) => Some(b - &one),
            _ => None,
        }
    };
    let clamp_hi = |b: &Bound| match b {
        Bound::Finite(x) if *x < zero => b.clone(),
        _ => Bound::Finite(zero.clone()),
    };
    let clamp_lo = |b: &Bound| match b {
        Bound::Finite(x) if *x > zero => b.clone(),
        _ => Bound::Finite(zero.clone()),
    };
    let below_zero = match r {
        Bound::NegInfinity => true,
        Bound::Finite(x) => *x < zero,
        Bound::PosInfinity => false,
    };
    let above_zero = match s {
        Bound::PosInfinity => true,
        Bound::Finite(x) => *x > zero,
        Bound::NegInfinity => false,
    };
    let mut out = Vec::new();
    if below_zero {
        out.extend(pick(r, &clamp_hi(s)));
    }
    if above_zero {
        out.extend(pick(&clamp_lo(r), s));
    }
    out
}

fn inside(x: &BigRational, r: &Bound, s: &Bound) -> bool {
    let above = match r {
        Bound::Finite(a) => x > a,
        Bound::NegInfinity => true,
        Bound::PosInfinity => false,
    };
    let below = match s {
        Bound::Finite(b) => x < b,
        Bound::PosInfinity => true,
        Bound::NegInfinity => false,
    };
    above && below
}

/// Decides `P(x) > 0` for all `x ∈ (r, s) ∖ {0}` exactly.
pub fn decide_positive_on(p: &RationalPoly, r: &Bound, s: &Bound) -> PositivityVerdict {
    use VerdictStatus::*;
    let points = test_points(r, s);
    if p.is_zero() {
        let x = points.first().cloned().unwrap_or_else(BigRational::one);
        return PositivityVerdict::diagonal(NotPositive, Some((&x, true)), "P vanishes identically".into());
    }
    let (k, q) = p.split_power_of_x();
    let roots = count_roots_open(&q, r, s);
    if roots > 0 {
        let width = BigRational::new(BigInt::one(), BigInt::one() << 80);
        for (lo, hi) in isolate_roots(&q, r, s, &width) {
            let simple = simplest_between(&lo, &hi);
            if inside(&simple, r, s) && q.eval(&simple).is_zero() {
                return PositivityVerdict::diagonal(
                    NotPositive,
                    Some((&simple, true)),
                    format!("P has the rational root {simple} in the interval"),
                );
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            for x in [&lo, &hi, &mid] {
                if inside(x, r, s) && !x.is_zero() && !p.eval(x).is_positive() {
                    return PositivityVerdict::diagonal(NotPositive, Some((x, true)), "P changes sign in the interval".into());
                }
            }
        }
        let first = isolate_roots(&q, r, s, &width).into_iter().next().expect("counted root");
        let mid = (&first.0 + &first.1) / BigRational::from_integer(2.into());
        return PositivityVerdict::diagonal(
            NotPositive,
            Some((&mid, false)),
            "P touches zero at an irrational point; the witness is an approximation".into(),
        );
    }
    for x in &points {
        if !p.eval(x).is_positive() {
            let detail = if k % 2 == 1 { "P = x^k Q with odd k changes sign at 0" } else { "P is negative on the interval" };
            return PositivityVerdict::diagonal(NotPositive, Some((x, true)), detail.into());
        }
    }
    PositivityVerdict::diagonal(Positive, None, format!("no roots in the interval away from 0 (x^{k} factor)"))
}

/// Exact decision of positivity for a linear combination on `(r,s)ⁿ ∖ {0}`.
pub fn theorem3_check(comb: &ChsCombination) -> Result<PositivityVerdict> {
    let p = reduce_linear_exact(comb)?;
    let (r, s) = comb.interval.bounds()?;
    Ok(decide_positive_on(&p, &r, &s))
}

fn diagonal_of(pxy: &[Vec<BigRational>]) -> RationalPoly {
    let m = pxy.len();
    let mut d = vec![BigRational::zero(); 2 * m.max(1) - 1];
    for (j, row) in pxy.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            d[j + k] += c;
        }
    }
    RationalPoly::new(d)
}

fn eval_bivariate(p: &[Vec<f64>], x: f64, y: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, row| acc * x + row.iter().rev().fold(0.0, |a, c| a * y + c))
}

fn eval_bivariate_exact(p: &[Vec<BigRational>], x: &BigRational, y: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, row| {
        acc * x + row.iter().rev().fold(BigRational::zero(), |a, c| a * y + c)
    })
}

/// Map from the open square coordinate `u ∈ (−1, 1)` onto the interval.
fn compactify(iv: &Interval, u: f64) -> f64 {
    match (iv.r.is_finite(), iv.s.is_finite()) {
        (true, true) => iv.r + (iv.s - iv.r) * (u + 1.0) / 2.0,
        (true, false) => iv.r + (1.0 + u) / (1.0 - u),
        (false, true) => iv.s - (1.0 - u) / (1.0 + u),
        (false, false) => (std::f64::consts::FRAC_PI_2 * u).tan(),
    }
}

/// Falsification search for the bivariate hypothesis plus an exact diagonal check.
///
/// `P` is sampled on a `grid × grid` lattice of the compactified square (offset
/// by a seeded shift), after which the lowest points are polished by
/// `refine_iters` pattern-search steps. A negative value is confirmed in exact
/// arithmetic before it is reported. `NotFalsified` is not a proof.
pub fn theorem4_check(comb: &ChsCombination, grid: usize, refine_iters: usize, seed: u64) -> Result<PositivityVerdict> {
    if grid == 0 {
        return Err(Error::InvalidSpec("grid must be positive".into()));
    }
    let exact = reduce_product_exact(comb)?;
    let (r, s) = comb.interval.bounds()?;
    let diag = decide_positive_on(&diagonal_of(&exact), &r, &s);
    if diag.status != VerdictStatus::Positive {
        return Ok(PositivityVerdict { detail: format!("diagonal: {}", diag.detail), ..diag });
    }
    let p: Vec<Vec<f64>> = exact.iter().map(|row| row.iter().map(rational_to_f64).collect()).collect();
    let iv = comb.interval;
    let value = |u: f64, v: f64| {
        let (x, y) = (compactify(&iv, u), compactify(&iv, v));
        if x == 0.0 && y == 0.0 || !iv.contains(x) || !iv.contains(y) {
            return f64::INFINITY;
        }
        let val = eval_bivariate(&p, x, y);
        if val.is_nan() {
            f64::INFINITY
        } else {
            val
        }
    };
    let mut rng = stream_rng(seed, 0);
    let shift = rng.gen_range(0.05..0.95);
    let h = 2.0 / grid as f64;
    let coord = |i: usize| -1.0 + h * (i as f64 + shift);
    let mut cells: Vec<(f64, f64, f64)> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| {
            let (u, v) = (coord(idx / grid), coord(idx % grid));
            (value(u, v), u, v)
        })
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    cells.truncate(16);
    let limit = 1.0 - 1e-12;
    let polished: Vec<(f64, f64, f64)> = cells
        .into_iter()
        .map(|(mut best, mut u, mut v)| {
            let mut step = h;
            for _ in 0..refine_iters {
                let mut moved = false;
                for (du, dv) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let (nu, nv) = ((u + du * step).clamp(-limit, limit), (v + dv * step).clamp(-limit, limit));
                    let f = value(nu, nv);
                    if f < best {
                        (best, u, v) = (f, nu, nv);
                        moved = true;
                    }
                }
                if !moved {
                    step /= 2.0;
                }
            }
            (best, u, v)
        })
        .collect();
    let sampled_min = polished.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let mut rounding_only = false;
    for &(f, u, v) in &polished {
        if f < 0.0 {
            let (x, y) = (compactify(&iv, u), compactify(&iv, v));
            let ex = eval_bivariate_exact(&exact, &rational_from_f64(x)?, &rational_from_f64(y)?);
            if ex.is_negative() {
                return Ok(PositivityVerdict {
                    status: VerdictStatus::Falsified,
                    witness: Some(vec![x, y]),
                    rational_witness: None,
                    witness_exact: true,
                    detail: format!("P({x}, {y}) < 0 (confirmed exactly)"),
                    sampled_min: Some(sampled_min),
                });
            }
            rounding_only = true;
        }
    }
    let mut detail = format!("no negative value of P found on a {grid}x{grid} grid; diagonal positive");
    if rounding_only {
        detail.push_str("; negative float samples were rounding artifacts");
    }
    Ok(PositivityVerdict {
        status: VerdictStatus::NotFalsified,
        witness: None,
        rational_witness: None,
        witness_exact: true,
        detail,
        sampled_min: Some(sampled_min),
    })
}

/// `H(pts)` computed from classical `h_j`.
pub fn eval_combination(comb: &ChsCombination, pts: &PointTuple) -> f64 {
    match &comb.kind {
        CombinationKind::Linear(c) => c.iter().enumerate().map(|(j, cj)| cj * h_classical(j as u32, pts)).sum(),
        CombinationKind::Product(c) => {
            let h: Vec<f64> = (0..c.len()).map(|j| h_classical(j as u32, pts)).collect();
            c.iter()
                .enumerate()
                .flat_map(|(j, row)| row.iter().enumerate().map(move |(k, cjk)| (j, k, cjk)))
                .map(|(j, k, cjk)| cjk * h[j] * h[k])
                .sum()
        }
    }
}

/// Random tuples in `(r, s)ⁿ` at which `H` is not positive.
pub fn sample_combination(comb: &ChsCombination, samples: usize, seed: u64) -> Vec<(Vec<f64>, f64)> {
    (0..samples)
        .into_par_iter()
        .filter_map(|i| {
            let a = draw_in_interval(&mut stream_rng(seed, i as u64), comb.n, comb.interval.r, comb.interval.s);
            let v = eval_combination(comb, &PointTuple::new(a.clone()).ok()?);
            (v <= 0.0).then_some((a, v))
        })
        .collect()
}
