//! Curry–Schoenberg B-splines and divided differences.
//!
//! `F(x; a_1, …, a_n)` is the piecewise polynomial probability density of
//! degree `n - 2` supported on `[a_1, a_n]`. It can be evaluated four ways:
//!
//! * [`eval_symmetric`]: the `|a_j - x| (a_j - x)^{n-3}` sum,
//! * [`eval_truncated`]: the truncated-power sum,
//! * [`eval_determinant`]: cofactor expansion of the Vandermonde-type determinant,
//! * [`eval_recurrence`]: the Cox–de Boor recurrence, which also accepts repeated knots.
//!
//! All forms are right-continuous at the knots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, integrate_real, DoubleDouble, QuadratureSpec};

/// Ordered knots `a_1 ≤ … ≤ a_n` with `a_1 < a_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
    multiplicity_allowed: bool,
}

impl KnotVector {
    pub fn new(knots: Vec<f64>, multiplicity_allowed: bool) -> Result<Self> {
        let n = knots.len();
        if n < 2 {
            return Err(Error::InvalidKnots("at least two knots are required".into()));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidKnots("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidKnots("knots must be nondecreasing".into()));
        }
        if !multiplicity_allowed && knots.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidKnots("knots must be strictly increasing".into()));
        }
        if knots[0] == knots[n - 1] {
            return Err(Error::InvalidKnots("first and last knot must differ".into()));
        }
        let mut run = 1;
        for w in knots.windows(2) {
            run = if w[0] == w[1] { run + 1 } else { 1 };
            if run >= n {
                return Err(Error::InvalidKnots(format!(
                    "knot {} has multiplicity {run}, must be below {n}",
                    w[0]
                )));
            }
        }
        Ok(Self { knots, multiplicity_allowed })
    }

    /// Strictly increasing knots.
    pub fn strict(knots: Vec<f64>) -> Result<Self> {
        Self::new(knots, false)
    }

    /// Nondecreasing knots, repeats allowed.
    pub fn with_repeats(knots: Vec<f64>) -> Result<Self> {
        Self::new(knots, true)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.knots[0]
    }

    pub fn last(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    pub fn multiplicity_allowed(&self) -> bool {
        self.multiplicity_allowed
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.knots.windows(2).all(|w| w[0] < w[1])
    }

    fn require_strict(&self, what: &str) -> Result<()> {
        if self.is_strictly_increasing() {
            Ok(())
        } else {
            Err(Error::InvalidKnots(format!("{what} requires strictly increasing knots")))
        }
    }

    /// `∏_{k≠j} (a_j - a_k)`.
    fn node_product(&self, j: usize) -> DoubleDouble {
        let aj = self.knots[j];
        self.knots
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &ak)| DoubleDouble::diff(aj, ak))
            .product()
    }

    /// Distinct knot values, ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.knots.clone();
        b.dedup();
        b
    }
}

/// A function together with its `(n-1)`th derivative, for Peano-kernel checks.
pub struct SampledFunction<'a> {
    value: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    derivative: Option<Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>>,
}

impl<'a> SampledFunction<'a> {
    pub fn new(value: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self { value: Box::new(value), derivative: None }
    }

    pub fn with_derivative(mut self, derivative: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.derivative = Some(Box::new(derivative));
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn eval_derivative(&self, x: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(x))
    }
}

/// Which closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BSplineForm {
    Symmetric,
    Truncated,
    Determinant,
    Recurrence,
}

impl std::str::FromStr for BSplineForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Self::Symmetric),
            "truncated" => Ok(Self::Truncated),
            "determinant" => Ok(Self::Determinant),
            "recurrence" => Ok(Self::Recurrence),
            other => Err(Error::InvalidInput(format!("unknown B-spline form `{other}`"))),
        }
    }
}

impl std::fmt::Display for BSplineForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Symmetric => "symmetric",
            Self::Truncated => "truncated",
            Self::Determinant => "determinant",
            Self::Recurrence => "recurrence",
        };
        f.write_str(s)
    }
}

pub fn evaluate(form: BSplineForm, x: f64, kv: &KnotVector) -> Result<f64> {
    match form {
        BSplineForm::Symmetric => eval_symmetric(x, kv),
        BSplineForm::Truncated => eval_truncated(x, kv),
        BSplineForm::Determinant => eval_determinant(x, kv),
        BSplineForm::Recurrence => eval_recurrence(x, kv),
    }
}

fn symmetric_kernel(d: DoubleDouble, n: usize) -> DoubleDouble {
    d.abs() * d.powi(n as u32 - 3)
}

/// `(n-1)/2 · Σ_j |a_j - x| (a_j - x)^{n-3} / ∏_{k≠j}(a_j - a_k)`.
///
/// Needs `n ≥ 3`; for two knots the exponent is negative, use [`eval_truncated`].
pub fn eval_symmetric(x: f64, kv: &KnotVector) -> Result<f64> {
    kv.require_strict("the symmetric form")?;
    let n = kv.len();
    if n < 3 {
        return Err(Error::Domain("the symmetric form needs at least three knots".into()));
    }
    // terms cancel to many digits near the ends of the support
    let sum: DoubleDouble = (0..n)
        .map(|j| symmetric_kernel(DoubleDouble::diff(kv.knots[j], x), n) / kv.node_product(j))
        .sum();
    Ok(0.5 * (n - 1) as f64 * sum.to_f64())
}

/// `(n-1) Σ_j (a_j - x)_+^{n-2} / ∏_{k≠j}(a_j - a_k)`, exactly zero off `[a_1, a_n)`.
///
/// Left of the midpoint the sum runs over the knots `≤ x` with the opposite
/// sign instead; the full sum over all knots vanishes, so both agree.
pub fn eval_truncated(x: f64, kv: &KnotVector) -> Result<f64> {
    kv.require_strict("the truncated-power form")?;
    if x < kv.first() || x >= kv.last() {
        return Ok(0.0);
    }
    let n = kv.len();
    let left = x < 0.5 * (kv.first() + kv.last());
    let sum: DoubleDouble = (0..n)
        .filter(|&j| (kv.knots[j] > x) != left)
        .map(|j| DoubleDouble::diff(kv.knots[j], x).powi(n as u32 - 2) / kv.node_product(j))
        .sum();
    let sum = if left { -sum } else { sum };
    // + 0.0 turns the -0.0 of an empty left sum into 0.0
    Ok((n - 1) as f64 * sum.to_f64() + 0.0)
}

fn vandermonde(points: impl Iterator<Item = f64> + Clone) -> DoubleDouble {
    let mut v = DoubleDouble::ONE;
    for (i, ai) in points.clone().enumerate() {
        for aj in points.clone().skip(i + 1) {
            v = v * DoubleDouble::diff(aj, ai);
        }
    }
    v
}

/// Determinant form: `(n-1) / (2V) · det[1, a, …, a^{n-2}, |a-x|(a-x)^{n-3}]`.
///
/// The determinant is expanded along its last column; each minor is the
/// Vandermonde determinant of the knots with one knot removed.
pub fn eval_determinant(x: f64, kv: &KnotVector) -> Result<f64> {
    kv.require_strict("the determinant form")?;
    let n = kv.len();
    if n < 3 {
        return Err(Error::Domain("the determinant form needs at least three knots".into()));
    }
    let a = &kv.knots;
    let full = vandermonde(a.iter().copied());
    let mut det = DoubleDouble::default();
    for j in 0..n {
        let minor = vandermonde(a.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| *v));
        let term = minor * symmetric_kernel(DoubleDouble::diff(a[j], x), n);
        // cofactor sign (-1)^{(j+1) + n} with 1-based row index
        det = if (j + 1 + n).is_multiple_of(2) { det + term } else { det - term };
    }
    Ok((n - 1) as f64 * (det / full).to_f64() / 2.0)
}

/// Cox–de Boor recurrence with `0/0 := 0`, rescaled to unit integral.
///
/// Accepts repeated knots.
pub fn eval_recurrence(x: f64, kv: &KnotVector) -> Result<f64> {
    let t = &kv.knots;
    let n = kv.len();
    let (lo, hi) = (kv.first(), kv.last());
    if lo == hi {
        return Err(Error::Domain("all knots are equal".into()));
    }
    if x < lo || x >= hi {
        return Ok(0.0);
    }
    // order-1 indicators on [t_i, t_{i+1})
    let mut basis: Vec<f64> = (0..n - 1)
        .map(|i| if t[i] <= x && x < t[i + 1] { 1.0 } else { 0.0 })
        .collect();
    for order in 2..n {
        for i in 0..n - order {
            let left_den = t[i + order - 1] - t[i];
            let right_den = t[i + order] - t[i + 1];
            let left = if left_den > 0.0 { (x - t[i]) / left_den * basis[i] } else { 0.0 };
            let right = if right_den > 0.0 {
                (t[i + order] - x) / right_den * basis[i + 1]
            } else {
                0.0
            };
            basis[i] = left + right;
        }
    }
    Ok((n - 1) as f64 / (hi - lo) * basis[0])
}

/// Explicit-sum and Newton-table divided differences side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividedDifference {
    /// The Newton-table result.
    pub value: f64,
    pub explicit_sum: f64,
    /// `Σ |f(a_j)| / ∏|a_j - a_k|`, the magnitude the cancellation works against.
    pub scale: f64,
    /// Both routes agree within `1e-8 · scale`.
    pub consistent: bool,
    /// The smallest knot gap is below `1e-6` of the knot range.
    pub ill_conditioned: bool,
}

const DD_AGREEMENT: f64 = 1e-8;
const DD_GAP_WARNING: f64 = 1e-6;

/// `f[a_1, …, a_n]` from sampled values `f(a_j)`.
pub fn divided_difference(values: &[f64], kv: &KnotVector) -> Result<DividedDifference> {
    kv.require_strict("a divided difference")?;
    let a = &kv.knots;
    let n = a.len();
    if values.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} function values, got {}",
            values.len()
        )));
    }

    let mut explicit_sum = 0.0;
    let mut scale = 0.0;
    for (j, fj) in values.iter().enumerate() {
        let d = kv.node_product(j).to_f64();
        explicit_sum += fj / d;
        scale += (fj / d).abs();
    }

    let mut table = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            table[i] = (table[i] - table[i - 1]) / (a[i] - a[i - level]);
        }
    }
    let value = table[n - 1];

    let min_gap = a.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let ill_conditioned = min_gap < DD_GAP_WARNING * (kv.last() - kv.first());
    if ill_conditioned {
        log::warn!(
            "divided difference over near-coincident knots (min gap {min_gap:e}); expect lost digits"
        );
    }
    let consistent = (value - explicit_sum).abs() <= DD_AGREEMENT * scale;
    if !consistent {
        log::warn!("divided difference routes disagree: table {value}, explicit sum {explicit_sum}");
    }
    Ok(DividedDifference { value, explicit_sum, scale, consistent, ill_conditioned })
}

/// `∫ g(x) F(x; kv) dx` with the knots (and `extra` points) as breakpoints.
pub fn integrate_against_density<G>(
    kv: &KnotVector,
    extra_breakpoints: &[f64],
    singular: &[f64],
    g: G,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    G: Fn(f64) -> Complex64,
{
    let mut breaks = kv.breakpoints();
    for &e in extra_breakpoints {
        if e > kv.first() && e < kv.last() && !breaks.contains(&e) {
            breaks.push(e);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let singular: Vec<f64> = singular.iter().copied().filter(|s| breaks.contains(s)).collect();
    let integrand = |x: f64| {
        // interior points only, so the recurrence never hits its error path
        let density = eval_recurrence(x, kv).unwrap_or(0.0);
        if density == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            g(x) * density
        }
    };
    integrate_piecewise(integrand, &breaks, &singular, spec).map(|i| i.value)
}

/// `|f[a_1, …, a_n] - 1/(n-1)! ∫ f^{(n-1)}(x) F(x) dx|`.
pub fn peano_check(f: &SampledFunction<'_>, kv: &KnotVector, spec: &QuadratureSpec) -> Result<f64> {
    kv.require_strict("the Peano check")?;
    let derivative = f
        .derivative
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("the Peano check needs f^(n-1)".into()))?;
    let values: Vec<f64> = kv.knots.iter().map(|&x| f.eval(x)).collect();
    let lhs = divided_difference(&values, kv)?.value;
    let n = kv.len();
    let factorial: f64 = (1..n).map(|k| k as f64).product();
    let integral = integrate_against_density(
        kv,
        &[],
        &[],
        |x| Complex64::new(derivative(x), 0.0),
        spec,
    )?;
    Ok((lhs - integral.re / factorial).abs())
}

/// `∫ x^p F(x; kv) dx`.
pub fn moments(kv: &KnotVector, p: u32, spec: &QuadratureSpec) -> Result<f64> {
    let breaks = kv.breakpoints();
    integrate_real(
        |x| x.powi(p as i32) * eval_recurrence(x, kv).unwrap_or(0.0),
        &breaks,
        &[],
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::binom_shifted_real;

    fn kv(k: &[f64]) -> KnotVector {
        KnotVector::strict(k.to_vec()).unwrap()
    }

    #[test]
    fn knot_validation() {
        assert!(KnotVector::strict(vec![0.0]).is_err());
        let e = KnotVector::strict(vec![2.0, 1.0]).unwrap_err();
        assert_eq!(e, Error::InvalidKnots("knots must be nondecreasing".into()));
        assert!(KnotVector::strict(vec![0.0, 1.0, 1.0]).is_err());
        assert!(KnotVector::with_repeats(vec![0.0, 1.0, 1.0]).is_ok());
        assert!(KnotVector::with_repeats(vec![1.0, 1.0]).is_err());
        // multiplicity must stay below n
        assert!(KnotVector::with_repeats(vec![0.0, 0.0, 0.0, 1.0]).is_ok());
        assert!(KnotVector::with_repeats(vec![0.0, 0.0, 0.0, 0.0, 1.0]).is_ok());
        assert!(KnotVector::with_repeats(vec![0.0, 0.0, 1.0, 1.0]).is_ok());
        assert!(KnotVector::strict(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn symmetric_examples() {
        let k = kv(&[0.0, 1.0, 2.0]);
        assert_eq!(eval_symmetric(1.0, &k).unwrap(), 1.0);
        assert_eq!(eval_symmetric(0.5, &k).unwrap(), 0.5);
        assert_eq!(eval_symmetric(-5.0, &k).unwrap(), 0.0);
        assert!(matches!(eval_symmetric(0.5, &kv(&[0.0, 1.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn truncated_examples() {
        assert_eq!(eval_truncated(0.25, &kv(&[0.0, 1.0])).unwrap(), 1.0);
        assert_eq!(eval_truncated(1.0, &kv(&[0.0, 1.0, 2.0])).unwrap(), 1.0);
        assert_eq!(eval_truncated(3.0, &kv(&[0.0, 1.0, 2.0])).unwrap(), 0.0);
        // right-continuity of the step density
        assert_eq!(eval_truncated(0.0, &kv(&[0.0, 2.0])).unwrap(), 0.5);
        assert_eq!(eval_truncated(2.0, &kv(&[0.0, 2.0])).unwrap(), 0.0);
    }

    #[test]
    fn determinant_examples() {
        assert!((eval_determinant(1.0, &kv(&[0.0, 1.0, 2.0])).unwrap() - 1.0).abs() < 1e-15);
        let k = kv(&[0.0, 1.0, 2.0, 3.0]);
        let d = eval_determinant(0.5, &k).unwrap();
        let t = eval_truncated(0.5, &k).unwrap();
        assert!((d - t).abs() < 1e-10);
        // first polynomial piece of the uniform cubic density is x^2 / 2
        assert!((t - 0.125).abs() < 1e-15);
        assert!(eval_determinant(-0.3, &k).unwrap().abs() < 1e-14);
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(eval_recurrence(0.25, &kv(&[0.0, 1.0])).unwrap(), 1.0);
        let double = KnotVector::with_repeats(vec![0.0, 0.0, 1.0]).unwrap();
        assert!((eval_recurrence(0.5, &double).unwrap() - 1.0).abs() < 1e-15);
        // limit passage oracle: truncated form with nearly merged knots
        let eps = 1e-7;
        let near = kv(&[0.0, eps, 1.0]);
        assert!((eval_recurrence(0.5, &double).unwrap() - eval_truncated(0.5, &near).unwrap()).abs() < 1e-6);

        let repeated = KnotVector::with_repeats(vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        let near = kv(&[0.0, 1.0 - 1e-4, 1.0 + 1e-4, 2.0]);
        let a = eval_recurrence(1.5, &repeated).unwrap();
        let b = eval_truncated(1.5, &near).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn repeated_knots_keep_unit_integral() {
        let spec = QuadratureSpec::default();
        for knots in [
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0, 2.0],
            vec![-1.0, -1.0, -1.0, 0.5, 3.0],
            vec![0.0, 0.0, 2.0, 2.0],
        ] {
            let k = KnotVector::with_repeats(knots).unwrap();
            let total = moments(&k, 0, &spec).unwrap();
            assert!((total - 1.0).abs() < 1e-9, "{total}");
        }
    }

    #[test]
    fn divided_difference_examples() {
        let k = kv(&[0.0, 1.0, 2.0]);
        let dd = divided_difference(&[0.0, 1.0, 4.0], &k).unwrap();
        assert_eq!(dd.value, 1.0);
        assert!(dd.consistent && !dd.ill_conditioned);

        let c = divided_difference(&[3.5; 4], &kv(&[0.0, 0.3, 1.0, 4.0])).unwrap();
        assert!(c.value.abs() < 1e-15);

        // f = x^4 over (1, 2, 3): h_2(1, 2, 3) = 25
        let k = kv(&[1.0, 2.0, 3.0]);
        let values: Vec<f64> = k.knots().iter().map(|x| x.powi(4)).collect();
        assert!((divided_difference(&values, &k).unwrap().value - 25.0).abs() < 1e-12);

        assert!(divided_difference(&[1.0, 2.0], &k).is_err());
    }

    #[test]
    fn divided_difference_flags_near_coincident_knots() {
        let k = kv(&[0.0, 1e-9, 1.0]);
        let dd = divided_difference(&[0.0, 1e-18, 1.0], &k).unwrap();
        assert!(dd.ill_conditioned);
    }

    #[test]
    fn peano_examples() {
        let spec = QuadratureSpec::default();
        let k = kv(&[0.0, 1.0, 2.0]);
        let cube = SampledFunction::new(|x| x * x * x).with_derivative(|x| 6.0 * x);
        assert!(peano_check(&cube, &k, &spec).unwrap() < 1e-8);
        let exp = SampledFunction::new(f64::exp).with_derivative(f64::exp);
        assert!(peano_check(&exp, &k, &spec).unwrap() < 1e-8);
        let constant = SampledFunction::new(|_| 7.0).with_derivative(|_| 0.0);
        assert!(peano_check(&constant, &kv(&[-1.0, 0.5, 2.0, 4.0]), &spec).unwrap() < 1e-12);
        let no_derivative = SampledFunction::new(|x| x);
        assert!(peano_check(&no_derivative, &k, &spec).is_err());
    }

    #[test]
    fn moment_examples() {
        let spec = QuadratureSpec::default();
        assert!((moments(&kv(&[0.0, 1.0]), 0, &spec).unwrap() - 1.0).abs() < 1e-12);
        assert!((moments(&kv(&[0.0, 1.0]), 1, &spec).unwrap() - 0.5).abs() < 1e-12);
        let m = moments(&kv(&[1.0, 2.0, 3.0]), 2, &spec).unwrap();
        assert!((m - 25.0 / 6.0).abs() < 1e-10);
        assert!((binom_shifted_real(2.0, 3) * m - 25.0).abs() < 1e-9);
    }

    #[test]
    fn form_parsing() {
        assert_eq!("truncated".parse::<BSplineForm>().unwrap(), BSplineForm::Truncated);
        assert!("cubic".parse::<BSplineForm>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Start in [-3, 3], gaps in [0.2, 1.5).
        fn knots(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = KnotVector> {
            (-3.0f64..3.0, proptest::collection::vec(0.2f64..1.5, n.start() - 1..=n.end() - 1)).prop_map(|(a, gaps)| {
                let mut k = vec![a];
                for g in gaps {
                    k.push(k.last().unwrap() + g);
                }
                KnotVector::strict(k).unwrap()
            })
        }

        fn forms(x: f64, kv: &KnotVector) -> Vec<f64> {
            let mut v = vec![eval_truncated(x, kv).unwrap(), eval_recurrence(x, kv).unwrap()];
            if kv.len() >= 3 {
                v.push(eval_symmetric(x, kv).unwrap());
                v.push(eval_determinant(x, kv).unwrap());
            }
            v
        }

        proptest! {
            #[test]
            fn nonnegative_inside(kv in knots(2..=8), t in 0.0f64..1.0) {
                let x = kv.first() + t * (kv.last() - kv.first());
                for v in forms(x, &kv) {
                    prop_assert!(v >= -1e-12, "{v}");
                }
            }

            #[test]
            fn vanishes_outside(kv in knots(3..=8), d in 1e-9f64..5.0, right in any::<bool>()) {
                let x = if right { kv.last() + d } else { kv.first() - d };
                prop_assert_eq!(eval_truncated(x, &kv).unwrap(), 0.0);
                prop_assert!(eval_symmetric(x, &kv).unwrap().abs() < 1e-10);
                prop_assert!(eval_determinant(x, &kv).unwrap().abs() < 1e-10);
            }

            #[test]
            fn unit_integral(kv in knots(2..=8)) {
                prop_assert!((moments(&kv, 0, &QuadratureSpec::default()).unwrap() - 1.0).abs() < 1e-9);
            }

            #[test]
            fn forms_agree(kv in knots(3..=8), t in 0.0f64..1.0) {
                let x = kv.first() + t * (kv.last() - kv.first());
                let scale = (kv.len() - 1) as f64 / (kv.last() - kv.first());
                let v = forms(x, &kv);
                for a in &v {
                    for b in &v {
                        prop_assert!((a - b).abs() <= 1e-9 * scale, "{v:?}");
                    }
                }
            }

            #[test]
            fn single_peak(kv in knots(3..=8)) {
                let (a, b) = (kv.first(), kv.last());
                let grid: Vec<f64> = (0..1000)
                    .map(|i| eval_truncated(a + (b - a) * (i as f64 + 0.5) / 1000.0, &kv).unwrap())
                    .collect();
                let peak = grid.iter().enumerate().max_by(|p, q| p.1.total_cmp(q.1)).unwrap().0;
                prop_assert!(grid[..=peak].windows(2).all(|w| w[1] >= w[0] - 1e-9));
                prop_assert!(grid[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-9));
            }

            #[test]
            fn divided_difference_routes_agree(kv in knots(2..=8), c in proptest::collection::vec(-2.0f64..2.0, 3)) {
                let values: Vec<f64> = kv.knots().iter().map(|x| c[0] + c[1] * x + c[2] * (x / 2.0).sin()).collect();
                let d = divided_difference(&values, &kv).unwrap();
                prop_assert!(d.consistent);
                prop_assert!((d.value - d.explicit_sum).abs() <= 1e-8 * d.scale.max(f64::MIN_POSITIVE));
            }
        }
    }
}
