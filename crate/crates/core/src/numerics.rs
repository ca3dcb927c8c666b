//! Branch-consistent powers of real numbers, shifted binomial coefficients and
//! piecewise quadrature.
//!
//! Every power `x^z` in this crate is taken with the logarithm branch that is
//! cut along the negative imaginary axis and vanishes at 1. On the real line
//! this means `arg x = 0` for `x > 0` and `arg x = π` for `x < 0`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complex degree `z = re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexDegree {
    pub re: f64,
    pub im: f64,
}

impl ComplexDegree {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn is_real(self) -> bool {
        self.im == 0.0
    }

    /// True when `x ↦ x^z` is a polynomial, i.e. `z` is a nonnegative integer.
    pub fn is_nonnegative_integer(self) -> bool {
        self.im == 0.0 && self.re >= 0.0 && self.re.fract() == 0.0
    }

    /// Shift the real part by an integer amount.
    pub fn shifted(self, by: f64) -> Self {
        Self::new(self.re + by, self.im)
    }
}

impl From<f64> for ComplexDegree {
    fn from(re: f64) -> Self {
        Self::real(re)
    }
}

impl From<Complex64> for ComplexDegree {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl std::fmt::Display for ComplexDegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

/// `e^{iπt}`, exact at every multiple of 1/2.
///
/// The argument is reduced modulo 2 before any transcendental call, so
/// `cis_pi(2.5)` is exactly `i` and `cis_pi(3.0)` exactly `-1`.
pub fn cis_pi(t: f64) -> Complex64 {
    let r = t - 2.0 * (t / 2.0).round();
    let sign = if r < 0.0 { -1.0 } else { 1.0 };
    let a = r.abs();
    let (c, s) = if a <= 0.25 {
        ((PI * a).cos(), (PI * a).sin())
    } else if a <= 0.75 {
        let b = a - 0.5;
        (-(PI * b).sin(), (PI * b).cos())
    } else {
        let b = a - 1.0;
        (-(PI * b).cos(), -(PI * b).sin())
    };
    Complex64::new(c, sign * s)
}

/// `cos(πt)` with exact zeros at half-integers.
pub fn cos_pi(t: f64) -> f64 {
    cis_pi(t).re
}

/// `sin(πt)` with exact zeros at integers.
pub fn sin_pi(t: f64) -> f64 {
    cis_pi(t).im
}

/// `x^z` on the fixed branch; `0^z := 0` when `Re z > 0`.
pub fn branch_power(x: f64, z: ComplexDegree) -> Result<Complex64> {
    if x == 0.0 {
        return if z.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::Domain(format!("0^z is undefined for Re z = {} <= 0", z.re)))
        };
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite base {x}")));
    }
    let ax = x.abs();
    let modulus = ax.powf(z.re);
    let log_phase = if z.im == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, z.im * ax.ln())
    };
    if x > 0.0 {
        Ok(log_phase * modulus)
    } else {
        let damping = (-z.im * PI).exp();
        Ok(log_phase * cis_pi(z.re) * (modulus * damping))
    }
}

/// `∏_{j=1}^{n-1} (z + j) / (n - 1)!`, the generalized binomial `C(z+n-1, n-1)`.
pub fn binom_shifted(z: ComplexDegree, n: usize) -> Complex64 {
    let z = z.to_complex();
    (1..n).fold(Complex64::new(1.0, 0.0), |acc, j| {
        let j = j as f64;
        acc * (z + j) / j
    })
}

/// Real-degree convenience wrapper around [`binom_shifted`].
pub fn binom_shifted_real(mu: f64, n: usize) -> f64 {
    (1..n).fold(1.0, |acc, j| acc * (mu + j as f64) / j as f64)
}

/// Tolerances for [`integrate_piecewise`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinement_level: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_refinement_level: 12,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidSpec("tolerances must be strictly positive".into()));
        }
        if self.max_refinement_level < 1 {
            return Err(Error::InvalidSpec("max_refinement_level must be at least 1".into()));
        }
        Ok(())
    }
}

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
}

const GAUSS_ORDER: usize = 15;

fn gauss_legendre_15() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_ORDER))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_piece<F>(f: &F, a: f64, b: f64) -> Complex64
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let (nodes, weights) = gauss_legendre_15();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        sum += f(mid + half * x) * *w;
    }
    sum * half
}

struct PieceResult {
    value: Complex64,
    error: f64,
    converged: bool,
}

fn adaptive_gauss<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> PieceResult
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let width = b - a;
    let mut stack = vec![(a, b, gauss_piece(f, a, b), 0u32)];
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut converged = true;
    while let Some((lo, hi, whole, level)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gauss_piece(f, lo, mid);
        let right = gauss_piece(f, mid, hi);
        let refined = left + right;
        let est = (refined - whole).norm();
        let local_tol = (spec.abs_tol * (hi - lo) / width).max(spec.rel_tol * refined.norm());
        if est <= local_tol || level + 1 >= spec.max_refinement_level || mid <= lo || mid >= hi {
            if est > local_tol {
                converged = false;
            }
            value += refined;
            error += est;
        } else {
            stack.push((lo, mid, left, level + 1));
            stack.push((mid, hi, right, level + 1));
        }
    }
    PieceResult { value, error, converged }
}

const TANH_SINH_T_MAX: f64 = 6.5;

/// Double-exponential quadrature on `[a, b]`.
///
/// Abscissae are generated as distances from the nearer endpoint so that
/// points clustered at an endpoint keep full relative precision.
fn tanh_sinh<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> PieceResult
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let width = b - a;
    let sample = |t: f64| -> Complex64 {
        let u = 0.5 * PI * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance to the nearer endpoint: width / (1 + e^{2|u|})
        let d = width * e / (1.0 + e);
        if d == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = if t >= 0.0 { b - d } else { a + d };
        if x <= a || x >= b {
            return Complex64::new(0.0, 0.0);
        }
        // dx/dt = width/2 · (π/2) cosh t / cosh² u, with 1/cosh² u = 4e/(1+e)²
        let w = width * 0.5 * (0.5 * PI * t.cosh()) * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let fx = f(x);
        if !fx.re.is_finite() || !fx.im.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        fx * w
    };

    let mut h = 1.0;
    let mut sum = sample(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > TANH_SINH_T_MAX {
            break;
        }
        sum += sample(t) + sample(-t);
        k += 1;
    }
    let mut previous = sum * h;
    let mut error = f64::INFINITY;
    for level in 1..=spec.max_refinement_level {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > TANH_SINH_T_MAX {
                break;
            }
            sum += sample(t) + sample(-t);
            k += 2;
        }
        let current = sum * h;
        error = (current - previous).norm();
        let tol = spec.abs_tol.max(spec.rel_tol * current.norm());
        previous = current;
        if level >= 4 && error <= tol {
            return PieceResult { value: current, error, converged: true };
        }
    }
    PieceResult { value: previous, error, converged: false }
}

/// Integrate `f` over `[breakpoints[0], breakpoints[last]]`, piece by piece.
///
/// Smooth pieces use adaptive bisection with a 15-point Gauss–Legendre rule.
/// A piece having an endpoint listed in `singular_endpoints` is handled with
/// tanh–sinh, which tolerates integrable algebraic endpoint singularities.
pub fn integrate_piecewise<F>(
    f: F,
    breakpoints: &[f64],
    singular_endpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::InvalidInput("at least two breakpoints are required".into()));
    }
    if breakpoints.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidInput("breakpoints must be finite".into()));
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
    }
    if let Some(s) = singular_endpoints.iter().find(|s| !breakpoints.contains(s)) {
        return Err(Error::InvalidInput(format!("singular point {s} is not a breakpoint")));
    }

    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut scale = 0.0;
    let mut converged = true;
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        let singular = singular_endpoints.iter().any(|&s| s == a || s == b);
        let piece = if singular {
            tanh_sinh(&f, a, b, spec)
        } else {
            adaptive_gauss(&f, a, b, spec)
        };
        value += piece.value;
        error += piece.error;
        scale += piece.value.norm();
        converged &= piece.converged;
    }
    if !converged {
        let tolerance = spec.abs_tol.max(spec.rel_tol * scale);
        if error > tolerance {
            return Err(Error::NonConvergence { estimate: error, tolerance });
        }
    }
    Ok(Integral { value, error_estimate: error })
}

/// Real-valued convenience wrapper around [`integrate_piecewise`].
pub fn integrate_real<F>(
    f: F,
    breakpoints: &[f64],
    singular_endpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_piecewise(|x| Complex64::new(f(x), 0.0), breakpoints, singular_endpoints, spec)
        .map(|i| i.value.re)
}

/// Unevaluated sum `hi + lo` carrying about 106 bits, for sums whose terms cancel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// `a - b` without rounding error.
    pub fn diff(a: f64, b: f64) -> Self {
        let (s, e) = two_sum(a, -b);
        Self { hi: s, lo: e }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    pub fn powi(self, k: u32) -> Self {
        (0..k).fold(Self::ONE, |acc, _| acc * self)
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 { -self } else { self }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = Self::renorm(s, e + t);
        Self::renorm(r.hi, r.lo + f)
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Self::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl std::ops::Div for DoubleDouble {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * Self::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Self::from_f64(q2);
        let q3 = r.hi / o.hi;
        Self::renorm(q1, q2) + Self::from_f64(q3)
    }
}

impl std::iter::Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

impl std::iter::Product for DoubleDouble {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_double_keeps_cancelled_bits() {
        let a = DoubleDouble::from_f64(1.0) + DoubleDouble::from_f64(1e-20);
        assert_eq!((a - DoubleDouble::ONE).to_f64(), 1e-20);
        let t = DoubleDouble::from_f64(1.0) / DoubleDouble::from_f64(3.0);
        let back = t * DoubleDouble::from_f64(3.0) - DoubleDouble::ONE;
        assert!(back.to_f64().abs() < 1e-30);
        let d = DoubleDouble::diff(1.0, 1e-17);
        assert_eq!(d.lo, -1e-17);
        assert_eq!(DoubleDouble::diff(1.5, 0.5).powi(3).to_f64(), 1.0);
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_power_examples() {
        assert_eq!(branch_power(2.0, 3.0.into()).unwrap(), c(8.0, 0.0));
        let v = branch_power(-2.0, 2.0.into()).unwrap();
        assert_eq!(v, c(4.0, 0.0));
        let v = branch_power(-1.0, 0.5.into()).unwrap();
        // independent route: principal complex power of -1 + 0i
        let oracle = c(-1.0, 0.0).powc(c(0.5, 0.0));
        assert!((v - oracle).norm() < 1e-15);
        assert_eq!(v, c(0.0, 1.0));
    }

    #[test]
    fn branch_power_zero_base() {
        assert_eq!(branch_power(0.0, ComplexDegree::new(0.5, 3.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(branch_power(0.0, 0.0.into()), Err(Error::Domain(_))));
        assert!(matches!(branch_power(0.0, (-0.5).into()), Err(Error::Domain(_))));
    }

    #[test]
    fn branch_power_negative_base_complex_exponent() {
        // exp((1+i)(ln 3 + iπ)) via the principal branch, which agrees on x < 0
        let z = ComplexDegree::new(1.0, 1.0);
        let oracle = (c(1.0, 1.0) * c(3.0f64.ln(), PI)).exp();
        let v = branch_power(-3.0, z).unwrap();
        assert!((v - oracle).norm() < 1e-13 * oracle.norm());
    }

    #[test]
    fn cis_pi_is_exact_at_half_integers() {
        assert_eq!(cis_pi(0.5).re.abs(), 0.0);
        assert_eq!(cis_pi(2.5).re.abs(), 0.0);
        assert_eq!(cis_pi(-1.5).re.abs(), 0.0);
        assert_eq!(cis_pi(3.0), c(-1.0, -0.0));
        assert_eq!(sin_pi(7.0).abs(), 0.0);
        for k in 0..200 {
            let t = -3.0 + k as f64 * 0.0371;
            let v = cis_pi(t);
            assert!((v.re - (PI * t).cos()).abs() < 1e-14);
            assert!((v.im - (PI * t).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn binom_shifted_examples() {
        // factorial formula: C(4, 2) = 4!/(2!2!)
        let fact = |k: u64| (1..=k).product::<u64>() as f64;
        let v = binom_shifted(2.0.into(), 3);
        assert!((v.re - fact(4) / (fact(2) * fact(2))).abs() < 1e-14);
        assert_eq!(v.re, 6.0);
        for n in 1..10 {
            assert_eq!(binom_shifted(0.0.into(), n), c(1.0, 0.0));
        }
        assert_eq!(binom_shifted((-1.5).into(), 3), c(-0.125, 0.0));
        assert_eq!(binom_shifted(ComplexDegree::new(7.0, 2.0), 1), c(1.0, 0.0));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(15);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // ∫ x^28 over [-1, 1] = 2/29, degree 28 ≤ 2·15 − 1
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(28)).sum();
        assert!((s - 2.0 / 29.0).abs() < 1e-14);
    }

    #[test]
    fn integrate_examples() {
        let spec = QuadratureSpec::default();
        let one = integrate_real(|_| 1.0, &[0.0, 1.0], &[], &spec).unwrap();
        assert!((one - 1.0).abs() < 1e-14);

        let v = integrate_real(|x| x.powf(-0.5), &[0.0, 1.0], &[0.0], &spec).unwrap();
        assert!((v - 2.0).abs() < 1e-10 * 2.0);

        let v = integrate_real(|x| x * x, &[-1.0, 0.0, 2.0], &[], &spec).unwrap();
        assert!((v - 3.0).abs() < 1e-10 * 3.0);
    }

    #[test]
    fn integrate_strong_singularity_with_oscillation() {
        // ∫_0^1 x^{-0.9+i} dx = 1/(0.1+i)
        let z = ComplexDegree::new(-0.9, 1.0);
        let spec = QuadratureSpec::default();
        let v = integrate_piecewise(|x| branch_power(x, z).unwrap(), &[0.0, 1.0], &[0.0], &spec)
            .unwrap()
            .value;
        let exact = c(1.0, 0.0) / c(0.1, 1.0);
        assert!((v - exact).norm() < 1e-9 * exact.norm(), "{v} vs {exact}");
        // mirrored piece, singular at its right end
        let v = integrate_piecewise(|x| branch_power(x, z).unwrap(), &[-1.0, 0.0], &[0.0], &spec)
            .unwrap()
            .value;
        let exact = branch_power(-1.0, z.shifted(1.0)).unwrap() * -1.0 / c(0.1, 1.0);
        assert!((v - exact).norm() < 1e-9 * exact.norm(), "{v} vs {exact}");
    }

    #[test]
    fn integrate_rejects_bad_input() {
        let spec = QuadratureSpec::default();
        assert!(integrate_real(|x| x, &[1.0], &[], &spec).is_err());
        assert!(integrate_real(|x| x, &[1.0, 0.0], &[], &spec).is_err());
        assert!(integrate_real(|x| x, &[0.0, 1.0], &[0.5], &spec).is_err());
        let bad = QuadratureSpec { rel_tol: 0.0, ..spec };
        assert!(matches!(integrate_real(|x| x, &[0.0, 1.0], &[], &bad), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn integrate_reports_non_convergence() {
        let spec = QuadratureSpec { max_refinement_level: 2, ..Default::default() };
        let r = integrate_real(|x| (1.0 / (x + 1e-9)).sin() * 1e3, &[0.0, 1.0], &[], &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn positive_base_matches_powf(x in 1e-3f64..1e3, mu in -3.0f64..6.0) {
                let v = branch_power(x, mu.into()).unwrap();
                prop_assert_eq!(v.re, x.powf(mu));
                prop_assert_eq!(v.im, 0.0);
            }

            #[test]
            fn integer_exponent_matches_repeated_product(x in -20.0f64..20.0, k in -6i32..9) {
                prop_assume!(x.abs() > 1e-3);
                let v = branch_power(x, (k as f64).into()).unwrap();
                let mut prod = 1.0;
                for _ in 0..k.unsigned_abs() { prod *= x; }
                if k < 0 { prod = 1.0 / prod; }
                prop_assert!((v.re - prod).abs() <= 1e-12 * prod.abs());
                prop_assert!(v.im.abs() <= 1e-12 * prod.abs());
            }

            #[test]
            fn positive_homogeneity(lambda in 0.01f64..50.0, x in -30.0f64..30.0,
                                    re in -0.95f64..5.0, im in -2.0f64..2.0) {
                prop_assume!(x.abs() > 1e-3);
                let z = ComplexDegree::new(re, im);
                let lhs = branch_power(lambda * x, z).unwrap();
                let rhs = branch_power(lambda, z).unwrap() * branch_power(x, z).unwrap();
                prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300));
            }

            #[test]
            fn refinement_is_additive(split in 0.05f64..0.95, p in 0u32..7) {
                let spec = QuadratureSpec::default();
                let f = |x: f64| Complex64::new((x * 3.0).exp() * x.powi(p as i32), 0.0);
                let coarse = integrate_piecewise(f, &[-1.0, 2.0], &[], &spec).unwrap();
                let point = -1.0 + 3.0 * split;
                let fine = integrate_piecewise(f, &[-1.0, point, 2.0], &[], &spec).unwrap();
                let bound = coarse.error_estimate + fine.error_estimate
                    + 1e-14 * coarse.value.norm();
                prop_assert!((coarse.value - fine.value).norm() <= bound);
            }
        }
    }
}
