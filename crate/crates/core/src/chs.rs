//! Complete homogeneous symmetric polynomials, classical and of complex degree.
//!
//! For distinct points the complex-degree polynomial is the divided difference
//! of `x ↦ x^{z+n-1}`, which is the cofactor expansion of the bialternant
//! determinant along its last column. Three paths are available and checked
//! against one another in the test suites:
//!
//! * monomial enumeration / recurrence for integer degree ([`h_classical`]),
//! * the bialternant cofactor sum ([`h_fractional`]),
//! * the B-spline integral representation ([`h_via_integral`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bspline::{integrate_against_density, KnotVector};
use crate::error::{Error, Result};
use crate::numerics::{binom_shifted, branch_power, ComplexDegree, QuadratureSpec};

/// Real points `a_1, …, a_n`, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointTuple(Vec<f64>);

impl PointTuple {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("at least one point is required".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("points must be finite".into()));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_pairwise_distinct(&self) -> bool {
        let mut s = self.0.clone();
        s.sort_by(f64::total_cmp);
        s.windows(2).all(|w| w[0] != w[1])
    }

    pub fn zero_count(&self) -> usize {
        self.0.iter().filter(|&&a| a == 0.0).count()
    }

    pub fn all_equal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self(self.0.iter().map(|a| a * lambda).collect())
    }
}

impl From<PointTuple> for Vec<f64> {
    fn from(p: PointTuple) -> Self {
        p.0
    }
}

/// How a value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPath {
    MonomialSum,
    Recurrence,
    Bialternant,
    Integral,
    AllEqualFormula,
}

impl std::fmt::Display for EvalPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::MonomialSum => "monomial_sum",
            Self::Recurrence => "recurrence",
            Self::Bialternant => "bialternant",
            Self::Integral => "integral",
            Self::AllEqualFormula => "all_equal_formula",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChsResult {
    pub value: Complex64,
    pub path: EvalPath,
    /// `Σ |term_j| / |value|`, at least 1; infinite when the value vanishes.
    pub condition_estimate: f64,
}

/// Largest monomial count for which [`h_classical`] enumerates monomials.
pub const MONOMIAL_LIMIT: u64 = 1_000_000;

/// Number of degree-`p` monomials in `n` variables, saturating.
pub fn monomial_count(p: u32, n: usize) -> u64 {
    if n == 0 {
        return u64::from(p == 0);
    }
    // C(p + n - 1, p) built incrementally; each prefix is itself a binomial.
    let mut c: u128 = 1;
    for k in 1..=p as u128 {
        c = c * (n as u128 - 1 + k) / k;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

/// Sum of all degree-`p` monomials, by explicit enumeration of index multisets.
pub fn h_classical_monomial(p: u32, pts: &PointTuple) -> f64 {
    fn walk(a: &[f64], start: usize, remaining: u32, prod: f64, acc: &mut f64) {
        if remaining == 0 {
            *acc += prod;
            return;
        }
        for j in start..a.len() {
            walk(a, j, remaining - 1, prod * a[j], acc);
        }
    }
    let mut acc = 0.0;
    walk(pts.points(), 0, p, 1.0, &mut acc);
    acc
}

/// `h_p(a_1..a_n) = h_p(a_1..a_{n-1}) + a_n h_{p-1}(a_1..a_n)`.
pub fn h_classical_recurrence(p: u32, pts: &PointTuple) -> f64 {
    let p = p as usize;
    let mut h = vec![0.0; p + 1];
    h[0] = 1.0;
    for (i, &a) in pts.points().iter().enumerate() {
        if i == 0 {
            for k in 1..=p {
                h[k] = h[k - 1] * a;
            }
        } else {
            for k in 1..=p {
                h[k] += a * h[k - 1];
            }
        }
    }
    h[p]
}

/// Classical `h_p`, enumerating monomials when there are at most [`MONOMIAL_LIMIT`].
pub fn h_classical(p: u32, pts: &PointTuple) -> f64 {
    if monomial_count(p, pts.len()) <= MONOMIAL_LIMIT {
        h_classical_monomial(p, pts)
    } else {
        h_classical_recurrence(p, pts)
    }
}

fn validate_fractional(z: ComplexDegree, pts: &PointTuple) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("degree {z} is not finite")));
    }
    if !pts.is_pairwise_distinct() {
        return Err(Error::Domain("points must be pairwise distinct".into()));
    }
    match pts.zero_count() {
        0 => Ok(()),
        1 if z.re > -1.0 => Ok(()),
        1 => Err(Error::Domain(format!(
            "a zero point requires Re z > -1, got Re z = {}",
            z.re
        ))),
        _ => Err(Error::Domain("at most one point may be zero".into())),
    }
}

/// `Σ_j a_j^{z+n-1} / ∏_{k≠j}(a_j - a_k)` for pairwise distinct points.
///
/// Any complex `z` is accepted when no point is zero; a single zero point
/// contributes `0^{z+n-1} = 0` and then requires `Re z > -1`.
pub fn h_fractional(z: ComplexDegree, pts: &PointTuple) -> Result<ChsResult> {
    validate_fractional(z, pts)?;
    let a = pts.points();
    let n = a.len();
    let w = z.shifted((n - 1) as f64);
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for (j, &aj) in a.iter().enumerate() {
        if aj == 0.0 {
            continue;
        }
        let denom: f64 = a
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, ak)| aj - ak)
            .product();
        let term = branch_power(aj, w)? / denom;
        magnitude += term.norm();
        value += term;
    }
    let condition_estimate = if value.norm() > 0.0 {
        (magnitude / value.norm()).max(1.0)
    } else {
        f64::INFINITY
    };
    Ok(ChsResult { value, path: EvalPath::Bialternant, condition_estimate })
}

/// `h_z(a, …, a) = C(z+n-1, n-1) a^z` for `a ≠ 0`.
pub fn h_equal(z: ComplexDegree, a: f64, n: usize) -> Result<Complex64> {
    if a == 0.0 {
        return Err(Error::Domain("h_z(0, …, 0) is not defined".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    Ok(binom_shifted(z, n) * branch_power(a, z)?)
}

/// Dispatches to [`h_equal`] for constant tuples and [`h_fractional`] otherwise.
pub fn evaluate(z: ComplexDegree, pts: &PointTuple) -> Result<ChsResult> {
    if pts.len() >= 2 && pts.all_equal() {
        let value = h_equal(z, pts.points()[0], pts.len())?;
        return Ok(ChsResult { value, path: EvalPath::AllEqualFormula, condition_estimate: 1.0 });
    }
    h_fractional(z, pts)
}

/// `C(z+n-1, n-1) ∫ x^z F(x; kv) dx`.
///
/// The integration breaks at every knot and at 0. When `x^z` is not smooth
/// at 0 and 0 lies in the support, the pieces next to 0 use the
/// endpoint-singular rule.
pub fn h_via_integral(z: ComplexDegree, kv: &KnotVector, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(z.re > -1.0) {
        return Err(Error::Domain(format!("the integral form needs Re z > -1, got {}", z.re)));
    }
    if !kv.is_strictly_increasing() {
        return Err(Error::InvalidKnots("the integral form requires strictly increasing knots".into()));
    }
    let zero_in_support = kv.first() <= 0.0 && 0.0 <= kv.last();
    let singular: &[f64] = if zero_in_support && !z.is_nonnegative_integer() { &[0.0] } else { &[] };
    let integral = integrate_against_density(
        kv,
        &[0.0],
        singular,
        |x| branch_power(x, z).unwrap_or(Complex64::new(0.0, 0.0)),
        spec,
    )?;
    Ok(binom_shifted(z, kv.len()) * integral)
}
