//! Schur polynomials as bialternants, and their appearance in `h_z` for
//! negative integer and positive rational degrees.

use serde::{Deserialize, Serialize};

use crate::chs::{h_fractional, PointTuple};
use crate::error::{Error, Result};
use crate::numerics::DoubleDouble;

/// Nonincreasing nonnegative parts `λ_1 ≥ … ≥ λ_n ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("parts {parts:?} are not nonincreasing")));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Determinant by Gaussian elimination with complete pivoting. Destroys `m`.
fn det_complete_pivot(m: &mut [Vec<DoubleDouble>]) -> DoubleDouble {
    let n = m.len();
    let mut det = DoubleDouble::ONE;
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, 0.0);
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if v.hi.abs() > best {
                    (pi, pj, best) = (i, j, v.hi.abs());
                }
            }
        }
        if best == 0.0 {
            return DoubleDouble::default();
        }
        if pi != k {
            m.swap(pi, k);
            det = -det;
        }
        if pj != k {
            for row in m.iter_mut() {
                row.swap(pj, k);
            }
            det = -det;
        }
        let pivot = m[k][k];
        det = det * pivot;
        for i in k + 1..n {
            let f = m[i][k] / pivot;
            if f.hi != 0.0 {
                for j in k + 1..n {
                    m[i][j] = m[i][j] - f * m[k][j];
                }
            }
        }
    }
    det
}

/// `s_λ(a) = det[a_i^{λ_{n-k} + k}] / ∏_{i<j}(a_j - a_i)` for pairwise distinct points.
///
/// Rows are scaled by powers of two to unit max-norm before elimination; the
/// scales and the Vandermonde factors are recombined one at a time to stay
/// in range. Elimination runs in double-double so that clustered points do
/// not cost the digits the Vandermonde quotient removes.
pub fn schur_eval(lam: &Partition, pts: &PointTuple) -> Result<f64> {
    let a = pts.points();
    let n = a.len();
    if lam.len() != n {
        return Err(Error::InvalidInput(format!("partition has {} parts but there are {n} points", lam.len())));
    }
    if !pts.is_pairwise_distinct() {
        return Err(Error::Domain("points must be pairwise distinct".into()));
    }
    let exponents: Vec<u32> = (0..n).map(|k| lam.parts()[n - 1 - k] + k as u32).collect();
    let mut scales = Vec::with_capacity(n);
    let mut m: Vec<Vec<DoubleDouble>> = a
        .iter()
        .map(|&ai| {
            let row: Vec<DoubleDouble> = exponents.iter().map(|&e| DoubleDouble::from_f64(ai).powi(e)).collect();
            let big = row.iter().fold(0.0f64, |acc, v| acc.max(v.hi.abs()));
            let s = if big > 0.0 { 2f64.powi(big.log2().round() as i32) } else { 1.0 };
            scales.push(s);
            let inv = DoubleDouble::from_f64(1.0 / s);
            row.into_iter().map(|v| v * inv).collect()
        })
        .collect();
    let mut value = det_complete_pivot(&mut m);
    let mut factors = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            factors.push(DoubleDouble::diff(a[j], a[i]));
        }
    }
    // interleave growth and shrinkage
    let mut scales = scales.into_iter();
    let mut factors = factors.into_iter();
    loop {
        match (value.hi.abs() >= 1.0, scales.len() > 0, factors.len() > 0) {
            (_, false, false) => break,
            (true, _, true) | (_, false, true) => value = value / factors.next().unwrap(),
            _ => value = value * DoubleDouble::from_f64(scales.next().unwrap()),
        }
    }
    Ok(value.to_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// The partition entering the right-hand side, if any.
    pub partition: Option<Partition>,
}

/// Compares `h_{-z}` with its Schur expression: zero for `1 ≤ z ≤ n-1`,
/// `(-1)^{n-1} (∏a)^{n-1-z} s_{(z-n,…,z-n,0)}(a)` for `z ≥ n`.
pub fn check_prop_negative(z: u32, pts: &PointTuple) -> Result<IdentityResidual> {
    if z == 0 {
        return Err(Error::Domain("z must be a positive integer".into()));
    }
    if pts.zero_count() > 0 {
        return Err(Error::Domain("points must be nonzero".into()));
    }
    let n = pts.len();
    let h = h_fractional((-(z as f64)).into(), pts)?.value;
    let lhs = h.re;
    if (z as usize) < n {
        return Ok(IdentityResidual { lhs, rhs: 0.0, residual: h.norm(), partition: None });
    }
    let mut parts = vec![z - n as u32; n - 1];
    parts.push(0);
    let lam = Partition::new(parts)?;
    let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let e = n as i32 - 1 - z as i32;
    let prefactor: f64 = pts.points().iter().map(|a| a.powi(e)).product();
    let rhs = sign * prefactor * schur_eval(&lam, pts)?;
    Ok(IdentityResidual { lhs, rhs, residual: (h - rhs).norm(), partition: Some(lam) })
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `λ = (p+(n-1)(q-1), (n-2)(q-1), …, q-1, 0)`.
pub fn rational_partition(p: u32, q: u32, n: usize) -> Result<Partition> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let mut parts: Vec<u32> = (0..n).rev().map(|k| k as u32 * (q - 1)).collect();
    parts[0] += p;
    Partition::new(parts)
}

/// Compares `h_{p/q}(a)` with
/// `∏_{i<j} 1/(Σ_t a_i^{(q-1-t)/q} a_j^{t/q}) · s_λ(a_1^{1/q}, …, a_n^{1/q})`
/// for positive distinct points.
pub fn check_prop_rational(p: u32, q: u32, pts: &PointTuple) -> Result<IdentityResidual> {
    if p == 0 || q < 2 || gcd(p, q) != 1 {
        return Err(Error::Domain(format!("need p >= 1, q >= 2 and gcd(p, q) = 1, got p = {p}, q = {q}")));
    }
    if pts.points().iter().any(|&a| a <= 0.0) {
        return Err(Error::Domain("points must be positive".into()));
    }
    let a = pts.points();
    let n = a.len();
    let lam = rational_partition(p, q, n)?;
    let b: Vec<f64> = a.iter().map(|x| x.powf(1.0 / q as f64)).collect();
    let mut prefactor = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            let s: f64 = (0..q).map(|t| b[i].powi((q - 1 - t) as i32) * b[j].powi(t as i32)).sum();
            prefactor /= s;
        }
    }
    let rhs = prefactor * schur_eval(&lam, &PointTuple::new(b)?)?;
    let h = h_fractional((p as f64 / q as f64).into(), pts)?.value;
    Ok(IdentityResidual { lhs: h.re, rhs, residual: (h - rhs).norm(), partition: Some(lam) })
}
