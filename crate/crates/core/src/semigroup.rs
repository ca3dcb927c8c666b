//! Factorization lengths in numerical semigroups and their B-spline limit law.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bspline::KnotVector;
use crate::error::{Error, Result};

/// Largest element accepted by [`length_multiset`].
pub const MAX_ELEMENT: u64 = 100_000;
/// Largest number of outer-generator combinations [`length_multiset`] will enumerate.
pub const MAX_WORK: f64 = 2e9;

/// Strictly increasing positive generators with `gcd = 1`, at least two of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GeneratorSet(Vec<u64>);

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GeneratorSet {
    pub fn new(gens: Vec<u64>) -> Result<Self> {
        if gens.len() < 2 {
            return Err(Error::InvalidGenerators("at least two generators are required".into()));
        }
        if gens.contains(&0) {
            return Err(Error::InvalidGenerators("generators must be positive".into()));
        }
        if gens.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGenerators("generators must be strictly increasing".into()));
        }
        if gens.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
            return Err(Error::InvalidGenerators(format!("gcd must be 1, got generators {gens:?}")));
        }
        Ok(Self(gens))
    }

    pub fn gens(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<u64>> for GeneratorSet {
    type Error = Error;

    fn try_from(gens: Vec<u64>) -> Result<Self> {
        Self::new(gens)
    }
}

impl From<GeneratorSet> for Vec<u64> {
    fn from(g: GeneratorSet) -> Self {
        g.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthDistribution {
    pub element: u64,
    /// Length `ℓ = x_1 + … + x_n` ↦ number of decompositions of that length.
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl LengthDistribution {
    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Lengths of every decomposition `m = Σ x_j m_j`, counted with multiplicity.
///
/// The coefficients of `m_3, …, m_n` are enumerated; for each residual the
/// decompositions over `m_1 < m_2` form an arithmetic progression of lengths
/// with step `(m_2 - m_1)/gcd(m_1, m_2)`, which is recorded in a strided
/// difference array.
pub fn length_multiset(m: u64, gs: &GeneratorSet) -> Result<LengthDistribution> {
    if m > MAX_ELEMENT {
        return Err(Error::Capacity(format!("element {m} exceeds the supported maximum {MAX_ELEMENT}")));
    }
    let g = gs.gens();
    let work: f64 = g[2..].iter().map(|&gk| (m / gk + 1) as f64).product();
    if work > MAX_WORK {
        return Err(Error::Capacity(format!("enumeration of {work:.3e} combinations exceeds the limit")));
    }
    let (g1, g2) = (g[0], g[1]);
    let d = gcd(g1, g2);
    let (step_x2, step_len) = (g1 / d, (g2 - g1) / d);
    // inverse of g2/d modulo g1/d
    let inv = {
        let (_, x, _) = ext_gcd((g2 / d) as i128, step_x2 as i128);
        x.rem_euclid(step_x2 as i128) as u64
    };
    let max_len = (m / g1) as usize;
    let mut diff = vec![0i64; max_len + step_len as usize + 2];
    let mut total: u64 = 0;

    let mut add_pair = |r: u64, outer_len: u64| {
        if !r.is_multiple_of(d) {
            return;
        }
        let x2_0 = ((r / d) % step_x2) * inv % step_x2;
        if x2_0 * g2 > r {
            return;
        }
        let count = ((r / g2 - x2_0) / step_x2) + 1;
        let top = outer_len + (r - x2_0 * g2) / g1 + x2_0;
        let bottom = top - (count - 1) * step_len;
        diff[bottom as usize] += 1;
        diff[(top + step_len) as usize] -= 1;
        total += count;
    };

    fn walk(g: &[u64], k: usize, r: u64, len: u64, add: &mut dyn FnMut(u64, u64)) {
        if k < 2 {
            add(r, len);
            return;
        }
        let gk = g[k];
        for x in 0..=r / gk {
            walk(g, k - 1, r - x * gk, len + x, add);
        }
    }
    walk(g, g.len() - 1, m, 0, &mut add_pair);

    let stride = step_len as usize;
    let mut counts = BTreeMap::new();
    let mut running = vec![0i64; diff.len()];
    for l in 0..diff.len() {
        running[l] = diff[l] + if stride > 0 && l >= stride { running[l - stride] } else { 0 };
        if running[l] > 0 && l <= max_len {
            counts.insert(l as u64, running[l] as u64);
        }
    }
    Ok(LengthDistribution { element: m, counts, total })
}

/// Knots `(1/m_n, …, 1/m_1)` of the limit density of `ℓ/m`.
pub fn limit_density(gs: &GeneratorSet) -> KnotVector {
    let knots: Vec<f64> = gs.gens().iter().rev().map(|&g| 1.0 / g as f64).collect();
    KnotVector::strict(knots).expect("distinct positive generators give distinct reciprocals")
}

/// `∫_{-∞}^x F(t; knots) dt = 1 - Σ_j (t_j - x)_+^{n-1} / ∏_{k≠j}(t_j - t_k)`.
pub fn limit_cdf(kv: &KnotVector, x: f64) -> f64 {
    let t = kv.knots();
    if x <= kv.first() {
        return 0.0;
    }
    if x >= kv.last() {
        return 1.0;
    }
    let n = t.len();
    let tail: f64 = t
        .iter()
        .enumerate()
        .filter(|&(_, &tj)| tj > x)
        .map(|(j, &tj)| {
            let den: f64 = t.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, tk)| tj - tk).product();
            (tj - x).powi(n as i32 - 1) / den
        })
        .sum();
    (1.0 - tail).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitComparison {
    pub element: u64,
    pub total: u64,
    pub distinct_lengths: usize,
    /// `sup_x |empirical CDF of ℓ/m − limit CDF|`.
    pub sup_cdf_distance: f64,
}

/// Sup distance between the empirical distribution of `ℓ/m` and the limit law.
///
/// The limit CDF is continuous, so the supremum is attained at a jump of the
/// empirical step function, from one side or the other.
pub fn compare_to_limit(m: u64, gs: &GeneratorSet) -> Result<LimitComparison> {
    let dist = length_multiset(m, gs)?;
    if dist.is_empty() {
        return Err(Error::Domain(format!("{m} is not in the semigroup generated by {:?}", gs.gens())));
    }
    let kv = limit_density(gs);
    let mut below = 0u64;
    let mut sup = 0.0f64;
    for (&l, &c) in &dist.counts {
        let x = l as f64 / m as f64;
        let limit = limit_cdf(&kv, x);
        let left = below as f64 / dist.total as f64;
        below += c;
        let right = below as f64 / dist.total as f64;
        sup = sup.max((left - limit).abs()).max((right - limit).abs());
    }
    Ok(LimitComparison { element: m, total: dist.total, distinct_lengths: dist.counts.len(), sup_cdf_distance: sup })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(g: &[u64]) -> GeneratorSet {
        GeneratorSet::new(g.to_vec()).unwrap()
    }

    fn brute_force(m: u64, g: &[u64]) -> BTreeMap<u64, u64> {
        fn go(g: &[u64], r: u64, len: u64, out: &mut BTreeMap<u64, u64>) {
            match g.split_first() {
                None => {
                    if r == 0 {
                        *out.entry(len).or_insert(0) += 1;
                    }
                }
                Some((&first, rest)) => {
                    for x in 0..=r / first {
                        go(rest, r - x * first, len + x, out);
                    }
                }
            }
        }
        let mut out = BTreeMap::new();
        go(g, m, 0, &mut out);
        out
    }

    #[test]
    fn generator_validation() {
        assert!(GeneratorSet::new(vec![4, 6]).unwrap_err().to_string().contains("gcd must be 1"));
        assert!(GeneratorSet::new(vec![3]).is_err());
        assert!(GeneratorSet::new(vec![3, 2]).is_err());
        assert!(GeneratorSet::new(vec![0, 1]).is_err());
        assert!(GeneratorSet::new(vec![6, 9, 20]).is_ok());
    }

    #[test]
    fn multiset_examples() {
        let d = length_multiset(12, &gs(&[2, 3])).unwrap();
        assert_eq!(d.counts, BTreeMap::from([(4, 1), (5, 1), (6, 1)]));
        assert_eq!(d.total, 3);
        let d = length_multiset(10, &gs(&[1, 2])).unwrap();
        assert_eq!(d.counts, (5..=10).map(|l| (l, 1)).collect());
        assert!(length_multiset(1, &gs(&[2, 3])).unwrap().is_empty());
        assert_eq!(length_multiset(0, &gs(&[2, 3])).unwrap().counts, BTreeMap::from([(0, 1)]));
        assert!(matches!(length_multiset(MAX_ELEMENT + 1, &gs(&[2, 3])), Err(Error::Capacity(_))));
    }

    #[test]
    fn multiset_matches_brute_force() {
        for g in [&[2u64, 3][..], &[3, 5], &[6, 9, 20], &[5, 7, 11], &[4, 6, 9], &[2, 5, 6, 7]] {
            for m in 0..=200 {
                let d = length_multiset(m, &gs(g)).unwrap();
                let b = brute_force(m, g);
                assert_eq!(d.counts, b, "{g:?} m={m}");
                assert_eq!(d.total, b.values().sum::<u64>());
            }
        }
    }

    #[test]
    fn density_knots() {
        assert_eq!(limit_density(&gs(&[1, 2])).knots(), &[0.5, 1.0]);
        assert_eq!(limit_density(&gs(&[2, 3])).knots(), &[1.0 / 3.0, 0.5]);
        assert_eq!(limit_density(&gs(&[6, 9, 20])).knots(), &[1.0 / 20.0, 1.0 / 9.0, 1.0 / 6.0]);
    }

    #[test]
    fn cdf_matches_quadrature() {
        use crate::numerics::{integrate_real, QuadratureSpec};
        let kv = limit_density(&gs(&[3, 5, 7, 11]));
        for k in 0..=20 {
            let x = kv.first() + (kv.last() - kv.first()) * k as f64 / 20.0;
            let mut br: Vec<f64> = kv.knots().iter().copied().filter(|&t| t < x).collect();
            br.push(x);
            let q = if br.len() < 2 {
                0.0
            } else {
                integrate_real(|t| crate::bspline::eval_truncated(t, &kv).unwrap(), &br, &[], &QuadratureSpec::default())
                    .unwrap()
            };
            assert!((limit_cdf(&kv, x) - q).abs() < 1e-10, "{x}");
        }
    }

    #[test]
    fn comparison_examples() {
        let c = compare_to_limit(12, &gs(&[2, 3])).unwrap();
        assert!((c.sup_cdf_distance - 1.0 / 3.0).abs() < 1e-12);
        let c = compare_to_limit(10, &gs(&[2, 3])).unwrap();
        assert!((c.sup_cdf_distance - 0.5).abs() < 1e-12);
        assert!(compare_to_limit(1000, &gs(&[1, 2])).unwrap().sup_cdf_distance < 0.01);
        assert!(compare_to_limit(1, &gs(&[2, 3])).is_err());
    }
}
