//! Random tuple laws for the randomized verification suites.
//!
//! Every draw gets its own ChaCha stream derived from `(seed, stream)`, so a
//! suite produces the same tuples whether it runs sequentially or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Minimum separation between coordinates; closer draws are resampled.
pub const COLLISION_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// ℝⁿ
    Whole,
    /// [0, ∞)ⁿ
    NonNegative,
    /// (−∞, 0]ⁿ
    NonPositive,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Whole => "whole",
            Self::NonNegative => "nonnegative",
            Self::NonPositive => "nonpositive",
        })
    }
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn separated(a: &[f64]) -> bool {
    let mut s = a.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).all(|w| w[1] - w[0] >= COLLISION_GAP)
}

fn draw_until_separated(rng: &mut ChaCha8Rng, n: usize, mut coord: impl FnMut(&mut ChaCha8Rng) -> f64) -> Vec<f64> {
    loop {
        let a: Vec<f64> = (0..n).map(|_| coord(rng)).collect();
        if separated(&a) {
            return a;
        }
    }
}

/// i.i.d. standard normal coordinates, folded to the orthant for the one-signed regions.
/// With `with_zero`, the first coordinate is replaced by 0.
pub fn draw_tuple(rng: &mut ChaCha8Rng, n: usize, region: Region, with_zero: bool) -> Vec<f64> {
    loop {
        let mut a = draw_until_separated(rng, n, |r| {
            let x: f64 = r.sample(StandardNormal);
            match region {
                Region::Whole => x,
                Region::NonNegative => x.abs(),
                Region::NonPositive => -x.abs(),
            }
        });
        if with_zero && n > 0 {
            a[0] = 0.0;
            if !separated(&a) {
                continue;
            }
        }
        return a;
    }
}

/// Uniform on the unit sphere in ℝⁿ, optionally folded into an orthant.
pub fn draw_unit_sphere(rng: &mut ChaCha8Rng, n: usize, region: Region) -> Vec<f64> {
    loop {
        let a = draw_tuple(rng, n, region, false);
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let a: Vec<f64> = a.iter().map(|x| x / norm).collect();
        if separated(&a) {
            return a;
        }
    }
}

/// Coordinates in the open interval `(r, s)`; infinite ends are reached
/// through normal tails of unit scale beyond the finite end.
pub fn draw_in_interval(rng: &mut ChaCha8Rng, n: usize, r: f64, s: f64) -> Vec<f64> {
    draw_until_separated(rng, n, |rng| loop {
        let x = match (r.is_finite(), s.is_finite()) {
            (true, true) => r + (s - r) * rng.gen::<f64>(),
            (true, false) => r + rng.sample::<f64, _>(StandardNormal).abs() * (1.0 + r.abs()),
            (false, true) => s - rng.sample::<f64, _>(StandardNormal).abs() * (1.0 + s.abs()),
            (false, false) => 2.0 * rng.sample::<f64, _>(StandardNormal),
        };
        if x > r && x < s {
            break x;
        }
    })
}

/// Strictly increasing knots: a standard normal start followed by gaps uniform in `[0.2, 1.5)`.
pub fn draw_knots(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x: f64 = rng.sample(StandardNormal);
    let mut knots = Vec::with_capacity(n);
    for _ in 0..n {
        knots.push(x);
        x += rng.gen_range(0.2..1.5);
    }
    knots
}
