//! Independent positivity oracle for one-variable integer polynomials, and a
//! generator of small linear combinations to feed it.
//!
//! Rational roots come from the rational root theorem by exhaustive candidate
//! enumeration; irrational roots are located approximately through the
//! companion-matrix eigenvalues and then bracketed by exact evaluations.

#![allow(dead_code)]

use hsym::analysis::{ChsCombination, Interval};
use num_complex::Complex64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn binom(j: usize, n: usize) -> i64 {
    (1..n).fold(1i64, |acc, k| acc * (j + k) as i64 / k as i64)
}

/// Integer coefficients of `P(x) = Σ_j c_j C(j+n-1, n-1) x^j`, low to high.
pub fn diagonal_poly(c: &[i64], n: usize) -> Vec<i64> {
    c.iter().enumerate().map(|(j, cj)| cj * binom(j, n)).collect()
}

fn eval(p: &[i64], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(BigInt::from(*c)))
}

fn divisors(v: i64) -> Vec<i64> {
    let v = v.abs();
    (1..=v).filter(|d| v % d == 0).collect()
}

fn inside(x: f64, iv: &Interval) -> bool {
    x > iv.r && x < iv.s
}

fn inside_exact(x: &BigRational, iv: &Interval) -> bool {
    let r_ok = !iv.r.is_finite() || *x > BigRational::from_float(iv.r).unwrap();
    let s_ok = !iv.s.is_finite() || *x < BigRational::from_float(iv.s).unwrap();
    r_ok && s_ok
}

/// All complex roots of `q` by simultaneous Weierstrass iteration.
fn durand_kerner(q: &[i64]) -> Vec<Complex64> {
    let deg = q.len() - 1;
    let lead = *q.last().unwrap() as f64;
    let monic: Vec<f64> = q.iter().map(|&c| c as f64 / lead).collect();
    let f = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let denom = (0..deg).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = f(z[i]) / denom;
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Whether `p > 0` on the interval with 0 removed, decided without Sturm sequences.
pub fn positive_on(p: &[i64], iv: &Interval) -> bool {
    let mut p: Vec<i64> = p.to_vec();
    while p.last() == Some(&0) {
        p.pop();
    }
    if p.is_empty() {
        return false;
    }
    // strip x^k: the removed origin carries no constraint
    let k = p.iter().position(|&c| c != 0).unwrap();
    let q: Vec<i64> = p[k..].to_vec();

    // rational roots of q: ±d0/dl with d0 | q_0, dl | q_lead
    for a in divisors(q[0]) {
        for b in divisors(*q.last().unwrap()) {
            for s in [1, -1] {
                let x = BigRational::new(BigInt::from(s * a), BigInt::from(b));
                if inside_exact(&x, iv) && eval(&q, &x).is_zero() {
                    return false;
                }
            }
        }
    }

    // approximate real roots of q
    let mut probes: Vec<f64> = Vec::new();
    for z in durand_kerner(&q) {
        if z.im.abs() < 1e-6 * (1.0 + z.re.abs()) {
            if inside(z.re, iv) && z.re.abs() > 1e-9 {
                // a real root in the interval: either a sign change or a touch, both fatal
                return false;
            }
            probes.extend([z.re - 1e-6, z.re + 1e-6]);
        }
    }

    // exact signs on a rational grid plus the probes
    let lo = if iv.r.is_finite() { iv.r } else { -64.0 };
    let hi = if iv.s.is_finite() { iv.s } else { 64.0 };
    let mut pts: Vec<f64> = (1..400).map(|i| lo + (hi - lo) * i as f64 / 400.0).collect();
    pts.extend(probes);
    if !iv.r.is_finite() {
        pts.push(-1e6);
    }
    if !iv.s.is_finite() {
        pts.push(1e6);
    }
    pts.into_iter()
        .filter(|&x| inside(x, iv) && x != 0.0)
        .all(|x| eval(&p, &BigRational::from_float(x).unwrap()).is_positive())
}

pub fn intervals() -> Vec<Interval> {
    vec![
        Interval::whole(),
        Interval::new(0.0, f64::INFINITY).unwrap(),
        Interval::new(f64::NEG_INFINITY, 0.0).unwrap(),
        Interval::new(-1.0, 2.0).unwrap(),
        Interval::new(0.5, 3.0).unwrap(),
    ]
}

/// Small integer combinations with `m ≤ 6`, `n ≤ 4`, from four families:
/// unconstrained, nonnegative on the positive half-line, even-degree
/// nonnegative on the whole line, and the last with an odd perturbation.
pub fn random_combination(rng: &mut ChaCha8Rng) -> (Vec<i64>, ChsCombination) {
    let m = rng.gen_range(0..=6usize);
    let n = rng.gen_range(1..=4usize);
    let ivs = intervals();
    let family = rng.gen_range(0..4);
    let mut c: Vec<i64> = (0..=m).map(|_| rng.gen_range(-3..=3)).collect();
    let iv = match family {
        0 => ivs[rng.gen_range(0..ivs.len())],
        1 => {
            c.iter_mut().for_each(|x| *x = x.abs());
            ivs[1]
        }
        _ => {
            for (j, x) in c.iter_mut().enumerate() {
                *x = if j % 2 == 0 { x.abs() } else { 0 };
            }
            c[0] = c[0].max(1);
            if family == 3 && m >= 1 {
                let j = 2 * rng.gen_range(0..=(m - 1) / 2) + 1;
                c[j] = if rng.gen() { 1 } else { -1 };
            }
            ivs[rng.gen_range(0..ivs.len())]
        }
    };
    let comb = ChsCombination::linear(c.iter().map(|&x| x as f64).collect(), n, iv).unwrap();
    (c, comb)
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((a, b)) => BigRational::new(a.trim().parse().unwrap(), b.trim().parse().unwrap()),
        None => BigRational::from_integer(s.trim().parse().unwrap()),
    }
}

pub fn eval_exact(p: &[i64], x: &BigRational) -> BigRational {
    eval(p, x)
}

pub fn one() -> BigRational {
    BigRational::one()
}
