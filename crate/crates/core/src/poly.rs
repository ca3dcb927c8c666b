//! Univariate polynomials over ℚ with Sturm-sequence root counting.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact promotion of a finite double.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("{x} is not a finite number")))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator and denominator may each overflow even when the ratio does not
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Coefficients in increasing degree, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

/// A point of the extended real line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

impl Bound {
    pub fn from_f64(x: f64) -> Result<Self> {
        if x == f64::INFINITY {
            Ok(Self::PosInfinity)
        } else if x == f64::NEG_INFINITY {
            Ok(Self::NegInfinity)
        } else {
            rational_from_f64(x).map(Self::Finite)
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Self::Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_f64(coeffs: &[f64]) -> Result<Self> {
        coeffs.iter().map(|&c| rational_from_f64(c)).collect::<Result<Vec<_>>>().map(Self::new)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    fn scale(&self, by: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * by).collect())
    }

    /// Quotient and remainder of Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let shift = rem.len() - 1 - d;
            let factor = rem.last().unwrap() / &lead;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    /// Splits off the largest power of `x`: returns `(k, q)` with `self = x^k q`, `q(0) ≠ 0`.
    pub fn split_power_of_x(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, Self::new(self.coeffs[k..].to_vec()))
    }

    /// Divides out `(x - root)` as often as it divides `self`.
    pub fn deflate_at(&self, root: &BigRational) -> (usize, Self) {
        let mut q = self.clone();
        let mut k = 0;
        let linear = Self::new(vec![-root.clone(), BigRational::one()]);
        while !q.is_zero() && q.eval(root).is_zero() {
            q = q.div_rem(&linear).0;
            k += 1;
        }
        (k, q)
    }

    /// Sign at a point of the extended line.
    pub fn sign_at(&self, at: &Bound) -> i32 {
        let Some(lead) = self.leading() else { return 0 };
        let s = |x: &BigRational| match x.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        match at {
            Bound::Finite(x) => s(&self.eval(x)),
            Bound::PosInfinity => s(lead),
            Bound::NegInfinity => {
                let parity = if self.degree().unwrap().is_multiple_of(2) { 1 } else { -1 };
                s(lead) * parity
            }
        }
    }

    /// `1 + max |c_k / c_d|`; every real root has smaller modulus.
    pub fn cauchy_bound(&self) -> BigRational {
        let Some(lead) = self.leading() else { return BigRational::one() };
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one()
    }
}

/// Sturm chain `p, p', -rem(p, p'), …` of a nonzero polynomial.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<RationalPoly>,
}

impl SturmSequence {
    pub fn new(p: &RationalPoly) -> Self {
        assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let (_, r) = chain.last().unwrap().div_rem(&next);
            chain.push(next);
            next = r.scale(&-BigRational::one());
        }
        Self { chain }
    }

    pub fn sign_changes(&self, at: &Bound) -> usize {
        let mut changes = 0;
        let mut prev = 0;
        for p in &self.chain {
            let s = p.sign_at(at);
            if s != 0 {
                if prev != 0 && s != prev {
                    changes += 1;
                }
                prev = s;
            }
        }
        changes
    }

    /// Distinct roots in the open interval `(a, b)`; neither end may be a root.
    pub fn count_between(&self, a: &Bound, b: &Bound) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Distinct real roots of `p ≠ 0` in the open interval `(a, b)`, ends allowed to be roots.
pub fn count_roots_open(p: &RationalPoly, a: &Bound, b: &Bound) -> usize {
    let mut q = p.clone();
    for end in [a, b] {
        if let Bound::Finite(x) = end {
            q = q.deflate_at(x).1;
        }
    }
    if q.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmSequence::new(&q).count_between(a, b)
}

/// The rational with the smallest denominator in `[lo, hi]` (Stern–Brocot descent).
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + BigRational::one() <= *hi {
        return fl + BigRational::one();
    }
    // lo and hi share the integer part; recurse on the reciprocals of the fractional parts
    let inner = simplest_between(&(hi.clone() - &fl).recip(), &(lo.clone() - &fl).recip());
    fl + inner.recip()
}

/// Disjoint intervals `(lo, hi]`, each holding exactly one distinct root of `p`
/// in `(a, b)`, refined until `hi - lo ≤ width`.
pub fn isolate_roots(p: &RationalPoly, a: &Bound, b: &Bound, width: &BigRational) -> Vec<(BigRational, BigRational)> {
    let mut q = p.clone();
    for end in [a, b] {
        if let Bound::Finite(x) = end {
            q = q.deflate_at(x).1;
        }
    }
    if q.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = SturmSequence::new(&q);
    let bound = q.cauchy_bound();
    let lo = match a {
        Bound::Finite(x) => x.clone(),
        _ => -bound.clone(),
    };
    let hi = match b {
        Bound::Finite(x) => x.clone(),
        _ => bound,
    };
    if lo >= hi {
        return Vec::new();
    }
    let two = BigRational::from_integer(2.into());
    let count = |l: &BigRational, h: &BigRational| {
        // roots in (l, h]
        sturm.sign_changes(&Bound::Finite(l.clone())) - sturm.sign_changes(&Bound::Finite(h.clone()))
    };
    // The right end is excluded from (a, b); shrink so that a root at `hi` is not counted.
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi.clone())];
    while let Some((l, h)) = stack.pop() {
        let mut c = count(&l, &h);
        if h == hi && q.eval(&h).is_zero() {
            c -= 1;
        }
        if c == 0 {
            continue;
        }
        if c == 1 && &h - &l <= *width {
            out.push((l, h));
            continue;
        }
        let m = (&l + &h) / &two;
        stack.push((m.clone(), h));
        stack.push((l, m));
    }
    out.sort();
    out
}
