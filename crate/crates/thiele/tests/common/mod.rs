//! Shared test support: an exact rational-arithmetic implementation of the
//! inverse-difference recursion, backward evaluation and the three-term
//! recurrence, plus seeded dataset generators.
//!
//! The oracle mirrors the defining formulas directly over `BigRational`, so
//! it is breakdown-exact (a zero denominator is `None`, never rounding) and
//! shares no code with the `f64` implementation it checks.

#![allow(dead_code)]

use num::{BigRational, ToPrimitive, Zero};
use rand::Rng;

pub fn big(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Diagonal inverse differences of the data taken in the given order, or
/// `None` the moment any denominator in the recursion is exactly zero.
pub fn exact_fixed_order_diagonals(xs: &[f64], fs: &[f64]) -> Option<Vec<BigRational>> {
    let xr: Vec<BigRational> = xs.iter().map(|&x| big(x)).collect();
    let fr: Vec<BigRational> = fs.iter().map(|&f| big(f)).collect();
    let mut diag = vec![fr[0].clone()];
    for k in 1..xr.len() {
        let mut v = fr[k].clone();
        for i in 1..=k {
            let denom = &v - &diag[i - 1];
            if denom.is_zero() {
                return None;
            }
            v = (&xr[k] - &xr[i - 1]) / denom;
        }
        diag.push(v);
    }
    Some(diag)
}

/// Backward evaluation of the continued fraction in exact arithmetic;
/// `None` when a partial denominator is exactly zero (a pole of a tail).
pub fn exact_eval(
    nodes: &[BigRational],
    coeffs: &[BigRational],
    x: &BigRational,
) -> Option<BigRational> {
    let mut res = BigRational::zero();
    for i in (1..coeffs.len()).rev() {
        let denom = &coeffs[i] + &res;
        if denom.is_zero() {
            return None;
        }
        res = (x - &nodes[i - 1]) / denom;
    }
    Some(&coeffs[0] + &res)
}

/// Numerator/denominator pairs of the convergents at `x` via the three-term
/// recurrence, indices -2..=m stored from position 0.
pub fn exact_trace(
    nodes: &[BigRational],
    coeffs: &[BigRational],
    x: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let one = || BigRational::from_integer(1.into());
    let zero = BigRational::zero;
    let mut pairs = vec![(zero(), one()), (one(), zero()), (coeffs[0].clone(), one())];
    for i in 1..coeffs.len() {
        let dx = x - &nodes[i - 1];
        let (a1, b1) = pairs[pairs.len() - 1].clone();
        let (a2, b2) = pairs[pairs.len() - 2].clone();
        pairs.push((&coeffs[i] * &a1 + &dx * &a2, &coeffs[i] * &b1 + &dx * &b2));
    }
    pairs
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("in f64 range")
}

/// Deviation of `value` from `reference`, relative with a floor of one on
/// the reference scale.
pub fn rel_dev(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

/// Distinct sorted abscissae drawn uniformly from `[lo, hi]`.
pub fn distinct_points<R: Rng>(rng: &mut R, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut xs: Vec<f64> = (0..count).map(|_| rng.random_range(lo..hi)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        if xs.len() == count {
            return xs;
        }
    }
}

/// A random rational function `p/q` with `deg p, deg q <= 3` and every pole
/// of magnitude at least 1.5, so it is analytic on `[-1, 1]`.
pub struct RationalFn {
    pub numer: Vec<f64>,
    pub poles: Vec<f64>,
}

impl RationalFn {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let numer: Vec<f64> = (0..rng.random_range(1..=4))
            .map(|_| rng.random_range(-2.0..2.0))
            .collect();
        let poles: Vec<f64> = (0..rng.random_range(0..=3))
            .map(|_| {
                let r = rng.random_range(1.5..4.0);
                if rng.random_bool(0.5) {
                    -r
                } else {
                    r
                }
            })
            .collect();
        Self { numer, poles }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = self.numer.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let q: f64 = self.poles.iter().map(|r| x - r).product();
        p / q
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, count: usize) -> thiele::SampleSet {
        let xs = distinct_points(rng, count, -1.0, 1.0);
        let fs: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        thiele::SampleSet::new(xs, fs).unwrap()
    }
}

/// Samples of a random smooth transcendental, guaranteed non-rational, for
/// fits that use every point.
pub fn smooth_dataset<R: Rng>(rng: &mut R, count: usize) -> thiele::SampleSet {
    let a = rng.random_range(0.5..2.0);
    let b = rng.random_range(0.5..3.0);
    let c = rng.random_range(-1.0..1.0);
    let xs = distinct_points(rng, count, -1.0, 1.0);
    let fs: Vec<f64> = xs.iter().map(|&x| a * (b * x).sin() + c * x.exp()).collect();
    thiele::SampleSet::new(xs, fs).unwrap()
}
