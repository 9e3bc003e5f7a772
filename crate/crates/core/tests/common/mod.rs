//! Shared generators and brute-force oracles for the integration tests.
//!
//! The oracles deliberately avoid the library's own algorithms: sums over
//! every sign string are formed directly, convolutions are double loops and
//! circle integrals are trapezoid sums of Horner evaluations.

#![allow(dead_code)]

use circle_norms::{Poly, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| gaussian_c64(rng)).collect()
}

/// Complex Gaussian coefficients, degree uniform in `0..=max_degree`, with a
/// nonzero leading term.
pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Poly {
    let deg = rng.random_range(0..=max_degree);
    Poly::new(gaussian_vec(rng, deg + 1))
}

pub fn complex() -> impl Strategy<Value = C64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| C64::new(re, im))
}

pub fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(complex(), 1..=max_len)
}

pub fn poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    coeffs(max_degree + 1).prop_map(Poly::new)
}

pub fn l1(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).sum()
}

pub fn l2_sq(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub fn naive_convolution(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// `(1/N) Σ_k |p(e^{2πik/N})|^{2m}`; exact once `N > 2m·deg`.
pub fn trapezoid_moment(coeffs: &[C64], m: u32, nodes: usize) -> f64 {
    (0..nodes)
        .map(|k| {
            let z = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / nodes as f64);
            horner(coeffs, z).norm().powi(2 * m as i32)
        })
        .sum::<f64>()
        / nodes as f64
}

pub fn dense_sample_max(coeffs: &[C64], nodes: usize) -> f64 {
    (0..nodes)
        .map(|k| {
            let z = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / nodes as f64);
            horner(coeffs, z).norm()
        })
        .fold(0.0, f64::max)
}

/// `2^{−len} Σ_s |Σ_j s_j b_j|^{2m}`, one full pass per sign string.
pub fn brute_sign_moment(b: &[C64], m: u32) -> f64 {
    let len = b.len();
    let total = 1u64 << len;
    let sum: f64 = (0..total)
        .map(|mask| {
            let s: C64 = b
                .iter()
                .enumerate()
                .map(|(j, c)| if mask >> j & 1 == 1 { -c } else { *c })
                .sum();
            s.norm().powi(2 * m as i32)
        })
        .sum();
    sum / total as f64
}

pub fn double_factorial_odd(m: u32) -> f64 {
    (1..=m).map(|i| (2 * i - 1) as f64).product()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
