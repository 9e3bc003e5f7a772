//! Moments and sup norm of a polynomial on the unit circle.
//!
//! `circle_moment_exact` returns `(1/2π)∫_T |p|^{2m} |dz|` as the constant
//! Laurent coefficient of `(p·p̄)^m`. `sup_norm_enclosure` brackets
//! `‖p‖ = max_{|z|=1} |p(z)|` using `‖p^l‖₂^{1/l} ≤ ‖p‖ ≤ ‖p^l‖₁^{1/l}` for
//! `l = 2^k`, squaring repeatedly until the bracket is tight enough.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::exponent::Exponent;
use crate::poly::{constant_term_of_product, LaurentPoly, MulBackend, Poly, PolyConfig};
use crate::C64;

/// Largest tolerated `|Im|/|Re|` of a computed moment.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Certified interval `[lo, hi]` for a nonnegative quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
    pub doublings_used: u32,
    pub relative_width: f64,
    /// `relative_width ≤ rel_tol` was reached.
    pub converged: bool,
    /// Iteration stopped because the next square would exceed the
    /// coefficient cap.
    pub cap_reached: bool,
}

impl Enclosure {
    /// A degenerate enclosure `[v, v]`.
    pub fn exact(value: f64) -> Self {
        Enclosure::from_bounds(value, value, 0, true, false)
    }

    fn from_bounds(lo: f64, hi: f64, doublings_used: u32, converged: bool, cap_reached: bool) -> Self {
        Enclosure {
            lo,
            hi,
            doublings_used,
            relative_width: relative_width(lo, hi),
            converged,
            cap_reached,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

fn relative_width(lo: f64, hi: f64) -> f64 {
    (hi - lo) / hi.max(f64::MIN_POSITIVE)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnclosureOptions {
    pub rel_tol: f64,
    pub max_doublings: u32,
    pub poly: PolyConfig,
}

impl Default for EnclosureOptions {
    fn default() -> Self {
        EnclosureOptions {
            rel_tol: 1e-3,
            max_doublings: 14,
            poly: PolyConfig::default(),
        }
    }
}

/// `(1/2π)∫_T |p(z)|^{2m} |dz|`, computed exactly up to roundoff.
pub fn circle_moment_exact(p: &Poly, m: u32) -> Result<f64> {
    circle_moment_exact_with(p, m, &PolyConfig::default())
}

pub fn circle_moment_exact_with(p: &Poly, m: u32, cfg: &PolyConfig) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("moment order m must be >= 1"));
    }
    let needed = 2 * p.degree() as u128 * m as u128 + 1;
    if needed > cfg.max_coeffs as u128 {
        return Err(Error::resource(format!(
            "moment of order {m} at degree {} needs {needed} coefficients, cap is {}",
            p.degree(),
            cfg.max_coeffs
        )));
    }
    if p.is_zero() {
        return Ok(0.0);
    }
    let q = LaurentPoly::from_poly(p).mul_with(&p.conj_reflect(), MulBackend::Auto, cfg)?;
    // c_0(q^m) = Σ_k (q^⌈m/2⌉)_k (q^⌊m/2⌋)_{−k}
    let hi_half = q.pow_with(m.div_ceil(2), MulBackend::Auto, cfg)?;
    let c0 = if m / 2 == 0 {
        hi_half.coeff(0)
    } else if m.is_multiple_of(2) {
        constant_term_of_product(&hi_half, &hi_half)
    } else {
        let lo_half = q.pow_with(m / 2, MulBackend::Auto, cfg)?;
        constant_term_of_product(&hi_half, &lo_half)
    };
    real_part_checked(c0)
}

fn real_part_checked(c: C64) -> Result<f64> {
    if c.im.abs() > IMAG_RESIDUE_TOL * c.re.abs() {
        return Err(Error::consistency(format!(
            "moment has imaginary residue {:e} against real part {:e}",
            c.im, c.re
        )));
    }
    Ok(c.re.max(0.0))
}

/// `max_t |p(e^{2πit/grid})|`, a lower bound for `‖p‖`.
pub fn sup_norm_sample(p: &Poly, grid: usize) -> Result<f64> {
    sup_norm_sample_with(p, grid, Execution::default())
}

pub fn sup_norm_sample_with(p: &Poly, grid: usize, exec: Execution) -> Result<f64> {
    if grid == 0 {
        return Err(Error::domain("sampling grid must have at least one point"));
    }
    const CHUNK: u64 = 1024;
    let step = 2.0 * PI / grid as f64;
    let maxima = exec::map_blocks(exec, grid as u64, CHUNK, |start, end| {
        (start..end)
            .map(|t| p.eval(C64::from_polar(1.0, step * t as f64)).norm())
            .fold(0.0, f64::max)
    });
    Ok(maxima.into_iter().fold(0.0, f64::max))
}

/// Enclosure of `‖p‖` with the given relative tolerance and doubling budget.
pub fn sup_norm_enclosure(p: &Poly, rel_tol: f64, max_doublings: u32) -> Result<Enclosure> {
    sup_norm_enclosure_with(
        p,
        &EnclosureOptions {
            rel_tol,
            max_doublings,
            ..EnclosureOptions::default()
        },
    )
}

/// Per-coefficient error factor of an FFT self-convolution of length `size`,
/// relative to `‖x‖₂²`.
fn fft_error_factor(size: usize) -> f64 {
    16.0 * (size.max(2) as f64).log2() * f64::EPSILON
}

pub fn sup_norm_enclosure_with(p: &Poly, opts: &EnclosureOptions) -> Result<Enclosure> {
    if p.is_zero() {
        return Err(Error::domain("sup norm enclosure of the zero polynomial"));
    }
    if opts.rel_tol.is_nan() || opts.rel_tol <= 0.0 {
        return Err(Error::domain(format!("rel_tol must be positive, got {}", opts.rel_tol)));
    }
    if p.support_size() == 1 {
        // c·z^k has |p| ≡ |c| on the circle
        return Ok(Enclosure::exact(p.coeff_norm(Exponent::INFINITY)));
    }

    let eps = f64::EPSILON;
    let l1 = p.coeff_norm(Exponent::ONE);
    // Invariant: p^(2^k) = scale·(q + δ) with ‖δ‖₂ ≤ err, scale = exp(log_scale).
    let mut q = p.scale(C64::new(1.0 / l1, 0.0));
    let mut log_scale = l1.ln();
    let mut err = eps * q.coeff_norm(Exponent::TWO);
    let mut k = 0u32;
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;

    loop {
        let len = q.coeffs().len() as f64;
        let rounding = 1.0 + 2.0 * len * eps;
        let q1 = q.coeff_norm(Exponent::ONE) * rounding + len.sqrt() * err;
        let q2 = q.coeff_norm(Exponent::TWO) / rounding - err;
        let l = (k as f64).exp2();
        hi = hi.min(((log_scale + q1.ln()) / l).exp());
        if q2 > 0.0 {
            lo = lo.max(((log_scale + q2.ln()) / l).exp());
        }
        let width = relative_width(lo, hi);
        if width <= opts.rel_tol {
            return Ok(Enclosure::from_bounds(lo, hi, k, true, false));
        }
        if k >= opts.max_doublings {
            return Ok(Enclosure::from_bounds(lo, hi, k, false, false));
        }
        let next_len = 2 * q.coeffs().len() - 1;
        if next_len > opts.poly.max_coeffs {
            return Ok(Enclosure::from_bounds(lo, hi, k, false, true));
        }

        let gamma = if next_len >= opts.poly.fft_threshold {
            fft_error_factor(next_len.next_power_of_two())
        } else {
            (next_len as f64 + 2.0) * eps
        };
        let q_l1 = q.coeff_norm(Exponent::ONE);
        let q_l2 = q.coeff_norm(Exponent::TWO);
        let cfg = PolyConfig {
            relative_trim: None,
            ..opts.poly.clone()
        };
        let squared = q.square_with(MulBackend::Auto, &cfg)?;
        // ‖(q+δ)² − q̃²‖₂ ≤ ‖δ‖₂‖2q+δ‖₁ + rounding of the product
        let propagated = err * (2.0 * q_l1 + len.sqrt() * err);
        let product_rounding = (next_len as f64).sqrt() * gamma * q_l2 * q_l2;
        let norm = squared.coeff_norm(Exponent::ONE);
        q = squared.scale(C64::new(1.0 / norm, 0.0));
        err = (propagated + product_rounding) / norm + eps * q.coeff_norm(Exponent::TWO);
        log_scale = 2.0 * log_scale + norm.ln();
        k += 1;
    }
}

/// Upper bound for `‖p‖₁` from enclosures of `‖p‖` and `‖p′‖`:
/// `|a_0| ≤ ‖p‖` and, by Cauchy–Schwarz against `Σ j⁻² = π²/6` together with
/// `Σ j²|a_j|² ≤ ‖p′‖²`, `Σ_{j≥1} |a_j| ≤ (π/√6)·‖p′‖`.
pub fn l1_estimate_via_derivative(sup_p: &Enclosure, sup_dp: &Enclosure) -> f64 {
    sup_p.hi + PI / 6f64.sqrt() * sup_dp.hi
}

/// Encloses `‖p‖` and `‖p′‖` and applies [`l1_estimate_via_derivative`].
pub fn l1_bound_from_sup_norms(p: &Poly, opts: &EnclosureOptions) -> Result<f64> {
    let enclose = |q: &Poly| {
        if q.is_zero() {
            Ok(Enclosure::exact(0.0))
        } else {
            sup_norm_enclosure_with(q, opts)
        }
    };
    let sup_p = enclose(p)?;
    let sup_dp = enclose(&p.derivative())?;
    Ok(l1_estimate_via_derivative(&sup_p, &sup_dp))
}
