//! Dense complex polynomials and two-sided (Laurent) polynomials.
//!
//! A [`Poly`] stores `a_0, …, a_n` with index equal to the power of `z`.
//! A [`LaurentPoly`] stores `c_k` for `k ∈ [k_min, k_max]` and carries
//! products such as `p·p̄`, which on `|z| = 1` equals `|p|²`.

use std::ops::{Add, Neg, Sub};

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::C64;

/// Relative trim threshold applied after FFT products when
/// [`PolyConfig::relative_trim`] is enabled.
pub const RELATIVE_TRIM_EPS: f64 = 1e-14;

/// Which convolution routine computes a product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MulBackend {
    Direct,
    Fft,
    /// Direct below [`PolyConfig::fft_threshold`] result coefficients, FFT
    /// at or above it.
    #[default]
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyConfig {
    /// Largest coefficient count any product may produce.
    pub max_coeffs: usize,
    /// Result length at which `Auto` switches from direct to FFT.
    pub fft_threshold: usize,
    /// When set, trailing coefficients of FFT products with modulus at most
    /// `eps·max|c|` are dropped. Off by default: only exact zeros are trimmed.
    pub relative_trim: Option<f64>,
}

impl Default for PolyConfig {
    fn default() -> Self {
        PolyConfig {
            max_coeffs: 1 << 24,
            fft_threshold: 64,
            relative_trim: None,
        }
    }
}

impl PolyConfig {
    fn use_fft(&self, backend: MulBackend, result_len: usize) -> bool {
        match backend {
            MulBackend::Direct => false,
            MulBackend::Fft => true,
            MulBackend::Auto => result_len >= self.fft_threshold,
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len > self.max_coeffs {
            return Err(Error::resource(format!(
                "product needs {len} coefficients, cap is {}",
                self.max_coeffs
            )));
        }
        Ok(())
    }
}

/// Analytic polynomial `a_0 + a_1 z + … + a_n z^n` with complex coefficients.
///
/// Always canonical: the coefficient vector is nonempty and its last entry
/// is nonzero unless the polynomial is zero, which is stored as `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    /// Build from coefficients `a_0..a_n`, trimming exact trailing zeros.
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Poly { coeffs };
        p.canonicalize();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly {
            coeffs: vec![C64::new(0.0, 0.0)],
        }
    }

    pub fn one() -> Self {
        Poly::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Poly::new(vec![c])
    }

    /// `c·z^k`.
    pub fn monomial(c: C64, k: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    fn canonicalize(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == C64::new(0.0, 0.0) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(C64::new(0.0, 0.0));
        }
    }

    /// Drop trailing coefficients with modulus at most `eps·max|a_j|`.
    pub fn trim_relative(mut self, eps: f64) -> Self {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = eps * max;
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().norm() <= cut {
            self.coeffs.pop();
        }
        self.canonicalize();
        self
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == C64::new(0.0, 0.0)
    }

    /// Number of nonzero coefficients.
    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| **c != C64::new(0.0, 0.0)).count()
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Horner evaluation at a real point.
    pub fn eval_real(&self, x: f64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * x + a)
    }

    pub fn scale(&self, alpha: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * alpha).collect())
    }

    /// Product with the default [`PolyConfig`].
    pub fn mul(&self, other: &Poly, backend: MulBackend) -> Result<Poly> {
        self.mul_with(other, backend, &PolyConfig::default())
    }

    pub fn mul_with(&self, other: &Poly, backend: MulBackend, cfg: &PolyConfig) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        cfg.check_len(len)?;
        let fft = cfg.use_fft(backend, len);
        let out = if fft {
            convolve_fft(&self.coeffs, &other.coeffs)
        } else {
            convolve_direct(&self.coeffs, &other.coeffs)
        };
        Ok(finish_product(out, fft, cfg))
    }

    /// `p²`, using a single forward transform on the FFT path.
    pub fn square_with(&self, backend: MulBackend, cfg: &PolyConfig) -> Result<Poly> {
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        let len = 2 * self.coeffs.len() - 1;
        cfg.check_len(len)?;
        let fft = cfg.use_fft(backend, len);
        let out = if fft {
            self_convolve_fft(&self.coeffs)
        } else {
            convolve_direct(&self.coeffs, &self.coeffs)
        };
        Ok(finish_product(out, fft, cfg))
    }

    /// `p′`: coefficient `j·a_j` moves to index `j − 1`.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &a)| a * j as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &a)| a / (j + 1) as f64),
        );
        Poly::new(coeffs)
    }

    /// `Σ conj(a_j) z^{−j}`, which equals `conj(p(z))` on the unit circle.
    pub fn conj_reflect(&self) -> LaurentPoly {
        let n = self.degree() as i64;
        LaurentPoly {
            k_min: -n,
            coeffs: self.coeffs.iter().rev().map(|a| a.conj()).collect(),
        }
    }

    /// ℓʳ norm of the coefficient vector.
    pub fn coeff_norm(&self, r: Exponent) -> f64 {
        let moduli: Vec<f64> = self.coeffs.iter().map(|c| c.norm()).collect();
        r.norm_of_moduli(&moduli)
    }
}

fn finish_product(coeffs: Vec<C64>, used_fft: bool, cfg: &PolyConfig) -> Poly {
    let p = Poly::new(coeffs);
    match cfg.relative_trim {
        Some(eps) if used_fft => p.trim_relative(eps),
        _ => p,
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| -a).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, other: &Poly) -> Poly {
        self + &(-other)
    }
}

/// Coefficientwise sum.
pub fn poly_add(p: &Poly, q: &Poly) -> Poly {
    p + q
}

/// Product with the default configuration.
pub fn poly_mul(p: &Poly, q: &Poly, backend: MulBackend) -> Result<Poly> {
    p.mul(q, backend)
}

pub fn poly_derivative(p: &Poly) -> Poly {
    p.derivative()
}

pub fn conj_reflect(p: &Poly) -> LaurentPoly {
    p.conj_reflect()
}

/// ℓʳ norm of the coefficients of `p`; `r` may be `f64::INFINITY`.
pub fn coeff_norm(p: &Poly, r: f64) -> Result<f64> {
    Ok(p.coeff_norm(Exponent::new(r)?))
}

/// Schoolbook convolution.
pub fn convolve_direct(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == C64::new(0.0, 0.0) {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

/// Convolution through a power-of-two complex FFT.
pub fn convolve_fft(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    let size = len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let mut fa = padded(a, size);
    let mut fb = padded(b, size);
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    inverse.process(&mut fa);
    let inv = 1.0 / size as f64;
    fa.truncate(len);
    fa.iter_mut().for_each(|c| *c *= inv);
    fa
}

fn self_convolve_fft(a: &[C64]) -> Vec<C64> {
    let len = 2 * a.len() - 1;
    let size = len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let mut fa = padded(a, size);
    forward.process(&mut fa);
    fa.iter_mut().for_each(|x| *x = *x * *x);
    inverse.process(&mut fa);
    let inv = 1.0 / size as f64;
    fa.truncate(len);
    fa.iter_mut().for_each(|c| *c *= inv);
    fa
}

fn padded(a: &[C64], size: usize) -> Vec<C64> {
    let mut v = Vec::with_capacity(size);
    v.extend_from_slice(a);
    v.resize(size, C64::new(0.0, 0.0));
    v
}

/// Finite two-sided polynomial `Σ_{k=k_min}^{k_max} c_k z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    k_min: i64,
    coeffs: Vec<C64>,
}

impl LaurentPoly {
    /// `coeffs[i]` is the coefficient of `z^{k_min + i}`.
    pub fn new(k_min: i64, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("Laurent polynomial needs at least one coefficient"));
        }
        Ok(LaurentPoly { k_min, coeffs })
    }

    pub fn from_poly(p: &Poly) -> Self {
        LaurentPoly {
            k_min: 0,
            coeffs: p.coeffs().to_vec(),
        }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero outside the stored range.
    pub fn coeff(&self, k: i64) -> C64 {
        if k < self.k_min || k > self.k_max() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.k_min) as usize]
        }
    }

    /// Evaluate at `z ≠ 0`.
    pub fn eval(&self, z: C64) -> C64 {
        let body = self
            .coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a);
        body * z.powi(self.k_min as i32)
    }

    /// Whether `c_{−k} = conj(c_k)` for every `k` within `tol` (absolute).
    /// Such a polynomial is real-valued on the unit circle.
    pub fn is_conj_symmetric(&self, tol: f64) -> bool {
        let reach = self.k_min.unsigned_abs().max(self.k_max().unsigned_abs()) as i64;
        (0..=reach).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol)
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.mul_with(other, MulBackend::Auto, &PolyConfig::default())
    }

    pub fn mul_with(
        &self,
        other: &LaurentPoly,
        backend: MulBackend,
        cfg: &PolyConfig,
    ) -> Result<LaurentPoly> {
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        cfg.check_len(len)?;
        let coeffs = if cfg.use_fft(backend, len) {
            convolve_fft(&self.coeffs, &other.coeffs)
        } else {
            convolve_direct(&self.coeffs, &other.coeffs)
        };
        Ok(LaurentPoly {
            k_min: self.k_min + other.k_min,
            coeffs,
        })
    }

    pub fn pow(&self, m: u32) -> Result<LaurentPoly> {
        self.pow_with(m, MulBackend::Auto, &PolyConfig::default())
    }

    /// `f^m` by repeated squaring; `m ≥ 1`.
    pub fn pow_with(&self, m: u32, backend: MulBackend, cfg: &PolyConfig) -> Result<LaurentPoly> {
        if m == 0 {
            return Err(Error::domain("Laurent power needs m >= 1"));
        }
        let full_len = (self.coeffs.len() - 1) as u128 * m as u128 + 1;
        if full_len > cfg.max_coeffs as u128 {
            return Err(Error::resource(format!(
                "power needs {full_len} coefficients, cap is {}",
                cfg.max_coeffs
            )));
        }
        let mut result: Option<LaurentPoly> = None;
        let mut base = self.clone();
        let mut e = m;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul_with(&base, backend, cfg)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_with(&base, backend, cfg)?;
        }
        Ok(result.expect("m >= 1"))
    }

    /// Multiply by `z^{−k_min}` when `k_min < 0` (or spell out the leading
    /// zeros when `k_min > 0`), giving an analytic `p` with `|p| = |f|` on
    /// the unit circle. Returns `(p, shift)` with `shift = max(−k_min, 0)`.
    pub fn to_analytic(&self) -> (Poly, i64) {
        if self.k_min <= 0 {
            (Poly::new(self.coeffs.clone()), -self.k_min)
        } else {
            let mut coeffs = vec![C64::new(0.0, 0.0); self.k_min as usize];
            coeffs.extend_from_slice(&self.coeffs);
            (Poly::new(coeffs), 0)
        }
    }
}

/// Coefficient of `z⁰` in `f·g`, without forming the product.
pub fn constant_term_of_product(f: &LaurentPoly, g: &LaurentPoly) -> C64 {
    // c_0(fg) = Σ_k f_k g_{−k}
    let lo = f.k_min().max(-g.k_max());
    let hi = f.k_max().min(-g.k_min());
    (lo..=hi)
        .map(|k| f.coeff(k) * g.coeff(-k))
        .fold(C64::new(0.0, 0.0), |acc, t| acc + t)
}

pub fn laurent_mul(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
    f.mul(g)
}

pub fn laurent_pow(f: &LaurentPoly, m: u32) -> Result<LaurentPoly> {
    f.pow(m)
}

pub fn laurent_to_analytic(f: &LaurentPoly) -> (Poly, i64) {
    f.to_analytic()
}
