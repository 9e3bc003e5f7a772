//! ℓᵖ norms of vector-valued functions on a finite set, and their duals.
//!
//! A [`VFunction`] is a map `f: E → V` where `E` is an ordered list of
//! labels and `V = (C^d or R^d, ‖·‖_V)`. Its values are stored as a `d×|E|`
//! matrix whose column `x` is `f(x)`.
//!
//! Norms on `V` are the (weighted) ℓʳ family: `‖v‖ = (Σ w_i |v_i|^r)^{1/r}`,
//! i.e. `‖D v‖_r` with `D_i = w_i^{1/r}`, and `max_i |v_i|` at `r = ∞`.
//! Linear functionals act by the coordinate pairing `λ(v) = Σ λ_i v_i`, so
//! the dual norm is `‖λ/D‖_{r'}`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::exponent::Exponent;
use crate::C64;

/// Absolute slack (scaled by `max(1, ‖f‖_p)`) tolerated by the comparison check.
pub const COMPARISON_TOL: f64 = 1e-10;

/// Largest `d` (resp. `|E|`) for which sign vectors are enumerated.
pub const MAX_SIGN_ENUMERATION: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NormKind {
    Lr(Exponent),
    WeightedLr { r: Exponent, weights: Vec<f64> },
}

impl NormKind {
    pub fn exponent(&self) -> Exponent {
        match self {
            NormKind::Lr(r) | NormKind::WeightedLr { r, .. } => *r,
        }
    }
}

/// A finite-dimensional normed space `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormedSpace {
    dim: usize,
    field: Field,
    kind: NormKind,
    // D_i = w_i^{1/r}; all ones for unweighted norms and for r = ∞
    scaling: Vec<f64>,
}

impl NormedSpace {
    pub fn new(dim: usize, field: Field, kind: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("space dimension must be positive"));
        }
        let scaling = match &kind {
            NormKind::Lr(_) => vec![1.0; dim],
            NormKind::WeightedLr { r, weights } => {
                if weights.len() != dim {
                    return Err(Error::domain(format!(
                        "{} weights for dimension {dim}",
                        weights.len()
                    )));
                }
                if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                    return Err(Error::domain(format!("weights must be positive and finite, got {w}")));
                }
                let inv = r.reciprocal();
                weights.iter().map(|w| w.powf(inv)).collect()
            }
        };
        Ok(NormedSpace {
            dim,
            field,
            kind,
            scaling,
        })
    }

    /// Unweighted ℓʳ on `dim` coordinates.
    pub fn lr(dim: usize, r: Exponent, field: Field) -> Result<Self> {
        NormedSpace::new(dim, field, NormKind::Lr(r))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn exponent(&self) -> Exponent {
        self.kind.exponent()
    }

    fn check_vector(&self, v: &[C64], what: &str) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::domain(format!(
                "{what} has length {}, space has dimension {}",
                v.len(),
                self.dim
            )));
        }
        if self.field == Field::Real && v.iter().any(|c| c.im != 0.0) {
            return Err(Error::domain(format!("{what} has complex entries in a real space")));
        }
        Ok(())
    }

    fn scaled_moduli(&self, v: &[C64]) -> Vec<f64> {
        v.iter().zip(&self.scaling).map(|(c, d)| c.norm() * d).collect()
    }

    /// `‖v‖_V`.
    pub fn norm(&self, v: &[C64]) -> Result<f64> {
        self.check_vector(v, "vector")?;
        Ok(self.norm_unchecked(v))
    }

    fn norm_unchecked(&self, v: &[C64]) -> f64 {
        self.exponent().norm_of_moduli(&self.scaled_moduli(v))
    }

    /// `‖λ‖_{V*} = sup{|λ(v)| : ‖v‖_V ≤ 1}`.
    pub fn dual_norm(&self, lambda: &[C64]) -> Result<f64> {
        self.check_vector(lambda, "functional")?;
        Ok(self.dual_norm_unchecked(lambda))
    }

    fn dual_norm_unchecked(&self, lambda: &[C64]) -> f64 {
        let moduli: Vec<f64> = lambda
            .iter()
            .zip(&self.scaling)
            .map(|(c, d)| c.norm() / d)
            .collect();
        self.exponent().conjugate().norm_of_moduli(&moduli)
    }

    /// A functional `λ` with `‖λ‖_{V*} ≤ 1` and `λ(v) = ‖v‖_V`.
    fn dual_attainer(&self, v: &[C64]) -> Vec<C64> {
        let u: Vec<C64> = v.iter().zip(&self.scaling).map(|(c, d)| c * d).collect();
        holder_attainer(&u, self.exponent())
            .into_iter()
            .zip(&self.scaling)
            .map(|(m, d)| m * d)
            .collect()
    }

    /// A vector `v` with `‖v‖_V ≤ 1` and `λ(v) = ‖λ‖_{V*}`.
    fn primal_attainer(&self, lambda: &[C64]) -> Vec<C64> {
        let mu: Vec<C64> = lambda.iter().zip(&self.scaling).map(|(c, d)| c / d).collect();
        holder_attainer(&mu, self.exponent().conjugate())
            .into_iter()
            .zip(&self.scaling)
            .map(|(w, d)| w / d)
            .collect()
    }
}

/// Given `u` with `‖u‖_r = N`, returns `μ` with `‖μ‖_{r'} ≤ 1` and
/// `Σ μ_i u_i = N` (equality case of Hölder). Real input gives real output.
fn holder_attainer(u: &[C64], r: Exponent) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    let moduli: Vec<f64> = u.iter().map(|c| c.norm()).collect();
    let total = r.norm_of_moduli(&moduli);
    if total == 0.0 {
        return vec![zero; u.len()];
    }
    let phase = |c: &C64, m: f64| c.conj() / m;
    if r.is_infinite() {
        let (i, _) = moduli
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, &m)| if m > best.1 { (i, m) } else { best });
        let mut out = vec![zero; u.len()];
        out[i] = phase(&u[i], moduli[i]);
        return out;
    }
    let power = r.value() - 1.0;
    u.iter()
        .zip(&moduli)
        .map(|(c, &m)| {
            if m == 0.0 {
                zero
            } else if power == 0.0 {
                phase(c, m)
            } else {
                phase(c, m) * (m / total).powf(power)
            }
        })
        .collect()
}

/// `‖v‖_V`.
pub fn space_norm(space: &NormedSpace, v: &[C64]) -> Result<f64> {
    space.norm(v)
}

/// An element of `V*`, acting by `λ(v) = Σ λ_i v_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector {
    space: NormedSpace,
    coeffs: Vec<C64>,
}

impl DualVector {
    pub fn new(space: NormedSpace, coeffs: Vec<C64>) -> Result<Self> {
        space.check_vector(&coeffs, "functional")?;
        Ok(DualVector { space, coeffs })
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn apply(&self, v: &[C64]) -> Result<C64> {
        self.space.check_vector(v, "vector")?;
        Ok(apply(&self.coeffs, v))
    }
}

fn apply(lambda: &[C64], v: &[C64]) -> C64 {
    lambda
        .iter()
        .zip(v)
        .fold(C64::new(0.0, 0.0), |acc, (l, x)| acc + l * x)
}

/// `‖λ‖_{V*}` in closed form.
pub fn dual_norm(space: &NormedSpace, lambda: &DualVector) -> Result<f64> {
    if lambda.space.dim != space.dim {
        return Err(Error::domain("functional belongs to a space of another dimension"));
    }
    space.dual_norm(&lambda.coeffs)
}

/// `sup{|λ(v)| : ‖λ‖_{V*} ≤ 1}` with an explicit maximiser.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualAttainment {
    pub value: f64,
    pub attainer: Vec<C64>,
    pub attainer_dual_norm: f64,
}

/// `‖v‖_V` recovered as `|λ(v)|` for a constructed `λ` on the dual unit sphere.
pub fn norm_via_dual(space: &NormedSpace, v: &[C64]) -> Result<DualAttainment> {
    space.check_vector(v, "vector")?;
    let attainer = space.dual_attainer(v);
    Ok(DualAttainment {
        value: apply(&attainer, v).norm(),
        attainer_dual_norm: space.dual_norm_unchecked(&attainer),
        attainer,
    })
}

/// `f: E → V`, stored column-per-point.
#[derive(Clone, Debug, PartialEq)]
pub struct VFunction {
    space: NormedSpace,
    points: Vec<String>,
    values: DMatrix<C64>,
}

impl VFunction {
    pub fn new(space: NormedSpace, points: Vec<String>, values: DMatrix<C64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("the point set E must be nonempty"));
        }
        if values.nrows() != space.dim || values.ncols() != points.len() {
            return Err(Error::domain(format!(
                "values are {}x{}, expected {}x{}",
                values.nrows(),
                values.ncols(),
                space.dim,
                points.len()
            )));
        }
        if space.field == Field::Real && values.iter().any(|c| c.im != 0.0) {
            return Err(Error::domain("complex values in a function into a real space"));
        }
        Ok(VFunction {
            space,
            points,
            values,
        })
    }

    /// Points labelled `"0"`, `"1"`, … in column order.
    pub fn from_columns(space: NormedSpace, columns: &[Vec<C64>]) -> Result<Self> {
        let d = space.dim;
        if let Some(bad) = columns.iter().find(|c| c.len() != d) {
            return Err(Error::domain(format!("column of length {} in dimension {d}", bad.len())));
        }
        let values = DMatrix::from_fn(d, columns.len(), |i, x| columns[x][i]);
        let points = (0..columns.len()).map(|x| x.to_string()).collect();
        VFunction::new(space, points, values)
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn values(&self) -> &DMatrix<C64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn column(&self, x: usize) -> Vec<C64> {
        self.values.column(x).iter().copied().collect()
    }

    fn pointwise_norms(&self) -> Vec<f64> {
        (0..self.len())
            .map(|x| self.space.norm_unchecked(&self.column(x)))
            .collect()
    }

    fn pointwise_dual_norms(&self) -> Vec<f64> {
        (0..self.len())
            .map(|x| self.space.dual_norm_unchecked(&self.column(x)))
            .collect()
    }

    /// `x ↦ λ(f(x))`.
    fn evaluate_functional(&self, lambda: &[C64]) -> Vec<C64> {
        (0..self.len())
            .map(|x| apply(lambda, self.values.column(x).as_slice()))
            .collect()
    }
}

/// `‖f‖_{p,V} = (Σ_x ‖f(x)‖_V^p)^{1/p}`, or `max_x ‖f(x)‖_V` at `p = ∞`.
pub fn lp_norm(f: &VFunction, p: Exponent) -> f64 {
    p.norm_of_moduli(&f.pointwise_norms())
}

/// `‖h‖_{q,V*}` for `h` with values in `V*`.
pub fn lp_norm_dual(h: &VFunction, q: Exponent) -> f64 {
    q.norm_of_moduli(&h.pointwise_dual_norms())
}

/// Both sides of `‖f‖_q ≤ ‖f‖_p ≤ |E|^{1/p − 1/q} ‖f‖_q` for `p ≤ q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub p: Exponent,
    pub q: Exponent,
    pub norm_p: f64,
    pub norm_q: f64,
    pub factor: f64,
    pub lhs_ok: bool,
    pub rhs_ok: bool,
    /// `‖f‖_p − ‖f‖_q`.
    pub lhs_slack: f64,
    /// `|E|^{1/p−1/q}‖f‖_q − ‖f‖_p`.
    pub rhs_slack: f64,
}

pub fn norm_comparison_check(f: &VFunction, p: Exponent, q: Exponent) -> Result<ComparisonReport> {
    if p > q {
        return Err(Error::domain(format!("comparison needs p <= q, got p = {p}, q = {q}")));
    }
    let norm_p = lp_norm(f, p);
    let norm_q = lp_norm(f, q);
    let factor = (f.len() as f64).powf(p.reciprocal() - q.reciprocal());
    let lhs_slack = norm_p - norm_q;
    let rhs_slack = factor * norm_q - norm_p;
    let tol = COMPARISON_TOL * norm_p.max(1.0);
    let report = ComparisonReport {
        p,
        q,
        norm_p,
        norm_q,
        factor,
        lhs_ok: lhs_slack >= -tol,
        rhs_ok: rhs_slack >= -tol,
        lhs_slack,
        rhs_slack,
    };
    if !(report.lhs_ok && report.rhs_ok) {
        return Err(Error::consistency(format!(
            "norm comparison violated for p = {p}, q = {q}: slacks {lhs_slack:e}, {rhs_slack:e}"
        )));
    }
    Ok(report)
}

fn check_same_shape(h: &VFunction, f: &VFunction) -> Result<()> {
    if h.len() != f.len() || h.space.dim != f.space.dim {
        return Err(Error::domain(format!(
            "pairing needs matching shapes, got {}x{} and {}x{}",
            h.space.dim,
            h.len(),
            f.space.dim,
            f.len()
        )));
    }
    Ok(())
}

/// `λ_h(f) = Σ_x h(x)(f(x))`.
pub fn pair(h: &VFunction, f: &VFunction) -> Result<C64> {
    check_same_shape(h, f)?;
    Ok(h
        .values
        .iter()
        .zip(f.values.iter())
        .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b))
}

/// Dual norm of `λ_h` with respect to `‖·‖_{p,V}` plus a near-maximiser.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingDual {
    /// `‖h‖_{q,V*}`.
    pub value: f64,
    pub q: Exponent,
    /// `f` with `|λ_h(f)| = ‖f‖_{p,V}·‖h‖_{q,V*}` up to roundoff.
    pub witness: VFunction,
    pub witness_pairing: f64,
    pub witness_norm: f64,
}

impl PairingDual {
    /// `|λ_h(f)| ≥ (1 − rel)·‖f‖_{p,V}·‖h‖_{q,V*}`.
    pub fn witness_attains(&self, rel: f64) -> bool {
        self.witness_pairing >= (1.0 - rel) * self.witness_norm * self.value
    }
}

pub fn pairing_dual_norm(h: &VFunction, p: Exponent) -> Result<PairingDual> {
    let q = p.conjugate();
    let per_point = h.pointwise_dual_norms();
    let value = q.norm_of_moduli(&per_point);
    // ℓ^p–ℓ^q alignment across points, primal attainers within each point
    let weights = holder_attainer(
        &per_point.iter().map(|&a| C64::new(a, 0.0)).collect::<Vec<_>>(),
        q,
    );
    let d = h.space.dim;
    let mut values = DMatrix::from_element(d, h.len(), C64::new(0.0, 0.0));
    for x in 0..h.len() {
        let t = weights[x].re;
        if t == 0.0 {
            continue;
        }
        let v = h.space.primal_attainer(&h.column(x));
        for (i, vi) in v.into_iter().enumerate() {
            values[(i, x)] = vi * t;
        }
    }
    let witness = VFunction::new(h.space.clone(), h.points.clone(), values)?;
    Ok(PairingDual {
        value,
        q,
        witness_pairing: pair(h, &witness)?.norm(),
        witness_norm: lp_norm(&witness, p),
        witness,
    })
}

/// Strategy for [`nu_norm`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuMethod {
    /// Best certified method available, else ascent.
    #[default]
    Auto,
    /// `p = ∞`: the two suprema commute, giving `max_x ‖f(x)‖_V`.
    PointwiseMax,
    ExtremePoints,
    Spectral,
    Ascent,
}

impl std::str::FromStr for NuMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "auto" => Ok(NuMethod::Auto),
            "pointwise_max" => Ok(NuMethod::PointwiseMax),
            "extreme_points" => Ok(NuMethod::ExtremePoints),
            "spectral" => Ok(NuMethod::Spectral),
            "ascent" => Ok(NuMethod::Ascent),
            _ => Err(Error::domain(format!("unknown nu-norm method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AscentOptions {
    pub starts: usize,
    /// Stop once an alternating step improves the value by at most
    /// `tol·max(1, value)`.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            starts: 32,
            tol: 1e-9,
            max_iters: 10_000,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuNorm {
    pub value: f64,
    /// The value is exact (up to roundoff) rather than a lower bound.
    pub certified: bool,
    pub method: NuMethod,
    /// A dual unit vector attaining `value`.
    pub functional: Vec<C64>,
}

/// `‖f‖_{p,ν} = sup{‖x ↦ λ(f(x))‖_p : ‖λ‖_{V*} ≤ 1}`.
pub fn nu_norm(f: &VFunction, p: Exponent, method: NuMethod) -> Result<NuNorm> {
    nu_norm_with(f, p, method, &AscentOptions::default())
}

pub fn nu_norm_with(
    f: &VFunction,
    p: Exponent,
    method: NuMethod,
    ascent: &AscentOptions,
) -> Result<NuNorm> {
    let method = match method {
        NuMethod::Auto => {
            if p.is_infinite() {
                NuMethod::PointwiseMax
            } else if spectral_applies(f, p) {
                NuMethod::Spectral
            } else if extreme_points_apply(f) {
                NuMethod::ExtremePoints
            } else {
                NuMethod::Ascent
            }
        }
        m => m,
    };
    match method {
        NuMethod::PointwiseMax => nu_pointwise_max(f, p),
        NuMethod::Spectral => nu_spectral(f, p),
        NuMethod::ExtremePoints => nu_extreme_points(f, p),
        NuMethod::Ascent => Ok(nu_ascent(f, p, ascent)),
        NuMethod::Auto => unreachable!(),
    }
}

fn phi(f: &VFunction, lambda: &[C64], p: Exponent) -> f64 {
    let moduli: Vec<f64> = f.evaluate_functional(lambda).iter().map(|c| c.norm()).collect();
    p.norm_of_moduli(&moduli)
}

fn nu_pointwise_max(f: &VFunction, p: Exponent) -> Result<NuNorm> {
    if !p.is_infinite() {
        return Err(Error::domain("pointwise_max applies only to p = inf"));
    }
    let norms = f.pointwise_norms();
    let (best, value) = norms
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (x, &v)| if v > acc.1 { (x, v) } else { acc });
    Ok(NuNorm {
        value,
        certified: true,
        method: NuMethod::PointwiseMax,
        functional: f.space.dual_attainer(&f.column(best)),
    })
}

fn spectral_applies(f: &VFunction, p: Exponent) -> bool {
    p == Exponent::TWO && f.space.exponent() == Exponent::TWO
}

fn nu_spectral(f: &VFunction, p: Exponent) -> Result<NuNorm> {
    if !spectral_applies(f, p) {
        return Err(Error::domain("spectral method needs an l2 space and p = 2"));
    }
    // λ = D μ with ‖μ‖₂ ≤ 1, so λᵀF = μᵀ(DF) and the sup is σ_max(DF)
    let d = &f.space.scaling;
    let scaled = DMatrix::from_fn(f.space.dim, f.len(), |i, x| f.values[(i, x)] * d[i]);
    let (value, mu) = match f.space.field {
        Field::Real => {
            let real = scaled.map(|c| c.re);
            let svd = real.svd(true, false);
            let (k, s) = argmax(svd.singular_values.as_slice());
            let u = svd.u.expect("requested U");
            (s, u.column(k).iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
        }
        Field::Complex => {
            let svd = scaled.svd(true, false);
            let (k, s) = argmax(svd.singular_values.as_slice());
            let u = svd.u.expect("requested U");
            (s, u.column(k).iter().map(|c| c.conj()).collect::<Vec<_>>())
        }
    };
    Ok(NuNorm {
        value,
        certified: true,
        method: NuMethod::Spectral,
        functional: mu.iter().zip(d).map(|(m, di)| m * di).collect(),
    })
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc })
}

fn extreme_points_apply(f: &VFunction) -> bool {
    let r = f.space.exponent();
    f.space.field == Field::Real && (r == Exponent::ONE || r.is_infinite())
}

/// Extreme points of the real dual unit ball, one from each `±` pair.
fn dual_ball_extreme_points(space: &NormedSpace) -> Result<Vec<Vec<C64>>> {
    let d = space.dim;
    let r = space.exponent();
    if r.is_infinite() {
        // dual ball is the ℓ¹ ball: ±e_i
        return Ok((0..d)
            .map(|i| {
                let mut e = vec![C64::new(0.0, 0.0); d];
                e[i] = C64::new(1.0, 0.0);
                e
            })
            .collect());
    }
    // r = 1: dual ball is the box |λ_i| ≤ D_i, vertices are signed D
    if d > MAX_SIGN_ENUMERATION {
        return Err(Error::resource(format!(
            "enumerating 2^{} sign vectors exceeds the cap",
            d - 1
        )));
    }
    let half = 1u64 << (d - 1);
    Ok((0..half)
        .map(|mask| {
            (0..d)
                .map(|i| {
                    let s = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                    C64::new(s * space.scaling[i], 0.0)
                })
                .collect()
        })
        .collect())
}

fn nu_extreme_points(f: &VFunction, p: Exponent) -> Result<NuNorm> {
    if !extreme_points_apply(f) {
        return Err(Error::domain(
            "extreme_points needs a real space with r = 1 or r = inf",
        ));
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for lambda in dual_ball_extreme_points(&f.space)? {
        let v = phi(f, &lambda, p);
        if v > best.0 {
            best = (v, lambda);
        }
    }
    Ok(NuNorm {
        value: best.0,
        certified: true,
        method: NuMethod::ExtremePoints,
        functional: best.1,
    })
}

fn random_dual_unit(space: &NormedSpace, seed: u64, stream: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let v: Vec<C64> = (0..space.dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match space.field {
                Field::Real => 0.0,
                Field::Complex => rng.sample(StandardNormal),
            };
            C64::new(re, im)
        })
        .collect();
    let n = space.dual_norm_unchecked(&v);
    v.into_iter().map(|c| c / n).collect()
}

/// Alternating maximisation of `|Σ_x h(x) λ(f(x))|` over `‖h‖_q ≤ 1` and
/// `‖λ‖_{V*} ≤ 1`: the optimal `h` for fixed `λ` gives `‖λ∘f‖_p`, the optimal
/// `λ` for fixed `h` gives `‖Σ h(x) f(x)‖_V`, and neither step decreases the
/// objective.
fn ascend_from(f: &VFunction, p: Exponent, start: Vec<C64>, opts: &AscentOptions) -> (f64, Vec<C64>) {
    let mut lambda = start;
    let mut value = phi(f, &lambda, p);
    for _ in 0..opts.max_iters {
        let h = holder_attainer(&f.evaluate_functional(&lambda), p);
        let combo: Vec<C64> = (0..f.space.dim)
            .map(|i| {
                h.iter()
                    .enumerate()
                    .fold(C64::new(0.0, 0.0), |acc, (x, hx)| acc + hx * f.values[(i, x)])
            })
            .collect();
        let next = f.space.dual_attainer(&combo);
        let next_value = phi(f, &next, p);
        if next_value <= value {
            break;
        }
        let improvement = next_value - value;
        lambda = next;
        value = next_value;
        if improvement <= opts.tol * value.max(1.0) {
            break;
        }
    }
    (value, lambda)
}

fn nu_ascent(f: &VFunction, p: Exponent, opts: &AscentOptions) -> NuNorm {
    let columns = f.len().min(opts.starts / 2);
    let results = exec::map_range(opts.exec, opts.starts.max(1), |s| {
        let start = if s < columns {
            let col = f.column(s);
            if f.space.norm_unchecked(&col) > 0.0 {
                f.space.dual_attainer(&col)
            } else {
                random_dual_unit(&f.space, opts.seed, s as u64)
            }
        } else {
            random_dual_unit(&f.space, opts.seed, s as u64)
        };
        ascend_from(f, p, start, opts)
    });
    let (value, functional) = results
        .into_iter()
        .fold((f64::NEG_INFINITY, Vec::new()), |best, r| if r.0 > best.0 { r } else { best });
    NuNorm {
        value,
        certified: false,
        method: NuMethod::Ascent,
        functional,
    }
}

/// `sup{‖Σ_x h(x) f(x)‖_V : ‖h‖_q ≤ 1}` by enumerating the extreme points of
/// the real ℓ^q ball, for `q ∈ {1, ∞}` (equivalently `p ∈ {∞, 1}`).
pub fn nu_norm_by_combinations(f: &VFunction, p: Exponent) -> Result<f64> {
    if f.space.field != Field::Real {
        return Err(Error::domain("combination form is enumerated over real scalars only"));
    }
    if p.is_infinite() {
        // q = 1: h = ±e_x
        return Ok(lp_norm(f, Exponent::INFINITY));
    }
    if p != Exponent::ONE {
        return Err(Error::domain("combination form needs p = 1 or p = inf"));
    }
    let n = f.len();
    if n > MAX_SIGN_ENUMERATION {
        return Err(Error::resource(format!("enumerating 2^{} sign vectors exceeds the cap", n - 1)));
    }
    let d = f.space.dim;
    let mut best = 0.0_f64;
    for mask in 0..(1u64 << (n - 1)) {
        let combo: Vec<C64> = (0..d)
            .map(|i| {
                (0..n).fold(C64::new(0.0, 0.0), |acc, x| {
                    let v = f.values[(i, x)];
                    if mask >> x & 1 == 1 {
                        acc - v
                    } else {
                        acc + v
                    }
                })
            })
            .collect();
        best = best.max(f.space.norm_unchecked(&combo));
    }
    Ok(best)
}

/// `x ↦ g(x)·f(x)`.
pub fn pointwise_scale(g: &[C64], f: &VFunction) -> Result<VFunction> {
    if g.len() != f.len() {
        return Err(Error::domain(format!(
            "scalar function has {} values, E has {} points",
            g.len(),
            f.len()
        )));
    }
    let mut values = f.values.clone();
    for (x, gx) in g.iter().enumerate() {
        values.column_mut(x).iter_mut().for_each(|c| *c *= gx);
    }
    VFunction::new(f.space.clone(), f.points.clone(), values)
}

/// `x ↦ A·f(x)` for a `d′×d` matrix `A`, landing in `target` (dimension `d′`).
pub fn pointwise_map(a: &DMatrix<C64>, f: &VFunction, target: NormedSpace) -> Result<VFunction> {
    if a.ncols() != f.space.dim || a.nrows() != target.dim {
        return Err(Error::domain(format!(
            "matrix is {}x{}, needs {}x{}",
            a.nrows(),
            a.ncols(),
            target.dim,
            f.space.dim
        )));
    }
    VFunction::new(target, f.points.clone(), a * &f.values)
}
