//! Rademacher sign ensembles and the averages built on them.
//!
//! A [`SignString`] `s = (s_0, …, s_n)` with `s_j = ±1` is stored as a
//! bitmask (bit `j` set ⇔ `s_j = −1`). The uniform average over all
//! `2^{n+1}` strings is computed either exhaustively or by Monte Carlo.
//!
//! Exhaustive sums use `|Σ b_j s_j| = |Σ b_j (−s_j)|` to visit only the half
//! of the strings with `s_n = +1`, walking them in Gray-code order so the
//! linear form changes by one term per step. Monte Carlo draws come from a
//! ChaCha stream positioned by sample index, so the output depends only on
//! `(seed, samples)` and not on how the work was split across threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::circle::circle_moment_exact_with;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::poly::{Poly, PolyConfig};
use crate::C64;

/// Default largest string length `n + 1` allowed in exhaustive mode.
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 22;

/// [`Mode::Auto`] enumerates exhaustively up to this string length.
pub const AUTO_EXHAUSTIVE_MAX_LEN: u32 = 20;

const GRAY_BLOCK: u64 = 4096;
const MC_BLOCK: u64 = 1024;

/// An element of `{+1, −1}^{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignString {
    len: u32,
    mask: u64,
}

impl SignString {
    /// `len` signs encoded by `mask` (bit `j` set ⇔ `s_j = −1`).
    pub fn new(len: u32, mask: u64) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::domain(format!("sign string length must be in 1..=64, got {len}")));
        }
        if len < 64 && mask >> len != 0 {
            return Err(Error::domain(format!("mask {mask:#x} has bits beyond length {len}")));
        }
        Ok(SignString { len, mask })
    }

    pub fn all_plus(len: u32) -> Result<Self> {
        SignString::new(len, 0)
    }

    pub fn all_minus(len: u32) -> Result<Self> {
        SignString::new(len, low_bits(len))
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut mask = 0u64;
        for (j, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => mask |= 1 << j,
                other => {
                    return Err(Error::domain(format!("sign at {j} is {other}, expected +1 or -1")))
                }
            }
        }
        SignString::new(signs.len() as u32, mask)
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// `r_j(s) = s_j`.
    pub fn value(&self, j: u32) -> Result<i8> {
        if j >= self.len {
            return Err(Error::domain(format!(
                "Rademacher index {j} out of range for length {}",
                self.len
            )));
        }
        Ok(sign_of(self.mask, j as usize))
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len as usize).map(|j| sign_of(self.mask, j)).collect()
    }
}

fn sign_of(mask: u64, j: usize) -> i8 {
    if mask >> j & 1 == 1 {
        -1
    } else {
        1
    }
}

fn low_bits(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// `r_j(s)`.
pub fn rademacher_value(s: &SignString, j: u32) -> Result<i8> {
    s.value(j)
}

/// `p_s(z) = Σ a_j s_j z^j`; `s` must have one sign per coefficient of `p`.
pub fn apply_signs(p: &Poly, s: &SignString) -> Result<Poly> {
    let coeffs = p.coeffs();
    if coeffs.len() != s.len() as usize {
        return Err(Error::domain(format!(
            "sign string of length {} applied to {} coefficients",
            s.len(),
            coeffs.len()
        )));
    }
    Ok(Poly::new(signed(coeffs, s.mask)))
}

fn signed(coeffs: &[C64], mask: u64) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(j, &a)| if mask >> j & 1 == 1 { -a } else { a })
        .collect()
}

fn linear_form(b: &[C64], mask: u64) -> C64 {
    b.iter()
        .enumerate()
        .fold(C64::new(0.0, 0.0), |acc, (j, &x)| {
            if mask >> j & 1 == 1 {
                acc - x
            } else {
                acc + x
            }
        })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    MonteCarlo,
    /// Exhaustive when `n + 1 ≤ AUTO_EXHAUSTIVE_MAX_LEN`, else Monte Carlo.
    #[default]
    Auto,
}

impl Mode {
    fn resolve(self, len: u32) -> Mode {
        match self {
            Mode::Auto if len <= AUTO_EXHAUSTIVE_MAX_LEN => Mode::Exhaustive,
            Mode::Auto => Mode::MonteCarlo,
            other => other,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "exhaustive" => Ok(Mode::Exhaustive),
            "monte_carlo" | "mc" => Ok(Mode::MonteCarlo),
            "auto" => Ok(Mode::Auto),
            _ => Err(Error::domain(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingOptions {
    pub mode: Mode,
    /// Monte Carlo sample count.
    pub samples: u64,
    pub seed: u64,
    pub exhaustive_cap: u32,
    pub exec: Execution,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            mode: Mode::Auto,
            samples: 65536,
            seed: 0,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            exec: Execution::default(),
        }
    }
}

impl SamplingOptions {
    pub fn exhaustive() -> Self {
        SamplingOptions {
            mode: Mode::Exhaustive,
            ..SamplingOptions::default()
        }
    }

    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        SamplingOptions {
            mode: Mode::MonteCarlo,
            samples,
            seed,
            ..SamplingOptions::default()
        }
    }
}

/// An average over the sign ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub mode: Mode,
    /// `2^{n+1}` for exhaustive runs, the draw count otherwise.
    pub samples: u64,
    /// Standard error of the mean; zero for exhaustive runs.
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// `(2m − 1)!! = (2m)!/(2^m m!)`, the `2m`-th moment of a standard normal.
pub fn gaussian_moment_constant(m: u32) -> f64 {
    (1..=m).map(|i| (2 * i - 1) as f64).product()
}

fn check_len(len: usize) -> Result<u32> {
    if len == 0 {
        return Err(Error::domain("coefficient vector must be nonempty"));
    }
    if len > 64 {
        return Err(Error::domain(format!("at most 64 coefficients supported, got {len}")));
    }
    Ok(len as u32)
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::domain("moment order m must be >= 1"));
    }
    Ok(())
}

/// `2^{−n−1} Σ_s |Σ_j b_j r_j(s)|^{2m}`, exact or sampled.
pub fn khintchine_moment(b: &[C64], m: u32, opts: &SamplingOptions) -> Result<MomentEstimate> {
    check_m(m)?;
    let len = check_len(b.len())?;
    let power = |s: C64| s.norm_sqr().powi(m as i32);
    match opts.mode.resolve(len) {
        Mode::Exhaustive => {
            check_cap(len, opts.exhaustive_cap)?;
            let value = gray_code_average(b, opts.exec, power);
            Ok(exhaustive_estimate(value, len))
        }
        _ => monte_carlo(len, opts, |mask| Ok(power(linear_form(b, mask)))),
    }
}

fn check_cap(len: u32, cap: u32) -> Result<()> {
    if len > cap {
        return Err(Error::resource(format!(
            "exhaustive enumeration of 2^{len} sign strings exceeds the cap 2^{cap}"
        )));
    }
    Ok(())
}

fn exhaustive_estimate(value: f64, len: u32) -> MomentEstimate {
    MomentEstimate {
        value,
        mode: Mode::Exhaustive,
        samples: 1u64 << len,
        std_error: 0.0,
        seed: None,
    }
}

/// Average of `g(Σ b_j s_j)` over all strings, using `g(S) = g(−S)`.
fn gray_code_average<G>(b: &[C64], exec: Execution, g: G) -> f64
where
    G: Fn(C64) -> f64 + Sync + Send,
{
    // strings with the last sign fixed to +1
    let free = b.len() - 1;
    let total = 1u64 << free;
    let block_sums = exec::map_blocks(exec, total, GRAY_BLOCK, |start, end| {
        let mut gray = start ^ (start >> 1);
        let mut sum = linear_form(b, gray);
        let mut acc = 0.0;
        for i in start..end {
            acc += g(sum);
            if i + 1 == end {
                break;
            }
            let j = (i + 1).trailing_zeros() as usize;
            let twice = b[j] * 2.0;
            if gray >> j & 1 == 0 {
                sum -= twice;
            } else {
                sum += twice;
            }
            gray ^= 1 << j;
        }
        acc
    });
    block_sums.iter().sum::<f64>() / total as f64
}

/// Running (count, mean, M2), merged pairwise.
#[derive(Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }
}

/// Each draw consumes one `u64` of the ChaCha8 stream keyed by `seed`;
/// draw `i` sits at word position `2i`.
fn draw_masks(seed: u64, start: u64, end: u64, len: u32) -> impl Iterator<Item = u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(start as u128 * 2);
    let keep = low_bits(len);
    (start..end).map(move |_| rng.next_u64() & keep)
}

fn monte_carlo<F>(len: u32, opts: &SamplingOptions, f: F) -> Result<MomentEstimate>
where
    F: Fn(u64) -> Result<f64> + Sync + Send,
{
    if opts.samples < 2 {
        return Err(Error::domain("Monte Carlo needs at least 2 samples"));
    }
    let blocks = exec::map_blocks(opts.exec, opts.samples, MC_BLOCK, |start, end| {
        let mut acc = Moments::default();
        for mask in draw_masks(opts.seed, start, end, len) {
            acc.push(f(mask)?);
        }
        Ok::<_, Error>(acc)
    });
    let mut total = Moments::default();
    for block in blocks {
        total = total.merge(block?);
    }
    let n = total.count as f64;
    let variance = total.m2 / (n - 1.0);
    Ok(MomentEstimate {
        value: total.mean,
        mode: Mode::MonteCarlo,
        samples: total.count,
        std_error: (variance / n).sqrt(),
        seed: Some(opts.seed),
    })
}

/// Outcome of [`khintchine_ratio_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioScanReport {
    pub n: u32,
    pub m: u32,
    pub trials: u64,
    pub seed: u64,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub argmax_trial: u64,
    /// The coefficient vector attaining `max_ratio`, unit ℓ² normalised.
    pub argmax: Vec<C64>,
    /// `(2m − 1)!!`.
    pub reference_constant: f64,
    /// `max_ratio ≤ reference_constant·(1 + 1e−12)`.
    pub within_reference: bool,
}

/// Random unit vector in `C^len` drawn from stream `trial` under `seed`.
pub fn random_unit_vector(len: usize, seed: u64, trial: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut v: Vec<C64> = (0..len)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    v
}

/// Largest observed `A_{2m}(b)/(Σ|b_j|²)^m` over random complex `b ∈ C^{n+1}`.
pub fn khintchine_ratio_scan(
    n: u32,
    m: u32,
    trials: u64,
    seed: u64,
    opts: &SamplingOptions,
) -> Result<RatioScanReport> {
    check_m(m)?;
    let len = check_len(n as usize + 1)?;
    check_cap(len, opts.exhaustive_cap)?;
    if trials == 0 {
        return Err(Error::domain("ratio scan needs at least one trial"));
    }
    let inner = SamplingOptions {
        mode: Mode::Exhaustive,
        exec: Execution::Sequential,
        ..opts.clone()
    };
    let ratios = exec::map_range(opts.exec, trials as usize, |t| {
        let b = random_unit_vector(len as usize, seed, t as u64);
        let energy: f64 = b.iter().map(|c| c.norm_sqr()).sum();
        let moment = khintchine_moment(&b, m, &inner)?.value;
        Ok::<_, Error>(moment / energy.powi(m as i32))
    });
    let mut max_ratio = f64::NEG_INFINITY;
    let mut min_ratio = f64::INFINITY;
    let mut argmax_trial = 0;
    for (t, r) in ratios.into_iter().enumerate() {
        let r = r?;
        if r > max_ratio {
            max_ratio = r;
            argmax_trial = t as u64;
        }
        min_ratio = min_ratio.min(r);
    }
    let reference_constant = gaussian_moment_constant(m);
    Ok(RatioScanReport {
        n,
        m,
        trials,
        seed,
        max_ratio,
        min_ratio,
        argmax_trial,
        argmax: random_unit_vector(len as usize, seed, argmax_trial),
        reference_constant,
        within_reference: max_ratio <= reference_constant * (1.0 + 1e-12),
    })
}

/// Ensemble-averaged circle moment together with its reference bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub estimate: MomentEstimate,
    /// `(2m − 1)!!·(Σ|a_j|²)^m`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Absolute slack allowed when checking the ensemble bound.
pub const ENSEMBLE_BOUND_TOL: f64 = 1e-9;

/// `2^{−n−1} Σ_s (1/2π)∫_T |p_s(z)|^{2m} |dz|` for `p = Σ a_j z^j`.
///
/// An exhaustive result above the bound (beyond [`ENSEMBLE_BOUND_TOL`]) is a
/// consistency error; a Monte Carlo result only clears `within_bound`.
pub fn ensemble_circle_moment(
    a: &[C64],
    m: u32,
    opts: &SamplingOptions,
    cfg: &PolyConfig,
) -> Result<EnsembleReport> {
    check_m(m)?;
    let len = check_len(a.len())?;
    let moment_of = |mask: u64| circle_moment_exact_with(&Poly::new(signed(a, mask)), m, cfg);
    let estimate = match opts.mode.resolve(len) {
        Mode::Exhaustive => {
            check_cap(len, opts.exhaustive_cap)?;
            // p_{−s} = −p_s, so half the strings suffice
            let total = 1u64 << (len - 1);
            let blocks = exec::map_blocks(opts.exec, total, 64, |start, end| {
                (start..end).map(moment_of).sum::<Result<f64>>()
            });
            let mut sum = 0.0;
            for block in blocks {
                sum += block?;
            }
            exhaustive_estimate(sum / total as f64, len)
        }
        _ => monte_carlo(len, opts, moment_of)?,
    };
    let energy: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let bound = gaussian_moment_constant(m) * energy.powi(m as i32);
    let within_bound = estimate.value <= bound + ENSEMBLE_BOUND_TOL;
    if !within_bound && estimate.mode == Mode::Exhaustive {
        return Err(Error::consistency(format!(
            "ensemble moment {} exceeds (2m-1)!!·(Σ|a|²)^m = {bound}",
            estimate.value
        )));
    }
    Ok(EnsembleReport {
        estimate,
        bound,
        within_bound,
    })
}
