//! Norms and moments of complex polynomials on the unit circle.
//!
//! The crate is organised around a handful of computational surfaces:
//!
//! - [`poly`]: dense complex polynomials and Laurent polynomials, with direct
//!   and FFT convolution.
//! - [`circle`]: exact circle moments `(1/2π)∫|p|^{2m}` and a certified
//!   enclosure of the sup norm on `|z| = 1`.
//! - [`rademacher`]: sign strings, Khintchine moment averages and ensemble
//!   averages of circle moments, exhaustive (Gray-code) or Monte Carlo.
//! - [`finite_lp`]: `ℓᵖ(E, V)` norms, dual norms, the pairing `λ_h` and the
//!   ν-norms for vector-valued functions on a finite set.
//! - [`volterra`]: the integration operator `T(f)(x) = ∫₀ˣ f` on `C[0,1]`.
//! - [`io`]: the JSON file formats shared with the command-line front end.
//!
//! Data-parallel loops go through [`exec`]. With the `parallel` feature
//! (default) they run on rayon; otherwise, or when [`Execution::Sequential`]
//! is requested, they run on the calling thread. Results do not depend on
//! which path ran.

pub mod circle;
pub mod error;
pub mod exec;
pub mod exponent;
pub mod finite_lp;
pub mod io;
pub mod poly;
pub mod rademacher;
pub mod volterra;

pub use circle::{circle_moment_exact, sup_norm_enclosure, sup_norm_sample, Enclosure};
pub use error::{Error, Result};
pub use exec::Execution;
pub use exponent::Exponent;
pub use poly::{LaurentPoly, MulBackend, Poly, PolyConfig};

/// Double-precision complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;
