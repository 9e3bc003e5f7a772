//! `circle-norms`: JSON front end to the circle-norms library.
//!
//! Every subcommand reads its input file, writes one JSON document (to
//! stdout or `--output`) and exits with
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success                                   |
//! | 2    | input error (bad flag, file or value)     |
//! | 3    | resource error (size cap, I/O on output)  |
//! | 4    | internal consistency check failed         |
//!
//! Floats are printed with 17 significant digits. `CIRCLE_NORMS_THREADS`
//! caps the worker pool; results do not depend on it.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use circle_norms::circle::{sup_norm_enclosure_with, EnclosureOptions};
use circle_norms::finite_lp::{self, AscentOptions, NuMethod};
use circle_norms::rademacher::{self, Mode, SamplingOptions};
use circle_norms::volterra::{self, Func1D};
use circle_norms::{io, Error, Execution, Exponent, PolyConfig, C64};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

const THREADS_ENV: &str = "CIRCLE_NORMS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "circle-norms", version, about = "Norms of polynomials on the circle, random-sign moments, finite Lp spaces and the Volterra operator")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,

    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Target relative width of sup-norm enclosures.
    #[arg(long, global = true, default_value_t = 1e-3)]
    rel_tol: f64,

    /// Seed for Monte Carlo sampling, random scans and ascent restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 65536)]
    samples: u64,

    /// Sign-ensemble averaging: exhaustive, monte_carlo or auto (exhaustive
    /// up to 20 coefficients).
    #[arg(long, global = true, default_value = "auto", value_parser = parse_mode)]
    mode: Mode,

    /// Write the JSON document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified enclosure of max_{|z|=1} |p(z)|.
    Supnorm {
        /// Coefficient file: JSON array of [re, im] pairs (or reals).
        input: PathBuf,
        /// Doubling budget for the enclosure.
        #[arg(long, default_value_t = 14)]
        max_doublings: u32,
    },
    /// Exact circle moment (1/2π)∫|p|^{2m}.
    Moment {
        input: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// E_s |Σ s_j b_j|^{2m} over independent random signs.
    Khintchine {
        input: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// Sign-ensemble average of the circle moment, checked against (2m−1)!!·(Σ|a|²)^m.
    Ensemble {
        input: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// Largest moment ratio A_{2m}(b)/(Σ|b|²)^m over random b in C^{n+1}.
    RatioScan {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// L^p norm of a vector-valued function on a finite set.
    Lp {
        /// Function file: {space, points, values}.
        input: PathBuf,
        #[arg(long, value_parser = parse_exponent)]
        p: Exponent,
        /// Also compute the weak (ν) norm.
        #[arg(long)]
        nu: bool,
        /// ν-norm method: auto, pointwise_max, extreme_points, spectral or ascent.
        #[arg(long, default_value = "auto", value_parser = parse_method)]
        method: NuMethod,
    },
    /// Dual norm of the pairing functional of h on L^p, with a witness.
    Dual {
        input: PathBuf,
        #[arg(long, value_parser = parse_exponent)]
        p: Exponent,
    },
    /// Iterates of the Volterra operator (Tf)(x) = ∫_0^x f.
    Volterra {
        /// Function file: {backend: "poly"|"grid", ...}, or an array of them.
        input: PathBuf,
        #[arg(long)]
        n: usize,
        /// Also report the norm inequalities.
        #[arg(long)]
        checks: bool,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<NuMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Format(_) => 2,
            Error::Resource(_) => 3,
            Error::Consistency(_) => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => return Err(input_error(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))),
    };
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: 3,
            message: format!("cannot start {threads} worker threads: {e}"),
        })?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn sampling(cfg: &RunConfig) -> SamplingOptions {
    SamplingOptions {
        mode: cfg.mode,
        samples: cfg.samples,
        seed: cfg.seed,
        ..SamplingOptions::default()
    }
}

#[derive(Serialize)]
struct Sample {
    x: f64,
    value: C64,
}

fn iterate_summary(f: &Func1D, n: usize) -> Result<Value, Failure> {
    let it = volterra::volterra_iterate(f, n)?;
    let at = |x: f64| Sample { x, value: it.func.eval(x) };
    Ok(json!({
        "backend": if f.is_grid() { "grid" } else { "poly" },
        "values": [at(0.0), at(0.5), at(1.0)],
        "sup_norm": volterra::sup_norm_01(&it.func),
        "accumulation_warning": it.accumulation_warning,
    }))
}

fn run(cfg: &RunConfig, command: &Command) -> Result<Value, Failure> {
    let doc = match command {
        Command::Supnorm { input, max_doublings } => {
            let p = io::parse_poly(&read_input(input)?)?;
            let opts = EnclosureOptions {
                rel_tol: cfg.rel_tol,
                max_doublings: *max_doublings,
                poly: PolyConfig::default(),
            };
            let enc = sup_norm_enclosure_with(&p, &opts)?;
            json!({ "degree": p.degree(), "enclosure": enc })
        }
        Command::Moment { input, m } => {
            let p = io::parse_poly(&read_input(input)?)?;
            let value = circle_norms::circle_moment_exact(&p, *m)?;
            json!({ "m": m, "value": value })
        }
        Command::Khintchine { input, m } => {
            let b = io::parse_coeffs(&read_input(input)?)?;
            let est = rademacher::khintchine_moment(&b, *m, &sampling(cfg))?;
            let energy: f64 = b.iter().map(|c| c.norm_sqr()).sum();
            json!({
                "m": m,
                "estimate": est,
                "reference_bound": rademacher::gaussian_moment_constant(*m) * energy.powi(*m as i32),
            })
        }
        Command::Ensemble { input, m } => {
            let a = io::parse_coeffs(&read_input(input)?)?;
            let report = rademacher::ensemble_circle_moment(&a, *m, &sampling(cfg), &PolyConfig::default())?;
            json!({ "m": m, "report": report })
        }
        Command::RatioScan { n, m, trials } => {
            let report = rademacher::khintchine_ratio_scan(*n, *m, *trials, cfg.seed, &sampling(cfg))?;
            serde_json::to_value(report).expect("report serialises")
        }
        Command::Lp { input, p, nu, method } => {
            let f = io::parse_vfunction(&read_input(input)?)?;
            let mut doc = json!({ "p": p, "norm": finite_lp::lp_norm(&f, *p) });
            if *nu {
                let ascent = AscentOptions {
                    seed: cfg.seed,
                    exec: Execution::default(),
                    ..AscentOptions::default()
                };
                let nu = finite_lp::nu_norm_with(&f, *p, *method, &ascent)?;
                doc["nu"] = serde_json::to_value(nu).expect("nu-norm serialises");
            }
            doc
        }
        Command::Dual { input, p } => {
            let h = io::parse_vfunction(&read_input(input)?)?;
            let d = finite_lp::pairing_dual_norm(&h, *p)?;
            json!({
                "p": p,
                "q": d.q,
                "value": d.value,
                "witness": io::vfunction_to_json(&d.witness),
                "witness_pairing": d.witness_pairing,
                "witness_norm": d.witness_norm,
                "witness_attains": d.witness_attains(1e-9),
            })
        }
        Command::Volterra { input, n, checks } => {
            let fs = io::parse_func1d_list(&read_input(input)?)?;
            let iterates = fs
                .iter()
                .map(|f| iterate_summary(f, *n))
                .collect::<Result<Vec<_>, _>>()?;
            let mut doc = json!({ "n": n, "iterates": iterates });
            if *checks {
                let report = volterra::volterra_norm_checks(&fs, *n)?;
                doc["checks"] = serde_json::to_value(report).expect("report serialises");
            }
            doc
        }
    };
    Ok(doc)
}

fn emit(cfg: &RunConfig, doc: &Value) -> Result<(), Failure> {
    let mut text = io::to_json_string(doc)?;
    text.push('\n');
    match &cfg.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 3,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads()
        .and_then(|()| run(&cli.run, &cli.command))
        .and_then(|doc| emit(&cli.run, &doc));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
