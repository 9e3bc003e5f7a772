//! JSON documents read and written by the command-line front end.
//!
//! Scalars are written as `[re, im]` pairs; on input a bare number is also
//! accepted as a real scalar.
//!
//! - Polynomial: `[[re, im], ...]`, index = power of `z`.
//! - Laurent polynomial: `{"k_min": k, "coeffs": [[re, im], ...]}`.
//! - Vector-valued function: `{"space": {"dim", "field", "norm_kind", "r",
//!   "weights"?}, "points": [...], "values": [...]}` with `values` the
//!   `d×|E|` matrix in row-major order (flat, or as `d` rows).
//! - Function on `[0,1]`: `{"backend": "poly", "coeffs": [...]}` or
//!   `{"backend": "grid", "samples": [...]}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::finite_lp::{Field, NormKind, NormedSpace, VFunction};
use crate::poly::{LaurentPoly, Poly};
use crate::volterra::Func1D;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
enum ScalarIn {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ScalarIn> for C64 {
    fn from(s: ScalarIn) -> C64 {
        match s {
            ScalarIn::Real(x) => C64::new(x, 0.0),
            ScalarIn::Pair([re, im]) => C64::new(re, im),
        }
    }
}

fn scalars_in(v: Vec<ScalarIn>) -> Vec<C64> {
    v.into_iter().map(C64::from).collect()
}

/// `[re, im]` pairs for output.
pub fn scalars_out(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    // serde_json's message already ends with "at line L column C"
    serde_json::from_str(text).map_err(|e| Error::format(format!("{what}: {e}")))
}

/// Coefficient vector: a JSON array of `[re, im]` pairs or numbers.
pub fn parse_coeffs(text: &str) -> Result<Vec<C64>> {
    let raw: Vec<ScalarIn> = parse(text, "coefficient array")?;
    if raw.is_empty() {
        return Err(Error::format("coefficient array is empty"));
    }
    Ok(scalars_in(raw))
}

pub fn parse_poly(text: &str) -> Result<Poly> {
    Ok(Poly::new(parse_coeffs(text)?))
}

pub fn poly_to_json(p: &Poly) -> Value {
    serde_json::to_value(scalars_out(p.coeffs())).expect("plain arrays serialise")
}

#[derive(Deserialize)]
struct LaurentIn {
    k_min: i64,
    coeffs: Vec<ScalarIn>,
}

#[derive(Serialize)]
struct LaurentOut {
    k_min: i64,
    coeffs: Vec<[f64; 2]>,
}

pub fn parse_laurent(text: &str) -> Result<LaurentPoly> {
    let raw: LaurentIn = parse(text, "Laurent polynomial")?;
    LaurentPoly::new(raw.k_min, scalars_in(raw.coeffs))
}

pub fn laurent_to_json(f: &LaurentPoly) -> Value {
    serde_json::to_value(LaurentOut {
        k_min: f.k_min(),
        coeffs: scalars_out(f.coeffs()),
    })
    .expect("plain structs serialise")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum NormKindTag {
    Lr,
    WeightedLr,
}

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    dim: usize,
    field: Field,
    norm_kind: NormKindTag,
    r: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

#[derive(Deserialize)]
struct VFunctionIn {
    space: SpaceDoc,
    points: Vec<Value>,
    values: Vec<Value>,
}

#[derive(Serialize)]
struct VFunctionOut {
    space: SpaceDoc,
    points: Vec<String>,
    values: Vec<[f64; 2]>,
}

fn space_from_doc(doc: SpaceDoc) -> Result<NormedSpace> {
    let kind = match (doc.norm_kind, doc.weights) {
        (NormKindTag::Lr, None) => NormKind::Lr(doc.r),
        (NormKindTag::Lr, Some(_)) => {
            return Err(Error::format("weights given for an unweighted lr space"))
        }
        (NormKindTag::WeightedLr, Some(weights)) => NormKind::WeightedLr { r: doc.r, weights },
        (NormKindTag::WeightedLr, None) => {
            return Err(Error::format("weighted_lr space needs weights"))
        }
    };
    NormedSpace::new(doc.dim, doc.field, kind)
}

fn space_to_doc(space: &NormedSpace) -> SpaceDoc {
    let (norm_kind, r, weights) = match space.kind() {
        NormKind::Lr(r) => (NormKindTag::Lr, *r, None),
        NormKind::WeightedLr { r, weights } => (NormKindTag::WeightedLr, *r, Some(weights.clone())),
    };
    SpaceDoc {
        dim: space.dim(),
        field: space.field(),
        norm_kind,
        r,
        weights,
    }
}

fn label(v: Value) -> String {
    match v {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn scalar_value(v: Value) -> Result<C64> {
    serde_json::from_value::<ScalarIn>(v)
        .map(C64::from)
        .map_err(|e| Error::format(format!("bad scalar in values: {e}")))
}

pub fn parse_vfunction(text: &str) -> Result<VFunction> {
    let raw: VFunctionIn = parse(text, "vector-valued function")?;
    let space = space_from_doc(raw.space)?;
    let points: Vec<String> = raw.points.into_iter().map(label).collect();
    let (d, n) = (space.dim(), points.len());
    // flat row-major, or one nested array per row; a 1x1 function written
    // as [[re, im]] reads as a flat pair since a 2-entry row would not fit
    let nested = raw.values.len() == d
        && raw
            .values
            .iter()
            .all(|v| matches!(v, Value::Array(items) if items.len() == n) && is_row(v));
    let entries: Vec<C64> = if nested {
        let mut out = Vec::with_capacity(d * n);
        for row in raw.values {
            let Value::Array(items) = row else { unreachable!() };
            for item in items {
                out.push(scalar_value(item)?);
            }
        }
        out
    } else {
        raw.values.into_iter().map(scalar_value).collect::<Result<_>>()?
    };
    if entries.len() != d * n {
        return Err(Error::format(format!(
            "values hold {} scalars, expected {d}x{n} = {}",
            entries.len(),
            d * n
        )));
    }
    let values = DMatrix::from_row_slice(d, n, &entries);
    VFunction::new(space, points, values)
}

// A row is an array whose entries are scalars (numbers or [re, im] pairs).
fn is_row(v: &Value) -> bool {
    match v {
        Value::Array(items) => items
            .iter()
            .all(|x| x.is_number() || matches!(x, Value::Array(p) if p.len() == 2)),
        _ => false,
    }
}

pub fn vfunction_to_json(f: &VFunction) -> Value {
    let (d, n) = (f.space().dim(), f.len());
    let values = (0..d)
        .flat_map(|i| (0..n).map(move |x| (i, x)))
        .map(|(i, x)| {
            let c = f.values()[(i, x)];
            [c.re, c.im]
        })
        .collect();
    serde_json::to_value(VFunctionOut {
        space: space_to_doc(f.space()),
        points: f.points().to_vec(),
        values,
    })
    .expect("plain structs serialise")
}

#[derive(Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
enum Func1DIn {
    Poly { coeffs: Vec<ScalarIn> },
    Grid { samples: Vec<ScalarIn> },
}

#[derive(Serialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
enum Func1DOut {
    Poly { coeffs: Vec<[f64; 2]> },
    Grid { samples: Vec<[f64; 2]> },
}

fn func_from_doc(doc: Func1DIn) -> Result<Func1D> {
    match doc {
        Func1DIn::Poly { coeffs } => {
            if coeffs.is_empty() {
                return Err(Error::format("poly backend needs at least one coefficient"));
            }
            Ok(Func1D::Poly(Poly::new(scalars_in(coeffs))))
        }
        Func1DIn::Grid { samples } => Func1D::grid(scalars_in(samples)),
    }
}

pub fn parse_func1d(text: &str) -> Result<Func1D> {
    func_from_doc(parse(text, "function on [0,1]")?)
}

/// A single function document or an array of them.
pub fn parse_func1d_list(text: &str) -> Result<Vec<Func1D>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<Value>),
        One(Value),
    }
    let docs = match parse::<OneOrMany>(text, "function on [0,1]")? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(v) => vec![v],
    };
    if docs.is_empty() {
        return Err(Error::format("function list is empty"));
    }
    docs.into_iter()
        .map(|v| {
            let doc: Func1DIn = serde_json::from_value(v)
                .map_err(|e| Error::format(format!("function on [0,1]: {e}")))?;
            func_from_doc(doc)
        })
        .collect()
}

pub fn func1d_to_json(f: &Func1D) -> Value {
    let doc = match f {
        Func1D::Poly(p) => Func1DOut::Poly {
            coeffs: scalars_out(p.coeffs()),
        },
        Func1D::Grid(s) => Func1DOut::Grid {
            samples: scalars_out(s),
        },
    };
    serde_json::to_value(doc).expect("plain enums serialise")
}

/// Compact JSON with every float written to 17 significant digits, which
/// is enough to read back the same double.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::format(format!("serialisation failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, x: f64) -> std::io::Result<()> {
        if x.is_finite() {
            write!(w, "{x:.16e}")
        } else {
            // JSON has no spelling for these; serde_json::Value does the same
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, w: &mut W, x: f32) -> std::io::Result<()> {
        self.write_f64(w, f64::from(x))
    }
}
