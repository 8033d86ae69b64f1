//! JSON encodings.
//!
//! Matrices are `{"mode": "float"|"exact", "rows": n, "cols": m,
//! "entries": [[re, im], ...]}` in row-major order. Float parts are JSON
//! numbers; exact parts are strings `"p/q"` (integers and finite decimals
//! are also accepted on input).

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::commutant::CommutantProjector;
use crate::error::{Error, Result};
use crate::hs::HsDecomposition;
use crate::jordan::{EigenBlocks, JordanSpec};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::scalar::{ExactComplex, Scalar, Tolerance};
use crate::{ExactMatrix, FloatMatrix};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"-1.25"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| perr(format!("bad numerator in {s:?}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| perr(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(perr(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(perr(format!("bad decimal {s:?}")));
        }
        let digits = format!("{int}{frac}");
        let num = BigInt::from_str(&digits).map_err(|_| perr(format!("bad decimal {s:?}")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| perr(format!("bad rational {s:?}")))
}

fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Scalar {
    const MODE: &'static str;
    fn part_to_json(&self) -> [Value; 2];
    fn part_from_json(re: &Value, im: &Value) -> Result<Self>;
}

fn f64_of(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| perr("number out of range")),
        Value::String(s) => parse_rational(s)?
            .to_f64()
            .ok_or_else(|| perr(format!("{s:?} does not fit in f64"))),
        _ => Err(perr(format!("expected a number, got {v}"))),
    }
}

fn rational_of(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map(Rational::from),
        Value::Number(n) => parse_rational(&n.to_string()).map(Rational::from),
        _ => Err(perr(format!("expected a rational, got {v}"))),
    }
}

impl JsonScalar for Complex<f64> {
    const MODE: &'static str = "float";

    fn part_to_json(&self) -> [Value; 2] {
        [json!(self.re), json!(self.im)]
    }

    fn part_from_json(re: &Value, im: &Value) -> Result<Self> {
        Ok(Complex::new(f64_of(re)?, f64_of(im)?))
    }
}

impl JsonScalar for ExactComplex {
    const MODE: &'static str = "exact";

    fn part_to_json(&self) -> [Value; 2] {
        [json!(format_rational(&self.re())), json!(format_rational(&self.im()))]
    }

    fn part_from_json(re: &Value, im: &Value) -> Result<Self> {
        Ok(ExactComplex::new(rational_of(re)?, rational_of(im)?))
    }
}

fn scalar_to_json<S: JsonScalar>(z: &S) -> Value {
    Value::Array(z.part_to_json().to_vec())
}

fn scalar_from_json<S: JsonScalar>(v: &Value) -> Result<S> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => S::part_from_json(re, im),
        _ => Err(perr(format!("expected [re, im], got {v}"))),
    }
}

pub fn matrix_to_json<S: JsonScalar>(m: &Matrix<S>) -> Value {
    json!({
        "mode": S::MODE,
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn usize_field(obj: &Value, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| perr(format!("field {key:?} must be a non-negative integer")))
}

fn mode_of(v: &Value) -> Result<&str> {
    field(v, "mode")?.as_str().ok_or_else(|| perr("field \"mode\" must be a string"))
}

pub fn matrix_from_json<S: JsonScalar>(v: &Value) -> Result<Matrix<S>> {
    let mode = mode_of(v)?;
    if mode != S::MODE {
        return Err(perr(format!("expected mode {:?}, got {mode:?}", S::MODE)));
    }
    let rows = usize_field(v, "rows")?;
    let cols = usize_field(v, "cols")?;
    let entries = field(v, "entries")?
        .as_array()
        .ok_or_else(|| perr("field \"entries\" must be an array"))?;
    if entries.len() != rows * cols {
        return Err(perr(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
    }
    let data = entries.iter().map(scalar_from_json).collect::<Result<Vec<S>>>()?;
    Matrix::new(rows, cols, data).map_err(|e| perr(e.to_string()))
}

/// A matrix in whichever mode its JSON declares.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Exact(ExactMatrix),
    Float(FloatMatrix),
}

impl AnyMatrix {
    pub fn from_json(v: &Value) -> Result<Self> {
        match mode_of(v)? {
            "exact" => matrix_from_json(v).map(AnyMatrix::Exact),
            "float" => matrix_from_json(v).map(AnyMatrix::Float),
            other => Err(perr(format!("unknown mode {other:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMatrix::Exact(m) => matrix_to_json(m),
            AnyMatrix::Float(m) => matrix_to_json(m),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            AnyMatrix::Exact(_) => "exact",
            AnyMatrix::Float(_) => "float",
        }
    }

    /// Floating-point copy (exact entries are rounded).
    pub fn to_float(&self) -> FloatMatrix {
        match self {
            AnyMatrix::Exact(m) => m.to_c64(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }
}

pub fn hs_to_json(d: &HsDecomposition<Complex<f64>>) -> Value {
    json!({
        "U": matrix_to_json(&d.u),
        "sigma": d.sigma,
        "K": matrix_to_json(&d.k),
        "L": matrix_to_json(&d.l),
        "r": d.r,
    })
}

pub fn hs_from_json(v: &Value, tol: &Tolerance) -> Result<HsDecomposition<Complex<f64>>> {
    let sigma = field(v, "sigma")?
        .as_array()
        .ok_or_else(|| perr("field \"sigma\" must be an array"))?
        .iter()
        .map(f64_of)
        .collect::<Result<Vec<f64>>>()?;
    let r = usize_field(v, "r")?;
    if r != sigma.len() {
        return Err(perr("r differs from the length of sigma"));
    }
    HsDecomposition::from_parts(
        matrix_from_json(field(v, "U")?)?,
        sigma,
        matrix_from_json(field(v, "K")?)?,
        matrix_from_json(field(v, "L")?)?,
        tol,
    )
}

pub fn spec_to_json<S: JsonScalar>(spec: &JordanSpec<S>) -> Value {
    json!({
        "eigenvalues": spec.eigenvalues().iter().map(|e| json!({
            "lambda": scalar_to_json(&e.lambda),
            "sizes": e.sizes,
        })).collect::<Vec<_>>(),
        "P": spec.similarity().map(matrix_to_json).unwrap_or(Value::Null),
    })
}

/// Parse a spec; `P`, when present, must be in mode `S`. Its similarity to
/// a target matrix is not checked here.
pub fn spec_from_json<S: JsonScalar>(v: &Value, tol: &Tolerance) -> Result<JordanSpec<S>> {
    let eigs = field(v, "eigenvalues")?
        .as_array()
        .ok_or_else(|| perr("field \"eigenvalues\" must be an array"))?
        .iter()
        .map(|e| {
            let lambda = scalar_from_json(field(e, "lambda")?)?;
            let sizes = field(e, "sizes")?
                .as_array()
                .ok_or_else(|| perr("field \"sizes\" must be an array"))?
                .iter()
                .map(|s| s.as_u64().map(|x| x as usize).ok_or_else(|| perr("sizes must be integers")))
                .collect::<Result<Vec<usize>>>()?;
            Ok(EigenBlocks::new(lambda, sizes))
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = JordanSpec::new(eigs)?;
    match v.get("P") {
        None | Some(Value::Null) => Ok(spec),
        Some(p) => spec.with_similarity(matrix_from_json(p)?, tol),
    }
}

/// Mode of the spec's `P`, if it has one.
pub fn spec_mode(v: &Value) -> Result<Option<String>> {
    match v.get("P") {
        None | Some(Value::Null) => Ok(None),
        Some(p) => mode_of(p).map(|m| Some(m.to_string())),
    }
}

pub fn commutant_projector_to_json<S: JsonScalar>(cp: &CommutantProjector<S>) -> Value {
    let blocks: Vec<Value> = cp
        .grid()
        .blocks()
        .iter()
        .map(|grid| {
            Value::Array(
                grid.iter()
                    .map(|row| {
                        Value::Array(
                            row.iter()
                                .map(|b| Value::Array(b.core.coeffs().iter().map(scalar_to_json).collect()))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("spec".into(), spec_to_json(cp.spec()));
    obj.insert("blocks".into(), Value::Array(blocks));
    obj.insert("matrix".into(), matrix_to_json(cp.matrix()));
    Value::Object(obj)
}

pub fn commutant_projector_from_json<S: JsonScalar>(v: &Value, tol: &Tolerance) -> Result<CommutantProjector<S>> {
    let spec: JordanSpec<S> = spec_from_json(field(v, "spec")?, tol)?;
    let arr = |x: &Value, what: &str| -> Result<Vec<Value>> {
        x.as_array().cloned().ok_or_else(|| perr(format!("{what} must be an array")))
    };
    let coeffs = arr(field(v, "blocks")?, "blocks")?
        .iter()
        .map(|grid| {
            arr(grid, "grid")?
                .iter()
                .map(|row| {
                    arr(row, "grid row")?
                        .iter()
                        .map(|cell| arr(cell, "coefficients")?.iter().map(scalar_from_json).collect())
                        .collect()
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<Vec<Vec<S>>>>>>()?;
    let grid = crate::commutant::CommutantMatrix::new(&spec, coeffs)?;
    CommutantProjector::new(grid, tol)
}
