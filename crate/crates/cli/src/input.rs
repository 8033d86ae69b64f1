//! Reading JSON inputs and mapping failures onto exit codes.

use std::fmt;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sharp_order::json::{spec_from_json, AnyMatrix};
use sharp_order::{Error, ExactScalar, FloatScalar64, JordanSpec, Scalar, Tolerance};

/// Exit code for unreadable or malformed input.
pub const EXIT_MALFORMED: i32 = 2;
/// Exit code for well-formed input that violates a precondition.
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Json(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Json(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Json(_) => "parse",
            CliError::Lib(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Json(_) => EXIT_MALFORMED,
            CliError::Lib(Error::Parse(_) | Error::InvalidSpec(_) | Error::InvalidTolerance(_)) => EXIT_MALFORMED,
            CliError::Lib(_) => EXIT_PRECONDITION,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.code(), "message": self.to_string()})
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> CliResult<AnyMatrix> {
    Ok(AnyMatrix::from_json(&read_json(path)?)?)
}

/// A Jordan spec in whichever mode its eigenvalues allow.
#[derive(Debug, Clone)]
pub enum AnySpec {
    Exact(JordanSpec<ExactScalar>),
    Float(JordanSpec<FloatScalar64>),
}

impl AnySpec {
    pub fn to_float(&self) -> JordanSpec<FloatScalar64> {
        match self {
            AnySpec::Exact(s) => s.convert(Scalar::to_c64),
            AnySpec::Float(s) => s.clone(),
        }
    }
}

/// Exact when every eigenvalue (and `P`, if given) parses exactly, float
/// otherwise.
pub fn read_spec(path: &Path, tol: &Tolerance) -> CliResult<AnySpec> {
    let v = read_json(path)?;
    match spec_from_json::<ExactScalar>(&v, tol) {
        Ok(s) => Ok(AnySpec::Exact(s)),
        Err(Error::Parse(_)) => Ok(AnySpec::Float(spec_from_json(&v, tol)?)),
        Err(e) => Err(e.into()),
    }
}
