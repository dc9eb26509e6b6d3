//! Flag resolution: errors with exit codes, model building, window
//! parsing, and the thread cap.

use std::fmt;

use jacobi_spectra::{
    make_constant, make_free, make_two_value, OperatorSpec, TwoValueSpec, Window,
};

use crate::ModelArgs;

/// Failure modes, each tied to the process exit code it reports.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed model JSON, invalid windows: exit 2.
    Input(String),
    /// A computation could not reach its accuracy target: exit 3.
    Numerical(String),
    /// Output could not be written: exit 4.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Numerical(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<jacobi_spectra::Error> for CliError {
    fn from(err: jacobi_spectra::Error) -> Self {
        match err {
            jacobi_spectra::Error::Numerical(_) => CliError::Numerical(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A model plus the builder metadata worth keeping (the two-value builder
/// carries its closed-form parameters).
#[derive(Debug)]
pub enum ResolvedModel {
    Plain(OperatorSpec),
    TwoValue(TwoValueSpec),
}

impl ResolvedModel {
    pub fn spec(&self) -> &OperatorSpec {
        match self {
            ResolvedModel::Plain(spec) => spec,
            ResolvedModel::TwoValue(tv) => &tv.spec,
        }
    }

    pub fn two_value(&self) -> Option<&TwoValueSpec> {
        match self {
            ResolvedModel::TwoValue(tv) => Some(tv),
            ResolvedModel::Plain(_) => None,
        }
    }
}

fn require<T>(value: Option<T>, what: &str, builder: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Input(format!("--{what} is required with --model {builder}")))
}

/// Turn the model flags into an operator: builder names construct one,
/// anything starting with `{` parses as inline JSON, and everything else
/// is read as a JSON file path.
pub fn resolve_model(args: &ModelArgs) -> CliResult<ResolvedModel> {
    let source = args.model.as_deref().ok_or_else(|| {
        CliError::Input(
            "--model is required: a builder (free, constant, two-value), \
             a JSON file path, or an inline JSON object"
                .into(),
        )
    })?;

    match source {
        "free" => {
            let q = require(args.q, "q", "free")?;
            Ok(ResolvedModel::Plain(make_free(q)?))
        }
        "constant" => {
            let a = require(args.a, "a", "constant")?;
            let b = require(args.b, "b", "constant")?;
            let q = require(args.q, "q", "constant")?;
            Ok(ResolvedModel::Plain(make_constant(a, b, q)?))
        }
        "two-value" => {
            let r = require(args.r, "R", "two-value")?;
            let m = args.m.unwrap_or(1);
            let l = args.l.unwrap_or(1);
            Ok(ResolvedModel::TwoValue(make_two_value(r, m, l)?))
        }
        inline if inline.trim_start().starts_with('{') => {
            let spec: OperatorSpec = serde_json::from_str(inline)
                .map_err(|e| CliError::Input(format!("invalid model JSON: {e}")))?;
            spec.validate()?;
            Ok(ResolvedModel::Plain(spec))
        }
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Input(format!(
                    "--model {path:?} is not a builder name and could not be read as a file: {e}"
                ))
            })?;
            let spec: OperatorSpec = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("invalid model JSON in {path:?}: {e}")))?;
            spec.validate()?;
            Ok(ResolvedModel::Plain(spec))
        }
    }
}

/// Parse `"left,right"` with `inf` / `-inf` tokens; surrounding
/// parentheses and whitespace are tolerated.
pub fn parse_window(text: &str) -> CliResult<Window> {
    let trimmed = text.trim();
    let trimmed = trimmed.strip_prefix('(').unwrap_or(trimmed);
    let trimmed = trimmed.strip_suffix(')').unwrap_or(trimmed);
    let parts: Vec<&str> = trimmed.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Input(format!(
            "window must be \"left,right\", got {text:?}"
        )));
    }
    let parse_end = |token: &str| -> CliResult<f64> {
        let token = token.trim();
        match token {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => token.parse::<f64>().map_err(|_| {
                CliError::Input(format!(
                    "window endpoint {token:?} is not a number or inf/-inf"
                ))
            }),
        }
    };
    Ok(Window::new(parse_end(parts[0])?, parse_end(parts[1])?)?)
}

/// Thread cap from `JACOBI_SPECTRA_THREADS` (unset or 0 means the rayon
/// default).  Suite output order is fixed regardless of the cap.
pub fn thread_cap() -> CliResult<usize> {
    match std::env::var("JACOBI_SPECTRA_THREADS") {
        Err(_) => Ok(0),
        Ok(raw) => raw.trim().parse::<usize>().map_err(|_| {
            CliError::Input(format!(
                "JACOBI_SPECTRA_THREADS must be a nonnegative integer, got {raw:?}"
            ))
        }),
    }
}
