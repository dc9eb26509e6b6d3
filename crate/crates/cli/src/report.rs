//! Deterministic JSON emission.
//!
//! Reports serialize through a formatter that writes every float with 17
//! significant digits (`{:.16e}`), enough to reproduce any `f64` exactly,
//! so a report parses back to the bits that produced it and repeated runs
//! are byte-identical.  Non-finite values become `null` (serde_json's
//! convention), which the schemas document per field.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::{CliError, CliResult};

/// `serde_json` formatter with fixed-width scientific floats.
#[derive(Default)]
pub struct SigFig17;

impl serde_json::ser::Formatter for SigFig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{:.16e}", value as f64)
    }
}

/// Serialize a report with the fixed float format, newline-terminated.
pub fn to_json_line<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFig17);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Io(format!("could not serialize report: {e}")))?;
    buf.push(b'\n');
    Ok(buf)
}

/// Write the report to `--output` or stdout.
pub fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> CliResult<()> {
    let bytes = to_json_line(value)?;
    match output {
        None => io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(format!("could not write to stdout: {e}"))),
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| CliError::Io(format!("could not write {}: {e}", path.display()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        x: f64,
        y: f64,
        inf: f64,
        n: usize,
    }

    #[test]
    fn floats_round_trip_exactly() {
        let sample = Sample {
            x: 0.1 + 0.2,
            y: -1.8831507177290099,
            inf: f64::NEG_INFINITY,
            n: 7,
        };
        let line = String::from_utf8(to_json_line(&sample).unwrap()).unwrap();
        assert!(line.ends_with('\n'));
        assert!(line.contains("\"inf\":null"), "{line}");
        let back: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(back["y"].as_f64().unwrap(), -1.8831507177290099);
        assert_eq!(back["n"].as_u64().unwrap(), 7);
    }

    #[test]
    fn emission_is_reproducible() {
        let sample = Sample {
            x: 1.0 / 3.0,
            y: 2e-308,
            inf: f64::INFINITY,
            n: 0,
        };
        assert_eq!(
            to_json_line(&sample).unwrap(),
            to_json_line(&sample).unwrap()
        );
    }
}
