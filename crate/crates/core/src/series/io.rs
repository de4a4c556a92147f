//! CSV (`n,re,im`) and JSON (`{"trunc": N, "coeffs": [[re, im], ...]}`)
//! encodings of a [`Series`]. Numbers are written with 17 significant
//! digits so double-precision values survive a round trip bit for bit.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::Series;
use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};

pub const CSV_HEADER: &str = "n,re,im";

/// Wire form of a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub trunc: usize,
    pub coeffs: Vec<[f64; 2]>,
}

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl<T: Real> Series<T> {
    /// CSV rows `n,re,im` without the header line.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.coeffs().iter().enumerate() {
            let _ = writeln!(
                out,
                "{n},{},{}",
                fmt_f64(to_f64(c.re)),
                fmt_f64(to_f64(c.im))
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows())
    }

    /// Parses `n,re,im` rows (header optional). Indices must run 0, 1, 2, ...
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line == CSV_HEADER {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Format(format!(
                    "line {}: expected 3 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let n: usize = fields[0].parse().map_err(|_| {
                Error::Format(format!("line {}: bad index {:?}", lineno + 1, fields[0]))
            })?;
            if n != coeffs.len() {
                return Err(Error::Format(format!(
                    "line {}: index {n} out of sequence",
                    lineno + 1
                )));
            }
            let re = parse_scalar::<T>(fields[1], lineno)?;
            let im = parse_scalar::<T>(fields[2], lineno)?;
            coeffs.push(Complex::new(re, im));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn to_wire(&self) -> SeriesJson {
        SeriesJson {
            trunc: self.order(),
            coeffs: self
                .coeffs()
                .iter()
                .map(|c| [to_f64(c.re), to_f64(c.im)])
                .collect(),
        }
    }

    pub fn from_wire(wire: &SeriesJson) -> Result<Self> {
        if wire.coeffs.len() != wire.trunc + 1 {
            return Err(Error::Format(format!(
                "trunc {} but {} coefficients",
                wire.trunc,
                wire.coeffs.len()
            )));
        }
        let coeffs = wire
            .coeffs
            .iter()
            .map(|&[re, im]| match (T::from_f64(re), T::from_f64(im)) {
                (Some(re), Some(im)) => Ok(Complex::new(re, im)),
                _ => Err(Error::Format("coefficient not representable".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(coeffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("series serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: SeriesJson =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_wire(&wire)
    }
}

fn parse_scalar<T: Real>(field: &str, lineno: usize) -> Result<T> {
    field
        .parse::<f64>()
        .ok()
        .and_then(T::from_f64)
        .ok_or_else(|| Error::Format(format!("line {}: bad number {field:?}", lineno + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let s = Series::<f64>::from_real(&[0.0, 1.0, 2.5]).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,re,im"));
        assert_eq!(
            lines.next(),
            Some("0,0.0000000000000000e0,0.0000000000000000e0")
        );
        assert_eq!(
            lines.nth(1),
            Some("2,2.5000000000000000e0,0.0000000000000000e0")
        );
    }

    #[test]
    fn json_layout() {
        let s = Series::<f64>::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(s.to_json(), r#"{"trunc":1,"coeffs":[[0.0,0.0],[1.0,0.0]]}"#);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(Series::<f64>::from_csv("0,1,0\n2,1,0\n").is_err());
        assert!(Series::<f64>::from_csv("0,1\n").is_err());
        assert!(Series::<f64>::from_json(r#"{"trunc":3,"coeffs":[[0,0]]}"#).is_err());
    }
}
