//! Matrix file formats.
//!
//! * `cmplx-json v1`: `{"rows": n, "cols": m, "data": [[re, im], ...]}`,
//!   row-major, finite doubles only.
//! * plain text: first line `n m`, then `n·m` lines `re im`, row-major.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::c64;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    cols: usize,
    data: Vec<[f64; 2]>,
    rows: usize,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.data
            .iter()
            .any(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        let data = r
            .data
            .into_iter()
            .map(|[re, im]| c64::new(re, im))
            .collect();
        ComplexMatrix::from_vec(r.rows, r.cols, data)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: self.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        ComplexMatrix::try_from(repr).map_err(serde::de::Error::custom)
    }
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}

pub fn matrix_from_text(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad header '{header}': {e}")))
        })
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!(
            "header must be 'rows cols', got '{header}'"
        )));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (k, line) in lines.enumerate() {
        let parts: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("entry {k}: {e}")))
            })
            .collect::<Result<_>>()?;
        let [re, im] = parts[..] else {
            return Err(Error::Parse(format!(
                "entry {k}: expected 're im', got '{line}'"
            )));
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse(format!("entry {k} is not finite")));
        }
        data.push(c64::new(re, im));
    }
    ComplexMatrix::from_vec(rows, cols, data).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_to_text(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for z in m.as_slice() {
        out.push_str(&format!("{:e} {:e}\n", z.re, z.im));
    }
    out
}

/// Parses either format, sniffing JSON by its leading brace.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    if text.trim_start().starts_with('{') {
        matrix_from_json(text)
    } else {
        matrix_from_text(text)
    }
}
