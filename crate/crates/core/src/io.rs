//! JSON file formats and report formatting.
//!
//! - channel: `{"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}`
//! - bipartite state: `{"dims": [dA, dB], "matrix": matrix}`
//! - state: a bare matrix, or `{"matrix": matrix}`
//! - basis: `{"dim": d, "columns": matrix}`
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::state::{BipartiteState, DensityMatrix};

/// Significant digits kept in reports.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Serialize, Deserialize)]
struct ChannelFile {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct BipartiteFile {
    dims: [usize; 2],
    matrix: ComplexMatrix,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    Bare(ComplexMatrix),
    Wrapped { matrix: ComplexMatrix },
}

impl Serialize for KrausChannel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChannelFile {
            dim_in: self.dim_in(),
            dim_out: self.dim_out(),
            kraus: self.kraus().to_vec(),
        }
        .serialize(s)
    }
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_channel(text: &str) -> Result<KrausChannel> {
    let file: ChannelFile = parse(text)?;
    for k in &file.kraus {
        if k.dims() != (file.dim_out, file.dim_in) {
            return Err(Error::Parse(format!(
                "Kraus operator is {}x{}, expected {}x{}",
                k.rows(),
                k.cols(),
                file.dim_out,
                file.dim_in
            )));
        }
    }
    KrausChannel::new(file.dim_in, file.dim_out, file.kraus)
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let matrix = match parse::<StateFile>(text)? {
        StateFile::Bare(m) | StateFile::Wrapped { matrix: m } => m,
    };
    DensityMatrix::new(matrix)
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteState> {
    let file: BipartiteFile = parse(text)?;
    let [da, db] = file.dims;
    BipartiteState::new(da, db, DensityMatrix::new(file.matrix)?)
}

pub fn parse_basis(text: &str) -> Result<Basis> {
    parse(text)
}

/// Rounds every float in `value` to [`SIGNIFICANT_DIGITS`].
pub fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(x) = n.as_f64().filter(|_| n.is_f64()) {
                let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
                    .parse()
                    .expect("formatted float parses");
                if let Some(r) = serde_json::Number::from_f64(rounded) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Compact JSON with floats rounded for stable diffs.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Invalid(e.to_string()))?;
    round_floats(&mut v);
    Ok(v.to_string())
}

/// First 16 hex digits of the SHA-256 of the JSON encoding of `value`.
pub fn inputs_hash<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("inputs serialize");
    let digest = Sha256::digest(&bytes);
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
