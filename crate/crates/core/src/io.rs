//! Ensemble files and CSV helpers.
//!
//! An ensemble file is TOML:
//!
//! ```toml
//! dim = 2
//! n = 2
//!
//! [[state]]
//! prior = 0.5
//! entries = [[1.0, 0.0], [0.0, 0.0],
//!            [0.0, 0.0], [0.0, 0.0]]
//!
//! [[state]]
//! prior = 0.5
//! ket = [[0.0, 0.0], [1.0, 0.0]]
//! ```
//!
//! Each state gives either `entries` (the `dim x dim` density matrix,
//! row-major, as `[re, im]` pairs) or `ket` (`dim` amplitudes, normalized on
//! read). Kets keep their phases, which matters for Gram matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensemble::{DensityMatrix, Ensemble};
use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix, C64};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleFile {
    dim: usize,
    n: usize,
    state: Vec<StateEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    prior: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ket: Option<Vec<[f64; 2]>>,
}

fn complex(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

fn pairs(zs: &[C64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

/// Parses an ensemble document. Syntax problems are `Parse` errors; bad
/// contents carry the usual validation errors.
pub fn parse_ensemble(text: &str) -> Result<Ensemble> {
    let file: EnsembleFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.state.len() != file.n {
        return Err(Error::Parse(format!(
            "n = {} but {} [[state]] tables",
            file.n,
            file.state.len()
        )));
    }
    let d = file.dim;
    if d == 0 {
        return Err(Error::Parse("dim must be positive".into()));
    }
    let mut priors = Vec::with_capacity(file.n);
    let mut states = Vec::with_capacity(file.n);
    for (i, s) in file.state.iter().enumerate() {
        priors.push(s.prior);
        let state = match (&s.entries, &s.ket) {
            (Some(m), None) => {
                if m.len() != d * d {
                    return Err(Error::Parse(format!(
                        "state {i}: {} entries for dim {d}",
                        m.len()
                    )));
                }
                let m = ComplexMatrix::from_row_major(complex(m))?;
                DensityMatrix::new(HermitianMatrix::new(m)?)?
            }
            (None, Some(k)) => {
                if k.len() != d {
                    return Err(Error::Parse(format!(
                        "state {i}: ket has {} amplitudes for dim {d}",
                        k.len()
                    )));
                }
                DensityMatrix::from_ket(&complex(k))?
            }
            _ => {
                return Err(Error::Parse(format!(
                    "state {i}: give exactly one of `entries` or `ket`"
                )))
            }
        };
        states.push(state);
    }
    Ensemble::new(priors, states)
}

pub fn read_ensemble(path: impl AsRef<Path>) -> Result<Ensemble> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_ensemble(&text)
}

/// TOML document for `e`; pure states with a stored ket are written as kets.
pub fn ensemble_to_toml(e: &Ensemble) -> String {
    let file = EnsembleFile {
        dim: e.dim(),
        n: e.len(),
        state: e
            .priors()
            .iter()
            .zip(e.states())
            .map(|(&prior, s)| match s.ket() {
                Some(k) => StateEntry {
                    prior,
                    entries: None,
                    ket: Some(pairs(k)),
                },
                None => StateEntry {
                    prior,
                    entries: Some(pairs(s.matrix().as_matrix().as_slice())),
                    ket: None,
                },
            })
            .collect(),
    };
    toml::to_string(&file).expect("ensemble serializes")
}

pub fn write_ensemble(path: impl AsRef<Path>, e: &Ensemble) -> Result<()> {
    std::fs::write(path.as_ref(), ensemble_to_toml(e))
        .map_err(|err| Error::InvalidInput(format!("{}: {err}", path.as_ref().display())))
}

/// Row-major `[re, im]` pairs of a matrix, the file encoding.
pub fn matrix_pairs(m: &HermitianMatrix) -> Vec<[f64; 2]> {
    pairs(m.as_matrix().as_slice())
}

/// CSV text from a header and rows of already formatted cells.
pub fn csv<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<&str> = row.iter().map(AsRef::as_ref).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
