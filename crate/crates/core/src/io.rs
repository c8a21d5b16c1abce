//! JSON file formats shared by every command.
//!
//! Complex scalars are two-element arrays `[re, im]`. A matrix is
//! `{"rows", "cols", "data"}` with `data` row-major; a state set is
//! `{"dim", "states", "priors"?}` with one array per state. Readers also
//! accept a report that embeds such a document under a well-known key, so
//! the output of one command can feed another.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, C64};
use crate::usd::{validate_priors, StateSet};

/// Priors read from a file may miss 1 by this much; they are renormalized.
pub const FILE_PRIOR_SUM_TOL: f64 = 1e-9;

/// Keys under which a matrix document may be embedded, tried in order.
pub const MATRIX_KEYS: &[&str] = &["operator", "matrix", "filter", "unitary", "rho", "state"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Parse(format!(
                "matrix data does not have the declared shape {}x{}",
                self.rows, self.cols
            )));
        }
        let data = self
            .data
            .iter()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetFile {
    pub dim: usize,
    pub states: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
}

impl StateSetFile {
    pub fn to_state_set(&self) -> Result<StateSet> {
        if self.states.is_empty() {
            return Err(Error::DimensionMismatch("state set is empty".into()));
        }
        if let Some(i) = self.states.iter().position(|s| s.len() != self.dim) {
            return Err(Error::Parse(format!(
                "state {i} has length {}, expected {}",
                self.states[i].len(),
                self.dim
            )));
        }
        let columns: Vec<Vec<C64>> = self
            .states
            .iter()
            .map(|s| s.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        if columns
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let set = StateSet::from_columns(&columns)?;
        match &self.priors {
            None => Ok(set),
            Some(p) => {
                validate_priors(p, self.states.len(), FILE_PRIOR_SUM_TOL)?;
                let sum: f64 = p.iter().sum();
                set.with_priors(p.iter().map(|x| x / sum).collect())
            }
        }
    }
}

impl From<&StateSet> for StateSetFile {
    fn from(s: &StateSet) -> Self {
        Self {
            dim: s.dim(),
            states: (0..s.len())
                .map(|i| s.state(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            priors: s.priors().map(<[f64]>::to_vec),
        }
    }
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

/// A bare matrix document, or one embedded under a key from [`MATRIX_KEYS`].
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let value = parse_value(text)?;
    let doc = match &value {
        Value::Object(map) if !map.contains_key("rows") => MATRIX_KEYS
            .iter()
            .find_map(|k| map.get(*k).filter(|v| v.is_object()))
            .cloned()
            .ok_or_else(|| Error::Parse("no matrix document found".into()))?,
        _ => value,
    };
    from_value::<MatrixFile>(doc)?.to_matrix()
}

/// A bare state-set document, or one embedded under `"states"`.
pub fn parse_state_set(text: &str) -> Result<StateSet> {
    let value = parse_value(text)?;
    let doc = match &value {
        Value::Object(map) if !map.contains_key("dim") => map
            .get("states")
            .filter(|v| v.is_object())
            .cloned()
            .ok_or_else(|| Error::Parse("no state-set document found".into()))?,
        _ => value,
    };
    from_value::<StateSetFile>(doc)?.to_state_set()
}

/// A JSON array of matrix documents, or an object holding one under `"blocks"`.
pub fn parse_matrix_list(text: &str) -> Result<Vec<ComplexMatrix>> {
    let value = parse_value(text)?;
    let list = match value {
        Value::Object(mut map) => map
            .remove("blocks")
            .ok_or_else(|| Error::Parse("expected an array or a \"blocks\" key".into()))?,
        other => other,
    };
    from_value::<Vec<MatrixFile>>(list)?
        .iter()
        .map(MatrixFile::to_matrix)
        .collect()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&read(path)?)
}

pub fn read_state_set(path: &Path) -> Result<StateSet> {
    parse_state_set(&read(path)?)
}

pub fn read_matrix_list(path: &Path) -> Result<Vec<ComplexMatrix>> {
    parse_matrix_list(&read(path)?)
}

/// Rounds to 12 significant digits; the shortest representation of the
/// result is what gets printed.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Applies [`round_significant`] to every non-integer number in `v`.
/// Non-finite values, which JSON cannot carry, become `null`.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            *v = serde_json::Number::from_f64(round_significant(x))
                .map(Value::Number)
                .unwrap_or(Value::Null);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}
