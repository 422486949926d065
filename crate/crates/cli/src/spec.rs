//! Channel specification files.
//!
//! ```json
//! { "name": "bit-flip", "dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]] }
//! { "name": "pxy", "dim": 2, "catalog": { "entry": "pauli-xy", "params": { "p": 0.3 } } }
//! ```
//!
//! Exactly one of `kraus` and `catalog` must be present.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use ergochan::catalog::{lookup, ENTRY_NAMES};
use ergochan::{Channel, Matrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::json::{matrix_from_json, matrix_to_json, MatrixJson};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRef {
    pub entry: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpecFile {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogRef>,
}

impl ChannelSpecFile {
    /// Explicit-Kraus spec of an existing channel.
    pub fn from_channel(ch: &Channel) -> Self {
        Self {
            name: ch.label().to_owned(),
            dim: ch.dim(),
            kraus: Some(ch.kraus().iter().map(matrix_to_json).collect()),
            catalog: None,
        }
    }

    /// Check the schema invariants and construct the channel.
    pub fn build(&self) -> Result<Channel> {
        if self.dim == 0 {
            return Err(CliError::Validation("dim must be positive".into()));
        }
        let ch = match (&self.kraus, &self.catalog) {
            (Some(kraus), None) => {
                if kraus.is_empty() {
                    return Err(CliError::Validation("kraus must list at least one operator".into()));
                }
                let ops = kraus
                    .iter()
                    .enumerate()
                    .map(|(k, m)| matrix_from_json(m, self.dim, &format!("kraus[{k}]")))
                    .collect::<Result<Vec<Matrix>>>()?;
                Channel::new(self.name.clone(), ops)?
            }
            (None, Some(cat)) => {
                if !ENTRY_NAMES.contains(&cat.entry.as_str()) {
                    return Err(CliError::Lookup(cat.entry.clone()));
                }
                lookup(&cat.entry, &cat.params)?
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Validation("spec has both `kraus` and `catalog`".into()));
            }
            (None, None) => {
                return Err(CliError::Validation("spec needs one of `kraus` or `catalog`".into()));
            }
        };
        if ch.dim() != self.dim {
            return Err(CliError::Validation(format!(
                "spec declares dim {} but the channel acts on dimension {}",
                self.dim,
                ch.dim()
            )));
        }
        Ok(ch)
    }
}

/// Parse spec text; `origin` labels error messages.
pub fn parse_spec(text: &str, origin: &str) -> Result<ChannelSpecFile> {
    serde_json::from_str(text).map_err(|e| CliError::Format {
        origin: origin.to_owned(),
        message: e.to_string(),
    })
}

pub fn read_spec(path: &Path) -> Result<ChannelSpecFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spec(&text, &path.display().to_string())
}

/// Read, validate and build the channel described by a spec file.
pub fn load_spec(path: &Path) -> Result<Channel> {
    read_spec(path)?.build()
}

/// Read a `dim × dim` matrix stored as nested `[re, im]` pairs.
pub fn load_matrix(path: &Path, dim: usize) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let m: MatrixJson = serde_json::from_str(&text).map_err(|e| CliError::Format {
        origin: path.display().to_string(),
        message: e.to_string(),
    })?;
    matrix_from_json(&m, dim, "state")
}
