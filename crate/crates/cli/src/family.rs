//! On-disk family format: a JSON object with the dimension, the subsystem
//! matrices as nested row arrays, and optional labels.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use dwellcert_core::certificate::SubsystemFamily;
use dwellcert_core::SquareMatrix;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub d: usize,
    pub matrices: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FamilyFile {
    pub fn into_family(self) -> Result<SubsystemFamily, String> {
        let mut ms = Vec::with_capacity(self.matrices.len());
        for (i, rows) in self.matrices.iter().enumerate() {
            if rows.len() != self.d {
                return Err(format!(
                    "matrix {} has {} rows, expected d = {}",
                    i + 1,
                    rows.len(),
                    self.d
                ));
            }
            let m = SquareMatrix::from_rows(rows)
                .map_err(|e| format!("matrix {}: {e}", i + 1))?;
            ms.push(m);
        }
        let fam = match self.labels {
            Some(labels) => SubsystemFamily::with_labels(ms, labels),
            None => SubsystemFamily::new(ms),
        };
        fam.map_err(|e| e.to_string())
    }

    pub fn from_family(fam: &SubsystemFamily) -> Self {
        Self {
            d: fam.dim(),
            matrices: fam.matrices().iter().map(|m| m.rows()).collect(),
            labels: Some(fam.labels().to_vec()),
        }
    }
}

pub fn load_family(path: &Path) -> Result<SubsystemFamily, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Family {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file: FamilyFile = serde_json::from_str(&text).map_err(|e| CliError::Family {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    file.into_family().map_err(|message| CliError::Family {
        path: path.display().to_string(),
        message,
    })
}
