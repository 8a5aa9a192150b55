//! JSON file formats shared by the CLI and the library.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cone::{PseudoMomentSequence, SemialgebraicProblem};
use crate::error::{Error, Result};
use crate::poly::{basis_size, MultiIndex};

/// `{"n": 2, "moments": [{"alpha": [0, 0], "y": 1.0}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentTable {
    pub n: usize,
    pub moments: Vec<MomentEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentEntry {
    pub alpha: Vec<u32>,
    pub y: f64,
}

impl From<&PseudoMomentSequence> for MomentTable {
    fn from(y: &PseudoMomentSequence) -> Self {
        MomentTable {
            n: y.dim(),
            moments: y
                .basis()
                .elements()
                .iter()
                .zip(y.values())
                .map(|(a, &v)| MomentEntry {
                    alpha: a.exponents().to_vec(),
                    y: v,
                })
                .collect(),
        }
    }
}

impl MomentTable {
    /// The table as a full sequence; it must list every moment up to its
    /// largest degree exactly once.
    pub fn to_sequence(&self) -> Result<PseudoMomentSequence> {
        let degree = self.moments.iter().map(|e| e.alpha.iter().sum::<u32>() as usize).max().unwrap_or(0);
        let want = basis_size(self.n, degree);
        if self.moments.len() != want {
            return Err(Error::InvalidArgument(format!(
                "moment table lists {} entries; degree {degree} needs {want}",
                self.moments.len()
            )));
        }
        let mut values = vec![f64::NAN; want];
        let basis = crate::poly::MonomialBasis::new(self.n, degree);
        for e in &self.moments {
            if e.alpha.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: e.alpha.len(),
                });
            }
            let k = basis
                .index_of(&MultiIndex::new(e.alpha.clone()))
                .expect("degree bounded by construction");
            values[k] = e.y;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidArgument("moment table has duplicate entries".into()));
        }
        PseudoMomentSequence::new(self.n, degree, values)
    }
}

pub fn read_problem(path: &Path) -> Result<SemialgebraicProblem> {
    SemialgebraicProblem::from_json(&std::fs::read_to_string(path)?)
}

pub fn read_moments(path: &Path) -> Result<PseudoMomentSequence> {
    let t: MomentTable = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    t.to_sequence()
}

pub fn write_moments(path: &Path, y: &PseudoMomentSequence) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&MomentTable::from(y))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::AtomicMeasure;

    #[test]
    fn moment_table_round_trip() {
        let y = AtomicMeasure::dirac(vec![0.5, -0.25]).moments(3);
        let t = MomentTable::from(&y);
        let text = serde_json::to_string(&t).unwrap();
        let back: MomentTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_sequence().unwrap(), y);
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let t = MomentTable {
            n: 1,
            moments: vec![MomentEntry { alpha: vec![0], y: 1.0 }, MomentEntry { alpha: vec![2], y: 1.0 }],
        };
        assert!(t.to_sequence().is_err());
    }
}
