//! Witness files: JSON-serialized interval partitions.
//!
//! A witness records the ambient count, the bounding exponent, and the
//! intervals with their optional rule labels. Squarefree endpoints
//! serialize as 0/1 vectors. A parsed witness is only a claim — attach it to
//! a recomputed poset and run the verifier to accept it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ideal::Exponent;
use crate::poset::{CharacteristicPoset, Interval, IntervalPartition};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("interval {index}: {reason}")]
    BadInterval { index: usize, reason: String },
    #[error("witness is over {got} variables, poset over {want}")]
    AmbientMismatch { got: usize, want: usize },
    #[error("witness bound {got:?} differs from poset bound {want:?}")]
    BoundMismatch { got: Vec<u32>, want: Vec<u32> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessFile {
    pub n: usize,
    pub g: Vec<u32>,
    pub intervals: Vec<WitnessInterval>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessInterval {
    pub lo: Vec<u32>,
    pub hi: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
}

impl WitnessFile {
    pub fn from_partition(part: &IntervalPartition) -> Self {
        WitnessFile {
            n: part.poset().ambient(),
            g: part.poset().bound().coords().to_vec(),
            intervals: part
                .intervals()
                .iter()
                .map(|iv| WitnessInterval {
                    lo: iv.lo().coords().to_vec(),
                    hi: iv.hi().coords().to_vec(),
                    rule: iv.rule().map(str::to_owned),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serialization")
    }

    /// Re-interpret the witness over a freshly built poset. Structural
    /// checks only; call `verify` on the result to accept it.
    pub fn attach(
        &self,
        poset: &Arc<CharacteristicPoset>,
    ) -> Result<IntervalPartition, WitnessError> {
        if self.n != poset.ambient() {
            return Err(WitnessError::AmbientMismatch { got: self.n, want: poset.ambient() });
        }
        if self.g != poset.bound().coords() {
            return Err(WitnessError::BoundMismatch {
                got: self.g.clone(),
                want: poset.bound().coords().to_vec(),
            });
        }
        let mut intervals = Vec::with_capacity(self.intervals.len());
        for (index, iv) in self.intervals.iter().enumerate() {
            if iv.lo.len() != self.n || iv.hi.len() != self.n {
                return Err(WitnessError::BadInterval {
                    index,
                    reason: format!("endpoint length differs from n={}", self.n),
                });
            }
            if iv.lo.iter().zip(&iv.hi).any(|(a, b)| a > b) {
                return Err(WitnessError::BadInterval {
                    index,
                    reason: "lo is not below hi".into(),
                });
            }
            let mut interval = Interval::new(
                Exponent::new(iv.lo.clone()),
                Exponent::new(iv.hi.clone()),
            );
            if let Some(rule) = &iv.rule {
                interval = interval.with_rule(rule.clone());
            }
            intervals.push(interval);
        }
        Ok(IntervalPartition::new(Arc::clone(poset), intervals))
    }
}

/// Parse a witness file, checking internal consistency (endpoint lengths
/// and ordering) but nothing poset-dependent.
pub fn parse_witness(text: &str) -> Result<WitnessFile, WitnessError> {
    let file: WitnessFile = serde_json::from_str(text)?;
    if file.g.len() != file.n {
        return Err(WitnessError::BadInterval {
            index: 0,
            reason: format!("bound has {} coordinates, n={}", file.g.len(), file.n),
        });
    }
    for (index, iv) in file.intervals.iter().enumerate() {
        if iv.lo.len() != file.n || iv.hi.len() != file.n {
            return Err(WitnessError::BadInterval {
                index,
                reason: format!("endpoint length differs from n={}", file.n),
            });
        }
        if iv.lo.iter().zip(&iv.hi).any(|(a, b)| a > b) {
            return Err(WitnessError::BadInterval { index, reason: "lo is not below hi".into() });
        }
        if iv.hi.iter().zip(&file.g).any(|(h, g)| h > g) {
            return Err(WitnessError::BadInterval {
                index,
                reason: "hi exceeds the bound".into(),
            });
        }
    }
    Ok(file)
}
