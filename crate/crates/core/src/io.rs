//! JSON system and signal files.
//!
//! System: `{"n": 2, "subsystems": [{"A": [[..], ..], "b": [..]}, ..]}`, with
//! `b` optional (zero when omitted).
//!
//! Signal: `{"segments": [{"index": 1, "duration": 2.0}, ..], "eta": 1.0}`,
//! with one-based indices and `eta` optional (default 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::model::{SubSystem, SwitchedSystem};
use crate::signals::{PeriodicSignal, Segment};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsystemSpec {
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n: usize,
    pub subsystems: Vec<SubsystemSpec>,
}

impl SystemSpec {
    pub fn from_system(system: &SwitchedSystem) -> Self {
        Self {
            n: system.dim(),
            subsystems: system
                .subsystems()
                .iter()
                .map(|s| SubsystemSpec {
                    a: s.a().clone(),
                    b: (!s.is_linear()).then(|| s.b().clone()),
                })
                .collect(),
        }
    }

    pub fn into_system(self) -> Result<SwitchedSystem> {
        let n = self.n;
        let subsystems = self
            .subsystems
            .into_iter()
            .map(|s| {
                if s.a.rows() != n {
                    return Err(Error::Dimension {
                        context: "declared state dimension",
                        expected: n,
                        found: s.a.rows(),
                    });
                }
                match s.b {
                    Some(b) => SubSystem::new(s.a, b),
                    None => SubSystem::linear(s.a),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SwitchedSystem::new(subsystems)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub index: usize,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub segments: Vec<SegmentSpec>,
    #[serde(default = "default_eta")]
    pub eta: f64,
}

fn default_eta() -> f64 {
    1.0
}

impl SignalSpec {
    pub fn from_signal(signal: &PeriodicSignal, eta: f64) -> Self {
        Self {
            segments: signal
                .segments()
                .iter()
                .map(|s| SegmentSpec {
                    index: s.index + 1,
                    duration: s.duration,
                })
                .collect(),
            eta,
        }
    }

    /// Unscaled signal shape; apply `eta` separately.
    pub fn shape(&self) -> Result<PeriodicSignal> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                if s.index == 0 {
                    Err(Error::InvalidSignal("segment indices are one-based".into()))
                } else {
                    Ok(Segment::new(s.index - 1, s.duration))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PeriodicSignal::new(segments)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Invalid { path: String, source: Error },
}

pub fn parse_system(json: &str) -> std::result::Result<SwitchedSystem, IoError> {
    let spec: SystemSpec = serde_json::from_str(json).map_err(|source| IoError::Parse {
        path: "<system>".into(),
        source,
    })?;
    spec.into_system().map_err(|source| IoError::Invalid {
        path: "<system>".into(),
        source,
    })
}

pub fn parse_signal(json: &str) -> std::result::Result<(PeriodicSignal, f64), IoError> {
    let spec: SignalSpec = serde_json::from_str(json).map_err(|source| IoError::Parse {
        path: "<signal>".into(),
        source,
    })?;
    let shape = spec.shape().map_err(|source| IoError::Invalid {
        path: "<signal>".into(),
        source,
    })?;
    Ok((shape, spec.eta))
}

fn with_path(e: IoError, path: &str) -> IoError {
    match e {
        IoError::Parse { source, .. } => IoError::Parse {
            path: path.into(),
            source,
        },
        IoError::Invalid { source, .. } => IoError::Invalid {
            path: path.into(),
            source,
        },
        other => other,
    }
}

fn read(path: &std::path::Path) -> std::result::Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_system(path: &std::path::Path) -> std::result::Result<SwitchedSystem, IoError> {
    parse_system(&read(path)?).map_err(|e| with_path(e, &path.display().to_string()))
}

pub fn load_signal(path: &std::path::Path) -> std::result::Result<(PeriodicSignal, f64), IoError> {
    parse_signal(&read(path)?).map_err(|e| with_path(e, &path.display().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::signals::example_signal;

    #[test]
    fn omitted_b_means_linear() {
        let sys = parse_system(
            r#"{"n": 1, "subsystems": [{"A": [[-1.0]]}, {"A": [[2.0]], "b": [3.0]}]}"#,
        )
        .unwrap();
        assert!(sys.subsystems()[0].is_linear());
        assert_eq!(sys.subsystems()[1].b().as_slice(), &[3.0]);
    }

    #[test]
    fn declared_dimension_is_checked() {
        let err = parse_system(r#"{"n": 3, "subsystems": [{"A": [[1.0, 0.0], [0.0, 1.0]]}]}"#)
            .unwrap_err();
        assert!(matches!(err, IoError::Invalid { .. }));
        let err =
            parse_system(r#"{"n": 2, "subsystems": [{"A": [[1.0, 0.0], [0.0]]}]}"#).unwrap_err();
        assert!(matches!(err, IoError::Parse { .. }));
    }

    #[test]
    fn signal_indices_are_one_based() {
        let (sig, eta) = parse_signal(
            r#"{"segments": [{"index": 1, "duration": 2.0}, {"index": 2, "duration": 2.0}]}"#,
        )
        .unwrap();
        assert_eq!(eta, 1.0);
        assert_eq!(sig, example_signal(1.0).unwrap());
        assert!(parse_signal(r#"{"segments": [{"index": 0, "duration": 1.0}]}"#).is_err());
        assert!(parse_signal(r#"{"segments": [{"index": 1, "duration": -1.0}]}"#).is_err());
    }

    #[test]
    fn system_round_trip() {
        for sys in [
            presets::example_one(),
            presets::example_two(),
            presets::example_one().linear_part(),
        ] {
            let json = serde_json::to_string(&SystemSpec::from_system(&sys)).unwrap();
            assert_eq!(parse_system(&json).unwrap(), sys);
        }
    }

    #[test]
    fn signal_round_trip() {
        let sig = example_signal(1.0).unwrap();
        let json = serde_json::to_string(&SignalSpec::from_signal(&sig, 0.5)).unwrap();
        let (back, eta) = parse_signal(&json).unwrap();
        assert_eq!(back, sig);
        assert_eq!(eta, 0.5);
    }
}
