use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{LineDescription, LineError, SegmentParams};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Line(#[from] LineError),
}

/// A value given once for every segment, or one array per part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerPart<T> {
    Uniform(T),
    Parts(Vec<Vec<T>>),
}

impl<T: Copy> PerPart<T> {
    fn expand(&self, key: &str, n: [usize; 3]) -> Result<[Vec<T>; 3], LineError> {
        match self {
            PerPart::Uniform(v) => Ok(n.map(|k| vec![*v; k])),
            PerPart::Parts(parts) => {
                if parts.len() != 3 {
                    return Err(LineError::BadParameter {
                        key: key.to_string(),
                        reason: format!("expected 3 per-part arrays, got {}", parts.len()),
                    });
                }
                for (u, p) in parts.iter().enumerate() {
                    if p.len() != n[u] {
                        return Err(LineError::BadParameter {
                            key: format!("{key}[{u}]"),
                            reason: format!("{} entries, expected n{u} = {}", p.len(), n[u]),
                        });
                    }
                }
                Ok([parts[0].clone(), parts[1].clone(), parts[2].clone()])
            }
        }
    }
}

/// On-disk line description (JSON or TOML). Times in seconds.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineConfig {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_lower: Option<PerPart<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_lower: Option<PerPart<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_lower: Option<PerPart<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_lower: Option<PerPart<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_lower: Option<PerPart<f64>>,
    /// Occupancy per part, one 0/1 entry per segment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<usize>,
}

impl LineConfig {
    pub fn from_json_str(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Read a `.json` or `.toml` file; other extensions try JSON, then TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            Some("toml") => Self::from_toml_str(&text),
            _ => Self::from_json_str(&text).or_else(|_| Self::from_toml_str(&text)),
        };
        parsed.map_err(|message| ConfigError::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Build the line. Validation of values is left to `LineDescription::validate`.
    pub fn to_line<S: Scalar>(&self) -> Result<LineDescription<S>, LineError> {
        let n = [self.n0, self.n1, self.n2];
        let conv = |key: &str, v: f64| {
            S::from_f64(v).ok_or_else(|| LineError::BadParameter {
                key: key.to_string(),
                reason: format!("{v} is not representable"),
            })
        };
        let direct = self.t_lower.is_some() || self.s_lower.is_some();
        let components = self.r_lower.is_some() || self.w_lower.is_some() || self.g_lower.is_some();
        let segments: [Vec<SegmentParams<S>>; 3] = match (direct, components) {
            (true, true) => {
                return Err(LineError::BadParameter {
                    key: "t_lower".into(),
                    reason: "give either t_lower/s_lower or r_lower/w_lower/g_lower, not both".into(),
                })
            }
            (false, false) => {
                return Err(LineError::BadParameter {
                    key: "t_lower".into(),
                    reason: "missing segment parameters".into(),
                })
            }
            (true, false) => {
                let t = required(&self.t_lower, "t_lower")?.expand("t_lower", n)?;
                let s = required(&self.s_lower, "s_lower")?.expand("s_lower", n)?;
                let mut out: [Vec<SegmentParams<S>>; 3] = Default::default();
                for u in 0..3 {
                    for (tv, sv) in t[u].iter().zip(&s[u]) {
                        out[u].push(SegmentParams::new(conv("t_lower", *tv)?, conv("s_lower", *sv)?));
                    }
                }
                out
            }
            (false, true) => {
                let r = required(&self.r_lower, "r_lower")?.expand("r_lower", n)?;
                let w = required(&self.w_lower, "w_lower")?.expand("w_lower", n)?;
                let g = required(&self.g_lower, "g_lower")?.expand("g_lower", n)?;
                let mut out: [Vec<SegmentParams<S>>; 3] = Default::default();
                for u in 0..3 {
                    for k in 0..n[u] {
                        out[u].push(SegmentParams::from_components(
                            conv("r_lower", r[u][k])?,
                            conv("w_lower", w[u][k])?,
                            conv("g_lower", g[u][k])?,
                        ));
                    }
                }
                out
            }
        };
        let shorthand = [self.m0, self.m1, self.m2];
        let empty = LineDescription::new(n, segments, n.map(|k| vec![0; k]));
        match (&self.b, shorthand.iter().any(Option::is_some)) {
            (Some(_), true) => Err(LineError::BadOccupancy {
                key: "b".into(),
                reason: "give either b or m0/m1/m2, not both".into(),
            }),
            (Some(b), false) => {
                if b.len() != 3 {
                    return Err(LineError::BadOccupancy {
                        key: "b".into(),
                        reason: format!("expected 3 per-part arrays, got {}", b.len()),
                    });
                }
                let mut line = empty;
                for (u, part) in b.iter().enumerate() {
                    let row = part
                        .iter()
                        .enumerate()
                        .map(|(k, &v)| {
                            u8::try_from(v).map_err(|_| LineError::BadOccupancy {
                                key: "b".into(),
                                reason: format!("segment ({u},{}) must be 0 or 1, got {v}", k + 1),
                            })
                        })
                        .collect::<Result<Vec<u8>, _>>()?;
                    line.set_occupancy(u, row);
                }
                Ok(line)
            }
            (None, _) => empty.with_part_counts(shorthand.map(|m| m.unwrap_or(0))),
        }
    }
}

fn required<'a, T>(v: &'a Option<PerPart<T>>, key: &str) -> Result<&'a PerPart<T>, LineError> {
    v.as_ref().ok_or_else(|| LineError::BadParameter {
        key: key.to_string(),
        reason: "missing".into(),
    })
}

impl<S: Scalar> LineDescription<S> {
    /// Load and validate a line from a config file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let line = LineConfig::load(path)?.to_line()?;
        line.validate()?;
        Ok(line)
    }
}
