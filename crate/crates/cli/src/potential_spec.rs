//! Serde description of potentials for `--potential <file>` inputs,
//! mirrored by `schemas/potential.schema.json`.

use anyhow::{bail, Context, Result};
use flatband_core::potential::Segment;
use flatband_core::Potential;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One constant piece of a piecewise potential, in units of `1/m` for the
/// bounds and `m` for the depths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub x_left: f64,
    pub x_right: f64,
    #[serde(default)]
    pub v11: f64,
    #[serde(default)]
    pub v22: f64,
    #[serde(default)]
    pub v33: f64,
}

/// Tagged potential description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `V22(x) = g delta(x)`.
    Delta { g: f64 },
    /// Common-width well centered at the origin.
    Square {
        a: f64,
        #[serde(default)]
        v11: f64,
        #[serde(default)]
        v22: f64,
        #[serde(default)]
        v33: f64,
    },
    /// Disjoint constant segments.
    Piecewise { segments: Vec<SegmentSpec> },
}

impl PotentialSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading potential file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing potential file {}", path.display()))
    }

    pub fn build(&self) -> Result<Potential> {
        let p = match self {
            PotentialSpec::Delta { g } => Potential::delta(*g),
            PotentialSpec::Square { a, v11, v22, v33 } => {
                Potential::square_well(*a, *v11, *v22, *v33)
            }
            PotentialSpec::Piecewise { segments } => Potential::piecewise(
                segments
                    .iter()
                    .map(|s| Segment {
                        x_left: s.x_left,
                        x_right: s.x_right,
                        v11: s.v11,
                        v22: s.v22,
                        v33: s.v33,
                    })
                    .collect(),
            ),
        };
        p.map_err(|e| anyhow::anyhow!("invalid potential: {e}"))
    }

    /// The same potential with every nonzero depth replaced by `v` (all
    /// three depths for an all-zero pattern), used by `--sweep` runs.
    pub fn with_strength(&self, v: f64) -> Self {
        fn pick(base: f64, v: f64, any_nonzero: bool) -> f64 {
            if base != 0.0 || !any_nonzero {
                v
            } else {
                0.0
            }
        }
        match self {
            PotentialSpec::Delta { .. } => PotentialSpec::Delta { g: v },
            PotentialSpec::Square { a, v11, v22, v33 } => {
                let any = *v11 != 0.0 || *v22 != 0.0 || *v33 != 0.0;
                PotentialSpec::Square {
                    a: *a,
                    v11: pick(*v11, v, any),
                    v22: pick(*v22, v, any),
                    v33: pick(*v33, v, any),
                }
            }
            PotentialSpec::Piecewise { segments } => {
                let any = segments
                    .iter()
                    .any(|s| s.v11 != 0.0 || s.v22 != 0.0 || s.v33 != 0.0);
                PotentialSpec::Piecewise {
                    segments: segments
                        .iter()
                        .map(|s| SegmentSpec {
                            x_left: s.x_left,
                            x_right: s.x_right,
                            v11: pick(s.v11, v, any),
                            v22: pick(s.v22, v, any),
                            v33: pick(s.v33, v, any),
                        })
                        .collect(),
                }
            }
        }
    }

    /// Resolve from inline flags or a JSON file; exactly one source.
    pub fn from_cli(
        file: Option<&Path>,
        g: Option<f64>,
        a: Option<f64>,
        v11: f64,
        v22: f64,
        v33: f64,
    ) -> Result<Self> {
        match (file, g, a) {
            (Some(path), None, None) => PotentialSpec::load(path),
            (None, Some(g), None) => Ok(PotentialSpec::Delta { g }),
            (None, None, Some(a)) => Ok(PotentialSpec::Square { a, v11, v22, v33 }),
            (None, None, None) => {
                bail!("specify a potential: --potential <file>, --g <g>, or --a <a> with depths")
            }
            _ => bail!("--potential, --g, and --a are mutually exclusive"),
        }
    }
}
