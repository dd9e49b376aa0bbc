use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub z_start: f64,
    pub z_end: f64,
    #[serde(rename = "V")]
    pub v: f64,
}

/// Declarative 1D potential energy (natural units unless stated otherwise).
///
/// JSON form is internally tagged by `kind`:
///
/// ```json
/// {"kind": "piecewise", "segments": [{"z_start": -5, "z_end": 0, "V": 0}, ...]}
/// {"kind": "harmonic", "stiffness": 1.0, "center": 0.0}
/// {"kind": "linear", "force": 0.1}
/// {"kind": "free"}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// Contiguous constant segments. For scattering the first and last
    /// segments are the asymptotic leads.
    Piecewise {
        segments: Vec<Segment>,
    },
    /// `V = ½·stiffness·(z − center)²`.
    Harmonic {
        stiffness: f64,
        #[serde(default)]
        center: f64,
    },
    /// `V = −force·(z − origin)`, a uniform force field.
    Linear {
        force: f64,
        #[serde(default)]
        origin: f64,
    },
    Free {},
}

impl Default for PotentialSpec {
    fn default() -> Self {
        PotentialSpec::Free {}
    }
}

impl PotentialSpec {
    pub fn rectangular_barrier(height: f64, width: f64) -> Self {
        let lead = 1.0_f64.max(width);
        PotentialSpec::Piecewise {
            segments: vec![
                Segment { z_start: -lead, z_end: 0.0, v: 0.0 },
                Segment { z_start: 0.0, z_end: width, v: height },
                Segment { z_start: width, z_end: width + lead, v: 0.0 },
            ],
        }
    }

    pub fn step(height: f64) -> Self {
        PotentialSpec::Piecewise {
            segments: vec![
                Segment { z_start: -1.0, z_end: 0.0, v: 0.0 },
                Segment { z_start: 0.0, z_end: 1.0, v: height },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("potential parameter {what} is not finite")))
            }
        };
        match self {
            PotentialSpec::Piecewise { segments } => {
                if segments.is_empty() {
                    return Err(Error::config("piecewise potential needs at least one segment"));
                }
                for (i, s) in segments.iter().enumerate() {
                    finite(s.z_start, "z_start")?;
                    finite(s.z_end, "z_end")?;
                    finite(s.v, "V")?;
                    if !(s.z_end > s.z_start) {
                        return Err(Error::config(format!(
                            "segment {i} has non-positive width [{}, {}]",
                            s.z_start, s.z_end
                        )));
                    }
                }
                for (i, w) in segments.windows(2).enumerate() {
                    let gap = (w[1].z_start - w[0].z_end).abs();
                    if gap > 1e-12 * w[0].z_end.abs().max(1.0) {
                        return Err(Error::config(format!(
                            "segments {i} and {} are not contiguous ({} vs {})",
                            i + 1,
                            w[0].z_end,
                            w[1].z_start
                        )));
                    }
                }
                Ok(())
            }
            PotentialSpec::Harmonic { stiffness, center } => {
                finite(*stiffness, "stiffness")?;
                finite(*center, "center")
            }
            PotentialSpec::Linear { force, origin } => {
                finite(*force, "force")?;
                finite(*origin, "origin")
            }
            PotentialSpec::Free {} => Ok(()),
        }
    }

    /// Potential at `z`. Piecewise potentials extend their end segments
    /// beyond the described domain.
    pub fn eval(&self, z: f64) -> f64 {
        match self {
            PotentialSpec::Piecewise { segments } => {
                let idx = segments.partition_point(|s| s.z_end <= z);
                segments[idx.min(segments.len() - 1)].v
            }
            PotentialSpec::Harmonic { stiffness, center } => 0.5 * stiffness * (z - center).powi(2),
            PotentialSpec::Linear { force, origin } => -force * (z - origin),
            PotentialSpec::Free {} => 0.0,
        }
    }

    pub fn sample(&self, z: &[f64]) -> Vec<f64> {
        z.iter().map(|&z| self.eval(z)).collect()
    }

    pub fn is_mirror_symmetric_about(&self, center: f64, z_half: f64) -> bool {
        (0..64).all(|i| {
            let d = z_half * i as f64 / 64.0;
            (self.eval(center + d) - self.eval(center - d)).abs() < 1e-12
        })
    }
}
