use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{IfmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelKind {
    Opaque,
    Transparent,
    SemiTransparent,
}

/// The imaged object: one intensity transmission `T_ℓ ∈ [0, 1]` per pixel.
///
/// Opaque means `T = 0` exactly and transparent means `T = 1` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PixelPattern {
    transmissions: Vec<f64>,
}

impl PixelPattern {
    pub fn from_transmissions(transmissions: Vec<f64>) -> Result<Self> {
        if transmissions.is_empty() {
            return Err(IfmError::ZeroDimension);
        }
        for (pixel, &value) in transmissions.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(IfmError::TransmissionOutOfRange { pixel, value });
            }
        }
        Ok(Self { transmissions })
    }

    /// `true` marks an opaque pixel.
    pub fn from_occupancy(bits: &[bool]) -> Result<Self> {
        Self::from_transmissions(bits.iter().map(|&b| if b { 0.0 } else { 1.0 }).collect())
    }

    pub fn transparent(dim: usize) -> Result<Self> {
        Self::from_transmissions(vec![1.0; dim])
    }

    pub fn uniform(dim: usize, transmission: f64) -> Result<Self> {
        Self::from_transmissions(vec![transmission; dim])
    }

    pub fn dim(&self) -> usize {
        self.transmissions.len()
    }

    pub fn transmissions(&self) -> &[f64] {
        &self.transmissions
    }

    pub fn transmission(&self, pixel: usize) -> f64 {
        self.transmissions[pixel]
    }

    pub fn kind(&self, pixel: usize) -> PixelKind {
        let t = self.transmissions[pixel];
        if t == 0.0 {
            PixelKind::Opaque
        } else if t == 1.0 {
            PixelKind::Transparent
        } else {
            PixelKind::SemiTransparent
        }
    }

    /// Occupancy bit `f_ℓ`; semi-transparent pixels report 0.
    pub fn occupancy(&self, pixel: usize) -> u8 {
        u8::from(self.kind(pixel) == PixelKind::Opaque)
    }

    pub fn is_binary(&self) -> bool {
        (0..self.dim()).all(|l| self.kind(l) != PixelKind::SemiTransparent)
    }

    /// Number of opaque pixels.
    pub fn opaque_count(&self) -> usize {
        (0..self.dim()).filter(|&l| self.occupancy(l) == 1).count()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(IfmError::PatternLength {
                expected: dim,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for PixelPattern {
    type Error = IfmError;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::from_transmissions(value)
    }
}

impl From<PixelPattern> for Vec<f64> {
    fn from(p: PixelPattern) -> Self {
        p.transmissions
    }
}

/// Bit-string form, `1` for opaque. Semi-transparent pixels print as `?`.
impl fmt::Display for PixelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 0..self.dim() {
            let c = match self.kind(l) {
                PixelKind::Opaque => '1',
                PixelKind::Transparent => '0',
                PixelKind::SemiTransparent => '?',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses a bit string such as `1010`.
impl FromStr for PixelPattern {
    type Err = IfmError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .enumerate()
            .map(|(pixel, c)| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(IfmError::TransmissionOutOfRange {
                    pixel,
                    value: f64::NAN,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_occupancy(&bits)
    }
}
