//! Per-pixel 2×2 cycle map acting on the (H, V) amplitudes of one OAM value.

use crate::error::{IfmError, Result};

/// Row-major real 2×2 matrix.
pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// `m^n` by repeated squaring.
pub fn mat_pow(m: &Mat2, mut n: usize) -> Mat2 {
    let mut result = IDENTITY;
    let mut base = *m;
    while n > 0 {
        if n & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        n >>= 1;
        if n > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

/// One cycle for a pixel of transmission `T`: rotate by `θ`, then attenuate
/// the V amplitude by `√T`.
///
/// ```text
/// m = [[ cos θ,     −sin θ    ],
///      [ √T sin θ,  √T cos θ  ]]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiTransparentBlock {
    transmission: f64,
    theta: f64,
}

impl SemiTransparentBlock {
    pub fn new(transmission: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmission) {
            return Err(IfmError::TransmissionOutOfRange {
                pixel: 0,
                value: transmission,
            });
        }
        if !theta.is_finite() {
            return Err(IfmError::InvalidAngle(theta));
        }
        Ok(Self {
            transmission,
            theta,
        })
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn matrix(&self) -> Mat2 {
        let (s, c) = self.theta.sin_cos();
        let t = self.transmission.sqrt();
        [[c, -s], [t * s, t * c]]
    }

    pub fn power(&self, cycles: usize) -> Mat2 {
        mat_pow(&self.matrix(), cycles)
    }

    /// `(c_h, c_v)` after `cycles` cycles starting from pure H with unit amplitude.
    pub fn evolve_from_h(&self, cycles: usize) -> (f64, f64) {
        let m = self.power(cycles);
        (m[0][0], m[1][0])
    }
}
