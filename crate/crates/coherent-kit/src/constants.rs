use crate::error::{KitError, Result};

/// Physical scales of the problem: the reduced action quantum, the particle
/// mass, and the length scale used to make position and momentum
/// dimensionless. All default to 1 so results read in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
    pub lambda: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64, lambda: f64) -> Result<Self> {
        for (name, value) in [("hbar", hbar), ("mass", mass), ("lambda", lambda)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(KitError::BadConstant { name, value });
            }
        }
        Ok(Self { hbar, mass, lambda })
    }

    /// Position width of a coherent state, lambda / sqrt(2).
    pub fn coherent_delta_x(&self) -> f64 {
        self.lambda / std::f64::consts::SQRT_2
    }

    /// Momentum width of a coherent state, hbar / (sqrt(2) lambda).
    pub fn coherent_delta_p(&self) -> f64 {
        self.hbar / (std::f64::consts::SQRT_2 * self.lambda)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            lambda: 1.0,
        }
    }
}
