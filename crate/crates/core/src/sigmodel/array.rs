use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform linear array.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayGeometry {
    pub elements: usize,
    /// Element spacing in wavelengths.
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

fn default_spacing() -> f64 {
    0.5
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self { elements: 8, spacing: 0.5 }
    }
}

impl ArrayGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.elements < 2 {
            return Err(Error::Config(format!("array needs at least 2 elements, got {}", self.elements)));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::Config(format!("element spacing must be positive, got {}", self.spacing)));
        }
        Ok(())
    }
}

/// `a[l] = exp(j·2π·d·l·sin θ)`, so `‖a‖² = L`.
pub fn steering(doa_deg: f64, geom: &ArrayGeometry) -> Result<Vec<Complex64>> {
    if !(doa_deg.abs() < 90.0) {
        return Err(Error::InvalidArgument(format!("DOA {doa_deg}° outside (-90°, 90°)")));
    }
    Ok(steering_unchecked(doa_deg, geom))
}

/// Steering vector without the endfire check (used for pattern grids that include ±90°).
pub fn steering_unchecked(doa_deg: f64, geom: &ArrayGeometry) -> Vec<Complex64> {
    let k = 2.0 * std::f64::consts::PI * geom.spacing * doa_deg.to_radians().sin();
    (0..geom.elements).map(|l| Complex64::from_polar(1.0, k * l as f64)).collect()
}
