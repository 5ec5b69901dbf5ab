//! Noise-free covariance pair: Crawford scaling, infinite-eigenvalue
//! detection and the resulting lower bound on γ₁.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    crawford, gen_eig_homogeneous, norm, orthonormal_range, projector, spectral_norm, subspace_contains,
    ComplexMatrix,
};
use crate::mpb::{analytic_cov, AnalyticModel, ProjectionBases};
use crate::sigmodel::Realization;

/// Tolerance on the spectral-norm residual of a subspace containment test.
pub const CONTAINMENT_TOL: f64 = 1e-8;
/// Relative rank tolerance for the joint range of the noise-free pair.
const RANGE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct NoiseFreeAnalysis {
    /// Noise-free signal-channel covariance at unit INR.
    pub y_s: ComplexMatrix,
    /// Noise-free interference-channel covariance at unit INR.
    pub y_i: ComplexMatrix,
    /// Crawford number of `(Y_S, Y_I)` on their joint range, at unit INR.
    pub c_y0: f64,
    pub has_infinite: bool,
    pub infinite_count: usize,
    /// Geometric boundedness test, available when every path is periodic.
    pub bounded_by_criterion: Option<bool>,
    pub inr: f64,
}

impl NoiseFreeAnalysis {
    /// Affine coefficient of the γ₁ lower bound in INR.
    pub fn slope(&self) -> f64 {
        self.c_y0 / 2f64.sqrt()
    }
}

/// Noise-free pair normalized to unit INR, `Y = A_I Φ A_Iᴴ/(σ²·INR)`.
pub fn unit_inr_pair(model: &AnalyticModel, inr: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if model.d() == 0 {
        return Err(Error::InvalidArgument("noise-free pair needs at least one interferer".into()));
    }
    if !(inr > 0.0) {
        return Err(Error::InvalidArgument(format!("INR {inr} must be positive")));
    }
    let k = 1.0 / (model.sigma2 * inr);
    let a = &model.a_int;
    let y_s = a.matmul(&model.phi_s)?.matmul(&a.adjoint())?.scale(k).hermitian_part();
    let y_i = a.matmul(&model.phi_i)?.matmul(&a.adjoint())?.scale(k).hermitian_part();
    Ok((y_s, y_i))
}

/// Crawford number and infinite-eigenvalue analysis of the noise-free pair.
pub fn noise_free_pair(real: &Realization, bases: &ProjectionBases) -> Result<NoiseFreeAnalysis> {
    let model = analytic_cov(real, bases)?;
    let inr = real.scenario.inr();
    let (y_s, y_i) = unit_inr_pair(&model, inr)?;
    let sum = &y_s + &y_i;
    let e0 = orthonormal_range(&sum, RANGE_TOL)?;
    let c_y0 = crawford(&y_s, &y_i, Some(&e0))?;
    let homog = gen_eig_homogeneous(&y_s, &y_i)?;
    let bounded_by_criterion = match (real.all_periodic(), real.periodic_waveforms()) {
        (true, Some(s_i)) => Some(boundedness_criterion(&bases.h_s, &bases.h_i, &s_i)?),
        _ => None,
    };
    Ok(NoiseFreeAnalysis {
        y_s,
        y_i,
        c_y0,
        has_infinite: homog.has_infinite(),
        infinite_count: homog.infinite_count(),
        bounded_by_criterion,
        inr,
    })
}

/// True when γ₁ stays bounded in INR for periodic interference with one-period
/// waveforms `S_I` (N × P): the projection of `h_S` onto `range(S_I)` must lie
/// in the span of the projected interference bases.
pub fn boundedness_criterion(
    h_s: &[num_complex::Complex64],
    h_i: &ComplexMatrix,
    s_i: &ComplexMatrix,
) -> Result<bool> {
    if s_i.cols() == 0 || s_i.rows() == 0 {
        return Err(Error::InvalidArgument("empty interference waveform matrix".into()));
    }
    if s_i.rows() != h_s.len() || h_i.rows() != h_s.len() {
        return Err(Error::Dimension(format!(
            "waveforms of length {}, bases of length {}/{}",
            s_i.rows(),
            h_s.len(),
            h_i.rows()
        )));
    }
    let v = orthonormal_range(s_i, RANGE_TOL)?;
    let p = projector(&v);
    let ph_s = p.matvec(h_s)?;
    let ph_s_norm = norm(&ph_s);
    // h_S is unit norm: a rounding-level projection means h_S ⟂ V_I
    if ph_s_norm <= CONTAINMENT_TOL {
        return Ok(true);
    }
    let w = ComplexMatrix::column(&ph_s).scale(1.0 / ph_s_norm);
    let ph_i = p.matmul(h_i)?;
    let scale = spectral_norm(&ph_i)?;
    let u = if scale <= CONTAINMENT_TOL {
        ComplexMatrix::zeros(h_s.len(), 0)
    } else {
        orthonormal_range(&ph_i, CONTAINMENT_TOL / scale)?
    };
    subspace_contains(&u, &w, CONTAINMENT_TOL)
}

/// Lower bound `C_Y0·INR/√2 − 1` on γ₁, valid once `√2 < C_Y0·INR`.
pub fn gamma1_lower_bound(c_y0: f64, inr: f64) -> Result<f64> {
    if !(c_y0 * inr > 2f64.sqrt()) {
        return Err(Error::BoundNotApplicable(format!(
            "perturbation norm √2 not below Crawford number {}",
            c_y0 * inr
        )));
    }
    Ok(c_y0 * inr / 2f64.sqrt() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn unit(n: usize, k: usize) -> Vec<Complex64> {
        (0..n).map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    #[test]
    fn lower_bound_examples() {
        assert!((gamma1_lower_bound(2f64.sqrt(), 1000.0).unwrap() - 999.0).abs() < 1e-9);
        assert!(matches!(gamma1_lower_bound(1.0, 1.0), Err(Error::BoundNotApplicable(_))));
    }

    #[test]
    fn criterion_examples() {
        let s = ComplexMatrix::column(&unit(4, 0));
        // h_S orthogonal to the waveform space
        assert!(boundedness_criterion(&unit(4, 1), &ComplexMatrix::column(&unit(4, 2)), &s).unwrap());
        // H_I covers the waveform space
        assert!(boundedness_criterion(&unit(4, 0), &ComplexMatrix::column(&unit(4, 0)), &s).unwrap());
        // two waveform directions, single interference column misses h_S's projection
        let s2 = ComplexMatrix::from_columns(&[unit(4, 0), unit(4, 1)]);
        assert!(!boundedness_criterion(&unit(4, 0), &ComplexMatrix::column(&unit(4, 1)), &s2).unwrap());
        assert!(boundedness_criterion(&unit(4, 0), &ComplexMatrix::zeros(4, 1), &ComplexMatrix::zeros(4, 0)).is_err());
    }
}
