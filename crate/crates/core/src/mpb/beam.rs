use num_complex::Complex64;
use serde::Serialize;

use super::cov::{AnalyticModel, CovariancePair};
use crate::error::{Error, Result};
use crate::linalg::{dot, gen_eig_hpd, hpd_solve_vec, norm, ComplexMatrix};
use crate::sigmodel::{steering_unchecked, ArrayGeometry};

#[derive(Clone, Debug)]
pub struct BeamWeights {
    /// Unit-norm weight vector.
    pub w: Vec<Complex64>,
    pub lambda_max: f64,
    /// All generalized eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
}

/// Dominant generalized eigenvector of `(R_S, R_I)`.
///
/// When several eigenvalues sit within `1e-8` (relative) of the largest, the
/// one with the largest `|wᴴa0|` is taken if `a0` is supplied, else the first.
pub fn solve_weights(pair: &CovariancePair, a0: Option<&[Complex64]>) -> Result<BeamWeights> {
    let eig = gen_eig_hpd(&pair.r_s, &pair.r_i).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::Singular(format!("interference-channel covariance: {e}")),
        other => other,
    })?;
    let lmax = eig.values[0];
    let tol = 1e-8 * lmax.abs().max(f64::MIN_POSITIVE);
    let mut pick = 0;
    if let Some(a0) = a0 {
        let mut best = -1.0;
        for k in 0..eig.len() {
            if lmax - eig.values[k] > tol {
                break;
            }
            let v = eig.vector(k);
            let score = dot(&v, a0).norm() / norm(&v);
            if score > best {
                best = score;
                pick = k;
            }
        }
    }
    let v = eig.vector(pick);
    let nv = norm(&v);
    Ok(BeamWeights { w: v.iter().map(|z| z / nv).collect(), lambda_max: lmax, eigenvalues: eig.values })
}

/// `σ_S0²·a0ᴴ Q_S⁻¹ a0`.
pub fn sinr_opt(q_s: &ComplexMatrix, a0: &[Complex64], sigma_s0_sq: f64) -> Result<f64> {
    let y = hpd_solve_vec(q_s, a0).map_err(|e| Error::Singular(format!("Q_S: {e}")))?;
    Ok(sigma_s0_sq * dot(a0, &y).re)
}

/// Output SINR of `w` against the interference-plus-noise covariance `q`.
pub fn output_sinr(w: &[Complex64], a0: &[Complex64], sigma_s0_sq: f64, q: &ComplexMatrix) -> Result<f64> {
    let den = q.form(w, w).re;
    if !(den > 0.0) {
        return Err(Error::Singular("zero interference-plus-noise output power".into()));
    }
    Ok(sigma_s0_sq * dot(w, a0).norm_sqr() / den)
}

/// Normalized output SINR with exact statistics.
pub fn g_analytic(w: &[Complex64], model: &AnalyticModel) -> Result<f64> {
    let opt = sinr_opt(&model.q_s, &model.a0, model.sigma_s0_sq)?;
    Ok(output_sinr(w, &model.a0, model.sigma_s0_sq, &model.q_s)? / opt)
}

/// Normalized output SINR with the interference-plus-noise power measured
/// from the simulated signal-channel snapshots (`r_zs`).
///
/// The signal-only output power `σ_S0²|wᴴa0|²` needs no averaging since `b0² = 1`.
pub fn g_monte_carlo(w: &[Complex64], model: &AnalyticModel, r_zs: &ComplexMatrix) -> Result<f64> {
    let opt = sinr_opt(&model.q_s, &model.a0, model.sigma_s0_sq)?;
    Ok(output_sinr(w, &model.a0, model.sigma_s0_sq, r_zs)? / opt)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PatternPoint {
    pub theta_deg: f64,
    pub gain_db: f64,
}

/// `20·log₁₀|wᴴa(θ)|`, normalized to a 0 dB peak over the grid.
pub fn array_pattern(w: &[Complex64], geom: &ArrayGeometry, theta_grid: &[f64]) -> Vec<PatternPoint> {
    let resp: Vec<f64> = theta_grid.iter().map(|&t| dot(w, &steering_unchecked(t, geom)).norm()).collect();
    let peak = resp.iter().cloned().fold(0.0, f64::max);
    theta_grid
        .iter()
        .zip(resp)
        .map(|(&theta_deg, r)| PatternPoint { theta_deg, gain_db: 20.0 * (r / peak).log10() })
        .collect()
}

/// Grid from `-90°` to `90°` in `step` increments.
pub fn theta_grid(step: f64) -> Vec<f64> {
    let n = (180.0 / step).round() as usize;
    (0..=n).map(|i| -90.0 + i as f64 * step).collect()
}
