//! Exact mismatch spectrum at a given SNR, the competition matrix `M`, the
//! λ_max bound and the closed-form G(λ_max).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, f_bound, gamma_pm, gen_eig_hpd, hpd_inverse, simultaneous_diag, ComplexMatrix};
use crate::mpb::AnalyticModel;

use super::curve::gamma0;

#[derive(Clone, Debug, Serialize)]
pub struct MismatchSpectrum {
    pub snr: f64,
    /// `(σ_S0² − σ_I0²)·a0ᴴR_I⁻¹a0`.
    pub gamma0: f64,
    /// Large-array approximation `(N − β)L·snr/(Lβ·snr + N)`.
    pub gamma0_approx: f64,
    /// Diagonal of `TᴴΦ_ΔT` with `TᴴWT = I`, `W = (A_IᴴR_I⁻¹A_I)⁻¹`; descending.
    pub gammas: Vec<f64>,
    pub beta: f64,
    /// `(σ²/L)|ψ_T1|²/(Lβ·snr/N + 1)`.
    pub delta: f64,
    /// `|ψ̃_1|²/(a0ᴴR_I⁻¹a0)`: the coupling of the two competing diagonal
    /// entries of `M`, normalized so that their off-diagonal product is
    /// `γ0·γ1·δ`. Equals `delta` when `a0ᴴR_I⁻¹a0 = (L/σ²)/(Lβ·snr/N + 1)`.
    pub delta_coupling: f64,
    pub psi_t: Vec<Complex64>,
    /// `A_εᴴR_I⁻¹a0` with `A_ε = A_I T⁻ᴴ`.
    pub psi_t_tilde: Vec<Complex64>,
    pub kappa0: f64,
    pub lambda_max_pred: f64,
    pub bound_radius: f64,
    pub feasible: bool,
    pub sigma2: f64,
    pub l: usize,
    pub n: usize,
}

impl MismatchSpectrum {
    pub fn gamma1(&self) -> f64 {
        self.gammas.first().copied().unwrap_or(0.0)
    }

    /// `Lβ·snr/N + 1`.
    pub fn leak_factor(&self) -> f64 {
        self.l as f64 * self.beta * self.snr / self.n as f64 + 1.0
    }
}

/// Evaluates all spectrum ingredients exactly from the model at input SNR `snr`.
pub fn mismatch_spectrum(model: &AnalyticModel, snr: f64) -> Result<MismatchSpectrum> {
    let m = model.with_snr(snr);
    let (l, n, d) = (m.l, m.n, m.d());
    let ri_inv = hpd_inverse(&m.r_i())?;
    let ri_a0 = ri_inv.matvec(&m.a0)?;
    let g0 = (m.sigma_s0_sq - m.sigma_i0_sq) * dot(&m.a0, &ri_a0).re;
    let g0_approx = gamma0(snr, l, n, m.beta)?;
    let leak = l as f64 * m.beta * snr / n as f64 + 1.0;
    let (gammas, psi_t_tilde) = if d == 0 {
        (Vec::new(), Vec::new())
    } else {
        let w = hpd_inverse(&m.a_int.adj_mul(&ri_inv.matmul(&m.a_int)?)?)?;
        let sd = simultaneous_diag(&m.phi_delta(), &w)?;
        let y = w.matvec(&m.a_int.adj_matvec(&ri_a0)?)?;
        (sd.gamma, sd.t.adj_matvec(&y)?)
    };
    let psi_t: Vec<Complex64> = psi_t_tilde.iter().map(|v| v * leak).collect();
    let delta = psi_t.first().map_or(0.0, |p| m.sigma2 / l as f64 * p.norm_sqr() / leak);
    let a0_ri_a0 = dot(&m.a0, &ri_a0).re;
    let delta_coupling = psi_t_tilde.first().map_or(0.0, |p| p.norm_sqr() / a0_ri_a0);
    let kappa0 = super::supplementary::kappa_rho(&m)?.1;
    let g1 = gammas.first().copied().unwrap_or(0.0);
    let bound = lambda_max_bound(g0, g1, delta_coupling);
    Ok(MismatchSpectrum {
        snr,
        gamma0: g0,
        gamma0_approx: g0_approx,
        gammas,
        beta: m.beta,
        delta,
        delta_coupling,
        psi_t,
        psi_t_tilde,
        kappa0,
        lambda_max_pred: bound.prediction,
        bound_radius: bound.radius,
        feasible: bound.feasible,
        sigma2: m.sigma2,
        l,
        n,
    })
}

/// Exact largest generalized eigenvalue of the analytic `(R_S, R_I)` at `snr`.
pub fn lambda_max_exact(model: &AnalyticModel, snr: f64) -> Result<f64> {
    let m = model.with_snr(snr);
    Ok(gen_eig_hpd(&m.r_s(), &m.r_i())?.values[0])
}

/// The `(D+1) × (D+1)` matrix whose eigenvalues are the nontrivial generalized
/// eigenvalues of `(R_S, R_I)`:
/// `[[γ0+1, (σ_S0²−σ_I0²)√(L/σ²)ψ̃ᴴ], [√(σ²/L)Γψ̃, Γ+I]]`.
pub fn build_m_matrix(model: &AnalyticModel, spec: &MismatchSpectrum) -> ComplexMatrix {
    let m = model.with_snr(spec.snr);
    let d = spec.gammas.len();
    let l = spec.l as f64;
    let up = (m.sigma_s0_sq - m.sigma_i0_sq) * (l / m.sigma2).sqrt();
    let lo = (m.sigma2 / l).sqrt();
    ComplexMatrix::from_fn(d + 1, d + 1, |r, c| match (r, c) {
        (0, 0) => Complex64::new(spec.gamma0 + 1.0, 0.0),
        (0, c) => spec.psi_t_tilde[c - 1].conj() * up,
        (r, 0) => spec.psi_t_tilde[r - 1] * (spec.gammas[r - 1] * lo),
        (r, c) if r == c => Complex64::new(spec.gammas[r - 1] + 1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaBound {
    pub prediction: f64,
    pub radius: f64,
    pub feasible: bool,
    /// `λ_b/λ_a`.
    pub ratio: f64,
}

/// Prediction `max(γ0, γ1) + 1` and radius `λ_a·f(λ_b/λ_a, δ)`; outside the
/// domain of `f` the radius is infinite and `feasible` is false.
pub fn lambda_max_bound(gamma0: f64, gamma1: f64, delta: f64) -> LambdaBound {
    let (a, b) = if gamma0 >= gamma1 { (gamma0, gamma1) } else { (gamma1, gamma0) };
    if a <= 0.0 {
        return LambdaBound { prediction: a + 1.0, radius: 0.0, feasible: a == 0.0 && b == 0.0, ratio: 0.0 };
    }
    let x = b / a;
    match f_bound(x, delta) {
        Ok(f) => LambdaBound { prediction: a + 1.0, radius: a * f, feasible: true, ratio: x },
        Err(_) => LambdaBound { prediction: a + 1.0, radius: f64::INFINITY, feasible: false, ratio: x },
    }
}

/// `max(δ, γ₋)`, the relative radius ceiling on the lower branch.
pub fn relative_radius_cap(delta: f64) -> f64 {
    delta.max(gamma_pm(delta).0)
}

/// Normalized output SINR as a function of the dominant eigenvalue:
/// `G = [1 + a·ψ_S]² / ([ψ_I − b·ψ_S²] + [1 + a·ψ_S]²)` with
/// `a = N/(LβSNR+N)`, `b = LβSNR/(LβSNR+N)`.
pub fn g_of_lambda(lambda_max: f64, spec: &MismatchSpectrum) -> Result<f64> {
    let (l, n) = (spec.l as f64, spec.n as f64);
    let lbs = l * spec.beta * spec.snr;
    let scale = spec.sigma2 / l;
    let mut psi_s = 0.0;
    let mut psi_i = 0.0;
    for (g, p) in spec.gammas.iter().zip(&spec.psi_t) {
        let pole = g + 1.0;
        if (lambda_max - pole).abs() < 1e-12 * pole.abs() {
            return Err(Error::Singular(format!("λ_max = {lambda_max} at pole γ+1 = {pole}")));
        }
        let r = (lambda_max - 1.0) / (lambda_max - pole);
        psi_s += scale * r * p.norm_sqr();
        psi_i += scale * pole * r * r * p.norm_sqr();
    }
    let a = n / (lbs + n);
    let b = lbs / (lbs + n);
    let top = (1.0 + a * psi_s).powi(2);
    Ok(top / (psi_i - b * psi_s * psi_s + top))
}
