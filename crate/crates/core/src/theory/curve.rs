//! Closed-form operating curve: γ₀, the γ-spectrum, G_U, thresholds and the
//! piecewise G(SNR) prediction.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, gen_eig_hpd, hpd_solve_vec, ComplexMatrix};
use crate::mpb::{g_analytic, solve_weights, AnalyticModel};

/// SOI mismatch metric `γ₀ = (N − β)·L·snr / (L·β·snr + N)`.
pub fn gamma0(snr: f64, l: usize, n: usize, beta: f64) -> Result<f64> {
    let (l, n) = (l as f64, n as f64);
    if !(beta >= 0.0 && beta < n) {
        return Err(Error::InvalidArgument(format!("leakage {beta} outside [0, {n})")));
    }
    if !(snr >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative SNR {snr}")));
    }
    Ok((n - beta) * l * snr / (l * beta * snr + n))
}

/// Relative magnitude below which a generalized eigenvalue counts as zero.
pub const ZERO_CUTOFF: f64 = 1e-8;

/// Nonzero generalized eigenvalues of `(Q_S − Q_I, Q_I)`, zero-padded to `d`
/// entries and sorted descending.
pub fn gamma_spectrum(q_s: &ComplexMatrix, q_i: &ComplexMatrix, d: usize) -> Result<Vec<f64>> {
    let eig = gen_eig_hpd(&(q_s - q_i), q_i)?;
    let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out: Vec<f64> = eig.values.iter().copied().filter(|v| v.abs() > ZERO_CUTOFF * scale).collect();
    if out.len() > d {
        return Err(Error::InvalidArgument(format!(
            "{} nonzero mismatch eigenvalues for {d} interference paths",
            out.len()
        )));
    }
    out.resize(d, 0.0);
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Largest entry of [`gamma_spectrum`], or 0 without interference.
pub fn gamma1(q_s: &ComplexMatrix, q_i: &ComplexMatrix, d: usize) -> Result<f64> {
    Ok(gamma_spectrum(q_s, q_i, d)?.first().copied().unwrap_or(0.0))
}

/// Normalized SINR at infinite SNR:
/// `[a0ᴴQ_I⁻¹a0]² / ([a0ᴴQ_S⁻¹a0]·[a0ᴴQ_I⁻¹Q_SQ_I⁻¹a0])`.
pub fn g_upper(q_s: &ComplexMatrix, q_i: &ComplexMatrix, a0: &[Complex64]) -> Result<f64> {
    let yi = hpd_solve_vec(q_i, a0)?;
    let ys = hpd_solve_vec(q_s, a0)?;
    let num = dot(a0, &yi).re;
    let den_s = dot(a0, &ys).re;
    let den_x = q_s.form(&yi, &yi).re;
    Ok(num * num / (den_s * den_x))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    #[serde(serialize_with = "crate::serialize_real")]
    pub snr_t0: f64,
    #[serde(serialize_with = "crate::serialize_real")]
    pub snr_t1: f64,
    #[serde(serialize_with = "crate::serialize_real")]
    pub snr_t2: f64,
    pub k0: f64,
    pub p_i: f64,
    pub g_u: f64,
    pub g_l: Option<f64>,
    pub gamma1: f64,
    pub beta: f64,
    pub l: usize,
    pub n: usize,
}

fn pos(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Threshold SNRs (linear) and curve constants from `γ₁`, β and `G_U`.
pub fn thresholds(gamma1: f64, beta: f64, n: usize, l: usize, g_u: f64) -> Thresholds {
    let (nf, lf) = (n as f64, l as f64);
    // (N−β)/(γ₁)⁺ with x/0 = +∞
    let ratio = if pos(gamma1) == 0.0 { f64::INFINITY } else { (nf - beta) / gamma1 };
    let inner = pos(ratio - beta);
    let snr_t0 = if inner == 0.0 { f64::INFINITY } else { (nf / lf) / inner };
    let snr_t1 = (1.0 - 0.5f64.sqrt()) * snr_t0;
    let p_i = pos(1.0 / g_u - 1.0);
    let snr_t2 = snr_t0 / (1.0 - (p_i / (2.0 * p_i + 1.0)).sqrt());
    let k0 = if beta == 0.0 {
        0.0
    } else {
        let lead = (beta + (nf / lf) / snr_t0) / (nf - beta);
        lead * pos(gamma1 - (nf - beta) / beta)
    };
    Thresholds { snr_t0, snr_t1, snr_t2, k0, p_i, g_u, g_l: None, gamma1, beta, l, n }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    Failure,
    Threshold,
    Operating,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Failure => "failure",
            Region::Threshold => "threshold",
            Region::Operating => "operating",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurvePoint {
    pub snr: f64,
    pub g: f64,
    pub region: Region,
}

impl Thresholds {
    /// Operating-branch value, valid for `snr > snr_t0`.
    pub fn operating_branch(&self, snr: f64) -> f64 {
        let r = 1.0 - self.snr_t0 / snr;
        (self.p_i + 1.0) / (self.p_i / (r * r) + 1.0) * self.g_u
    }

    /// Failure-branch value; needs `g_l`.
    pub fn failure_branch(&self, snr: f64) -> Result<f64> {
        let g_l = self
            .g_l
            .ok_or_else(|| Error::InvalidArgument("low-SNR limit G_L not set".into()))?;
        let lb = self.l as f64 * self.beta / self.n as f64;
        let den = 1.0 - snr / self.snr_t0 + self.k0 * (lb * snr + 1.0);
        let r = (1.0 + self.k0) / den;
        Ok(r * r * g_l)
    }

    pub fn region(&self, snr: f64) -> Region {
        if snr > self.snr_t2 {
            Region::Operating
        } else if snr < self.snr_t1 {
            Region::Failure
        } else {
            Region::Threshold
        }
    }

    /// Predicted G at one linear SNR.
    pub fn evaluate(&self, snr: f64) -> Result<CurvePoint> {
        let region = self.region(snr);
        let g = match region {
            Region::Operating => self.operating_branch(snr),
            Region::Failure => self.failure_branch(snr)?,
            Region::Threshold => {
                if self.snr_t2 <= self.snr_t1 {
                    // zero-width band (no mismatch): the operating branch applies
                    self.operating_branch(snr.max(f64::MIN_POSITIVE))
                } else {
                    // straight line in (log SNR, dB) between the two branch ends
                    let g1 = self.failure_branch(self.snr_t1)?.log10();
                    let g2 = self.operating_branch(self.snr_t2).log10();
                    let t = (snr.ln() - self.snr_t1.ln()) / (self.snr_t2.ln() - self.snr_t1.ln());
                    10f64.powf(g1 + t * (g2 - g1))
                }
            }
        };
        Ok(CurvePoint { snr, g, region })
    }
}

/// Predicted operating curve over a linear SNR grid.
pub fn operating_curve(thr: &Thresholds, snr_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    if snr_grid.is_empty() {
        return Err(Error::InvalidArgument("empty SNR grid".into()));
    }
    snr_grid.iter().map(|&s| thr.evaluate(s)).collect()
}

/// SNR used to probe the low-SNR limit of G.
pub const G_LOWER_PROBE: f64 = 1e-6;

/// `G_L` by solving the exact analytic pair at a vanishing SNR.
pub fn g_lower_oracle(model: &AnalyticModel, probe_snr: f64) -> Result<f64> {
    let g1 = gamma1(&model.q_s, &model.q_i, model.d())?;
    if !(g1 > 0.0) {
        return Err(Error::InvalidArgument("no interference mismatch (γ₁ = 0); G_L is not defined".into()));
    }
    let m = model.with_snr(probe_snr);
    let w = solve_weights(&m.pair(), Some(&m.a0))?;
    g_analytic(&w.w, &m)
}

/// Thresholds with `G_U` and (when mismatch exists) `G_L` computed from the model.
pub fn model_thresholds(model: &AnalyticModel) -> Result<Thresholds> {
    let g1 = gamma1(&model.q_s, &model.q_i, model.d())?;
    let g_u = g_upper(&model.q_s, &model.q_i, &model.a0)?;
    let mut thr = thresholds(g1, model.beta, model.n, model.l, g_u);
    if g1 > 0.0 {
        thr.g_l = Some(g_lower_oracle(model, G_LOWER_PROBE)?);
    }
    Ok(thr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma0_examples() {
        assert_eq!(gamma0(1.0, 8, 31, 0.0).unwrap(), 8.0);
        assert_eq!(gamma0(0.0, 8, 31, 1.0).unwrap(), 0.0);
        assert!((gamma0(1e12, 8, 31, 1.0).unwrap() - 30.0).abs() < 1e-9);
        assert!(gamma0(1.0, 8, 31, 31.0).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let q = ComplexMatrix::from_real_diag(&[3.0, 2.0, 1.0]);
        assert_eq!(gamma_spectrum(&q, &q, 2).unwrap(), vec![0.0, 0.0]);
        let g = gamma_spectrum(&q.scale(2.0), &q, 3).unwrap();
        assert!(g.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn g_upper_examples() {
        let a0 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let q = ComplexMatrix::from_real_diag(&[2.0, 5.0]);
        assert!((g_upper(&q, &q, &a0).unwrap() - 1.0).abs() < 1e-14);
        assert!((g_upper(&q.scale(2.0), &q, &a0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn threshold_examples() {
        let t = thresholds(0.0, 0.0, 31, 8, 1.0);
        assert_eq!((t.snr_t0, t.snr_t1, t.snr_t2), (0.0, 0.0, 0.0));
        let t = thresholds(8.0, 0.0, 31, 8, 0.5);
        assert!((t.snr_t0 - 1.0).abs() < 1e-14);
        assert_eq!(t.k0, 0.0);
        assert!(t.snr_t1 <= t.snr_t0 && t.snr_t0 <= t.snr_t2);
        let t = thresholds(31.0, 1.0, 31, 8, 0.5);
        assert!(t.snr_t0.is_infinite() && t.snr_t2.is_infinite());
    }

    #[test]
    fn curve_without_mismatch_is_flat() {
        let t = thresholds(0.0, 0.0, 31, 8, 0.9);
        let c = operating_curve(&t, &[1e-3, 1.0, 1e3]).unwrap();
        assert!(c.iter().all(|p| (p.g - 0.9).abs() < 1e-14 && p.region == Region::Operating));
        assert!(operating_curve(&t, &[]).is_err());
    }

    #[test]
    fn failure_only_curve_slope() {
        let mut t = thresholds(100.0, 1.0, 31, 8, 0.9);
        t.g_l = Some(0.1);
        let a = t.evaluate(1e4).unwrap();
        let b = t.evaluate(1e5).unwrap();
        assert_eq!(a.region, Region::Failure);
        let slope = 10.0 * (b.g / a.g).log10();
        assert!((slope + 20.0).abs() < 0.1, "{slope}");
    }

    #[test]
    fn branch_ends_near_limits() {
        let mut t = thresholds(50.0, 0.0, 31, 8, 0.3);
        t.g_l = Some(1e-3);
        let up = t.operating_branch(t.snr_t2);
        assert!((10.0 * (up / t.g_u).log10()).abs() <= 10.0 * 2f64.log10() + 1e-9);
        let lo = t.failure_branch(t.snr_t1).unwrap();
        assert!((10.0 * (lo / 1e-3).log10()).abs() <= 10.0 * 2f64.log10() + 1e-9);
    }
}
