use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_range, ComplexMatrix};

/// Choice of interference-channel basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scheme {
    /// Single chip position `m` of each block.
    Papc {
        #[serde(default)]
        position: usize,
    },
    /// Code modulated by a monitor-filter frequency `f_mf` (cycles per chip).
    Maximin {
        #[serde(default = "default_f_mf")]
        f_mf: f64,
    },
    /// Explicit basis, one column per entry, each of length N (real, imag pairs).
    Custom { columns: Vec<Vec<[f64; 2]>> },
}

pub fn default_f_mf() -> f64 {
    16.0 / 31.0
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Papc { .. } => "papc",
            Scheme::Maximin { .. } => "maximin",
            Scheme::Custom { .. } => "custom",
        }
    }

    pub fn bases(&self, c0: &[f64]) -> Result<ProjectionBases> {
        match self {
            Scheme::Papc { position } => papc_bases(c0, *position),
            Scheme::Maximin { f_mf } => maximin_bases(c0, *f_mf),
            Scheme::Custom { columns } => {
                let cols: Vec<Vec<Complex64>> =
                    columns.iter().map(|c| c.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
                if cols.is_empty() || cols.iter().any(|c| c.len() != c0.len()) {
                    return Err(Error::Config(format!("custom basis columns must have length {}", c0.len())));
                }
                custom_bases(c0, &ComplexMatrix::from_columns(&cols), self.clone())
            }
        }
    }
}

/// Signal-channel vector `h_S = c0/√N` and interference basis `H_I` (N × r_I).
#[derive(Clone, Debug)]
pub struct ProjectionBases {
    pub h_s: Vec<Complex64>,
    pub h_i: ComplexMatrix,
    pub scheme: Scheme,
}

fn signal_vector(c0: &[f64]) -> Vec<Complex64> {
    let s = (c0.len() as f64).sqrt();
    c0.iter().map(|&c| Complex64::new(c / s, 0.0)).collect()
}

/// `H_I = e_m`.
pub fn papc_bases(c0: &[f64], m: usize) -> Result<ProjectionBases> {
    let n = c0.len();
    if m >= n {
        return Err(Error::InvalidArgument(format!("PAPC position {m} >= {n}")));
    }
    let mut h_i = ComplexMatrix::zeros(n, 1);
    h_i[(m, 0)] = Complex64::new(1.0, 0.0);
    let b = ProjectionBases { h_s: signal_vector(c0), h_i, scheme: Scheme::Papc { position: m } };
    b.check()?;
    Ok(b)
}

/// `H_I[n] = c0[n]·e^{j2π f n}/√N`.
pub fn maximin_bases(c0: &[f64], f_mf: f64) -> Result<ProjectionBases> {
    if !(f_mf > 0.0 && f_mf <= 1.0) {
        return Err(Error::InvalidArgument(format!("monitor frequency {f_mf} outside (0, 1]")));
    }
    let n = c0.len();
    let s = (n as f64).sqrt();
    let h_i = ComplexMatrix::from_fn(n, 1, |i, _| {
        Complex64::from_polar(c0[i] / s, 2.0 * std::f64::consts::PI * f_mf * i as f64)
    });
    let b = ProjectionBases { h_s: signal_vector(c0), h_i, scheme: Scheme::Maximin { f_mf } };
    b.check()?;
    Ok(b)
}

/// Orthonormalizes the columns of `h` and uses them as `H_I`.
pub fn custom_bases(c0: &[f64], h: &ComplexMatrix, scheme: Scheme) -> Result<ProjectionBases> {
    let q = orthonormal_range(h, 1e-10)?;
    if q.cols() != h.cols() {
        return Err(Error::Config(format!("custom basis has rank {} < {} columns", q.cols(), h.cols())));
    }
    let b = ProjectionBases { h_s: signal_vector(c0), h_i: q, scheme };
    b.check()?;
    Ok(b)
}

impl ProjectionBases {
    pub fn n(&self) -> usize {
        self.h_s.len()
    }

    pub fn r_i(&self) -> usize {
        self.h_i.cols()
    }

    fn check(&self) -> Result<()> {
        let g = self.h_i.adj_mul(&self.h_i)?;
        let defect = (&g - &ComplexMatrix::identity(self.r_i())).norm_max();
        if defect > 1e-12 {
            return Err(Error::InvalidArgument(format!("interference basis not orthonormal ({defect:.2e})")));
        }
        // reject H_I whose span reproduces h_S
        let proj = self.h_i.adj_matvec(&self.h_s)?;
        let leak: f64 = proj.iter().map(|z| z.norm_sqr()).sum();
        if leak > 1.0 - 1e-9 {
            return Err(Error::InvalidArgument("interference basis contains the signal vector".into()));
        }
        Ok(())
    }

    /// Normalized power leakage `‖H_Iᴴ c0‖² / r_I`.
    pub fn beta(&self) -> f64 {
        let n = self.n() as f64;
        let p = self.h_i.adj_matvec(&self.h_s).expect("shape");
        n * p.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.r_i() as f64
    }

    /// `c0ᵀ h_S* = √N` and `c0ᵀ H_I*` (row of length r_I).
    pub fn code_gains(&self) -> (Complex64, Vec<Complex64>) {
        let n = (self.n() as f64).sqrt();
        let gs: Complex64 = self.h_s.iter().map(|h| h.conj() * h.re * n).sum();
        let gi = (0..self.r_i())
            .map(|j| (0..self.n()).map(|i| self.h_s[i].re * n * self.h_i[(i, j)].conj()).sum())
            .collect();
        (gs, gi)
    }
}
