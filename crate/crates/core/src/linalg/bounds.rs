//! Eigenvalue localization: Gerschgorin disks, the perturbation radius
//! function `f(x)` and the Crawford number of a Hermitian pair.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::eig::herm_eig;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GerschgorinDisk {
    pub center: Complex64,
    pub radius: f64,
    pub row_index: usize,
}

impl GerschgorinDisk {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius + slack
    }
}

/// Row disks: center `M[i,i]`, radius the deleted absolute row sum.
pub fn gerschgorin(m: &ComplexMatrix) -> Result<Vec<GerschgorinDisk>> {
    let n = m.require_square()?;
    Ok((0..n)
        .map(|i| GerschgorinDisk {
            center: m[(i, i)],
            radius: (0..n).filter(|&j| j != i).map(|j| m[(i, j)].norm()).sum(),
            row_index: i,
        })
        .collect())
}

/// `(γ₋, γ₊)` with `γ± = √(δ²+δ) ± δ`.
pub fn gamma_pm(delta: f64) -> (f64, f64) {
    let r = (delta * delta + delta).sqrt();
    (r - delta, r + delta)
}

/// `f(x) = ½[1 − x − √((1−x)² − 4δ|x|)]`, the relative radius around the
/// dominant eigenvalue when the runner-up sits at ratio `x`.
///
/// Defined for `x ≤ 1 − 2γ₋` and `x ≥ 1 + 2γ₊`. On the upper branch the raw
/// expression is negative; its magnitude is returned.
pub fn f_bound(x: f64, delta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside [0, 1)")));
    }
    let (gm, gp) = gamma_pm(delta);
    if x > 1.0 - 2.0 * gm && x < 1.0 + 2.0 * gp {
        return Err(Error::BoundNotApplicable(format!(
            "ratio {x} inside ({}, {})",
            1.0 - 2.0 * gm,
            1.0 + 2.0 * gp
        )));
    }
    let disc = ((1.0 - x) * (1.0 - x) - 4.0 * delta * x.abs()).max(0.0);
    Ok((0.5 * (1.0 - x - disc.sqrt())).abs())
}

const THETA_GRID: usize = 720;

fn lambda_min_at(a: &ComplexMatrix, b: &ComplexMatrix, theta: f64) -> f64 {
    let m = &a.scale(theta.cos()) + &b.scale(theta.sin());
    let e = herm_eig(&m).expect("Hermitian combination");
    *e.values.last().expect("non-empty")
}

/// Crawford number `min_{‖x‖=1} |xᴴ(A + iB)x|` of a Hermitian pair.
///
/// Uses `C = max(0, max_θ λ_min(A cos θ + B sin θ))`. When the maximum is
/// not positive, zero lies in the field of values of `A + iB` (it is convex),
/// so `C = 0` exactly. If `e0` is given, the minimum runs over unit vectors in
/// its range.
pub fn crawford(a: &ComplexMatrix, b: &ComplexMatrix, e0: Option<&ComplexMatrix>) -> Result<f64> {
    let a = a.require_hermitian()?;
    let b = b.require_hermitian()?;
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!("pair of orders {} and {}", a.rows(), b.rows())));
    }
    let (a, b) = match e0 {
        Some(e) => {
            if e.rows() != a.rows() {
                return Err(Error::Dimension(format!("basis with {} rows for order {}", e.rows(), a.rows())));
            }
            if e.cols() == 0 {
                return Ok(0.0);
            }
            (
                e.adj_mul(&a.matmul(e)?)?.hermitian_part(),
                e.adj_mul(&b.matmul(e)?)?.hermitian_part(),
            )
        }
        None => (a, b),
    };
    let step = 2.0 * PI / THETA_GRID as f64;
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..THETA_GRID {
        let t = k as f64 * step;
        let v = lambda_min_at(&a, &b, t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // golden-section refinement inside the neighbouring grid cells
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = lambda_min_at(&a, &b, x1);
    let mut f2 = lambda_min_at(&a, &b, x2);
    for _ in 0..60 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = lambda_min_at(&a, &b, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = lambda_min_at(&a, &b, x2);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(best.max(f1).max(f2).max(0.0))
}
