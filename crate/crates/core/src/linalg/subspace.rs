//! Singular values, ranges, null spaces and projectors.
//!
//! Singular triplets come from the Hermitian dilation `[[0, M], [Mᴴ, 0]]`,
//! whose eigenvalues are `±σᵢ`, rather than from `MᴴM`: squaring would push
//! small singular values below the rank tolerance.

use num_complex::Complex64;

use super::eig::herm_eig;
use super::matrix::{dot, ComplexMatrix};
use crate::error::Result;

/// Positive singular triplets `M = U diag(σ) Vᴴ`, σ descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Default relative rank tolerance `max(m, n)·2⁻⁵²`.
pub fn default_tol(m: &ComplexMatrix) -> f64 {
    m.rows().max(m.cols()) as f64 * f64::EPSILON
}

/// Singular triplets with `σ ≥ tol·σ_max`.
pub fn svd(m: &ComplexMatrix, tol: f64) -> Result<Svd> {
    let (r, c) = (m.rows(), m.cols());
    let n = r + c;
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..r {
        for j in 0..c {
            h[(i, r + j)] = m[(i, j)];
            h[(r + j, i)] = m[(i, j)].conj();
        }
    }
    let eig = herm_eig(&h)?;
    let smax = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let mut us = Vec::new();
    let mut vs = Vec::new();
    let mut sigma = Vec::new();
    if smax > 0.0 {
        for (k, &s) in eig.values.iter().enumerate() {
            if s < tol * smax || s <= 0.0 {
                break;
            }
            let x = eig.vector(k);
            let sq = std::f64::consts::SQRT_2;
            us.push(x[..r].iter().map(|z| z * sq).collect::<Vec<_>>());
            vs.push(x[r..].iter().map(|z| z * sq).collect::<Vec<_>>());
            sigma.push(s);
        }
    }
    let u = gram_schmidt(&us, r);
    let v = gram_schmidt(&vs, c);
    Ok(Svd { u, sigma, v })
}

/// Two-pass modified Gram-Schmidt on the given vectors (assumed independent).
fn gram_schmidt(vecs: &[Vec<Complex64>], dim: usize) -> ComplexMatrix {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(vecs.len());
    for v in vecs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let p = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= p * qi;
                }
            }
        }
        let nrm = super::matrix::norm(&w);
        out.push(w.iter().map(|z| z / nrm).collect());
    }
    if out.is_empty() {
        return ComplexMatrix::zeros(dim, 0);
    }
    ComplexMatrix::from_columns(&out)
}

/// Orthonormal basis of `range(M)`; singular values below `tol·σ_max` are dropped.
pub fn orthonormal_range(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    Ok(svd(m, tol)?.u)
}

/// Numerical rank at relative tolerance `tol`.
pub fn rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    Ok(svd(m, tol)?.sigma.len())
}

/// Orthonormal basis of the orthogonal complement of `range(Q)` in `ℂⁿ`.
///
/// `Q` must have orthonormal columns.
pub fn complement(q: &ComplexMatrix) -> ComplexMatrix {
    let n = q.rows();
    let mut basis: Vec<Vec<Complex64>> = (0..q.cols()).map(|j| q.col(j)).collect();
    let k0 = basis.len();
    while basis.len() < n {
        // pick the standard vector with the largest residual
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for i in 0..n {
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            w[i] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let p = dot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= p * bi;
                    }
                }
            }
            let nrm = super::matrix::norm(&w);
            if best.as_ref().is_none_or(|(bn, _)| nrm > *bn) {
                best = Some((nrm, w));
            }
        }
        let (nrm, w) = best.expect("n > 0");
        basis.push(w.iter().map(|z| z / nrm).collect());
    }
    let rest = &basis[k0..];
    if rest.is_empty() {
        return ComplexMatrix::zeros(n, 0);
    }
    ComplexMatrix::from_columns(rest)
}

/// Orthonormal basis of `N(M)`.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let row_space = orthonormal_range(&m.adjoint(), tol)?;
    Ok(complement(&row_space))
}

/// Orthogonal projector `Q Qᴴ` for orthonormal `Q`.
pub fn projector(q: &ComplexMatrix) -> ComplexMatrix {
    q.matmul(&q.adjoint()).expect("projector shape")
}

/// Moore-Penrose pseudoinverse with relative cutoff `tol`.
pub fn pinv(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let s = svd(m, tol)?;
    let mut vs = s.v.clone();
    for (j, &sig) in s.sigma.iter().enumerate() {
        for i in 0..vs.rows() {
            vs[(i, j)] /= sig;
        }
    }
    vs.matmul(&s.u.adjoint())
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    Ok(svd(m, 0.5)?.sigma.first().copied().unwrap_or(0.0))
}

/// True when `range(V) ⊆ range(U)`, i.e. `‖(I − UUᴴ) V‖₂ ≤ tol`.
pub fn subspace_contains(u: &ComplexMatrix, v: &ComplexMatrix, tol: f64) -> Result<bool> {
    if v.cols() == 0 {
        return Ok(true);
    }
    let resid = if u.cols() == 0 { v.clone() } else { v - &projector(u).matmul(v)? };
    Ok(spectral_norm(&resid)? <= tol)
}
