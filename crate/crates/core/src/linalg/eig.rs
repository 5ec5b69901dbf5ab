//! Hermitian and generalized Hermitian eigensolvers built on cyclic Jacobi.

use num_complex::Complex64;

use super::chol::{cholesky, solve_lower, solve_lower_adj};
use super::matrix::ComplexMatrix;
use super::subspace::orthonormal_range;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 50;
const OFF_TOL: f64 = 1e-12;

/// Eigenvalues (descending) with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermEigResult {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermEigResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.col(i)
    }
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies the unitary `J` acting on coordinates (p, q) as `A <- Jᴴ A J`, `V <- V J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase e^{-iφ} turns a_pq into the real number r
    let ph = apq.conj() / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J = diag(1, ph) · [[c, s], [-s, c]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = ph * (-s);
    let jqq = ph * c;
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..v.rows() {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// The input is symmetrized as `(A + Aᴴ)/2` after a `1e-8` relative asymmetry check.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEigResult> {
    let mut a = a.require_hermitian()?;
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm_fro();
    let target = OFF_TOL * scale;
    let mut converged = scale == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps, off: off_norm(&a) });
    }
    // one polishing sweep removes the last rounding-level couplings
    if scale > 0.0 {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermEigResult { values, vectors })
}

/// Generalized eigenproblem `A v = λ B v` for Hermitian `A` and Hermitian positive-definite `B`.
///
/// Reduced to `L⁻¹ A L⁻ᴴ` with `B = L Lᴴ`; the returned vectors are B-orthonormal.
pub fn gen_eig_hpd(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<HermEigResult> {
    let a = a.require_hermitian()?;
    let b = b.require_hermitian()?;
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!("pair of orders {} and {}", a.rows(), b.rows())));
    }
    let l = cholesky(&b)?;
    let y = solve_lower(&l, &a)?;
    let c = solve_lower(&l, &y.adjoint())?.hermitian_part();
    let eig = herm_eig(&c)?;
    let vectors = solve_lower_adj(&l, &eig.vectors)?;
    Ok(HermEigResult { values: eig.values, vectors })
}

/// One generalized eigenvalue in homogeneous form `⟨ν, μ⟩`, meaning `μ A x = ν B x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomogeneousPair {
    pub nu: f64,
    pub mu: f64,
}

impl HomogeneousPair {
    pub fn is_infinite(&self) -> bool {
        self.mu <= 1e-8 * (self.nu.hypot(self.mu))
    }

    /// `ν/μ`, or `+∞` for the infinite flag.
    pub fn value(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.nu / self.mu
        }
    }
}

/// Eigenpairs of a semi-definite pair after deflating the common null space.
#[derive(Clone, Debug)]
pub struct GenEigHomogeneous {
    /// Infinite eigenvalues first, then finite ones descending.
    pub pairs: Vec<HomogeneousPair>,
    /// Eigenvectors in the original coordinates, one column per pair.
    pub vectors: ComplexMatrix,
    pub finite_count: usize,
    /// Orthonormal basis of the complement of the common null space.
    pub e0: ComplexMatrix,
}

impl GenEigHomogeneous {
    pub fn infinite_count(&self) -> usize {
        self.pairs.len() - self.finite_count
    }

    pub fn has_infinite(&self) -> bool {
        self.infinite_count() > 0
    }
}

/// Relative size below which negative eigenvalues of a PSD input are treated as rounding.
pub const PSD_CLIP: f64 = 1e-10;

/// Rebuilds a Hermitian PSD matrix with rounding-level negative eigenvalues set to zero.
pub fn clip_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n = a.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam < -PSD_CLIP * scale {
            return Err(Error::InvalidArgument(format!(
                "matrix is indefinite: eigenvalue {lam:.3e} against scale {scale:.3e}"
            )));
        }
        if lam <= 0.0 {
            continue;
        }
        let v = eig.vector(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += v[i] * v[j].conj() * lam;
            }
        }
    }
    Ok(out)
}

/// Generalized eigenvalues of a Hermitian PSD pair, including infinite ones.
///
/// The common null space of `A` and `B` is removed first; on its complement
/// `A + B` is positive definite and the pair `(Ã, Ã + B̃)` has eigenvalues
/// `t ∈ [0, 1]` which map to `⟨ν, μ⟩ = ⟨t, 1 − t⟩`.
pub fn gen_eig_homogeneous(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<GenEigHomogeneous> {
    a.require_square()?;
    b.require_square()?;
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!("pair of orders {} and {}", a.rows(), b.rows())));
    }
    let a = clip_psd(a)?;
    let b = clip_psd(b)?;
    let s = &a + &b;
    let e0 = orthonormal_range(&s, PSD_CLIP)?;
    let r = e0.cols();
    if r == 0 {
        return Ok(GenEigHomogeneous {
            pairs: Vec::new(),
            vectors: ComplexMatrix::zeros(a.rows(), 0),
            finite_count: 0,
            e0,
        });
    }
    let at = e0.adj_mul(&a.matmul(&e0)?)?.hermitian_part();
    let bt = e0.adj_mul(&b.matmul(&e0)?)?.hermitian_part();
    let st = (&at + &bt).hermitian_part();
    let eig = gen_eig_hpd(&at, &st)?;
    let mut pairs = Vec::with_capacity(r);
    let mut vectors = ComplexMatrix::zeros(a.rows(), r);
    for k in 0..r {
        let t = eig.values[k].clamp(0.0, 1.0);
        let (nu, mu) = (t, 1.0 - t);
        let h = nu.hypot(mu);
        pairs.push(HomogeneousPair { nu: nu / h, mu: mu / h });
        let x = e0.matvec(&eig.vector(k))?;
        vectors.set_col(k, &x);
    }
    let finite_count = pairs.iter().filter(|p| !p.is_infinite()).count();
    Ok(GenEigHomogeneous { pairs, vectors, finite_count, e0 })
}

/// Congruence `T` with `Tᴴ W T = I` and `Tᴴ Φ T = diag(Γ)`.
#[derive(Clone, Debug)]
pub struct SimultaneousDiag {
    pub t: ComplexMatrix,
    /// Descending.
    pub gamma: Vec<f64>,
}

/// Simultaneous diagonalization of a Hermitian `phi` and Hermitian positive-definite `w`.
pub fn simultaneous_diag(phi: &ComplexMatrix, w: &ComplexMatrix) -> Result<SimultaneousDiag> {
    let eig = gen_eig_hpd(phi, w)?;
    Ok(SimultaneousDiag { t: eig.vectors, gamma: eig.values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, c, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n, n).hermitian_part()
    }

    #[test]
    fn diagonal_and_identity() {
        let d = ComplexMatrix::from_real_diag(&[2.0, 3.0]);
        let e = herm_eig(&d).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        let e = herm_eig(&ComplexMatrix::identity(8)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn residual_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=16 {
            let a = random_hermitian(&mut rng, n);
            let e = herm_eig(&a).unwrap();
            let av = a.matmul(&e.vectors).unwrap();
            let vl = e.vectors.matmul(&ComplexMatrix::from_real_diag(&e.values)).unwrap();
            assert!((&av - &vl).norm_max() <= 1e-12 * a.norm_fro().max(1.0), "n={n}");
            let vv = e.vectors.adj_mul(&e.vectors).unwrap();
            assert!((&vv - &ComplexMatrix::identity(n)).norm_max() <= 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn generalized_trivial_cases() {
        let a = ComplexMatrix::from_real_diag(&[2.0, 3.0]);
        let e = gen_eig_hpd(&a, &ComplexMatrix::identity(2)).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 2.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 5, 5);
        let b = &m.adj_mul(&m).unwrap() + &ComplexMatrix::identity(5);
        let e = gen_eig_hpd(&b.scale(2.0), &b).unwrap();
        assert!(e.values.iter().all(|&v| (v - 2.0).abs() < 1e-12));
        let vbv = e.vectors.adj_mul(&b.matmul(&e.vectors).unwrap()).unwrap();
        assert!((&vbv - &ComplexMatrix::identity(5)).norm_max() < 1e-10);
    }

    #[test]
    fn not_positive_definite_rejected() {
        let b = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(
            gen_eig_hpd(&ComplexMatrix::identity(2), &b),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn homogeneous_explicit_singular_b() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let h = gen_eig_homogeneous(&a, &b).unwrap();
        assert_eq!(h.infinite_count(), 1);
        assert_eq!(h.finite_count, 1);
        assert!(h.pairs[0].is_infinite());
        assert!((h.pairs[1].value() - 1.0).abs() < 1e-12);
        // infinite eigenvector spans e2
        assert!(h.vectors[(0, 0)].norm() < 1e-12 && h.vectors[(1, 0)].norm() > 0.1);
    }

    #[test]
    fn homogeneous_identity_pair() {
        let i = ComplexMatrix::identity(3);
        let h = gen_eig_homogeneous(&i, &i).unwrap();
        assert_eq!(h.finite_count, 3);
        assert!(h.pairs.iter().all(|p| (p.value() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn homogeneous_rank_one_pair() {
        // a = (1, 1, 0), b = (1, 0, 0): common null space is e3, deflated problem
        // on span{e1, e2}: A = [[1,1],[1,1]], B = [[1,0],[0,0]].
        // det(A - λB) = (1-λ)·1 - 1 = -λ, so one finite λ = 0 and one infinite.
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let a = ComplexMatrix::outer(&[one, one, zero], &[one, one, zero]);
        let b = ComplexMatrix::outer(&[one, zero, zero], &[one, zero, zero]);
        let h = gen_eig_homogeneous(&a, &b).unwrap();
        assert_eq!(h.e0.cols(), 2);
        assert_eq!(h.infinite_count(), 1);
        assert_eq!(h.finite_count, 1);
        assert!(h.pairs[1].value().abs() < 1e-12);
    }

    #[test]
    fn simultaneous_diag_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(&mut rng, 3, 3);
        let w = &m.adj_mul(&m).unwrap() + &ComplexMatrix::identity(3);
        let sd = simultaneous_diag(&ComplexMatrix::zeros(3, 3), &w).unwrap();
        assert!(sd.gamma.iter().all(|g| g.abs() < 1e-14));
        let twt = sd.t.adj_mul(&w.matmul(&sd.t).unwrap()).unwrap();
        assert!((&twt - &ComplexMatrix::identity(3)).norm_max() < 1e-10);
        let sd = simultaneous_diag(&w, &w).unwrap();
        assert!(sd.gamma.iter().all(|g| (g - 1.0).abs() < 1e-12));
        let phi = random_hermitian(&mut rng, 3);
        let sd = simultaneous_diag(&phi, &w).unwrap();
        let tpt = sd.t.adj_mul(&phi.matmul(&sd.t).unwrap()).unwrap();
        let g = ComplexMatrix::from_real_diag(&sd.gamma);
        assert!((&tpt - &g).norm_max() < 1e-10 * phi.norm_max().max(1.0));
    }
}
