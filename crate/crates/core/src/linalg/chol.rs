use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative pivot floor for positive definiteness.
pub const PIVOT_TOL: f64 = 1e-12;

/// Lower-triangular `L` with `B = L Lᴴ` and real positive diagonal.
pub fn cholesky(b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let b = b.require_hermitian()?;
    let n = b.rows();
    let floor = PIVOT_TOL * b.norm_max();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = b[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > floor) || d <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot: d, index: j });
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = b[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `L X = Y` for lower-triangular `L`.
pub fn solve_lower(l: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = l.require_square()?;
    if y.rows() != n {
        return Err(Error::Dimension(format!("triangular solve of order {n} with {} rows", y.rows())));
    }
    let mut x = y.clone();
    for c in 0..y.cols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    Ok(x)
}

/// Solves `Lᴴ X = Y` for lower-triangular `L`.
pub fn solve_lower_adj(l: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = l.require_square()?;
    if y.rows() != n {
        return Err(Error::Dimension(format!("triangular solve of order {n} with {} rows", y.rows())));
    }
    let mut x = y.clone();
    for c in 0..y.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)].conj();
        }
    }
    Ok(x)
}

/// Solves `B X = Y` for Hermitian positive-definite `B`.
pub fn hpd_solve(b: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let l = cholesky(b)?;
    solve_lower_adj(&l, &solve_lower(&l, y)?)
}

pub fn hpd_solve_vec(b: &ComplexMatrix, y: &[Complex64]) -> Result<Vec<Complex64>> {
    Ok(hpd_solve(b, &ComplexMatrix::column(y))?.col(0))
}

pub fn hpd_inverse(b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let inv = hpd_solve(b, &ComplexMatrix::identity(b.rows()))?;
    Ok(inv.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_factors() {
        let i = ComplexMatrix::identity(3);
        assert_eq!(cholesky(&i).unwrap(), i);
        let l = cholesky(&ComplexMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert_eq!(l, ComplexMatrix::from_real_diag(&[2.0, 3.0]));
    }

    #[test]
    fn reconstruction_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = ComplexMatrix::from_fn(6, 6, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let b = &m.adj_mul(&m).unwrap() + &ComplexMatrix::identity(6);
        let l = cholesky(&b).unwrap();
        let r = &l.matmul(&l.adjoint()).unwrap() - &b;
        assert!(r.norm_max() <= 1e-10 * b.norm_max());
        for i in 0..6 {
            assert!(l[(i, i)].im == 0.0 && l[(i, i)].re > 0.0);
            for j in i + 1..6 {
                assert_eq!(l[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
        let inv = hpd_inverse(&b).unwrap();
        let e = &b.matmul(&inv).unwrap() - &ComplexMatrix::identity(6);
        assert!(e.norm_max() < 1e-12);
    }

    #[test]
    fn singular_rejected() {
        let b = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(matches!(cholesky(&b), Err(Error::NotPositiveDefinite { index: 1, .. })));
    }
}
