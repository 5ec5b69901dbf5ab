//! Independent oracles shared by the integration tests. Nothing here calls the
//! crate's eigensolvers.
#![allow(dead_code)]

use mpb_core::linalg::ComplexMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(r, c, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// `MᴴM + shift·I`.
pub fn random_hpd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> ComplexMatrix {
    let m = random_matrix(rng, n, n);
    &m.adj_mul(&m).unwrap() + &ComplexMatrix::identity(n).scale(shift)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut m: Vec<Vec<Complex64>> = (0..n).map(|r| (0..n).map(|c| a[(r, c)]).collect()).collect();
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm())).unwrap();
        if m[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            m.swap(p, k);
            d = -d;
        }
        d *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    d
}

/// Real roots of `λ ↦ det(A − λB)` inside `[lo, hi]`, by sign scanning on a
/// fine grid and bisection. Meant for Hermitian-definite pairs with n ≤ 4,
/// where the characteristic function is real.
pub fn pencil_roots(a: &ComplexMatrix, b: &ComplexMatrix, lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let f = |l: f64| det(&(a - &b.scale(l))).re;
    let mut roots = Vec::new();
    let h = (hi - lo) / steps as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=steps {
        let x1 = lo + h * i as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut l, mut r, mut fl) = (x0, x1, f0);
            for _ in 0..200 {
                let m = 0.5 * (l + r);
                let fm = f(m);
                if fm * fl <= 0.0 {
                    r = m;
                } else {
                    l = m;
                    fl = fm;
                }
            }
            roots.push(0.5 * (l + r));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// `A = V diag(a) Vᴴ`, `B = V diag(b) Vᴴ` with `V` invertible: eigenpairs `⟨aᵢ, bᵢ⟩`.
pub fn congruent_pair(r: &mut ChaCha8Rng, a: &[f64], b: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.len();
    let v = &random_matrix(r, n, n) + &ComplexMatrix::identity(n).scale(2.0);
    let f = |d: &[f64]| v.matmul(&ComplexMatrix::from_real_diag(d)).unwrap().matmul(&v.adjoint()).unwrap().hermitian_part();
    (f(a), f(b))
}

/// Periodic cross-correlation of two ±1 sequences at shift `k`.
pub fn cross_corr(a: &[f64], b: &[f64], k: usize) -> f64 {
    let n = a.len();
    (0..n).map(|i| a[i] * b[(i + k) % n]).sum()
}

/// `|xᴴAx + i·xᴴBx|` minimized over `samples` random unit vectors: an upper
/// estimate of the Crawford number.
pub fn sampled_crawford(a: &ComplexMatrix, b: &ComplexMatrix, rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let n = a.rows();
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let x: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let nx: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let x: Vec<Complex64> = x.iter().map(|v| v / nx).collect();
        let qa = a.form(&x, &x).re;
        let qb = b.form(&x, &x).re;
        best = best.min((qa * qa + qb * qb).sqrt());
    }
    best
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
