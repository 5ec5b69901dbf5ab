//! Dense complex linear algebra, self-contained (no external numeric backend).

pub mod bounds;
pub mod chol;
pub mod eig;
pub mod matrix;
pub mod subspace;

pub use bounds::{crawford, f_bound, gamma_pm, gerschgorin, GerschgorinDisk};
pub use chol::{cholesky, hpd_inverse, hpd_solve, hpd_solve_vec};
pub use eig::{
    clip_psd, gen_eig_homogeneous, gen_eig_hpd, herm_eig, simultaneous_diag, GenEigHomogeneous,
    HermEigResult, HomogeneousPair, SimultaneousDiag,
};
pub use matrix::{dot, norm, normalize, ComplexMatrix};
pub use subspace::{
    complement, default_tol, null_space, orthonormal_range, pinv, projector, rank, spectral_norm,
    subspace_contains, svd, Svd,
};
