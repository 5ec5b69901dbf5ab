//! Simulation and analysis toolkit for the matrix pair beamformer (MPB).
//!
//! The crate is split the same way the processing chain is:
//!
//! - [`linalg`]: dense complex linear algebra (Jacobi eigensolver, generalized
//!   eigenproblems, subspaces, Gerschgorin and Crawford bounds).
//! - [`sigmodel`]: steering vectors, Gold codes, interferer waveforms and the
//!   blocked array data `X(k)`.
//! - [`mpb`]: projection bases, covariance pairs, weights and normalized SINR.
//! - [`theory`]: closed-form prediction of the operating curve, thresholds,
//!   eigenvalue bounds and the noise-free pair analysis.
//! - [`harness`]: JSON configs, presets, seeded sweeps and CSV output.

pub mod error;
pub mod harness;
pub mod linalg;
pub mod mpb;
pub mod sigmodel;
pub mod theory;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Decibel conversion for power ratios.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Serializes non-finite reals as the strings `inf`, `-inf` or `nan` (JSON has no literal for them).
pub(crate) fn serialize_real<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}
