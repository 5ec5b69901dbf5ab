//! Closed-form predictions: operating curve and thresholds, mismatch spectrum
//! and λ_max bound, noise-free pair analysis.

pub mod curve;
pub mod noise_free;
pub mod spectrum;
pub mod supplementary;

pub use curve::{
    g_lower_oracle, g_upper, gamma0, gamma1, gamma_spectrum, model_thresholds, operating_curve,
    thresholds, CurvePoint, Region, Thresholds, G_LOWER_PROBE, ZERO_CUTOFF,
};
pub use noise_free::{
    boundedness_criterion, gamma1_lower_bound, noise_free_pair, unit_inr_pair, NoiseFreeAnalysis,
};
pub use spectrum::{
    build_m_matrix, g_of_lambda, lambda_max_bound, lambda_max_exact, mismatch_spectrum,
    relative_radius_cap, LambdaBound, MismatchSpectrum,
};
pub use supplementary::{kappa_rho, verify_supplementary_identities, SupplementaryReport};
