//! Matrix pair beamformer: projection bases, covariance pairs, weights and
//! normalized output SINR.

pub mod bases;
pub mod beam;
pub mod cov;

pub use bases::{custom_bases, default_f_mf, maximin_bases, papc_bases, ProjectionBases, Scheme};
pub use beam::{
    array_pattern, g_analytic, g_monte_carlo, output_sinr, sinr_opt, solve_weights, theta_grid,
    BeamWeights, PatternPoint,
};
pub use cov::{
    analytic_cov, estimate_cov_pair, simulate_stats, snapshots, AnalyticModel, CovariancePair,
    PairKind, SampleStats,
};
