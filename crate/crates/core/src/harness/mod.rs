//! Experiment configuration, presets, seeded sweeps and CSV/JSON output.

pub mod config;
pub mod run;

pub use config::{
    default_snr_grid, load_config, parse_config, preset, ExperimentConfig, InterfererConfig, SoiConfig,
    FULL_SYMBOLS, MIN_SYMBOLS, NOISE_VAR, PRESET_NAMES,
};
pub use run::{
    analyze, eigen_csv, fmt_num, pattern_csv, run_eigencurves, run_pattern, run_sweep, scheme_bases, scheme_labels,
    sweep_csv, with_workers, write_file, AnalysisReport, EigenCurves, EigenRow, InrRow, SchemeAnalysis,
    SchemePattern, SchemeSweep, SweepRow, EIGEN_HEADER, SWEEP_HEADER,
};
