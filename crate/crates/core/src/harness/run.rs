//! Sweeps, array patterns, eigenvalue curves and the analysis report.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::mpb::{
    analytic_cov, array_pattern, g_monte_carlo, simulate_stats, solve_weights, theta_grid, AnalyticModel,
    PatternPoint, ProjectionBases,
};
use crate::sigmodel::{gold31, rng::point_seed, Realization};
use crate::theory::{
    gamma0, gamma1, gamma1_lower_bound, lambda_max_exact, mismatch_spectrum, model_thresholds, noise_free_pair,
    Thresholds,
};
use crate::{from_db, to_db};

pub const SWEEP_HEADER: &str = "snr_db,g_sim_db,g_theory_db,gamma0,gamma1,lambda_max_exact,lambda_max_pred,region";
pub const EIGEN_HEADER: &str = "snr_db,gamma0_plus1,gamma1_plus1,lambda_max_exact,lambda_max_pred,bound_radius,feasible";
/// Offset separating pattern data streams from sweep points.
const PATTERN_STREAM: usize = 1 << 32;
/// Pattern angle step in degrees.
pub const PATTERN_STEP_DEG: f64 = 0.5;

/// Nine significant digits; infinities as `inf`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.8e}")
    }
}

/// Runs `f` on a pool of `workers` threads, or on the global pool for `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Config("worker count must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Bases of every configured scheme, all built on the SOI code.
pub fn scheme_bases(cfg: &ExperimentConfig) -> Result<Vec<ProjectionBases>> {
    let c0 = gold31(cfg.soi.code_index)?;
    cfg.schemes.iter().map(|s| s.bases(&c0)).collect()
}

/// Unique file stems for the configured schemes.
pub fn scheme_labels(cfg: &ExperimentConfig) -> Vec<String> {
    let names: Vec<&str> = cfg.schemes.iter().map(|s| s.name()).collect();
    names
        .iter()
        .enumerate()
        .map(|(i, n)| if names.iter().filter(|m| *m == n).count() > 1 { format!("{n}{i}") } else { n.to_string() })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub g_sim_db: f64,
    pub g_theory_db: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub lambda_max_exact: f64,
    pub lambda_max_pred: f64,
    /// Region of the theory curve, or `error` for a failed point.
    pub region: String,
}

impl SweepRow {
    fn failed(snr_db: f64) -> Self {
        let nan = f64::NAN;
        SweepRow {
            snr_db,
            g_sim_db: nan,
            g_theory_db: nan,
            gamma0: nan,
            gamma1: nan,
            lambda_max_exact: nan,
            lambda_max_pred: nan,
            region: "error".into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.region == "error"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeSweep {
    pub label: String,
    pub thresholds: Thresholds,
    pub rows: Vec<SweepRow>,
    /// Messages of failed points, as `(snr_db, message)`.
    pub errors: Vec<(f64, String)>,
}

/// Model, thresholds and bases per scheme at the configured INR.
struct Prepared {
    bases: Vec<ProjectionBases>,
    models: Vec<AnalyticModel>,
    thresholds: Vec<Thresholds>,
}

fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let bases = scheme_bases(cfg)?;
    let real = Realization::new(&cfg.scenario_at(0.0)?)?;
    let models: Vec<AnalyticModel> = bases.iter().map(|b| analytic_cov(&real, b)).collect::<Result<_>>()?;
    let thresholds = models.iter().map(model_thresholds).collect::<Result<_>>()?;
    Ok(Prepared { bases, models, thresholds })
}

fn sweep_point(cfg: &ExperimentConfig, prep: &Prepared, index: usize, snr_db: f64) -> Result<Vec<SweepRow>> {
    let snr = from_db(snr_db);
    let real = Realization::new(&cfg.scenario_at(snr_db)?)?;
    let stats = simulate_stats(&real, &prep.bases, point_seed(cfg.seed, index), cfg.symbols)?;
    let mut rows = Vec::with_capacity(stats.len());
    for ((st, model), thr) in stats.iter().zip(&prep.models).zip(&prep.thresholds) {
        let m = model.with_snr(snr);
        let w = solve_weights(&st.pair, Some(&m.a0))?;
        let g_sim = g_monte_carlo(&w.w, &m, &st.r_zs)?;
        let theory = thr.evaluate(snr)?;
        let g0 = gamma0(snr, m.l, m.n, m.beta)?;
        rows.push(SweepRow {
            snr_db,
            g_sim_db: to_db(g_sim),
            g_theory_db: to_db(theory.g),
            gamma0: g0,
            gamma1: thr.gamma1,
            lambda_max_exact: lambda_max_exact(&m, snr)?,
            lambda_max_pred: g0.max(thr.gamma1) + 1.0,
            region: theory.region.as_str().into(),
        });
    }
    Ok(rows)
}

/// Monte Carlo and theory operating curves for every scheme.
///
/// Points run in parallel on the current pool; each has its own data stream
/// derived from `(seed, point index)`. A failed point yields an `error` row.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SchemeSweep>> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    let points: Vec<Result<Vec<SweepRow>>> = cfg
        .snr_grid_db
        .par_iter()
        .enumerate()
        .map(|(i, &s)| sweep_point(cfg, &prep, i, s))
        .collect();
    let labels = scheme_labels(cfg);
    let mut out: Vec<SchemeSweep> = labels
        .into_iter()
        .zip(&prep.thresholds)
        .map(|(label, thr)| SchemeSweep { label, thresholds: *thr, rows: Vec::new(), errors: Vec::new() })
        .collect();
    for (p, &snr_db) in points.into_iter().zip(&cfg.snr_grid_db) {
        match p {
            Ok(rows) => {
                for (s, r) in out.iter_mut().zip(rows) {
                    s.rows.push(r);
                }
            }
            Err(e) => {
                for s in out.iter_mut() {
                    s.rows.push(SweepRow::failed(snr_db));
                    s.errors.push((snr_db, e.to_string()));
                }
            }
        }
    }
    Ok(out)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_num(r.snr_db),
            fmt_num(r.g_sim_db),
            fmt_num(r.g_theory_db),
            fmt_num(r.gamma0),
            fmt_num(r.gamma1),
            fmt_num(r.lambda_max_exact),
            fmt_num(r.lambda_max_pred),
            r.region
        );
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemePattern {
    pub label: String,
    pub snr_db: f64,
    pub points: Vec<PatternPoint>,
}

/// Array patterns of the Monte Carlo weights at each SNR in `snr_db`
/// (θ from −90° to 90°, normalized to a 0 dB peak).
pub fn run_pattern(cfg: &ExperimentConfig, snr_db: &[f64]) -> Result<Vec<SchemePattern>> {
    cfg.validate()?;
    if snr_db.is_empty() {
        return Err(Error::Config("no pattern SNR given".into()));
    }
    let bases = scheme_bases(cfg)?;
    let labels = scheme_labels(cfg);
    let grid = theta_grid(PATTERN_STEP_DEG);
    let per_snr: Vec<Result<Vec<SchemePattern>>> = snr_db
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let real = Realization::new(&cfg.scenario_at(s)?)?;
            let stats = simulate_stats(&real, &bases, point_seed(cfg.seed, PATTERN_STREAM + i), cfg.symbols)?;
            stats
                .iter()
                .zip(&labels)
                .map(|(st, label)| {
                    let w = solve_weights(&st.pair, Some(&real.a0))?;
                    Ok(SchemePattern {
                        label: label.clone(),
                        snr_db: s,
                        points: array_pattern(&w.w, &cfg.geometry, &grid),
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for p in per_snr {
        out.extend(p?);
    }
    Ok(out)
}

pub fn pattern_csv(p: &SchemePattern) -> String {
    let mut s = String::from("theta_deg,gain_db\n");
    for pt in &p.points {
        let _ = writeln!(s, "{},{}", fmt_num(pt.theta_deg), fmt_num(pt.gain_db));
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenRow {
    pub snr_db: f64,
    pub gamma0_plus1: f64,
    pub gamma1_plus1: f64,
    pub lambda_max_exact: f64,
    /// Prediction and radius from the exact mismatch spectrum at this SNR.
    pub lambda_max_pred: f64,
    pub bound_radius: f64,
    pub feasible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenCurves {
    pub label: String,
    pub rows: Vec<EigenRow>,
    /// SNR (dB) where γ₀+1 overtakes γ₁+1, interpolated on the grid.
    pub crossing_snr_db: Option<f64>,
    #[serde(serialize_with = "crate::serialize_real")]
    pub snr_t0_db: f64,
}

/// `γ₀+1`, `γ₁+1` and exact λ_max over the SNR grid from the analytic pair.
pub fn run_eigencurves(cfg: &ExperimentConfig) -> Result<Vec<EigenCurves>> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    let labels = scheme_labels(cfg);
    prep.models
        .iter()
        .zip(&prep.thresholds)
        .zip(labels)
        .map(|((model, thr), label)| {
            let rows: Vec<EigenRow> = cfg
                .snr_grid_db
                .par_iter()
                .map(|&db| {
                    let snr = from_db(db);
                    let spec = mismatch_spectrum(model, snr)?;
                    Ok(EigenRow {
                        snr_db: db,
                        gamma0_plus1: gamma0(snr, model.l, model.n, model.beta)? + 1.0,
                        gamma1_plus1: thr.gamma1 + 1.0,
                        lambda_max_exact: lambda_max_exact(model, snr)?,
                        lambda_max_pred: spec.lambda_max_pred,
                        bound_radius: spec.bound_radius,
                        feasible: spec.feasible,
                    })
                })
                .collect::<Result<_>>()?;
            let crossing_snr_db = crossing(&rows);
            Ok(EigenCurves { label, rows, crossing_snr_db, snr_t0_db: to_db(thr.snr_t0) })
        })
        .collect()
}

fn crossing(rows: &[EigenRow]) -> Option<f64> {
    let diff = |r: &EigenRow| r.gamma0_plus1.ln() - r.gamma1_plus1.ln();
    rows.windows(2).find_map(|w| {
        let (a, b) = (diff(&w[0]), diff(&w[1]));
        if a < 0.0 && b >= 0.0 {
            Some(w[0].snr_db + (w[1].snr_db - w[0].snr_db) * (-a) / (b - a))
        } else {
            None
        }
    })
}

pub fn eigen_csv(c: &EigenCurves) -> String {
    let mut s = String::from(EIGEN_HEADER);
    s.push('\n');
    for r in &c.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_num(r.snr_db),
            fmt_num(r.gamma0_plus1),
            fmt_num(r.gamma1_plus1),
            fmt_num(r.lambda_max_exact),
            fmt_num(r.lambda_max_pred),
            fmt_num(r.bound_radius),
            r.feasible
        );
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct InrRow {
    pub inr_db: f64,
    pub gamma1: f64,
    /// `C_Y0·INR/√2 − 1` when applicable.
    pub gamma1_lower: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeAnalysis {
    pub label: String,
    pub beta: f64,
    pub thresholds: Thresholds,
    #[serde(serialize_with = "crate::serialize_real")]
    pub snr_t0_db: f64,
    #[serde(serialize_with = "crate::serialize_real")]
    pub snr_t1_db: f64,
    #[serde(serialize_with = "crate::serialize_real")]
    pub snr_t2_db: f64,
    pub c_y0: f64,
    pub has_infinite: bool,
    pub bounded_by_criterion: Option<bool>,
    pub gamma1_vs_inr: Vec<InrRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub inr_db: f64,
    pub schemes: Vec<SchemeAnalysis>,
}

/// Thresholds, noise-free pair analysis and γ₁ versus INR for every scheme.
pub fn analyze(cfg: &ExperimentConfig) -> Result<AnalysisReport> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    let labels = scheme_labels(cfg);
    let real = Realization::new(&cfg.scenario_at(0.0)?)?;
    let mut schemes = Vec::new();
    for (((b, model), thr), label) in prep.bases.iter().zip(&prep.models).zip(&prep.thresholds).zip(labels) {
        let (c_y0, has_infinite, bounded_by_criterion) = if model.d() == 0 {
            (0.0, false, None)
        } else {
            let nf = noise_free_pair(&real, b)?;
            (nf.c_y0, nf.has_infinite, nf.bounded_by_criterion)
        };
        let gamma1_vs_inr = cfg
            .inr_table_db
            .iter()
            .map(|&inr_db| {
                let r = Realization::new(&cfg.scenario_at_inr(0.0, inr_db)?)?;
                let m = analytic_cov(&r, b)?;
                Ok(InrRow {
                    inr_db,
                    gamma1: gamma1(&m.q_s, &m.q_i, m.d())?,
                    gamma1_lower: gamma1_lower_bound(c_y0, from_db(inr_db)).ok(),
                })
            })
            .collect::<Result<_>>()?;
        schemes.push(SchemeAnalysis {
            label,
            beta: model.beta,
            thresholds: *thr,
            snr_t0_db: to_db(thr.snr_t0),
            snr_t1_db: to_db(thr.snr_t1),
            snr_t2_db: to_db(thr.snr_t2),
            c_y0,
            has_infinite,
            bounded_by_criterion,
            gamma1_vs_inr,
        });
    }
    Ok(AnalysisReport { name: cfg.name.clone(), inr_db: cfg.inr_db, schemes })
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| Error::Io { path: path.display().to_string(), source })
}
