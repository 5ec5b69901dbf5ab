use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::array::{steering, ArrayGeometry};
use super::gold::{gold31, GOLD_LEN};
use super::rng::{hash3, uniform01, unit_power_gaussian_segment};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Signal of interest: a Gold-spread ±1 symbol stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoiSpec {
    #[serde(default)]
    pub code_index: usize,
    /// Chip delay of the symbol boundary; blocks are aligned to it.
    #[serde(default)]
    pub delay: usize,
    pub doa_deg: f64,
    /// Per-chip power `P0`; the input SNR is `N·P0/σ²`.
    pub power: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InterfererKind {
    /// Chip-rate random ±1 sequence.
    BpskWhite,
    /// Complex exponential with frequency offset in cycles per chip.
    Tone { offset: f64 },
    /// One complex Gaussian segment of one symbol length, tiled.
    PeriodicalNoise {
        #[serde(default)]
        segment_seed: Option<u64>,
    },
    /// Another user's spread bit stream received over several delayed paths.
    MaiMultipath {
        user_code: usize,
        path_delays: Vec<usize>,
        path_doas: Vec<f64>,
        /// Power fractions per path; equal split when absent.
        #[serde(default)]
        path_gains: Option<Vec<f64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererSpec {
    #[serde(flatten)]
    pub kind: InterfererKind,
    /// Arrival angle; unused for multipath (each path carries its own).
    #[serde(default)]
    pub doa_deg: f64,
    /// Linear power (total over paths for multipath).
    pub power: f64,
}

impl InterfererSpec {
    pub fn is_white(&self) -> bool {
        matches!(self.kind, InterfererKind::BpskWhite)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub geometry: ArrayGeometry,
    pub soi: SoiSpec,
    pub interferers: Vec<InterfererSpec>,
    pub noise_var: f64,
    pub symbols: usize,
    /// Fixes codes, tone phases and noise segments; data streams are seeded separately.
    pub seed: u64,
}

impl Scenario {
    /// Processing gain `N`.
    pub fn processing_gain(&self) -> usize {
        GOLD_LEN
    }

    pub fn elements(&self) -> usize {
        self.geometry.elements
    }

    /// Sets the SOI power from a linear input SNR `N·P0/σ²`.
    pub fn set_snr(&mut self, snr: f64) {
        self.soi.power = snr * self.noise_var / self.processing_gain() as f64;
    }

    pub fn snr(&self) -> f64 {
        self.processing_gain() as f64 * self.soi.power / self.noise_var
    }

    /// Reference INR `max Pᵢ / σ²` (zero without interferers).
    pub fn inr(&self) -> f64 {
        self.interferers.iter().map(|i| i.power).fold(0.0, f64::max) / self.noise_var
    }

    /// Rescales all interferer powers so that the reference INR becomes `inr`.
    pub fn set_inr(&mut self, inr: f64) {
        let cur = self.inr();
        if cur > 0.0 {
            let s = inr / cur;
            for i in &mut self.interferers {
                i.power *= s;
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        let n = self.processing_gain();
        if !(self.noise_var > 0.0) || !self.noise_var.is_finite() {
            return Err(Error::Config(format!("noise variance must be positive, got {}", self.noise_var)));
        }
        if self.symbols == 0 {
            return Err(Error::Config("symbol count must be at least 1".into()));
        }
        if !(self.soi.power >= 0.0) || !self.soi.power.is_finite() {
            return Err(Error::Config(format!("SOI power must be non-negative, got {}", self.soi.power)));
        }
        gold31(self.soi.code_index).map_err(|e| Error::Config(e.to_string()))?;
        check_doa(self.soi.doa_deg, "soi.doa_deg")?;
        for (i, it) in self.interferers.iter().enumerate() {
            if !(it.power > 0.0) || !it.power.is_finite() {
                return Err(Error::Config(format!("interferers[{i}].power must be positive, got {}", it.power)));
            }
            match &it.kind {
                InterfererKind::MaiMultipath { user_code, path_delays, path_doas, path_gains } => {
                    gold31(*user_code).map_err(|e| Error::Config(format!("interferers[{i}]: {e}")))?;
                    if path_delays.is_empty() || path_delays.len() != path_doas.len() {
                        return Err(Error::Config(format!(
                            "interferers[{i}]: need matching non-empty path_delays and path_doas"
                        )));
                    }
                    if let Some(d) = path_delays.iter().find(|&&d| d >= n) {
                        return Err(Error::Config(format!("interferers[{i}]: path delay {d} >= {n}")));
                    }
                    for &d in path_doas {
                        check_doa(d, &format!("interferers[{i}].path_doas"))?;
                    }
                    if let Some(g) = path_gains {
                        if g.len() != path_delays.len() || g.iter().any(|&x| !(x > 0.0)) {
                            return Err(Error::Config(format!(
                                "interferers[{i}]: path_gains must be positive, one per path"
                            )));
                        }
                    }
                }
                InterfererKind::Tone { offset } => {
                    if !offset.is_finite() {
                        return Err(Error::Config(format!("interferers[{i}]: tone offset must be finite")));
                    }
                    check_doa(it.doa_deg, &format!("interferers[{i}].doa_deg"))?;
                }
                _ => check_doa(it.doa_deg, &format!("interferers[{i}].doa_deg"))?,
            }
        }
        Ok(())
    }
}

fn check_doa(d: f64, what: &str) -> Result<()> {
    if d.abs() < 90.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{what} = {d} outside (-90, 90)")))
    }
}

/// Sample-level model of one directional path.
#[derive(Clone, Debug)]
pub enum Wave {
    /// i.i.d. ±1 chips.
    White,
    /// Block `k` carries `ωᵏ·t` with `ω = e^{j2π·block_cycles}`; `t` already
    /// includes phase and delay.
    Periodic { block_cycles: f64, omega: Complex64, block: Vec<Complex64> },
    /// Spread random bits of another user, delayed by `delay` chips.
    Mai { code: Vec<f64>, delay: usize, stream_tag: u64 },
}

#[derive(Clone, Debug)]
pub struct Path {
    pub interferer: usize,
    pub doa_deg: f64,
    pub steering: Vec<Complex64>,
    /// Linear power of this path.
    pub power: f64,
    pub wave: Wave,
    /// Stream tag used for the white chips of this path.
    pub tag: u64,
}

/// Frozen random quantities of a scenario (codes, phases, segments) and its path list.
#[derive(Clone, Debug)]
pub struct Realization {
    pub scenario: Scenario,
    pub c0: Vec<f64>,
    pub a0: Vec<Complex64>,
    pub paths: Vec<Path>,
}

pub(crate) const TAG_SOI_BITS: u64 = 0x501;
const TAG_PHASE: u64 = 0x9a5e;
const TAG_SEGMENT: u64 = 0x5e9;

impl Realization {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let n = scenario.processing_gain();
        let n0 = scenario.soi.delay;
        let geom = &scenario.geometry;
        let c0 = gold31(scenario.soi.code_index)?;
        let a0 = steering(scenario.soi.doa_deg, geom)?;
        let mut paths = Vec::new();
        for (i, it) in scenario.interferers.iter().enumerate() {
            let tag = 0x1000 + i as u64;
            match &it.kind {
                InterfererKind::BpskWhite => paths.push(Path {
                    interferer: i,
                    doa_deg: it.doa_deg,
                    steering: steering(it.doa_deg, geom)?,
                    power: it.power,
                    wave: Wave::White,
                    tag,
                }),
                InterfererKind::Tone { offset } => {
                    let phi = 2.0 * std::f64::consts::PI * uniform01(hash3(scenario.seed, TAG_PHASE, i as u64));
                    let block = (0..n)
                        .map(|m| Complex64::from_polar(1.0, phi + 2.0 * std::f64::consts::PI * cycles(*offset, (n0 + m) as f64)))
                        .collect();
                    let block_cycles = cycles(*offset, n as f64);
                    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * block_cycles);
                    paths.push(Path {
                        interferer: i,
                        doa_deg: it.doa_deg,
                        steering: steering(it.doa_deg, geom)?,
                        power: it.power,
                        wave: Wave::Periodic { block_cycles, omega, block },
                        tag,
                    });
                }
                InterfererKind::PeriodicalNoise { segment_seed } => {
                    let seed = segment_seed.unwrap_or_else(|| hash3(scenario.seed, TAG_SEGMENT, i as u64));
                    let g = unit_power_gaussian_segment(seed, n);
                    let block = (0..n).map(|m| g[(n0 + m) % n]).collect();
                    paths.push(Path {
                        interferer: i,
                        doa_deg: it.doa_deg,
                        steering: steering(it.doa_deg, geom)?,
                        power: it.power,
                        wave: Wave::Periodic { block_cycles: 0.0, omega: Complex64::new(1.0, 0.0), block },
                        tag,
                    });
                }
                InterfererKind::MaiMultipath { user_code, path_delays, path_doas, path_gains } => {
                    let code = gold31(*user_code)?;
                    let np = path_delays.len();
                    let total: f64 = path_gains.as_ref().map_or(np as f64, |g| g.iter().sum());
                    for p in 0..np {
                        let frac = path_gains.as_ref().map_or(1.0, |g| g[p]) / total;
                        paths.push(Path {
                            interferer: i,
                            doa_deg: path_doas[p],
                            steering: steering(path_doas[p], geom)?,
                            power: it.power * frac,
                            wave: Wave::Mai { code: code.clone(), delay: path_delays[p], stream_tag: tag },
                            tag: tag * 64 + p as u64,
                        });
                    }
                }
            }
        }
        Ok(Self { scenario: scenario.clone(), c0, a0, paths })
    }

    pub fn processing_gain(&self) -> usize {
        self.c0.len()
    }

    /// Interference steering matrix `A_I` (L × D), one column per path.
    pub fn steering_matrix(&self) -> ComplexMatrix {
        let l = self.scenario.elements();
        ComplexMatrix::from_fn(l, self.paths.len(), |r, c| self.paths[c].steering[r])
    }

    /// `E{sₚ(k) s_q(k)ᴴ}` for the unit-power waveforms of paths `p`, `q` over one block,
    /// or `None` when it vanishes.
    pub fn block_cov(&self, p: usize, q: usize) -> Option<ComplexMatrix> {
        let n = self.processing_gain();
        let n0 = self.scenario.soi.delay;
        let (pp, pq) = (&self.paths[p], &self.paths[q]);
        match (&pp.wave, &pq.wave) {
            (Wave::White, Wave::White) if p == q => Some(ComplexMatrix::identity(n)),
            (Wave::Periodic { omega: wp, block: tp, .. }, Wave::Periodic { omega: wq, block: tq, .. }) => {
                if p == q || (wp - wq).norm() < 1e-9 {
                    Some(ComplexMatrix::outer(tp, tq))
                } else {
                    None
                }
            }
            (Wave::Mai { code: cp, delay: dp, stream_tag: sp }, Wave::Mai { code: cq, delay: dq, stream_tag: sq })
                if sp == sq =>
            {
                // chips a and b share a bit only when they fall in the same symbol
                let base = (n * 4 + n0) as i64;
                let nn = n as i64;
                Some(ComplexMatrix::from_fn(n, n, |r, c| {
                    let a = base + r as i64 - *dp as i64;
                    let b = base + c as i64 - *dq as i64;
                    if a.div_euclid(nn) == b.div_euclid(nn) {
                        Complex64::new(cp[a.rem_euclid(nn) as usize] * cq[b.rem_euclid(nn) as usize], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }))
            }
            _ => None,
        }
    }

    /// One-period waveform matrix `S_I` (N × P) of the periodic paths.
    pub fn periodic_waveforms(&self) -> Option<ComplexMatrix> {
        let cols: Vec<Vec<Complex64>> = self
            .paths
            .iter()
            .filter_map(|p| match &p.wave {
                Wave::Periodic { block, .. } => Some(block.clone()),
                _ => None,
            })
            .collect();
        if cols.is_empty() {
            None
        } else {
            Some(ComplexMatrix::from_columns(&cols))
        }
    }

    pub fn all_periodic(&self) -> bool {
        !self.paths.is_empty() && self.paths.iter().all(|p| matches!(p.wave, Wave::Periodic { .. }))
    }
}

/// Fractional cycles `f·t mod 1`, kept accurate for large `t`.
pub(crate) fn cycles(f: f64, t: f64) -> f64 {
    (f * t).rem_euclid(1.0)
}
