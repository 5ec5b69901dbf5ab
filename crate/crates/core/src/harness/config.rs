//! Experiment configuration (JSON) and built-in presets.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::from_db;
use crate::mpb::Scheme;
use crate::sigmodel::{
    gold31, normalized_offset, ArrayGeometry, InterfererKind, InterfererSpec, Scenario, SoiSpec, GOLD_FAMILY,
};

/// Noise variance of every generated scenario; powers are set relative to it.
pub const NOISE_VAR: f64 = 1.0;
/// Smallest accepted Monte Carlo length.
pub const MIN_SYMBOLS: usize = 100;
/// Monte Carlo length of the full-scale mode.
pub const FULL_SYMBOLS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoiConfig {
    #[serde(default)]
    pub code_index: usize,
    #[serde(default)]
    pub delay: usize,
    #[serde(default)]
    pub doa_deg: f64,
}

impl Default for SoiConfig {
    fn default() -> Self {
        Self { code_index: 0, delay: 0, doa_deg: 0.0 }
    }
}

/// One interferer; `rel_power_db` is relative to the configured INR.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InterfererConfig {
    BpskWhite {
        doa_deg: f64,
        #[serde(default)]
        rel_power_db: f64,
    },
    Tone {
        doa_deg: f64,
        offset_hz: f64,
        #[serde(default)]
        rel_power_db: f64,
    },
    PeriodicalNoise {
        doa_deg: f64,
        #[serde(default)]
        rel_power_db: f64,
        #[serde(default)]
        segment_seed: Option<u64>,
    },
    MaiMultipath {
        user_code: usize,
        path_delays: Vec<usize>,
        path_doas: Vec<f64>,
        #[serde(default)]
        path_gains: Option<Vec<f64>>,
        #[serde(default)]
        rel_power_db: f64,
    },
}

impl InterfererConfig {
    fn to_spec(&self, inr_db: f64) -> InterfererSpec {
        let power = |rel: f64| NOISE_VAR * from_db(inr_db + rel);
        match self {
            InterfererConfig::BpskWhite { doa_deg, rel_power_db } => {
                InterfererSpec { kind: InterfererKind::BpskWhite, doa_deg: *doa_deg, power: power(*rel_power_db) }
            }
            InterfererConfig::Tone { doa_deg, offset_hz, rel_power_db } => InterfererSpec {
                kind: InterfererKind::Tone { offset: normalized_offset(*offset_hz) },
                doa_deg: *doa_deg,
                power: power(*rel_power_db),
            },
            InterfererConfig::PeriodicalNoise { doa_deg, rel_power_db, segment_seed } => InterfererSpec {
                kind: InterfererKind::PeriodicalNoise { segment_seed: *segment_seed },
                doa_deg: *doa_deg,
                power: power(*rel_power_db),
            },
            InterfererConfig::MaiMultipath { user_code, path_delays, path_doas, path_gains, rel_power_db } => {
                InterfererSpec {
                    kind: InterfererKind::MaiMultipath {
                        user_code: *user_code,
                        path_delays: path_delays.clone(),
                        path_doas: path_doas.clone(),
                        path_gains: path_gains.clone(),
                    },
                    doa_deg: 0.0,
                    power: power(*rel_power_db),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub geometry: ArrayGeometry,
    #[serde(default)]
    pub soi: SoiConfig,
    pub interferers: Vec<InterfererConfig>,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default = "default_snr_grid")]
    pub snr_grid_db: Vec<f64>,
    #[serde(default = "default_inr_db")]
    pub inr_db: f64,
    #[serde(default = "default_symbols")]
    pub symbols: usize,
    #[serde(default)]
    pub seed: u64,
    /// SNRs at which `pattern` solves weights.
    #[serde(default)]
    pub pattern_snr_db: Vec<f64>,
    /// INRs tabulated by `analyze`.
    #[serde(default = "default_inr_table")]
    pub inr_table_db: Vec<f64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_schemes() -> Vec<Scheme> {
    vec![Scheme::Maximin { f_mf: crate::mpb::default_f_mf() }, Scheme::Papc { position: 0 }]
}

/// −30 dB to 50 dB in 2 dB steps.
pub fn default_snr_grid() -> Vec<f64> {
    (0..=40).map(|i| -30.0 + 2.0 * i as f64).collect()
}

fn default_inr_db() -> f64 {
    30.0
}

fn default_symbols() -> usize {
    100_000
}

fn default_inr_table() -> Vec<f64> {
    vec![10.0, 20.0, 30.0, 40.0]
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.snr_grid_db.is_empty() {
            return Err(Error::Config("snr_grid_db must not be empty".into()));
        }
        if self.snr_grid_db.iter().any(|v| !v.is_finite()) || self.snr_grid_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("snr_grid_db must be finite and strictly ascending".into()));
        }
        if self.symbols < MIN_SYMBOLS {
            return Err(Error::Config(format!("symbols must be at least {MIN_SYMBOLS}, got {}", self.symbols)));
        }
        if !self.inr_db.is_finite() {
            return Err(Error::Config("inr_db must be finite".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("schemes must not be empty".into()));
        }
        if self.soi.code_index >= GOLD_FAMILY {
            return Err(Error::Config(format!("soi.code_index must be below {GOLD_FAMILY}")));
        }
        let c0 = gold31(self.soi.code_index)?;
        for (i, s) in self.schemes.iter().enumerate() {
            s.bases(&c0).map_err(|e| Error::Config(format!("schemes[{i}]: {e}")))?;
        }
        self.scenario_at(0.0)?.validate()
    }

    /// Scenario at input SNR `snr_db` and the configured INR.
    pub fn scenario_at(&self, snr_db: f64) -> Result<Scenario> {
        self.scenario_at_inr(snr_db, self.inr_db)
    }

    pub fn scenario_at_inr(&self, snr_db: f64, inr_db: f64) -> Result<Scenario> {
        let mut s = Scenario {
            geometry: self.geometry,
            soi: SoiSpec {
                code_index: self.soi.code_index,
                delay: self.soi.delay,
                doa_deg: self.soi.doa_deg,
                power: 0.0,
            },
            interferers: self.interferers.iter().map(|i| i.to_spec(inr_db)).collect(),
            noise_var: NOISE_VAR,
            symbols: self.symbols,
            seed: self.seed,
        };
        s.set_snr(from_db(snr_db));
        Ok(s)
    }
}

/// Reads and validates a JSON config.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    cfg.validate()?;
    Ok(cfg)
}

pub const PRESET_NAMES: [&str; 5] = ["fig4a-bpsk3", "fig4b-pn2", "fig4c-tones5", "fig4d-mai3", "fig6-pn2"];

fn base(name: &str, interferers: Vec<InterfererConfig>) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        geometry: ArrayGeometry::default(),
        soi: SoiConfig::default(),
        interferers,
        schemes: default_schemes(),
        snr_grid_db: default_snr_grid(),
        inr_db: default_inr_db(),
        symbols: default_symbols(),
        seed: 1,
        pattern_snr_db: Vec::new(),
        inr_table_db: default_inr_table(),
        out_dir: None,
    }
}

fn pn(doa_deg: f64) -> InterfererConfig {
    InterfererConfig::PeriodicalNoise { doa_deg, rel_power_db: 0.0, segment_seed: None }
}

/// Built-in scenarios on an 8-element half-wavelength array, SOI at broadside.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let cfg = match name {
        "fig4a-bpsk3" => base(
            name,
            [30.0, -40.0, 60.0]
                .iter()
                .map(|&d| InterfererConfig::BpskWhite { doa_deg: d, rel_power_db: 0.0 })
                .collect(),
        ),
        "fig4b-pn2" => base(name, vec![pn(30.0), pn(-40.0)]),
        "fig4c-tones5" => base(
            name,
            [(100e3, 30.0), (-300e3, -50.0), (0.0, -20.0), (400e3, 19.0), (-100e3, 45.0)]
                .iter()
                .map(|&(f, d)| InterfererConfig::Tone { doa_deg: d, offset_hz: f, rel_power_db: 0.0 })
                .collect(),
        ),
        "fig4d-mai3" => base(
            name,
            vec![InterfererConfig::MaiMultipath {
                user_code: 1,
                path_delays: vec![3, 5, 4],
                path_doas: vec![30.0, -20.0, -50.0],
                path_gains: None,
                rel_power_db: 0.0,
            }],
        ),
        "fig6-pn2" => {
            let mut c = base(name, vec![pn(30.0), pn(-40.0)]);
            c.pattern_snr_db = vec![-10.1, 40.9];
            c
        }
        _ => {
            return Err(Error::Config(format!("unknown preset '{name}' (known: {})", PRESET_NAMES.join(", "))));
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            let j = serde_json::to_string_pretty(&c).unwrap();
            assert_eq!(parse_config(&j).unwrap(), c, "{name}");
        }
        assert!(preset("nope").unwrap_err().is_config());
    }

    #[test]
    fn rejects_bad_configs() {
        let ok = r#"{"interferers":[{"type":"bpsk_white","doa_deg":30}]}"#;
        let c = parse_config(ok).unwrap();
        assert_eq!(c.symbols, 100_000);
        assert_eq!(c.snr_grid_db.len(), 41);
        for bad in [
            r#"{"interferers":[], "bogus": 1}"#,
            r#"{"interferers":[], "snr_grid_db": []}"#,
            r#"{"interferers":[], "snr_grid_db": [1, 0]}"#,
            r#"{"interferers":[], "symbols": 10}"#,
            r#"{"interferers":[{"type":"tone","doa_deg":95,"offset_hz":0}]}"#,
            r#"{"interferers": "#,
        ] {
            assert!(parse_config(bad).unwrap_err().is_config(), "{bad}");
        }
    }

    #[test]
    fn preset_contents() {
        let c = preset("fig4a-bpsk3").unwrap();
        assert_eq!(c.interferers.len(), 3);
        assert_eq!(c.geometry.elements, 8);
        let s = c.scenario_at(10.0).unwrap();
        assert!((s.snr() - 10.0).abs() < 1e-12 && (s.inr() - 1000.0).abs() < 1e-9);
        let c = preset("fig4c-tones5").unwrap();
        assert_eq!(c.interferers.len(), 5);
    }
}
