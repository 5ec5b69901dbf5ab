use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mpb_core::harness::{
    analyze, eigen_csv, fmt_num, load_config, pattern_csv, preset, run_eigencurves, run_pattern, run_sweep,
    sweep_csv, with_workers, write_file, ExperimentConfig, FULL_SYMBOLS, PRESET_NAMES,
};
use mpb_core::Error;

#[derive(Parser, Debug)]
#[command(name = "mpb", version, about = "Matrix pair beamformer simulation and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario (see `presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (default: out_dir from the config, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo symbols per point.
    #[arg(long)]
    symbols: Option<usize>,
    /// Use 10^6 symbols per point.
    #[arg(long)]
    full: bool,
    /// Comma-separated SNR list in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    inr_db: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulated and predicted operating curves, one CSV per scheme.
    Sweep(Common),
    /// Array patterns at the configured (or --snr-db) SNRs.
    Pattern(Common),
    /// γ₀+1, γ₁+1 and λ_max over the SNR grid.
    Eigen(Common),
    /// Thresholds, noise-free pair analysis and γ₁ versus INR.
    Analyze(Common),
    /// List built-in presets.
    Presets,
}

fn load(c: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match (&c.config, &c.preset) {
        (Some(_), Some(_)) => return Err(Error::Config("give either --config or --preset, not both".into())),
        (Some(p), None) => load_config(p)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => return Err(Error::Config("one of --config or --preset is required".into())),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(k) = c.symbols {
        cfg.symbols = k;
    }
    if c.full {
        cfg.symbols = FULL_SYMBOLS;
    }
    if let Some(i) = c.inr_db {
        cfg.inr_db = i;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(c: &Common, cfg: &ExperimentConfig) -> PathBuf {
    c.out.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("out"))
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(v).map_err(|e| Error::InvalidArgument(format!("serialize: {e}")))
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Presets => {
            for p in PRESET_NAMES {
                println!("{p}");
            }
        }
        Command::Sweep(c) => {
            let mut cfg = load(&c)?;
            if let Some(g) = &c.snr_db {
                cfg.snr_grid_db = g.clone();
                cfg.validate()?;
            }
            let dir = out_dir(&c, &cfg);
            let sweeps = with_workers(c.workers, || run_sweep(&cfg))??;
            for s in &sweeps {
                let name = format!("sweep_{}.csv", s.label);
                write_file(&dir, &name, &sweep_csv(&s.rows))?;
                println!("{}: {} points -> {}", s.label, s.rows.len(), dir.join(&name).display());
                for (snr, msg) in &s.errors {
                    eprintln!("{}: point at {snr} dB failed: {msg}", s.label);
                }
            }
        }
        Command::Pattern(c) => {
            let cfg = load(&c)?;
            let snrs = c.snr_db.clone().unwrap_or_else(|| cfg.pattern_snr_db.clone());
            let dir = out_dir(&c, &cfg);
            let pats = with_workers(c.workers, || run_pattern(&cfg, &snrs))??;
            for p in &pats {
                let name = format!("pattern_{}_{}dB.csv", p.label, p.snr_db);
                write_file(&dir, &name, &pattern_csv(p))?;
                println!("{} at {} dB -> {}", p.label, p.snr_db, dir.join(&name).display());
            }
        }
        Command::Eigen(c) => {
            let mut cfg = load(&c)?;
            if let Some(g) = &c.snr_db {
                cfg.snr_grid_db = g.clone();
                cfg.validate()?;
            }
            let dir = out_dir(&c, &cfg);
            let curves = with_workers(c.workers, || run_eigencurves(&cfg))??;
            for e in &curves {
                let name = format!("eigen_{}.csv", e.label);
                write_file(&dir, &name, &eigen_csv(e))?;
                let cross = e.crossing_snr_db.map_or("none".to_string(), |x| format!("{} dB", fmt_num(x)));
                println!("{}: crossing {}, predicted threshold {} dB", e.label, cross, fmt_num(e.snr_t0_db));
            }
        }
        Command::Analyze(c) => {
            let cfg = load(&c)?;
            let dir = out_dir(&c, &cfg);
            let report = with_workers(c.workers, || analyze(&cfg))??;
            let text = json(&report)?;
            write_file(&dir, "analysis.json", &text)?;
            println!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
