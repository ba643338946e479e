//! Command-line front end: tap-window tables, bound curves, Monte Carlo
//! validation and pilot spectrum reports, all as CSV or JSON.
//!
//! Times are normalized so that `tau_ds = 1` by default and the bandwidth is
//! given as a multiple of `1/tau_ds`; every reported quantity depends only on
//! `B tau_ds`, `N`, the SNR and the profile shape. SNR is entered in dB and
//! converted to linear scale once, at this boundary.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{bound_curve, crb_beta, SoundingConfig};
use crate::covariance::{build_covariance, min_window, tap_energy, TapCovariance, TapGrid};
use crate::error::{Error, Result};
use crate::montecarlo::{run_trials, Estimator, PilotSource, TrialConfig};
use crate::pdp::{PdpKind, PdpSpec};
use crate::pilots::{folded_psd, PilotKind, PilotSequence};

#[derive(Debug, Parser)]
#[command(
    name = "chanbound",
    about = "CRB/BCRB bounds for pilot-based bandlimited channel estimation",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal tap windows (L1, L2) capturing a threshold of the tap energy
    Table1(Table1Args),
    /// Bound curves (beta, BCRB, wideband BCRB) versus SNR
    Bounds(BoundsArgs),
    /// Monte Carlo LS/MMSE validation with bound columns merged in
    Simulate(SimulateArgs),
    /// Pilot autocorrelation lags and folded power spectrum
    PilotSpectrum(PilotSpectrumArgs),
    /// Export the tap covariance matrix for a window
    Covariance(CovarianceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// PDP name (exponential|gaussian|uniform|trunc_exponential|delta) or
    /// inline JSON {"kind":..., "tau_ds":..., "tau_m":...}
    #[arg(long, default_value = "exponential")]
    pub pdp: String,

    /// Sounding bandwidth as a multiple of 1/tau_ds
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth: f64,

    /// Maximum delay of the truncated exponential (defaults to 6 tau_ds)
    #[arg(long)]
    pub tau_m: Option<f64>,

    /// Tap window "L1,L2", or "auto" to search with the energy threshold
    #[arg(long, default_value = "auto")]
    pub window: String,

    /// Number of processed observation samples N
    #[arg(long, default_value_t = 100)]
    pub n: usize,

    /// SNR points in dB: comma list "a,b,c" or range "start:step:stop"
    #[arg(long, default_value = "-20:5:30", allow_hyphen_values = true)]
    pub snr_db: String,

    /// Average pilot sample power Px
    #[arg(long, default_value_t = 1.0)]
    pub px: f64,

    /// Monte Carlo trial count
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,

    /// Master seed for pilots, channels and noise
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Captured-energy threshold for window searches
    #[arg(long, default_value_t = 0.9)]
    pub threshold: f64,

    /// Pilot kind: cm | gaussian | zc:<period>[:root]
    #[arg(long, default_value = "cm")]
    pub pilot: String,

    /// Load the pilot from a CSV file ("re,im" per line) instead
    #[arg(long)]
    pub pilot_file: Option<PathBuf>,

    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    pub format: String,

    /// Output path, or "-" for stdout
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Bandwidth multiples, one table row each
    #[arg(long, default_value = "1,10")]
    pub bandwidths: String,

    /// PDP kinds, one table column each
    #[arg(long, default_value = "e,g,u,te")]
    pub kinds: String,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Estimators to run (comma list of ls, mmse)
    #[arg(long, default_value = "ls,mmse")]
    pub estimators: String,
}

#[derive(Debug, Args)]
pub struct PilotSpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Generated pilot length
    #[arg(long, default_value_t = 100_000)]
    pub length: usize,

    /// Highest autocorrelation lag to report
    #[arg(long, default_value_t = 50)]
    pub maxlag: usize,

    /// Number of PSD sample frequencies across (-fs/2, fs/2)
    #[arg(long, default_value_t = 257)]
    pub psd_points: usize,
}

#[derive(Debug, Args)]
pub struct CovarianceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Table1(a) => cmd_table1(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::PilotSpectrum(a) => cmd_pilot_spectrum(&a),
        Command::Covariance(a) => cmd_covariance(&a),
    }
}

// ---------------------------------------------------------------- helpers

fn parse_pdp(common: &CommonArgs) -> Result<PdpSpec> {
    let s = common.pdp.trim();
    if s.starts_with('{') {
        PdpSpec::from_json(s)
    } else {
        PdpSpec::from_name(s, 1.0, common.tau_m)
    }
}

/// Bandwidth in hertz for a profile, from the `1/tau_ds` multiple.
fn bandwidth_hz(spec: &PdpSpec, multiple: f64) -> Result<f64> {
    if !multiple.is_finite() || multiple <= 0.0 {
        return Err(Error::Parse(format!(
            "bandwidth must be > 0, got {multiple}"
        )));
    }
    let tds = if spec.kind == PdpKind::DeltaTest {
        1.0
    } else {
        spec.tau_ds
    };
    Ok(multiple / tds)
}

fn parse_snr_db_list(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    let parse = |tok: &str| -> Result<f64> {
        tok.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("snr-db entry '{tok}': {e}")))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "snr-db range must be start:step:stop, got '{s}'"
            )));
        }
        let (start, step, stop) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step == 0.0 || (stop - start) * step < 0.0 {
            return Err(Error::Parse(format!(
                "snr-db range '{s}' does not terminate"
            )));
        }
        let mut v = Vec::new();
        let mut x = start;
        let eps = 1e-9 * step.abs();
        while (step > 0.0 && x <= stop + eps) || (step < 0.0 && x >= stop - eps) {
            v.push(x);
            x += step;
        }
        Ok(v)
    } else {
        let v: Result<Vec<f64>> = s.split(',').map(parse).collect();
        let v = v?;
        if v.is_empty() {
            return Err(Error::Parse("snr-db list is empty".into()));
        }
        Ok(v)
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn parse_window(spec: &PdpSpec, b_hz: f64, common: &CommonArgs) -> Result<TapGrid> {
    let w = common.window.trim();
    if w.eq_ignore_ascii_case("auto") {
        let (l1, l2) = min_window(spec, b_hz, common.threshold)?;
        TapGrid::new(b_hz, l1, l2)
    } else {
        let parts: Vec<&str> = w.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!(
                "window must be 'L1,L2' or 'auto', got '{w}'"
            )));
        }
        let l1 = parts[0]
            .trim()
            .parse::<u32>()
            .map_err(|e| Error::Parse(format!("window L1 '{}': {e}", parts[0])))?;
        let l2 = parts[1]
            .trim()
            .parse::<u32>()
            .map_err(|e| Error::Parse(format!("window L2 '{}': {e}", parts[1])))?;
        TapGrid::new(b_hz, l1, l2)
    }
}

fn parse_estimators(s: &str) -> Result<Vec<Estimator>> {
    let mut v = Vec::new();
    for tok in s.split(',') {
        match tok.trim().to_ascii_lowercase().as_str() {
            "ls" => v.push(Estimator::Ls),
            "mmse" | "lmmse" => v.push(Estimator::Mmse),
            other => return Err(Error::Parse(format!("unknown estimator '{other}'"))),
        }
    }
    if v.is_empty() {
        return Err(Error::Parse("estimator list is empty".into()));
    }
    Ok(v)
}

/// Resolve the pilot for a sounding run over `grid` with `n` observations.
fn resolve_pilot_source(common: &CommonArgs, grid: &TapGrid, n: usize) -> Result<PilotSource> {
    if let Some(path) = &common.pilot_file {
        let text = fs::read_to_string(path)?;
        let first = 1 - grid.l2() as i64;
        let p = PilotSequence::from_csv(&text, first, grid.fs())?;
        return Ok(PilotSource::Explicit(p));
    }
    let spec = common.pilot.trim().to_ascii_lowercase();
    if spec == "cm" {
        return Ok(PilotSource::Generated {
            kind: PilotKind::ConstantModulusRandomPhase,
            seed: common.seed,
        });
    }
    if spec == "gaussian" {
        return Ok(PilotSource::Generated {
            kind: PilotKind::GaussianWhite,
            seed: common.seed,
        });
    }
    if let Some(rest) = spec.strip_prefix("zc:") {
        let mut it = rest.split(':');
        let period: u32 = it
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|e| Error::Parse(format!("zc period: {e}")))?;
        let root: u32 = match it.next() {
            Some(r) => r
                .parse()
                .map_err(|e| Error::Parse(format!("zc root: {e}")))?,
            None => 1,
        };
        // seed only rotates the global phase; orthogonality is unaffected
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(common.seed);
        let phase = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
        let first = 1 - grid.l2() as i64;
        let len = n + grid.l1() as usize + grid.l2() as usize;
        let p = PilotSequence::zadoff_chu(period, root, common.px, phase, first, len, grid.fs())?;
        return Ok(PilotSource::Explicit(p));
    }
    Err(Error::Parse(format!(
        "pilot must be cm, gaussian or zc:<period>[:root], got '{}'",
        common.pilot
    )))
}

fn write_output(out: &str, content: &str) -> Result<()> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(content.as_bytes())?;
        Ok(())
    } else {
        fs::write(out, content)?;
        Ok(())
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

// ---------------------------------------------------------------- table1

#[derive(Debug, Serialize)]
struct Table1Cell {
    b_multiple: f64,
    kind: String,
    l1: Option<u32>,
    l2: Option<u32>,
    l_total: Option<u32>,
    captured: Option<f64>,
    status: String,
}

fn cmd_table1(args: &Table1Args) -> Result<()> {
    let common = &args.common;
    let b_multiples: Result<Vec<f64>> = args
        .bandwidths
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bandwidths entry '{t}': {e}")))
        })
        .collect();
    let b_multiples = b_multiples?;

    let mut cells = Vec::new();
    for &bm in &b_multiples {
        for kind in args.kinds.split(',') {
            let kind = kind.trim();
            // TE infeasibility (or any per-cell failure) must not abort the rest
            let cell = (|| -> Result<(u32, u32, f64)> {
                let spec = PdpSpec::from_name(kind, 1.0, common.tau_m)?;
                let b_hz = bandwidth_hz(&spec, bm)?;
                let (l1, l2) = min_window(&spec, b_hz, common.threshold)?;
                let mut captured = 0.0;
                for l in -(l1 as i64)..=(l2 as i64) {
                    captured += tap_energy(&spec, b_hz, l)?;
                }
                Ok((l1, l2, captured))
            })();
            let label = PdpSpec::from_name(kind, 1.0, None)
                .map(|s| s.kind.label().to_string())
                .unwrap_or_else(|_| kind.to_string());
            match cell {
                Ok((l1, l2, captured)) => cells.push(Table1Cell {
                    b_multiple: bm,
                    kind: label,
                    l1: Some(l1),
                    l2: Some(l2),
                    l_total: Some(l1 + l2 + 1),
                    captured: Some(captured),
                    status: "ok".into(),
                }),
                Err(e) => cells.push(Table1Cell {
                    b_multiple: bm,
                    kind: label,
                    l1: None,
                    l2: None,
                    l_total: None,
                    captured: None,
                    status: format!("error:{}", e.category()),
                }),
            }
        }
    }

    // aligned human-readable table on stderr, machine output on --out
    let mut human = format!("{:>12} |", "B*tau_ds");
    for kind in args.kinds.split(',') {
        human.push_str(&format!(" {:>18}", kind.trim()));
    }
    human.push('\n');
    for &bm in &b_multiples {
        human.push_str(&format!("{bm:>12} |"));
        for cell in cells.iter().filter(|c| c.b_multiple == bm) {
            let txt = match (cell.l1, cell.l2) {
                (Some(l1), Some(l2)) => format!("({l1},{l2})"),
                _ => cell.status.clone(),
            };
            human.push_str(&format!(" {txt:>18}"));
        }
        human.push('\n');
    }
    eprint!("{human}");

    let content = match common.format.as_str() {
        "json" => {
            serde_json::to_string_pretty(&json!({ "cells": cells }))
                .map_err(|e| Error::Parse(e.to_string()))?
                + "\n"
        }
        _ => {
            let mut s = String::from("b_multiple,kind,l1,l2,l_total,captured,status\n");
            for c in &cells {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    c.b_multiple,
                    c.kind,
                    c.l1.map(|v| v.to_string()).unwrap_or_default(),
                    c.l2.map(|v| v.to_string()).unwrap_or_default(),
                    c.l_total.map(|v| v.to_string()).unwrap_or_default(),
                    c.captured.map(fmt).unwrap_or_default(),
                    c.status
                ));
            }
            s
        }
    };
    write_output(&common.out, &content)
}

// ---------------------------------------------------------------- bounds

fn prepare_covariance(common: &CommonArgs) -> Result<(PdpSpec, TapGrid, TapCovariance)> {
    let spec = parse_pdp(common)?;
    let b_hz = bandwidth_hz(&spec, common.bandwidth)?;
    let grid = parse_window(&spec, b_hz, common)?;
    let cov = build_covariance(&spec, &grid)?;
    Ok((spec, grid, cov))
}

fn cmd_bounds(args: &BoundsArgs) -> Result<()> {
    let common = &args.common;
    let (spec, grid, cov) = prepare_covariance(common)?;
    let snrs_db = parse_snr_db_list(&common.snr_db)?;
    let snrs: Vec<f64> = snrs_db.iter().map(|&db| db_to_linear(db)).collect();
    let ph0 = spec.value(0.0).ok();
    let curve = bound_curve(&cov, common.n, common.px, &snrs, ph0)?;

    let content = match common.format.as_str() {
        "json" => {
            serde_json::to_string_pretty(&json!({
                "pdp": spec,
                "grid": grid,
                "n": common.n,
                "px": common.px,
                "snr_db": snrs_db,
                "points": curve.points,
            }))
            .map_err(|e| Error::Parse(e.to_string()))?
                + "\n"
        }
        _ => {
            let mut s = String::from("snr_db,beta,bcrb,bcrb_wideband\n");
            for (db, p) in snrs_db.iter().zip(&curve.points) {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt(*db),
                    fmt(p.beta),
                    fmt(p.bcrb_eigen),
                    fmt(p.bcrb_wideband.unwrap_or(f64::NAN))
                ));
            }
            s
        }
    };
    write_output(&common.out, &content)
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Serialize)]
struct SimulateRow {
    snr_db: f64,
    estimator: String,
    mse: f64,
    stderr: f64,
    trials: usize,
    beta: f64,
    bcrb: f64,
    bcrb_wideband: Option<f64>,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let common = &args.common;
    let (spec, grid, cov) = prepare_covariance(common)?;
    let estimators = parse_estimators(&args.estimators)?;
    let snrs_db = parse_snr_db_list(&common.snr_db)?;
    let ph0 = spec.value(0.0).ok();
    let pilot = resolve_pilot_source(common, &grid, common.n)?;

    let mut rows = Vec::new();
    for &db in &snrs_db {
        let snr = db_to_linear(db);
        let cfg = SoundingConfig::from_snr(common.n, common.px, snr, grid.bandwidth())?;
        let tc = TrialConfig {
            cfg,
            grid,
            pilot: pilot.clone(),
            master_seed: common.seed,
            n_trials: common.trials,
            estimators: estimators.clone(),
        };
        let result =
            run_trials(&tc, &cov).map_err(|e| e.with_context(&format!("snr point {db} dB")))?;
        let beta = crb_beta(grid.len(), &cfg);
        let bcrb = crate::bounds::bcrb_trace(&cov, &cfg);
        let wideband = match ph0 {
            Some(p) => Some(crate::bounds::bcrb_wideband(grid.len(), &cfg, p)?),
            None => None,
        };
        for st in &result.stats {
            rows.push(SimulateRow {
                snr_db: db,
                estimator: st.estimator.label().to_string(),
                mse: st.mse,
                stderr: st.stderr,
                trials: st.trials,
                beta,
                bcrb,
                bcrb_wideband: wideband,
            });
        }
    }

    let content = match common.format.as_str() {
        "json" => {
            serde_json::to_string_pretty(&json!({
                "pdp": spec,
                "grid": grid,
                "n": common.n,
                "rows": rows,
            }))
            .map_err(|e| Error::Parse(e.to_string()))?
                + "\n"
        }
        _ => {
            let mut s =
                String::from("snr_db,estimator,mse,stderr,trials,beta,bcrb,bcrb_wideband\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    fmt(r.snr_db),
                    r.estimator,
                    fmt(r.mse),
                    fmt(r.stderr),
                    r.trials,
                    fmt(r.beta),
                    fmt(r.bcrb),
                    fmt(r.bcrb_wideband.unwrap_or(f64::NAN))
                ));
            }
            s
        }
    };
    write_output(&common.out, &content)
}

// ---------------------------------------------------------- pilot spectrum

fn cmd_pilot_spectrum(args: &PilotSpectrumArgs) -> Result<()> {
    let common = &args.common;
    let spec = parse_pdp(common)?;
    let b_hz = bandwidth_hz(&spec, common.bandwidth)?;
    let fs = 2.0 * b_hz;

    let pilot = if let Some(path) = &common.pilot_file {
        let text = fs::read_to_string(path)?;
        PilotSequence::from_csv(&text, 1, fs)?
    } else {
        match common.pilot.trim().to_ascii_lowercase().as_str() {
            "cm" => PilotSequence::gen_range(
                PilotKind::ConstantModulusRandomPhase,
                1,
                args.length,
                common.px,
                common.seed,
                fs,
            )?,
            "gaussian" => PilotSequence::gen_range(
                PilotKind::GaussianWhite,
                1,
                args.length,
                common.px,
                common.seed,
                fs,
            )?,
            other => {
                if let Some(rest) = other.strip_prefix("zc:") {
                    let period: u32 = rest
                        .split(':')
                        .next()
                        .unwrap_or_default()
                        .parse()
                        .map_err(|e| Error::Parse(format!("zc period: {e}")))?;
                    PilotSequence::zadoff_chu(period, 1, common.px, 0.0, 1, args.length, fs)?
                } else {
                    return Err(Error::Parse(format!("unknown pilot '{other}'")));
                }
            }
        }
    };

    let lags = pilot.sample_autocorr(args.maxlag)?;
    if args.psd_points < 2 {
        return Err(Error::Parse("psd-points must be >= 2".into()));
    }
    let mut psd = Vec::with_capacity(args.psd_points);
    for i in 0..args.psd_points {
        let f = -fs / 2.0 + fs * i as f64 / (args.psd_points - 1) as f64;
        psd.push((f, folded_psd(&lags, f, fs)?));
    }

    let content = match common.format.as_str() {
        "json" => {
            serde_json::to_string_pretty(&json!({
                "px": pilot.px(),
                "fs": fs,
                "lags": lags.iter().map(|l| [l.re, l.im]).collect::<Vec<_>>(),
                "psd": psd.iter().map(|(f, s)| json!({"f": f, "psd": s})).collect::<Vec<_>>(),
            }))
            .map_err(|e| Error::Parse(e.to_string()))?
                + "\n"
        }
        _ => {
            let mut s = String::from("series,x,value_re,value_im\n");
            for (k, lag) in lags.iter().enumerate() {
                s.push_str(&format!("lag,{k},{},{}\n", fmt(lag.re), fmt(lag.im)));
            }
            for (f, v) in &psd {
                s.push_str(&format!("psd,{},{},{}\n", fmt(*f), fmt(*v), fmt(0.0)));
            }
            s
        }
    };
    write_output(&common.out, &content)
}

// ---------------------------------------------------------------- covariance

fn cmd_covariance(args: &CovarianceArgs) -> Result<()> {
    let common = &args.common;
    let (spec, grid, cov) = prepare_covariance(common)?;

    let content = match common.format.as_str() {
        "json" => {
            let m = cov.matrix();
            let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "pdp": spec,
                "grid": grid,
                "matrix": rows,
                "eigenvalues": cov.eigenvalues().iter().copied().collect::<Vec<f64>>(),
                "total_energy": cov.total_energy(),
                "clamped": cov.clamped_count(),
            }))
            .map_err(|e| Error::Parse(e.to_string()))?
                + "\n"
        }
        _ => {
            let m = cov.matrix();
            let mut s = String::from("row,col,re,im\n");
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    s.push_str(&format!(
                        "{i},{j},{},{}\n",
                        fmt(m[(i, j)].re),
                        fmt(m[(i, j)].im)
                    ));
                }
            }
            s
        }
    };
    write_output(&common.out, &content)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_list_forms() {
        assert_eq!(parse_snr_db_list("0,5,10").unwrap(), vec![0.0, 5.0, 10.0]);
        assert_eq!(
            parse_snr_db_list("-10:5:0").unwrap(),
            vec![-10.0, -5.0, 0.0]
        );
        assert!(parse_snr_db_list("0:0:10").is_err());
        assert!(parse_snr_db_list("a,b").is_err());
    }

    #[test]
    fn window_parsing() {
        let spec = PdpSpec::delta_test();
        let common = CommonArgs {
            pdp: "delta".into(),
            bandwidth: 1.0,
            tau_m: None,
            window: "3,6".into(),
            n: 100,
            snr_db: "0".into(),
            px: 1.0,
            trials: 1,
            seed: 0,
            threshold: 0.9,
            pilot: "cm".into(),
            pilot_file: None,
            format: "csv".into(),
            out: "-".into(),
        };
        let g = parse_window(&spec, 1.0, &common).unwrap();
        assert_eq!((g.l1(), g.l2()), (3, 6));
        let mut bad = common.clone();
        bad.window = "3".into();
        assert!(parse_window(&spec, 1.0, &bad).is_err());
    }

    #[test]
    fn estimator_parsing() {
        assert_eq!(
            parse_estimators("ls,mmse").unwrap(),
            vec![Estimator::Ls, Estimator::Mmse]
        );
        assert!(parse_estimators("foo").is_err());
    }
}
