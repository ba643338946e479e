//! Monte Carlo validation of the bounds.
//!
//! Each trial draws a Rayleigh channel from the tap covariance, synthesizes
//! the observation `y = X h + w` and runs the configured estimators. Trials
//! use independent ChaCha substreams keyed by `(master_seed, trial index)`,
//! so results are identical for any degree of parallelism; the pilot is
//! fixed across trials (known-waveform sounding).

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::SoundingConfig;
use crate::covariance::{TapCovariance, TapGrid};
use crate::error::{Error, Result};
use crate::pilots::{PilotKind, PilotSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Ls,
    Mmse,
}

impl Estimator {
    pub fn label(&self) -> &'static str {
        match self {
            Estimator::Ls => "ls",
            Estimator::Mmse => "mmse",
        }
    }
}

/// Where the (trial-invariant) pilot comes from.
#[derive(Debug, Clone)]
pub enum PilotSource {
    /// Generate with [`PilotSequence::for_sounding`] from `(kind, seed)`.
    Generated { kind: PilotKind, seed: u64 },
    /// Use the given sequence as-is (must cover the sounding range).
    Explicit(PilotSequence),
}

/// Full description of a Monte Carlo run.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub cfg: SoundingConfig,
    pub grid: TapGrid,
    pub pilot: PilotSource,
    pub master_seed: u64,
    pub n_trials: usize,
    pub estimators: Vec<Estimator>,
}

/// Aggregate error statistics for one estimator.
#[derive(Debug, Clone, Serialize)]
pub struct EstimatorStats {
    pub estimator: Estimator,
    /// Mean over trials of `sum_l |h_l - hhat_l|^2`.
    pub mse: f64,
    /// Standard error of that mean.
    pub stderr: f64,
    pub trials: usize,
    pub wall_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    pub stats: Vec<EstimatorStats>,
}

/// Draw `h ~ CN(0, R_h)` through the eigenfactor `U sqrt(Lambda) z` with
/// `z` i.i.d. circular complex normal of unit variance per component.
/// Zero eigenvalues produce deterministic zeros in their subspace.
pub fn draw_channel<R: Rng>(rh: &TapCovariance, rng: &mut R) -> DVector<Complex64> {
    let n = rh.grid().len();
    let mut scaled = DVector::zeros(n);
    for i in 0..n {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let s = (rh.eigenvalues()[i] / 2.0).sqrt();
        scaled[i] = Complex64::new(s * re, s * im);
    }
    rh.eigenvectors() * scaled
}

/// The `N x L` sounding matrix with `X[i, l] = x_{i-l}` (convolution-
/// consistent indexing; see the pilots module notes).
pub fn build_convolution_matrix(
    x: &PilotSequence,
    grid: &TapGrid,
    n: usize,
) -> Result<DMatrix<Complex64>> {
    if !x.covers(grid, n) {
        return Err(Error::Range(format!(
            "pilot covers [{}, {}] but the sounding matrix needs [{}, {}]",
            x.first_index(),
            x.last_index(),
            1 - grid.l2() as i64,
            n as i64 + grid.l1() as i64
        )));
    }
    let taps: Vec<i64> = grid.tap_indices().collect();
    let first = x.first_index();
    let s = x.samples();
    Ok(DMatrix::from_fn(n, taps.len(), |i, j| {
        s[((i as i64 + 1) - taps[j] - first) as usize]
    }))
}

/// `y = X h + w` with i.i.d. circular complex Gaussian noise of per-sample
/// variance `sigma_w2`. Noise draws are consumed even when `sigma_w2 = 0`
/// so substream alignment does not depend on the noise level.
pub fn synthesize_observation<R: Rng>(
    x_mat: &DMatrix<Complex64>,
    h: &DVector<Complex64>,
    sigma_w2: f64,
    rng: &mut R,
) -> DVector<Complex64> {
    let mut y = x_mat * h;
    let s = (sigma_w2 / 2.0).sqrt();
    for i in 0..y.len() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        y[i] += Complex64::new(s * re, s * im);
    }
    y
}

/// Least-squares estimate via a thin QR factorization.
pub fn ls_estimate(
    x_mat: &DMatrix<Complex64>,
    y: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    let qr = x_mat.clone().qr();
    let r = qr.r();
    check_triangular_rank(&r)?;
    let rhs = qr.q().adjoint() * y;
    r.solve_upper_triangular(&rhs).ok_or(Error::Conditioning {
        context: "upper-triangular solve failed".into(),
        min_eig: f64::NAN,
    })
}

fn check_triangular_rank(r: &DMatrix<Complex64>) -> Result<()> {
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols()))
        .map(|i| r[(i, i)].norm())
        .collect();
    let max = diag.iter().fold(0.0_f64, |a, &b| a.max(b));
    let min = diag.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if min.is_nan() || min <= 1e-12 * max.max(f64::MIN_POSITIVE) {
        return Err(Error::Conditioning {
            context: "sounding matrix is rank deficient".into(),
            min_eig: min,
        });
    }
    Ok(())
}

/// Exact finite-sample LS MSE `sigma_w2 * tr((X^H X)^{-1})`.
pub fn ls_theoretical_mse(x_mat: &DMatrix<Complex64>, sigma_w2: f64) -> Result<f64> {
    let gram = x_mat.adjoint() * x_mat;
    let chol = gram.cholesky().ok_or(Error::Conditioning {
        context: "pilot Gram matrix is singular".into(),
        min_eig: f64::NAN,
    })?;
    let n = x_mat.ncols();
    let linv = chol
        .l()
        .solve_lower_triangular(&DMatrix::<Complex64>::identity(n, n))
        .ok_or(Error::Conditioning {
            context: "triangular solve failed".into(),
            min_eig: f64::NAN,
        })?;
    Ok(sigma_w2 * linv.norm_squared())
}

/// Linear MMSE estimate `R_h X^H (X R_h X^H + sigma_w2 I)^{-1} y`
/// (a form valid for singular `R_h`).
pub fn mmse_estimate(
    x_mat: &DMatrix<Complex64>,
    y: &DVector<Complex64>,
    rh: &TapCovariance,
    sigma_w2: f64,
) -> Result<DVector<Complex64>> {
    let gain = mmse_gain(x_mat, rh, sigma_w2)?;
    Ok(&gain * y)
}

/// The MMSE gain `W = R_h X^H (X R_h X^H + sigma_w2 I)^{-1}`, computed once
/// per run through a Cholesky solve.
fn mmse_gain(
    x_mat: &DMatrix<Complex64>,
    rh: &TapCovariance,
    sigma_w2: f64,
) -> Result<DMatrix<Complex64>> {
    let n = x_mat.nrows();
    let xr = x_mat * rh.matrix(); // N x L
    let mut m = &xr * x_mat.adjoint();
    for i in 0..n {
        m[(i, i)] += Complex64::new(sigma_w2, 0.0);
    }
    let m = (m.clone() + m.adjoint()) * Complex64::new(0.5, 0.0);
    let chol = m.cholesky().ok_or(Error::Conditioning {
        context: "X R_h X^H + sigma_w2 I is not positive definite".into(),
        min_eig: f64::NAN,
    })?;
    // W^H = M^{-1} X R_h
    Ok(chol.solve(&xr).adjoint())
}

fn resolve_pilot(tc: &TrialConfig) -> Result<PilotSequence> {
    match &tc.pilot {
        PilotSource::Generated { kind, seed } => {
            PilotSequence::for_sounding(*kind, &tc.grid, tc.cfg.n, tc.cfg.px, *seed)
        }
        PilotSource::Explicit(p) => {
            if !p.covers(&tc.grid, tc.cfg.n) {
                return Err(Error::Range(format!(
                    "explicit pilot covers [{}, {}] but the run needs [{}, {}]",
                    p.first_index(),
                    p.last_index(),
                    1 - tc.grid.l2() as i64,
                    tc.cfg.n as i64 + tc.grid.l1() as i64
                )));
            }
            Ok(p.clone())
        }
    }
}

/// Per-trial squared-error records, `errors[trial][estimator_position]`.
///
/// Exposed so tests can check the substream contract (extending the trial
/// count preserves the per-trial errors of the shorter run).
pub fn per_trial_errors(tc: &TrialConfig, rh: &TapCovariance) -> Result<Vec<Vec<f64>>> {
    if tc.n_trials == 0 {
        return Err(Error::Range("n_trials must be >= 1".into()));
    }
    if tc.estimators.is_empty() {
        return Err(Error::Range(
            "at least one estimator must be requested".into(),
        ));
    }
    let l = tc.grid.len();
    if tc.estimators.contains(&Estimator::Ls) && tc.cfg.n < l {
        return Err(Error::Range(format!(
            "LS needs N >= L (N = {}, L = {l})",
            tc.cfg.n
        )));
    }
    if rh.grid() != &tc.grid {
        return Err(Error::Contract(
            "covariance grid differs from the trial grid".into(),
        ));
    }

    let pilot = resolve_pilot(tc)?;
    let x_mat = build_convolution_matrix(&pilot, &tc.grid, tc.cfg.n)?;

    // per-estimator operators, built once: the pilot is fixed across trials
    let ls_op = if tc.estimators.contains(&Estimator::Ls) {
        let qr = x_mat.clone().qr();
        let r = qr.r();
        check_triangular_rank(&r)?;
        Some((qr.q().adjoint(), r))
    } else {
        None
    };
    let mmse_op = if tc.estimators.contains(&Estimator::Mmse) {
        Some(mmse_gain(&x_mat, rh, tc.cfg.sigma_w2)?)
    } else {
        None
    };

    (0..tc.n_trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(tc.master_seed);
            rng.set_stream(1 + t as u64);
            let h = draw_channel(rh, &mut rng);
            let y = synthesize_observation(&x_mat, &h, tc.cfg.sigma_w2, &mut rng);
            let mut errs = Vec::with_capacity(tc.estimators.len());
            for est in &tc.estimators {
                let hhat = match est {
                    Estimator::Ls => {
                        let (q_adj, r) = ls_op.as_ref().expect("ls operator prepared");
                        r.solve_upper_triangular(&(q_adj * &y)).ok_or_else(|| {
                            Error::Conditioning {
                                context: format!("trial {t}: triangular solve failed"),
                                min_eig: f64::NAN,
                            }
                        })?
                    }
                    Estimator::Mmse => mmse_op.as_ref().expect("mmse operator prepared") * &y,
                };
                errs.push((&hhat - &h).norm_squared());
            }
            Ok(errs)
        })
        .collect()
}

/// Kahan-compensated sum; the aggregate is independent of trial scheduling
/// because per-trial values are reduced in trial order.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Run the Monte Carlo and aggregate mean square errors per estimator.
pub fn run_trials(tc: &TrialConfig, rh: &TapCovariance) -> Result<SimResult> {
    let start = Instant::now();
    let errors = per_trial_errors(tc, rh)?;
    let wall = start.elapsed().as_secs_f64();
    let t = tc.n_trials as f64;

    let stats = tc
        .estimators
        .iter()
        .enumerate()
        .map(|(idx, est)| {
            let mse = compensated_sum(errors.iter().map(|row| row[idx])) / t;
            let stderr = if tc.n_trials > 1 {
                let var = compensated_sum(errors.iter().map(|row| {
                    let d = row[idx] - mse;
                    d * d
                })) / (t - 1.0);
                (var / t).sqrt()
            } else {
                0.0
            };
            EstimatorStats {
                estimator: *est,
                mse,
                stderr,
                trials: tc.n_trials,
                wall_secs: wall,
            }
        })
        .collect();
    Ok(SimResult { stats })
}
