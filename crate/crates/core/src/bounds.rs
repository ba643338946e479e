//! Estimation-error lower bounds for the TDL channel model.
//!
//! The deterministic-channel side provides the finite-sample Fisher
//! information of the pilot, its Toeplitz large-sample approximation, the
//! asymptotic per-tap integral bound and the flat-spectrum closed form
//! `beta = L / (N SNR)`. The Bayesian side adds the prior information
//! `R_h^{-1}` and evaluates the bound in the numerically stable eigenvalue
//! form `sum_i lambda_i / (N SNR lambda_i + 1)`, together with a direct
//! factorization route and the wideband closed form used as cross-checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::covariance::{TapCovariance, TapGrid};
use crate::error::{Error, Result};
use crate::pilots::PilotSequence;
use crate::quad::integrate_real;

/// Sounding-run parameters: `N` processed samples of power `Px` against
/// complex noise of per-sample variance `sigma_w2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SoundingConfig {
    pub n: usize,
    pub px: f64,
    pub sigma_w2: f64,
    pub bandwidth: f64,
}

impl SoundingConfig {
    /// `sigma_w2 = 0` is allowed for noiseless validation runs (the SNR is
    /// then infinite); the bound formulas themselves need `sigma_w2 > 0`.
    pub fn new(n: usize, px: f64, sigma_w2: f64, bandwidth: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("sample count N must be >= 1".into()));
        }
        let valid = px.is_finite()
            && px > 0.0
            && sigma_w2.is_finite()
            && sigma_w2 >= 0.0
            && bandwidth.is_finite()
            && bandwidth > 0.0;
        if !valid {
            return Err(Error::Parse(format!(
                "px and bandwidth must be > 0 and sigma_w2 >= 0 (got {px}, {sigma_w2}, {bandwidth})"
            )));
        }
        Ok(Self {
            n,
            px,
            sigma_w2,
            bandwidth,
        })
    }

    /// Configuration at a given linear SNR (`sigma_w2 = px / snr`).
    pub fn from_snr(n: usize, px: f64, snr: f64, bandwidth: f64) -> Result<Self> {
        if !snr.is_finite() || snr <= 0.0 {
            return Err(Error::Parse(format!("snr must be > 0, got {snr}")));
        }
        Self::new(n, px, px / snr, bandwidth)
    }

    pub fn snr(&self) -> f64 {
        self.px / self.sigma_w2
    }

    pub fn fs(&self) -> f64 {
        2.0 * self.bandwidth
    }

    pub fn ts(&self) -> f64 {
        1.0 / (2.0 * self.bandwidth)
    }
}

/// Finite-sample FIM of the pilot:
/// `[J]_{l,p} = (1/sigma_w2) Re sum_{m=1}^{N} x*_{m-l} x_{m-p}`.
pub fn fim_from_pilot(
    x: &PilotSequence,
    grid: &TapGrid,
    cfg: &SoundingConfig,
) -> Result<DMatrix<f64>> {
    if !x.covers(grid, cfg.n) {
        return Err(Error::Range(format!(
            "pilot covers [{}, {}] but the FIM needs [{}, {}]",
            x.first_index(),
            x.last_index(),
            1 - grid.l2() as i64,
            cfg.n as i64 + grid.l1() as i64
        )));
    }
    let taps: Vec<i64> = grid.tap_indices().collect();
    let l = taps.len();
    let first = x.first_index();
    let s = x.samples();
    let mut j = DMatrix::zeros(l, l);
    for a in 0..l {
        for b in a..l {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 1..=cfg.n as i64 {
                let xa = s[(m - taps[a] - first) as usize];
                let xb = s[(m - taps[b] - first) as usize];
                acc += xa.conj() * xb;
            }
            let v = acc.re / cfg.sigma_w2;
            j[(a, b)] = v;
            j[(b, a)] = v;
        }
    }
    Ok(j)
}

/// Large-sample Toeplitz approximation `[J]_{l,p} = (N/sigma_w2) R_x[p-l]`
/// from one-sided lags (the real part carries the symmetric FIM).
pub fn fim_toeplitz(rx_lags: &[Complex64], cfg: &SoundingConfig, l: usize) -> Result<DMatrix<f64>> {
    if rx_lags.len() < l {
        return Err(Error::Range(format!(
            "need lags up to {} but only {} are available",
            l.saturating_sub(1),
            rx_lags.len()
        )));
    }
    let scale = cfg.n as f64 / cfg.sigma_w2;
    Ok(DMatrix::from_fn(l, l, |i, j| {
        scale * rx_lags[i.abs_diff(j)].re
    }))
}

/// Trace of the inverse of a symmetric positive definite matrix, through a
/// Cholesky factor (`tr(J^{-1}) = ||L^{-1}||_F^2`); no explicit inverse.
pub fn crb_trace(j: &DMatrix<f64>) -> Result<f64> {
    let chol = match j.clone().cholesky() {
        Some(c) => c,
        None => {
            let min_eig = j
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b));
            return Err(Error::Conditioning {
                context: "FIM is singular or indefinite".into(),
                min_eig,
            });
        }
    };
    let n = j.nrows();
    let linv = chol
        .l()
        .solve_lower_triangular(&DMatrix::<f64>::identity(n, n))
        .ok_or(Error::Conditioning {
            context: "triangular solve failed".into(),
            min_eig: f64::NAN,
        })?;
    Ok(linv.norm_squared())
}

/// Asymptotic per-tap bound `Ts (sigma_w2 / N) int_{-fs/2}^{fs/2} df / S(f)`.
pub fn asymptotic_per_tap_crb<F>(psd: F, cfg: &SoundingConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let fs = cfg.fs();
    let integral = integrate_real(
        |f| {
            let s = psd(f);
            if s <= 0.0 {
                return Err(Error::Domain(format!(
                    "psd must be positive, got {s:e} at f={f:e}"
                )));
            }
            Ok(1.0 / s)
        },
        -fs / 2.0,
        fs / 2.0,
        1e-8,
        1e-14,
        Some(fs / 16.0),
        "asymptotic per-tap bound",
    )?;
    Ok(cfg.ts() * cfg.sigma_w2 / cfg.n as f64 * integral)
}

/// Flat-spectrum bound `beta = L / (N SNR)`.
pub fn crb_beta(l: usize, cfg: &SoundingConfig) -> f64 {
    l as f64 / (cfg.n as f64 * cfg.snr())
}

/// Bayesian bound in the eigenvalue form
/// `sum_i lambda_i / (N SNR lambda_i + 1)`.
///
/// Algebraically equal to `sum_i 1 / (N SNR + 1/lambda_i)` for positive
/// eigenvalues and well defined at `lambda_i = 0`, where the mode carries no
/// prior energy and contributes nothing.
pub fn bcrb_trace(rh: &TapCovariance, cfg: &SoundingConfig) -> f64 {
    let ns = cfg.n as f64 * cfg.snr();
    rh.eigenvalues()
        .iter()
        .map(|&lam| lam / (ns * lam + 1.0))
        .sum()
}

/// Direct factorization route `tr((N SNR I + R^{-1})^{-1})` on a
/// ridge-regularized covariance (eigenvalue floor `lambda_floor`), used to
/// cross-check the eigenvalue form.
pub fn bcrb_trace_direct(
    rh: &TapCovariance,
    cfg: &SoundingConfig,
    lambda_floor: f64,
) -> Result<f64> {
    let n = rh.grid().len();
    let lam_min = rh.eigenvalues()[n - 1];
    let base = if rh.clamped_count() > 0 {
        -1e-10
    } else {
        lam_min
    };
    let ridge = (lambda_floor - base).max(0.0);

    let mut reg = rh.matrix().clone();
    for i in 0..n {
        reg[(i, i)] += Complex64::new(ridge, 0.0);
    }
    let chol_r = reg.cholesky().ok_or(Error::Conditioning {
        context: "ridge-regularized covariance is not positive definite".into(),
        min_eig: base + ridge,
    })?;
    let rinv = chol_r.solve(&DMatrix::<Complex64>::identity(n, n));

    let ns = cfg.n as f64 * cfg.snr();
    let mut m = rinv;
    for i in 0..n {
        m[(i, i)] += Complex64::new(ns, 0.0);
    }
    let m = (m.clone() + m.adjoint()) * Complex64::new(0.5, 0.0);
    let chol_m = m.cholesky().ok_or(Error::Conditioning {
        context: "Bayesian information matrix is not positive definite".into(),
        min_eig: f64::NAN,
    })?;
    let linv = chol_m
        .l()
        .solve_lower_triangular(&DMatrix::<Complex64>::identity(n, n))
        .ok_or(Error::Conditioning {
            context: "triangular solve failed".into(),
            min_eig: f64::NAN,
        })?;
    Ok(linv.norm_squared())
}

/// Partial sum of the Neumann-series representation of the Bayesian bound,
/// `(1/(N SNR)) sum_{k=0}^{terms} sum_i (-1/(N SNR lambda_i))^k`.
///
/// Valid only where every `lambda_i > 1/(N SNR)`; converges to
/// [`bcrb_trace`] in alternating even/odd envelopes.
pub fn bcrb_taylor_check(rh: &TapCovariance, cfg: &SoundingConfig, terms: usize) -> Result<f64> {
    let ns = cfg.n as f64 * cfg.snr();
    for (i, &lam) in rh.eigenvalues().iter().enumerate() {
        if lam <= 1.0 / ns {
            return Err(Error::Domain(format!(
                "series requires every eigenvalue above 1/(N SNR) = {:e}; \
                 eigenvalue {i} is {lam:e}",
                1.0 / ns
            )));
        }
    }
    let mut total = 0.0;
    for &lam in rh.eigenvalues().iter() {
        let q = -1.0 / (ns * lam);
        let mut pow = 1.0;
        let mut acc = 0.0;
        for _ in 0..=terms {
            acc += pow;
            pow *= q;
        }
        total += acc / ns;
    }
    Ok(total)
}

/// Wideband closed form `L / (N SNR + 2B / P_h(0))`.
pub fn bcrb_wideband(l: usize, cfg: &SoundingConfig, ph0: f64) -> Result<f64> {
    if !ph0.is_finite() || ph0 <= 0.0 {
        return Err(Error::Domain(format!(
            "peak density must be > 0, got {ph0}"
        )));
    }
    Ok(l as f64 / (cfg.n as f64 * cfg.snr() + 2.0 * cfg.bandwidth / ph0))
}

/// One SNR point of a bound sweep (linear SNR).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundPoint {
    pub snr: f64,
    pub beta: f64,
    /// Direct-factorization Bayesian bound (ridge floor 1e-12).
    pub bcrb_exact: f64,
    /// Eigenvalue-form Bayesian bound (production value).
    pub bcrb_eigen: f64,
    /// Wideband closed form; absent when the profile peak is undefined.
    pub bcrb_wideband: Option<f64>,
}

/// Bound sweep over a list of SNR points for one tap covariance.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCurve {
    pub points: Vec<BoundPoint>,
}

/// Evaluate `beta`, the Bayesian bound (both routes) and optionally the
/// wideband form at each linear SNR in `snrs`.
pub fn bound_curve(
    rh: &TapCovariance,
    n: usize,
    px: f64,
    snrs: &[f64],
    ph0: Option<f64>,
) -> Result<BoundCurve> {
    let l = rh.grid().len();
    let mut points = Vec::with_capacity(snrs.len());
    for &snr in snrs {
        let cfg = SoundingConfig::from_snr(n, px, snr, rh.grid().bandwidth())
            .map_err(|e| Error::Parse(format!("snr point {snr}: {e}")))?;
        let beta = crb_beta(l, &cfg);
        let bcrb_eigen = bcrb_trace(rh, &cfg);
        let bcrb_exact = bcrb_trace_direct(rh, &cfg, 1e-12)
            .map_err(|e| e.with_context(&format!("snr point {snr}")))?;
        let bcrb_wideband = match ph0 {
            Some(p) => Some(bcrb_wideband(l, &cfg, p)?),
            None => None,
        };
        if bcrb_exact <= 0.0 || bcrb_eigen <= 0.0 || beta <= 0.0 {
            return Err(Error::Contract(format!(
                "bound entries must be strictly positive at snr {snr}"
            )));
        }
        if bcrb_exact > beta * (1.0 + 1e-9) {
            return Err(Error::Contract(format!(
                "prior information cannot raise the bound: bcrb {bcrb_exact} > beta {beta}"
            )));
        }
        points.push(BoundPoint {
            snr,
            beta,
            bcrb_exact,
            bcrb_eigen,
            bcrb_wideband,
        });
    }
    Ok(BoundCurve { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::TapGrid;
    use crate::pilots::PilotKind;
    use approx::assert_relative_eq;

    fn cfg(n: usize, px: f64, snr: f64) -> SoundingConfig {
        SoundingConfig::from_snr(n, px, snr, 1.0).unwrap()
    }

    fn identity_cov(l1: u32, l2: u32) -> TapCovariance {
        let grid = TapGrid::new(1.0, l1, l2).unwrap();
        TapCovariance::from_matrix(grid, DMatrix::identity(grid.len(), grid.len())).unwrap()
    }

    #[test]
    fn constant_modulus_fim_diagonal_is_exact() {
        let grid = TapGrid::new(1.0, 2, 3).unwrap();
        let c = cfg(200, 2.0, 1.0);
        let x =
            PilotSequence::for_sounding(PilotKind::ConstantModulusRandomPhase, &grid, c.n, c.px, 3)
                .unwrap();
        let j = fim_from_pilot(&x, &grid, &c).unwrap();
        let want = c.n as f64 * c.px / c.sigma_w2;
        for i in 0..grid.len() {
            assert_relative_eq!(j[(i, i)], want, max_relative = 1e-12);
        }
        for i in 0..grid.len() {
            for k in 0..grid.len() {
                assert_eq!(j[(i, k)], j[(k, i)]);
            }
        }
    }

    #[test]
    fn single_sample_fim_is_an_outer_product() {
        let grid = TapGrid::new(1.0, 1, 1).unwrap();
        let c = SoundingConfig::new(1, 1.0, 1.0, 1.0).unwrap();
        // complex single sample: Re(v v^H) = Re(v)Re(v)^T + Im(v)Im(v)^T,
        // so at most two nonzero eigenvalues survive
        let x = PilotSequence::for_sounding(PilotKind::GaussianWhite, &grid, 1, 1.0, 5).unwrap();
        let j = fim_from_pilot(&x, &grid, &c).unwrap();
        let eig = j.symmetric_eigen();
        let mut lam: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        lam.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        assert!(lam[2].abs() < 1e-12 * lam[0].abs().max(1.0));

        // a real single sample gives exactly one
        let samples = vec![
            Complex64::new(0.3, 0.0),
            Complex64::new(-1.1, 0.0),
            Complex64::new(0.7, 0.0),
        ];
        let xr = PilotSequence::from_samples(samples, 0, 2.0).unwrap();
        let j = fim_from_pilot(&xr, &grid, &c).unwrap();
        let eig = j.symmetric_eigen();
        let mut lam: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        lam.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        assert!(lam[1].abs() < 1e-12 * lam[0].abs().max(1.0));
    }

    #[test]
    fn fim_requires_pilot_coverage() {
        let grid = TapGrid::new(1.0, 2, 3).unwrap();
        let c = cfg(100, 1.0, 1.0);
        let short = PilotSequence::gen_pilot(PilotKind::GaussianWhite, 50, 1.0, 0).unwrap();
        assert!(matches!(
            fim_from_pilot(&short, &grid, &c),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn toeplitz_fim_from_white_lags_is_identity_scaled() {
        let c = cfg(100, 2.0, 1.0);
        let lags = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
        let j = fim_toeplitz(&lags, &c, 2).unwrap();
        let want = c.n as f64 * c.px / c.sigma_w2;
        assert_relative_eq!(j[(0, 0)], want, max_relative = 1e-14);
        assert_eq!(j[(0, 1)], 0.0);

        let scalar = fim_toeplitz(&lags, &c, 1).unwrap();
        assert_eq!(scalar.nrows(), 1);
        assert_relative_eq!(scalar[(0, 0)], want, max_relative = 1e-14);
    }

    #[test]
    fn toeplitz_fim_geometric_lags() {
        let c = SoundingConfig::new(1, 1.0, 1.0, 1.0).unwrap();
        let px = 1.7;
        let lags: Vec<Complex64> = (0..3)
            .map(|k| Complex64::new(px * 0.5_f64.powi(k), 0.0))
            .collect();
        let j = fim_toeplitz(&lags, &c, 3).unwrap();
        let want = [[1.0, 0.5, 0.25], [0.5, 1.0, 0.5], [0.25, 0.5, 1.0]];
        for i in 0..3 {
            for k in 0..3 {
                assert_relative_eq!(j[(i, k)], px * want[i][k], max_relative = 1e-14);
            }
        }
        assert!(fim_toeplitz(&lags, &c, 4).is_err());
    }

    #[test]
    fn crb_trace_of_scaled_identity() {
        let c = cfg(100, 1.0, 1.0);
        let scale = c.n as f64 * c.px / c.sigma_w2;
        let j = DMatrix::<f64>::identity(10, 10) * scale;
        assert_relative_eq!(crb_trace(&j).unwrap(), 10.0 / scale, max_relative = 1e-12);
    }

    #[test]
    fn crb_trace_two_by_two() {
        let j = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert_relative_eq!(crb_trace(&j).unwrap(), 4.0 / 3.0, max_relative = 1e-12);
    }

    // plain Gauss-Jordan inverse, independent of the Cholesky path
    fn naive_inverse_trace(a: &DMatrix<f64>) -> f64 {
        let n = a.nrows();
        let mut m = a.clone();
        let mut inv = DMatrix::<f64>::identity(n, n);
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if m[(r, col)].abs() > m[(piv, col)].abs() {
                    piv = r;
                }
            }
            m.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let d = m[(col, col)];
            for k in 0..n {
                m[(col, k)] /= d;
                inv[(col, k)] /= d;
            }
            for r in 0..n {
                if r != col {
                    let f = m[(r, col)];
                    for k in 0..n {
                        m[(r, k)] -= f * m[(col, k)];
                        inv[(r, k)] -= f * inv[(col, k)];
                    }
                }
            }
        }
        (0..n).map(|i| inv[(i, i)]).sum()
    }

    #[test]
    fn crb_trace_matches_dense_inverse_oracle() {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        use rand::SeedableRng;
        let n = 8;
        let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen::<f64>() - 0.5);
        let spd = &a * a.transpose() + DMatrix::identity(n, n) * 0.5;
        let got = crb_trace(&spd).unwrap();
        let want = naive_inverse_trace(&spd);
        assert_relative_eq!(got, want, max_relative = 1e-10);
    }

    #[test]
    fn crb_trace_reports_indefinite_matrices() {
        let j = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        match crb_trace(&j) {
            Err(Error::Conditioning { min_eig, .. }) => assert!(min_eig < -1.9),
            other => panic!("expected conditioning error, got {other:?}"),
        }
    }

    #[test]
    fn asymptotic_bound_flat_spectrum() {
        let c = cfg(100, 2.0, 1.0);
        let v = asymptotic_per_tap_crb(|_| c.px, &c).unwrap();
        assert_relative_eq!(v, 1.0 / (c.n as f64 * c.snr()), max_relative = 1e-10);
    }

    #[test]
    fn asymptotic_bound_independent_of_fs() {
        let a = SoundingConfig::new(100, 1.0, 0.5, 1.0).unwrap();
        let b = SoundingConfig::new(100, 1.0, 0.5, 2.0).unwrap();
        let va = asymptotic_per_tap_crb(|_| 1.0, &a).unwrap();
        let vb = asymptotic_per_tap_crb(|_| 1.0, &b).unwrap();
        assert_relative_eq!(va, vb, max_relative = 1e-10);
    }

    #[test]
    fn colored_spectrum_raises_the_bound() {
        let c = cfg(100, 1.0, 1.0);
        let fs = c.fs();
        let flat = 1.0 / (c.n as f64 * c.snr());
        let v = asymptotic_per_tap_crb(
            |f| c.px * (1.0 + 0.5 * (2.0 * std::f64::consts::PI * f / fs).cos()),
            &c,
        )
        .unwrap();
        assert!(v > flat, "colored {v} vs flat {flat}");
    }

    #[test]
    fn asymptotic_bound_rejects_nonpositive_psd() {
        let c = cfg(10, 1.0, 1.0);
        let r = asymptotic_per_tap_crb(|f| f, &c); // negative on half the band
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn beta_closed_form() {
        assert_relative_eq!(crb_beta(10, &cfg(100, 1.0, 1.0)), 0.1);
        assert_relative_eq!(crb_beta(97, &cfg(100, 1.0, 10.0)), 0.097);
        let c = cfg(50, 1.0, 2.0);
        assert_relative_eq!(
            crb_beta(20, &c),
            2.0 * crb_beta(10, &c),
            max_relative = 1e-15
        );
    }

    #[test]
    fn bcrb_identity_eigenvalues() {
        let rh = identity_cov(4, 5);
        let v = bcrb_trace(&rh, &cfg(100, 1.0, 1.0));
        assert_relative_eq!(v, 10.0 / 101.0, max_relative = 1e-14);
    }

    #[test]
    fn bcrb_zero_eigenvalues_drop_out() {
        let grid = TapGrid::new(1.0, 1, 1).unwrap();
        let mut m = DMatrix::<Complex64>::zeros(3, 3);
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        let rh = TapCovariance::from_matrix(grid, m).unwrap();
        let v = bcrb_trace(&rh, &cfg(100, 1.0, 1.0));
        assert_relative_eq!(v, 1.0 / 101.0, max_relative = 1e-14);
    }

    #[test]
    fn bcrb_direct_route_matches_eigen_route() {
        let spec = crate::pdp::PdpSpec::exponential(1.0).unwrap();
        let grid = TapGrid::new(1.0, 3, 6).unwrap();
        let rh = crate::covariance::build_covariance(&spec, &grid).unwrap();
        let c = cfg(100, 1.0, 0.01);
        let eigen = bcrb_trace(&rh, &c);
        let direct = bcrb_trace_direct(&rh, &c, 1e-12).unwrap();
        assert_relative_eq!(eigen, direct, max_relative = 1e-8);
    }

    #[test]
    fn taylor_zeroth_term_is_beta() {
        let rh = identity_cov(4, 5);
        let c = cfg(100, 1.0, 1.0);
        assert_relative_eq!(
            bcrb_taylor_check(&rh, &c, 0).unwrap(),
            crb_beta(10, &c),
            max_relative = 1e-14
        );
    }

    #[test]
    fn taylor_first_correction() {
        let rh = identity_cov(4, 5);
        let c = cfg(100, 1.0, 1.0);
        let ns = c.n as f64 * c.snr();
        let want = crb_beta(10, &c) - 10.0 / (ns * ns);
        assert_relative_eq!(
            bcrb_taylor_check(&rh, &c, 1).unwrap(),
            want,
            max_relative = 1e-13
        );
    }

    #[test]
    fn taylor_converges_to_bcrb() {
        let rh = identity_cov(4, 5);
        let c = cfg(100, 1.0, 1.0);
        let v = bcrb_taylor_check(&rh, &c, 50).unwrap();
        assert!((v - bcrb_trace(&rh, &c)).abs() < 1e-12);
    }

    #[test]
    fn taylor_requires_large_eigenvalues() {
        let grid = TapGrid::new(1.0, 0, 1).unwrap();
        let mut m = DMatrix::<Complex64>::identity(2, 2);
        m[(1, 1)] = Complex64::new(1e-6, 0.0);
        let rh = TapCovariance::from_matrix(grid, m).unwrap();
        match bcrb_taylor_check(&rh, &cfg(100, 1.0, 1.0), 10) {
            Err(Error::Domain(msg)) => assert!(msg.contains("1e-6") || msg.contains("eigenvalue")),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn wideband_closed_form() {
        let c = SoundingConfig::from_snr(100, 1.0, 1.0, 10.0).unwrap();
        assert_relative_eq!(
            bcrb_wideband(97, &c, 1.0).unwrap(),
            97.0 / 120.0,
            max_relative = 1e-14
        );
        // huge peak density recovers beta
        assert_relative_eq!(
            bcrb_wideband(97, &c, 1e12).unwrap(),
            crb_beta(97, &c),
            max_relative = 1e-9
        );
        // vanishing SNR floors at L Ph0 / (2B)
        let low = SoundingConfig::from_snr(100, 1.0, 1e-15, 10.0).unwrap();
        assert_relative_eq!(
            bcrb_wideband(97, &low, 1.0).unwrap(),
            97.0 / 20.0,
            max_relative = 1e-10
        );
        assert!(bcrb_wideband(97, &c, 0.0).is_err());
    }

    #[test]
    fn bcrb_never_exceeds_beta() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let l = rng.gen_range(2..12usize);
            let grid = TapGrid::new(1.0, 0, (l - 1) as u32).unwrap();
            let a = DMatrix::<Complex64>::from_fn(l, l, |_, _| {
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let m = &a * a.adjoint();
            let rh = TapCovariance::from_matrix(grid, m).unwrap();
            let c = cfg(100, 1.0, 10f64.powf(rng.gen_range(-2.0..3.0)));
            assert!(bcrb_trace(&rh, &c) <= crb_beta(l, &c) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn low_snr_floor_is_total_energy() {
        let spec = crate::pdp::PdpSpec::exponential(1.0).unwrap();
        let grid = TapGrid::new(1.0, 1, 4).unwrap();
        let rh = crate::covariance::build_covariance(&spec, &grid).unwrap();
        let c = cfg(100, 1.0, 1e-12);
        let v = bcrb_trace(&rh, &c);
        assert!((v - rh.total_energy()).abs() <= 1e-6 * rh.total_energy());
    }

    #[test]
    fn high_snr_merges_with_beta_for_full_rank_priors() {
        let rh = identity_cov(4, 5);
        // N SNR lambda_min = 1e4 exactly at snr = 100 with N = 100
        let c = cfg(100, 1.0, 100.0);
        let ratio = bcrb_trace(&rh, &c) / crb_beta(10, &c);
        assert!(ratio >= 1.0 - 1e-3 && ratio <= 1.0);
    }
}
