//! Power delay profiles and their channel autocorrelation functions.
//!
//! Four profile families are supported (exponential, Gaussian, uniform and
//! truncated exponential), each normalized to unit area and parameterized by
//! the rms delay spread `tau_ds` (the standard deviation of the delay
//! density). A fifth `DeltaTest` profile (single path at zero delay, so
//! `R_H(f) = 1` identically) exists purely to anchor the covariance
//! quadrature tests with analytically forced values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT_12: f64 = 3.464101615137754; // sqrt(12)

/// Default maximum delay for the truncated exponential, as a multiple of
/// `tau_ds`. Covers over 99% of an untruncated exponential tail while
/// keeping the profile visibly truncated.
pub const DEFAULT_TE_TAU_M_FACTOR: f64 = 6.0;

/// sinc(x) = sin(pi x) / (pi x)
fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PdpKind {
    Exponential,
    Gaussian,
    Uniform,
    #[serde(rename = "trunc_exponential")]
    TruncatedExponential,
    #[serde(rename = "delta")]
    DeltaTest,
}

impl PdpKind {
    pub fn label(&self) -> &'static str {
        match self {
            PdpKind::Exponential => "exponential",
            PdpKind::Gaussian => "gaussian",
            PdpKind::Uniform => "uniform",
            PdpKind::TruncatedExponential => "trunc_exponential",
            PdpKind::DeltaTest => "delta",
        }
    }
}

/// A calibrated power delay profile.
#[derive(Debug, Clone, Serialize)]
pub struct PdpSpec {
    pub kind: PdpKind,
    /// rms delay spread (standard deviation of the delay density), seconds.
    pub tau_ds: f64,
    /// Maximum delay, truncated-exponential only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub te_tau_m: Option<f64>,
    /// Scale parameter calibrated so the TE density has std `tau_ds`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub te_tau_0: Option<f64>,
}

#[derive(Deserialize)]
struct RawPdp {
    kind: String,
    #[serde(default)]
    tau_ds: Option<f64>,
    #[serde(default)]
    tau_m: Option<f64>,
}

impl PdpSpec {
    pub fn exponential(tau_ds: f64) -> Result<Self> {
        Self::check_tau_ds(tau_ds)?;
        Ok(Self {
            kind: PdpKind::Exponential,
            tau_ds,
            te_tau_m: None,
            te_tau_0: None,
        })
    }

    pub fn gaussian(tau_ds: f64) -> Result<Self> {
        Self::check_tau_ds(tau_ds)?;
        Ok(Self {
            kind: PdpKind::Gaussian,
            tau_ds,
            te_tau_m: None,
            te_tau_0: None,
        })
    }

    pub fn uniform(tau_ds: f64) -> Result<Self> {
        Self::check_tau_ds(tau_ds)?;
        Ok(Self {
            kind: PdpKind::Uniform,
            tau_ds,
            te_tau_m: None,
            te_tau_0: None,
        })
    }

    /// Truncated exponential on `[0, tau_m]`, calibrated so that the delay
    /// std equals `tau_ds`.
    pub fn truncated_exponential(tau_ds: f64, tau_m: f64) -> Result<Self> {
        Self::check_tau_ds(tau_ds)?;
        let tau_0 = calibrate_te(tau_ds, tau_m)?;
        Ok(Self {
            kind: PdpKind::TruncatedExponential,
            tau_ds,
            te_tau_m: Some(tau_m),
            te_tau_0: Some(tau_0),
        })
    }

    pub fn delta_test() -> Self {
        Self {
            kind: PdpKind::DeltaTest,
            tau_ds: 0.0,
            te_tau_m: None,
            te_tau_0: None,
        }
    }

    /// Build a spec from its kind label, applying the default `tau_m` when a
    /// truncated exponential does not specify one.
    pub fn from_name(name: &str, tau_ds: f64, tau_m: Option<f64>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "exponential" | "exp" | "e" => Self::exponential(tau_ds),
            "gaussian" | "gauss" | "g" => Self::gaussian(tau_ds),
            "uniform" | "u" => Self::uniform(tau_ds),
            "trunc_exponential" | "te" => Self::truncated_exponential(
                tau_ds,
                tau_m.unwrap_or(DEFAULT_TE_TAU_M_FACTOR * tau_ds),
            ),
            "delta" | "d" => Ok(Self::delta_test()),
            other => Err(Error::Parse(format!("unknown pdp kind '{other}'"))),
        }
    }

    /// Parse the CLI JSON form
    /// `{"kind": "exponential"|"gaussian"|"uniform"|"trunc_exponential"|"delta",
    ///   "tau_ds": number?, "tau_m": number?}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawPdp =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("pdp json: {e}")))?;
        Self::from_name(&raw.kind, raw.tau_ds.unwrap_or(1.0), raw.tau_m)
    }

    fn check_tau_ds(tau_ds: f64) -> Result<()> {
        if !tau_ds.is_finite() || tau_ds <= 0.0 {
            return Err(Error::Parse(format!("tau_ds must be > 0, got {tau_ds}")));
        }
        Ok(())
    }

    /// Delay density `P_h(tau)` in 1/seconds.
    ///
    /// The delta profile has no pointwise-representable density.
    pub fn value(&self, tau: f64) -> Result<f64> {
        let tds = self.tau_ds;
        Ok(match self.kind {
            PdpKind::Exponential => {
                if tau >= 0.0 {
                    (-tau / tds).exp() / tds
                } else {
                    0.0
                }
            }
            PdpKind::Gaussian => {
                (-tau * tau / (2.0 * tds * tds)).exp() / (tds * (2.0 * std::f64::consts::PI).sqrt())
            }
            PdpKind::Uniform => {
                let width = tds * SQRT_12;
                if (0.0..=width).contains(&tau) {
                    1.0 / width
                } else {
                    0.0
                }
            }
            PdpKind::TruncatedExponential => {
                let tau_m = self.te_tau_m.expect("calibrated TE");
                let tau_0 = self.te_tau_0.expect("calibrated TE");
                if (0.0..=tau_m).contains(&tau) {
                    (-tau / tau_0).exp() / (tau_0 * (-(-tau_m / tau_0).exp_m1()))
                } else {
                    0.0
                }
            }
            PdpKind::DeltaTest => {
                return Err(Error::Unsupported(
                    "delta profile density is not pointwise representable".into(),
                ))
            }
        })
    }

    /// Channel autocorrelation `R_H(f) = int P_h(tau) e^{+j 2 pi f tau} dtau`,
    /// evaluated analytically per profile kind.
    pub fn autocorr(&self, f: f64) -> Complex64 {
        let tds = self.tau_ds;
        let two_pi_f = 2.0 * std::f64::consts::PI * f;
        match self.kind {
            PdpKind::Exponential => Complex64::new(1.0, 0.0) / Complex64::new(1.0, -two_pi_f * tds),
            PdpKind::Gaussian => {
                let e = (-2.0 * std::f64::consts::PI.powi(2) * f * f * tds * tds).exp();
                Complex64::new(e, 0.0)
            }
            PdpKind::Uniform => {
                let width = tds * SQRT_12;
                let x = f * width;
                Complex64::from_polar(sinc(x), std::f64::consts::PI * x)
            }
            PdpKind::TruncatedExponential => {
                let tau_m = self.te_tau_m.expect("calibrated TE");
                let tau_0 = self.te_tau_0.expect("calibrated TE");
                let c = 1.0 / (tau_0 * (-(-tau_m / tau_0).exp_m1()));
                let a = Complex64::new(1.0 / tau_0, -two_pi_f);
                let e = (-tau_m / tau_0).exp() * Complex64::from_polar(1.0, two_pi_f * tau_m);
                c * (Complex64::new(1.0, 0.0) - e) / a
            }
            PdpKind::DeltaTest => Complex64::new(1.0, 0.0),
        }
    }

    /// Delays at which the density jumps; the wideband per-tap approximation
    /// cannot converge on taps next to these.
    pub fn jump_delays(&self) -> Vec<f64> {
        match self.kind {
            PdpKind::Exponential => vec![0.0],
            PdpKind::Gaussian => vec![],
            PdpKind::Uniform => vec![0.0, self.tau_ds * SQRT_12],
            PdpKind::TruncatedExponential => vec![0.0, self.te_tau_m.expect("calibrated TE")],
            PdpKind::DeltaTest => vec![0.0],
        }
    }

    /// Interval outside which the density is identically zero (Gaussian tails
    /// truncated where they are far below double precision).
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            PdpKind::Exponential => (0.0, 60.0 * self.tau_ds),
            PdpKind::Gaussian => (-10.0 * self.tau_ds, 10.0 * self.tau_ds),
            PdpKind::Uniform => (0.0, self.tau_ds * SQRT_12),
            PdpKind::TruncatedExponential => (0.0, self.te_tau_m.expect("calibrated TE")),
            PdpKind::DeltaTest => (0.0, 0.0),
        }
    }
}

/// Standard deviation of the truncated exponential density on `[0, tau_m]`
/// with scale `tau_0`, from closed-form moments. A power series takes over
/// for small `tau_m / tau_0` where the direct expressions cancel.
pub(crate) fn te_delay_std(tau_0: f64, tau_m: f64) -> f64 {
    let r = tau_m / tau_0;
    let d = -(-r).exp_m1();
    let (a, c) = if r > 0.5 {
        let em = (-r).exp();
        (1.0 - (1.0 + r) * em, 2.0 - (r * r + 2.0 * r + 2.0) * em)
    } else {
        // a = sum_{k>=2} (-1)^k (k-1)/k! r^k
        let mut a = 0.0;
        let mut term_base = r * r / 2.0; // r^2/2!
        let mut k = 2u32;
        loop {
            let term = if k % 2 == 0 { 1.0 } else { -1.0 } * (k as f64 - 1.0) * term_base;
            a += term;
            if term.abs() < 1e-18 * a.abs().max(1e-300) || k > 60 {
                break;
            }
            k += 1;
            term_base *= r / k as f64;
        }
        // c = sum_{m>=3} (-1)^{m+1} [1/(m-2)! - 2/(m-1)! + 2/m!] r^m
        let mut c = 0.0;
        let mut fact_m2 = 1.0; // (m-2)! at m = 3 -> 1!
        let mut r_pow = r * r * r;
        let mut m = 3u32;
        loop {
            let f_m2 = fact_m2;
            let f_m1 = f_m2 * (m as f64 - 1.0);
            let f_m = f_m1 * m as f64;
            let coeff = 1.0 / f_m2 - 2.0 / f_m1 + 2.0 / f_m;
            let term = if m % 2 == 1 { 1.0 } else { -1.0 } * coeff * r_pow;
            c += term;
            if term.abs() < 1e-18 * c.abs().max(1e-300) || m > 60 {
                break;
            }
            m += 1;
            fact_m2 *= (m - 2) as f64;
            r_pow *= r;
        }
        (a, c)
    };
    let m1 = tau_0 * a / d;
    let m2 = tau_0 * tau_0 * c / d;
    (m2 - m1 * m1).max(0.0).sqrt()
}

/// Find `tau_0` such that the truncated exponential on `[0, tau_m]` has
/// delay std `tau_ds`, by bracketed bisection on the monotone std residual.
pub fn calibrate_te(tau_ds: f64, tau_m: f64) -> Result<f64> {
    if !(tau_ds.is_finite() && tau_m.is_finite()) || tau_ds <= 0.0 || tau_m <= 0.0 {
        return Err(Error::Calibration(format!(
            "tau_ds and tau_m must be > 0 (got tau_ds={tau_ds}, tau_m={tau_m})"
        )));
    }
    // The std approaches tau_m / sqrt(12) (uniform limit) as tau_0 grows.
    let limit = tau_m / SQRT_12;
    if tau_ds >= limit * (1.0 - 1e-9) {
        return Err(Error::Calibration(format!(
            "delay std {tau_ds} is infeasible for tau_m={tau_m}: the truncated \
             exponential std is below tau_m/sqrt(12)={limit:.6e}; feasible range \
             requires tau_m > sqrt(12)*tau_ds = {:.6e}",
            SQRT_12 * tau_ds
        )));
    }

    let mut lo = 1e-6 * tau_ds; // std(lo) ~ lo << tau_ds
    let mut hi = tau_ds;
    while te_delay_std(hi, tau_m) < tau_ds {
        hi *= 2.0;
        if hi > 1e12 * tau_m {
            return Err(Error::Calibration(format!(
                "calibration near-singular: tau_0 exceeds {:.1e} while matching \
                 std {tau_ds} with tau_m={tau_m} (profile is effectively uniform)",
                1e12 * tau_m
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let s = te_delay_std(mid, tau_m);
        if (s - tau_ds).abs() <= 1e-10 * tau_ds {
            return Ok(mid);
        }
        if s < tau_ds {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * hi {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    let resid = (te_delay_std(mid, tau_m) - tau_ds).abs() / tau_ds;
    if resid <= 1e-9 {
        Ok(mid)
    } else {
        Err(Error::Calibration(format!(
            "bisection stalled at tau_0={mid:e} with std residual {resid:e}"
        )))
    }
}
