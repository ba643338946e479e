//! Channel-sounding sample sequences and their spectra.
//!
//! A pilot covers a contiguous index range `[first, last]` chosen so every
//! sample `x_{n-l}` required by the observation model `y_n = sum_l h_l
//! x_{n-l}` exists; for `n = 1..N` and taps `l in [-L1, L2]` that range is
//! `[1-L2, N+L1]`. Note the convolution-consistent pairing: row `n` of the
//! sounding matrix holds `x_{n-l}` for tap `l`. Formulations that index the
//! pilot matrix as `x_{i+j+L1-1}` are inconsistent with the convolution sum
//! above and are not used here.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::covariance::TapGrid;
use crate::error::{Error, Result};

/// Default sample rate used when a pilot is generated without a grid
/// (unit bandwidth, `fs = 2B = 2`).
pub const DEFAULT_FS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PilotKind {
    /// `|x_n|^2 = Px` exactly, phases i.i.d. uniform on `[0, 2pi)`.
    ConstantModulusRandomPhase,
    /// Zero-mean circular complex Gaussian samples with `E|x_n|^2 = Px`.
    GaussianWhite,
    /// Loaded from caller-supplied samples (CSV import, test sequences).
    External,
}

/// A complex sounding sample sequence over a contiguous index range.
#[derive(Debug, Clone)]
pub struct PilotSequence {
    samples: Vec<Complex64>,
    first_index: i64,
    px: f64,
    fs: f64,
    kind: PilotKind,
}

impl PilotSequence {
    /// Generate `length_needed` samples at indices `1..=length_needed`.
    ///
    /// Deterministic given `(kind, length_needed, px, seed)`.
    pub fn gen_pilot(kind: PilotKind, length_needed: usize, px: f64, seed: u64) -> Result<Self> {
        Self::gen_range(kind, 1, length_needed, px, seed, DEFAULT_FS)
    }

    /// Generate samples covering `[first_index, first_index + len - 1]`.
    pub fn gen_range(
        kind: PilotKind,
        first_index: i64,
        len: usize,
        px: f64,
        seed: u64,
        fs: f64,
    ) -> Result<Self> {
        if len == 0 {
            return Err(Error::Range("pilot length must be >= 1".into()));
        }
        if !px.is_finite() || px <= 0.0 {
            return Err(Error::Parse(format!("pilot power must be > 0, got {px}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<Complex64> = match kind {
            PilotKind::ConstantModulusRandomPhase => {
                let amp = px.sqrt();
                (0..len)
                    .map(|_| {
                        let phase: f64 = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                        Complex64::from_polar(amp, phase)
                    })
                    .collect()
            }
            PilotKind::GaussianWhite => {
                let sigma = (px / 2.0).sqrt();
                (0..len)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(sigma * re, sigma * im)
                    })
                    .collect()
            }
            PilotKind::External => {
                return Err(Error::Unsupported(
                    "external pilots are loaded from samples, not generated".into(),
                ))
            }
        };
        Ok(Self {
            samples,
            first_index,
            px,
            fs,
            kind,
        })
    }

    /// Generate a pilot covering every index the observation model needs for
    /// `n_samples` observations on `grid`: `[1 - L2, n_samples + L1]`.
    pub fn for_sounding(
        kind: PilotKind,
        grid: &TapGrid,
        n_samples: usize,
        px: f64,
        seed: u64,
    ) -> Result<Self> {
        let first = 1 - grid.l2() as i64;
        let len = n_samples + grid.l1() as usize + grid.l2() as usize;
        Self::gen_range(kind, first, len, px, seed, grid.fs())
    }

    /// Wrap caller-supplied samples; `px` is the measured mean power.
    pub fn from_samples(samples: Vec<Complex64>, first_index: i64, fs: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Range(
                "pilot must contain at least one sample".into(),
            ));
        }
        let px = samples.iter().map(|x| x.norm_sqr()).sum::<f64>() / samples.len() as f64;
        Ok(Self {
            samples,
            first_index,
            px,
            fs,
            kind: PilotKind::External,
        })
    }

    /// Periodized Zadoff-Chu sounding sequence with period `period` and root
    /// `root`, scaled to power `px` and rotated by `phase` radians.
    ///
    /// Shifted windows whose length is a multiple of the period have exactly
    /// orthogonal columns (zero periodic autocorrelation at every nonzero
    /// lag), which realizes the flat-spectrum sounding optimum in finite
    /// samples.
    pub fn zadoff_chu(
        period: u32,
        root: u32,
        px: f64,
        phase: f64,
        first_index: i64,
        len: usize,
        fs: f64,
    ) -> Result<Self> {
        if period == 0 || len == 0 {
            return Err(Error::Range(
                "zadoff-chu period and length must be >= 1".into(),
            ));
        }
        if !px.is_finite() || px <= 0.0 {
            return Err(Error::Parse(format!("pilot power must be > 0, got {px}")));
        }
        let p = period as i64;
        let amp = px.sqrt();
        let base: Vec<Complex64> = (0..p)
            .map(|n| {
                let nf = n as f64;
                let arg = if period % 2 == 0 {
                    -std::f64::consts::PI * root as f64 * nf * nf / p as f64
                } else {
                    -std::f64::consts::PI * root as f64 * nf * (nf + 1.0) / p as f64
                };
                Complex64::from_polar(amp, arg + phase)
            })
            .collect();
        let samples = (0..len as i64)
            .map(|k| base[((first_index + k).rem_euclid(p)) as usize])
            .collect();
        Ok(Self {
            samples,
            first_index,
            px,
            fs,
            kind: PilotKind::External,
        })
    }

    /// Parse "re,im" lines, one complex sample per line, assigning indices
    /// from `first_index`.
    pub fn from_csv(text: &str, first_index: i64, fs: f64) -> Result<Self> {
        let mut samples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let (re, im) = match (parts.next(), parts.next(), parts.next()) {
                (Some(re), Some(im), None) => (re.trim(), im.trim()),
                _ => {
                    return Err(Error::Parse(format!(
                        "pilot csv line {}: expected 're,im', got '{line}'",
                        i + 1
                    )))
                }
            };
            let re: f64 = re
                .parse()
                .map_err(|e| Error::Parse(format!("pilot csv line {}: {e}", i + 1)))?;
            let im: f64 = im
                .parse()
                .map_err(|e| Error::Parse(format!("pilot csv line {}: {e}", i + 1)))?;
            samples.push(Complex64::new(re, im));
        }
        Self::from_samples(samples, first_index, fs)
    }

    pub fn kind(&self) -> PilotKind {
        self.kind
    }

    pub fn px(&self) -> f64 {
        self.px
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.samples.len() as i64 - 1
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Sample `x_n`, or a range error naming the covered interval.
    pub fn sample_at(&self, n: i64) -> Result<Complex64> {
        if n < self.first_index || n > self.last_index() {
            return Err(Error::Range(format!(
                "pilot index {n} outside covered range [{}, {}]",
                self.first_index,
                self.last_index()
            )));
        }
        Ok(self.samples[(n - self.first_index) as usize])
    }

    /// Whether the pilot covers `[1 - L2, n + L1]` for `n` observations.
    pub fn covers(&self, grid: &TapGrid, n_samples: usize) -> bool {
        self.first_index <= 1 - grid.l2() as i64
            && self.last_index() >= n_samples as i64 + grid.l1() as i64
    }

    /// Biased sample autocorrelation `R_x[k] = (1/M) sum_m x*_m x_{m+k}`
    /// for `k = 0 ..= maxlag`, `M` the number of valid products.
    pub fn sample_autocorr(&self, maxlag: usize) -> Result<Vec<Complex64>> {
        let n = self.samples.len();
        if maxlag >= n / 2 {
            return Err(Error::Range(format!(
                "maxlag {maxlag} must be below half the sequence length {n}"
            )));
        }
        let mut lags = Vec::with_capacity(maxlag + 1);
        for k in 0..=maxlag {
            let m = n - k;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..m {
                acc += self.samples[i].conj() * self.samples[i + k];
            }
            lags.push(acc / m as f64);
        }
        Ok(lags)
    }
}

/// Folded power spectral density `S(f) = sum_k R_x[k] e^{-j 2 pi f k / fs}`
/// from one-sided lags (`lags[k]` for `k >= 0`, Hermitian extension implied).
///
/// The one-sided form makes the DTFT exactly real provided `R_x[0]` is real;
/// a lag-0 imaginary residue above 1e-9 is a contract violation.
pub fn folded_psd(lags: &[Complex64], f: f64, fs: f64) -> Result<f64> {
    if lags.is_empty() {
        return Err(Error::Contract("lag sequence must be nonempty".into()));
    }
    if !fs.is_finite() || fs <= 0.0 {
        return Err(Error::Parse(format!("fs must be > 0, got {fs}")));
    }
    if f.abs() > fs / 2.0 + 1e-12 * fs {
        return Err(Error::Range(format!(
            "|f|={} exceeds fs/2={}",
            f.abs(),
            fs / 2.0
        )));
    }
    let r0 = lags[0];
    if r0.im.abs() >= 1e-9 * r0.re.abs().max(1.0) {
        return Err(Error::Contract(format!(
            "lag 0 must be real for a Hermitian lag sequence (imag {:e})",
            r0.im
        )));
    }
    let mut s = r0.re;
    for (k, lag) in lags.iter().enumerate().skip(1) {
        let rot = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * k as f64 / fs);
        s += 2.0 * (lag * rot).re;
    }
    Ok(s)
}
