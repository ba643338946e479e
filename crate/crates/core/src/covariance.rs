//! Tap covariance of the tapped-delay-line model.
//!
//! The bandlimited CIR is represented by taps `h_{B,l}` at delays `l/(2B)`,
//! `l` in `[-L1, L2]`. Under uncorrelated scattering the tap cross
//! covariance is a double integral of the channel autocorrelation over the
//! sounding band,
//!
//! ```text
//! E{h_l h_p*} = (1/(2B)^2) iint_{[-B,B]^2} R(f1-f2) e^{+j2pi(l f1 - p f2)/(2B)} df1 df2
//! ```
//!
//! with `R(f) = int P_h(tau) e^{-j 2 pi f tau} dtau = conj(autocorr(f))`.
//! The conjugate pairs the synthesis convention of `autocorr` with the tap
//! delays so that a path at delay `tau` loads the taps near `l = 2B tau`
//! (positive-delay profiles fill positive tap indices, matching the
//! wideband limit `E{|h_l|^2} ~ P_h(l/(2B))/(2B)`).
//!
//! Production evaluation collapses the double integral to the difference
//! coordinate `u = f1 - f2`, where the inner integral has a closed form:
//!
//! ```text
//! E{h_l h_p*} = (1/(2B)^2) int_{-2B}^{2B} conj(autocorr(u)) e^{j pi l u / B} Phi_k(u) du
//! Phi_k(u)    = int_{I(u)} e^{j pi k f / B} df,   k = l - p,
//! I(u)        = [max(-B, -B-u), min(B, B-u)]
//! ```
//!
//! Tests check this against a plain 2D tensor-product Gauss-Legendre oracle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pdp::{PdpKind, PdpSpec};
use crate::quad::integrate_complex;

/// Relative tolerance for the covariance quadrature.
const QUAD_REL_TOL: f64 = 1e-8;
/// Absolute floor below which quadrature error is accepted.
const QUAD_ABS_FLOOR: f64 = 1e-12;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are clamped to zero; anything lower is an
/// invariant violation.
const PSD_CLAMP: f64 = 1e-10;

/// Tap index window of a TDL grid: taps `l` in `[-L1, L2]` at delays
/// `l/(2B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TapGrid {
    bandwidth: f64,
    l1: u32,
    l2: u32,
}

impl TapGrid {
    pub fn new(bandwidth: f64, l1: u32, l2: u32) -> Result<Self> {
        if !bandwidth.is_finite() || bandwidth <= 0.0 {
            return Err(Error::Parse(format!(
                "bandwidth must be > 0, got {bandwidth}"
            )));
        }
        Ok(Self { bandwidth, l1, l2 })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn l1(&self) -> u32 {
        self.l1
    }

    pub fn l2(&self) -> u32 {
        self.l2
    }

    /// Total number of taps `L = L1 + L2 + 1`.
    pub fn len(&self) -> usize {
        (self.l1 + self.l2 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sampling period `Ts = 1/(2B)`.
    pub fn ts(&self) -> f64 {
        1.0 / (2.0 * self.bandwidth)
    }

    /// Sampling rate `fs = 2B`.
    pub fn fs(&self) -> f64 {
        2.0 * self.bandwidth
    }

    /// Tap indices `-L1 ..= L2` in matrix order.
    pub fn tap_indices(&self) -> impl Iterator<Item = i64> {
        -(self.l1 as i64)..=(self.l2 as i64)
    }

    /// Delay of tap `l`.
    pub fn tap_delay(&self, l: i64) -> f64 {
        l as f64 * self.ts()
    }

    /// Matrix row/column of tap `l`.
    pub fn matrix_index(&self, l: i64) -> usize {
        (l + self.l1 as i64) as usize
    }
}

/// Hermitian PSD tap covariance with cached eigendecomposition.
#[derive(Debug, Clone)]
pub struct TapCovariance {
    grid: TapGrid,
    matrix: DMatrix<Complex64>,
    /// Real eigenvalues sorted descending, clamped to be nonnegative.
    eigenvalues: DVector<f64>,
    /// Unitary eigenvector matrix, columns matching `eigenvalues`.
    eigenvectors: DMatrix<Complex64>,
    total_energy: f64,
    clamped: usize,
}

impl TapCovariance {
    /// Wrap an externally assembled Hermitian matrix (tests, identity priors).
    pub fn from_matrix(grid: TapGrid, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = grid.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Contract(format!(
                "covariance must be {n}x{n} for the grid, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut herm_defect = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                herm_defect = herm_defect.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if herm_defect > 1e-12 * scale {
            return Err(Error::Contract(format!(
                "matrix is not Hermitian: max defect {herm_defect:e} (scale {scale:e})"
            )));
        }
        // exact symmetrization: A <- (A + A^H)/2
        let sym = (matrix.clone() + matrix.adjoint()) * Complex64::new(0.5, 0.0);

        let eig = sym.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let mut eigenvalues = DVector::zeros(n);
        let mut eigenvectors = DMatrix::zeros(n, n);
        let mut clamped = 0;
        for (dst, &src) in order.iter().enumerate() {
            let lam = eig.eigenvalues[src];
            if lam < -PSD_CLAMP {
                return Err(Error::Conditioning {
                    context: "tap covariance is not PSD".into(),
                    min_eig: lam,
                });
            }
            if lam < 0.0 {
                clamped += 1;
            }
            eigenvalues[dst] = lam.max(0.0);
            eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        let total_energy = (0..n).map(|i| sym[(i, i)].re).sum();

        Ok(Self {
            grid,
            matrix: sym,
            eigenvalues,
            eigenvectors,
            total_energy,
            clamped,
        })
    }

    pub fn grid(&self) -> &TapGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Eigenvalues sorted descending, clamped nonnegative.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Trace of the covariance (total average tap energy).
    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    /// Number of eigenvalues clamped from `[-1e-10, 0)` to zero.
    pub fn clamped_count(&self) -> usize {
        self.clamped
    }
}

/// Inner integral `Phi_k(u)` of the difference-coordinate form, in closed
/// form over `I(u) = [max(-B, -B-u), min(B, B-u)]`.
fn phi_inner(bandwidth: f64, k: i64, u: f64) -> Complex64 {
    let a = (-bandwidth).max(-bandwidth - u);
    let b = bandwidth.min(bandwidth - u);
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    if k == 0 {
        return Complex64::new(b - a, 0.0);
    }
    let w = std::f64::consts::PI * k as f64 / bandwidth;
    (Complex64::from_polar(1.0, w * b) - Complex64::from_polar(1.0, w * a)) / Complex64::new(0.0, w)
}

/// Cross covariance `E{h_{B,l} h*_{B,p}}` of two TDL taps, to 1e-8 relative
/// accuracy.
pub fn tap_cross_covariance(spec: &PdpSpec, bandwidth: f64, l: i64, p: i64) -> Result<Complex64> {
    if !bandwidth.is_finite() || bandwidth <= 0.0 {
        return Err(Error::Parse(format!(
            "bandwidth must be > 0, got {bandwidth}"
        )));
    }
    let k = l - p;
    let max_idx = l.unsigned_abs().max(p.unsigned_abs()).max(1);
    // cap panels so none spans more than a fraction of an oscillation period
    let panel = 2.0 * bandwidth / (8.0_f64).max(4.0 * max_idx as f64);
    let omega_l = std::f64::consts::PI * l as f64 / bandwidth;
    let f = |u: f64| -> Result<Complex64> {
        let r = spec.autocorr(u).conj();
        Ok(r * Complex64::from_polar(1.0, omega_l * u) * phi_inner(bandwidth, k, u))
    };
    let ctx = format!("tap covariance (l={l}, p={p})");
    // split at u = 0 where the inner window kinks
    let left = integrate_complex(
        f,
        -2.0 * bandwidth,
        0.0,
        QUAD_REL_TOL,
        QUAD_ABS_FLOOR,
        Some(panel),
        &ctx,
    )?;
    let right = integrate_complex(
        f,
        0.0,
        2.0 * bandwidth,
        QUAD_REL_TOL,
        QUAD_ABS_FLOOR,
        Some(panel),
        &ctx,
    )?;
    Ok((left + right) / (4.0 * bandwidth * bandwidth))
}

/// Average energy `E{|h_{B,l}|^2}` of tap `l` (real, nonnegative).
pub fn tap_energy(spec: &PdpSpec, bandwidth: f64, l: i64) -> Result<f64> {
    let v = tap_cross_covariance(spec, bandwidth, l, l)?;
    if v.im.abs() >= 1e-10 {
        return Err(Error::Contract(format!(
            "tap energy (l={l}) has imaginary residue {:e}",
            v.im
        )));
    }
    if v.re < -1e-10 {
        return Err(Error::Contract(format!(
            "tap energy (l={l}) is negative: {:e}",
            v.re
        )));
    }
    Ok(v.re.max(0.0))
}

/// Wideband (uncorrelated-taps) approximation `P_h(l/(2B)) / (2B)`.
pub fn wideband_tap_energy(spec: &PdpSpec, bandwidth: f64, l: i64) -> Result<f64> {
    let tau = l as f64 / (2.0 * bandwidth);
    Ok(spec.value(tau)? / (2.0 * bandwidth))
}

/// Assemble the full `L x L` tap covariance for a grid.
///
/// Independent upper-triangle entries are evaluated in parallel; the result
/// does not depend on the evaluation order.
pub fn build_covariance(spec: &PdpSpec, grid: &TapGrid) -> Result<TapCovariance> {
    let n = grid.len();
    let taps: Vec<i64> = grid.tap_indices().collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();

    let entries: Vec<Result<Complex64>> = pairs
        .par_iter()
        .map(|&(i, j)| tap_cross_covariance(spec, grid.bandwidth(), taps[i], taps[j]))
        .collect();

    let mut matrix = DMatrix::zeros(n, n);
    for (&(i, j), entry) in pairs.iter().zip(entries) {
        let v = entry?;
        matrix[(i, j)] = v;
        matrix[(j, i)] = v.conj();
    }
    TapCovariance::from_matrix(*grid, matrix)
}

/// Smallest window `(L1, L2)` whose taps capture at least `threshold` of the
/// unit total tap energy.
///
/// The TDL window always keeps at least one tap on each side of the origin
/// (`L1, L2 >= 1`); the degenerate single-tap window `(0, 0)` is accepted
/// only when tap 0 alone already meets the threshold (single-path channels).
/// Among qualifying windows of the minimal total length the one capturing the
/// most energy wins, with ties broken towards the smallest `L1`.
pub fn min_window(spec: &PdpSpec, bandwidth: f64, threshold: f64) -> Result<(u32, u32)> {
    if !threshold.is_finite() || threshold <= 0.0 || threshold >= 1.0 {
        return Err(Error::Parse(format!(
            "threshold must be in (0, 1), got {threshold}"
        )));
    }
    let cap: i64 = if spec.kind == PdpKind::DeltaTest {
        80
    } else {
        (40.0 * bandwidth * spec.tau_ds).ceil() as i64 + 80
    };

    let e0 = tap_energy(spec, bandwidth, 0)?;
    if e0 >= threshold {
        return Ok((0, 0));
    }

    // cumulative energies: cum_left[i] = sum of e_{-1} ..= e_{-i}
    let mut cum_left: Vec<f64> = vec![0.0];
    let mut cum_right: Vec<f64> = vec![0.0];
    let extend = |cum: &mut Vec<f64>, sign: i64| -> Result<()> {
        let next = cum.len() as i64;
        let e = tap_energy(spec, bandwidth, sign * next)?;
        let last = *cum.last().expect("seeded");
        cum.push(last + e);
        Ok(())
    };

    for total in 3usize.. {
        let max_side = (total - 2) as i64;
        if max_side > cap {
            return Err(Error::Range(format!(
                "min_window search cap |l| <= {cap} exhausted at threshold {threshold}"
            )));
        }
        while (cum_left.len() as i64) <= max_side {
            extend(&mut cum_left, -1)?;
        }
        while (cum_right.len() as i64) <= max_side {
            extend(&mut cum_right, 1)?;
        }
        // candidates with L1 >= 1 and L2 >= 1 at this total length
        let mut best: Option<(f64, u32, u32)> = None;
        for l1 in 1..=(total - 2) {
            let l2 = total - 1 - l1;
            let captured = e0 + cum_left[l1] + cum_right[l2];
            if captured >= threshold {
                let better = match best {
                    None => true,
                    Some((b, _, _)) => captured > b + 1e-9,
                };
                if better {
                    best = Some((captured, l1 as u32, l2 as u32));
                }
            }
        }
        if let Some((_, l1, l2)) = best {
            return Ok((l1, l2));
        }
    }
    unreachable!("search loop returns or errors");
}
