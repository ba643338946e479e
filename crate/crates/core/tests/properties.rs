//! Property-style invariants: symmetries of the profile autocorrelation,
//! spectrum optimality, Toeplitz trace asymptotics, finite-sample versus
//! asymptotic FIM agreement, and bound orderings on randomized priors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chanbound::bounds::{
    asymptotic_per_tap_crb, bcrb_trace, bcrb_trace_direct, crb_beta, crb_trace, fim_from_pilot,
    fim_toeplitz, SoundingConfig,
};
use chanbound::covariance::{TapCovariance, TapGrid};
use chanbound::pdp::PdpSpec;
use chanbound::pilots::{folded_psd, PilotKind, PilotSequence};

fn specs() -> Vec<PdpSpec> {
    vec![
        PdpSpec::exponential(1.0).unwrap(),
        PdpSpec::gaussian(1.0).unwrap(),
        PdpSpec::uniform(1.0).unwrap(),
        PdpSpec::truncated_exponential(1.0, 6.0).unwrap(),
        PdpSpec::delta_test(),
    ]
}

proptest! {
    #[test]
    fn autocorr_is_conjugate_symmetric(f in -40.0f64..40.0) {
        for spec in specs() {
            let plus = spec.autocorr(f);
            let minus = spec.autocorr(-f);
            prop_assert!((plus - minus.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn autocorr_magnitude_is_bounded_by_one(f in -200.0f64..200.0) {
        for spec in specs() {
            prop_assert!(spec.autocorr(f).norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn gaussian_autocorr_is_real_positive(f in -5.0f64..5.0, tds in 0.1f64..1.2) {
        // f tds kept small enough that e^{-2 pi^2 f^2 tds^2} stays above the
        // f64 underflow threshold; beyond it the value rounds to +0
        let spec = PdpSpec::gaussian(tds).unwrap();
        let r = spec.autocorr(f);
        prop_assert!(r.im == 0.0 && r.re > 0.0);
    }

    #[test]
    fn gaussian_autocorr_never_negative(f in -200.0f64..200.0, tds in 0.1f64..4.0) {
        let spec = PdpSpec::gaussian(tds).unwrap();
        let r = spec.autocorr(f);
        prop_assert!(r.im == 0.0 && r.re >= 0.0);
    }

    #[test]
    fn bcrb_ordering_on_random_priors(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = rng.gen_range(2..10usize);
        let grid = TapGrid::new(1.0, 0, (l - 1) as u32).unwrap();
        let a = DMatrix::<Complex64>::from_fn(l, l, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let rh = TapCovariance::from_matrix(grid, &a * a.adjoint()).unwrap();
        let cfg = SoundingConfig::from_snr(
            rng.gen_range(10..1000),
            1.0,
            10f64.powf(rng.gen_range(-3.0..3.0)),
            1.0,
        ).unwrap();
        let bcrb = bcrb_trace(&rh, &cfg);
        prop_assert!(bcrb <= crb_beta(l, &cfg) * (1.0 + 1e-12));
        prop_assert!(bcrb > 0.0);
    }
}

#[test]
fn seed_isolation_of_generated_pilots() {
    let a = PilotSequence::gen_pilot(PilotKind::ConstantModulusRandomPhase, 256, 1.0, 1).unwrap();
    let b = PilotSequence::gen_pilot(PilotKind::ConstantModulusRandomPhase, 256, 1.0, 2).unwrap();
    let c = PilotSequence::gen_pilot(PilotKind::ConstantModulusRandomPhase, 256, 1.0, 1).unwrap();
    assert_ne!(a.samples(), b.samples());
    assert_eq!(a.samples(), c.samples());
}

/// Folded PSD of a long white pilot stays near `Px`, cross-checked with a
/// segment-averaged periodogram.
#[test]
fn white_pilot_spectrum_is_flat() {
    let px = 1.0;
    let fs = 2.0;
    let p = PilotSequence::gen_pilot(PilotKind::GaussianWhite, 100_000, px, 4).unwrap();
    let lags = p.sample_autocorr(40).unwrap();
    for f in [-0.9, -0.37, 0.0, 0.25, 0.81] {
        let s = folded_psd(&lags, f, fs).unwrap();
        assert!((s - px).abs() <= 0.05 * px, "f={f}: psd {s}");
    }

    // periodogram average over disjoint segments as an independent estimate
    let seg = 500;
    let nseg = p.len() / seg;
    for f in [-0.37, 0.25] {
        let mut acc = 0.0;
        for k in 0..nseg {
            let mut dft = Complex64::new(0.0, 0.0);
            for m in 0..seg {
                let x = p.samples()[k * seg + m];
                dft +=
                    x * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * m as f64 / fs);
            }
            acc += dft.norm_sqr() / seg as f64;
        }
        let periodogram = acc / nseg as f64;
        let s = folded_psd(&lags, f, fs).unwrap();
        assert!(
            (s - periodogram).abs() <= 0.15 * px,
            "f={f}: folded {s} vs periodogram {periodogram}"
        );
    }
}

/// Any valid colored spectrum with the same power does worse than flat.
#[test]
fn flat_spectrum_is_optimal_among_colored_ones() {
    let cfg = SoundingConfig::from_snr(100, 1.0, 1.0, 1.0).unwrap();
    let flat = 1.0 / (cfg.n as f64 * cfg.snr());
    let fs = cfg.fs();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..20 {
        // random short Hermitian lag sequence with R[0] = Px and a strictly
        // positive spectrum (sum of |higher lags| kept below Px/2)
        let n_lags = rng.gen_range(2..6usize);
        let mut lags = vec![Complex64::new(cfg.px, 0.0)];
        let mut budget = 0.45 * cfg.px;
        let mut colored = false;
        for _ in 1..n_lags {
            let mag = rng.gen::<f64>() * budget / (n_lags as f64);
            budget -= mag;
            let ph = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            let lag = Complex64::from_polar(mag, ph);
            colored |= mag > 1e-6;
            lags.push(lag);
        }
        let v = asymptotic_per_tap_crb(|f| folded_psd(&lags, f, fs).unwrap(), &cfg).unwrap();
        assert!(
            v >= flat * (1.0 - 1e-10),
            "trial {trial}: colored bound {v} below flat {flat}"
        );
        if colored {
            assert!(
                v > flat,
                "trial {trial}: strictly colored spectrum should be worse"
            );
        }
    }
}

/// Toeplitz trace converges to the asymptotic integral and improves with L.
#[test]
fn toeplitz_trace_approaches_the_integral() {
    let cfg = SoundingConfig::from_snr(100, 1.0, 1.0, 1.0).unwrap();
    let fs = cfg.fs();
    let psd = |f: f64| cfg.px * (1.0 + 0.5 * (2.0 * std::f64::consts::PI * f / fs).cos());
    let lags = [
        Complex64::new(cfg.px, 0.0),
        Complex64::new(0.25 * cfg.px, 0.0),
    ];
    let integral = asymptotic_per_tap_crb(psd, &cfg).unwrap();

    let rel_err = |l: usize| {
        let mut padded = lags.to_vec();
        padded.resize(l, Complex64::new(0.0, 0.0));
        let j = fim_toeplitz(&padded, &cfg, l).unwrap();
        let tr = crb_trace(&j).unwrap() / l as f64;
        (tr - integral).abs() / integral
    };
    let e128 = rel_err(128);
    let e512 = rel_err(512);
    assert!(e512 <= 0.02, "relative error at L=512: {e512}");
    assert!(
        e512 < e128,
        "error should decrease with L: {e128} -> {e512}"
    );
}

/// Finite-sample FIM of a long white pilot matches the Toeplitz form built
/// from its measured lags, entrywise within 3% of the diagonal.
#[test]
fn finite_sample_fim_matches_toeplitz_form() {
    let grid = TapGrid::new(1.0, 4, 5).unwrap();
    let n = 100_000;
    let cfg = SoundingConfig::from_snr(n, 1.0, 1.0, 1.0).unwrap();
    let pilot =
        PilotSequence::for_sounding(PilotKind::GaussianWhite, &grid, n, cfg.px, 12).unwrap();
    let j = fim_from_pilot(&pilot, &grid, &cfg).unwrap();
    let lags = pilot.sample_autocorr(grid.len() - 1).unwrap();
    let jt = fim_toeplitz(&lags, &cfg, grid.len()).unwrap();
    let diag = j[(0, 0)];
    let mut worst = 0.0_f64;
    for i in 0..grid.len() {
        for k in 0..grid.len() {
            worst = worst.max((j[(i, k)] - jt[(i, k)]).abs() / diag);
        }
    }
    assert!(worst <= 0.03, "worst entry deviation {worst}");
    // and the off-diagonal mass itself is small for a white pilot
    let mut offdiag = 0.0_f64;
    for i in 0..grid.len() {
        for k in 0..grid.len() {
            if i != k {
                offdiag = offdiag.max(j[(i, k)].abs() / diag);
            }
        }
    }
    assert!(offdiag <= 0.05, "off-diagonal ratio {offdiag}");
}

/// Empirical LS MSE respects the flat-spectrum bound across SNRs for white
/// pilots.
#[test]
fn ls_mse_respects_beta_across_snrs() {
    use chanbound::montecarlo::{run_trials, Estimator, PilotSource, TrialConfig};
    let spec = PdpSpec::exponential(1.0).unwrap();
    let grid = TapGrid::new(1.0, 1, 4).unwrap();
    let cov = chanbound::covariance::build_covariance(&spec, &grid).unwrap();
    for db in [-10.0, 0.0, 10.0, 20.0] {
        let snr = 10f64.powf(db / 10.0);
        let cfg = SoundingConfig::from_snr(100, 1.0, snr, 1.0).unwrap();
        let tc = TrialConfig {
            cfg,
            grid,
            pilot: PilotSource::Generated {
                kind: PilotKind::ConstantModulusRandomPhase,
                seed: 77,
            },
            master_seed: 78,
            n_trials: 2000,
            estimators: vec![Estimator::Ls],
        };
        let res = run_trials(&tc, &cov).unwrap();
        let beta = crb_beta(grid.len(), &cfg);
        let st = &res.stats[0];
        assert!(
            st.mse >= beta - 3.0 * st.stderr,
            "{db} dB: LS mse {} below beta {beta} - 3 stderr",
            st.mse
        );
    }
}

/// Generated pilots stay within 10% of the nominal power at modest lengths.
#[test]
fn generated_pilot_power_envelope() {
    for kind in [
        PilotKind::ConstantModulusRandomPhase,
        PilotKind::GaussianWhite,
    ] {
        for seed in [0u64, 1, 2] {
            let p = PilotSequence::gen_pilot(kind, 1000, 2.0, seed).unwrap();
            let mean = p.samples().iter().map(|x| x.norm_sqr()).sum::<f64>() / p.len() as f64;
            assert!(
                (1.8..=2.2).contains(&mean),
                "{kind:?} seed {seed}: mean power {mean}"
            );
        }
    }
}

/// Covariance assembly is bitwise independent of the rayon thread count.
#[test]
fn covariance_assembly_is_schedule_independent() {
    let spec = PdpSpec::exponential(1.0).unwrap();
    let grid = TapGrid::new(1.0, 2, 4).unwrap();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| chanbound::covariance::build_covariance(&spec, &grid).unwrap());
    let parallel = chanbound::covariance::build_covariance(&spec, &grid).unwrap();
    assert_eq!(serial.matrix(), parallel.matrix());
    assert_eq!(serial.eigenvalues(), parallel.eigenvalues());
}

/// Eigen-form and direct-factorization Bayesian bounds agree whenever the
/// prior is comfortably full rank.
#[test]
fn eigen_and_direct_bcrb_agree_on_full_rank_priors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..25 {
        let l = rng.gen_range(2..14usize);
        let grid = TapGrid::new(1.0, 0, (l - 1) as u32).unwrap();
        let a = DMatrix::<Complex64>::from_fn(l, l, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let mut m = &a * a.adjoint();
        for i in 0..l {
            m[(i, i)] += Complex64::new(1e-6, 0.0);
        }
        let rh = TapCovariance::from_matrix(grid, m).unwrap();
        let cfg = SoundingConfig::from_snr(
            rng.gen_range(10..500),
            1.0,
            10f64.powf(rng.gen_range(-2.0..2.0)),
            1.0,
        )
        .unwrap();
        let eigen = bcrb_trace(&rh, &cfg);
        let direct = bcrb_trace_direct(&rh, &cfg, 1e-12).unwrap();
        assert!(
            (eigen - direct).abs() / direct <= 1e-8,
            "eigen {eigen} vs direct {direct}"
        );
    }
}
