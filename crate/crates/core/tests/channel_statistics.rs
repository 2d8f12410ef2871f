//! Distribution-level validation of the layered channel: Gaussianity of the
//! end-to-end coefficient, the variance identity, the exponential power
//! gain, segment independence, and bit-exact reproducibility.
//!
//! The Gaussian reduction of the layered coefficient is a large-port
//! property: conditioned on the launcher-to-user row the coefficient is
//! exactly Gaussian, but its conditional variance fluctuates like
//! Gamma(N)/N across realizations. The CDF gap to the fixed-variance
//! Gaussian scales as ~1/N (about 9e-4 on |h|^2 at N = 256), so the
//! validation scenario uses 256 surface/launcher ports to sit inside the
//! Kolmogorov-Smirnov gate; at the fast-trial default N = 8 the gap (~0.03)
//! would dominate the statistic.

use efas_core::channel::sample_layered_channel;
use efas_core::cxmat::{C64, CMat};
use efas_core::mc::{sample_equivalent_coefficients, McConfig, MonteCarloEstimate};
use efas_core::rng::TrialKey;
use efas_core::scenario::{Precoding, Scenario, SurfaceConfig};
use efas_core::stats::{ks_critical, ks_statistic, normal_cdf};
use efas_core::surface::{RelaySpec, SurfaceWaveParams};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn identity_surface_scenario(ports: usize, m: usize, beta_dl: f64) -> Scenario {
    let wave = SurfaceWaveParams::new(c(0.0, 0.0), c(1.0, 0.0), 0.0).unwrap();
    let surface = SurfaceConfig {
        wave,
        relay: RelaySpec::identity(ports, c(1.0, 0.0)),
        g_path: CMat::identity(ports),
    };
    Scenario::with_surface(m, 1, 10.0, 1.0, 0.0, 1.0, 1.0, beta_dl, surface, Precoding::Isotropic)
        .unwrap()
}

#[test]
fn layered_coefficient_distribution_matches_equivalent_model() {
    let ports = 256;
    let scn = identity_surface_scenario(ports, 4, 0.01);
    let omega_eq = scn.omega_eq_user(0).unwrap();
    assert!((omega_eq - (ports as f64 + 0.01)).abs() < 1e-9);

    let n = 100_000u64;
    let mc = McConfig::new(n, 2001);
    let coeffs = sample_equivalent_coefficients(&scn, &mc).unwrap();

    let crit = ks_critical(n as usize, 1.63);
    let component_sd = (omega_eq / 2.0).sqrt();

    let re: Vec<f64> = coeffs.iter().map(|h| h.re).collect();
    let d_re = ks_statistic(&re, |x| normal_cdf(x / component_sd)).unwrap();
    assert!(d_re <= crit, "real-part KS {d_re:.5} > {crit:.5}");

    let im: Vec<f64> = coeffs.iter().map(|h| h.im).collect();
    let d_im = ks_statistic(&im, |x| normal_cdf(x / component_sd)).unwrap();
    assert!(d_im <= crit, "imag-part KS {d_im:.5} > {crit:.5}");

    let power: Vec<f64> = coeffs.iter().map(|h| h.norm_sqr()).collect();
    let d_pow = ks_statistic(&power, |x| -(-x / omega_eq).exp_m1()).unwrap();
    assert!(d_pow <= crit, "power KS {d_pow:.5} > {crit:.5}");

    // variance identity holds exactly at any port count
    let est = MonteCarloEstimate::from_values(&power, 0.95).unwrap();
    assert!(
        est.z_score(omega_eq) < 3.0,
        "mean power {} vs {omega_eq} ({} se)",
        est.mean,
        est.z_score(omega_eq)
    );
}

#[test]
fn segment_variances_recover_empirically() {
    let mut scn = identity_surface_scenario(8, 4, 0.04);
    scn.beta_bs = 2.5;
    scn.beta_lu = vec![0.7];
    let trials = 20_000u64;
    let (mut p_bs, mut p_lu, mut p_dl) = (0.0, 0.0, 0.0);
    let (mut n_bs, mut n_lu, mut n_dl) = (0usize, 0usize, 0usize);
    for t in 0..trials {
        let real = sample_layered_channel(&scn, TrialKey::new(77, t)).unwrap();
        for r in 0..real.h_bs_sur.rows() {
            for cc in 0..real.h_bs_sur.cols() {
                p_bs += real.h_bs_sur.at(r, cc).norm_sqr();
                n_bs += 1;
            }
        }
        for z in &real.h_relay_ue[0] {
            p_lu += z.norm_sqr();
            n_lu += 1;
        }
        for z in &real.h_dl[0] {
            p_dl += z.norm_sqr();
            n_dl += 1;
        }
    }
    assert!((p_bs / n_bs as f64 / 2.5 - 1.0).abs() < 0.01, "beta_BS recovery");
    assert!((p_lu / n_lu as f64 / 0.7 - 1.0).abs() < 0.01, "beta_LU recovery");
    assert!((p_dl / n_dl as f64 / 0.04 - 1.0).abs() < 0.01, "beta_DL recovery");
}

#[test]
fn segments_are_uncorrelated() {
    let scn = identity_surface_scenario(8, 4, 1.0);
    let trials = 100_000u64;
    let mut sums = [0.0f64; 3];
    let mut cross = [0.0f64; 3];
    for t in 0..trials {
        let real = sample_layered_channel(&scn, TrialKey::new(78, t)).unwrap();
        let a = real.h_bs_sur.at(0, 0).re;
        let b = real.h_relay_ue[0][0].re;
        let d = real.h_dl[0][0].re;
        sums[0] += a * a;
        sums[1] += b * b;
        sums[2] += d * d;
        cross[0] += a * b;
        cross[1] += a * d;
        cross[2] += b * d;
    }
    for (i, &c) in cross.iter().enumerate() {
        let (x, y) = match i {
            0 => (sums[0], sums[1]),
            1 => (sums[0], sums[2]),
            _ => (sums[1], sums[2]),
        };
        let corr = c / (x * y).sqrt();
        assert!(corr.abs() < 0.01, "cross-correlation {i}: {corr}");
    }
}

#[test]
fn identical_keys_give_bit_identical_realizations() {
    let scn = identity_surface_scenario(8, 4, 0.01);
    let mc = McConfig::new(64, 99);
    let a = sample_equivalent_coefficients(&scn, &mc).unwrap();
    let b = sample_equivalent_coefficients(&scn, &mc).unwrap();
    assert_eq!(a, b);
    let other = sample_equivalent_coefficients(&scn, &McConfig::new(64, 100)).unwrap();
    assert_ne!(a, other);
}
