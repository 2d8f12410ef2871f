//! Simulation operations: outage, capacity, ZF SINR sampling, sum-rate, the
//! interference-nulling residual, and the brute-force probe that settles the
//! surface-wave gain normalization.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::channel::{
    isotropic_unit_vector, sample_equivalent_matrix, sample_layered_channel,
    surface_wave_coefficient_with, ChannelRealization,
};
use crate::cxmat::{dot, dot_conj, C64, CMat};
use crate::error::{Error, Result};
use crate::rng::{StreamTag, SubStream, TrialKey};
use crate::scenario::{Precoding, Scenario};
use crate::surface::{omega_sw, SurfaceChannel, SwGainNormalization};

use super::estimate::MonteCarloEstimate;
use super::runner::{run_trials, run_trials_multi, McConfig};
use super::zf::zf_precoder;

/// Trial index reserved for the fixed-precoder mode, so the held vector
/// never collides with a per-trial stream.
const FIXED_PRECODER_TRIAL: u64 = u64::MAX;

/// Attempt cap per trial before a persistent-singularity panic; random
/// Gaussian draws hit the condition cap with probability ~0.
const MAX_RESAMPLE_ATTEMPTS: usize = 1000;

/// Resampled fraction above which the configuration itself is suspect.
const RESAMPLE_RATE_LIMIT: f64 = 1e-3;

enum SingleUserSampler<'a> {
    Layered {
        scn: &'a Scenario,
        w_relay: CMat,
        channel: SurfaceChannel,
        fixed_w: Option<Vec<C64>>,
    },
    Direct {
        omega_eq: f64,
    },
}

impl<'a> SingleUserSampler<'a> {
    fn build(scn: &'a Scenario, seed: u64) -> Result<Self> {
        if let Some(surface) = &scn.surface {
            let channel = surface.surface_channel()?;
            let w_relay = surface.relay.w_relay();
            let fixed_w = if scn.redraw_precoder {
                None
            } else {
                let mut s = SubStream::new(seed, FIXED_PRECODER_TRIAL, StreamTag::Precoder);
                Some(isotropic_unit_vector(scn.m_antennas, &mut s))
            };
            Ok(SingleUserSampler::Layered {
                scn,
                w_relay,
                channel,
                fixed_w,
            })
        } else {
            Ok(SingleUserSampler::Direct {
                omega_eq: scn.omega_eq_user(0)?,
            })
        }
    }

    /// One draw of user 0's end-to-end coefficient h_eq.
    fn coefficient(&self, key: TrialKey) -> C64 {
        match self {
            SingleUserSampler::Direct { omega_eq } => {
                let mut s = key.stream(StreamTag::Equivalent);
                s.next_complex_gaussian(*omega_eq)
            }
            SingleUserSampler::Layered {
                scn,
                w_relay,
                channel,
                fixed_w,
            } => {
                let real = sample_layered_channel(scn, key).expect("scenario validated");
                let drawn;
                let w: &[C64] = match fixed_w {
                    Some(v) => v,
                    None => {
                        let mut s = key.stream(StreamTag::Precoder);
                        drawn = isotropic_unit_vector(scn.m_antennas, &mut s);
                        &drawn
                    }
                };
                let sw = surface_wave_coefficient_with(&real, w_relay, channel, w, 0);
                let direct = dot(&real.h_dl[0], w);
                sw + direct
            }
        }
    }

    /// One draw of the end-to-end power gain |h_eq|^2 for user 0.
    fn power_gain(&self, key: TrialKey) -> f64 {
        self.coefficient(key).norm_sqr()
    }
}

fn check_single_user(scn: &Scenario, mc: &McConfig) -> Result<()> {
    scn.validate()?;
    if scn.k_users != 1 || scn.precoding != Precoding::Isotropic {
        return Err(Error::Config(
            "single-user simulation requires K = 1 with isotropic precoding".into(),
        ));
    }
    if mc.trials < 2 {
        return Err(Error::Config("need at least two trials".into()));
    }
    Ok(())
}

/// Monte-Carlo outage probability: fraction of trials with
/// `log2(1 + rho |h_eq|^2) < R0`.
pub fn simulate_outage(scn: &Scenario, r0: f64, mc: &McConfig) -> Result<MonteCarloEstimate> {
    check_single_user(scn, mc)?;
    if !(r0 > 0.0) {
        return Err(Error::Config(format!("target rate must be positive, got {r0}")));
    }
    let rho = scn.rho_user(0)?;
    let gamma0 = r0.exp2() - 1.0; // outage iff rho |h|^2 < 2^R0 - 1
    let sampler = SingleUserSampler::build(scn, mc.seed)?;
    let values = run_trials(mc, |trial| {
        let gain = sampler.power_gain(TrialKey::new(mc.seed, trial));
        if rho * gain < gamma0 {
            1.0
        } else {
            0.0
        }
    });
    MonteCarloEstimate::from_values(&values, mc.confidence)
}

/// Per-trial draws of user 0's layered end-to-end coefficient, in trial
/// order (feeds the distribution-match validation suites).
pub fn sample_equivalent_coefficients(scn: &Scenario, mc: &McConfig) -> Result<Vec<C64>> {
    scn.validate()?;
    if scn.surface.is_none() {
        return Err(Error::Config(
            "coefficient sampling requires a surface spec".into(),
        ));
    }
    if scn.precoding != Precoding::Isotropic {
        return Err(Error::Config(
            "coefficient sampling uses the isotropic precoder".into(),
        ));
    }
    let sampler = SingleUserSampler::build(scn, mc.seed)?;
    let raw = run_trials_multi(mc, 2, |trial, out| {
        let h = sampler.coefficient(TrialKey::new(mc.seed, trial));
        out[0] = h.re;
        out[1] = h.im;
    });
    Ok(raw.chunks(2).map(|c| C64::new(c[0], c[1])).collect())
}

/// Monte-Carlo ergodic capacity: mean of `log2(1 + rho |h_eq|^2)`.
pub fn simulate_capacity(scn: &Scenario, mc: &McConfig) -> Result<MonteCarloEstimate> {
    check_single_user(scn, mc)?;
    let rho = scn.rho_user(0)?;
    let sampler = SingleUserSampler::build(scn, mc.seed)?;
    let values = run_trials(mc, |trial| {
        let gain = sampler.power_gain(TrialKey::new(mc.seed, trial));
        (1.0 + rho * gain).log2()
    });
    MonteCarloEstimate::from_values(&values, mc.confidence)
}

struct ZfSampler<'a> {
    scn: &'a Scenario,
    omega_eq: Vec<f64>,
    p_per_user: f64,
    sigma_eff2: Vec<f64>,
    resamples: AtomicU64,
}

impl<'a> ZfSampler<'a> {
    fn build(scn: &'a Scenario, omega_eq: &[f64]) -> Result<Self> {
        scn.validate()?;
        if scn.k_users > scn.m_antennas {
            return Err(Error::Infeasible(format!(
                "ZF simulation needs K <= M, got K = {}, M = {}",
                scn.k_users, scn.m_antennas
            )));
        }
        if omega_eq.len() != scn.k_users {
            return Err(Error::DimensionMismatch(format!(
                "omega_eq must have one entry per user ({})",
                scn.k_users
            )));
        }
        if omega_eq.iter().any(|&o| !(o > 0.0)) {
            return Err(Error::Domain("omega_eq entries must be positive".into()));
        }
        let sigma_eff2 = (0..scn.k_users)
            .map(|u| scn.sigma_eff2_user(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZfSampler {
            scn,
            omega_eq: omega_eq.to_vec(),
            p_per_user: scn.power_per_user(),
            sigma_eff2,
            resamples: AtomicU64::new(0),
        })
    }

    /// Per-user post-ZF SINRs for one trial. Singular draws are resampled
    /// from the same trial stream and counted.
    fn trial_sinrs(&self, key: TrialKey) -> Vec<f64> {
        let mut stream = key.stream(StreamTag::Equivalent);
        for _ in 0..MAX_RESAMPLE_ATTEMPTS {
            let eq = sample_equivalent_matrix(self.scn, &self.omega_eq, &mut stream);
            match zf_precoder(&eq.h_eq) {
                Ok(zf) => {
                    return (0..self.scn.k_users)
                        .map(|u| {
                            let h_u = eq.h_eq.col(u);
                            let w_u = zf.w.col(u);
                            let gain = dot_conj(&h_u, &w_u).norm_sqr();
                            self.p_per_user * gain / self.sigma_eff2[u]
                        })
                        .collect();
                }
                Err(_) => {
                    self.resamples.fetch_add(1, Ordering::Relaxed);
                }
            }
        }
        panic!("singular channel draws persisted for {MAX_RESAMPLE_ATTEMPTS} attempts");
    }

    fn check_resample_rate(&self, trials: u64) -> Result<u64> {
        let resampled = self.resamples.load(Ordering::Relaxed);
        if (resampled as f64) > RESAMPLE_RATE_LIMIT * trials as f64 {
            return Err(Error::Config(format!(
                "persistent singularity: {resampled} resampled draws over {trials} trials"
            )));
        }
        Ok(resampled)
    }
}

/// Per-trial samples of user 1's post-ZF SINR (users are exchangeable in
/// the symmetric case).
#[derive(Debug, Clone)]
pub struct SinrSampleSet {
    pub samples: Vec<f64>,
    /// Identifies the generating configuration.
    pub fingerprint: String,
    pub seed: u64,
    pub resampled: u64,
}

pub fn sample_zf_sinr(scn: &Scenario, omega_eq: &[f64], mc: &McConfig) -> Result<SinrSampleSet> {
    let sampler = ZfSampler::build(scn, omega_eq)?;
    if mc.trials < 2 {
        return Err(Error::Config("need at least two trials".into()));
    }
    let samples = run_trials(mc, |trial| {
        sampler.trial_sinrs(TrialKey::new(mc.seed, trial))[0]
    });
    let resampled = sampler.check_resample_rate(mc.trials)?;
    let fingerprint = format!(
        "m={} k={} p={} sigma_eff2={:?} omega_eq={:?} trials={} seed={}",
        scn.m_antennas, scn.k_users, scn.p_total, sampler.sigma_eff2, omega_eq, mc.trials, mc.seed
    );
    Ok(SinrSampleSet {
        samples,
        fingerprint,
        seed: mc.seed,
        resampled,
    })
}

/// Monte-Carlo ergodic sum-rate: per trial, one ZF solve and
/// `sum_u log2(1 + SINR_u)`.
pub fn simulate_sum_rate(scn: &Scenario, omega_eq: &[f64], mc: &McConfig) -> Result<MonteCarloEstimate> {
    let sampler = ZfSampler::build(scn, omega_eq)?;
    if mc.trials < 2 {
        return Err(Error::Config("need at least two trials".into()));
    }
    let values = run_trials(mc, |trial| {
        sampler
            .trial_sinrs(TrialKey::new(mc.seed, trial))
            .iter()
            .map(|&s| (1.0 + s).log2())
            .sum()
    });
    sampler.check_resample_rate(mc.trials)?;
    MonteCarloEstimate::from_values(&values, mc.confidence)
}

/// Mean normalized inter-user interference residual after ZF; ideally zero.
pub fn interference_residual(scn: &Scenario, omega_eq: &[f64], mc: &McConfig) -> Result<MonteCarloEstimate> {
    let sampler = ZfSampler::build(scn, omega_eq)?;
    if mc.trials < 2 {
        return Err(Error::Config("need at least two trials".into()));
    }
    let values = run_trials(mc, |trial| {
        let key = TrialKey::new(mc.seed, trial);
        let mut stream = key.stream(StreamTag::Equivalent);
        for _ in 0..MAX_RESAMPLE_ATTEMPTS {
            let eq = sample_equivalent_matrix(sampler.scn, &sampler.omega_eq, &mut stream);
            if let Ok(zf) = zf_precoder(&eq.h_eq) {
                return super::zf::interference_ratio(&eq.h_eq, &zf.w);
            }
            sampler.resamples.fetch_add(1, Ordering::Relaxed);
        }
        panic!("singular channel draws persisted for {MAX_RESAMPLE_ATTEMPTS} attempts");
    });
    sampler.check_resample_rate(mc.trials)?;
    MonteCarloEstimate::from_values(&values, mc.confidence)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationVerdict {
    /// The 1/M convention matches the layered model.
    AntennaAveraged,
    /// The plain trace matches the layered model.
    Total,
    /// Neither candidate (or both) sits within 3 standard errors.
    Inconclusive,
}

/// Outcome of the brute-force normalization probe.
#[derive(Debug, Clone)]
pub struct NormalizationProbe {
    /// Empirical mean of |T_u w|^2 over layered draws.
    pub estimate: MonteCarloEstimate,
    pub antenna_averaged_value: f64,
    pub total_value: f64,
    pub verdict: NormalizationVerdict,
}

/// Estimate the surface-wave path's mean power gain by brute force over
/// layered draws with a redrawn isotropic precoder, and compare it against
/// both normalization conventions of the closed-form gain.
pub fn sw_normalization_probe(scn: &Scenario, mc: &McConfig) -> Result<NormalizationProbe> {
    scn.validate()?;
    let surface = scn
        .surface
        .as_ref()
        .ok_or_else(|| Error::Config("the normalization probe requires a surface spec".into()))?;
    if mc.trials < 2 {
        return Err(Error::Config("need at least two trials".into()));
    }
    let channel = surface.surface_channel()?;
    let w_relay = surface.relay.w_relay();
    let values = run_trials(mc, |trial| {
        let key = TrialKey::new(mc.seed, trial);
        let real: ChannelRealization = sample_layered_channel(scn, key).expect("scenario validated");
        let mut s = key.stream(StreamTag::Precoder);
        let w = isotropic_unit_vector(scn.m_antennas, &mut s);
        surface_wave_coefficient_with(&real, &w_relay, &channel, &w, 0).norm_sqr()
    });
    let estimate = MonteCarloEstimate::from_values(&values, mc.confidence)?;

    let antenna_averaged_value = omega_sw(
        scn.beta_bs,
        scn.beta_lu[0],
        &channel.h_sur,
        &surface.relay,
        scn.m_antennas,
        SwGainNormalization::AntennaAveraged,
    )?;
    let total_value = omega_sw(
        scn.beta_bs,
        scn.beta_lu[0],
        &channel.h_sur,
        &surface.relay,
        scn.m_antennas,
        SwGainNormalization::Total,
    )?;

    let hit_avg = (estimate.mean - antenna_averaged_value).abs() <= 3.0 * estimate.std_err;
    let hit_total = (estimate.mean - total_value).abs() <= 3.0 * estimate.std_err;
    let verdict = match (hit_avg, hit_total) {
        (true, false) => NormalizationVerdict::AntennaAveraged,
        (false, true) => NormalizationVerdict::Total,
        _ => NormalizationVerdict::Inconclusive,
    };
    Ok(NormalizationProbe {
        estimate,
        antenna_averaged_value,
        total_value,
        verdict,
    })
}
