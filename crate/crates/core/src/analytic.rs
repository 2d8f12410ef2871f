//! Closed-form performance expressions: single-user outage and ergodic
//! capacity with the high-SNR asymptote, the post-ZF SINR gamma law, and the
//! ergodic sum-rate (mean-SINR approximation and numerically exact value).
//!
//! SNR quantities here are linear; dB conversion happens at the CLI.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use crate::scenario::Scenario;
use crate::special::{exp_scaled_e1, ln_gamma, regularized_lower_gamma, EULER_GAMMA};

/// Shape/scale of the post-ZF SINR law (linear SNR units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    /// Shape `m = M - K + 1`.
    pub shape: u32,
    /// Scale `theta = (P / (K sigma_eff^2)) * Omega_eq`.
    pub scale: f64,
}

impl GammaParams {
    pub fn new(shape: u32, scale: f64) -> Result<Self> {
        if shape == 0 {
            return Err(Error::Domain("gamma shape must be a positive integer".into()));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain(format!("gamma scale must be positive, got {scale}")));
        }
        Ok(GammaParams { shape, scale })
    }

    /// Mean `m * theta`.
    pub fn mean(&self) -> f64 {
        self.shape as f64 * self.scale
    }

    /// Variance `m * theta^2`.
    pub fn variance(&self) -> f64 {
        self.shape as f64 * self.scale * self.scale
    }
}

/// Single-user link operating point.
#[derive(Debug, Clone, Copy)]
pub struct LinkBudget {
    /// Effective SNR `rho = P / sigma_eff^2` (linear).
    pub rho: f64,
    /// Equivalent channel variance.
    pub omega_eq: f64,
    /// Target rate (bps/Hz).
    pub r0: f64,
    /// SNR threshold `2^R0 - 1`.
    pub gamma0: f64,
}

impl LinkBudget {
    pub fn new(rho: f64, omega_eq: f64, r0: f64) -> Result<Self> {
        if !(rho > 0.0) || !(omega_eq > 0.0) || !(r0 > 0.0) {
            return Err(Error::Domain(format!(
                "link budget requires positive rho, omega_eq, R0; got {rho}, {omega_eq}, {r0}"
            )));
        }
        Ok(LinkBudget {
            rho,
            omega_eq,
            r0,
            gamma0: (r0.exp2() - 1.0),
        })
    }
}

/// Outage probability `1 - exp(-gamma0 / (rho Omega_eq))`.
pub fn outage_probability(lb: &LinkBudget) -> f64 {
    -(-lb.gamma0 / (lb.rho * lb.omega_eq)).exp_m1()
}

/// When `1/(rho Omega_eq)` would underflow, the exact expression is
/// indistinguishable from the asymptote; switch over there.
const ASYMPTOTE_SWITCH: f64 = 1e-300;

/// Ergodic capacity `(1/ln 2) e^a E1(a)` with `a = 1/(rho Omega_eq)`.
///
/// The scaled continued fraction keeps this finite for arbitrarily small
/// `rho Omega_eq`; for `a < 1e-300` it falls back to the high-SNR asymptote.
pub fn ergodic_capacity(rho: f64, omega_eq: f64) -> Result<f64> {
    if !(rho > 0.0) || !(omega_eq > 0.0) {
        return Err(Error::Domain(format!(
            "capacity requires rho > 0 and omega_eq > 0, got {rho}, {omega_eq}"
        )));
    }
    let a = 1.0 / (rho * omega_eq);
    if a < ASYMPTOTE_SWITCH {
        return ergodic_capacity_high_snr(rho, omega_eq);
    }
    if !a.is_finite() {
        // rho*Omega_eq below ~1e-308: e^a E1(a) ~ 1/a = rho*Omega_eq
        return Ok(rho * omega_eq / LN_2);
    }
    Ok(exp_scaled_e1(a)? / LN_2)
}

/// High-SNR asymptote `log2(rho Omega_eq) - gamma_E / ln 2`.
pub fn ergodic_capacity_high_snr(rho: f64, omega_eq: f64) -> Result<f64> {
    let x = rho * omega_eq;
    if !(x > 1.0) {
        return Err(Error::Domain(format!(
            "asymptote requires rho * omega_eq > 1, got {x}"
        )));
    }
    Ok(x.log2() - EULER_GAMMA / LN_2)
}

/// Shape and scale of the per-user post-ZF SINR distribution.
pub fn zf_sinr_params(scn: &Scenario, omega_eq: f64) -> Result<GammaParams> {
    if scn.k_users > scn.m_antennas {
        return Err(Error::Infeasible(format!(
            "ZF SINR law needs K <= M, got K = {}, M = {}",
            scn.k_users, scn.m_antennas
        )));
    }
    if !scn.is_symmetric() {
        return Err(Error::Config(
            "the ZF SINR law assumes a symmetric scenario".into(),
        ));
    }
    let shape = (scn.m_antennas - scn.k_users + 1) as u32;
    let sigma_eff2 = scn.sigma_eff2_user(0)?;
    let scale = scn.p_total / (scn.k_users as f64 * sigma_eff2) * omega_eq;
    GammaParams::new(shape, scale)
}

/// Gamma density `x^(m-1) e^(-x/theta) / (Gamma(m) theta^m)` on `x >= 0`.
pub fn gamma_pdf(x: f64, gp: &GammaParams) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let m = gp.shape as f64;
    if x == 0.0 {
        return if gp.shape == 1 { 1.0 / gp.scale } else { 0.0 };
    }
    let log_pdf = (m - 1.0) * x.ln() - x / gp.scale
        - ln_gamma(m).expect("shape is positive")
        - m * gp.scale.ln();
    log_pdf.exp()
}

/// Gamma CDF via the regularized lower incomplete gamma function.
pub fn gamma_cdf(x: f64, gp: &GammaParams) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    regularized_lower_gamma(gp.shape as f64, x / gp.scale)
}

/// Mean-SINR sum-rate approximation `K log2(1 + m theta)`. Jensen's
/// inequality makes this an upper bound on the exact ergodic sum-rate.
pub fn zf_sum_rate_approx(scn: &Scenario, omega_eq: f64) -> Result<f64> {
    if scn.k_users > scn.m_antennas {
        return Err(Error::Infeasible(format!(
            "sum-rate needs K <= M, got K = {}, M = {}",
            scn.k_users, scn.m_antennas
        )));
    }
    if omega_eq < 0.0 {
        return Err(Error::Domain(format!("omega_eq must be nonnegative, got {omega_eq}")));
    }
    let k = scn.k_users as f64;
    let m = (scn.m_antennas - scn.k_users + 1) as f64;
    let sigma_eff2 = scn.sigma_eff2_user(0)?;
    let mean_sinr = m * scn.p_total / (k * sigma_eff2) * omega_eq;
    Ok(k * (1.0 + mean_sinr).log2())
}

/// Ergodic sum-rate `K E{log2(1 + X)}` for `X ~ Gamma(m, theta)`, by
/// adaptive quadrature (absolute error well below 1e-6 bps/Hz).
pub fn zf_sum_rate_exact(scn: &Scenario, omega_eq: f64) -> Result<f64> {
    let gp = zf_sinr_params(scn, omega_eq)?;
    Ok(scn.k_users as f64 * expected_log2_one_plus(&gp)?)
}

/// `E{log2(1 + X)}` for a gamma-distributed `X`.
pub fn expected_log2_one_plus(gp: &GammaParams) -> Result<f64> {
    // Integrate to where the gamma tail stops mattering, then verify.
    let m = gp.shape as f64;
    let mut hi = gp.scale * (m + 10.0 * m.sqrt() + 30.0);
    for _ in 0..64 {
        if gamma_cdf(hi, gp)? > 1.0 - 1e-13 {
            break;
        }
        hi *= 2.0;
    }
    let pdf = |x: f64| (1.0 + x).log2() * gamma_pdf(x, gp);
    adaptive_simpson(&pdf, 0.0, hi, 1e-8)
}
