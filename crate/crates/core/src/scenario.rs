//! Experiment description: array sizes, powers, large-scale gains, and either
//! a physical surface configuration or a direct override of the
//! surface-wave-assisted gain.

use crate::cxmat::CMat;
use crate::error::{Error, Result};
use crate::surface::{
    build_surface_channel, effective_noise_variance, omega_eq, omega_sw, RelaySpec, SurfaceChannel,
    SurfaceWaveParams, SwGainNormalization,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precoding {
    Isotropic,
    ZeroForcing,
}

/// Physical surface description: guided-wave parameters, launcher processing,
/// and the deterministic routing matrix.
#[derive(Debug, Clone)]
pub struct SurfaceConfig {
    pub wave: SurfaceWaveParams,
    pub relay: RelaySpec,
    pub g_path: CMat,
}

impl SurfaceConfig {
    pub fn surface_channel(&self) -> Result<SurfaceChannel> {
        build_surface_channel(&self.wave, &self.g_path)
    }
}

/// Full experiment description. Exactly one of `surface` /
/// `omega_sw_override` must be present.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// BS antennas (M).
    pub m_antennas: usize,
    /// Users (K).
    pub k_users: usize,
    /// Surface excitation ports (N_s).
    pub n_s: usize,
    /// Launcher ports (N_L).
    pub n_l: usize,
    /// Total BS power (W).
    pub p_total: f64,
    /// Receiver thermal noise variance.
    pub sigma2: f64,
    /// Relay electronics noise variance.
    pub sigma_r2: f64,
    /// BS-to-surface large-scale gain.
    pub beta_bs: f64,
    /// Launcher-to-user large-scale gains, one per user.
    pub beta_lu: Vec<f64>,
    /// Direct-link large-scale gains, one per user.
    pub beta_dl: Vec<f64>,
    pub surface: Option<SurfaceConfig>,
    pub omega_sw_override: Option<f64>,
    pub precoding: Precoding,
    /// Redraw the isotropic precoder on every realization (default); when
    /// false a single precoder is drawn once and held fixed.
    pub redraw_precoder: bool,
    pub normalization: SwGainNormalization,
}

impl Scenario {
    /// Symmetric scenario with the surface-wave gain given directly.
    pub fn with_override(
        m_antennas: usize,
        k_users: usize,
        p_total: f64,
        sigma2: f64,
        omega_sw: f64,
        beta_dl: f64,
        precoding: Precoding,
    ) -> Result<Self> {
        let scn = Scenario {
            m_antennas,
            k_users,
            n_s: 8,
            n_l: 8,
            p_total,
            sigma2,
            sigma_r2: 0.0,
            beta_bs: 1.0,
            beta_lu: vec![1.0; k_users],
            beta_dl: vec![beta_dl; k_users],
            surface: None,
            omega_sw_override: Some(omega_sw),
            precoding,
            redraw_precoder: true,
            normalization: SwGainNormalization::default(),
        };
        scn.validate()?;
        Ok(scn)
    }

    /// Symmetric scenario carrying a physical surface configuration.
    #[allow(clippy::too_many_arguments)]
    pub fn with_surface(
        m_antennas: usize,
        k_users: usize,
        p_total: f64,
        sigma2: f64,
        sigma_r2: f64,
        beta_bs: f64,
        beta_lu: f64,
        beta_dl: f64,
        surface: SurfaceConfig,
        precoding: Precoding,
    ) -> Result<Self> {
        let n_s = surface.g_path.rows();
        let n_l = surface.relay.launcher_ports();
        let scn = Scenario {
            m_antennas,
            k_users,
            n_s,
            n_l,
            p_total,
            sigma2,
            sigma_r2,
            beta_bs,
            beta_lu: vec![beta_lu; k_users],
            beta_dl: vec![beta_dl; k_users],
            surface: Some(surface),
            omega_sw_override: None,
            precoding,
            redraw_precoder: true,
            normalization: SwGainNormalization::default(),
        };
        scn.validate()?;
        Ok(scn)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_antennas == 0 || self.k_users == 0 || self.n_s == 0 || self.n_l == 0 {
            return Err(Error::Config("array and port counts must be positive".into()));
        }
        if !(self.p_total > 0.0) || !(self.sigma2 > 0.0) || self.sigma_r2 < 0.0 {
            return Err(Error::Config(format!(
                "need P > 0, sigma^2 > 0, sigma_r^2 >= 0; got {}, {}, {}",
                self.p_total, self.sigma2, self.sigma_r2
            )));
        }
        if self.beta_bs < 0.0 {
            return Err(Error::Config("beta_BS must be nonnegative".into()));
        }
        if self.beta_lu.len() != self.k_users || self.beta_dl.len() != self.k_users {
            return Err(Error::Config(format!(
                "per-user gain vectors must have length K = {}",
                self.k_users
            )));
        }
        if self.beta_lu.iter().chain(&self.beta_dl).any(|&b| b < 0.0 || !b.is_finite()) {
            return Err(Error::Config("per-user gains must be finite and nonnegative".into()));
        }
        match (&self.surface, self.omega_sw_override) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "surface spec and omega_sw override are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "either a surface spec or an omega_sw override is required".into(),
                ))
            }
            (None, Some(o)) if o < 0.0 || !o.is_finite() => {
                return Err(Error::Config(format!("omega_sw override must be >= 0, got {o}")))
            }
            _ => {}
        }
        if let Some(surface) = &self.surface {
            if surface.g_path.rows() != self.n_s || !surface.g_path.is_square() {
                return Err(Error::DimensionMismatch(format!(
                    "routing matrix must be {0}x{0}",
                    self.n_s
                )));
            }
            if surface.relay.launcher_ports() != self.n_l
                || surface.relay.surface_ports() != self.n_s
            {
                return Err(Error::DimensionMismatch(format!(
                    "relay matrix must be {}x{}",
                    self.n_l, self.n_s
                )));
            }
        }
        if self.precoding == Precoding::ZeroForcing && self.k_users > self.m_antennas {
            return Err(Error::Infeasible(format!(
                "zero-forcing needs K <= M, got K = {}, M = {}",
                self.k_users, self.m_antennas
            )));
        }
        Ok(())
    }

    /// Equal power allocation `P_u = P / K`.
    pub fn power_per_user(&self) -> f64 {
        self.p_total / self.k_users as f64
    }

    /// Surface-wave-assisted gain for one user, under the scenario's
    /// normalization convention.
    pub fn omega_sw_user(&self, user: usize) -> Result<f64> {
        self.check_user(user)?;
        if let Some(o) = self.omega_sw_override {
            return Ok(o);
        }
        let surface = self.surface.as_ref().expect("validated");
        let channel = surface.surface_channel()?;
        omega_sw(
            self.beta_bs,
            self.beta_lu[user],
            &channel.h_sur,
            &surface.relay,
            self.m_antennas,
            self.normalization,
        )
    }

    /// Equivalent channel variance for one user.
    pub fn omega_eq_user(&self, user: usize) -> Result<f64> {
        omega_eq(self.omega_sw_user(user)?, self.beta_dl[user])
    }

    pub fn omega_eq_all(&self) -> Result<Vec<f64>> {
        (0..self.k_users).map(|u| self.omega_eq_user(u)).collect()
    }

    /// Effective noise variance seen by one user.
    pub fn sigma_eff2_user(&self, user: usize) -> Result<f64> {
        self.check_user(user)?;
        match &self.surface {
            Some(surface) => {
                effective_noise_variance(self.sigma2, self.sigma_r2, self.beta_lu[user], &surface.relay)
            }
            None => Ok(self.sigma2),
        }
    }

    /// Effective SNR `rho = P / sigma_eff^2` for one user.
    pub fn rho_user(&self, user: usize) -> Result<f64> {
        Ok(self.p_total / self.sigma_eff2_user(user)?)
    }

    pub fn is_symmetric(&self) -> bool {
        self.beta_lu.windows(2).all(|w| w[0] == w[1])
            && self.beta_dl.windows(2).all(|w| w[0] == w[1])
    }

    fn check_user(&self, user: usize) -> Result<()> {
        if user >= self.k_users {
            return Err(Error::Config(format!(
                "user index {user} out of range for K = {}",
                self.k_users
            )));
        }
        Ok(())
    }
}
