//! Deterministic surface pipeline: from a physical impedance spec to the
//! propagation constant, guided envelope, average gains, and effective
//! noise, swept over the routed path length.

use std::path::PathBuf;

use efas_core::cxmat::CMat;
use efas_core::surface::{
    build_surface_channel, effective_noise_variance, omega_eq, omega_sw, propagation_constant,
    RelaySpec, SurfaceImpedanceSpec, SurfaceWaveParams,
};
use efas_core::Result;

use crate::config::RunConfig;
use crate::csvout::{num, CsvWriter};

pub const HEADER: &str = "d,alpha,beta,h_sw_re,h_sw_im,omega_sw,beta_dl,omega_eq,sigma_eff2";

pub fn run(cfg: &RunConfig) -> Result<PathBuf> {
    let omega_rad = 2.0 * std::f64::consts::PI * cfg.phys_freq_ghz * 1e9;
    let spec = SurfaceImpedanceSpec::new(cfg.phys_z_sur, omega_rad);
    let gamma = propagation_constant(&spec)?;
    let relay = RelaySpec::identity(cfg.phys_ports, cfg.phys_alpha_r);
    let g_path = CMat::identity(cfg.phys_ports);
    let sigma_eff2 =
        effective_noise_variance(cfg.sigma2, cfg.phys_sigma_r2, cfg.phys_beta_lu, &relay)?;

    let mut w = CsvWriter::new(cfg, "physical-omega", HEADER);
    for &d in &cfg.phys_d_grid {
        let params = SurfaceWaveParams::new(gamma, cfg.phys_a0, d)?;
        let channel = build_surface_channel(&params, &g_path)?;
        let osw = omega_sw(
            cfg.phys_beta_bs,
            cfg.phys_beta_lu,
            &channel.h_sur,
            &relay,
            cfg.m,
            cfg.normalization,
        )?;
        let oeq = omega_eq(osw, cfg.phys_beta_dl)?;
        w.row(&[
            num(d),
            num(params.alpha()),
            num(params.beta()),
            num(channel.h_sw_scalar.re),
            num(channel.h_sw_scalar.im),
            num(osw),
            num(cfg.phys_beta_dl),
            num(oeq),
            num(sigma_eff2),
        ]);
    }
    w.write(&cfg.out_dir, "physical_omega.csv")
}
