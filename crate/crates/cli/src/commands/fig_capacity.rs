//! Single-user ergodic capacity versus SNR with the high-SNR asymptote.

use std::f64::consts::LN_2;
use std::path::PathBuf;

use efas_core::analytic::ergodic_capacity;
use efas_core::mc::simulate_capacity;
use efas_core::scenario::Precoding;
use efas_core::special::EULER_GAMMA;
use efas_core::{Result, Scenario};

use crate::config::RunConfig;
use crate::csvout::{num, CsvWriter};

pub const HEADER: &str = "snr_db,omega_sw,cap_analytic,cap_mc,cap_stderr,cap_asymptote";

pub fn run(cfg: &RunConfig) -> Result<PathBuf> {
    let mut w = CsvWriter::new(cfg, "fig-capacity", HEADER);
    let mut salt = 10_000u64;
    for &omega_sw in &cfg.omega_sw_grid {
        for &snr_db in &cfg.snr_db_grid {
            let rho = RunConfig::snr_linear(snr_db);
            let p_total = rho * cfg.sigma2;
            let omega_eq = omega_sw + cfg.beta_dl;
            let scn = Scenario::with_override(
                cfg.m,
                1,
                p_total,
                cfg.sigma2,
                omega_sw,
                cfg.beta_dl,
                Precoding::Isotropic,
            )?;
            let analytic = ergodic_capacity(rho, omega_eq)?;
            // the asymptote expression is well-defined (if not meaningful)
            // for any positive rho*omega, so the column is always populated
            let asymptote = (rho * omega_eq).log2() - EULER_GAMMA / LN_2;
            let est = simulate_capacity(&scn, &super::mc_for_point(cfg, cfg.trials, salt))?;
            w.row(&[
                num(snr_db),
                num(omega_sw),
                num(analytic),
                num(est.mean),
                num(est.std_err),
                num(asymptote),
            ]);
            salt += 1;
        }
    }
    w.write(&cfg.out_dir, "fig_capacity.csv")
}
