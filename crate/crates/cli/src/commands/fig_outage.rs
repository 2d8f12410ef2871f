//! Single-user outage probability versus SNR: analytic law against the
//! Monte-Carlo estimate, one row per (omega_sw, snr_db) grid point.

use std::path::PathBuf;

use efas_core::analytic::{outage_probability, LinkBudget};
use efas_core::mc::simulate_outage;
use efas_core::scenario::Precoding;
use efas_core::{Result, Scenario};

use crate::config::RunConfig;
use crate::csvout::{num, CsvWriter};

pub const HEADER: &str = "snr_db,omega_sw,omega_eq,pout_analytic,pout_mc,pout_stderr,trials";

pub fn run(cfg: &RunConfig) -> Result<PathBuf> {
    let mut w = CsvWriter::new(cfg, "fig-outage", HEADER);
    let mut salt = 0u64;
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
            let analytic = outage_probability(&LinkBudget::new(rho, omega_eq, cfg.r0)?);
            let est = simulate_outage(&scn, cfg.r0, &super::mc_for_point(cfg, cfg.trials, salt))?;
            w.row(&[
                num(snr_db),
                num(omega_sw),
                num(omega_eq),
                num(analytic),
                num(est.mean),
                num(est.std_err),
                cfg.trials.to_string(),
            ]);
            salt += 1;
        }
    }
    w.write(&cfg.out_dir, "fig_outage.csv")
}
