//! Statistical characterization of the per-user post-ZF SINR: empirical
//! histogram density and ECDF against the analytic gamma law, with a
//! trailing Kolmogorov-Smirnov summary row.

use std::path::PathBuf;

use efas_core::analytic::{gamma_cdf, gamma_pdf, zf_sinr_params};
use efas_core::mc::sample_zf_sinr;
use efas_core::scenario::Precoding;
use efas_core::stats::{histogram_density, ks_statistic, Ecdf};
use efas_core::{Result, Scenario};

use crate::config::RunConfig;
use crate::csvout::{num, CsvWriter};

pub const HEADER: &str = "bin_center,pdf_emp,pdf_analytic,cdf_emp,cdf_analytic";
pub const BINS: usize = 100;

pub fn run(cfg: &RunConfig) -> Result<PathBuf> {
    let rho = RunConfig::snr_linear(cfg.snr_db_fixed);
    let p_total = rho * cfg.sigma2;
    let omega_eq = cfg.omega_sw_fixed + cfg.beta_dl;
    let scn = Scenario::with_override(
        cfg.m,
        cfg.k,
        p_total,
        cfg.sigma2,
        cfg.omega_sw_fixed,
        cfg.beta_dl,
        Precoding::ZeroForcing,
    )?;
    let gp = zf_sinr_params(&scn, omega_eq)?;

    let trials = cfg.trials_multi();
    let omega_vec = vec![omega_eq; cfg.k];
    let set = sample_zf_sinr(&scn, &omega_vec, &super::mc_for_point(cfg, trials, 20_000))?;

    let hist = histogram_density(&set.samples, BINS)?;
    let ecdf = Ecdf::new(set.samples.clone())?;
    let ks = ks_statistic(&set.samples, |x| {
        gamma_cdf(x, &gp).expect("valid gamma parameters")
    })?;

    let mut w = CsvWriter::new(cfg, "fig-zf-dist", HEADER);
    for (i, &center) in hist.bin_centers().iter().enumerate() {
        w.row(&[
            num(center),
            num(hist.densities[i]),
            num(gamma_pdf(center, &gp)),
            num(ecdf.eval(center)),
            num(gamma_cdf(center, &gp)?),
        ]);
    }
    w.line("ks_d,n");
    w.row(&[num(ks), set.samples.len().to_string()]);
    w.write(&cfg.out_dir, "fig_zf_dist.csv")
}
