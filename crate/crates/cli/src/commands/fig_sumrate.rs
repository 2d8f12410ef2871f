//! ZF ergodic sum-rate sweeps: Monte-Carlo, mean-SINR approximation, and
//! exact quadrature, swept over SNR, the user count, or the antenna count.

use std::path::PathBuf;

use efas_core::analytic::{zf_sum_rate_approx, zf_sum_rate_exact};
use efas_core::mc::simulate_sum_rate;
use efas_core::scenario::Precoding;
use efas_core::{Error, Result, Scenario};

use crate::args::Vary;
use crate::config::RunConfig;
use crate::csvout::{num, CsvWriter};

pub const HEADER: &str = "vary_value,snr_db,m,k,rate_mc,rate_stderr,rate_approx_eq44,rate_exact";

struct GridPoint {
    vary_value: f64,
    snr_db: f64,
    m: usize,
    k: usize,
}

fn build_grid(cfg: &RunConfig, vary: Vary) -> Vec<GridPoint> {
    match vary {
        Vary::Snr => cfg
            .snr_db_grid
            .iter()
            .map(|&snr| GridPoint {
                vary_value: snr,
                snr_db: snr,
                m: cfg.m,
                k: cfg.k,
            })
            .collect(),
        Vary::K => {
            let mut points = Vec::new();
            for &snr in &cfg.snr_db_grid {
                for &k in &cfg.k_grid {
                    points.push(GridPoint {
                        vary_value: k as f64,
                        snr_db: snr,
                        m: cfg.m,
                        k,
                    });
                }
            }
            points
        }
        Vary::M => {
            let mut points = Vec::new();
            for &m in &cfg.m_grid {
                for &k in &cfg.k_grid {
                    points.push(GridPoint {
                        vary_value: m as f64,
                        snr_db: cfg.sumrate_snr_db_fixed,
                        m,
                        k,
                    });
                }
            }
            points
        }
    }
}

pub fn run(cfg: &RunConfig, vary: Vary) -> Result<PathBuf> {
    let points = build_grid(cfg, vary);
    // every point must be feasible before anything runs
    for p in &points {
        if p.k > p.m {
            return Err(Error::Infeasible(format!(
                "grid point K = {} exceeds M = {}",
                p.k, p.m
            )));
        }
    }

    let trials = cfg.trials_multi();
    let (suffix, label) = match vary {
        Vary::Snr => ("snr", "fig-sumrate --vary snr"),
        Vary::K => ("k", "fig-sumrate --vary k"),
        Vary::M => ("m", "fig-sumrate --vary m"),
    };
    let mut w = CsvWriter::new(cfg, label, HEADER);
    for (i, p) in points.iter().enumerate() {
        let rho = RunConfig::snr_linear(p.snr_db);
        let p_total = rho * cfg.sigma2;
        let omega_eq = cfg.omega_sw_fixed + cfg.beta_dl;
        let scn = Scenario::with_override(
            p.m,
            p.k,
            p_total,
            cfg.sigma2,
            cfg.omega_sw_fixed,
            cfg.beta_dl,
            Precoding::ZeroForcing,
        )?;
        let approx = zf_sum_rate_approx(&scn, omega_eq)?;
        let exact = zf_sum_rate_exact(&scn, omega_eq)?;
        let omega_vec = vec![omega_eq; p.k];
        let est = simulate_sum_rate(
            &scn,
            &omega_vec,
            &super::mc_for_point(cfg, trials, 30_000 + i as u64),
        )?;
        w.row(&[
            num(p.vary_value),
            num(p.snr_db),
            p.m.to_string(),
            p.k.to_string(),
            num(est.mean),
            num(est.std_err),
            num(approx),
            num(exact),
        ]);
    }
    w.write(&cfg.out_dir, &format!("fig_sumrate_{suffix}.csv"))
}
