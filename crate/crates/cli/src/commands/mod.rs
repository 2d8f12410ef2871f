pub mod fig_capacity;
pub mod fig_outage;
pub mod fig_sumrate;
pub mod fig_zf_dist;
pub mod physical;
pub mod validate;

use efas_core::mc::McConfig;

use crate::config::RunConfig;

/// Monte-Carlo execution parameters for one grid point; each point gets an
/// independent derived seed so neighboring rows carry independent noise.
pub(crate) fn mc_for_point(cfg: &RunConfig, trials: u64, salt: u64) -> McConfig {
    McConfig::new(trials, efas_core::rng::derive_seed(cfg.seed, salt))
        .with_workers(cfg.workers)
        .with_confidence(cfg.confidence)
}
