//! Trial-parallel Monte-Carlo engine.
//!
//! Workers own disjoint trial-index ranges and derive per-trial substreams,
//! so a run is bit-identical for a given `(scenario, seed, trials)` at any
//! worker count or batch size. Reduction happens over per-trial values in
//! trial-index order.

mod engine;
mod estimate;
mod runner;
mod zf;

pub use engine::{
    interference_residual, sample_equivalent_coefficients, sample_zf_sinr, simulate_capacity,
    simulate_outage, simulate_sum_rate, sw_normalization_probe, NormalizationProbe,
    NormalizationVerdict, SinrSampleSet,
};
pub use estimate::MonteCarloEstimate;
pub use runner::{run_trials, run_trials_multi, McConfig};
pub use zf::{interference_ratio, zf_precoder, ZfPrecoder, CONDITION_CAP};
