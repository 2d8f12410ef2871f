//! Link-level simulator and analytical calculator for surface-wave-assisted
//! (E-FAS) MU-MIMO downlinks.
//!
//! The crate is organized in layers:
//!
//! - [`surface`]: deterministic EM quantities (propagation constant, guided
//!   envelope, launcher processing, average gains, effective noise);
//! - [`channel`]: all randomness (Gaussian segments, isotropic precoders,
//!   layered end-to-end coefficients, equivalent-channel draws);
//! - [`special`] / [`analytic`]: the closed-form performance expressions
//!   (outage, ergodic capacity and its high-SNR asymptote, the post-ZF SINR
//!   gamma law, sum-rate);
//! - [`mc`]: trial-parallel Monte-Carlo estimators that cross-validate every
//!   closed form, plus the brute-force normalization probe;
//! - [`stats`]: empirical distribution machinery (ECDF, histogram densities,
//!   Kolmogorov-Smirnov distance, confidence intervals).
//!
//! Every random draw is keyed by `(master seed, trial index, segment tag)`,
//! so results are bit-identical for a given seed regardless of worker count.

// Local idiom: indexed loops for dense-matrix kernels, `!(x > 0.0)` guards
// that also catch NaN, and frozen reference literals at full printed
// precision.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod analytic;
pub mod channel;
pub mod cxmat;
pub mod error;
pub mod mc;
pub mod quad;
pub mod rng;
pub mod scenario;
pub mod special;
pub mod stats;
pub mod surface;

pub use error::{Error, Result};
pub use scenario::{Precoding, Scenario, SurfaceConfig};
