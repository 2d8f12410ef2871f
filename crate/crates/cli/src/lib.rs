//! Command-line driver: scenario configuration, figure-reproduction
//! subcommands, the validation suite, and CSV emission.

pub mod args;
pub mod commands;
pub mod config;
pub mod csvout;

use efas_core::Error;

/// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
/// 3 validation-suite failure.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) | Error::SingularChannel(_) => 2,
        _ => 1,
    }
}
