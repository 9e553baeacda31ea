//! Command-line front end for `polent`: scenario files, parameter sweeps and
//! reports. Each command returns its output as a string so it can be tested
//! without spawning a process.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod format;
pub mod scenario;

pub use commands::{
    cmd_distill_region, cmd_optimize, cmd_plasmon, cmd_smax_sweep, cmd_transfer, RegionArgs,
};
pub use error::{CliError, CliResult};
pub use scenario::{InputSpec, MediaSpec, Scale, Scenario, SweepGrid, Task};
