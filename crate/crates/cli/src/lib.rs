//! Config-driven verification runs over `helixforge-core`, emitting JSON reports.

pub mod commands;
pub mod config;
pub mod report;

use std::time::Instant;

pub use commands::run_command;
pub use config::{parse_config, Command, ConfigError, Overrides, Resolved, RunConfig, Window};
pub use report::{Check, Report, Status};

/// Runs `cmd` on a validated config. With `timed = false` the report carries `timing_ms = 0`
/// and is byte-identical across runs.
pub fn execute(cmd: Command, cfg: &Resolved, timed: bool) -> Report {
    let start = Instant::now();
    let checks = run_command(cmd, cfg);
    let timing_ms = if timed { start.elapsed().as_millis() as u64 } else { 0 };
    let config = serde_json::to_value(&cfg.config).expect("config serializes to plain JSON");
    Report::new(cmd.name(), config, checks, timing_ms)
}
