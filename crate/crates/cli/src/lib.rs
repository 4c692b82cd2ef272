//! Command-line front end for the small-maturity asymptotics library:
//! config ingestion, orchestration, machine-readable JSON reports, and a
//! deterministic multi-threaded Monte Carlo runner.

pub mod config;
pub mod parallel;
pub mod report;
pub mod run;
