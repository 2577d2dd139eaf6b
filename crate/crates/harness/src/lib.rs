//! Scenario-driven verification runner.

pub mod catalog;
pub mod checks;
pub mod demo;
pub mod report;
pub mod runner;
pub mod scenario;

pub use checks::{Check, CheckInput, CheckRegistry, Outcome};
pub use report::{CheckResult, Report, Status, VERSION};
pub use runner::{run_scenario, RunOptions};
pub use scenario::{CheckSpec, Expect, Scenario};
