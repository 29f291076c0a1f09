//! Scenario runner, result bundles, reports and the acceptance suite for `dirac-core`.

pub mod acceptance;
pub mod json;
pub mod report;
pub mod runner;
pub mod scenario;
