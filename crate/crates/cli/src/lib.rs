//! Shared plumbing for the `herbrand` binary and its test suites: session
//! loading (theory, goal, term sets, budgets) and the fixture corpus runner.

pub mod fixtures;
pub mod report;
pub mod session;
