//! Command line front end and JSON session service for `staircase-core`.

pub mod cli;
pub mod http;
pub mod inputs;
pub mod service;
pub mod suites;

/// Decimal digits for rendered values: `STAIRCASE_PRECISION`, else 40.
pub fn default_precision() -> usize {
    std::env::var("STAIRCASE_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&d: &usize| d > 0 && d <= 10_000)
        .unwrap_or(40)
}
