//! JSON-lines records emitted by `moment` and `adsum`.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub const TOOL: &str = "dmom";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentParameters {
    #[serde(rename = "T")]
    pub t: f64,
    pub eta: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub mu: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    pub c1: f64,
    pub c2: f64,
    pub oversample: usize,
    pub nodes: usize,
    pub spacing: f64,
    pub terms: u64,
    pub main_term_panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub tool: &'static str,
    pub version: &'static str,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub parameters: MomentParameters,
    pub numeric: f64,
    pub predicted_total: f64,
    pub predicted_by_degree: [f64; 5],
    pub relative_deviation: f64,
    pub convergence_estimates: BTreeMap<String, Estimate>,
    pub status: &'static str,
}

impl MomentReport {
    pub fn new(
        parameters: MomentParameters,
        numeric: f64,
        predicted_by_degree: [f64; 5],
        predicted_total: f64,
        convergence_estimates: BTreeMap<String, Estimate>,
    ) -> Self {
        let relative_deviation = (numeric - predicted_total).abs() / predicted_total.abs();
        let ok = convergence_estimates.values().all(|e| e.estimate <= e.tolerance);
        Self {
            tool: TOOL,
            version: VERSION,
            timestamp: now(),
            parameters,
            numeric,
            predicted_total,
            predicted_by_degree,
            relative_deviation,
            convergence_estimates,
            status: if ok { "OK" } else { "FAILED" },
        }
    }

    pub fn failed(&self) -> bool {
        self.status == "FAILED"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pair {
    pub re: f64,
    pub im: f64,
}

impl From<divisor_moments::Complex64> for Pair {
    fn from(z: divisor_moments::Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp: u64,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    pub r: i64,
    #[serde(rename = "I")]
    pub i: String,
    #[serde(rename = "J")]
    pub j: String,
    pub profile: &'static str,
    /// Measured derivative scale of the profile.
    #[serde(rename = "P")]
    pub p: f64,
    /// (theta, C, beta) of the known error term.
    pub error_exponents: (f64, f64, f64),
    pub bruteforce: Pair,
    pub main_term: Option<Pair>,
    pub tail_bound: Option<f64>,
    pub q_cutoff: u64,
    pub relative_deviation: Option<f64>,
    /// Exact integer count, when the shifts are zero and the profile is the box.
    pub integer_oracle: Option<u128>,
    pub status: &'static str,
}

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
