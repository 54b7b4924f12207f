//! The machine-readable run report. Field order is fixed by declaration
//! order, so identical runs serialize to identical bytes (modulo
//! `wall_time_ms`).

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub instance: InstanceInfo,
    pub parameters: Parameters,
    pub result: ResultBlock,
    pub oracle_queries: u64,
    pub iterations: u64,
    pub wall_time_ms: u64,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
}

#[derive(Debug, Serialize)]
pub struct InstanceInfo {
    pub path: String,
    pub digest: String,
    pub kind: String,
    pub n: usize,
    pub ground: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Parameters {
    pub x: Option<Vec<f64>>,
    pub k: Option<usize>,
    pub v1: Option<String>,
    pub matroid: Option<String>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub brute: bool,
    pub verify: bool,
}

#[derive(Debug, Default, Serialize)]
pub struct ResultBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convex_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concave_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fractional_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckEntry>>,
}

#[derive(Debug, Serialize)]
pub struct CheckEntry {
    pub property: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyBlock {
    pub brute_value: f64,
    pub ratio: f64,
}
