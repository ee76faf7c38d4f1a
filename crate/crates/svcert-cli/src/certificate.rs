//! Machine-readable certificates.
//!
//! Keys are emitted in a fixed order and every integer is a decimal string,
//! so certificates with arbitrary-precision values stay replayable and
//! diffable. Replaying the same command with the same seed reproduces the
//! certificate byte for byte except for `wall_time_ms`.

use num::BigUint;
use serde::Serialize;
use svcert_core::terracini::PointConfig;

pub const CERTIFICATE_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub version: String,
    pub command: String,
    pub n: Vec<String>,
    pub d: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<String>>,
    pub seed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retries: Option<String>,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub box_halfwidth: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_dim: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed_lower_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span_dim: Option<String>,
    /// Ranks observed per attempt.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<String>>,
    /// Kernel dimension bounds per attempt, per point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dims: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundEntry>>,
    /// Points of the decisive attempt: per point, per factor, coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_points: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attempts: Option<String>,
    pub verdict: String,
    pub wall_time_ms: String,
}

#[derive(Debug, Serialize)]
pub struct BoundEntry {
    pub kind: String,
    pub value: String,
    pub branch: String,
    pub iff: bool,
    pub assumptions_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotic: Option<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

pub fn strings(xs: &[usize]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

pub fn big_string(x: &BigUint) -> String {
    x.to_string()
}

pub fn points_strings(cfg: &PointConfig) -> Vec<Vec<Vec<String>>> {
    cfg.points()
        .iter()
        .map(|p| {
            p.factors()
                .iter()
                .map(|v| v.iter().map(|c| c.to_string()).collect())
                .collect()
        })
        .collect()
}
