use chlab_dissipation::{Check, DissipationReport};
use serde::{Deserialize, Serialize};

use crate::config::FlowFamily;
use crate::resolution::FlowParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Ok,
    /// The resolution policy exceeded a cap; nothing was computed.
    Infeasible,
    /// Construction or evaluation raised an error.
    Failed,
}

/// Measurements at one viscosity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub flow: FlowFamily,
    pub nu: f64,
    pub status: PointStatus,
    pub message: Option<String>,
    pub frak_c: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    pub params: Option<FlowParams>,
    /// Period the fields were computed on.
    pub l1_computational: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub p: Option<usize>,
    /// Whether direct solves and the maximizer were attempted.
    pub direct: bool,
    /// `a A / 2` for rolls.
    pub term_i_floor: Option<f64>,
    /// `eps_U nu^{-1/3}`.
    #[serde(rename = "eps_U_nu13")]
    pub eps_big_nu13: Option<f64>,
    /// `eps_U (log2 1/nu)^2`.
    #[serde(rename = "eps_U_log2sq")]
    pub eps_big_log2sq: Option<f64>,
    pub report: Option<DissipationReport>,
    /// Every hard check passed.
    pub hard_pass: bool,
    pub wall_time_s: Option<f64>,
}

impl SweepRecord {
    pub fn eps_big(&self) -> Option<f64> {
        self.report.as_ref().map(|r| r.eps_big)
    }
    pub fn eps_u(&self) -> Option<f64> {
        self.report.as_ref().and_then(|r| r.eps_u)
    }
    pub fn f_test(&self) -> Option<f64> {
        self.report.as_ref().map(|r| r.f_test)
    }
    pub fn f_max(&self) -> Option<f64> {
        self.report.as_ref().and_then(|r| r.f_max)
    }
    pub fn upper_bound(&self) -> Option<f64> {
        self.report.as_ref().map(|r| r.upper_bound)
    }
    pub fn checks(&self) -> &[Check] {
        self.report.as_ref().map(|r| r.checks.as_slice()).unwrap_or(&[])
    }
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks().iter().find(|c| c.name == name)
    }
    /// Pass flag of the upper-bound check when `eps_u` was computed.
    pub fn upper_bound_pass(&self) -> Option<bool> {
        self.check("upper_bound").map(|c| c.pass)
    }
}
