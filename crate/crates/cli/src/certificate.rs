//! Standalone JSON form of a zigzag certificate.

use serde::{Deserialize, Serialize};
use serde_json::Map;

use platecert::certify::{SearchConfig, Verdict, ZigzagCertificate};
use platecert::roots::RootTolerance;
use platecert::DirectedValue;

pub const TOOL_VERSION: &str = concat!("platecert ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl From<&DirectedValue> for Interval {
    fn from(v: &DirectedValue) -> Self {
        Self { lo: v.lo(), hi: v.hi() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub j1: Interval,
    pub j2: Interval,
    pub k: Interval,
    #[serde(rename = "aI")]
    pub a_i: Interval,
    #[serde(rename = "aS")]
    pub a_s: Interval,
}

/// The rounded constants the margins are evaluated with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Directed {
    pub j_minus: f64,
    pub k_minus: f64,
    pub k_plus: f64,
    pub a_i_plus: f64,
    pub a_s_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub enclosure_width: f64,
    pub inflation: f64,
    pub margin_guard: f64,
    pub step_tolerance: f64,
    pub pole_offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictTag {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub dimension: u32,
    pub constants: Constants,
    pub directed: Directed,
    pub x_seq: Vec<f64>,
    pub y_seq: Vec<f64>,
    /// Margin name to raw value, in evaluation order.
    pub margins: Map<String, serde_json::Value>,
    pub tolerances: Tolerances,
    pub verdict: VerdictTag,
    /// Names of the margins that failed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
    pub tool_version: String,
}

impl Certificate {
    pub fn new(cert: &ZigzagCertificate, tol: &RootTolerance, search: &SearchConfig) -> Self {
        let c = &cert.constants;
        let dc = &cert.directed;
        let (verdict, failed) = match &cert.verdict {
            Verdict::Pass => (VerdictTag::Pass, Vec::new()),
            Verdict::Fail(ids) => (VerdictTag::Fail, ids.iter().map(|id| id.to_string()).collect()),
        };
        Self {
            dimension: cert.params.d(),
            constants: Constants {
                j1: (&c.j1).into(),
                j2: (&c.j2).into(),
                k: (&c.k).into(),
                a_i: (&c.a_i).into(),
                a_s: (&c.a_s).into(),
            },
            directed: Directed {
                j_minus: dc.j_minus,
                k_minus: dc.k_minus,
                k_plus: dc.k_plus,
                a_i_plus: dc.a_i_plus,
                a_s_minus: dc.a_s_minus,
            },
            x_seq: cert.x_seq.clone(),
            y_seq: cert.y_seq.clone(),
            margins: cert
                .margins
                .iter()
                .map(|m| (m.id.to_string(), m.value.into()))
                .collect(),
            tolerances: Tolerances {
                enclosure_width: tol.bisection,
                inflation: tol.inflation,
                margin_guard: cert.guard,
                step_tolerance: search.step_tolerance,
                pole_offset: search.pole_offset,
            },
            verdict,
            failed,
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == VerdictTag::Pass
    }
}
