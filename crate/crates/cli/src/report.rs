//! Result documents (version 1).

use std::collections::BTreeMap;

use hb_core::{ExtensionStep, SeparationCertificate, SeparationResult};
use serde::Serialize;
use serde_json::Value;

use crate::exit::Failure;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub version: u32,
    pub tool_version: &'static str,
    pub command: String,
    pub status: &'static str,
    /// Unit normal of the hyperplane.
    pub normal: Option<Vec<f64>>,
    /// Coefficients of the extended functional.
    pub g: Option<Vec<f64>>,
    pub anchor: Option<Vec<f64>>,
    /// Command-specific output (gauge value, membership verdict, ...).
    pub value: Option<Value>,
    pub gamma_history: Vec<StepDoc>,
    pub certificate: CertificateDoc,
    pub failure_reason: Option<FailureDoc>,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepDoc {
    pub direction: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
    pub gamma: f64,
}

/// Every field is present; those that could not be computed are null.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CertificateDoc {
    pub s_in_h_residual: Option<f64>,
    /// Null when infinite (empty `A`).
    pub a_clearance: Option<f64>,
    pub clearance_exact: Option<bool>,
    pub a_disjoint: Option<bool>,
    pub b_disjoint: Option<bool>,
    pub remark2_status: Option<bool>,
    pub domination_violation: Option<f64>,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureDoc {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
}

impl ResultDocument {
    pub fn new(command: &str) -> Self {
        ResultDocument {
            version: 1,
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            status: "ok",
            normal: None,
            g: None,
            anchor: None,
            value: None,
            gamma_history: Vec::new(),
            certificate: CertificateDoc::default(),
            failure_reason: None,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn fail(&mut self, f: &Failure) {
        self.status = "error";
        self.certificate.valid = false;
        self.failure_reason = Some(FailureDoc {
            kind: f.kind,
            exit_code: f.code,
            message: f.message.clone(),
        });
    }

    pub fn set_history(&mut self, steps: &[ExtensionStep]) {
        self.gamma_history = steps
            .iter()
            .map(|s| StepDoc {
                direction: s.direction.as_slice().to_vec(),
                lo: s.interval.lo,
                hi: s.interval.hi,
                gamma: s.gamma,
            })
            .collect();
    }

    pub fn set_certificate(&mut self, c: &SeparationCertificate) {
        let finite = |v: f64| v.is_finite().then_some(v);
        self.certificate = CertificateDoc {
            s_in_h_residual: finite(c.s_in_h_residual),
            a_clearance: finite(c.a_clearance),
            clearance_exact: Some(c.clearance_exact),
            a_disjoint: Some(c.a_disjoint),
            b_disjoint: Some(c.b_disjoint),
            remark2_status: c.remark2_status,
            domination_violation: self.certificate.domination_violation,
            valid: c.valid,
        };
    }

    pub fn set_separation(&mut self, r: &SeparationResult) {
        self.normal = Some(r.hyperplane.normal().as_slice().to_vec());
        self.g = Some(r.g.as_slice().to_vec());
        self.anchor = r.anchor.as_ref().map(|a| a.as_slice().to_vec());
        self.set_history(&r.history);
        self.set_certificate(&r.certificate);
    }

    /// Canonical JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
