use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "holonomy2/report-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    /// Wall time in milliseconds; only recorded with `--timings`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual: None,
            details: Vec::new(),
            data: None,
            millis: None,
        }
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.details.push(d.into());
        self
    }

    pub fn details(mut self, d: impl IntoIterator<Item = String>) -> Self {
        self.details.extend(d);
        self
    }

    pub fn data(mut self, v: Value) -> Self {
        self.data = Some(v);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Machine-readable result of one invocation. Identical inputs and seed give
/// byte-identical JSON unless timings were requested.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    #[serde(skip)]
    timings: bool,
}

impl RunReport {
    pub fn new(command: Vec<String>, timings: bool) -> Self {
        RunReport {
            schema: SCHEMA,
            command,
            seed: None,
            inputs: Vec::new(),
            status: Status::Pass,
            checks: Vec::new(),
            output: None,
            timings,
        }
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest { path: path.to_string(), sha256: hex::encode(Sha256::digest(bytes)) });
    }

    pub fn push(&mut self, mut c: Check, started: Instant) {
        if self.timings {
            c.millis = Some(started.elapsed().as_secs_f64() * 1e3);
        }
        if !c.passed() {
            self.status = Status::Fail;
        }
        self.checks.push(c);
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
