use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::real::Real;

pub const RESULT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Infeasible,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 2,
            Status::Error => 1,
        }
    }
}

/// One result line. `objective` is present exactly when `status` is ok.
#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Box<RawValue>>,
    pub solver: String,
    pub wall_time_ms: Real,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, Box<RawValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// What a solver or oracle produced, before timing and naming.
#[derive(Debug, Default)]
pub struct Outcome {
    pub objective: Option<f64>,
    pub infeasible: bool,
    pub solution: Option<Box<RawValue>>,
    pub diagnostics: BTreeMap<String, Box<RawValue>>,
    pub message: Option<String>,
}

impl Outcome {
    pub fn value(objective: f64) -> Self {
        // an unbounded optimum is reported as infeasible, not as a number
        if objective.is_finite() {
            Outcome { objective: Some(objective), ..Default::default() }
        } else {
            Outcome { infeasible: true, ..Default::default() }
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        Outcome { infeasible: true, message: Some(message.into()), ..Default::default() }
    }

    pub fn with_solution(mut self, solution: &impl Serialize) -> Self {
        self.solution = Some(raw(solution));
        self
    }

    pub fn diag(mut self, key: &str, value: &impl Serialize) -> Self {
        self.diagnostics.insert(key.to_string(), raw(value));
        self
    }

    pub fn status(&self) -> Status {
        if self.infeasible {
            Status::Infeasible
        } else {
            Status::Ok
        }
    }
}

pub fn raw(value: &impl Serialize) -> Box<RawValue> {
    serde_json::value::to_raw_value(value).expect("result types always serialize")
}

impl Envelope {
    pub fn finish(name: Option<String>, solver: &str, elapsed_ms: f64, outcome: Outcome) -> Self {
        let status = outcome.status();
        Envelope {
            schema_version: RESULT_SCHEMA_VERSION,
            name,
            status,
            objective: outcome.objective.filter(|_| status == Status::Ok).map(Real),
            solution: outcome.solution,
            solver: solver.to_string(),
            wall_time_ms: Real(elapsed_ms),
            diagnostics: outcome.diagnostics,
            message: outcome.message,
        }
    }

    pub fn error(name: Option<String>, solver: &str, message: impl Into<String>) -> Self {
        Envelope {
            schema_version: RESULT_SCHEMA_VERSION,
            name,
            status: Status::Error,
            objective: None,
            solution: None,
            solver: solver.to_string(),
            wall_time_ms: Real(0.0),
            diagnostics: BTreeMap::new(),
            message: Some(message.into()),
        }
    }
}
