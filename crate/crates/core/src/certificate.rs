//! Pass/fail records with machine-readable witnesses.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Status::Pass
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// One checked claim. `paper_ref` holds a short topic label for the claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub id: String,
    pub statement: String,
    pub paper_ref: String,
    pub status: Status,
    pub witness: Value,
}

impl Certificate {
    pub fn new(id: impl Into<String>, statement: impl Into<String>, label: &str, ok: bool, witness: Value) -> Self {
        Certificate {
            id: id.into(),
            statement: statement.into(),
            paper_ref: label.to_string(),
            status: Status::from_bool(ok),
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }
}

pub fn all_pass(certs: &[Certificate]) -> bool {
    certs.iter().all(Certificate::passed)
}
