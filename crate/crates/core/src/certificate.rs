//! Machine-readable verification outcomes.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub params: Map<String, Value>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Certificate {
    pub fn new(check: impl Into<String>) -> Self {
        Certificate {
            check: check.into(),
            params: Map::new(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Records a failure; the first witness is kept.
    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.status == Status::Pass {
            self.witness = Some(witness.into());
        }
        self.status = Status::Fail;
    }

    pub fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Folds sub-certificates into this one.
    pub fn absorb(&mut self, other: &Certificate) {
        if !other.passed() {
            self.fail(format!(
                "{}: {}",
                other.check,
                other.witness.clone().unwrap_or_default()
            ));
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "[{status}] {}", self.check)?;
        if !self.params.is_empty() {
            write!(f, " {}", Value::Object(self.params.clone()))?;
        }
        if let Some(w) = &self.witness {
            write!(f, " -- {w}")?;
        }
        Ok(())
    }
}
