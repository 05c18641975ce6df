use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Validation,
    Runtime,
}

/// An error as reported on stderr, with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    pub fn validation(msg: impl Into<String>) -> Self {
        Failure { kind: FailureKind::Validation, message: msg.into() }
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Failure { kind: FailureKind::Runtime, message: msg.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            FailureKind::Validation => 1,
            FailureKind::Runtime => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

impl std::error::Error for Failure {}

impl From<horocone::Error> for Failure {
    fn from(e: horocone::Error) -> Self {
        use horocone::Error;
        let msg = e.to_string();
        match e {
            Error::Unsupported(_) => Failure::validation(msg),
            _ if e.is_validation() => Failure::validation(msg),
            _ => Failure::runtime(msg),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::validation(format!("malformed JSON: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::validation(format!("malformed CSV: {e}"))
    }
}
