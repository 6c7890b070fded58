use serde::Serialize;

use ergm_cluster::Error;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

/// A failed run: exit status plus the JSON written to stderr.
#[derive(Debug, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub code: i32,
    pub error: &'static str,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, error: "invalid_input", message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_FAILURE, error: "io", message: message.into() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", self.error))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::InvalidInput(_) => Failure { code: EXIT_INVALID, error: "invalid_input", message },
            Error::Unsupported(_) => Failure { code: EXIT_INVALID, error: "unsupported", message },
            Error::GuardExceeded { .. } => Failure { code: EXIT_GUARD, error: "guard_exceeded", message },
            Error::Io(_) => Failure { code: EXIT_FAILURE, error: "io", message },
            Error::Json(_) | Error::Csv(_) => Failure { code: EXIT_FAILURE, error: "serialization", message },
        }
    }
}
