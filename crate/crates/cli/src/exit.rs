//! Exit codes and the failures that map onto them.

use hb_core::Error;

pub const OK: i32 = 0;
pub const MISSING_FILE: i32 = 2;
pub const SCHEMA: i32 = 3;
pub const PRECONDITION: i32 = 4;
pub const SOLVER: i32 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn missing(message: impl Into<String>) -> Self {
        Failure {
            code: MISSING_FILE,
            kind: "missing_file",
            message: message.into(),
        }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        Failure {
            code: SCHEMA,
            kind: "schema",
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: PRECONDITION,
            kind: "input",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Solver(_) => SOLVER,
            Error::Input(_) | Error::Degenerate(_) | Error::EmptySet(_) => PRECONDITION,
        };
        Failure {
            code,
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}
