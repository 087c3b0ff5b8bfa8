use std::fmt;
use std::path::Path;

use bk_core::GeomError;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BREACH: i32 = 3;

/// A failed command: machine-readable code, message and process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: "usage".into(),
            message: message.into(),
            exit: EXIT_USAGE,
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError {
            code: "io".into(),
            message: format!("{}: {err}", path.display()),
            exit: EXIT_USAGE,
        }
    }

    pub fn parse(what: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError {
            code: "parse_error".into(),
            message: format!("{what}: {err}"),
            exit: EXIT_USAGE,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        // malformed input is a usage error; everything else is a breached precondition
        let exit = match e {
            GeomError::Parse(_) | GeomError::InvalidCurve(_) | GeomError::InvalidParams(_) => EXIT_USAGE,
            _ => EXIT_BREACH,
        };
        CliError {
            code: e.code().into(),
            message: e.to_string(),
            exit,
        }
    }
}
