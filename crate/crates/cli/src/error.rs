use blaschke::ErrorClass;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("invalid configuration ({code}): {message}")]
    Validation { code: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Module(blaschke::Error),
}

impl CliError {
    /// Construction errors become validation errors named after the
    /// violated invariant; everything else is reported as a module error.
    pub fn from_module(e: blaschke::Error) -> Self {
        if e.class() == ErrorClass::Validation {
            CliError::Validation {
                code: e.code().to_string(),
                message: e.to_string(),
            }
        } else {
            CliError::Module(e)
        }
    }

    pub fn code(&self) -> String {
        match self {
            CliError::Parse { .. } => "ParseError".into(),
            CliError::Validation { code, .. } => code.clone(),
            CliError::Io(_) => "IoError".into(),
            CliError::Module(e) => e.code().into(),
        }
    }

    /// Process exit status; distinct per error class.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Validation { .. } => 3,
            CliError::Io(_) => 4,
            CliError::Module(e) => match e.class() {
                ErrorClass::Validation => 3,
                ErrorClass::Resource => 5,
                ErrorClass::Algebraic => 6,
                ErrorClass::Numeric => 7,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "error": {
                "code": self.code(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
            }
        });
        if let CliError::Parse { line, col, .. } = self {
            v["error"]["line"] = json!(line);
            v["error"]["column"] = json!(col);
        }
        v
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
