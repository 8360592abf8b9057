use serde_json::json;
use thiserror::Error;

use sharptop_core::duality::DualityError;
use sharptop_core::format::FormatError;
use sharptop_core::funcspaces::{FuncError, ParseError};
use sharptop_core::genscalar::GenScalarError;
use sharptop_core::sampled::SampledError;
use sharptop_core::seminorms::SeminormError;

/// Exit code for parse and validation failures.
pub const EXIT_INVALID: i32 = 2;
/// Exit code for failures inside an analysis.
pub const EXIT_ANALYSIS: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}:{line}:{col}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{0}")]
    Invariant(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Analysis(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse_error",
            CliError::Invariant(_) => "invariant_error",
            CliError::Usage(_) => "usage_error",
            CliError::Config(_) => "config_error",
            CliError::Io(_) => "io_error",
            CliError::Analysis(_) => "analysis_error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Analysis(_) => EXIT_ANALYSIS,
            _ => EXIT_INVALID,
        }
    }

    /// `{"error": {"code": …, "message": …}}`
    pub fn render(&self) -> String {
        let v = json!({"error": {"code": self.code(), "message": self.to_string()}});
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    pub fn parse_in(source_name: &str, e: FormatError) -> Self {
        match e {
            FormatError::Parse { line, col, msg } => CliError::Parse {
                source_name: source_name.into(),
                line,
                col,
                msg,
            },
            FormatError::Invariant(m) => CliError::Invariant(format!("{source_name}: {m}")),
        }
    }

    pub fn sexp_in(source_name: &str, e: ParseError) -> Self {
        CliError::Parse {
            source_name: source_name.into(),
            line: e.line,
            col: e.col,
            msg: e.msg,
        }
    }
}

impl From<FuncError> for CliError {
    fn from(e: FuncError) -> Self {
        match e {
            FuncError::Parse(p) => CliError::sexp_in("expr", p),
            FuncError::Sampled(s) => s.into(),
            FuncError::NonFinite { .. } | FuncError::TruncationWarning { .. } => CliError::Analysis(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<SampledError> for CliError {
    fn from(e: SampledError) -> Self {
        match e {
            SampledError::NonFinite { .. } => CliError::Analysis(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DualityError> for CliError {
    fn from(e: DualityError) -> Self {
        match e {
            DualityError::DimMismatch { .. } => CliError::Invariant(e.to_string()),
            DualityError::Sampled(s) => s.into(),
            _ => CliError::Analysis(e.to_string()),
        }
    }
}

impl From<GenScalarError> for CliError {
    fn from(e: GenScalarError) -> Self {
        match e {
            GenScalarError::ZeroLeading => CliError::Analysis(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<SeminormError> for CliError {
    fn from(e: SeminormError) -> Self {
        CliError::Invariant(e.to_string())
    }
}
