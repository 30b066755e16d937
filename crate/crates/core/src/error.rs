use thiserror::Error;

/// Errors raised by parsing, validation and the computational engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: duplicate vertex `{name}`")]
    DuplicateVertex { line: usize, name: String },

    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },

    #[error("line {line}: duplicate label {label} at vertex `{vertex}`")]
    DuplicateLabel { line: usize, vertex: String, label: u64 },

    #[error("{}cycle detected through vertex `{vertex}`", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Cycle { line: Option<usize>, vertex: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("label {label} at vertex `{vertex}` is not in the ambient family")]
    NotSubfamily { vertex: String, label: u64 },

    #[error("weight is not dominant at vertex `{0}`")]
    NotDominant(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("enumeration of {requested} subfamilies exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },

    #[error("linear program with {vars} variables and {rows} constraints exceeds the cap of {cap} cells")]
    LpTooLarge { vars: usize, rows: usize, cap: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("delta map is not square ({rows}x{cols}); the filtered Euler number is nonzero")]
    NotSquare { rows: usize, cols: usize },
}

impl Error {
    /// Input and validation problems map to 2, computational limits to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } | Error::LpTooLarge { .. } | Error::Overflow(_) => 3,
            _ => 2,
        }
    }

    /// Short tag printed after `ERROR` by the command-line tool.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::DuplicateVertex { .. } => "duplicate-vertex",
            Error::UnknownVertex { .. } => "unknown-vertex",
            Error::DuplicateLabel { .. } => "duplicate-label",
            Error::Cycle { .. } => "cycle",
            Error::Invalid(_) => "invalid",
            Error::NotSubfamily { .. } => "not-subfamily",
            Error::NotDominant(_) => "not-dominant",
            Error::SizeMismatch(_) => "size-mismatch",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::LpTooLarge { .. } => "lp-too-large",
            Error::Overflow(_) => "overflow",
            Error::NotSquare { .. } => "not-square",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
