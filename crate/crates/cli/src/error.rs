use semimatch::band::BandError;
use semimatch::colour::ColourError;
use semimatch::matching::MatchingError;
use semimatch::semigroup::{ParseError, SemigroupError};
use semimatch::transform::TransformError;

/// Failures, each carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable input or output.
    Io(String),
    Parse(String),
    InvalidAlgebra(String),
    Precondition(String),
    Budget(String),
    /// A report witness failed re-verification.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Verification(_) => 1,
            CliError::Parse(_) => 2,
            CliError::InvalidAlgebra(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Budget(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Io(m)
            | CliError::Parse(m)
            | CliError::InvalidAlgebra(m)
            | CliError::Precondition(m)
            | CliError::Budget(m)
            | CliError::Verification(m) => m,
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::NotRegular { .. } | SemigroupError::NotZeroSimple => CliError::Precondition(e.to_string()),
            _ => CliError::InvalidAlgebra(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Syntax { .. } | ParseError::Truncated(_) => CliError::Parse(e.to_string()),
            ParseError::Algebra(inner) => inner.into(),
            ParseError::Band(inner) => inner.into(),
            ParseError::Colour(inner) => inner.into(),
        }
    }
}

impl From<BandError> for CliError {
    fn from(e: BandError) -> Self {
        match e {
            BandError::NotDivisible { .. } | BandError::NotOrthodox | BandError::ParameterOutOfRange(_) => {
                CliError::Precondition(e.to_string())
            }
            _ => CliError::InvalidAlgebra(e.to_string()),
        }
    }
}

impl From<ColourError> for CliError {
    fn from(e: ColourError) -> Self {
        match e {
            ColourError::MalformedInstance(_) | ColourError::IndexOutOfRange { .. } | ColourError::NotAnInvolution => {
                CliError::InvalidAlgebra(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<MatchingError> for CliError {
    fn from(e: MatchingError) -> Self {
        match e {
            MatchingError::Semigroup(inner) => inner.into(),
            MatchingError::NotRegular { .. } => CliError::Precondition(e.to_string()),
            MatchingError::NotAPermutation { .. } => CliError::InvalidAlgebra(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Matching(inner) => inner.into(),
            TransformError::UnknownFamily(_) => CliError::Parse(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}
