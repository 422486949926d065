use thiserror::Error;

/// Failure classes of the command-line tool, each with its own exit code.
///
/// | code | class |
/// |------|-------|
/// | 1 | an asserted invariant failed (not an error value; see `Outcome`) |
/// | 3 | spec or state file is not valid JSON for its schema |
/// | 4 | spec parses but describes an invalid channel or state |
/// | 5 | unknown catalog entry |
/// | 6 | numerical routine failed |
/// | 7 | peripheral decomposition failed |
/// | 8 | file could not be read or written |
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: malformed input: {message}")]
    Format { origin: String, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("unknown catalog entry `{0}`; known entries: pauli-xy, shift, parity-fock")]
    Lookup(String),

    #[error("numerical failure: {0}")]
    Numeric(ergochan::Error),

    #[error("decomposition failed: {0}")]
    Decomposition(ergochan::Error),

    #[error("cannot access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub const EXIT_INVARIANT: u8 = 1;
pub const EXIT_FORMAT: u8 = 3;
pub const EXIT_VALIDATION: u8 = 4;
pub const EXIT_LOOKUP: u8 = 5;
pub const EXIT_NUMERIC: u8 = 6;
pub const EXIT_DECOMPOSITION: u8 = 7;
pub const EXIT_IO: u8 = 8;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Format { .. } => EXIT_FORMAT,
            Self::Validation(_) => EXIT_VALIDATION,
            Self::Lookup(_) => EXIT_LOOKUP,
            Self::Numeric(_) => EXIT_NUMERIC,
            Self::Decomposition(_) => EXIT_DECOMPOSITION,
            Self::Io { .. } => EXIT_IO,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<ergochan::Error> for CliError {
    fn from(err: ergochan::Error) -> Self {
        use ergochan::Error as E;
        match err {
            E::Dimension(_) | E::NonFinite { .. } | E::Domain(_) => Self::Validation(err.to_string()),
            E::NoConvergence { .. } => Self::Numeric(err),
            E::IllConditioned { .. } | E::Decomposition(_) | E::Splitting { .. } | E::Degenerate(_) => {
                Self::Decomposition(err)
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
