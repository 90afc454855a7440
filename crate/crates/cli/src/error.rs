use liotkit::Error;

pub const EXIT_IO: u8 = 1;
pub const EXIT_FORMAT: u8 = 2;
pub const EXIT_INVARIANCE: u8 = 3;
pub const EXIT_DEGENERATE: u8 = 4;

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_FORMAT, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: EXIT_IO, message: message.into() }
    }

    pub fn invariance(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVARIANCE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::FileNotFound(_) | Error::Io { .. } | Error::MissingPair(_) => EXIT_IO,
            Error::DegenerateLabels { .. } | Error::EmptyEvaluationRegion | Error::EmptyGroundTruth => EXIT_DEGENERATE,
            _ => EXIT_FORMAT,
        };
        Self { code, message: e.to_string() }
    }
}
