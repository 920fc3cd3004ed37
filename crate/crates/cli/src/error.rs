use std::fmt;
use std::process::ExitCode;

use qratio::enumerate::EnumerationError;
use qratio::graph::GraphError;
use qratio::graph6::Graph6Error;
use qratio::kite::KiteError;
use qratio::spectral::SpectralError;
use qratio::verify::VerifyError;

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;
pub const EXIT_NOT_CONNECTED: u8 = 3;
pub const EXIT_OVERFLOW: u8 = 4;
pub const EXIT_VIOLATIONS: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn malformed(message: impl Into<String>) -> Self {
        Self::new(EXIT_MALFORMED, message)
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::NotConnected => EXIT_NOT_CONNECTED,
            _ => EXIT_MALFORMED,
        };
        Self::new(code, e.to_string())
    }
}

impl From<Graph6Error> for CliError {
    fn from(e: Graph6Error) -> Self {
        Self::malformed(format!("malformed graph6: {e}"))
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        let code = match e {
            SpectralError::NotConnected => EXIT_NOT_CONNECTED,
            SpectralError::InvalidTolerance(_) => EXIT_MALFORMED,
            _ => EXIT_FAILURE,
        };
        Self::new(code, e.to_string())
    }
}

impl From<KiteError> for CliError {
    fn from(e: KiteError) -> Self {
        match e {
            KiteError::Graph(e) => e.into(),
            KiteError::Spectral(e) => e.into(),
            KiteError::Overflow { .. } => Self::new(EXIT_OVERFLOW, e.to_string()),
            other => Self::malformed(other.to_string()),
        }
    }
}

impl From<EnumerationError> for CliError {
    fn from(e: EnumerationError) -> Self {
        Self::malformed(e.to_string())
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Graph(e) => e.into(),
            VerifyError::Spectral(e) => e.into(),
            VerifyError::Kite(e) => e.into(),
            VerifyError::Enumeration(e) => e.into(),
            VerifyError::Disconnects { .. } => Self::new(EXIT_NOT_CONNECTED, e.to_string()),
            other => Self::malformed(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        // A closed downstream pipe (`| head`) ends output early; not an error.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Self::new(0, "");
        }
        Self::new(EXIT_FAILURE, e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(io) = e.kind() {
            if io.kind() == std::io::ErrorKind::BrokenPipe {
                return Self::new(0, "");
            }
        }
        Self::new(EXIT_FAILURE, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::new(EXIT_FAILURE, e.to_string())
    }
}
