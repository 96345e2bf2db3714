use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Which flank of the main lobe an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("half-beam split requires even N (got N = {0})")]
    OddElementCount(usize),

    #[error("no side-lobe structure: no null found on the {0} side of the main lobe")]
    NoSidelobeStructure(Side),

    #[error("peak at edge: the main-lobe maximum lies on the boundary of the sampled span")]
    PeakAtEdge,

    #[error("no -3 dB crossing on the {0} side of the main lobe")]
    NoHalfPowerCrossing(Side),

    #[error("sweep value {value}: {source}")]
    SweepValue { value: f64, source: Box<Error> },

    #[error("config: {0}")]
    Config(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("format: {0}")]
    Format(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line tool.
    ///
    /// 2 = usage/config/input format, 3 = I/O, 4 = numeric or domain failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) | Error::Format(_) | Error::OddElementCount(_) => 2,
            Error::Io { .. } => 3,
            Error::SweepValue { source, .. } => source.exit_code(),
            Error::InvalidArgument(_)
            | Error::NoSidelobeStructure(_)
            | Error::PeakAtEdge
            | Error::NoHalfPowerCrossing(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
