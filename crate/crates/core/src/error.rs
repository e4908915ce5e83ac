use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("sample {value} at frame {frame}, index {index} exceeds {bit_depth}-bit range")]
    Range {
        frame: usize,
        index: usize,
        value: i64,
        bit_depth: u8,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown {what}: {value}")]
    Unknown { what: &'static str, value: String },

    #[error("bitstream error at byte offset {offset}: {msg}")]
    Bitstream { offset: usize, msg: String },

    #[error("stream truncated at byte offset {offset}")]
    Truncated { offset: usize },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
