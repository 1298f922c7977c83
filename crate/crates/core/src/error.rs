use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid bit plane {0}, expected 0..=7")]
    InvalidPlane(u8),

    #[error("cannot reshape an empty bit stream")]
    EmptyStream,

    #[error("invalid security key: {0}")]
    InvalidKey(String),

    #[error("invalid image geometry: {0}")]
    InvalidImage(String),

    #[error("binary planes have different sides: {expected} vs {actual}")]
    SideMismatch { expected: usize, actual: usize },

    #[error("share image is not square ({width}x{height})")]
    NotSquare { width: usize, height: usize },

    #[error("images differ in size: {expected:?} vs {actual:?} (width, height)")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("no secret images given")]
    EmptyInput,

    #[error("a group holds between 1 and 8 secrets, got {0}")]
    GroupSize(usize),

    #[error("malformed container: {0}")]
    MalformedContainer(String),

    #[error("container header contradicts share size: {0}")]
    DimensionInconsistency(String),

    #[error("bad magic {0:02x?}, expected \"MS18\"")]
    BadMagic([u8; 4]),

    #[error("unsupported container version {0}")]
    UnsupportedVersion(u16),

    #[error("header invariant violated: {0}")]
    HeaderInvariantViolation(String),

    #[error("container header truncated ({0} of 36 bytes)")]
    TruncatedHeader(usize),

    #[error("share payload truncated: expected {expected} bytes, got {actual}")]
    TruncatedPayload { expected: usize, actual: usize },

    #[error("unexpected trailing bytes after share payload")]
    TrailingData,

    #[error("failed to write share: {0}")]
    SinkFailure(#[source] io::Error),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed image file: {0}")]
    MalformedFile(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
