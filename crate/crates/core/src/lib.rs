//! (n, n/8) multi-secret image sharing.
//!
//! Eight equally sized grayscale secrets are XOR-encrypted against a pad
//! taken from the bit planes of a comparison image and packed into a single
//! square gray share. The comparison image is agreed on out of band and never
//! travels with the share; the receiver re-derives the key and pad from it
//! and recovers all eight secrets bit-exactly.
//!
//! ```
//! use msis_core::{decode_batch, encode_batch, GrayImage};
//!
//! let comparison = GrayImage::from_fn(16, 16, |x, y| (x * 31 + y * 7) as u8).unwrap();
//! let secrets: Vec<_> = (0..9)
//!     .map(|i| GrayImage::from_fn(8, 8, |x, y| (x * y + i) as u8).unwrap())
//!     .collect();
//!
//! let shares = encode_batch(&secrets, &comparison).unwrap();
//! assert_eq!(shares.len(), 2);
//! assert_eq!(decode_batch(&shares, &comparison).unwrap(), secrets);
//! ```

pub mod bitcore;
pub mod codec;
pub mod error;
pub mod keygen;
pub mod metrics;
pub mod shareio;

pub use bitcore::{BinaryImage, BitStream, GrayImage};
pub use codec::{
    decode_batch, decode_group, encode_batch, encode_group, SecretGroup, ShareContainer, GROUP_SIZE,
};
pub use error::{Error, Result};
pub use keygen::{derive_key, SecurityKey};
pub use metrics::QualityReport;
