//! Security key derivation from the comparison image.

use std::fmt;
use std::str::FromStr;

use crate::bitcore::GrayImage;
use crate::error::{Error, Result};

/// Bit-plane extraction order: a permutation of `0..=7`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SecurityKey([u8; 8]);

impl SecurityKey {
    pub fn new(order: [u8; 8]) -> Result<Self> {
        let mut seen = [false; 8];
        for &digit in &order {
            if digit > 7 || seen[digit as usize] {
                return Err(Error::InvalidKey(format!(
                    "{order:?} is not a permutation of 0..=7"
                )));
            }
            seen[digit as usize] = true;
        }
        Ok(Self(order))
    }

    pub fn order(&self) -> [u8; 8] {
        self.0
    }
}

impl fmt::Display for SecurityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SecurityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SecurityKey({self})")
    }
}

impl FromStr for SecurityKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidKey(format!("key {s:?} has non-digit characters")))?;
        let order: [u8; 8] = digits
            .try_into()
            .map_err(|_| Error::InvalidKey(format!("key {s:?} must have 8 digits")))?;
        Self::new(order)
    }
}

/// Scans pixels row-major starting with the first row, keeping each
/// `pixel % 8` the first time it appears. If the image runs out before all
/// eight remainders show up, the missing ones follow in ascending order.
pub fn derive_key(comparison: &GrayImage) -> SecurityKey {
    let mut order = [0u8; 8];
    let mut seen = [false; 8];
    let mut filled = 0;

    for &pixel in comparison.pixels() {
        let rem = pixel % 8;
        if !seen[rem as usize] {
            seen[rem as usize] = true;
            order[filled] = rem;
            filled += 1;
            if filled == 8 {
                return SecurityKey(order);
            }
        }
    }

    for rem in 0..8u8 {
        if !seen[rem as usize] {
            order[filled] = rem;
            filled += 1;
        }
    }
    SecurityKey(order)
}
