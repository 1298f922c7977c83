//! Images, bit planes and linear bit streams.
//!
//! Every conversion here is row-major and MSB-first. A pixel contributes its
//! eight bits to a stream from weight 2^7 down to 2^0, and bit plane `d`
//! collects the bit of weight 2^d from every pixel, so plane 7 is the MSB
//! plane and plane 0 the LSB plane.

use std::fmt;

use crate::error::{Error, Result};

/// An 8-bit grayscale raster stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::InvalidImage(format!("{width}x{height} overflows")))?;
        if pixels.len() != expected {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} needs {expected} pixels, got {}",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// All-zero image, also used as the null padding image of a group.
    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, 0)
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        let len = width.checked_mul(height).unwrap_or(0);
        Self::new(width, height, vec![value; len])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn is_null(&self) -> bool {
        self.pixels.iter().all(|&p| p == 0)
    }
}

impl fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const PREVIEW: usize = 16;
        let mut list = f.debug_struct("GrayImage");
        list.field("width", &self.width)
            .field("height", &self.height);
        if self.pixels.len() <= PREVIEW {
            list.field("pixels", &self.pixels);
        } else {
            list.field("pixels[..16]", &&self.pixels[..PREVIEW]);
        }
        list.finish()
    }
}

/// An ordered sequence of bits with an explicit length.
///
/// Bits are packed MSB-first into bytes; bit `i` lives in byte `i / 8` at
/// weight `1 << (7 - i % 8)`. Unused bits of the last byte are always zero,
/// which keeps derived equality and hashing meaningful.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitStream {
    bytes: Vec<u8>,
    len: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bytes: vec![0; len.div_ceil(8)],
            len,
        }
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// Takes the first `len` bits of `bytes`.
    pub fn from_bytes(mut bytes: Vec<u8>, len: usize) -> Result<Self> {
        let available = bytes.len().saturating_mul(8);
        if len > available {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: available,
            });
        }
        bytes.truncate(len.div_ceil(8));
        let mut stream = Self { bytes, len };
        stream.clear_tail();
        Ok(stream)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let iter = bits.into_iter();
        let mut stream = Self::with_capacity(iter.size_hint().0);
        for bit in iter {
            stream.push(bit);
        }
        stream
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed backing bytes; the last byte is zero-filled past `len`.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        self.bytes[index / 8] & (0x80 >> (index % 8)) != 0
    }

    pub fn set(&mut self, index: usize, bit: bool) {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        let mask = 0x80 >> (index % 8);
        if bit {
            self.bytes[index / 8] |= mask;
        } else {
            self.bytes[index / 8] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends all bits of `other`.
    pub fn append(&mut self, other: &BitStream) {
        let shift = self.len % 8;
        if shift == 0 {
            self.bytes.extend_from_slice(&other.bytes);
        } else {
            for &byte in &other.bytes {
                let last = self.bytes.len() - 1;
                self.bytes[last] |= byte >> shift;
                self.bytes.push(byte << (8 - shift));
            }
        }
        self.len += other.len;
        self.bytes.truncate(self.len.div_ceil(8));
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn truncate(&mut self, len: usize) {
        if len < self.len {
            self.len = len;
            self.bytes.truncate(len.div_ceil(8));
            self.clear_tail();
        }
    }

    fn resize_zero(&mut self, len: usize) {
        if len > self.len {
            self.bytes.resize(len.div_ceil(8), 0);
            self.len = len;
        } else {
            self.truncate(len);
        }
    }

    fn clear_tail(&mut self) {
        let used = self.len % 8;
        if used != 0 {
            if let Some(last) = self.bytes.last_mut() {
                *last &= 0xff << (8 - used);
            }
        }
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const PREVIEW: usize = 64;
        write!(f, "BitStream({}; ", self.len)?;
        for bit in self.iter().take(PREVIEW) {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        if self.len > PREVIEW {
            f.write_str("...")?;
        }
        f.write_str(")")
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter)
    }
}

/// A square grid of bits, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryImage {
    side: usize,
    bits: BitStream,
}

impl BinaryImage {
    pub fn new(side: usize, bits: BitStream) -> Result<Self> {
        if side == 0 {
            return Err(Error::EmptyStream);
        }
        let cells = side
            .checked_mul(side)
            .ok_or_else(|| Error::InvalidImage(format!("side {side} overflows")))?;
        if bits.len() != cells {
            return Err(Error::LengthMismatch {
                expected: cells,
                actual: bits.len(),
            });
        }
        Ok(Self { side, bits })
    }

    pub fn zeros(side: usize) -> Result<Self> {
        Self::new(side, BitStream::zeros(side.saturating_mul(side)))
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn bits(&self) -> &BitStream {
        &self.bits
    }

    pub fn into_bits(self) -> BitStream {
        self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits.get(row * self.side + col)
    }
}

/// Smallest `s` with `s * s >= n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let root = n.isqrt();
    if root * root < n {
        root + 1
    } else {
        root
    }
}

/// Emits every pixel's eight bits, MSB first, in row-major order.
pub fn pixels_to_bits(img: &GrayImage) -> BitStream {
    // MSB-first packing makes the stream's bytes exactly the pixel bytes.
    BitStream {
        len: img.pixels.len() * 8,
        bytes: img.pixels.clone(),
    }
}

pub fn bits_to_pixels(stream: &BitStream, width: usize, height: usize) -> Result<GrayImage> {
    let expected = width.saturating_mul(height).saturating_mul(8);
    if stream.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: stream.len(),
        });
    }
    GrayImage::new(width, height, stream.bytes.clone())
}

/// Collects bit `plane` (weight `2^plane`) of every pixel, row-major.
pub fn extract_plane(img: &GrayImage, plane: u8) -> Result<BitStream> {
    if plane > 7 {
        return Err(Error::InvalidPlane(plane));
    }
    let pixels = img.pixels();
    let mut bytes = Vec::with_capacity(pixels.len().div_ceil(8));
    for chunk in pixels.chunks(8) {
        let mut byte = 0u8;
        for (k, &p) in chunk.iter().enumerate() {
            byte |= ((p >> plane) & 1) << (7 - k);
        }
        bytes.push(byte);
    }
    Ok(BitStream {
        bytes,
        len: pixels.len(),
    })
}

pub fn xor_streams(a: &BitStream, b: &BitStream) -> Result<BitStream> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let bytes = a.bytes.iter().zip(&b.bytes).map(|(x, y)| x ^ y).collect();
    Ok(BitStream { bytes, len: a.len })
}

/// Keeps the first `target` bits, or zero-pads the tail up to `target`.
pub fn fit_length(stream: &BitStream, target: usize) -> BitStream {
    let mut out = stream.clone();
    out.resize_zero(target);
    out
}

/// Lays the stream out row-major in the smallest enclosing square,
/// zero-filling the unused trailing cells.
pub fn reshape_square(stream: &BitStream) -> Result<BinaryImage> {
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    let side = ceil_sqrt(stream.len());
    BinaryImage::new(side, fit_length(stream, side * side))
}

pub fn flatten_square(image: &BinaryImage, bit_length: usize) -> Result<BitStream> {
    let cells = image.side * image.side;
    if bit_length > cells {
        return Err(Error::LengthMismatch {
            expected: bit_length,
            actual: cells,
        });
    }
    Ok(fit_length(&image.bits, bit_length))
}
