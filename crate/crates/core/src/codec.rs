//! The share codec: eight secrets in, one gray share out, and back.
//!
//! Encoding a group works as follows:
//!
//! 1. derive the [`SecurityKey`] from the comparison image,
//! 2. concatenate the comparison image's bit planes in key order and fit the
//!    result to the secret bit length, giving the pad,
//! 3. XOR every secret's MSB-first bit stream with that same pad and lay the
//!    result out as a square binary image,
//! 4. stack the eight binary images into the bits of one gray image, the
//!    first secret in the most significant bit.
//!
//! Decoding runs the same steps backwards. Neither the comparison image nor
//! the key ever becomes part of a [`ShareContainer`].

use crate::bitcore::{
    ceil_sqrt, extract_plane, fit_length, flatten_square, pixels_to_bits, reshape_square,
    xor_streams, BinaryImage, BitStream, GrayImage,
};
use crate::error::{Error, Result};
use crate::keygen::{derive_key, SecurityKey};

/// Number of secrets packed into one share.
pub const GROUP_SIZE: usize = 8;

/// Eight equally sized secrets, the tail of which may be null padding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretGroup {
    images: Vec<GrayImage>,
    num_real: usize,
}

impl SecretGroup {
    /// Builds a group from 1 to 8 secrets, padding with null images.
    pub fn new(secrets: Vec<GrayImage>) -> Result<Self> {
        if secrets.is_empty() || secrets.len() > GROUP_SIZE {
            return Err(Error::GroupSize(secrets.len()));
        }
        let dims = common_dimensions(&secrets)?;
        let num_real = secrets.len();
        let mut images = secrets;
        images.resize(GROUP_SIZE, GrayImage::zeros(dims.0, dims.1)?);
        Ok(Self { images, num_real })
    }

    pub fn images(&self) -> &[GrayImage] {
        &self.images
    }

    /// The non-padding secrets.
    pub fn real_images(&self) -> &[GrayImage] {
        &self.images[..self.num_real]
    }

    pub fn into_real_images(mut self) -> Vec<GrayImage> {
        self.images.truncate(self.num_real);
        self.images
    }

    pub fn num_real(&self) -> usize {
        self.num_real
    }

    pub fn dimensions(&self) -> (usize, usize) {
        self.images[0].dimensions()
    }
}

/// What gets transmitted: secret geometry plus the square gray share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareContainer {
    secret_width: usize,
    secret_height: usize,
    num_real: usize,
    bit_length: usize,
    share: GrayImage,
}

impl ShareContainer {
    pub fn new(
        secret_width: usize,
        secret_height: usize,
        num_real: usize,
        share: GrayImage,
    ) -> Result<Self> {
        let bit_length = secret_bit_length(secret_width, secret_height)?;
        Self::from_parts(secret_width, secret_height, num_real, bit_length, share)
    }

    /// Validates every header field against the others and the share.
    pub fn from_parts(
        secret_width: usize,
        secret_height: usize,
        num_real: usize,
        bit_length: usize,
        share: GrayImage,
    ) -> Result<Self> {
        if secret_width == 0 || secret_height == 0 {
            return Err(Error::MalformedContainer(format!(
                "secret size {secret_width}x{secret_height}"
            )));
        }
        if !(1..=GROUP_SIZE).contains(&num_real) {
            return Err(Error::MalformedContainer(format!(
                "num_real {num_real} outside 1..=8"
            )));
        }
        let expected_bits = secret_bit_length(secret_width, secret_height)?;
        if bit_length != expected_bits {
            return Err(Error::DimensionInconsistency(format!(
                "bit_length {bit_length} != 8*{secret_width}*{secret_height}"
            )));
        }
        let side = ceil_sqrt(bit_length);
        if share.dimensions() != (side, side) {
            return Err(Error::DimensionInconsistency(format!(
                "share is {}x{}, expected {side}x{side}",
                share.width(),
                share.height()
            )));
        }
        Ok(Self {
            secret_width,
            secret_height,
            num_real,
            bit_length,
            share,
        })
    }

    pub fn secret_width(&self) -> usize {
        self.secret_width
    }

    pub fn secret_height(&self) -> usize {
        self.secret_height
    }

    pub fn num_real(&self) -> usize {
        self.num_real
    }

    pub fn bit_length(&self) -> usize {
        self.bit_length
    }

    pub fn share_side(&self) -> usize {
        self.share.width()
    }

    pub fn share(&self) -> &GrayImage {
        &self.share
    }
}

fn secret_bit_length(width: usize, height: usize) -> Result<usize> {
    width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| Error::MalformedContainer(format!("{width}x{height} overflows")))
}

fn common_dimensions(images: &[GrayImage]) -> Result<(usize, usize)> {
    let first = images.first().ok_or(Error::EmptyInput)?.dimensions();
    match images.iter().find(|img| img.dimensions() != first) {
        Some(other) => Err(Error::DimensionMismatch {
            expected: first,
            actual: other.dimensions(),
        }),
        None => Ok(first),
    }
}

/// The XOR keystream: the comparison image's bit planes, concatenated in
/// key order and then truncated or zero-padded to `target` bits.
pub fn build_pad(comparison: &GrayImage, key: &SecurityKey, target: usize) -> BitStream {
    let plane_len = comparison.pixels().len();
    let planes_needed = target.div_ceil(plane_len).min(8);
    let mut pad = BitStream::with_capacity(planes_needed * plane_len);
    for &plane in key.order().iter().take(planes_needed) {
        let bits = extract_plane(comparison, plane).expect("key digits are 0..=7");
        pad.append(&bits);
    }
    fit_length(&pad, target)
}

/// Number of trailing pad bits that the comparison image cannot cover.
///
/// Those pad bits are zero, so the matching secret bits travel unencrypted.
pub fn clear_tail_bits(comparison: &GrayImage, width: usize, height: usize) -> usize {
    let needed = width.saturating_mul(height).saturating_mul(8);
    let available = comparison.pixels().len().saturating_mul(8);
    needed.saturating_sub(available)
}

/// Derives the key from `comparison` and builds the pad for `width`x`height`
/// secrets.
pub fn pad_for(comparison: &GrayImage, width: usize, height: usize) -> Result<BitStream> {
    let target = secret_bit_length(width, height)?;
    Ok(build_pad(comparison, &derive_key(comparison), target))
}

pub fn encrypt_image(secret: &GrayImage, pad: &BitStream) -> Result<BinaryImage> {
    let xored = xor_streams(pad, &pixels_to_bits(secret))?;
    reshape_square(&xored)
}

pub fn decrypt_image(
    plane: &BinaryImage,
    pad: &BitStream,
    width: usize,
    height: usize,
) -> Result<GrayImage> {
    let stream = flatten_square(plane, pad.len())?;
    let plain = xor_streams(&stream, pad)?;
    crate::bitcore::bits_to_pixels(&plain, width, height)
}

/// Stacks eight binary planes into one gray image; plane `i` becomes bit
/// `7 - i` of every pixel.
pub fn pack_group(planes: &[BinaryImage]) -> Result<GrayImage> {
    if planes.len() != GROUP_SIZE {
        return Err(Error::GroupSize(planes.len()));
    }
    let side = planes[0].side();
    if let Some(p) = planes.iter().find(|p| p.side() != side) {
        return Err(Error::SideMismatch {
            expected: side,
            actual: p.side(),
        });
    }

    let cells = side * side;
    let mut pixels = Vec::with_capacity(cells + 8);
    let byte_rows: Vec<&[u8]> = planes.iter().map(|p| p.bits().as_bytes()).collect();
    for j in 0..cells.div_ceil(8) {
        // transpose an 8x8 bit block: byte j of each plane -> 8 pixels
        for k in 0..8 {
            let mut pixel = 0u8;
            for (i, row) in byte_rows.iter().enumerate() {
                pixel |= ((row[j] >> (7 - k)) & 1) << (7 - i);
            }
            pixels.push(pixel);
        }
    }
    pixels.truncate(cells);
    GrayImage::new(side, side, pixels)
}

/// Splits a square gray share back into its eight binary planes.
pub fn unpack_group(share: &GrayImage) -> Result<Vec<BinaryImage>> {
    let (width, height) = share.dimensions();
    if width != height {
        return Err(Error::NotSquare { width, height });
    }
    (0..GROUP_SIZE as u8)
        .map(|i| BinaryImage::new(width, extract_plane(share, 7 - i)?))
        .collect()
}

fn encode_with_pad(group: &SecretGroup, pad: &BitStream) -> Result<ShareContainer> {
    let (width, height) = group.dimensions();
    let planes = group
        .images()
        .iter()
        .map(|img| encrypt_image(img, pad))
        .collect::<Result<Vec<_>>>()?;
    let share = pack_group(&planes)?;
    ShareContainer::new(width, height, group.num_real(), share)
}

pub fn encode_group(group: &SecretGroup, comparison: &GrayImage) -> Result<ShareContainer> {
    let (width, height) = group.dimensions();
    let pad = pad_for(comparison, width, height)?;
    encode_with_pad(group, &pad)
}

/// Recovers all eight images of a share, including padding slots.
///
/// A wrong comparison image is not detected; it yields garbage images.
pub fn decode_group(container: &ShareContainer, comparison: &GrayImage) -> Result<SecretGroup> {
    let (width, height) = (container.secret_width(), container.secret_height());
    let side = container.share_side();
    if side * side < container.bit_length() {
        return Err(Error::DimensionInconsistency(format!(
            "share side {side} cannot hold {} bits",
            container.bit_length()
        )));
    }
    let pad = pad_for(comparison, width, height)?;
    let images = unpack_group(container.share())?
        .iter()
        .map(|plane| decrypt_image(plane, &pad, width, height))
        .collect::<Result<Vec<_>>>()?;
    Ok(SecretGroup {
        images,
        num_real: container.num_real(),
    })
}

/// Encodes `secrets` in input order, eight per share, null-padding the last
/// group. Always returns `ceil(n / 8)` containers.
pub fn encode_batch(secrets: &[GrayImage], comparison: &GrayImage) -> Result<Vec<ShareContainer>> {
    let (width, height) = common_dimensions(secrets)?;
    let pad = pad_for(comparison, width, height)?;
    let encode_chunk =
        |chunk: &[GrayImage]| encode_with_pad(&SecretGroup::new(chunk.to_vec())?, &pad);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        secrets.par_chunks(GROUP_SIZE).map(encode_chunk).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        secrets.chunks(GROUP_SIZE).map(encode_chunk).collect()
    }
}

/// Decodes every container and drops the null padding images.
pub fn decode_batch(
    containers: &[ShareContainer],
    comparison: &GrayImage,
) -> Result<Vec<GrayImage>> {
    let decode =
        |c: &ShareContainer| decode_group(c, comparison).map(SecretGroup::into_real_images);

    #[cfg(feature = "parallel")]
    let groups: Vec<Vec<GrayImage>> = {
        use rayon::prelude::*;
        containers.par_iter().map(decode).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let groups: Vec<Vec<GrayImage>> = containers.iter().map(decode).collect::<Result<_>>()?;

    Ok(groups.into_iter().flatten().collect())
}

/// Shares needed for `n` secrets.
pub fn share_count(n: usize) -> usize {
    n.div_ceil(GROUP_SIZE)
}

/// Secrets transmitted per share.
pub fn sharing_capacity(secrets: usize, shares: usize) -> f64 {
    secrets as f64 / shares as f64
}
