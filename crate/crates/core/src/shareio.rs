//! Share container files and grayscale image files.
//!
//! A `.msis` file is a fixed 36-byte little-endian header followed by the
//! share pixels, row-major:
//!
//! | offset | size | field        |
//! |--------|------|--------------|
//! | 0      | 4    | magic `MS18` |
//! | 4      | 2    | version (1)  |
//! | 6      | 2    | flags (0)    |
//! | 8      | 4    | secret width |
//! | 12     | 4    | secret height|
//! | 16     | 1    | num_real     |
//! | 17     | 7    | reserved (0) |
//! | 24     | 8    | bit_length   |
//! | 32     | 4    | share_side   |
//!
//! The comparison image and the security key are never written.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::bitcore::{ceil_sqrt, GrayImage};
use crate::codec::ShareContainer;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"MS18";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 36;
pub const SHARE_EXTENSION: &str = "msis";

/// The parsed fixed-size header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContainerHeader {
    pub magic: [u8; 4],
    pub version: u16,
    pub flags: u16,
    pub secret_width: u32,
    pub secret_height: u32,
    pub num_real: u8,
    pub reserved: [u8; 7],
    pub bit_length: u64,
    pub share_side: u32,
}

impl ContainerHeader {
    pub fn for_container(container: &ShareContainer) -> Result<Self> {
        let narrow = |v: usize, what: &str| {
            u32::try_from(v)
                .map_err(|_| Error::HeaderInvariantViolation(format!("{what} {v} exceeds u32")))
        };
        Ok(Self {
            magic: MAGIC,
            version: VERSION,
            flags: 0,
            secret_width: narrow(container.secret_width(), "secret width")?,
            secret_height: narrow(container.secret_height(), "secret height")?,
            num_real: container.num_real() as u8,
            reserved: [0; 7],
            bit_length: container.bit_length() as u64,
            share_side: narrow(container.share_side(), "share side")?,
        })
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&self.magic);
        out[4..6].copy_from_slice(&self.version.to_le_bytes());
        out[6..8].copy_from_slice(&self.flags.to_le_bytes());
        out[8..12].copy_from_slice(&self.secret_width.to_le_bytes());
        out[12..16].copy_from_slice(&self.secret_height.to_le_bytes());
        out[16] = self.num_real;
        out[17..24].copy_from_slice(&self.reserved);
        out[24..32].copy_from_slice(&self.bit_length.to_le_bytes());
        out[32..36].copy_from_slice(&self.share_side.to_le_bytes());
        out
    }

    /// Parses the raw fields without validating them.
    pub fn from_bytes(bytes: &[u8; HEADER_LEN]) -> Self {
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        Self {
            magic: bytes[0..4].try_into().unwrap(),
            version: u16_at(4),
            flags: u16_at(6),
            secret_width: u32_at(8),
            secret_height: u32_at(12),
            num_real: bytes[16],
            reserved: bytes[17..24].try_into().unwrap(),
            bit_length: u64::from_le_bytes(bytes[24..32].try_into().unwrap()),
            share_side: u32_at(32),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.magic != MAGIC {
            return Err(Error::BadMagic(self.magic));
        }
        if self.version != VERSION {
            return Err(Error::UnsupportedVersion(self.version));
        }
        let violation = |msg: String| Err(Error::HeaderInvariantViolation(msg));
        if self.flags != 0 {
            return violation(format!("flags {:#06x} must be zero", self.flags));
        }
        if self.reserved != [0; 7] {
            return violation("reserved bytes must be zero".into());
        }
        if self.secret_width == 0 || self.secret_height == 0 {
            return violation(format!(
                "secret size {}x{}",
                self.secret_width, self.secret_height
            ));
        }
        if !(1..=8).contains(&self.num_real) {
            return violation(format!("num_real {} outside 1..=8", self.num_real));
        }
        let expected = 8 * self.secret_width as u64 * self.secret_height as u64;
        if self.bit_length != expected {
            return violation(format!(
                "bit_length {} != 8*{}*{}",
                self.bit_length, self.secret_width, self.secret_height
            ));
        }
        let side = usize::try_from(self.bit_length)
            .map(ceil_sqrt)
            .map_err(|_| Error::HeaderInvariantViolation("bit_length too large".into()))?;
        if self.share_side as usize != side {
            return violation(format!(
                "share_side {} != ceil(sqrt({}))",
                self.share_side, self.bit_length
            ));
        }
        Ok(())
    }

    pub fn payload_len(&self) -> usize {
        self.share_side as usize * self.share_side as usize
    }
}

/// Writes header and payload; returns the number of bytes written.
pub fn write_share<W: Write>(container: &ShareContainer, mut sink: W) -> Result<usize> {
    let header = ContainerHeader::for_container(container)?;
    let payload = container.share().pixels();
    sink.write_all(&header.to_bytes())
        .map_err(Error::SinkFailure)?;
    sink.write_all(payload).map_err(Error::SinkFailure)?;
    sink.flush().map_err(Error::SinkFailure)?;
    Ok(HEADER_LEN + payload.len())
}

pub fn share_to_bytes(container: &ShareContainer) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(HEADER_LEN + container.share().pixels().len());
    write_share(container, &mut out)?;
    Ok(out)
}

fn read_full<R: Read>(source: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match source.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}

/// Reads and fully validates one container, rejecting trailing bytes.
pub fn read_share<R: Read>(mut source: R) -> Result<ShareContainer> {
    let mut raw = [0u8; HEADER_LEN];
    let got = read_full(&mut source, &mut raw)?;
    if got >= 4 && raw[..4] != MAGIC {
        return Err(Error::BadMagic(raw[..4].try_into().unwrap()));
    }
    if got < HEADER_LEN {
        return Err(Error::TruncatedHeader(got));
    }
    let header = ContainerHeader::from_bytes(&raw);
    header.validate()?;

    let expected = header.payload_len();
    let mut payload = Vec::new();
    source
        .by_ref()
        .take(expected as u64)
        .read_to_end(&mut payload)?;
    if payload.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            actual: payload.len(),
        });
    }
    let mut probe = [0u8; 1];
    if read_full(&mut source, &mut probe)? != 0 {
        return Err(Error::TrailingData);
    }

    let side = header.share_side as usize;
    let share = GrayImage::new(side, side, payload)?;
    ShareContainer::from_parts(
        header.secret_width as usize,
        header.secret_height as usize,
        header.num_real as usize,
        header.bit_length as usize,
        share,
    )
}

pub fn save_share(container: &ShareContainer, path: impl AsRef<Path>) -> Result<usize> {
    let file = fs::File::create(path).map_err(Error::SinkFailure)?;
    write_share(container, io::BufWriter::new(file))
}

pub fn load_share(path: impl AsRef<Path>) -> Result<ShareContainer> {
    read_share(io::BufReader::new(fs::File::open(path)?))
}

/// `<stem>_NNNN.msis` for group `index`.
pub fn batch_file_name(stem: &str, index: usize) -> String {
    format!("{stem}_{index:04}.{SHARE_EXTENSION}")
}

/// A decoded image file plus whether it had to be reduced from color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedImage {
    pub image: GrayImage,
    pub converted_from_color: bool,
}

/// Integer-rounded `0.299 R + 0.587 G + 0.114 B`, halves rounded up.
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    ((weighted + 500) / 1000) as u8
}

struct Pnm<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Pnm<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedFile(format!("missing or invalid {what}")))
    }
}

/// Decodes binary PGM (`P5`) or PPM (`P6`) with maxval 255.
pub fn decode_pnm(bytes: &[u8]) -> Result<LoadedImage> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        Some([b'P', _]) => {
            return Err(Error::UnsupportedFormat(format!(
                "netpbm variant {}",
                String::from_utf8_lossy(&bytes[..2])
            )))
        }
        _ => return Err(Error::UnsupportedFormat("not a netpbm file".into())),
    };
    let mut pnm = Pnm { bytes, pos: 2 };
    let width = pnm.number("width")?;
    let height = pnm.number("height")?;
    let maxval = pnm.number("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!(
            "maxval {maxval}, only 255 is supported"
        )));
    }
    // exactly one whitespace byte separates the header from the raster
    if !bytes.get(pnm.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::MalformedFile("no whitespace after maxval".into()));
    }
    let raster = &bytes[pnm.pos + 1..];
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::MalformedFile(format!("{width}x{height} overflows")))?;
    if raster.len() != expected {
        return Err(Error::MalformedFile(format!(
            "raster has {} bytes, expected {expected}",
            raster.len()
        )));
    }
    let pixels = if channels == 1 {
        raster.to_vec()
    } else {
        raster
            .chunks_exact(3)
            .map(|rgb| luminance(rgb[0], rgb[1], rgb[2]))
            .collect()
    };
    let image =
        GrayImage::new(width, height, pixels).map_err(|e| Error::MalformedFile(e.to_string()))?;
    Ok(LoadedImage {
        image,
        converted_from_color: channels == 3,
    })
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

#[cfg(feature = "png")]
fn decode_png(bytes: &[u8]) -> Result<LoadedImage> {
    use image::{ColorType, ImageFormat};

    let dynamic = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| Error::MalformedFile(e.to_string()))?;
    match dynamic.color() {
        ColorType::L8 => {
            let gray = dynamic.into_luma8();
            let (w, h) = gray.dimensions();
            let image = GrayImage::new(w as usize, h as usize, gray.into_raw())?;
            Ok(LoadedImage {
                image,
                converted_from_color: false,
            })
        }
        ColorType::Rgb8 | ColorType::Rgba8 => {
            let rgb = dynamic.into_rgb8();
            let (w, h) = rgb.dimensions();
            let pixels = rgb.pixels().map(|p| luminance(p[0], p[1], p[2])).collect();
            Ok(LoadedImage {
                image: GrayImage::new(w as usize, h as usize, pixels)?,
                converted_from_color: true,
            })
        }
        other => Err(Error::UnsupportedFormat(format!(
            "PNG color type {other:?}"
        ))),
    }
}

/// Decodes an image file by content sniffing.
pub fn decode_image(bytes: &[u8]) -> Result<LoadedImage> {
    const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";
    if bytes.starts_with(PNG_SIGNATURE) {
        #[cfg(feature = "png")]
        return decode_png(bytes);
        #[cfg(not(feature = "png"))]
        return Err(Error::UnsupportedFormat(
            "PNG support is not compiled in (enable the `png` feature)".into(),
        ));
    }
    decode_pnm(bytes)
}

pub fn load_image(path: impl AsRef<Path>) -> Result<LoadedImage> {
    decode_image(&fs::read(path)?)
}

pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    load_image(path).map(|loaded| loaded.image)
}

/// Writes `img` as binary PGM.
pub fn write_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_container() -> ShareContainer {
        let share = GrayImage::new(3, 3, vec![9, 8, 7, 6, 5, 4, 3, 2, 1]).unwrap();
        ShareContainer::new(1, 1, 5, share).unwrap()
    }

    #[test]
    fn header_layout() {
        let bytes = share_to_bytes(&tiny_container()).unwrap();
        assert_eq!(bytes.len(), 45);
        let expected_header: [u8; 36] = [
            b'M', b'S', b'1', b'8', // magic
            1, 0, // version
            0, 0, // flags
            1, 0, 0, 0, // width
            1, 0, 0, 0, // height
            5, // num_real
            0, 0, 0, 0, 0, 0, 0, // reserved
            8, 0, 0, 0, 0, 0, 0, 0, // bit_length
            3, 0, 0, 0, // share_side
        ];
        assert_eq!(&bytes[..36], &expected_header);
        assert_eq!(&bytes[36..], &[9, 8, 7, 6, 5, 4, 3, 2, 1]);
    }

    #[test]
    fn sixty_four_square_size() {
        let c = ShareContainer::new(64, 64, 8, GrayImage::zeros(182, 182).unwrap()).unwrap();
        assert_eq!(share_to_bytes(&c).unwrap().len(), 33160);
    }

    #[test]
    fn read_rejects_corruption() {
        let good = share_to_bytes(&tiny_container()).unwrap();
        assert_eq!(read_share(&good[..]).unwrap(), tiny_container());

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(read_share(&bad[..]), Err(Error::BadMagic(_))));

        assert!(matches!(
            read_share(&good[..good.len() - 1]),
            Err(Error::TruncatedPayload {
                expected: 9,
                actual: 8
            })
        ));
        assert!(matches!(
            read_share(&good[..20]),
            Err(Error::TruncatedHeader(20))
        ));
        assert!(matches!(
            read_share(&good[..2]),
            Err(Error::TruncatedHeader(2))
        ));

        let mut long = good.clone();
        long.push(0);
        assert!(matches!(read_share(&long[..]), Err(Error::TrailingData)));

        let mut version = good.clone();
        version[4] = 2;
        assert!(matches!(
            read_share(&version[..]),
            Err(Error::UnsupportedVersion(2))
        ));
    }

    #[test]
    fn read_rejects_header_invariants() {
        let good = share_to_bytes(&tiny_container()).unwrap();
        let cases: [(usize, u8); 5] = [
            (6, 1),  // flags
            (20, 1), // reserved
            (16, 0), // num_real
            (24, 9), // bit_length
            (32, 4), // share_side
        ];
        for (offset, value) in cases {
            let mut bad = good.clone();
            bad[offset] = value;
            assert!(
                matches!(
                    read_share(&bad[..]),
                    Err(Error::HeaderInvariantViolation(_))
                ),
                "offset {offset}"
            );
        }
    }

    #[test]
    fn pgm_fixture() {
        let mut file = b"P5\n2 2\n255\n".to_vec();
        file.extend_from_slice(&[0, 64, 128, 255]);
        assert_eq!(file.len(), 15);
        let loaded = decode_image(&file).unwrap();
        assert!(!loaded.converted_from_color);
        assert_eq!(loaded.image.pixels(), &[0, 64, 128, 255]);
        assert_eq!(encode_pgm(&loaded.image), file);
    }

    #[test]
    fn pgm_header_comments() {
        let mut file = b"P5 # made by hand\n# another\n3\t1 255\n".to_vec();
        file.extend_from_slice(&[1, 2, 3]);
        assert_eq!(decode_image(&file).unwrap().image.pixels(), &[1, 2, 3]);
    }

    #[test]
    fn ppm_converts_to_luminance() {
        let mut file = b"P6\n2 1\n255\n".to_vec();
        file.extend_from_slice(&[255, 0, 0, 10, 200, 30]);
        let loaded = decode_image(&file).unwrap();
        assert!(loaded.converted_from_color);
        // 0.299*10 + 0.587*200 + 0.114*30 = 123.81
        assert_eq!(loaded.image.pixels(), &[76, 124]);
        assert_eq!(luminance(255, 255, 255), 255);
        assert_eq!(luminance(0, 0, 0), 0);
    }

    #[test]
    fn image_errors() {
        assert!(matches!(
            decode_image(b"GIF89a"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(
            decode_image(b"P2\n1 1\n255\n0"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(
            decode_image(b"P5\n1 1\n65535\n\0\0"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(
            decode_image(b"P5\n2 2\n255\n\0"),
            Err(Error::MalformedFile(_))
        ));
        assert!(matches!(
            decode_image(b"P5\nx 2\n255\n\0"),
            Err(Error::MalformedFile(_))
        ));
        assert!(matches!(
            decode_image(b"P5\n0 0\n255\n"),
            Err(Error::MalformedFile(_))
        ));
    }

    #[test]
    fn batch_names() {
        assert_eq!(batch_file_name("out", 0), "out_0000.msis");
        assert_eq!(batch_file_name("dir/x", 12), "dir/x_0012.msis");
    }
}
