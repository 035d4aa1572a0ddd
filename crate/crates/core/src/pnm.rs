//! Netpbm codecs: PGM (P2/P5) in, PGM P5 and PBM P4 out.
//!
//! A PBM reader (P1/P4) is included so that binary outputs can be read back
//! for comparison.
//!
//! Samples of a PGM whose maxval is below 255 are kept as-is, not rescaled.

use crate::image::{BinaryImage, GrayImage, ImageError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnmError {
    #[error("bad magic number {0:?}")]
    BadMagic([u8; 2]),
    #[error("truncated {0}")]
    Truncated(&'static str),
    #[error("invalid header token {0:?}")]
    InvalidToken(String),
    #[error("maxval {0} is outside 1..=255")]
    UnsupportedMaxval(u32),
    #[error("zero dimension {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
    #[error("invalid PBM sample {0:?}")]
    InvalidBit(char),
}

impl From<ImageError> for PnmError {
    fn from(err: ImageError) -> Self {
        match err {
            ImageError::ZeroDimension { width, height } => PnmError::ZeroDimension { width, height },
            // Dimensions and buffer length are checked by the parser before construction.
            other => unreachable!("codec built an inconsistent image: {other}"),
        }
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(data: &'a [u8]) -> Self {
        Cursor { data, pos: 0 }
    }

    fn remaining(&self) -> &'a [u8] {
        &self.data[self.pos..]
    }

    fn magic(&mut self) -> Result<[u8; 2], PnmError> {
        if self.data.len() < 2 {
            return Err(PnmError::Truncated("magic number"));
        }
        self.pos = 2;
        Ok([self.data[0], self.data[1]])
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_separators(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32, PnmError> {
        self.skip_separators();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.data.get(self.pos) {
                None => Err(PnmError::Truncated(what)),
                Some(_) => {
                    let end = (self.pos + 8).min(self.data.len());
                    Err(PnmError::InvalidToken(
                        String::from_utf8_lossy(&self.data[self.pos..end]).into_owned(),
                    ))
                }
            };
        }
        let text = std::str::from_utf8(&self.data[start..self.pos]).expect("ascii digits");
        text.parse::<u32>()
            .map_err(|_| PnmError::InvalidToken(text.to_string()))
    }

    /// Consumes the single whitespace byte that ends a binary header.
    fn header_terminator(&mut self) -> Result<(), PnmError> {
        match self.data.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(PnmError::InvalidToken(
                String::from_utf8_lossy(&self.data[self.pos..self.pos + 1]).into_owned(),
            )),
            None => Err(PnmError::Truncated("header")),
        }
    }
}

fn dimensions(cur: &mut Cursor<'_>) -> Result<(usize, usize), PnmError> {
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    if width == 0 || height == 0 {
        return Err(PnmError::ZeroDimension { width, height });
    }
    Ok((width, height))
}

/// Parses a binary (P5) or ASCII (P2) PGM with maxval at most 255.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage, PnmError> {
    let mut cur = Cursor::new(bytes);
    let magic = cur.magic()?;
    let binary = match &magic {
        b"P5" => true,
        b"P2" => false,
        _ => return Err(PnmError::BadMagic(magic)),
    };
    let (width, height) = dimensions(&mut cur)?;
    let maxval = cur.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(PnmError::UnsupportedMaxval(maxval));
    }
    // Every sample occupies at least one byte in either encoding, which bounds
    // the allocation by the input size.
    let count = width
        .checked_mul(height)
        .filter(|&n| n <= bytes.len())
        .ok_or(PnmError::Truncated("pixel data"))?;

    let pixels = if binary {
        cur.header_terminator()?;
        let raster = cur
            .remaining()
            .get(..count)
            .ok_or(PnmError::Truncated("pixel data"))?;
        if let Some(&value) = raster.iter().find(|&&v| u32::from(v) > maxval) {
            return Err(PnmError::SampleOutOfRange {
                value: value.into(),
                maxval,
            });
        }
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            let value = cur.number("pixel data")?;
            if value > maxval {
                return Err(PnmError::SampleOutOfRange { value, maxval });
            }
            pixels.push(value as u8);
        }
        pixels
    };
    Ok(GrayImage::new(width, height, pixels)?)
}

/// Encodes as binary P5 with maxval 255.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.pixels().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

/// Encodes as binary P4: one bit per pixel, MSB first, each row padded to a
/// whole byte with zero bits. Bit `1` is black, which is foreground here.
pub fn save_pbm(bin: &BinaryImage) -> Vec<u8> {
    let header = format!("P4\n{} {}\n", bin.width(), bin.height());
    let row_bytes = bin.width().div_ceil(8);
    let mut out = Vec::with_capacity(header.len() + row_bytes * bin.height());
    out.extend_from_slice(header.as_bytes());
    for row in bin.pixels().chunks_exact(bin.width()) {
        for chunk in row.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &bit)| acc | (bit << (7 - i)));
            out.push(byte);
        }
    }
    out
}

/// Parses a binary (P4) or ASCII (P1) PBM.
pub fn load_pbm(bytes: &[u8]) -> Result<BinaryImage, PnmError> {
    let mut cur = Cursor::new(bytes);
    let magic = cur.magic()?;
    let binary = match &magic {
        b"P4" => true,
        b"P1" => false,
        _ => return Err(PnmError::BadMagic(magic)),
    };
    let (width, height) = dimensions(&mut cur)?;

    let pixels = if binary {
        cur.header_terminator()?;
        let row_bytes = width.div_ceil(8);
        let needed = row_bytes
            .checked_mul(height)
            .ok_or(PnmError::Truncated("pixel data"))?;
        let raster = cur
            .remaining()
            .get(..needed)
            .ok_or(PnmError::Truncated("pixel data"))?;
        let mut pixels = Vec::with_capacity(width * height);
        for row in raster.chunks_exact(row_bytes) {
            pixels.extend((0..width).map(|x| (row[x / 8] >> (7 - x % 8)) & 1));
        }
        pixels
    } else {
        let count = width
            .checked_mul(height)
            .filter(|&n| n <= bytes.len())
            .ok_or(PnmError::Truncated("pixel data"))?;
        let mut pixels = Vec::with_capacity(count);
        while pixels.len() < count {
            cur.skip_separators();
            match cur.remaining().first() {
                None => return Err(PnmError::Truncated("pixel data")),
                Some(b'0') => pixels.push(0),
                Some(b'1') => pixels.push(1),
                Some(&other) => return Err(PnmError::InvalidBit(other as char)),
            }
            cur.pos += 1;
        }
        pixels
    };
    Ok(BinaryImage::new(width, height, pixels)?)
}
