//! Raster containers shared by every method.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("pixel buffer holds {actual} values but {width}x{height} needs {expected}")]
    LengthMismatch {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error("binary pixel at index {index} is {value}, expected 0 or 1")]
    NotBinary { index: usize, value: u8 },
    #[error("images differ in size: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<(), ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroDimension { width, height });
    }
    let expected = width
        .checked_mul(height)
        .ok_or(ImageError::ZeroDimension { width, height })?;
    if expected != len {
        return Err(ImageError::LengthMismatch {
            width,
            height,
            expected,
            actual: len,
        });
    }
    Ok(())
}

/// An 8-bit grayscale raster, row-major with the origin at the top-left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        check_dims(width, height, pixels.len())?;
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self, ImageError> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage::new(width, height, pixels)
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        GrayImage::new(width, height, vec![value; width.saturating_mul(height)])
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Pixel at `(x, y)` with coordinates clamped into the image (edge replication).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }
}

/// A two-tone raster: `1` is foreground (ink), `0` is background.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        check_dims(width, height, pixels.len())?;
        if let Some((index, &value)) = pixels.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(ImageError::NotBinary { index, value });
        }
        Ok(BinaryImage {
            width,
            height,
            pixels,
        })
    }

    pub(crate) fn from_bools(width: usize, height: usize, bits: Vec<bool>) -> Self {
        debug_assert_eq!(bits.len(), width * height);
        BinaryImage {
            width,
            height,
            pixels: bits.into_iter().map(u8::from).collect(),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn foreground_count(&self) -> usize {
        self.pixels.iter().filter(|&&v| v == 1).count()
    }

    /// Fraction of pixels on which `self` and `other` agree.
    pub fn agreement(&self, other: &BinaryImage) -> Result<f64, ImageError> {
        if self.width != other.width || self.height != other.height {
            return Err(ImageError::SizeMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        let same = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .filter(|(a, b)| a == b)
            .count();
        Ok(same as f64 / self.pixels.len() as f64)
    }
}

/// Per-pixel real values with the dimensions of a source image.
///
/// Holds Sauvola thresholds as well as Bernsen midrange and contrast maps.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ThresholdMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self, ImageError> {
        check_dims(width, height, values.len())?;
        Ok(ThresholdMap {
            width,
            height,
            values,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Exact equality including the bit pattern of every value.
    pub fn bit_eq(&self, other: &ThresholdMap) -> bool {
        self.width == other.width
            && self.height == other.height
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert_eq!(
            GrayImage::new(0, 3, vec![]),
            Err(ImageError::ZeroDimension {
                width: 0,
                height: 3
            })
        );
        assert!(matches!(
            GrayImage::new(2, 2, vec![0; 3]),
            Err(ImageError::LengthMismatch { expected: 4, actual: 3, .. })
        ));
    }

    #[test]
    fn binary_rejects_non_binary_values() {
        assert_eq!(
            BinaryImage::new(2, 1, vec![1, 2]),
            Err(ImageError::NotBinary { index: 1, value: 2 })
        );
    }

    #[test]
    fn clamped_access_replicates_edges() {
        let img = GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(img.get_clamped(-5, -5), 1);
        assert_eq!(img.get_clamped(9, 0), 2);
        assert_eq!(img.get_clamped(0, 9), 3);
        assert_eq!(img.get_clamped(1, 1), 4);
    }

    #[test]
    fn agreement_counts_matching_pixels() {
        let a = BinaryImage::new(4, 1, vec![1, 0, 1, 0]).unwrap();
        let b = BinaryImage::new(4, 1, vec![1, 1, 0, 0]).unwrap();
        assert_eq!(a.agreement(&b).unwrap(), 0.5);
        let c = BinaryImage::new(2, 2, vec![0; 4]).unwrap();
        assert!(a.agreement(&c).is_err());
    }
}
