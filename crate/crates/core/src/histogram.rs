//! 256-bin gray-level histograms with real-valued weights.
//!
//! Weights are real so that co-occurrence projections and quantized Bernsen
//! maps feed the same Otsu routine as plain pixel counts.

use crate::image::GrayImage;

pub const LEVELS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bins: [f64; LEVELS],
    total: f64,
}

impl Histogram {
    pub fn empty() -> Self {
        Histogram {
            bins: [0.0; LEVELS],
            total: 0.0,
        }
    }

    /// Returns `None` if any bin is negative or non-finite.
    pub fn from_bins(bins: [f64; LEVELS]) -> Option<Self> {
        if bins.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return None;
        }
        let total = bins.iter().sum();
        Some(Histogram { bins, total })
    }

    pub fn from_counts(counts: &[u64; LEVELS]) -> Self {
        let mut bins = [0.0; LEVELS];
        for (b, &c) in bins.iter_mut().zip(counts) {
            *b = c as f64;
        }
        Histogram::from_bins(bins).expect("counts are nonnegative")
    }

    /// Counts real values after rounding to the nearest level and clamping to `0..=255`.
    pub fn from_quantized<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let mut counts = [0u64; LEVELS];
        for v in values {
            counts[quantize(v) as usize] += 1;
        }
        Histogram::from_counts(&counts)
    }

    #[inline]
    pub fn bins(&self) -> &[f64; LEVELS] {
        &self.bins
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn scaled(&self, factor: f64) -> Option<Self> {
        let mut bins = self.bins;
        bins.iter_mut().for_each(|b| *b *= factor);
        Histogram::from_bins(bins)
    }
}

/// Round-to-nearest (halves away from zero), clamped to a gray level.
#[inline]
pub fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Pixel counts per gray level.
pub fn histogram(img: &GrayImage) -> Histogram {
    let mut counts = [0u64; LEVELS];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    Histogram::from_counts(&counts)
}
