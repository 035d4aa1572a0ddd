//! Otsu threshold selection and the window-grid local variant.
//!
//! Levels `0..=k` form class C0 and `k+1..=255` form C1. The selected
//! threshold is the smallest `k` maximizing the between-class variance
//! `w0 * w1 * (mu1 - mu0)^2`; a `k` that leaves either class empty scores 0.

use crate::histogram::{histogram, Histogram, LEVELS};
use crate::image::{BinaryImage, GrayImage};
use thiserror::Error;

/// Relative margin below which two between-class variances count as tied.
///
/// Mathematically equal criteria can differ by a few ulps depending on the
/// order of accumulation; this keeps the smallest-k tie-break stable.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OtsuError {
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("a {rows}x{cols} grid does not fit a {width}x{height} image")]
    GridTooFine {
        rows: usize,
        cols: usize,
        width: usize,
        height: usize,
    },
    #[error("grid was built for {grid_w}x{grid_h} but image is {width}x{height}")]
    GridMismatch {
        grid_w: usize,
        grid_h: usize,
        width: usize,
        height: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OtsuResult {
    pub threshold: u8,
    /// Between-class variance at `threshold`.
    pub sigma_b: f64,
    /// Total variance of the histogram.
    pub sigma_t: f64,
    /// `sigma_b / sigma_t`, or 0 when `sigma_t` is 0.
    pub eta: f64,
}

/// Class probabilities and means for a split after level `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMoments {
    pub omega0: f64,
    pub omega1: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub mu_total: f64,
}

impl ClassMoments {
    pub fn between_class_variance(&self) -> f64 {
        if self.omega0 == 0.0 || self.omega1 == 0.0 {
            return 0.0;
        }
        let d = self.mu1 - self.mu0;
        self.omega0 * self.omega1 * d * d
    }
}

/// Direct evaluation of the class moments at a single split, for inspection.
pub fn class_moments(hist: &Histogram, k: u8) -> Result<ClassMoments, OtsuError> {
    let total = hist.total();
    if total <= 0.0 {
        return Err(OtsuError::EmptyHistogram);
    }
    let k = k as usize;
    let (mut w0, mut s0, mut w1, mut s1) = (0.0, 0.0, 0.0, 0.0);
    for (i, &b) in hist.bins().iter().enumerate() {
        if i <= k {
            w0 += b;
            s0 += i as f64 * b;
        } else {
            w1 += b;
            s1 += i as f64 * b;
        }
    }
    Ok(ClassMoments {
        omega0: w0 / total,
        omega1: w1 / total,
        mu0: if w0 > 0.0 { s0 / w0 } else { 0.0 },
        mu1: if w1 > 0.0 { s1 / w1 } else { 0.0 },
        mu_total: (s0 + s1) / total,
    })
}

pub fn otsu_threshold(hist: &Histogram) -> Result<OtsuResult, OtsuError> {
    let total = hist.total();
    if total <= 0.0 {
        return Err(OtsuError::EmptyHistogram);
    }
    let bins = hist.bins();

    // Suffix sums are kept separately from prefix sums so that an empty upper
    // class has weight exactly zero rather than `total - w0` rounding noise.
    let mut suffix_w = [0.0; LEVELS + 1];
    let mut suffix_s = [0.0; LEVELS + 1];
    for i in (0..LEVELS).rev() {
        suffix_w[i] = suffix_w[i + 1] + bins[i];
        suffix_s[i] = suffix_s[i + 1] + i as f64 * bins[i];
    }
    let mu_total = suffix_s[0] / total;

    let mut w0 = 0.0;
    let mut s0 = 0.0;
    let mut best: Option<(usize, f64)> = None;
    for k in 0..LEVELS {
        w0 += bins[k];
        s0 += k as f64 * bins[k];
        let w1 = suffix_w[k + 1];
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let moments = ClassMoments {
            omega0: w0 / total,
            omega1: w1 / total,
            mu0: s0 / w0,
            mu1: suffix_s[k + 1] / w1,
            mu_total,
        };
        let sigma = moments.between_class_variance();
        match best {
            Some((_, b)) if sigma <= b + b * TIE_TOLERANCE => {}
            _ => best = Some((k, sigma)),
        }
    }

    let sigma_t: f64 = bins
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let d = i as f64 - mu_total;
            d * d * (b / total)
        })
        .sum();

    let Some((k, sigma_b)) = best.filter(|&(_, s)| s > 0.0) else {
        // All mass on one level: threshold at that level.
        let level = bins.iter().position(|&b| b > 0.0).unwrap_or(0);
        return Ok(OtsuResult {
            threshold: level as u8,
            sigma_b: 0.0,
            sigma_t,
            eta: 0.0,
        });
    };
    let eta = if sigma_t > 0.0 {
        (sigma_b / sigma_t).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(OtsuResult {
        threshold: k as u8,
        sigma_b,
        sigma_t,
        eta,
    })
}

/// Gray values `<= t` become foreground (1), values `> t` background (0).
pub fn binarize_global(img: &GrayImage, t: u8) -> BinaryImage {
    let bits = img.pixels().iter().map(|&p| p <= t).collect();
    BinaryImage::from_bools(img.width(), img.height(), bits)
}

/// Inclusive pixel rectangle of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Cell {
    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    /// Row-major coordinates inside the cell.
    pub fn coords(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.y0..=self.y1).flat_map(move |y| (self.x0..=self.x1).map(move |x| (x, y)))
    }
}

/// A rows x cols tiling of an image into near-equal rectangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowGrid {
    width: usize,
    height: usize,
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl WindowGrid {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn image_size(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub(crate) fn check_fits(&self, width: usize, height: usize) -> Result<(), OtsuError> {
        if (self.width, self.height) != (width, height) {
            return Err(OtsuError::GridMismatch {
                grid_w: self.width,
                grid_h: self.height,
                width,
                height,
            });
        }
        Ok(())
    }
}

/// Splits `len` into `parts` spans of `len / parts`, the last absorbing the remainder.
fn spans(len: usize, parts: usize) -> impl Iterator<Item = (usize, usize)> {
    let base = len / parts;
    (0..parts).map(move |i| {
        let start = i * base;
        let end = if i + 1 == parts { len - 1 } else { start + base - 1 };
        (start, end)
    })
}

pub fn make_grid(
    width: usize,
    height: usize,
    rows: usize,
    cols: usize,
) -> Result<WindowGrid, OtsuError> {
    if rows == 0 || cols == 0 || rows > height || cols > width {
        return Err(OtsuError::GridTooFine {
            rows,
            cols,
            width,
            height,
        });
    }
    let cells = spans(height, rows)
        .flat_map(|(y0, y1)| spans(width, cols).map(move |(x0, x1)| Cell { x0, y0, x1, y1 }))
        .collect();
    Ok(WindowGrid {
        width,
        height,
        rows,
        cols,
        cells,
    })
}

fn cell_histogram(img: &GrayImage, cell: &Cell) -> Histogram {
    let mut counts = [0u64; LEVELS];
    for y in cell.y0..=cell.y1 {
        for &p in &img.row(y)[cell.x0..=cell.x1] {
            counts[p as usize] += 1;
        }
    }
    Histogram::from_counts(&counts)
}

/// Otsu result for each grid cell, row-major.
pub fn local_otsu_thresholds(
    img: &GrayImage,
    grid: &WindowGrid,
) -> Result<Vec<OtsuResult>, OtsuError> {
    grid.check_fits(img.width(), img.height())?;
    grid.cells()
        .iter()
        .map(|cell| otsu_threshold(&cell_histogram(img, cell)))
        .collect()
}

/// Binarizes each grid cell with its own Otsu threshold.
pub fn binarize_otsu_local(img: &GrayImage, grid: &WindowGrid) -> Result<BinaryImage, OtsuError> {
    let thresholds = local_otsu_thresholds(img, grid)?;
    let mut bits = vec![false; img.width() * img.height()];
    for (cell, result) in grid.cells().iter().zip(&thresholds) {
        for (x, y) in cell.coords() {
            bits[y * img.width() + x] = img.get(x, y) <= result.threshold;
        }
    }
    Ok(BinaryImage::from_bools(img.width(), img.height(), bits))
}

/// Global Otsu threshold of the whole image, then [`binarize_global`].
pub fn binarize_otsu(img: &GrayImage) -> (BinaryImage, OtsuResult) {
    let result = otsu_threshold(&histogram(img)).expect("images are never empty");
    (binarize_global(img, result.threshold), result)
}
