//! Sauvola adaptive thresholding.
//!
//! `T(x, y) = m * (1 + k * (s / R - 1))` where `m` and `s` are the mean and
//! standard deviation of the `w x w` window centred on the pixel. Windows are
//! edge-replicated, so every window holds exactly `w * w` samples.
//!
//! Two implementations share one contract: [`binarize_sauvola_naive`] sums
//! every window from scratch, [`binarize_sauvola_fast`] slides the window and
//! only touches the row and column that leave and enter it. Both reduce each
//! window to the same exact integer sums and feed them through
//! [`WindowStats::from_sums`], so their outputs are bit-identical.

use crate::image::{BinaryImage, GrayImage, ThresholdMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SauvolaError {
    #[error("window must be odd and at least 3, got {0}")]
    BadWindow(usize),
    #[error("k must be positive and finite, got {0}")]
    BadK(f64),
    #[error("dynamic range must be positive and finite, got {0}")]
    BadRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SauvolaParams {
    window: usize,
    k: f64,
    r: f64,
}

impl SauvolaParams {
    pub const DEFAULT_WINDOW: usize = 15;
    pub const DEFAULT_K: f64 = 0.5;
    pub const DEFAULT_R: f64 = 128.0;

    pub fn new(window: usize, k: f64, r: f64) -> Result<Self, SauvolaError> {
        check_window(window)?;
        if !(k.is_finite() && k > 0.0) {
            return Err(SauvolaError::BadK(k));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(SauvolaError::BadRange(r));
        }
        Ok(SauvolaParams { window, k, r })
    }

    pub fn with_window(window: usize) -> Result<Self, SauvolaError> {
        SauvolaParams::new(window, Self::DEFAULT_K, Self::DEFAULT_R)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

impl Default for SauvolaParams {
    fn default() -> Self {
        SauvolaParams {
            window: Self::DEFAULT_WINDOW,
            k: Self::DEFAULT_K,
            r: Self::DEFAULT_R,
        }
    }
}

pub(crate) fn check_window(window: usize) -> Result<(), SauvolaError> {
    if window < 3 || window % 2 == 0 {
        return Err(SauvolaError::BadWindow(window));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    pub mean: f64,
    pub stddev: f64,
    pub count: u64,
}

impl WindowStats {
    /// Mean and population standard deviation from exact sums `Σf` and `Σf²`.
    ///
    /// The variance numerator `n·Σf² − (Σf)²` is formed in integers, so it is
    /// exact and never negative.
    #[inline]
    pub fn from_sums(sum: u64, sum_sq: u64, count: u64) -> Self {
        let n = count as f64;
        let numerator = u128::from(count) * u128::from(sum_sq) - u128::from(sum) * u128::from(sum);
        WindowStats {
            mean: sum as f64 / n,
            stddev: (numerator as f64 / (n * n)).sqrt(),
            count,
        }
    }
}

#[inline]
pub fn sauvola_threshold(stats: WindowStats, params: SauvolaParams) -> f64 {
    stats.mean * (1.0 + params.k * (stats.stddev / params.r - 1.0))
}

/// Statistics of the clamped `window x window` neighbourhood of `(x, y)`.
///
/// `window` is expected to be odd; an even value is treated as the next odd size down.
pub fn window_stats(img: &GrayImage, x: usize, y: usize, window: usize) -> WindowStats {
    let half = (window / 2) as isize;
    let (cx, cy) = (x as isize, y as isize);
    let mut sum = 0u64;
    let mut sum_sq = 0u64;
    for dy in -half..=half {
        for dx in -half..=half {
            let v = u64::from(img.get_clamped(cx + dx, cy + dy));
            sum += v;
            sum_sq += v * v;
        }
    }
    let side = 2 * half as u64 + 1;
    WindowStats::from_sums(sum, sum_sq, side * side)
}

/// Running window sums maintained across one-pixel shifts.
///
/// Holds, for the current row band, the vertical sum of every image column over
/// the `w` clamped rows centred on the current row. Moving down a row subtracts
/// the departing row and adds the entering one. Within a row the window slides
/// right by dropping the departing column sum and adding the entering one.
/// Every step is O(1) per pixel, independent of window area.
#[derive(Debug, Clone)]
pub struct SlidingSums<'a> {
    img: &'a GrayImage,
    half: isize,
    row: usize,
    col_sum: Vec<u64>,
    col_sq: Vec<u64>,
}

impl<'a> SlidingSums<'a> {
    /// Positions the window band on row 0.
    pub fn new(img: &'a GrayImage, window: usize) -> Self {
        let half = (window / 2) as isize;
        let w = img.width();
        let mut col_sum = vec![0u64; w];
        let mut col_sq = vec![0u64; w];
        for dy in -half..=half {
            let row = img.row(clamp_index(dy, img.height()));
            for ((s, q), &p) in col_sum.iter_mut().zip(col_sq.iter_mut()).zip(row) {
                let v = u64::from(p);
                *s += v;
                *q += v * v;
            }
        }
        SlidingSums {
            img,
            half,
            row: 0,
            col_sum,
            col_sq,
        }
    }

    pub fn row(&self) -> usize {
        self.row
    }

    pub fn count(&self) -> u64 {
        let side = 2 * self.half as u64 + 1;
        side * side
    }

    /// Moves the band down one row. Returns `false` at the last row.
    pub fn advance_row(&mut self) -> bool {
        if self.row + 1 >= self.img.height() {
            return false;
        }
        let h = self.img.height();
        let y = self.row as isize;
        let leaving = self.img.row(clamp_index(y - self.half, h));
        let entering = self.img.row(clamp_index(y + self.half + 1, h));
        for (((s, q), &out), &inn) in self
            .col_sum
            .iter_mut()
            .zip(self.col_sq.iter_mut())
            .zip(leaving)
            .zip(entering)
        {
            let (out, inn) = (u64::from(out), u64::from(inn));
            *s = *s + inn - out;
            *q = *q + inn * inn - out * out;
        }
        self.row += 1;
        true
    }

    /// Vertical sums `(Σf, Σf²)` of column `x` over the current band.
    pub fn column(&self, x: usize) -> (u64, u64) {
        (self.col_sum[x], self.col_sq[x])
    }

    /// Calls `f(x, Σf, Σf²)` for each window centre along the current row, left to right.
    pub fn scan_row(&self, mut f: impl FnMut(usize, u64, u64)) {
        let w = self.img.width();
        let half = self.half;
        let mut sum = 0u64;
        let mut sum_sq = 0u64;
        for dx in -half..=half {
            let c = clamp_index(dx, w);
            sum += self.col_sum[c];
            sum_sq += self.col_sq[c];
        }
        for x in 0..w {
            f(x, sum, sum_sq);
            let out = clamp_index(x as isize - half, w);
            let inn = clamp_index(x as isize + half + 1, w);
            sum = sum + self.col_sum[inn] - self.col_sum[out];
            sum_sq = sum_sq + self.col_sq[inn] - self.col_sq[out];
        }
    }
}

#[inline]
fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// Window statistics at every pixel, computed with [`SlidingSums`].
pub fn window_stats_map(img: &GrayImage, window: usize) -> Vec<WindowStats> {
    let mut out = Vec::with_capacity(img.width() * img.height());
    let mut sums = SlidingSums::new(img, window);
    let n = sums.count();
    loop {
        sums.scan_row(|_, s, q| out.push(WindowStats::from_sums(s, q, n)));
        if !sums.advance_row() {
            break;
        }
    }
    out
}

fn apply(img: &GrayImage, thresholds: Vec<f64>) -> (BinaryImage, ThresholdMap) {
    let bits = img
        .pixels()
        .iter()
        .zip(&thresholds)
        .map(|(&p, &t)| f64::from(p) <= t)
        .collect();
    let (w, h) = (img.width(), img.height());
    let map = ThresholdMap::new(w, h, thresholds).expect("one threshold per pixel");
    (BinaryImage::from_bools(w, h, bits), map)
}

/// Recomputes every window from scratch: O(w²) per pixel.
pub fn binarize_sauvola_naive(img: &GrayImage, params: SauvolaParams) -> (BinaryImage, ThresholdMap) {
    let mut thresholds = Vec::with_capacity(img.width() * img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let stats = window_stats(img, x, y, params.window);
            thresholds.push(sauvola_threshold(stats, params));
        }
    }
    apply(img, thresholds)
}

/// Incremental sliding-window variant: O(1) amortized per pixel.
pub fn binarize_sauvola_fast(img: &GrayImage, params: SauvolaParams) -> (BinaryImage, ThresholdMap) {
    let thresholds = window_stats_map(img, params.window)
        .into_iter()
        .map(|stats| sauvola_threshold(stats, params))
        .collect();
    apply(img, thresholds)
}
