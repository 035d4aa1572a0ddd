//! Bernsen local-contrast thresholding with ghost suppression.
//!
//! Each pixel gets a midrange `g = (max + min) / 2` and a contrast `c` over its
//! clamped window. A pixel is foreground when
//!
//! ```text
//! (f < g  and  c > c*)  or  (f < f*  and  c <= c*)
//! ```
//!
//! where `c*` and `f*` are Otsu thresholds of the `c` and `g` maps. The
//! original method uses range contrast `c = max - min` and one global pair
//! of thresholds. The modified method uses the window standard deviation as
//! contrast and computes the thresholds per cell of a 3x3 grid.

use crate::histogram::Histogram;
use crate::image::{BinaryImage, GrayImage, ThresholdMap};
use crate::otsu::{make_grid, otsu_threshold, Cell, OtsuError, WindowGrid};
use crate::sauvola::{check_window, window_stats_map, SauvolaError};
use thiserror::Error;

pub const DEFAULT_WINDOW: usize = 31;
pub const MODIFIED_GRID: (usize, usize) = (3, 3);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BernsenError {
    #[error(transparent)]
    Window(#[from] SauvolaError),
    #[error(transparent)]
    Grid(#[from] OtsuError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContrastKind {
    /// `max - min` over the window.
    Range,
    /// Population standard deviation over the window.
    StdDev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BernsenVariant {
    Original,
    Modified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernsenMaps {
    pub g: ThresholdMap,
    pub c: ThresholdMap,
    pub variant: ContrastKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhostThresholds {
    pub c_star: u8,
    pub f_star: u8,
}

/// The suppressed decision rule on its four comparisons.
#[inline]
pub fn ghost_rule(below_mid: bool, high_contrast: bool, below_f_star: bool, low_contrast: bool) -> bool {
    (below_mid && high_contrast) || (below_f_star && low_contrast)
}

#[inline]
pub fn classify(f: u8, g: f64, c: f64, t: GhostThresholds) -> bool {
    let f = f64::from(f);
    let c_star = f64::from(t.c_star);
    ghost_rule(f < g, c > c_star, f < f64::from(t.f_star), c <= c_star)
}

/// Sliding max/min over a line of `len` samples, window clamped to the line.
fn line_extrema(line: &[u8], half: usize, max: &mut [u8], min: &mut [u8]) {
    let len = line.len();
    for i in 0..len {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(len - 1);
        let span = &line[lo..=hi];
        max[i] = *span.iter().max().expect("non-empty span");
        min[i] = *span.iter().min().expect("non-empty span");
    }
}

/// Per-pixel max and min over the clamped window, computed separably.
///
/// Edge replication only repeats border samples, so clamping the window to
/// the image gives the same extrema.
fn window_extrema(img: &GrayImage, window: usize) -> (Vec<u8>, Vec<u8>) {
    let (w, h) = (img.width(), img.height());
    let half = window / 2;
    let mut row_max = vec![0u8; w * h];
    let mut row_min = vec![0u8; w * h];
    for y in 0..h {
        let range = y * w..(y + 1) * w;
        line_extrema(img.row(y), half, &mut row_max[range.clone()], &mut row_min[range]);
    }
    let mut max = vec![0u8; w * h];
    let mut min = vec![0u8; w * h];
    let mut col = vec![0u8; h];
    let mut col_out_max = vec![0u8; h];
    let mut col_out_min = vec![0u8; h];
    let mut scratch = vec![0u8; h];
    for x in 0..w {
        for y in 0..h {
            col[y] = row_max[y * w + x];
        }
        line_extrema(&col, half, &mut col_out_max, &mut scratch);
        for y in 0..h {
            col[y] = row_min[y * w + x];
        }
        line_extrema(&col, half, &mut scratch, &mut col_out_min);
        for y in 0..h {
            max[y * w + x] = col_out_max[y];
            min[y * w + x] = col_out_min[y];
        }
    }
    (max, min)
}

pub fn bernsen_maps(
    img: &GrayImage,
    window: usize,
    variant: ContrastKind,
) -> Result<BernsenMaps, BernsenError> {
    check_window(window)?;
    let (w, h) = (img.width(), img.height());
    let (max, min) = window_extrema(img, window);
    let g: Vec<f64> = max
        .iter()
        .zip(&min)
        .map(|(&hi, &lo)| (f64::from(hi) + f64::from(lo)) / 2.0)
        .collect();
    let c: Vec<f64> = match variant {
        ContrastKind::Range => max
            .iter()
            .zip(&min)
            .map(|(&hi, &lo)| f64::from(hi - lo))
            .collect(),
        ContrastKind::StdDev => window_stats_map(img, window)
            .into_iter()
            .map(|s| s.stddev)
            .collect(),
    };
    Ok(BernsenMaps {
        g: ThresholdMap::new(w, h, g).expect("sized from image"),
        c: ThresholdMap::new(w, h, c).expect("sized from image"),
        variant,
    })
}

fn thresholds_over(maps: &BernsenMaps, cell: &Cell) -> GhostThresholds {
    let c_hist = Histogram::from_quantized(cell.coords().map(|(x, y)| maps.c.get(x, y)));
    let g_hist = Histogram::from_quantized(cell.coords().map(|(x, y)| maps.g.get(x, y)));
    GhostThresholds {
        c_star: otsu_threshold(&c_hist).expect("region is non-empty").threshold,
        f_star: otsu_threshold(&g_hist).expect("region is non-empty").threshold,
    }
}

/// `c*` and `f*` from Otsu over the whole `c` and `g` maps.
pub fn ghost_thresholds_global(maps: &BernsenMaps) -> GhostThresholds {
    let whole = Cell {
        x0: 0,
        y0: 0,
        x1: maps.g.width() - 1,
        y1: maps.g.height() - 1,
    };
    thresholds_over(maps, &whole)
}

/// `c*` and `f*` per grid cell, row-major.
pub fn ghost_thresholds_local(
    maps: &BernsenMaps,
    grid: &WindowGrid,
) -> Result<Vec<GhostThresholds>, BernsenError> {
    grid.check_fits(maps.g.width(), maps.g.height())?;
    Ok(grid
        .cells()
        .iter()
        .map(|cell| thresholds_over(maps, cell))
        .collect())
}

fn classify_region(img: &GrayImage, maps: &BernsenMaps, cell: &Cell, t: GhostThresholds, bits: &mut [bool]) {
    for (x, y) in cell.coords() {
        bits[y * img.width() + x] = classify(img.get(x, y), maps.g.get(x, y), maps.c.get(x, y), t);
    }
}

/// Range contrast with one global `(c*, f*)`.
pub fn bernsen_original(
    img: &GrayImage,
    window: usize,
) -> Result<(BinaryImage, GhostThresholds), BernsenError> {
    let maps = bernsen_maps(img, window, ContrastKind::Range)?;
    let t = ghost_thresholds_global(&maps);
    Ok((apply_global(img, &maps, t), t))
}

/// Classifies every pixel with a single `(c*, f*)`, whatever the contrast kind.
pub fn apply_global(img: &GrayImage, maps: &BernsenMaps, t: GhostThresholds) -> BinaryImage {
    let bits = img
        .pixels()
        .iter()
        .zip(maps.g.values().iter().zip(maps.c.values()))
        .map(|(&f, (&g, &c))| classify(f, g, c, t))
        .collect();
    BinaryImage::from_bools(img.width(), img.height(), bits)
}

/// Standard-deviation contrast with `(c*, f*)` computed per grid cell.
pub fn bernsen_modified(
    img: &GrayImage,
    window: usize,
    grid: &WindowGrid,
) -> Result<(BinaryImage, Vec<GhostThresholds>), BernsenError> {
    let maps = bernsen_maps(img, window, ContrastKind::StdDev)?;
    let thresholds = ghost_thresholds_local(&maps, grid)?;
    let mut bits = vec![false; img.width() * img.height()];
    for (cell, &t) in grid.cells().iter().zip(&thresholds) {
        classify_region(img, &maps, cell, t, &mut bits);
    }
    Ok((BinaryImage::from_bools(img.width(), img.height(), bits), thresholds))
}

/// Either variant with its default geometry (3x3 grid for the modified one).
pub fn bernsen_binarize(
    img: &GrayImage,
    window: usize,
    variant: BernsenVariant,
) -> Result<BinaryImage, BernsenError> {
    match variant {
        BernsenVariant::Original => Ok(bernsen_original(img, window)?.0),
        BernsenVariant::Modified => {
            let (rows, cols) = MODIFIED_GRID;
            let grid = make_grid(img.width(), img.height(), rows, cols)?;
            Ok(bernsen_modified(img, window, &grid)?.0)
        }
    }
}
