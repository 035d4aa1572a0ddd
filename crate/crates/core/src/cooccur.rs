//! Co-occurrence matrix thresholding.
//!
//! Pair counts at spacing `d` are taken rightward (0°) and downward (90°),
//! averaged, and projected onto a gray-level histogram by sending cell
//! `(i, j)` to bin `ceil((i + j) / 2)`. Global Otsu on that histogram gives
//! the threshold for the whole image.
//!
//! Counts stay raw; Otsu normalizes internally.

use crate::histogram::{Histogram, LEVELS};
use crate::image::{BinaryImage, GrayImage};
use crate::otsu::{binarize_global, otsu_threshold, OtsuError, OtsuResult};
use thiserror::Error;

pub const DEFAULT_SPACING: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CooccurError {
    #[error("spacing must be at least 1")]
    ZeroSpacing,
    #[error("image extent {extent} along {direction:?} leaves no pairs at spacing {d}")]
    TooSmall {
        direction: Direction,
        extent: usize,
        d: usize,
    },
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Otsu(#[from] OtsuError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Source `(x, y)`, destination `(x + d, y)`.
    Deg0,
    /// Source `(x, y)`, destination `(x, y + d)`.
    Deg90,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    size: usize,
    cells: Vec<f64>,
    mass: f64,
    d: usize,
    /// `None` once two directions have been averaged.
    direction: Option<Direction>,
}

impl CooccurrenceMatrix {
    /// Builds a matrix from row-major cells; `None` on a size mismatch or a negative cell.
    pub fn from_cells(
        size: usize,
        cells: Vec<f64>,
        d: usize,
        direction: Option<Direction>,
    ) -> Option<Self> {
        if size == 0 || size > LEVELS || cells.len() != size * size {
            return None;
        }
        if cells.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return None;
        }
        let mass = cells.iter().sum();
        Some(CooccurrenceMatrix {
            size,
            cells,
            mass,
            d,
            direction,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spacing(&self) -> usize {
        self.d
    }

    pub fn direction(&self) -> Option<Direction> {
        self.direction
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.size + j]
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }
}

pub fn cooccurrence_matrix(
    img: &GrayImage,
    d: usize,
    direction: Direction,
) -> Result<CooccurrenceMatrix, CooccurError> {
    if d == 0 {
        return Err(CooccurError::ZeroSpacing);
    }
    let (w, h) = (img.width(), img.height());
    let extent = match direction {
        Direction::Deg0 => w,
        Direction::Deg90 => h,
    };
    if extent <= d {
        return Err(CooccurError::TooSmall { direction, extent, d });
    }
    let mut counts = vec![0u64; LEVELS * LEVELS];
    let mut pairs = 0u64;
    match direction {
        Direction::Deg0 => {
            for y in 0..h {
                let row = img.row(y);
                for (&a, &b) in row.iter().zip(&row[d..]) {
                    counts[a as usize * LEVELS + b as usize] += 1;
                }
                pairs += (w - d) as u64;
            }
        }
        Direction::Deg90 => {
            for y in 0..h - d {
                for (&a, &b) in img.row(y).iter().zip(img.row(y + d)) {
                    counts[a as usize * LEVELS + b as usize] += 1;
                }
                pairs += w as u64;
            }
        }
    }
    Ok(CooccurrenceMatrix {
        size: LEVELS,
        cells: counts.into_iter().map(|c| c as f64).collect(),
        mass: pairs as f64,
        d,
        direction: Some(direction),
    })
}

/// Cellwise mean of two matrices.
pub fn average_matrices(
    a: &CooccurrenceMatrix,
    b: &CooccurrenceMatrix,
) -> Result<CooccurrenceMatrix, CooccurError> {
    if a.size != b.size {
        return Err(CooccurError::SizeMismatch(a.size, b.size));
    }
    let cells = a
        .cells
        .iter()
        .zip(&b.cells)
        .map(|(x, y)| (x + y) / 2.0)
        .collect();
    Ok(CooccurrenceMatrix {
        size: a.size,
        cells,
        mass: (a.mass + b.mass) / 2.0,
        d: a.d,
        direction: if a.direction == b.direction { a.direction } else { None },
    })
}

/// Sums each cell `(i, j)` into bin `ceil((i + j) / 2)`.
pub fn diagonal_projection_histogram(p: &CooccurrenceMatrix) -> Histogram {
    let mut bins = [0.0; LEVELS];
    for (i, row) in p.cells.chunks_exact(p.size).enumerate() {
        for (j, &v) in row.iter().enumerate() {
            bins[(i + j + 1) / 2] += v;
        }
    }
    Histogram::from_bins(bins).expect("matrix cells are nonnegative")
}

/// The co-occurrence threshold of `img` at spacing `d`.
pub fn cooccurrence_threshold(img: &GrayImage, d: usize) -> Result<OtsuResult, CooccurError> {
    let horizontal = cooccurrence_matrix(img, d, Direction::Deg0)?;
    let vertical = cooccurrence_matrix(img, d, Direction::Deg90)?;
    let averaged = average_matrices(&horizontal, &vertical)?;
    Ok(otsu_threshold(&diagonal_projection_histogram(&averaged))?)
}

pub fn binarize_cooccurrence(img: &GrayImage, d: usize) -> Result<BinaryImage, CooccurError> {
    let t = cooccurrence_threshold(img, d)?;
    Ok(binarize_global(img, t.threshold))
}
