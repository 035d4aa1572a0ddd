//! Document image binarization.
//!
//! Seven thresholding methods over 8-bit grayscale rasters:
//!
//! - global Otsu and grid-local Otsu ([`otsu`])
//! - Sauvola, as a naive per-pixel scan and an incremental sliding-window
//!   variant that produces bit-identical output ([`sauvola`])
//! - Bernsen with ghost suppression, using either range or standard-deviation
//!   contrast ([`bernsen`])
//! - co-occurrence matrix projection followed by global Otsu ([`cooccur`])
//!
//! plus a synthetic degradation pipeline ([`degrade`]), a naive-vs-fast
//! benchmark ([`bench`]) and PGM/PBM codecs ([`pnm`]).
//!
//! Polarity is fixed across the crate: a binary pixel is `1` (foreground, ink)
//! when its gray value is less than or equal to the threshold and `0`
//! (background, white) when it is greater.

pub mod bench;
pub mod bernsen;
pub mod cli;
pub mod cooccur;
pub mod degrade;
pub mod histogram;
pub mod image;
pub mod otsu;
pub mod pnm;
pub mod sauvola;

pub use crate::bernsen::{
    bernsen_binarize, bernsen_maps, bernsen_modified, bernsen_original, BernsenMaps,
    BernsenVariant, ContrastKind, GhostThresholds,
};
pub use crate::cooccur::{binarize_cooccurrence, cooccurrence_matrix, CooccurrenceMatrix, Direction};
pub use crate::histogram::{histogram, Histogram};
pub use crate::image::{BinaryImage, GrayImage, ImageError, ThresholdMap};
pub use crate::otsu::{
    binarize_global, binarize_otsu_local, make_grid, otsu_threshold, OtsuError, OtsuResult,
    WindowGrid,
};
pub use crate::pnm::{load_pbm, load_pgm, save_pbm, save_pgm, PnmError};
pub use crate::sauvola::{
    binarize_sauvola_fast, binarize_sauvola_naive, sauvola_threshold, window_stats,
    SauvolaParams, WindowStats,
};
