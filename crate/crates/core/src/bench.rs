//! Wall-clock comparison of naive and sliding-window Sauvola.

use crate::image::GrayImage;
use crate::sauvola::{binarize_sauvola_fast, binarize_sauvola_naive, SauvolaError, SauvolaParams};
use std::fmt::Write as _;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error(transparent)]
    Params(#[from] SauvolaError),
    #[error("fast and naive Sauvola disagree at window {0}")]
    NotExact(usize),
    #[error("at least one repetition is required")]
    NoRepetitions,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub window: usize,
    pub naive_s: f64,
    pub fast_s: f64,
    pub naive_pixels_per_s: f64,
    pub fast_pixels_per_s: f64,
    /// `naive_s / fast_s`.
    pub speedup: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "window,naive_s,fast_s,speedup,exact";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{:.3},{}",
                r.window, r.naive_s, r.fast_s, r.speedup, r.exact
            );
        }
        out
    }
}

fn min_time<T>(reps: usize, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut best = Duration::MAX;
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let out = f();
        best = best.min(start.elapsed());
        last = Some(out);
    }
    (best, last.expect("reps > 0"))
}

/// Times both variants at each window, keeping the fastest of `reps` runs.
///
/// Fails with [`BenchError::NotExact`] as soon as a window produces different
/// outputs, so a returned report never contains an inexact row.
pub fn run_bench(img: &GrayImage, windows: &[usize], reps: usize) -> Result<BenchReport, BenchError> {
    if reps == 0 {
        return Err(BenchError::NoRepetitions);
    }
    let params: Vec<SauvolaParams> = windows
        .iter()
        .map(|&w| SauvolaParams::with_window(w))
        .collect::<Result<_, _>>()?;
    let pixels = (img.width() * img.height()) as f64;
    let mut rows = Vec::with_capacity(windows.len());
    for p in params {
        let (naive_t, (naive_bin, naive_map)) = min_time(reps, || binarize_sauvola_naive(img, p));
        let (fast_t, (fast_bin, fast_map)) = min_time(reps, || binarize_sauvola_fast(img, p));
        if naive_bin != fast_bin || !naive_map.bit_eq(&fast_map) {
            return Err(BenchError::NotExact(p.window()));
        }
        // Clamp to a nanosecond so tiny images still give finite ratios.
        let naive_s = naive_t.as_secs_f64().max(1e-9);
        let fast_s = fast_t.as_secs_f64().max(1e-9);
        rows.push(BenchRow {
            window: p.window(),
            naive_s,
            fast_s,
            naive_pixels_per_s: pixels / naive_s,
            fast_pixels_per_s: pixels / fast_s,
            speedup: naive_s / fast_s,
            exact: true,
        });
    }
    Ok(BenchReport { rows })
}
