//! Fixtures and independent oracles shared by the integration tests.
//!
//! Nothing here calls into the code path it is used to check.

#![allow(dead_code)]

use docbin::{BinaryImage, GrayImage};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.0.next_u64() % (hi - lo + 1)
    }

    pub fn byte(&mut self) -> u8 {
        self.0.next_u64() as u8
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn random_image(rng: &mut Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.byte()).unwrap()
}

/// Black glyph strokes (0) on a white page (255), set in lines that fill the
/// page down to a small margin so that every 3x3 grid cell holds ink.
///
/// Returns the page and its ground-truth ink mask.
pub fn text_page(seed: u64, w: usize, h: usize) -> (GrayImage, BinaryImage) {
    let mut rng = Rng::new(seed);
    let mut px = vec![255u8; w * h];
    let margin = 4;
    let line_pitch = 16;
    let mut top = margin;
    while top + 12 < h - margin {
        let mut left = margin;
        loop {
            let gw = rng.range(5, 9) as usize;
            if left + gw >= w - margin {
                break;
            }
            let gh = 11;
            let t = rng.range(1, 2) as usize;
            // Each glyph: left stem, plus an optional top bar, middle bar, right stem.
            let parts = rng.range(1, 15);
            let mut fill = |x0: usize, y0: usize, x1: usize, y1: usize| {
                for y in y0..y1 {
                    for x in x0..x1 {
                        px[y * w + x] = 0;
                    }
                }
            };
            fill(left, top, left + t, top + gh);
            if parts & 1 != 0 {
                fill(left, top, left + gw, top + t);
            }
            if parts & 2 != 0 {
                fill(left, top + gh / 2, left + gw, top + gh / 2 + t);
            }
            if parts & 4 != 0 {
                fill(left + gw - t, top, left + gw, top + gh);
            }
            if parts & 8 != 0 {
                fill(left, top + gh - t, left + gw, top + gh);
            }
            left += gw + rng.range(2, 4) as usize;
            if rng.range(0, 7) == 0 {
                left += 6; // word gap
            }
        }
        top += line_pitch;
    }
    let mask: Vec<u8> = px.iter().map(|&p| u8::from(p == 0)).collect();
    (
        GrayImage::new(w, h, px).unwrap(),
        BinaryImage::new(w, h, mask).unwrap(),
    )
}

/// Exact Otsu argmax over integer counts using rational arithmetic.
///
/// `w0 * w1 * (mu1 - mu0)^2 = (W0*T - S0*N)^2 / (N^2 * W0 * W1)`, so splits
/// are compared by cross-multiplying `(W0*T - S0*N)^2 / (W0*W1)`. Strictly
/// greater wins, so ties go to the smallest k. Returns `None` when no split
/// has both classes occupied.
///
/// Requires `N <= 2^17` and counts small enough that the products fit u128.
pub fn brute_force_otsu_exact(counts: &[u64; 256]) -> Option<u8> {
    let n: i128 = counts.iter().map(|&c| c as i128).sum();
    let t: i128 = counts.iter().enumerate().map(|(i, &c)| i as i128 * c as i128).sum();
    let mut best: Option<(usize, u128, u128)> = None;
    for k in 0..256 {
        let w0: i128 = counts[..=k].iter().map(|&c| c as i128).sum();
        let s0: i128 = counts[..=k].iter().enumerate().map(|(i, &c)| i as i128 * c as i128).sum();
        let w1 = n - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let diff = (w0 * t - s0 * n).unsigned_abs();
        let num = diff * diff;
        let den = (w0 * w1) as u128;
        let better = match best {
            None => true,
            Some((_, bn, bd)) => num * bd > bn * den,
        };
        if better {
            best = Some((k, num, den));
        }
    }
    best.filter(|&(_, num, _)| num > 0).map(|(k, _, _)| k as u8)
}

/// Otsu on integer counts with the single-level rule: threshold at that level.
pub fn oracle_threshold(counts: &[u64; 256]) -> u8 {
    brute_force_otsu_exact(counts)
        .unwrap_or_else(|| counts.iter().position(|&c| c > 0).expect("non-empty") as u8)
}

/// Random histogram with `support` distinct occupied levels, counts in 1..=500.
pub fn random_counts(rng: &mut Rng, support: usize) -> [u64; 256] {
    let mut levels: Vec<usize> = (0..256).collect();
    for i in 0..support {
        let j = i + rng.range(0, (255 - i) as u64) as usize;
        levels.swap(i, j);
    }
    let mut counts = [0u64; 256];
    for &l in &levels[..support] {
        counts[l] = rng.range(1, 500);
    }
    counts
}

/// Clamped-window pixel values around `(x, y)`, gathered one by one.
pub fn clamped_window(img: &GrayImage, x: usize, y: usize, window: usize) -> Vec<u8> {
    let half = (window / 2) as isize;
    let mut out = Vec::with_capacity(window * window);
    for dy in -half..=half {
        for dx in -half..=half {
            let cx = (x as isize + dx).max(0).min(img.width() as isize - 1) as usize;
            let cy = (y as isize + dy).max(0).min(img.height() as isize - 1) as usize;
            out.push(img.pixels()[cy * img.width() + cx]);
        }
    }
    out
}

/// Two-pass mean and population standard deviation in floating point.
pub fn mean_std(values: &[u8]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
