mod common;

use common::{brute_force_otsu_exact, oracle_threshold, random_counts, text_page, Rng};
use docbin::otsu::{binarize_otsu_local, local_otsu_thresholds};
use docbin::{binarize_global, histogram, make_grid, otsu_threshold, GrayImage, Histogram};
use proptest::prelude::*;

#[test]
fn oracle_agrees_on_hand_cases() {
    let mut counts = [0u64; 256];
    counts[50] = 3;
    counts[200] = 3;
    assert_eq!(brute_force_otsu_exact(&counts), Some(50));
    let mut single = [0u64; 256];
    single[100] = 9;
    assert_eq!(brute_force_otsu_exact(&single), None);
    assert_eq!(oracle_threshold(&single), 100);
}

#[test]
fn matches_exact_brute_force() {
    let mut rng = Rng::new(11);
    for _ in 0..500 {
        let support = rng.range(1, 256) as usize;
        let counts = random_counts(&mut rng, support);
        let r = otsu_threshold(&Histogram::from_counts(&counts)).unwrap();
        assert_eq!(r.threshold, oracle_threshold(&counts), "support {support}");
    }
}

#[test]
fn symmetric_histograms_break_ties_low() {
    // Mirror-symmetric histograms produce exact ties between mirrored splits.
    let mut rng = Rng::new(12);
    for _ in 0..200 {
        let mut counts = [0u64; 256];
        for _ in 0..rng.range(1, 6) {
            let l = rng.range(0, 127) as usize;
            let c = rng.range(1, 50);
            counts[l] += c;
            counts[255 - l] += c;
        }
        let r = otsu_threshold(&Histogram::from_counts(&counts)).unwrap();
        assert_eq!(r.threshold, oracle_threshold(&counts));
    }
}

proptest! {
    #[test]
    fn scale_invariance(seed: u64, factor in 0.001f64..1000.0) {
        let mut rng = Rng::new(seed);
        let support = rng.range(1, 256) as usize;
        let h = Histogram::from_counts(&random_counts(&mut rng, support));
        let a = otsu_threshold(&h).unwrap();
        let b = otsu_threshold(&h.scaled(factor).unwrap()).unwrap();
        prop_assert_eq!(a.threshold, b.threshold);
        prop_assert!((a.eta - b.eta).abs() < 1e-9);
    }

    #[test]
    fn eta_in_unit_interval(seed: u64) {
        let mut rng = Rng::new(seed);
        let support = rng.range(1, 256) as usize;
        let r = otsu_threshold(&Histogram::from_counts(&random_counts(&mut rng, support))).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.eta));
        prop_assert!(r.sigma_b <= r.sigma_t * (1.0 + 1e-12));
        if r.sigma_t > 0.0 {
            prop_assert!((r.eta - r.sigma_b / r.sigma_t).abs() < 1e-12);
        }
    }

    #[test]
    fn two_tone_recovery(w in 2usize..50, h in 1usize..50, lo in 0u8..128, hi in 128u8..=255, seed: u64) {
        let mut rng = Rng::new(seed);
        // Both tones present: pixel (0,0) is dark, pixel (1,0) is light.
        let img = GrayImage::from_fn(w, h, |x, y| match (x, y) {
            (0, 0) => lo,
            (1, 0) => hi,
            _ if rng.range(0, 1) == 0 => lo,
            _ => hi,
        })
        .unwrap();
        let t = otsu_threshold(&histogram(&img)).unwrap().threshold;
        let bin = binarize_global(&img, t);
        for (p, b) in img.pixels().iter().zip(bin.pixels()) {
            prop_assert_eq!(*b, u8::from(*p == lo));
        }
    }

    #[test]
    fn grid_tiles_image(w in 1usize..60, h in 1usize..60, rows in 1usize..8, cols in 1usize..8) {
        prop_assume!(rows <= h && cols <= w);
        let grid = make_grid(w, h, rows, cols).unwrap();
        let mut hits = vec![0u32; w * h];
        for cell in grid.cells() {
            for (x, y) in cell.coords() {
                hits[y * w + x] += 1;
            }
        }
        prop_assert!(hits.iter().all(|&n| n == 1));
        let widths: Vec<usize> = grid.cells()[..cols].iter().map(|c| c.width()).collect();
        let heights: Vec<usize> = grid.cells().iter().step_by(cols).map(|c| c.height()).collect();
        prop_assert!(widths.iter().max().unwrap() - widths.iter().min().unwrap() <= cols);
        prop_assert!(widths[..cols - 1].iter().all(|&cw| cw == w / cols));
        prop_assert!(heights[..rows - 1].iter().all(|&ch| ch == h / rows));
    }

    #[test]
    fn single_cell_grid_is_global(w in 1usize..40, h in 1usize..40, seed: u64) {
        let img = common::random_image(&mut Rng::new(seed), w, h);
        let grid = make_grid(w, h, 1, 1).unwrap();
        let t = otsu_threshold(&histogram(&img)).unwrap().threshold;
        prop_assert_eq!(binarize_otsu_local(&img, &grid).unwrap(), binarize_global(&img, t));
    }
}

#[test]
fn local_thresholds_match_per_cell_oracle() {
    let mut rng = Rng::new(5);
    let img = common::random_image(&mut rng, 37, 23);
    let grid = make_grid(37, 23, 3, 3).unwrap();
    let ts = local_otsu_thresholds(&img, &grid).unwrap();
    let bin = binarize_otsu_local(&img, &grid).unwrap();
    for (cell, t) in grid.cells().iter().zip(&ts) {
        let mut counts = [0u64; 256];
        for (x, y) in cell.coords() {
            counts[img.get(x, y) as usize] += 1;
        }
        assert_eq!(t.threshold, oracle_threshold(&counts));
        for (x, y) in cell.coords() {
            assert_eq!(bin.get(x, y), u8::from(img.get(x, y) <= t.threshold));
        }
    }
}

#[test]
fn text_page_every_cell_has_ink() {
    let (page, mask) = text_page(3, 200, 150);
    let grid = make_grid(200, 150, 3, 3).unwrap();
    for cell in grid.cells() {
        assert!(cell.coords().any(|(x, y)| mask.get(x, y) == 1));
        assert!(cell.coords().any(|(x, y)| mask.get(x, y) == 0));
    }
    assert_eq!(binarize_otsu_local(&page, &grid).unwrap(), mask);
}
