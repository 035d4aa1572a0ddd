mod common;

use common::{clamped_window, mean_std, oracle_threshold, random_image, text_page, Rng};
use docbin::bernsen::{
    apply_global, classify, ghost_rule, ghost_thresholds_global, ghost_thresholds_local,
};
use docbin::sauvola::window_stats_map;
use docbin::{
    bernsen_binarize, bernsen_maps, bernsen_modified, make_grid, BernsenVariant, ContrastKind,
    GhostThresholds, GrayImage,
};
use proptest::prelude::*;

/// Expected classification for every assignment of
/// (f < g, c > c*, f < f*, c <= c*), indexed by those bits MSB first.
const TRUTH_TABLE: [bool; 16] = [
    false, false, false, true, // 00xx: only the second clause can fire
    false, false, false, true, // 01xx
    false, false, false, true, // 10xx
    true, true, true, true,    // 11xx: first clause fires
];

#[test]
fn rule_truth_table() {
    for bits in 0..16u8 {
        let a = bits & 8 != 0;
        let b = bits & 4 != 0;
        let c = bits & 2 != 0;
        let d = bits & 1 != 0;
        assert_eq!(ghost_rule(a, b, c, d), TRUTH_TABLE[bits as usize], "{bits:04b}");
    }
}

#[test]
fn realizable_rows_through_pixel_values() {
    let t = GhostThresholds { c_star: 50, f_star: 100 };
    for below_mid in [false, true] {
        for high_contrast in [false, true] {
            for below_f_star in [false, true] {
                let f: u8 = if below_f_star { 90 } else { 110 };
                let g = if below_mid { f as f64 + 0.5 } else { f as f64 };
                let c = if high_contrast { 50.5 } else { 50.0 };
                let idx = (below_mid as usize) << 3
                    | (high_contrast as usize) << 2
                    | (below_f_star as usize) << 1
                    | (!high_contrast) as usize;
                assert_eq!(classify(f, g, c, t), TRUTH_TABLE[idx]);
            }
        }
    }
}

proptest! {
    #[test]
    fn maps_match_brute_force(w in 1usize..25, h in 1usize..25, win in 1usize..6, seed: u64) {
        let window = 2 * win + 1;
        let img = random_image(&mut Rng::new(seed), w, h);
        let range = bernsen_maps(&img, window, ContrastKind::Range).unwrap();
        let sd = bernsen_maps(&img, window, ContrastKind::StdDev).unwrap();
        for y in 0..h {
            for x in 0..w {
                let vals = clamped_window(&img, x, y, window);
                let hi = *vals.iter().max().unwrap() as f64;
                let lo = *vals.iter().min().unwrap() as f64;
                prop_assert_eq!(range.g.get(x, y), (hi + lo) / 2.0);
                prop_assert_eq!(range.c.get(x, y), hi - lo);
                prop_assert_eq!(sd.g.get(x, y), (hi + lo) / 2.0);
                let (_, std) = mean_std(&vals);
                prop_assert!((sd.c.get(x, y) - std).abs() < 1e-9);
                prop_assert!((0.0..=127.5).contains(&sd.c.get(x, y)));
            }
        }
    }

    #[test]
    fn stddev_contrast_is_sauvola_stddev(w in 1usize..30, h in 1usize..30, win in 1usize..8, seed: u64) {
        let window = 2 * win + 1;
        let img = random_image(&mut Rng::new(seed), w, h);
        let sd = bernsen_maps(&img, window, ContrastKind::StdDev).unwrap();
        for (c, s) in sd.c.values().iter().zip(window_stats_map(&img, window)) {
            prop_assert!((c - s.stddev).abs() < 1e-9);
        }
    }

    #[test]
    fn ghost_thresholds_match_independent_pipeline(w in 2usize..30, h in 2usize..30, seed: u64) {
        let img = random_image(&mut Rng::new(seed), w, h);
        for kind in [ContrastKind::Range, ContrastKind::StdDev] {
            let maps = bernsen_maps(&img, 5, kind).unwrap();
            let count = |vals: &[f64]| {
                let mut counts = [0u64; 256];
                for &v in vals {
                    let q = (v + 0.5).floor().max(0.0).min(255.0) as usize;
                    counts[q] += 1;
                }
                counts
            };
            let t = ghost_thresholds_global(&maps);
            prop_assert_eq!(t.c_star, oracle_threshold(&count(maps.c.values())));
            prop_assert_eq!(t.f_star, oracle_threshold(&count(maps.g.values())));
        }
    }

    #[test]
    fn modified_single_cell_is_global_stddev(w in 1usize..30, h in 1usize..30, seed: u64) {
        let img = random_image(&mut Rng::new(seed), w, h);
        let grid = make_grid(w, h, 1, 1).unwrap();
        let (bin, ts) = bernsen_modified(&img, 7, &grid).unwrap();
        let maps = bernsen_maps(&img, 7, ContrastKind::StdDev).unwrap();
        let t = ghost_thresholds_global(&maps);
        prop_assert_eq!(ts, vec![t]);
        prop_assert_eq!(bin, apply_global(&img, &maps, t));
    }
}

#[test]
fn modified_single_cell_hand_trace() {
    // Columns alternate 0 and 200: every clamped 3x3 window sees both values,
    // so g = 100 everywhere. Each window is 3/9 or 6/9 dark, and both give
    // a standard deviation of sqrt(2/9) * 200.
    let img = GrayImage::from_fn(12, 6, |x, _| if x % 2 == 0 { 0 } else { 200 }).unwrap();
    let maps = bernsen_maps(&img, 3, ContrastKind::StdDev).unwrap();
    assert!(maps.g.values().iter().all(|&g| g == 100.0));
    // Degenerate g histogram: f* = 100. Contrast levels round to 94.
    let expected_c = (2.0f64 / 9.0).sqrt() * 200.0;
    assert!(maps.c.values().iter().all(|&c| (c - expected_c).abs() < 1e-9));
    let grid = make_grid(12, 6, 1, 1).unwrap();
    let (bin, ts) = bernsen_modified(&img, 3, &grid).unwrap();
    assert_eq!(ts, vec![GhostThresholds { c_star: 94, f_star: 100 }]);
    // c (94.28) > c* (94), so the first clause decides: dark pixels (0 < 100) are ink.
    for y in 0..6 {
        for x in 0..12 {
            assert_eq!(bin.get(x, y), u8::from(img.get(x, y) == 0));
        }
    }
}

#[test]
fn local_thresholds_per_cell() {
    let img = random_image(&mut Rng::new(77), 30, 21);
    let maps = bernsen_maps(&img, 5, ContrastKind::StdDev).unwrap();
    let grid = make_grid(30, 21, 3, 3).unwrap();
    let ts = ghost_thresholds_local(&maps, &grid).unwrap();
    assert_eq!(ts.len(), 9);
    let (bin, ts2) = bernsen_modified(&img, 5, &grid).unwrap();
    assert_eq!(ts, ts2);
    for (cell, t) in grid.cells().iter().zip(&ts) {
        for (x, y) in cell.coords() {
            let expect = classify(img.get(x, y), maps.g.get(x, y), maps.c.get(x, y), *t);
            assert_eq!(bin.get(x, y), u8::from(expect));
        }
    }
}

#[test]
fn text_page_recovered_by_both_variants() {
    let (page, mask) = text_page(21, 180, 140);
    for variant in [BernsenVariant::Original, BernsenVariant::Modified] {
        let bin = bernsen_binarize(&page, 31, variant).unwrap();
        let agree = bin.agreement(&mask).unwrap();
        assert!(agree >= 0.99, "{variant:?}: {agree}");
    }
}
