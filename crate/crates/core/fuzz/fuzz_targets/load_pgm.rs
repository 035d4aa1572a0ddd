#![no_main]

use docbin::{load_pgm, save_pgm};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = load_pgm(data) {
        let again = load_pgm(&save_pgm(&img)).expect("saved PGM reloads");
        assert_eq!(again, img);
    }
});
