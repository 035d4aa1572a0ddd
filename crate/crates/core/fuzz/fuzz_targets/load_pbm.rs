#![no_main]

use docbin::{load_pbm, save_pbm};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(bin) = load_pbm(data) {
        let again = load_pbm(&save_pbm(&bin)).expect("saved PBM reloads");
        assert_eq!(again, bin);
    }
});
