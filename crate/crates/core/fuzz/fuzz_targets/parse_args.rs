#![no_main]

use docbin::cli::{GridShape, Method};
use docbin::degrade::DegradeOp;
use libfuzzer_sys::fuzz_target;

// Grid shapes, method names and degradation ops.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = s.parse::<GridShape>();
    if let Ok(m) = s.parse::<Method>() {
        assert_eq!(m.name().parse::<Method>().ok(), Some(m));
    }
    if let Ok(op) = s.parse::<DegradeOp>() {
        assert_eq!(op.to_string().parse::<DegradeOp>().ok(), Some(op));
    }
});
