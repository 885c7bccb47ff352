#![no_main]

use bq_harness::expr::parse_expr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(e) = parse_expr(text) {
            let _ = e.eval(0.5);
        }
    }
});
