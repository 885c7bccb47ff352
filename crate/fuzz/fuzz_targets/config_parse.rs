#![no_main]

use bq_harness::config::{parse_config, parse_entries};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let entries = parse_entries(text);
        if let Ok(cfg) = parse_config(text) {
            assert!(entries.is_ok());
            assert!(cfg.times.windows(2).all(|w| w[1] > w[0]));
            assert!(cfg.compare.y_max > 0.0);
        }
    }
});
