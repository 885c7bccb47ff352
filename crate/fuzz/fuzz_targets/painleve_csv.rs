#![no_main]

use boussinesq_core::painleve::{read_painleve_csv, write_painleve_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(sol) = read_painleve_csv(text) {
            let again = read_painleve_csv(&write_painleve_csv(&sol)).expect("written CSV reads back");
            assert_eq!(again.y(), sol.y());
            assert_eq!(again.p(), sol.p());
            assert_eq!(again.dp(), sol.dp());
        }
    }
});
