#![no_main]

use boussinesq_core::spectral::{read_field_csv, write_field_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(state) = read_field_csv(text) {
            let again = read_field_csv(&write_field_csv(&state)).expect("written CSV reads back");
            assert_eq!(again, state);
        }
    }
});
