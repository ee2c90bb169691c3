#![no_main]

use libfuzzer_sys::fuzz_target;
use qdistinguish::matcore::Tolerances;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = qdistinguish::cli::parse_povm_file(text, 64, Tolerances::default());
    }
});
