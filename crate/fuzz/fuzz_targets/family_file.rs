#![no_main]

use libfuzzer_sys::fuzz_target;
use qdistinguish::cli::RunConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let cfg = RunConfig::new(0, 1e-9, 64).unwrap();
        let _ = qdistinguish::cli::parse_family_file(text, &cfg);
    }
});
