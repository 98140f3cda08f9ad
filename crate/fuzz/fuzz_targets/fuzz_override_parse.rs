#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // Overrides share the key table with the file parser but arrive
        // through a separate splitting path.
        let overrides: Vec<String> = text.lines().map(str::to_owned).collect();
        let _ = decohere::cli::ScenarioConfig::load("", &overrides);
    }
});
