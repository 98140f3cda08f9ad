#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // Parsing must never panic; errors are the expected outcome for
        // most inputs. When a config loads, building its packet and time
        // grid must be panic-free too.
        if let Ok(config) = decohere::cli::ScenarioConfig::load(text, &[]) {
            let _ = config.build_packet();
            let _ = config.tau_grid();
        }
    }
});
