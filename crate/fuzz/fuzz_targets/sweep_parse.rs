#![no_main]

use divisor_moments_cli::config::parse_sweep;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ts) = parse_sweep(text) {
        assert!(!ts.is_empty() && ts.len() <= 64);
        assert!(ts.iter().all(|t| t.is_finite() && *t > 1.0));
    }
});
