#![no_main]

use divisor_moments_cli::config::Config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = Config::parse(text) {
        assert!(cfg.validate().is_ok());
        assert!(cfg.oversample >= 4);
        assert!(cfg.eta > 0.0 && cfg.eta < 1.0);
    }
});
