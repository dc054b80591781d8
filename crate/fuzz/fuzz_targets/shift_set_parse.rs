#![no_main]

use divisor_moments::arithmetic::ShiftSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = text.parse::<ShiftSet>() {
        assert!(!set.is_empty());
        assert!(set.shifts().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        // Display output parses back to the same set.
        let again: ShiftSet = set.to_string().parse().expect("round trip");
        assert_eq!(again.shifts(), set.shifts());
    }
});
