#![no_main]

use libfuzzer_sys::fuzz_target;

// The rational parser must never panic, must reject non-positive
// denominators, and accepted values must round-trip through the canonical
// rendering.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(value) = fairaudit::parse_rational(text) else { return };
    let rendered = fairaudit::ratio_string(&value);
    let reparsed = fairaudit::parse_rational(&rendered).expect("canonical form reparses");
    assert_eq!(value, reparsed);
});
