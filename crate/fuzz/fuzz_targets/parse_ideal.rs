#![no_main]

use libfuzzer_sys::fuzz_target;

// Both accepted input forms go through one entry point: the compact text
// grammar and the JSON object form. Parsing must never panic; accepted
// ideals must satisfy the minimal-generator invariants.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(ideal) = sdepth::ideal::parse_ideal(text) {
            let gens = ideal.generators();
            for a in gens {
                assert_eq!(a.len(), ideal.ambient());
                assert!(!a.is_zero());
                for b in gens {
                    assert!(a == b || !a.divides(b));
                }
            }
        }
    }
});
