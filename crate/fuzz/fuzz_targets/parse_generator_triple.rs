#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(triple) = sdepth::constructions::parse_generator_triple(text) {
            // accepted triples must stay inside their declared ambient
            let n = triple.ambient();
            for g in triple.generator_masks() {
                assert!(n == 64 || g >> n == 0);
            }
        }
    }
});
