#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(file) = sdepth::witness::parse_witness(text) {
            // structural guarantees of an accepted witness
            assert_eq!(file.g.len(), file.n);
            for iv in &file.intervals {
                assert_eq!(iv.lo.len(), file.n);
                assert_eq!(iv.hi.len(), file.n);
                assert!(iv.lo.iter().zip(&iv.hi).all(|(a, b)| a <= b));
                assert!(iv.hi.iter().zip(&file.g).all(|(h, g)| h <= g));
            }
        }
    }
});
