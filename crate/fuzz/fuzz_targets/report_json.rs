#![no_main]

use clwe_core::harness::VerificationReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = VerificationReport::from_json(text) {
        let again = VerificationReport::from_json(&r.to_json()).expect("own output parses");
        assert_eq!(again, r);
    }
});
