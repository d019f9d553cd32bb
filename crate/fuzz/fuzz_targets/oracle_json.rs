#![no_main]

use clwe_core::oracle::OraclePtf;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(o) = OraclePtf::from_json(text) {
        let again = OraclePtf::from_json(&o.to_json()).expect("own output parses");
        assert_eq!(again, o);
        let _ = o.classify_projection(0.0);
    }
});
