#![no_main]

use clwe_core::instance::{decode_secret, encode_secret};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((manifest, w)) = decode_secret(data) {
        let bytes = encode_secret(&manifest, &w);
        let (m2, w2) = decode_secret(&bytes).expect("own encoding decodes");
        assert_eq!(encode_secret(&m2, &w2), bytes);
    }
});
