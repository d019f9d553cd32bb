#![no_main]

use clwe_core::instance::{decode_dataset, encode_dataset};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(ds) = decode_dataset(data) {
        let bytes = encode_dataset(&ds);
        let again = decode_dataset(&bytes).expect("own encoding decodes");
        assert_eq!(encode_dataset(&again), bytes);
    }
});
