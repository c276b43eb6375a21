//! Descriptor JSON parsing must never panic, and accepted descriptors must
//! survive a serialise/parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    if let Ok(desc) = ghg_core::formats::descriptor_from_json(input) {
        let json = ghg_core::formats::descriptor_to_json(&desc).expect("accepted descriptors serialise");
        let back = ghg_core::formats::descriptor_from_json(&json).expect("own output parses");
        assert_eq!(back, desc);
    }
});
