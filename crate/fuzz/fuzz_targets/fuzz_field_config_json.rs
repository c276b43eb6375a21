//! Field/ideal configuration parsing builds exact lattices from untrusted
//! polynomial and generator data; none of it may panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    let _ = ghg_core::formats::field_config_from_json(input);
});
