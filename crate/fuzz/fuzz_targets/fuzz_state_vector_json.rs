//! State-vector JSON parsing and domain binding must never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    let _ = ghg_core::formats::state_vector_parts_from_json(input);
    let domain = ghg_core::abelian::FinAbGroup::cyclic(5);
    if let Ok(v) = ghg_core::formats::state_vector_from_json(input, &domain) {
        // bound vectors are finite, so the line constructor cannot panic
        let _ = ghg_core::bouquet::Line::new(&v);
    }
});
