//! The `"a,b,c"` coordinate parser against a fixed descriptor.

#![no_main]

use ghg_core::ghg::GhgDescriptor;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

fn descriptor() -> &'static GhgDescriptor {
    static DESC: OnceLock<GhgDescriptor> = OnceLock::new();
    DESC.get_or_init(|| GhgDescriptor::base_case(6).expect("valid"))
}

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    let _ = ghg_core::formats::element_from_str(descriptor(), input);
});
