//! Targets/partition files drive the search; parsing, partition resolution
//! and feasibility validation must never panic.

#![no_main]

use ghg_core::ghg::GhgDescriptor;
use ghg_core::schrodinger::RepConfig;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

fn descriptor() -> &'static GhgDescriptor {
    static DESC: OnceLock<GhgDescriptor> = OnceLock::new();
    DESC.get_or_init(|| GhgDescriptor::base_case(3).expect("valid"))
}

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    let Ok(dto) = ghg_core::formats::targets_from_json(input) else { return };
    let desc = descriptor();
    let Ok(partition) = dto.partition.resolve(desc) else { return };
    let Ok(cfg) = RepConfig::standard(desc.clone()) else { return };
    let _ = ghg_core::search::SearchProblem::new(cfg, partition, dto.targets, 1, 1, 1e-16);
});
