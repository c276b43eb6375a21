//! The acceptance gate: one test per numbered criterion, each printing a
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; the same checks back the CLI `selftest` subcommand.

use ghg_core::selftest;

fn run(report: selftest::CriterionReport) {
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_01_group_laws() {
    run(selftest::criterion_1_group_laws(false));
}

#[test]
fn criterion_02_characters_sv() {
    run(selftest::criterion_2_characters_sv(false));
}

#[test]
fn criterion_03_fourier_duality() {
    run(selftest::criterion_3_fourier(false));
}

#[test]
fn criterion_04_clinometric_relation() {
    run(selftest::criterion_4_clinometric(false));
}

#[test]
fn criterion_05_automorphism_structure() {
    run(selftest::criterion_5_automorphisms(false));
}

#[test]
fn criterion_06_arithmetic_sl2() {
    run(selftest::criterion_6_arithmetic_sl2(false));
}

#[test]
fn criterion_07_base_case_eigenbasis() {
    run(selftest::criterion_7_eigenbasis(false));
}

#[test]
fn criterion_08_sic_reproduction() {
    run(selftest::criterion_8_sic_reproduction(false));
}

#[test]
fn criterion_09_weil_solver() {
    run(selftest::criterion_9_weil(false));
}

#[test]
fn criterion_10_even_base_case() {
    run(selftest::criterion_10_even_base_case(false));
}
