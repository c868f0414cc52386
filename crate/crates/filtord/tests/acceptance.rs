//! The acceptance suite: one test per criterion, each printing a pass/fail
//! line. `cargo test --test acceptance -- --nocapture` shows the full table;
//! the `filtord verify` subcommand runs the same checks.

use filtord::verify;

fn run_one(id: u32) {
    let results = verify::run(Some(id), false);
    assert_eq!(results.len(), 1, "criterion {id} must exist");
    let r = &results[0];
    assert!(r.passed, "criterion {id} ({}) failed: {}", r.name, r.details);
}

#[test]
fn criterion_01_quadratic_masses_over_q2() {
    run_one(1);
}

#[test]
fn criterion_02_mass_formula_equality() {
    run_one(2);
}

#[test]
fn criterion_03_maximal_mass_law() {
    run_one(3);
}

#[test]
fn criterion_04_starred_decomposition_identity() {
    run_one(4);
}

#[test]
fn criterion_05_eisenstein_mass_formula_statistical() {
    run_one(5);
}

#[test]
fn criterion_06_procedure_vs_oracle() {
    run_one(6);
}

#[test]
fn criterion_07_ramification_polygon_two_ways() {
    run_one(7);
}

#[test]
fn criterion_08_negative_control() {
    run_one(8);
}

#[test]
fn criterion_09_compatibility_equals_adequacy() {
    run_one(9);
}

#[test]
fn criterion_10_character_brute_force_oracle() {
    run_one(10);
}

#[test]
fn criterion_11_filt_ord_oracle() {
    run_one(11);
}

#[test]
fn criterion_12_realization_round_trip() {
    run_one(12);
}

#[test]
fn criterion_13_tame_transform() {
    run_one(13);
}
