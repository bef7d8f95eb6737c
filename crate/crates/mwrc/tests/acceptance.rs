//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1` to
//! see the lines in order.

use mwrc::verify::{find, CheckOutcome};

fn criterion(id: u8) -> CheckOutcome {
    let check = find(&id.to_string()).expect("every criterion has a check");
    let outcome = check.run();
    println!("criterion {id:>2}: {}", outcome.line());
    outcome
}

fn assert_criterion(id: u8) {
    let outcome = criterion(id);
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_df_outer_bound_threshold() {
    assert_criterion(1);
}

#[test]
fn criterion_02_df_nnc_crossing() {
    assert_criterion(2);
}

#[test]
fn criterion_03_high_snr_gaps() {
    assert_criterion(3);
}

#[test]
fn criterion_04_af_ian_gap() {
    assert_criterion(4);
}

#[test]
fn criterion_05_degrees_of_freedom() {
    assert_criterion(5);
}

#[test]
fn criterion_06_rate_ordering() {
    assert_criterion(6);
}

#[test]
fn criterion_07_oracle_equivalence() {
    assert_criterion(7);
}

#[test]
fn criterion_08_solver_agreement() {
    assert_criterion(8);
}

#[test]
fn criterion_09_dinkelbach_analytic() {
    assert_criterion(9);
}

#[test]
fn criterion_10_game_suite() {
    assert_criterion(10);
}

#[test]
fn criterion_11_figure_claims() {
    assert_criterion(11);
}
