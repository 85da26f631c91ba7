//! Competitive ratios, numerical routines and randomized behaviour of the online algorithms.

mod common;

fn assert_check(check: common::Check) {
    if let Err(detail) = check {
        panic!("{detail}");
    }
}

#[test]
fn online_algorithms_respect_competitive_ratios() {
    assert_check(common::competitive_ratios(12));
}

#[test]
fn numerical_routines_are_accurate() {
    assert_check(common::numerics());
}

#[test]
fn prediction_windows_control_the_cost() {
    assert_check(common::prediction_control());
}

#[test]
fn seeded_runs_are_reproducible() {
    assert_check(common::determinism(20_000));
}
