//! Offline solvers, reductions and model identities against independent oracles.

mod common;

fn assert_check(check: common::Check) {
    if let Err(detail) = check {
        panic!("{detail}");
    }
}

#[test]
fn offline_solvers_match_brute_force() {
    assert_check(common::offline_exactness(20));
}

#[test]
fn approximation_stays_within_bound() {
    assert_check(common::approximation(15));
}

#[test]
fn reductions_preserve_cost() {
    assert_check(common::reductions(40));
}

#[test]
fn model_hitting_costs_agree_and_are_convex() {
    assert_check(common::model_identities(200));
}

#[test]
fn fractional_optimum_is_close_to_integral_for_many_servers() {
    assert_check(common::fractional_integral_gap());
}
