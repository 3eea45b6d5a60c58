//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line. Run with `cargo test -p sdepth --test acceptance -- --nocapture`
//! to see the lines for passing criteria too.

use sdepth::acceptance::run_criterion;

fn check(id: usize) {
    let result = run_criterion(id);
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_1_maximal_ideals() {
    check(1);
}

#[test]
fn criterion_2_complete_intersections() {
    check(2);
}

#[test]
fn criterion_3_radical_invariance() {
    check(3);
}

#[test]
fn criterion_4_three_generated() {
    check(4);
}

#[test]
fn criterion_5_four_generated() {
    check(5);
}

#[test]
fn criterion_6_upper_discrete() {
    check(6);
}

#[test]
fn criterion_7_oracle_equivalence() {
    check(7);
}

#[test]
fn criterion_8_lift_exactness() {
    check(8);
}
