mod common;

use common::{macro_state_walk, w, WALK_GOLDEN};
use xduce::determinize::determinize;
use xduce::harness::corpus;

#[test]
fn constr_run_matches_golden() {
    let t = corpus::constr();
    let res = determinize(&t, 1, 10_000).unwrap();
    assert_eq!(macro_state_walk(&res, &t, &w("aa"), &w("ababab")), WALK_GOLDEN);
}

#[test]
fn trace_is_stable_across_constructions() {
    let t = corpus::constr();
    let a = determinize(&t, 1, 10_000).unwrap();
    let b = determinize(&t, 1, 10_000).unwrap();
    assert_eq!(a.automaton.to_text(), b.automaton.to_text());
    assert_eq!(a.annotation_text(&t), b.annotation_text(&t));
}
