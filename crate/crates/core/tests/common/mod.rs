#![allow(dead_code)]

use xduce::determinize::{describe_state, input_step_view, DeterminizeResult};
use xduce::semantics::tdfa_run;
use xduce::{Nft, Word};

pub const WALK_GOLDEN: &str = include_str!("../golden/constr_aa_ababab.txt");

pub fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

pub fn tokens(s: &str) -> Word {
    Word::from_tokens(&s.split_whitespace().collect::<Vec<_>>()).unwrap()
}

/// Parameters, macro-states around input steps, and the verdict of a run of
/// a constructed automaton.
pub fn macro_state_walk(res: &DeterminizeResult, nft: &Nft, a: &Word, u: &Word) -> String {
    let trace = tdfa_run(&res.automaton, a, u);
    let mut out = format!("s={} t={} r={}\n", res.s, res.t, res.r);
    for q in input_step_view(&trace) {
        out.push_str(&describe_state(res, nft, q));
        out.push('\n');
    }
    out.push_str(if trace.accepted { "result: accept\n" } else { "result: reject\n" });
    out
}

/// Every id word over `n` symbols with length at most `max_len`, built by
/// nested extension (independent of the library's enumerator).
pub fn all_words(n: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..n {
                let mut x: Vec<u32> = w.clone();
                x.push(s);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
