//! Exact NFT runners.
//!
//! Membership never materializes outputs: it searches over pairs
//! `(state, matched prefix length of u)`, which keeps it polynomial even for
//! transducers with exponentially many outputs per input.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::machines::{Nft, StateId};
use crate::words::{Alphabet, Word};

/// States reachable from `from` by reading exactly `input` while producing
/// exactly `output` (id words).
pub fn reach(nft: &Nft, from: StateId, input: &[u32], output: &[u32]) -> Vec<StateId> {
    let width = output.len() + 1;
    let mut cur = vec![false; nft.num_states() * width];
    cur[from * width] = true;
    for &sym in input {
        let mut next = vec![false; cur.len()];
        let mut any = false;
        for (slot, _) in cur.iter().enumerate().filter(|(_, &on)| on) {
            let (q, j) = (slot / width, slot % width);
            for e in nft.edges(q, sym) {
                if output[j..].starts_with(&e.output) {
                    next[e.target * width + j + e.output.len()] = true;
                    any = true;
                }
            }
        }
        if !any {
            return Vec::new();
        }
        cur = next;
    }
    (0..nft.num_states()).filter(|&q| cur[q * width + output.len()]).collect()
}

/// Whether `(a, u)` belongs to the relation of `nft`.
pub fn nft_membership(nft: &Nft, a: &Word, u: &Word) -> bool {
    match (nft.input().encode(a), nft.output().encode(u)) {
        (Some(a), Some(u)) => accepts_ids(nft, &a, &u),
        _ => false,
    }
}

pub(crate) fn accepts_ids(nft: &Nft, a: &[u32], u: &[u32]) -> bool {
    reach(nft, nft.initial(), a, u).into_iter().any(|q| nft.is_accepting(q))
}

/// Result of a capped enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Capped<T> {
    pub value: T,
    /// Set when the cap truncated the result.
    pub overflow: bool,
}

/// All `(state, output)` pairs reachable from the initial state on `input`,
/// deduplicated and sorted by state then shortlex output.
pub fn runs_on(nft: &Nft, input: &[u32]) -> Vec<(StateId, Vec<u32>)> {
    let mut cur = vec![(nft.initial(), Vec::new())];
    for &sym in input {
        cur = step_runs(nft, &cur, sym);
        if cur.is_empty() {
            break;
        }
    }
    cur
}

pub(crate) fn step_runs(nft: &Nft, runs: &[(StateId, Vec<u32>)], sym: u32) -> Vec<(StateId, Vec<u32>)> {
    let mut next = BTreeSet::new();
    for (q, out) in runs {
        for e in nft.edges(*q, sym) {
            let mut o = out.clone();
            o.extend_from_slice(&e.output);
            next.insert(RunKey(e.target, o));
        }
    }
    next.into_iter().map(|RunKey(q, o)| (q, o)).collect()
}

/// Orders runs by state, then output in shortlex order.
#[derive(PartialEq, Eq)]
struct RunKey(StateId, Vec<u32>);

impl Ord for RunKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0).then_with(|| Alphabet::shortlex(&self.1, &other.1))
    }
}

impl PartialOrd for RunKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Distinct outputs of accepting computations on `a` in shortlex order,
/// truncated to the first `cap`.
pub fn nft_outputs(nft: &Nft, a: &Word, cap: usize) -> Capped<Vec<Word>> {
    assert!(cap >= 1, "cap must be positive");
    let Some(ids) = nft.input().encode(a) else {
        return Capped { value: Vec::new(), overflow: false };
    };
    let ids = accepted_outputs_ids(nft, &ids);
    let overflow = ids.len() > cap;
    let value = ids.iter().take(cap).map(|o| nft.output().decode(o)).collect();
    Capped { value, overflow }
}

pub(crate) fn accepted_outputs_ids(nft: &Nft, input: &[u32]) -> Vec<Vec<u32>> {
    let mut outs: Vec<Vec<u32>> = runs_on(nft, input)
        .into_iter()
        .filter(|(q, _)| nft.is_accepting(*q))
        .map(|(_, o)| o)
        .collect();
    outs.sort_by(|x, y| Alphabet::shortlex(x, y));
    outs.dedup();
    outs
}

/// Number of distinct accepting runs reading `a` with total output `u`,
/// saturated at `cap`.
///
/// Runs differing in any chosen option count separately, even when they
/// pass through the same states.
pub fn nft_accepting_run_count(nft: &Nft, a: &Word, u: &Word, cap: u64) -> Capped<u64> {
    assert!(cap >= 1, "cap must be positive");
    let (Some(a), Some(u)) = (nft.input().encode(a), nft.output().encode(u)) else {
        return Capped { value: 0, overflow: false };
    };
    let n = count_runs_ids(nft, &a, &u);
    Capped { value: n.min(cap), overflow: n > cap }
}

/// Exact run count by dynamic programming over `(state, matched)`,
/// saturating at `u64::MAX`.
pub(crate) fn count_runs_ids(nft: &Nft, a: &[u32], u: &[u32]) -> u64 {
    let width = u.len() + 1;
    let mut cur = vec![0u64; nft.num_states() * width];
    cur[nft.initial() * width] = 1;
    for &sym in a {
        let mut next = vec![0u64; cur.len()];
        for (slot, &c) in cur.iter().enumerate().filter(|(_, &c)| c > 0) {
            let (q, j) = (slot / width, slot % width);
            for e in nft.edges(q, sym) {
                if u[j..].starts_with(&e.output) {
                    let t = e.target * width + j + e.output.len();
                    next[t] = next[t].saturating_add(c);
                }
            }
        }
        cur = next;
    }
    nft.accepting_states()
        .map(|q| cur[q * width + u.len()])
        .fold(0u64, u64::saturating_add)
}
