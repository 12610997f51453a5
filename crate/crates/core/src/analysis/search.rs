//! Bounded witness searches over input words.
//!
//! All searches walk input words depth-first in declared symbol order while
//! carrying the set of `(state, output)` pairs reachable on the current
//! prefix. Pairs whose state is not co-reachable can never contribute to an
//! accepting computation and are dropped, and a subtree is abandoned as soon
//! as its pair set becomes empty.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use super::static_props::{accepting_continuation, co_reachable_mask, Continuation};
use crate::machines::{Nft, StateId};
use crate::semantics::reach;
use crate::words::{distance_of, Alphabet, Word};

/// Default number of search-tree nodes a bounded search may visit.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
}

/// Evidence that `nft` violates a trailing bound `t`: two computations on
/// `a`, the first producing `u·v`, the second producing `u`, where the
/// second one can still be completed to produce `v·w2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailingWitness {
    pub a: Word,
    pub u: Word,
    pub v: Word,
    pub q1: StateId,
    pub q2: StateId,
    pub b1: Word,
    pub w1: Word,
    pub f1: StateId,
    pub b2: Word,
    pub w2: Word,
    pub f2: StateId,
    pub t: usize,
}

/// Two computations on a common input ending in co-reachable states whose
/// outputs are more than `t` apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationWitness {
    pub a: Word,
    pub o1: Word,
    pub o2: Word,
    pub q1: StateId,
    pub q2: StateId,
    pub d_value: usize,
    pub t: usize,
}

/// A witness flattened to labeled fields, for text and JSON rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessFields(pub Vec<(&'static str, String)>);

impl WitnessFields {
    pub fn to_text(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

fn path_ok(nft: &Nft, from: StateId, input: &Word, output: &Word, to: StateId) -> bool {
    match (nft.input().encode(input), nft.output().encode(output)) {
        (Some(i), Some(o)) => reach(nft, from, &i, &o).contains(&to),
        _ => false,
    }
}

impl TrailingWitness {
    /// Replays both computations and their completions.
    pub fn verify(&self, nft: &Nft) -> bool {
        let uv = self.u.concat(&self.v);
        let vw2 = self.v.concat(&self.w2);
        !self.v.is_empty()
            && self.v.len() > self.t
            && path_ok(nft, nft.initial(), &self.a, &uv, self.q1)
            && path_ok(nft, self.q1, &self.b1, &self.w1, self.f1)
            && path_ok(nft, nft.initial(), &self.a, &self.u, self.q2)
            && path_ok(nft, self.q2, &self.b2, &vw2, self.f2)
            && nft.is_accepting(self.f1)
            && nft.is_accepting(self.f2)
    }

    pub fn fields(&self, nft: &Nft) -> WitnessFields {
        let name = |q: StateId| nft.state_name(q).to_string();
        WitnessFields(vec![
            ("a", self.a.to_string()),
            ("u", self.u.to_string()),
            ("v", self.v.to_string()),
            ("q1", name(self.q1)),
            ("q2", name(self.q2)),
            ("b1", self.b1.to_string()),
            ("w1", self.w1.to_string()),
            ("f1", name(self.f1)),
            ("b2", self.b2.to_string()),
            ("w2", self.w2.to_string()),
            ("f2", name(self.f2)),
            ("t", self.t.to_string()),
        ])
    }
}

impl VariationWitness {
    pub fn verify(&self, nft: &Nft) -> bool {
        let co = co_reachable_mask(nft);
        self.d_value == crate::words::distance(&self.o1, &self.o2)
            && self.d_value > self.t
            && co[self.q1]
            && co[self.q2]
            && path_ok(nft, nft.initial(), &self.a, &self.o1, self.q1)
            && path_ok(nft, nft.initial(), &self.a, &self.o2, self.q2)
    }

    pub fn fields(&self, nft: &Nft) -> WitnessFields {
        WitnessFields(vec![
            ("a", self.a.to_string()),
            ("o1", self.o1.to_string()),
            ("o2", self.o2.to_string()),
            ("q1", nft.state_name(self.q1).to_string()),
            ("q2", nft.state_name(self.q2).to_string()),
            ("d", self.d_value.to_string()),
            ("t", self.t.to_string()),
        ])
    }
}

type Runs = Vec<((StateId, Vec<u32>), u64)>;

/// Depth-first walker over input words with budget accounting.
struct Walker<'a> {
    nft: &'a Nft,
    co: Vec<bool>,
    budget: u64,
    visited: u64,
}

impl<'a> Walker<'a> {
    fn new(nft: &'a Nft, budget: u64) -> Self {
        Walker { nft, co: co_reachable_mask(nft), budget, visited: 0 }
    }

    fn root(&self) -> Runs {
        if self.co[self.nft.initial()] {
            vec![((self.nft.initial(), Vec::new()), 1)]
        } else {
            Vec::new()
        }
    }

    fn step(&self, runs: &Runs, sym: u32) -> Runs {
        let mut next: Vec<((StateId, Vec<u32>), u64)> = Vec::new();
        for ((q, out), c) in runs {
            for e in self.nft.edges(*q, sym) {
                if !self.co[e.target] {
                    continue;
                }
                let mut o = out.clone();
                o.extend_from_slice(&e.output);
                next.push(((e.target, o), *c));
            }
        }
        next.sort_by(|x, y| x.0 .0.cmp(&y.0 .0).then_with(|| Alphabet::shortlex(&x.0 .1, &y.0 .1)));
        let mut merged: Runs = Vec::with_capacity(next.len());
        for (key, c) in next {
            match merged.last_mut() {
                Some((k, total)) if *k == key => *total = total.saturating_add(c),
                _ => merged.push((key, c)),
            }
        }
        merged
    }

    /// Visits every input of length `<= max_len` (or exactly `only_len`,
    /// still descending through shorter prefixes) whose run set is
    /// non-empty. `visit` returns `true` to stop the walk.
    fn walk<F>(&mut self, max_len: usize, only_len: Option<usize>, visit: &mut F) -> Result<bool, SearchError>
    where
        F: FnMut(&[u32], &Runs) -> bool,
    {
        let root = self.root();
        if root.is_empty() {
            return Ok(false);
        }
        let mut input = Vec::new();
        self.descend(&mut input, &root, max_len, only_len, visit)
    }

    fn descend<F>(
        &mut self,
        input: &mut Vec<u32>,
        runs: &Runs,
        max_len: usize,
        only_len: Option<usize>,
        visit: &mut F,
    ) -> Result<bool, SearchError>
    where
        F: FnMut(&[u32], &Runs) -> bool,
    {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(SearchError::BudgetExceeded { budget: self.budget });
        }
        if only_len.is_none_or(|l| l == input.len()) && visit(input, runs) {
            return Ok(true);
        }
        if input.len() >= max_len {
            return Ok(false);
        }
        for sym in 0..self.nft.input().len() as u32 {
            let next = self.step(runs, sym);
            if next.is_empty() {
                continue;
            }
            input.push(sym);
            let stop = self.descend(input, &next, max_len, only_len, visit)?;
            input.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Memoized `accepting_continuation(q, v, false)` lookups.
struct Continuations<'a> {
    nft: &'a Nft,
    memo: HashMap<(StateId, Vec<u32>), Option<Continuation>>,
}

impl<'a> Continuations<'a> {
    fn new(nft: &'a Nft) -> Self {
        Continuations { nft, memo: HashMap::new() }
    }

    fn get(&mut self, q: StateId, prefix: &[u32]) -> Option<Continuation> {
        let nft = self.nft;
        self.memo
            .entry((q, prefix.to_vec()))
            .or_insert_with(|| accepting_continuation(nft, q, prefix, false))
            .clone()
    }
}

/// Pairs `(i, j)` of runs where the output of `j` is a proper prefix of the
/// output of `i` by more than `t` symbols and `j` can still produce the
/// difference; in run order.
fn trailing_pairs(runs: &Runs, t: usize, conts: &mut Continuations, mut each: impl FnMut(usize, usize) -> bool) {
    for (i, ((_, o1), _)) in runs.iter().enumerate() {
        for (j, ((q2, o2), _)) in runs.iter().enumerate() {
            if i == j || o1.len() <= o2.len() + t || !o1.starts_with(o2) {
                continue;
            }
            if conts.get(*q2, &o1[o2.len()..]).is_some() && each(i, j) {
                return;
            }
        }
    }
}

fn build_trailing(nft: &Nft, a: &[u32], runs: &Runs, i: usize, j: usize, t: usize, conts: &mut Continuations) -> TrailingWitness {
    let ((q1, o1), _) = &runs[i];
    let ((q2, o2), _) = &runs[j];
    let v = &o1[o2.len()..];
    let c1 = conts.get(*q1, &[]).expect("co-reachable state");
    let c2 = conts.get(*q2, v).expect("checked continuation");
    let out = nft.output();
    let witness = TrailingWitness {
        a: nft.input().decode(a),
        u: out.decode(o2),
        v: out.decode(v),
        q1: *q1,
        q2: *q2,
        b1: nft.input().decode(&c1.input),
        w1: out.decode(&c1.output),
        f1: c1.accepting_state,
        b2: nft.input().decode(&c2.input),
        w2: out.decode(&c2.output[v.len()..]),
        f2: c2.accepting_state,
        t,
    };
    assert!(witness.verify(nft), "trailing witness failed replay");
    witness
}

/// Looks for a trailing witness with `|v| > t` and `|a| <= max_a`, returning
/// the one with least `a` in length-then-lexicographic order.
pub fn find_trailing_witness(nft: &Nft, t: usize, max_a: usize) -> Result<Option<TrailingWitness>, SearchError> {
    find_trailing_witness_with_budget(nft, t, max_a, DEFAULT_NODE_BUDGET)
}

pub fn find_trailing_witness_with_budget(
    nft: &Nft,
    t: usize,
    max_a: usize,
    budget: u64,
) -> Result<Option<TrailingWitness>, SearchError> {
    let mut walker = Walker::new(nft, budget);
    let mut conts = Continuations::new(nft);
    let mut found = None;
    for len in 0..=max_a {
        let mut visit = |a: &[u32], runs: &Runs| {
            let mut hit = None;
            trailing_pairs(runs, t, &mut conts, |i, j| {
                hit = Some((i, j));
                true
            });
            if let Some((i, j)) = hit {
                found = Some(build_trailing(nft, a, runs, i, j, t, &mut conts));
            }
            hit.is_some()
        };
        if walker.walk(len, Some(len), &mut visit)? {
            break;
        }
    }
    Ok(found)
}

/// The trailing witness with the longest `v` among all inputs with
/// `|a| <= max_a` (ties go to the least `a`), with no lower bound on `|v|`
/// beyond being non-empty.
pub fn longest_trailing_witness(nft: &Nft, max_a: usize, budget: u64) -> Result<Option<TrailingWitness>, SearchError> {
    let mut walker = Walker::new(nft, budget);
    let mut conts = Continuations::new(nft);
    let mut best: Option<TrailingWitness> = None;
    let mut visit = |a: &[u32], runs: &Runs| {
        let floor = best.as_ref().map_or(0, |w| w.v.len());
        let mut top: Option<(usize, usize, usize)> = None;
        trailing_pairs(runs, floor.saturating_sub(1), &mut conts, |i, j| {
            let len = runs[i].0 .1.len() - runs[j].0 .1.len();
            if top.is_none_or(|(l, _, _)| len > l) {
                top = Some((len, i, j));
            }
            false
        });
        if let Some((len, i, j)) = top {
            let better = match &best {
                None => true,
                Some(w) => len > w.v.len() || (len == w.v.len() && a.len() < w.a.len()),
            };
            if better {
                best = Some(build_trailing(nft, a, runs, i, j, len - 1, &mut conts));
            }
        }
        false
    };
    walker.walk(max_a, None, &mut visit)?;
    Ok(best)
}

/// Looks for two runs on a common input with `|a| <= max_a` ending in
/// co-reachable states whose outputs are more than `t` apart.
pub fn find_variation_witness(nft: &Nft, t: usize, max_a: usize) -> Result<Option<VariationWitness>, SearchError> {
    find_variation_witness_with_budget(nft, t, max_a, DEFAULT_NODE_BUDGET)
}

pub fn find_variation_witness_with_budget(
    nft: &Nft,
    t: usize,
    max_a: usize,
    budget: u64,
) -> Result<Option<VariationWitness>, SearchError> {
    let mut walker = Walker::new(nft, budget);
    let mut found = None;
    for len in 0..=max_a {
        let mut visit = |a: &[u32], runs: &Runs| {
            for (i, ((q1, o1), _)) in runs.iter().enumerate() {
                for ((q2, o2), _) in &runs[i + 1..] {
                    let d = distance_of(o1, o2);
                    if d > t {
                        let w = VariationWitness {
                            a: nft.input().decode(a),
                            o1: nft.output().decode(o1),
                            o2: nft.output().decode(o2),
                            q1: *q1,
                            q2: *q2,
                            d_value: d,
                            t,
                        };
                        assert!(w.verify(nft), "variation witness failed replay");
                        found = Some(w);
                        return true;
                    }
                }
            }
            false
        };
        if walker.walk(len, Some(len), &mut visit)? {
            break;
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Valuedness {
    pub k: usize,
    /// Set when some input had more than `cap` outputs.
    pub overflow: bool,
    /// An input attaining `k`; absent when `k = 0`.
    pub witness: Option<Word>,
}

/// Maximum number of distinct accepted outputs over inputs `|a| <= max_a`,
/// saturated at `cap`.
pub fn max_valuedness(nft: &Nft, max_a: usize, cap: usize) -> Valuedness {
    assert!(cap >= 1, "cap must be positive");
    let mut walker = Walker::new(nft, u64::MAX);
    let mut best: (usize, bool, Option<Vec<u32>>) = (0, false, None);
    let mut visit = |a: &[u32], runs: &Runs| {
        let mut outs: Vec<&Vec<u32>> = runs.iter().filter(|((q, _), _)| nft.is_accepting(*q)).map(|((_, o), _)| o).collect();
        outs.sort_by(|x, y| Alphabet::shortlex(x, y));
        outs.dedup();
        let k = outs.len().min(cap);
        best.1 |= outs.len() > cap;
        let better = k > best.0 || (k == best.0 && k > 0 && best.2.as_ref().is_none_or(|w| a.len() < w.len()));
        if better {
            best.0 = k;
            best.2 = Some(a.to_vec());
        }
        false
    };
    walker.walk(max_a, None, &mut visit).expect("unbounded budget");
    Valuedness { k: best.0, overflow: best.1, witness: best.2.map(|a| nft.input().decode(&a)) }
}

/// Maximum accepting run count over inputs `|a| <= max_a` and accepted
/// outputs `|u| <= max_u`, saturated at `cap`.
pub fn max_ambiguity(nft: &Nft, max_a: usize, max_u: usize, cap: u64) -> crate::semantics::Capped<u64> {
    assert!(cap >= 1, "cap must be positive");
    let mut walker = Walker::new(nft, u64::MAX);
    let mut best = 0u64;
    let mut visit = |_: &[u32], runs: &Runs| {
        let mut per_output: HashMap<&Vec<u32>, u64> = HashMap::new();
        for ((q, o), c) in runs {
            if nft.is_accepting(*q) && o.len() <= max_u {
                let slot = per_output.entry(o).or_insert(0);
                *slot = slot.saturating_add(*c);
            }
        }
        best = per_output.values().copied().fold(best, u64::max);
        false
    };
    walker.walk(max_a, None, &mut visit).expect("unbounded budget");
    crate::semantics::Capped { value: best.min(cap), overflow: best > cap }
}
