//! Compiling an NFT with a trailing bound `t` into an equivalent 2DFA.
//!
//! A macro-state `(z, P)` buffers the part `z` of the output tape that some
//! tracked computation has not produced yet, and tracks each computation as
//! a pair `(q, n)`: state `q` has produced the first `n` symbols of `z`.
//! The buffer never exceeds `r = s + t` symbols, where `s` is the output
//! speed. The automaton reads output while the buffer has room and input
//! otherwise, discarding computations that can no longer be completed.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::analysis::{accepting_continuation, output_speed};
use crate::machines::{Move, Nft, StateId, States, Tdfa, TdfaRule};
use crate::semantics::TdfaTrace;

/// Default cap on the number of distinct macro-states.
pub const DEFAULT_STATE_BUDGET: usize = 100_000;

/// Name of the rejecting sink state in generated automata.
pub const REJECT_STATE: &str = "reject";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeterminizeError {
    #[error("state budget exceeded: {reached} macro-states discovered (budget {budget})")]
    StateBudgetExceeded { reached: usize, budget: usize },
}

/// A tracked computation: state `q` has produced the first `n` buffered
/// symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrackedPair {
    pub q: StateId,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MacroState {
    pub z: Vec<u32>,
    pub pairs: BTreeSet<TrackedPair>,
}

impl MacroState {
    pub fn initial(nft: &Nft) -> Self {
        MacroState { z: Vec::new(), pairs: BTreeSet::from([TrackedPair { q: nft.initial(), n: 0 }]) }
    }

    pub fn is_accepting(&self, nft: &Nft) -> bool {
        self.pairs.iter().any(|p| p.n == self.z.len() && nft.is_accepting(p.q))
    }

    /// `z=<word> P={(q,n),...}` with pairs sorted by state id then offset.
    pub fn render(&self, nft: &Nft) -> String {
        let pairs: Vec<String> = self.pairs.iter().map(|p| format!("({},{})", nft.state_name(p.q), p.n)).collect();
        format!("z={} P={{{}}}", nft.output().decode(&self.z), pairs.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MacroNode {
    Macro(MacroState),
    RejectSink,
}

impl MacroNode {
    pub fn render(&self, nft: &Nft) -> String {
        match self {
            MacroNode::Macro(m) => m.render(nft),
            MacroNode::RejectSink => REJECT_STATE.to_string(),
        }
    }
}

/// Drops the `m = min n` leading buffer symbols every tracked computation has
/// already produced.
pub fn normalize(pairs: &BTreeSet<TrackedPair>, z: &[u32]) -> (BTreeSet<TrackedPair>, Vec<u32>, usize) {
    let m = pairs.iter().map(|p| p.n).min().expect("normalize needs a non-empty pair set");
    let shifted = pairs.iter().map(|p| TrackedPair { q: p.q, n: p.n - m }).collect();
    (shifted, z[m..].to_vec(), m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub next: MacroNode,
    pub moves: (Move, Move),
    /// Computations dropped because their output overflowed the buffer
    /// while unread output remained.
    pub overflow_drops: usize,
}

/// Shared context for one construction: the buffer capacity and memoized
/// viability checks.
struct Builder<'a> {
    nft: &'a Nft,
    r: usize,
    viable: HashMap<(StateId, Vec<u32>, bool), bool>,
}

impl<'a> Builder<'a> {
    fn new(nft: &'a Nft, t: usize) -> Self {
        Builder { nft, r: output_speed(nft) + t, viable: HashMap::new() }
    }

    fn is_viable(&mut self, q: StateId, rest: &[u32], exact: bool) -> bool {
        let nft = self.nft;
        *self
            .viable
            .entry((q, rest.to_vec(), exact))
            .or_insert_with(|| accepting_continuation(nft, q, rest, exact).is_some())
    }

    fn prune_and_normalize(&mut self, pairs: BTreeSet<TrackedPair>, z: &[u32], exact: bool) -> MacroNode {
        let kept: BTreeSet<TrackedPair> = pairs.into_iter().filter(|p| self.is_viable(p.q, &z[p.n..], exact)).collect();
        if kept.is_empty() {
            return MacroNode::RejectSink;
        }
        let (pairs, z, _) = normalize(&kept, z);
        MacroNode::Macro(MacroState { z, pairs })
    }

    fn step(&mut self, s: &MacroState, sigma: Option<u32>, gamma: Option<u32>) -> StepOutcome {
        assert!(sigma.is_some() || gamma.is_some(), "no step on two blanks");
        match (sigma, gamma) {
            (_, Some(g)) if s.z.len() < self.r => {
                let mut z = s.z.clone();
                z.push(g);
                let next = self.prune_and_normalize(s.pairs.clone(), &z, false);
                StepOutcome { next, moves: (Move::Stay, Move::Advance), overflow_drops: 0 }
            }
            (Some(a), _) => {
                let z = &s.z;
                let mut drops = 0;
                let mut pairs = BTreeSet::new();
                for p in &s.pairs {
                    for e in self.nft.edges(p.q, a) {
                        let end = p.n + e.output.len();
                        let agree = end.min(z.len());
                        if e.output[..agree - p.n] != z[p.n..agree] {
                            continue;
                        }
                        if end > z.len() {
                            drops += gamma.is_some() as usize;
                            continue;
                        }
                        pairs.insert(TrackedPair { q: e.target, n: end });
                    }
                }
                let next = self.prune_and_normalize(pairs, z, gamma.is_none());
                StepOutcome { next, moves: (Move::Advance, Move::Stay), overflow_drops: drops }
            }
            (None, Some(_)) => StepOutcome { next: MacroNode::RejectSink, moves: (Move::Stay, Move::Advance), overflow_drops: 0 },
            (None, None) => unreachable!(),
        }
    }
}

/// One transition of the construction from macro-state `s` on the symbols
/// `sigma`/`gamma` under the heads (`None` = blank).
pub fn macro_step(nft: &Nft, t: usize, s: &MacroState, sigma: Option<u32>, gamma: Option<u32>) -> StepOutcome {
    Builder::new(nft, t).step(s, sigma, gamma)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminizeResult {
    pub automaton: Tdfa,
    /// The macro-state behind each automaton state, by state id.
    pub annotations: Vec<MacroNode>,
    pub overflow_drops: usize,
    pub s: usize,
    pub t: usize,
    pub r: usize,
}

impl DeterminizeResult {
    /// Annotation side file: one `<state> <macro-state>` line per state,
    /// then the construction parameters and diagnostics.
    pub fn annotation_text(&self, nft: &Nft) -> String {
        let mut out = String::new();
        for (q, node) in self.annotations.iter().enumerate() {
            let name = self.automaton.state_name(q);
            match node {
                MacroNode::Macro(m) => {
                    let _ = writeln!(out, "{name} {}", m.render(nft));
                }
                MacroNode::RejectSink => {
                    let _ = writeln!(out, "{name} {REJECT_STATE}");
                }
            }
        }
        let _ = writeln!(out, "s={}\nt={}\nr={}\noverflow_drops={}", self.s, self.t, self.r, self.overflow_drops);
        out
    }
}

/// Builds the 2DFA for `nft` with trailing bound `t`, exploring reachable
/// macro-states breadth-first. States are named `m0, m1, ...` in discovery
/// order; the sink is named `reject`.
pub fn determinize(nft: &Nft, t: usize, state_budget: usize) -> Result<DeterminizeResult, DeterminizeError> {
    assert!(state_budget >= 1, "state budget must be positive");
    let mut b = Builder::new(nft, t);
    let start = if accepting_continuation(nft, nft.initial(), &[], false).is_some() {
        MacroNode::Macro(MacroState::initial(nft))
    } else {
        MacroNode::RejectSink
    };
    let mut ids: HashMap<MacroNode, StateId> = HashMap::new();
    let mut nodes: Vec<MacroNode> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |node: MacroNode, nodes: &mut Vec<MacroNode>, queue: &mut VecDeque<StateId>| -> Result<StateId, DeterminizeError> {
        if let Some(&id) = ids.get(&node) {
            return Ok(id);
        }
        let id = nodes.len();
        if id >= state_budget {
            return Err(DeterminizeError::StateBudgetExceeded { reached: id + 1, budget: state_budget });
        }
        ids.insert(node.clone(), id);
        nodes.push(node);
        queue.push_back(id);
        Ok(id)
    };
    intern(start, &mut nodes, &mut queue)?;
    let ni = nft.input().len() as u32;
    let no = nft.output().len() as u32;
    let reads = move || {
        (0..=ni).flat_map(move |i| (0..=no).map(move |o| ((i < ni).then_some(i), (o < no).then_some(o))))
    };
    let mut rules = Vec::new();
    let mut drops = 0;
    while let Some(id) = queue.pop_front() {
        let node = nodes[id].clone();
        for (sigma, gamma) in reads() {
            if sigma.is_none() && gamma.is_none() {
                continue;
            }
            let (target, moves) = match &node {
                MacroNode::RejectSink => {
                    let adv = |x: Option<u32>| if x.is_some() { Move::Advance } else { Move::Stay };
                    (id, (adv(sigma), adv(gamma)))
                }
                MacroNode::Macro(m) => {
                    let out = b.step(m, sigma, gamma);
                    drops += out.overflow_drops;
                    (intern(out.next, &mut nodes, &mut queue)?, out.moves)
                }
            };
            rules.push((id, sigma, gamma, TdfaRule { target, input_move: moves.0, output_move: moves.1 }));
        }
    }
    let mut counter = 0;
    let names: Vec<String> = nodes
        .iter()
        .map(|n| match n {
            MacroNode::RejectSink => REJECT_STATE.to_string(),
            MacroNode::Macro(_) => {
                counter += 1;
                format!("m{}", counter - 1)
            }
        })
        .collect();
    let accepting = nodes
        .iter()
        .map(|n| matches!(n, MacroNode::Macro(m) if m.is_accepting(nft)))
        .collect();
    let automaton = Tdfa::from_parts(
        States::new(&names).expect("generated names are distinct tokens"),
        nft.input().clone(),
        nft.output().clone(),
        0,
        accepting,
        rules,
    )
    .expect("construction honors the head constraints");
    Ok(DeterminizeResult { automaton, annotations: nodes, overflow_drops: drops, s: b.r - t, t, r: b.r })
}

/// The macro-states a run passes through around input steps: the initial
/// state, then for every step that advances the input head the state before
/// it (unless just listed) and the state after it.
pub fn input_step_view(trace: &TdfaTrace) -> Vec<StateId> {
    let mut view = Vec::new();
    let Some(first) = trace.steps.first() else {
        return vec![trace.final_state];
    };
    view.push(first.state);
    let visited = trace.visited_states();
    for (k, step) in trace.steps.iter().enumerate() {
        if step.moves.is_some_and(|(m1, _)| m1 == Move::Advance) {
            if view.last() != Some(&step.state) {
                view.push(step.state);
            }
            view.push(visited[k + 1]);
        }
    }
    view
}

/// Renders an annotated macro-state for a state id of a generated automaton.
pub fn describe_state(result: &DeterminizeResult, nft: &Nft, q: StateId) -> String {
    result.annotations[q].render(nft)
}
