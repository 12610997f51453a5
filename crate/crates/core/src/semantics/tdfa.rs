use std::fmt::Write as _;

use serde::Serialize;

use crate::machines::{Move, StateId, Tdfa};
use crate::words::{Alphabet, Word, BLANK};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub state: StateId,
    pub input_pos: usize,
    pub output_pos: usize,
    /// Symbols under the heads; `None` is the blank.
    pub read: (Option<u32>, Option<u32>),
    /// `None` when the table has no entry and the run falls into the
    /// implicit rejecting sink.
    pub moves: Option<(Move, Move)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TdfaTrace {
    pub steps: Vec<TraceStep>,
    pub final_state: StateId,
    pub accepted: bool,
}

impl TdfaTrace {
    /// The states entered along the run, starting with the initial state.
    pub fn visited_states(&self) -> Vec<StateId> {
        let mut v: Vec<StateId> = self.steps.iter().map(|s| s.state).collect();
        if self.steps.last().is_none_or(|s| s.moves.is_some()) {
            v.push(self.final_state);
        }
        v
    }

    /// One line per step plus a result line.
    pub fn render(&self, tdfa: &Tdfa) -> String {
        let sym = |alpha: &Alphabet, x: Option<u32>| x.map_or(BLANK.to_string(), |i| alpha.symbol(i).to_string());
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            let _ = write!(
                out,
                "step {k}: state={} in={} out={} read=({},{}) ",
                tdfa.state_name(s.state),
                s.input_pos,
                s.output_pos,
                sym(tdfa.input(), s.read.0),
                sym(tdfa.output(), s.read.1)
            );
            match s.moves {
                Some((m1, m2)) => {
                    let _ = writeln!(out, "move=({m1},{m2})");
                }
                None => out.push_str("move=none sink\n"),
            }
        }
        let _ = writeln!(
            out,
            "result: {} state={}",
            if self.accepted { "accept" } else { "reject" },
            tdfa.state_name(self.final_state)
        );
        out
    }
}

/// Executes the automaton on `(a, u)`. Symbols outside the alphabets are
/// treated as unreadable and end the run in the implicit sink.
pub fn tdfa_run(tdfa: &Tdfa, a: &Word, u: &Word) -> TdfaTrace {
    let enc = |alpha: &Alphabet, w: &Word| -> Vec<Option<u32>> { w.symbols().iter().map(|s| alpha.id(s)).collect() };
    run_opt(tdfa, &enc(tdfa.input(), a), &enc(tdfa.output(), u))
}

fn run_opt(tdfa: &Tdfa, a: &[Option<u32>], u: &[Option<u32>]) -> TdfaTrace {
    let (mut q, mut i, mut j) = (tdfa.initial(), 0usize, 0usize);
    let mut steps = Vec::new();
    loop {
        if i == a.len() && j == u.len() {
            return TdfaTrace { steps, final_state: q, accepted: tdfa.is_accepting(q) };
        }
        let read = (a.get(i).copied(), u.get(j).copied());
        // A foreign symbol has no table entry.
        let rule = match read {
            (Some(None), _) | (_, Some(None)) => None,
            (x, y) => tdfa.rule(q, x.flatten(), y.flatten()),
        };
        let read = (read.0.flatten(), read.1.flatten());
        match rule {
            None => {
                steps.push(TraceStep { state: q, input_pos: i, output_pos: j, read, moves: None });
                return TdfaTrace { steps, final_state: q, accepted: false };
            }
            Some(r) => {
                steps.push(TraceStep {
                    state: q,
                    input_pos: i,
                    output_pos: j,
                    read,
                    moves: Some((r.input_move, r.output_move)),
                });
                i += (r.input_move == Move::Advance) as usize;
                j += (r.output_move == Move::Advance) as usize;
                q = r.target;
            }
        }
    }
}

#[cfg(test)]
fn accepts_ids(tdfa: &Tdfa, a: &[u32], u: &[u32]) -> bool {
    let (mut q, mut i, mut j) = (tdfa.initial(), 0usize, 0usize);
    loop {
        if i == a.len() && j == u.len() {
            return tdfa.is_accepting(q);
        }
        match tdfa.rule(q, a.get(i).copied(), u.get(j).copied()) {
            None => return false,
            Some(r) => {
                i += (r.input_move == Move::Advance) as usize;
                j += (r.output_move == Move::Advance) as usize;
                q = r.target;
            }
        }
    }
}

/// States from which some accepting state is reachable in the transition
/// graph; runs in other states can never accept.
pub fn live_states(tdfa: &Tdfa) -> Vec<bool> {
    let mut live: Vec<bool> = (0..tdfa.num_states()).map(|q| tdfa.is_accepting(q)).collect();
    let mut preds = vec![Vec::new(); tdfa.num_states()];
    for (q, _, _, r) in tdfa.rules() {
        preds[r.target].push(q);
    }
    let mut stack: Vec<StateId> = (0..tdfa.num_states()).filter(|&q| live[q]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !live[p] {
                live[p] = true;
                stack.push(p);
            }
        }
    }
    live
}

/// Every output `u` with `|u| <= max_out` such that `(input, u)` is
/// accepted, in shortlex order.
///
/// Explores output words symbol by symbol as the output head first reaches
/// each position, so each candidate word is simulated exactly once and
/// prefixes that enter a dead state are cut off.
pub fn accepted_outputs(tdfa: &Tdfa, input: &[u32], max_out: usize, live: &[bool]) -> Vec<Vec<u32>> {
    let mut found = Vec::new();
    let mut out = Vec::new();
    explore(tdfa, input, max_out, live, tdfa.initial(), 0, 0, &mut out, false, &mut found);
    found.sort_by(|x, y| Alphabet::shortlex(x, y));
    found
}

#[allow(clippy::too_many_arguments)]
fn explore(
    tdfa: &Tdfa,
    input: &[u32],
    max_out: usize,
    live: &[bool],
    mut q: StateId,
    mut i: usize,
    mut j: usize,
    out: &mut Vec<u32>,
    ended: bool,
    found: &mut Vec<Vec<u32>>,
) {
    loop {
        if !live[q] {
            return;
        }
        let b = if j < out.len() {
            Some(out[j])
        } else if ended {
            None
        } else {
            if out.len() < max_out {
                for g in 0..tdfa.output().len() as u32 {
                    out.push(g);
                    explore(tdfa, input, max_out, live, q, i, j, out, false, found);
                    out.pop();
                }
            }
            explore(tdfa, input, max_out, live, q, i, j, out, true, found);
            return;
        };
        let a = input.get(i).copied();
        if a.is_none() && b.is_none() {
            if tdfa.is_accepting(q) {
                found.push(out.clone());
            }
            return;
        }
        match tdfa.rule(q, a, b) {
            None => return,
            Some(r) => {
                i += (r.input_move == Move::Advance) as usize;
                j += (r.output_move == Move::Advance) as usize;
                q = r.target;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus;
    use crate::words::shortlex_words;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn lastsym_examples() {
        let m = corpus::lastsym_tdfa();
        assert!(tdfa_run(&m, &w("010"), &w("000")).accepted);
        assert!(!tdfa_run(&m, &w("01"), &w("00")).accepted);
        assert!(tdfa_run(&m, &w("01"), &w("11")).accepted);
        assert!(!tdfa_run(&m, &w("01"), &w("111")).accepted);
        assert!(tdfa_run(&m, &Word::empty(), &Word::empty()).accepted);
    }

    #[test]
    fn le2n_examples() {
        let m = corpus::le2n_tdfa();
        assert!(!tdfa_run(&m, &w("0"), &w("000")).accepted);
        assert!(tdfa_run(&m, &w("0"), &w("00")).accepted);
        assert!(tdfa_run(&m, &w("0"), &Word::empty()).accepted);
        assert!(tdfa_run(&m, &w("000"), &w("000000")).accepted);
    }

    #[test]
    fn trace_rendering() {
        let m = corpus::le2n_tdfa();
        let t = tdfa_run(&m, &w("0"), &w("000"));
        let text = t.render(&m);
        assert_eq!(
            text,
            "step 0: state=s0 in=0 out=0 read=(0,0) move=(S,A)\n\
             step 1: state=s1 in=0 out=1 read=(0,0) move=(S,A)\n\
             step 2: state=s2 in=0 out=2 read=(0,0) move=(A,S)\n\
             step 3: state=s0 in=1 out=2 read=(.,0) move=none sink\n\
             result: reject state=s0\n"
        );
        assert_eq!(t.visited_states(), vec![0, 1, 2, 0]);
    }

    #[test]
    fn foreign_symbols_reject() {
        let m = corpus::le2n_tdfa();
        assert!(!tdfa_run(&m, &w("x"), &Word::empty()).accepted);
    }

    #[test]
    fn step_count_bounded_by_tape_lengths() {
        let m = corpus::lastsym_tdfa();
        for a in shortlex_words(2, 4) {
            for u in shortlex_words(2, 4) {
                let t = tdfa_run(&m, &m.input().decode(&a), &m.output().decode(&u));
                assert!(t.steps.len() <= a.len() + u.len());
                assert_eq!(t.accepted, accepts_ids(&m, &a, &u));
                for pair in t.steps.windows(2) {
                    assert!(pair[0].input_pos <= pair[1].input_pos);
                    assert!(pair[0].output_pos <= pair[1].output_pos);
                }
            }
        }
    }

    #[test]
    fn accepted_outputs_agree_with_runs() {
        for m in [corpus::lastsym_tdfa(), corpus::le2n_tdfa()] {
            let live = live_states(&m);
            let ni = m.input().len();
            let no = m.output().len();
            for a in shortlex_words(ni, 3) {
                let expect: Vec<Vec<u32>> = shortlex_words(no, 6).filter(|u| accepts_ids(&m, &a, u)).collect();
                assert_eq!(accepted_outputs(&m, &a, 6, &live), expect);
            }
        }
    }
}
