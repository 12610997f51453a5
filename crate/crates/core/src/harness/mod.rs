//! Bounded relation enumeration, equivalence checking and random machines.

pub mod corpus;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::machines::{Edge, Nft, States, Tdfa};
use crate::semantics::{accepted_outputs, accepted_outputs_ids, live_states};
use crate::words::{shortlex_words, Alphabet, Word};

/// Bounds on input and output lengths for exhaustive sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Domain {
    pub max_input_len: usize,
    pub max_output_len: usize,
}

impl Domain {
    pub fn new(max_input_len: usize, max_output_len: usize) -> Self {
        Domain { max_input_len, max_output_len }
    }
}

/// A machine defining a relation between input and output words.
pub trait Recognizer: Sync {
    fn input(&self) -> &Alphabet;
    fn output(&self) -> &Alphabet;
    /// Every accepted output of length at most `max_out` for `input`, in
    /// shortlex order.
    fn outputs_within(&self, input: &[u32], max_out: usize) -> Vec<Vec<u32>>;
}

impl Recognizer for Nft {
    fn input(&self) -> &Alphabet {
        Nft::input(self)
    }

    fn output(&self) -> &Alphabet {
        Nft::output(self)
    }

    fn outputs_within(&self, input: &[u32], max_out: usize) -> Vec<Vec<u32>> {
        let mut outs = accepted_outputs_ids(self, input);
        outs.retain(|o| o.len() <= max_out);
        outs
    }
}

/// A 2DFA with its live-state mask precomputed.
pub struct TdfaRecognizer<'a> {
    tdfa: &'a Tdfa,
    live: Vec<bool>,
}

impl<'a> TdfaRecognizer<'a> {
    pub fn new(tdfa: &'a Tdfa) -> Self {
        TdfaRecognizer { tdfa, live: live_states(tdfa) }
    }
}

impl Recognizer for TdfaRecognizer<'_> {
    fn input(&self) -> &Alphabet {
        self.tdfa.input()
    }

    fn output(&self) -> &Alphabet {
        self.tdfa.output()
    }

    fn outputs_within(&self, input: &[u32], max_out: usize) -> Vec<Vec<u32>> {
        accepted_outputs(self.tdfa, input, max_out, &self.live)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("the machines have different {0} alphabets")]
    AlphabetMismatch(&'static str),
}

/// Every accepted pair within the domain, ordered by input then output
/// (both shortlex).
pub fn enumerate_relation(m: &dyn Recognizer, d: Domain) -> Vec<(Word, Word)> {
    let mut pairs = Vec::new();
    for a in shortlex_words(m.input().len(), d.max_input_len) {
        for u in m.outputs_within(&a, d.max_output_len) {
            pairs.push((m.input().decode(&a), m.output().decode(&u)));
        }
    }
    pairs
}

/// A pair on which two machines disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: Word,
    pub output: Word,
    pub first_accepts: bool,
    pub second_accepts: bool,
}

/// The least pair of the domain (by input, then output) on which the
/// verdicts differ. `jobs > 1` checks the inputs of each length in
/// parallel; the result does not depend on it.
pub fn check_equivalence(
    m1: &dyn Recognizer,
    m2: &dyn Recognizer,
    d: Domain,
    jobs: usize,
) -> Result<Option<Counterexample>, HarnessError> {
    if m1.input() != m2.input() {
        return Err(HarnessError::AlphabetMismatch("input"));
    }
    if m1.output() != m2.output() {
        return Err(HarnessError::AlphabetMismatch("output"));
    }
    let probe = |a: &Vec<u32>| -> Option<Counterexample> {
        let o1 = m1.outputs_within(a, d.max_output_len);
        let o2 = m2.outputs_within(a, d.max_output_len);
        if o1 == o2 {
            return None;
        }
        let first = o1.iter().find(|u| !o2.contains(u));
        let second = o2.iter().find(|u| !o1.contains(u));
        let u = match (first, second) {
            (Some(x), Some(y)) => std::cmp::min_by(x, y, |x, y| Alphabet::shortlex(x, y)),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!("sorted lists differ"),
        };
        Some(Counterexample {
            input: m1.input().decode(a),
            output: m1.output().decode(u),
            first_accepts: o1.contains(u),
            second_accepts: o2.contains(u),
        })
    };
    let n = m1.input().len();
    if jobs <= 1 {
        return Ok(shortlex_words(n, d.max_input_len).find_map(|a| probe(&a)));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    Ok(pool.install(|| {
        (0..=d.max_input_len).find_map(|len| {
            let words: Vec<Vec<u32>> = shortlex_words(n, len).filter(|a| a.len() == len).collect();
            words.par_iter().find_map_first(probe)
        })
    }))
}

/// A seeded random transducer over states `q0, q1, ...` and symbols
/// `a, b, c, ...` (shared by input and output). Each `(state, symbol,
/// target)` triple becomes a transition with probability `density`, with an
/// output of random length up to `max_out`; each state is accepting with
/// probability one half.
pub fn random_nft(seed: u64, n_states: usize, n_symbols: usize, max_out: usize, density: f64) -> Nft {
    assert!(n_states >= 1 && n_symbols >= 1, "need at least one state and one symbol");
    assert!(n_symbols <= 26, "symbols are single letters");
    assert!((0.0..=1.0).contains(&density), "density is a probability");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n_states).map(|i| format!("q{i}")).collect();
    let syms: Vec<String> = (0..n_symbols).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let alphabet = Alphabet::from_tokens(&syms).expect("letters are valid symbols");
    let mut edges = Vec::new();
    for q in 0..n_states {
        for a in 0..n_symbols as u32 {
            for target in 0..n_states {
                if rng.gen_bool(density) {
                    let len = rng.gen_range(0..=max_out);
                    let output = (0..len).map(|_| rng.gen_range(0..n_symbols as u32)).collect();
                    edges.push((q, a, Edge { target, output }));
                }
            }
        }
    }
    let accepting = (0..n_states).map(|_| rng.gen_bool(0.5)).collect();
    let states = States::new(&names).expect("generated names are distinct");
    Nft::from_parts(states, alphabet.clone(), alphabet, 0, accepting, edges).expect("generated machine is valid")
}
