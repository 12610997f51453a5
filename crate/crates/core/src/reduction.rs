//! Compiling a Turing machine into an unambiguous NFT over configuration
//! words.
//!
//! Inputs have the shape `c1 ;; c2 ;; ... ;; ck ;; mode` where each `ci` is
//! an encoded configuration. In copy mode the transducer echoes the input
//! without the mode token. In step mode it first emits the initial
//! configuration of the machine and then the successor of every input
//! configuration, each followed by `;;`.
//!
//! Step mode works on a window: the state remembers the last plain cell
//! read (it may turn into the new head cell when the head moves left), or
//! the state the head moved into (the next cell becomes the head cell).

use thiserror::Error;

use crate::machines::{
    Direction, Edge, Nft, StateId, States, TuringMachine, HEAD_MARK, MODE_COPY, MODE_STEP, SEPARATOR,
};
use crate::semantics::{Cell, Configuration};
use crate::words::{Alphabet, Symbol, Word, BLANK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("the machine halts after {steps} steps, before step {wanted}")]
    RunTooShort { steps: usize, wanted: usize },
}

/// Which mode token ends a reduction input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Copy,
    Step,
}

impl Mode {
    pub fn token(self) -> &'static str {
        match self {
            Mode::Copy => MODE_COPY,
            Mode::Step => MODE_STEP,
        }
    }
}

/// The token vocabulary of a machine: plain symbols, head tokens `q@x`
/// (state-major, blank last), the separator, and the two mode tokens.
pub fn vocabulary(tm: &TuringMachine) -> Vec<String> {
    let mut v: Vec<String> = tm.alphabet().symbols().iter().map(|s| s.to_string()).collect();
    for q in 0..tm.num_states() {
        for x in heads_scanned(tm) {
            v.push(Cell::Head { state: q, symbol: x }.token(tm));
        }
    }
    v.push(SEPARATOR.to_string());
    v.push(MODE_COPY.to_string());
    v.push(MODE_STEP.to_string());
    v
}

fn heads_scanned(tm: &TuringMachine) -> impl Iterator<Item = Option<u32>> {
    (0..tm.alphabet().len() as u32).map(Some).chain(std::iter::once(None))
}

pub fn encode_configuration(tm: &TuringMachine, c: &Configuration) -> Word {
    Word::from_tokens(&c.tokens(tm)).expect("configuration tokens are valid symbols")
}

pub fn successor_configuration(tm: &TuringMachine, c: &Configuration) -> Option<Configuration> {
    c.successor(tm)
}

/// The generated transducer plus a legend explaining its tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionNft {
    pub nft: Nft,
    pub legend: Vec<String>,
}

impl ReductionNft {
    /// Machine text preceded by the `# legend:` comment block.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# legend:\n");
        for line in &self.legend {
            out.push_str("#   ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.nft.to_text());
        out
    }
}

struct Layout {
    start: StateId,
    copy_open: StateId,
    copy_head: StateId,
    copy_sep: StateId,
    done: StateId,
    step_sep: StateId,
    step_tail: StateId,
    /// One buffer state per tape symbol.
    step_buf: StateId,
    /// One state per machine state the head is about to enter.
    step_right: StateId,
}

pub fn tm_to_nft(tm: &TuringMachine) -> ReductionNft {
    let vocab = Alphabet::from_tokens(&vocabulary(tm)).expect("vocabulary tokens are distinct");
    let n_sym = tm.alphabet().len();
    let mut names: Vec<String> =
        ["start", "copy_open", "copy_head", "copy_sep", "done", "step_sep", "step_tail"].map(String::from).to_vec();
    let l = Layout {
        start: 0,
        copy_open: 1,
        copy_head: 2,
        copy_sep: 3,
        done: 4,
        step_sep: 5,
        step_tail: 6,
        step_buf: 7,
        step_right: 7 + n_sym,
    };
    names.extend(tm.alphabet().symbols().iter().map(|s| format!("step_buf_{s}")));
    names.extend(tm.states().names().iter().map(|q| format!("step_right_{q}")));

    let id = |t: &str| vocab.id_of_token(t).expect("token in vocabulary");
    let plain = |x: u32| x;
    let head = |q: StateId, x: Option<u32>| id(&Cell::Head { state: q, symbol: x }.token(tm));
    let sep = id(SEPARATOR);
    let mut edges: Vec<(StateId, u32, Edge)> = Vec::new();
    let mut add = |from: StateId, sym: u32, to: StateId, output: Vec<u32>| edges.push((from, sym, Edge { target: to, output }));

    // copy mode
    for x in 0..n_sym as u32 {
        for from in [l.copy_open, l.copy_sep, l.start] {
            add(from, plain(x), l.copy_open, vec![plain(x)]);
        }
        add(l.copy_head, plain(x), l.copy_head, vec![plain(x)]);
    }
    for q in 0..tm.num_states() {
        for x in heads_scanned(tm) {
            for from in [l.copy_open, l.copy_sep, l.start] {
                add(from, head(q, x), l.copy_head, vec![head(q, x)]);
            }
        }
    }
    add(l.copy_head, sep, l.copy_sep, vec![sep]);
    add(l.copy_sep, id(MODE_COPY), l.done, vec![]);

    // step mode; transitions leaving step_sep are mirrored from start with
    // the initial configuration emitted first
    let mut step_edges: Vec<(StateId, u32, StateId, Vec<u32>)> = Vec::new();
    for x in 0..n_sym as u32 {
        step_edges.push((l.step_sep, plain(x), l.step_buf + x as usize, vec![]));
        for y in 0..n_sym as u32 {
            step_edges.push((l.step_buf + y as usize, plain(x), l.step_buf + x as usize, vec![plain(y)]));
        }
        step_edges.push((l.step_tail, plain(x), l.step_tail, vec![plain(x)]));
    }
    step_edges.push((l.step_tail, sep, l.step_sep, vec![sep]));
    for q in 0..tm.num_states() {
        for x in 0..n_sym as u32 {
            step_edges.push((l.step_right + q, plain(x), l.step_tail, vec![head(q, Some(x))]));
        }
        step_edges.push((l.step_right + q, sep, l.step_sep, vec![head(q, None), sep]));
    }
    for q in 0..tm.num_states() {
        for s in heads_scanned(tm) {
            if tm.is_accepting(q) {
                continue;
            }
            let Some(rule) = tm.rule(q, s) else { continue };
            let w = plain(rule.write);
            let lefts = std::iter::once((l.step_sep, None)).chain((0..n_sym as u32).map(|y| (l.step_buf + y as usize, Some(y))));
            for (from, left) in lefts {
                let (to, out) = match rule.direction {
                    Direction::Right => {
                        let mut out: Vec<u32> = left.map(plain).into_iter().collect();
                        out.push(w);
                        (l.step_right + rule.target, out)
                    }
                    Direction::Left => (l.step_tail, vec![head(rule.target, left), w]),
                };
                step_edges.push((from, head(q, s), to, out));
            }
        }
    }
    step_edges.push((l.step_sep, id(MODE_STEP), l.done, vec![]));
    let initial: Vec<u32> = vec![head(tm.initial(), None), sep];
    for (from, sym, to, out) in step_edges {
        if from == l.step_sep && sym != id(MODE_STEP) {
            let mut prefixed = initial.clone();
            prefixed.extend_from_slice(&out);
            add(l.start, sym, to, prefixed);
        }
        add(from, sym, to, out);
    }

    let mut accepting = vec![false; names.len()];
    accepting[l.done] = true;
    let states = States::new(&names).expect("generated state names are distinct");
    let nft = Nft::from_parts(states, vocab.clone(), vocab, l.start, accepting, edges).expect("generated machine is valid");
    ReductionNft { nft, legend: legend(tm) }
}

fn legend(tm: &TuringMachine) -> Vec<String> {
    let syms: Vec<&str> = tm.alphabet().symbols().iter().map(Symbol::as_str).collect();
    vec![
        format!("tape symbols: {}", syms.join(" ")),
        format!("<state>{HEAD_MARK}<symbol>: head cell, {BLANK} = blank"),
        format!("{SEPARATOR}: ends a configuration"),
        format!("{MODE_COPY}: copy mode, echo the input without this token"),
        format!("{MODE_STEP}: step mode, emit the initial configuration then each successor"),
    ]
}

/// `enc(c0) ;; enc(c1) ;; ... ;; enc(ck) ;; <mode>` from the first `k`
/// steps of the machine's run.
pub fn build_reduction_input(tm: &TuringMachine, k: usize, mode: Mode) -> Result<Word, ReductionError> {
    let configs = run_prefix(tm, k)?;
    let mut tokens = configs_tokens(tm, &configs);
    tokens.push(mode.token().to_string());
    Ok(Word::from_tokens(&tokens).expect("reduction tokens are valid symbols"))
}

/// The first `k + 1` configurations of the run.
pub fn run_prefix(tm: &TuringMachine, k: usize) -> Result<Vec<Configuration>, ReductionError> {
    let mut configs = vec![Configuration::initial(tm)];
    while configs.len() <= k {
        match configs.last().expect("non-empty").successor(tm) {
            Some(c) => configs.push(c),
            None => return Err(ReductionError::RunTooShort { steps: configs.len() - 1, wanted: k }),
        }
    }
    Ok(configs)
}

/// Tokens of configurations, each followed by the separator.
pub fn configs_tokens(tm: &TuringMachine, configs: &[Configuration]) -> Vec<String> {
    let mut tokens = Vec::new();
    for c in configs {
        tokens.extend(c.tokens(tm));
        tokens.push(SEPARATOR.to_string());
    }
    tokens
}

/// The separated encoding of a configuration sequence as a word.
pub fn configs_word(tm: &TuringMachine, configs: &[Configuration]) -> Word {
    Word::from_tokens(&configs_tokens(tm, configs)).expect("reduction tokens are valid symbols")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus;
    use crate::machines::TmBuilder;
    use crate::semantics::{nft_membership, nft_outputs, tm_run};

    fn tokens(s: &str) -> Word {
        Word::from_tokens(&s.split_whitespace().collect::<Vec<_>>()).unwrap()
    }

    fn outputs(r: &ReductionNft, input: &Word) -> Vec<Word> {
        nft_outputs(&r.nft, input, 10).value
    }

    #[test]
    fn encoding_and_successor() {
        let tm = corpus::walker_tm();
        let c0 = Configuration::initial(&tm);
        assert_eq!(encode_configuration(&tm, &c0), tokens("p@."));
        let run = tm_run(&tm, 2);
        assert_eq!(encode_configuration(&tm, &run.configs[2]), tokens("1 1 p@."));
        assert_eq!(encode_configuration(&tm, &successor_configuration(&tm, &c0).unwrap()), tokens("1 p@."));
        let stopper = corpus::stopper_tm();
        assert_eq!(successor_configuration(&stopper, &Configuration::initial(&stopper)), None);
    }

    #[test]
    fn walker_modes() {
        let r = tm_to_nft(&corpus::walker_tm());
        assert!(nft_membership(&r.nft, &tokens("p@. ;; copy"), &tokens("p@. ;;")));
        assert!(nft_membership(&r.nft, &tokens("p@. ;; step"), &tokens("p@. ;; 1 p@. ;;")));
        assert_eq!(outputs(&r, &tokens("1 p@. ;; step")), vec![tokens("p@. ;; 1 1 p@. ;;")]);
        assert!(outputs(&r, &tokens("step")).is_empty());
        assert!(outputs(&r, &tokens("copy")).is_empty());
    }

    #[test]
    fn stopper_step_mode_aborts() {
        let r = tm_to_nft(&corpus::stopper_tm());
        assert!(outputs(&r, &tokens("q0@. ;; step")).is_empty());
        assert_eq!(outputs(&r, &tokens("q0@. ;; copy")), vec![tokens("q0@. ;;")]);
    }

    #[test]
    fn reduction_inputs() {
        let tm = corpus::walker_tm();
        assert_eq!(build_reduction_input(&tm, 0, Mode::Copy).unwrap(), tokens("p@. ;; copy"));
        assert_eq!(
            build_reduction_input(&tm, 2, Mode::Step).unwrap(),
            tokens("p@. ;; 1 p@. ;; 1 1 p@. ;; step")
        );
        assert_eq!(
            build_reduction_input(&corpus::stopper_tm(), 1, Mode::Copy),
            Err(ReductionError::RunTooShort { steps: 0, wanted: 1 })
        );
    }

    /// A machine moving in both directions: writes a, steps left, writes b,
    /// steps right twice, then halts.
    fn zigzag() -> TuringMachine {
        TmBuilder::new()
            .states(&["s", "l", "r", "h"])
            .alphabet(&["a", "b"])
            .initial("s")
            .accepting(&["h"])
            .rule("s", ".", "l", "a", Direction::Left)
            .rule("l", ".", "r", "b", Direction::Right)
            .rule("r", "a", "h", "a", Direction::Right)
            .build()
            .unwrap()
    }

    #[test]
    fn step_mode_matches_simulator() {
        for tm in [corpus::walker_tm(), zigzag()] {
            let r = tm_to_nft(&tm);
            let mut c = Configuration::initial(&tm);
            for _ in 0..6 {
                let Some(next) = c.successor(&tm) else { break };
                let mut input = configs_tokens(&tm, std::slice::from_ref(&c));
                input.push(MODE_STEP.to_string());
                let expect = configs_word(&tm, &[Configuration::initial(&tm), next.clone()]);
                assert_eq!(outputs(&r, &Word::from_tokens(&input).unwrap()), vec![expect]);
                c = next;
            }
        }
    }

    #[test]
    fn zigzag_configurations() {
        let tm = zigzag();
        let run = tm_run(&tm, 10);
        let rendered: Vec<String> = run.configs.iter().map(|c| c.render(&tm)).collect();
        assert_eq!(rendered, vec!["s@.", "l@. a", "b r@a", "b a h@."]);
    }

    #[test]
    fn corrupt_inputs_rejected() {
        let r = tm_to_nft(&corpus::walker_tm());
        for bad in ["p@. p@. ;; copy", "1 ;; copy", "p@. copy ;; copy", "p@. ;; copy copy", "p@. ;;", "p@. ;; 1 p@. step"] {
            assert!(outputs(&r, &tokens(bad)).is_empty(), "{bad}");
        }
    }

    #[test]
    fn legend_precedes_machine() {
        let r = tm_to_nft(&corpus::walker_tm());
        let text = r.to_text();
        assert!(text.starts_with("# legend:\n#   tape symbols: 1\n"));
        assert_eq!(Nft::parse(&text).unwrap(), r.nft);
    }
}
