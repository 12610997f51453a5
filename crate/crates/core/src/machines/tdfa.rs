use std::fmt;

use serde::Serialize;

use super::{MachineError, StateId, States};
use crate::words::{Alphabet, Symbol};

/// Head movement of one tape in a 2DFA step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Move {
    Stay,
    Advance,
}

impl Move {
    pub fn letter(self) -> char {
        match self {
            Move::Stay => 'S',
            Move::Advance => 'A',
        }
    }

    pub fn from_letter(s: &str) -> Option<Move> {
        match s {
            "S" => Some(Move::Stay),
            "A" => Some(Move::Advance),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TdfaRule {
    pub target: StateId,
    pub input_move: Move,
    pub output_move: Move,
}

impl TdfaRule {
    /// Checks the head constraints for a rule reading the given pair
    /// (`None` = blank): blank heads stay and at least one head advances.
    pub fn check(input: Option<u32>, output: Option<u32>, m1: Move, m2: Move) -> Result<(), MachineError> {
        if (input.is_none() && m1 == Move::Advance) || (output.is_none() && m2 == Move::Advance) {
            return Err(MachineError::BlankMustStay);
        }
        if m1 == Move::Stay && m2 == Move::Stay {
            return Err(MachineError::NoHeadAdvances);
        }
        Ok(())
    }
}

/// Two-tape deterministic finite automaton with one-way heads.
///
/// The transition table is partial; a missing entry is an implicit
/// rejecting dead end. Read symbols are `Some(id)` or `None` for the blank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tdfa {
    states: States,
    input: Alphabet,
    output: Alphabet,
    initial: StateId,
    accepting: Vec<bool>,
    table: Vec<Option<TdfaRule>>,
}

impl Tdfa {
    pub fn states(&self) -> &States {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        self.states.name(q)
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    fn slot(&self, q: StateId, input: Option<u32>, output: Option<u32>) -> usize {
        let ni = self.input.len() + 1;
        let no = self.output.len() + 1;
        let i = input.map_or(ni - 1, |x| x as usize);
        let o = output.map_or(no - 1, |x| x as usize);
        (q * ni + i) * no + o
    }

    pub fn rule(&self, q: StateId, input: Option<u32>, output: Option<u32>) -> Option<&TdfaRule> {
        self.table[self.slot(q, input, output)].as_ref()
    }

    /// All rules in canonical order: state, input (blank last), output
    /// (blank last).
    pub fn rules(&self) -> impl Iterator<Item = (StateId, Option<u32>, Option<u32>, &TdfaRule)> + '_ {
        let ni = self.input.len();
        let no = self.output.len();
        let opt = |x: usize, n: usize| if x == n { None } else { Some(x as u32) };
        (0..self.num_states()).flat_map(move |q| {
            (0..=ni).flat_map(move |i| {
                (0..=no).filter_map(move |o| {
                    let (a, b) = (opt(i, ni), opt(o, no));
                    self.rule(q, a, b).map(|r| (q, a, b, r))
                })
            })
        })
    }

    pub fn num_rules(&self) -> usize {
        self.table.iter().filter(|r| r.is_some()).count()
    }

    pub fn from_parts(
        states: States,
        input: Alphabet,
        output: Alphabet,
        initial: StateId,
        accepting: Vec<bool>,
        rules: impl IntoIterator<Item = (StateId, Option<u32>, Option<u32>, TdfaRule)>,
    ) -> Result<Self, MachineError> {
        if input.is_empty() {
            return Err(MachineError::EmptyAlphabet("input"));
        }
        if output.is_empty() {
            return Err(MachineError::EmptyAlphabet("output"));
        }
        let n = states.len();
        if initial >= n {
            return Err(MachineError::MissingInitial);
        }
        assert_eq!(accepting.len(), n, "accepting mask must cover every state");
        let size = n * (input.len() + 1) * (output.len() + 1);
        let mut m = Tdfa { states, input, output, initial, accepting, table: vec![None; size] };
        for (q, a, b, rule) in rules {
            if q >= n || rule.target >= n {
                return Err(MachineError::UnknownState(format!("#{}", q.max(rule.target))));
            }
            if a.is_some_and(|x| x as usize >= m.input.len()) || b.is_some_and(|x| x as usize >= m.output.len()) {
                return Err(MachineError::UnknownSymbol(format!("{a:?}/{b:?}")));
            }
            TdfaRule::check(a, b, rule.input_move, rule.output_move)?;
            let slot = m.slot(q, a, b);
            if m.table[slot].is_some() {
                return Err(MachineError::DuplicateTransition(format!(
                    "({}, {}, {})",
                    m.states.name(q),
                    render_read(&m.input, a),
                    render_read(&m.output, b)
                )));
            }
            m.table[slot] = Some(rule);
        }
        Ok(m)
    }
}

pub(crate) fn render_read(alpha: &Alphabet, x: Option<u32>) -> String {
    x.map_or_else(|| crate::words::BLANK.to_string(), |i| alpha.symbol(i).to_string())
}

/// Name-based construction; `"."` denotes the blank in reads.
#[derive(Debug, Clone, Default)]
pub struct TdfaBuilder {
    states: Vec<String>,
    input: Vec<String>,
    output: Vec<String>,
    initial: Option<String>,
    accepting: Vec<String>,
    rules: Vec<(String, String, String, String, Move, Move)>,
}

impl TdfaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn states<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.states = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn input<S: AsRef<str>>(mut self, syms: &[S]) -> Self {
        self.input = syms.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn output<S: AsRef<str>>(mut self, syms: &[S]) -> Self {
        self.output = syms.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn initial(mut self, q: &str) -> Self {
        self.initial = Some(q.to_string());
        self
    }

    pub fn accepting<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.accepting = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn rule(mut self, from: &str, input: &str, output: &str, to: &str, m1: Move, m2: Move) -> Self {
        self.rules.push((from.into(), input.into(), output.into(), to.into(), m1, m2));
        self
    }

    pub fn build(self) -> Result<Tdfa, MachineError> {
        let states = States::new(&self.states)?;
        let input = Alphabet::from_tokens(&self.input)?;
        let output = Alphabet::from_tokens(&self.output)?;
        let initial = states.id(self.initial.as_deref().ok_or(MachineError::MissingInitial)?)?;
        let mut accepting = vec![false; states.len()];
        for f in &self.accepting {
            accepting[states.id(f)?] = true;
        }
        let read = |alpha: &Alphabet, tok: &str| -> Result<Option<u32>, MachineError> {
            if tok == crate::words::BLANK {
                return Ok(None);
            }
            alpha
                .id(&Symbol::new(tok)?)
                .map(Some)
                .ok_or_else(|| MachineError::UnknownSymbol(tok.to_string()))
        };
        let mut rules = Vec::new();
        for (from, a, b, to, m1, m2) in &self.rules {
            rules.push((
                states.id(from)?,
                read(&input, a)?,
                read(&output, b)?,
                TdfaRule { target: states.id(to)?, input_move: *m1, output_move: *m2 },
            ));
        }
        Tdfa::from_parts(states, input, output, initial, accepting, rules)
    }
}
