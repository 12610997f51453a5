use std::fmt;

use super::{MachineError, StateId, States};
use crate::words::{Alphabet, Symbol, BLANK};

/// Configuration separator token in reduction words.
pub const SEPARATOR: &str = ";;";
pub const MODE_COPY: &str = "copy";
pub const MODE_STEP: &str = "step";
/// Joins state and scanned symbol in a head-cell token (`q@x`).
pub const HEAD_MARK: char = '@';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn letter(self) -> char {
        match self {
            Direction::Left => 'L',
            Direction::Right => 'R',
        }
    }

    pub fn from_letter(s: &str) -> Option<Direction> {
        match s {
            "L" => Some(Direction::Left),
            "R" => Some(Direction::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmRule {
    pub target: StateId,
    /// Written symbol; never the blank.
    pub write: u32,
    pub direction: Direction,
}

/// Deterministic single-tape Turing machine with a partial transition
/// function over `alphabet ∪ {blank}` (blank = `None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    states: States,
    alphabet: Alphabet,
    initial: StateId,
    accepting: Vec<bool>,
    table: Vec<Option<TmRule>>,
}

fn is_reserved(token: &str) -> bool {
    token.contains(HEAD_MARK) || matches!(token, SEPARATOR | MODE_COPY | MODE_STEP)
}

impl TuringMachine {
    pub fn states(&self) -> &States {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        self.states.name(q)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    fn slot(&self, q: StateId, read: Option<u32>) -> usize {
        let n = self.alphabet.len() + 1;
        q * n + read.map_or(n - 1, |x| x as usize)
    }

    pub fn rule(&self, q: StateId, read: Option<u32>) -> Option<&TmRule> {
        self.table[self.slot(q, read)].as_ref()
    }

    /// Rules in canonical order: state, then read symbol (blank first).
    pub fn rules(&self) -> impl Iterator<Item = (StateId, Option<u32>, &TmRule)> + '_ {
        let n = self.alphabet.len() as u32;
        (0..self.num_states()).flat_map(move |q| {
            std::iter::once(None)
                .chain((0..n).map(Some))
                .filter_map(move |r| self.rule(q, r).map(|rule| (q, r, rule)))
        })
    }

    pub fn num_rules(&self) -> usize {
        self.table.iter().filter(|r| r.is_some()).count()
    }

    pub fn render_symbol(&self, x: Option<u32>) -> String {
        super::tdfa::render_read(&self.alphabet, x)
    }

    /// Assembles a machine; state names and tape symbols may not contain
    /// `@` or coincide with the reduction's separator and mode tokens.
    pub fn from_parts(
        states: States,
        alphabet: Alphabet,
        initial: StateId,
        accepting: Vec<bool>,
        rules: impl IntoIterator<Item = (StateId, Option<u32>, TmRule)>,
    ) -> Result<Self, MachineError> {
        if alphabet.is_empty() {
            return Err(MachineError::EmptyAlphabet("tape"));
        }
        let reserved = states
            .names()
            .iter()
            .map(String::as_str)
            .chain(alphabet.symbols().iter().map(Symbol::as_str))
            .find(|t| is_reserved(t));
        if let Some(t) = reserved {
            return Err(MachineError::ReservedToken(t.to_string()));
        }
        let n = states.len();
        if initial >= n {
            return Err(MachineError::MissingInitial);
        }
        assert_eq!(accepting.len(), n, "accepting mask must cover every state");
        let size = n * (alphabet.len() + 1);
        let mut m = TuringMachine { states, alphabet, initial, accepting, table: vec![None; size] };
        for (q, read, rule) in rules {
            if q >= n || rule.target >= n {
                return Err(MachineError::UnknownState(format!("#{}", q.max(rule.target))));
            }
            if read.is_some_and(|x| x as usize >= m.alphabet.len()) || rule.write as usize >= m.alphabet.len() {
                return Err(MachineError::UnknownSymbol(format!("{read:?}/{}", rule.write)));
            }
            let slot = m.slot(q, read);
            if m.table[slot].is_some() {
                return Err(MachineError::DuplicateTransition(format!(
                    "({}, {})",
                    m.states.name(q),
                    m.render_symbol(read)
                )));
            }
            m.table[slot] = Some(rule);
        }
        Ok(m)
    }
}

/// Name-based construction; `"."` is the blank.
#[derive(Debug, Clone, Default)]
pub struct TmBuilder {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: Option<String>,
    accepting: Vec<String>,
    rules: Vec<(String, String, String, String, Direction)>,
}

impl TmBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn states<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.states = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn alphabet<S: AsRef<str>>(mut self, syms: &[S]) -> Self {
        self.alphabet = syms.iter().map(|s| s.as_ref().to_string()).collect();
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

    pub fn rule(mut self, from: &str, read: &str, to: &str, write: &str, dir: Direction) -> Self {
        self.rules.push((from.into(), read.into(), to.into(), write.into(), dir));
        self
    }

    pub fn build(self) -> Result<TuringMachine, MachineError> {
        let states = States::new(&self.states)?;
        let alphabet = Alphabet::from_tokens(&self.alphabet)?;
        let initial = states.id(self.initial.as_deref().ok_or(MachineError::MissingInitial)?)?;
        let mut accepting = vec![false; states.len()];
        for f in &self.accepting {
            accepting[states.id(f)?] = true;
        }
        let sym = |tok: &str| -> Result<u32, MachineError> {
            alphabet
                .id(&Symbol::new(tok)?)
                .ok_or_else(|| MachineError::UnknownSymbol(tok.to_string()))
        };
        let mut rules = Vec::new();
        for (from, read, to, write, dir) in &self.rules {
            if write == BLANK {
                return Err(MachineError::BlankWrite);
            }
            let read = if read == BLANK { None } else { Some(sym(read)?) };
            rules.push((states.id(from)?, read, TmRule { target: states.id(to)?, write: sym(write)?, direction: *dir }));
        }
        TuringMachine::from_parts(states, alphabet, initial, accepting, rules)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_names_rejected() {
        for (state, sym) in [("p@q", "1"), ("p", "a@b"), ("copy", "1"), ("p", ";;"), ("p", "step")] {
            let r = TmBuilder::new().states(&[state]).alphabet(&[sym]).initial(state).build();
            assert!(matches!(r, Err(MachineError::ReservedToken(_))), "{state} {sym}");
        }
    }

    #[test]
    fn blank_write_rejected() {
        let r = TmBuilder::new()
            .states(&["p"])
            .alphabet(&["1"])
            .initial("p")
            .rule("p", ".", "p", ".", Direction::Right)
            .build();
        assert_eq!(r, Err(MachineError::BlankWrite));
    }
}
