use super::{MachineError, StateId, States};
use crate::words::{Alphabet, Symbol, Word};

/// One nondeterministic option: move to `target` and emit `output`
/// (output-alphabet ids).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub target: StateId,
    pub output: Vec<u32>,
}

/// A nondeterministic finite transducer without λ-transitions.
///
/// `delta[q][σ]` is the finite, possibly empty set of options when reading
/// `σ` in `q`, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nft {
    states: States,
    input: Alphabet,
    output: Alphabet,
    initial: StateId,
    accepting: Vec<bool>,
    delta: Vec<Vec<Vec<Edge>>>,
}

impl Nft {
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

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn edges(&self, q: StateId, sym: u32) -> &[Edge] {
        &self.delta[q][sym as usize]
    }

    /// All transitions as `(source, input symbol, edge)` in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, u32, &Edge)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, es)| es.iter().map(move |e| (q, a as u32, e)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions().count()
    }

    /// Assembles a transducer from id-level parts, validating every invariant.
    pub fn from_parts(
        states: States,
        input: Alphabet,
        output: Alphabet,
        initial: StateId,
        accepting: Vec<bool>,
        transitions: impl IntoIterator<Item = (StateId, u32, Edge)>,
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
        let mut delta = vec![vec![Vec::new(); input.len()]; n];
        for (q, a, e) in transitions {
            if q >= n || e.target >= n {
                return Err(MachineError::UnknownState(format!("#{}", q.max(e.target))));
            }
            if a as usize >= input.len() {
                return Err(MachineError::UnknownSymbol(format!("#{a}")));
            }
            if let Some(&bad) = e.output.iter().find(|&&o| o as usize >= output.len()) {
                return Err(MachineError::UnknownSymbol(format!("#{bad}")));
            }
            delta[q][a as usize].push(e);
        }
        for row in &mut delta {
            for es in row.iter_mut() {
                es.sort();
                es.dedup();
            }
        }
        Ok(Nft { states, input, output, initial, accepting, delta })
    }

    /// Same machine with a different accepting set.
    pub fn with_accepting(&self, accepting: Vec<bool>) -> Nft {
        assert_eq!(accepting.len(), self.num_states());
        Nft { accepting, ..self.clone() }
    }
}

/// Name-based construction, convenient for hand-written machines.
#[derive(Debug, Clone, Default)]
pub struct NftBuilder {
    states: Vec<String>,
    input: Vec<String>,
    output: Vec<String>,
    initial: Option<String>,
    accepting: Vec<String>,
    transitions: Vec<(String, String, String, Word)>,
}

impl NftBuilder {
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

    pub fn transition(mut self, from: &str, sym: &str, to: &str, out: Word) -> Self {
        self.transitions.push((from.into(), sym.into(), to.into(), out));
        self
    }

    pub fn build(self) -> Result<Nft, MachineError> {
        let states = States::new(&self.states)?;
        let input = Alphabet::from_tokens(&self.input)?;
        let output = Alphabet::from_tokens(&self.output)?;
        let initial = states.id(self.initial.as_deref().ok_or(MachineError::MissingInitial)?)?;
        let mut accepting = vec![false; states.len()];
        for f in &self.accepting {
            accepting[states.id(f)?] = true;
        }
        let mut edges = Vec::with_capacity(self.transitions.len());
        for (from, sym, to, out) in &self.transitions {
            let a = input
                .id(&Symbol::new(sym)?)
                .ok_or_else(|| MachineError::UnknownSymbol(sym.clone()))?;
            let ids = output.encode(out).ok_or_else(|| {
                let bad = out.symbols().iter().find(|s| !output.contains(s)).unwrap();
                MachineError::UnknownSymbol(bad.to_string())
            })?;
            edges.push((states.id(from)?, a, Edge { target: states.id(to)?, output: ids }));
        }
        Nft::from_parts(states, input, output, initial, accepting, edges)
    }
}
