//! Machine models: nondeterministic finite transducers, two-tape
//! deterministic automata and single-tape Turing machines, plus the shared
//! text format.

mod format;
mod nft;
mod tdfa;
mod tm;

use std::collections::HashMap;

use thiserror::Error;

use crate::words::{is_valid_token, WordError};

pub use format::{parse_machine, serialize_machine, ParseError, ParseErrorKind};
pub use nft::{Edge, Nft, NftBuilder};
pub use tdfa::{Move, Tdfa, TdfaBuilder, TdfaRule};
pub use tm::{Direction, TmBuilder, TmRule, TuringMachine, HEAD_MARK, MODE_COPY, MODE_STEP, SEPARATOR};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("state set is empty")]
    NoStates,
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("undeclared state {0:?}")]
    UnknownState(String),
    #[error("undeclared symbol {0:?}")]
    UnknownSymbol(String),
    #[error("{0} alphabet is empty")]
    EmptyAlphabet(&'static str),
    #[error("initial state is not declared")]
    MissingInitial,
    #[error("reserved token {0:?} used as a state or symbol")]
    ReservedToken(String),
    #[error("no head advances in this transition")]
    NoHeadAdvances,
    #[error("head reading the blank must stay")]
    BlankMustStay,
    #[error("duplicate transition for key {0}")]
    DuplicateTransition(String),
    #[error("a Turing machine may not write the blank")]
    BlankWrite,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Declared state names with their dense ids (declaration order).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct States {
    names: Vec<String>,
    index: HashMap<String, StateId>,
}

impl States {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, MachineError> {
        if names.is_empty() {
            return Err(MachineError::NoStates);
        }
        let mut s = States::default();
        for n in names {
            let n = n.as_ref();
            if !is_valid_token(n) {
                return Err(MachineError::ReservedToken(n.to_string()));
            }
            if s.index.insert(n.to_string(), s.names.len()).is_some() {
                return Err(MachineError::DuplicateState(n.to_string()));
            }
            s.names.push(n.to_string());
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: StateId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Result<StateId, MachineError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| MachineError::UnknownState(name.to_string()))
    }
}

/// Any machine the text format can describe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Nft(Nft),
    Tdfa(Tdfa),
    Tm(TuringMachine),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineKind {
    Nft,
    Tdfa,
    Tm,
}

impl MachineKind {
    pub fn keyword(self) -> &'static str {
        match self {
            MachineKind::Nft => "nft",
            MachineKind::Tdfa => "tdfa",
            MachineKind::Tm => "tm",
        }
    }
}

impl Machine {
    pub fn kind(&self) -> MachineKind {
        match self {
            Machine::Nft(_) => MachineKind::Nft,
            Machine::Tdfa(_) => MachineKind::Tdfa,
            Machine::Tm(_) => MachineKind::Tm,
        }
    }
}

impl From<Nft> for Machine {
    fn from(m: Nft) -> Self {
        Machine::Nft(m)
    }
}

impl From<Tdfa> for Machine {
    fn from(m: Tdfa) -> Self {
        Machine::Tdfa(m)
    }
}

impl From<TuringMachine> for Machine {
    fn from(m: TuringMachine) -> Self {
        Machine::Tm(m)
    }
}
