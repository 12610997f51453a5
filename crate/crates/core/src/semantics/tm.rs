use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::machines::{Direction, StateId, TuringMachine, HEAD_MARK};
use crate::words::BLANK;

/// A tape cell of a configuration: a plain non-blank symbol, or the cell
/// under the head carrying the current state and the scanned symbol
/// (`None` = blank).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Plain(u32),
    Head { state: StateId, symbol: Option<u32> },
}

impl Cell {
    pub fn is_head(&self) -> bool {
        matches!(self, Cell::Head { .. })
    }

    /// Token rendering: `x` for plain cells, `q@x` (or `q@.`) for the head.
    pub fn token(&self, tm: &TuringMachine) -> String {
        match *self {
            Cell::Plain(x) => tm.alphabet().symbol(x).to_string(),
            Cell::Head { state, symbol } => format!(
                "{}{HEAD_MARK}{}",
                tm.state_name(state),
                symbol.map_or(BLANK.to_string(), |x| tm.alphabet().symbol(x).to_string())
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("a configuration needs at least one cell")]
    Empty,
    #[error("a configuration needs exactly one head cell, found {0}")]
    HeadCount(usize),
}

/// The visited part of the tape with exactly one head cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    cells: Vec<Cell>,
}

impl Configuration {
    pub fn new(cells: Vec<Cell>) -> Result<Self, ConfigError> {
        if cells.is_empty() {
            return Err(ConfigError::Empty);
        }
        let heads = cells.iter().filter(|c| c.is_head()).count();
        if heads != 1 {
            return Err(ConfigError::HeadCount(heads));
        }
        Ok(Configuration { cells })
    }

    /// A single blank cell scanned in the initial state.
    pub fn initial(tm: &TuringMachine) -> Self {
        Configuration { cells: vec![Cell::Head { state: tm.initial(), symbol: None }] }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn head_position(&self) -> usize {
        self.cells.iter().position(Cell::is_head).expect("validated")
    }

    pub fn head(&self) -> (StateId, Option<u32>) {
        match self.cells[self.head_position()] {
            Cell::Head { state, symbol } => (state, symbol),
            Cell::Plain(_) => unreachable!(),
        }
    }

    /// Halting: the state is accepting or no rule applies.
    pub fn is_halting(&self, tm: &TuringMachine) -> bool {
        let (q, s) = self.head();
        tm.is_accepting(q) || tm.rule(q, s).is_none()
    }

    /// The configuration after one step, growing by a blank head cell when
    /// the head leaves the visited region; `None` when halting.
    pub fn successor(&self, tm: &TuringMachine) -> Option<Configuration> {
        let h = self.head_position();
        let (q, s) = self.head();
        if tm.is_accepting(q) {
            return None;
        }
        let rule = tm.rule(q, s)?;
        let mut cells = self.cells.clone();
        cells[h] = Cell::Plain(rule.write);
        let enter = |c: Cell| match c {
            Cell::Plain(x) => Cell::Head { state: rule.target, symbol: Some(x) },
            Cell::Head { .. } => unreachable!("single head"),
        };
        match rule.direction {
            Direction::Right if h + 1 < cells.len() => cells[h + 1] = enter(cells[h + 1]),
            Direction::Right => cells.push(Cell::Head { state: rule.target, symbol: None }),
            Direction::Left if h > 0 => cells[h - 1] = enter(cells[h - 1]),
            Direction::Left => cells.insert(0, Cell::Head { state: rule.target, symbol: None }),
        }
        Some(Configuration { cells })
    }

    pub fn tokens(&self, tm: &TuringMachine) -> Vec<String> {
        self.cells.iter().map(|c| c.token(tm)).collect()
    }

    pub fn render(&self, tm: &TuringMachine) -> String {
        self.tokens(tm).join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RunStatus {
    Halted,
    Looping,
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmRun {
    pub configs: Vec<Configuration>,
    pub status: RunStatus,
}

/// Runs `tm` on the empty input for at most `max_steps` steps.
pub fn tm_run(tm: &TuringMachine, max_steps: usize) -> TmRun {
    let mut configs = vec![Configuration::initial(tm)];
    let mut seen: HashSet<Configuration> = configs.iter().cloned().collect();
    loop {
        let cur = configs.last().expect("non-empty");
        let Some(next) = cur.successor(tm) else {
            return TmRun { configs, status: RunStatus::Halted };
        };
        if configs.len() > max_steps {
            return TmRun { configs, status: RunStatus::StepLimit };
        }
        if !seen.insert(next.clone()) {
            return TmRun { configs, status: RunStatus::Looping };
        }
        configs.push(next);
    }
}
