//! Line-oriented text format shared by all three machine kinds.
//!
//! ```text
//! machine nft            machine tdfa              machine tm
//! states q0 q1           states s0 s1              states p
//! input a b              input a b                 alphabet 1
//! output a b             output a b                initial p
//! initial q0             initial s0                accept
//! accept q0              accept s0                 t p . p 1 R
//! t q0 a q1 aba          t s0 a b s1 S A
//! ```
//!
//! `#` starts a comment; blank lines are ignored; `.` is the blank.

use std::fmt::{self, Write as _};

use thiserror::Error;

use super::{
    Direction, Edge, Machine, MachineError, MachineKind, Move, Nft, StateId, States, Tdfa, TdfaRule, TmRule,
    TuringMachine,
};
use crate::words::{Alphabet, Symbol, WordError, BLANK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] MachineError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    col: usize,
    text: &'a str,
}

#[derive(Debug)]
struct Line<'a> {
    no: usize,
    toks: Vec<Tok<'a>>,
}

impl<'a> Line<'a> {
    fn err_at(&self, tok: usize, kind: impl Into<ParseErrorKind>) -> ParseError {
        let column = self.toks.get(tok).map_or(1, |t| t.col);
        ParseError { line: self.no, column, kind: kind.into() }
    }

    fn syntax(&self, tok: usize, msg: impl Into<String>) -> ParseError {
        self.err_at(tok, ParseErrorKind::Syntax(msg.into()))
    }

    fn args(&self) -> impl Iterator<Item = &'a str> + '_ {
        self.toks[1..].iter().map(|t| t.text)
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (pos, c) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    let col = content[..s].chars().count() + 1;
                    toks.push(Tok { col, text: &content[s..pos] });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            lines.push(Line { no: i + 1, toks });
        }
    }
    lines
}

impl From<WordError> for ParseErrorKind {
    fn from(e: WordError) -> Self {
        ParseErrorKind::Invalid(MachineError::Word(e))
    }
}

#[derive(Default)]
struct Headers<'t, 'a> {
    states: Option<&'t Line<'a>>,
    input: Option<&'t Line<'a>>,
    output: Option<&'t Line<'a>>,
    alphabet: Option<&'t Line<'a>>,
    initial: Option<&'t Line<'a>>,
    accept: Option<&'t Line<'a>>,
    transitions: Vec<&'t Line<'a>>,
}

/// Parses and validates a machine description.
pub fn parse_machine(text: &str) -> Result<Machine, ParseError> {
    let lines = tokenize(text);
    let Some(first) = lines.first() else {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::Syntax("empty machine file".into()) });
    };
    if first.toks[0].text != "machine" || first.toks.len() != 2 {
        return Err(first.syntax(0, "expected `machine nft|tdfa|tm` as the first line"));
    }
    let kind = match first.toks[1].text {
        "nft" => MachineKind::Nft,
        "tdfa" => MachineKind::Tdfa,
        "tm" => MachineKind::Tm,
        other => return Err(first.syntax(1, format!("unknown machine kind {other:?}"))),
    };
    let mut h = Headers::default();
    for line in &lines[1..] {
        let slot = match (line.toks[0].text, kind) {
            ("t", _) => {
                h.transitions.push(line);
                continue;
            }
            ("states", _) => &mut h.states,
            ("initial", _) => &mut h.initial,
            ("accept", _) => &mut h.accept,
            ("input", MachineKind::Nft | MachineKind::Tdfa) => &mut h.input,
            ("output", MachineKind::Nft | MachineKind::Tdfa) => &mut h.output,
            ("alphabet", MachineKind::Tm) => &mut h.alphabet,
            (kw, _) => return Err(line.syntax(0, format!("unexpected keyword {kw:?} in a {} file", kind.keyword()))),
        };
        if slot.is_some() {
            return Err(line.syntax(0, format!("duplicate `{}` declaration", line.toks[0].text)));
        }
        *slot = Some(line);
    }
    fn require<'l, 'a>(first: &Line<'a>, l: Option<&'l Line<'a>>, kw: &str) -> Result<&'l Line<'a>, ParseError> {
        l.ok_or_else(|| first.syntax(0, format!("missing `{kw}` declaration")))
    }
    let states_line = require(first, h.states, "states")?;
    let states = States::new(&states_line.args().collect::<Vec<_>>()).map_err(|e| locate_state_error(states_line, e))?;
    let initial_line = require(first, h.initial, "initial")?;
    if initial_line.toks.len() != 2 {
        return Err(initial_line.syntax(0, "`initial` takes exactly one state"));
    }
    let initial = states.id(initial_line.toks[1].text).map_err(|e| initial_line.err_at(1, e))?;
    let mut accepting = vec![false; states.len()];
    if let Some(acc) = h.accept {
        for (i, name) in acc.args().enumerate() {
            accepting[states.id(name).map_err(|e| acc.err_at(i + 1, e))?] = true;
        }
    }
    match kind {
        MachineKind::Nft | MachineKind::Tdfa => {
            let input = alphabet_from(require(first, h.input, "input")?)?;
            let output = alphabet_from(require(first, h.output, "output")?)?;
            if kind == MachineKind::Nft {
                let mut edges = Vec::new();
                for line in &h.transitions {
                    edges.push(nft_transition(line, &states, &input, &output)?);
                }
                Nft::from_parts(states, input, output, initial, accepting, edges)
                    .map(Machine::Nft)
                    .map_err(|e| first.err_at(0, e))
            } else {
                let mut rules: Vec<(StateId, Option<u32>, Option<u32>, TdfaRule)> = Vec::new();
                let mut seen = std::collections::HashSet::new();
                for line in &h.transitions {
                    let r = tdfa_transition(line, &states, &input, &output)?;
                    if !seen.insert((r.0, r.1, r.2)) {
                        return Err(line.err_at(
                            1,
                            MachineError::DuplicateTransition(format!(
                                "({}, {}, {})",
                                line.toks[1].text, line.toks[2].text, line.toks[3].text
                            )),
                        ));
                    }
                    rules.push(r);
                }
                Tdfa::from_parts(states, input, output, initial, accepting, rules)
                    .map(Machine::Tdfa)
                    .map_err(|e| first.err_at(0, e))
            }
        }
        MachineKind::Tm => {
            let alpha_line = require(first, h.alphabet, "alphabet")?;
            let alphabet = alphabet_from(alpha_line)?;
            let mut rules = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for line in &h.transitions {
                let r = tm_transition(line, &states, &alphabet)?;
                if !seen.insert((r.0, r.1)) {
                    return Err(line.err_at(
                        1,
                        MachineError::DuplicateTransition(format!("({}, {})", line.toks[1].text, line.toks[2].text)),
                    ));
                }
                rules.push(r);
            }
            TuringMachine::from_parts(states, alphabet, initial, accepting, rules).map(Machine::Tm).map_err(|e| {
                let col = match &e {
                    MachineError::ReservedToken(t) => states_line
                        .toks
                        .iter()
                        .chain(&alpha_line.toks)
                        .find(|k| k.text == t)
                        .map(|k| (if states_line.toks.iter().any(|s| s.text == t) { states_line } else { alpha_line }, k.col)),
                    _ => None,
                };
                match col {
                    Some((line, column)) => ParseError { line: line.no, column, kind: e.into() },
                    None => first.err_at(0, e),
                }
            })
        }
    }
}

fn locate_state_error(line: &Line<'_>, e: MachineError) -> ParseError {
    let idx = match &e {
        MachineError::DuplicateState(n) => line.toks.iter().rposition(|t| t.text == n),
        MachineError::ReservedToken(n) => line.toks.iter().skip(1).position(|t| t.text == n).map(|i| i + 1),
        _ => None,
    };
    line.err_at(idx.unwrap_or(0), e)
}

fn alphabet_from(line: &Line<'_>) -> Result<Alphabet, ParseError> {
    let mut syms = Vec::new();
    for (i, tok) in line.args().enumerate() {
        let s = Symbol::new(tok).map_err(|_| line.err_at(i + 1, MachineError::ReservedToken(tok.to_string())))?;
        if syms.contains(&s) {
            return Err(line.syntax(i + 1, format!("duplicate symbol {tok:?}")));
        }
        syms.push(s);
    }
    Alphabet::new(syms).map_err(|e| line.err_at(0, e))
}

fn expect_arity(line: &Line<'_>, n: usize, shape: &str) -> Result<(), ParseError> {
    if line.toks.len() != n {
        let at = line.toks.len().min(n).saturating_sub(1);
        return Err(line.syntax(at, format!("expected `{shape}`")));
    }
    Ok(())
}

fn symbol_in(line: &Line<'_>, idx: usize, alpha: &Alphabet) -> Result<u32, ParseError> {
    let tok = line.toks[idx].text;
    let s = Symbol::new(tok).map_err(|_| line.err_at(idx, MachineError::ReservedToken(tok.to_string())))?;
    alpha.id(&s).ok_or_else(|| line.err_at(idx, MachineError::UnknownSymbol(tok.to_string())))
}

fn read_in(line: &Line<'_>, idx: usize, alpha: &Alphabet) -> Result<Option<u32>, ParseError> {
    if line.toks[idx].text == BLANK {
        Ok(None)
    } else {
        symbol_in(line, idx, alpha).map(Some)
    }
}

fn state_in(line: &Line<'_>, idx: usize, states: &States) -> Result<StateId, ParseError> {
    states.id(line.toks[idx].text).map_err(|e| line.err_at(idx, e))
}

fn nft_transition(
    line: &Line<'_>,
    states: &States,
    input: &Alphabet,
    output: &Alphabet,
) -> Result<(StateId, u32, Edge), ParseError> {
    expect_arity(line, 5, "t <state> <input-symbol> <state> <output-word>")?;
    let from = state_in(line, 1, states)?;
    let sym = symbol_in(line, 2, input)?;
    let to = state_in(line, 3, states)?;
    let word = output.parse_word(line.toks[4].text).map_err(|e| line.err_at(4, e))?;
    let ids = output.encode(&word).expect("parse_word checks membership");
    Ok((from, sym, Edge { target: to, output: ids }))
}

fn tdfa_transition(
    line: &Line<'_>,
    states: &States,
    input: &Alphabet,
    output: &Alphabet,
) -> Result<(StateId, Option<u32>, Option<u32>, TdfaRule), ParseError> {
    expect_arity(line, 7, "t <state> <in> <out> <state> <S|A> <S|A>")?;
    let from = state_in(line, 1, states)?;
    let a = read_in(line, 2, input)?;
    let b = read_in(line, 3, output)?;
    let to = state_in(line, 4, states)?;
    let mv = |i: usize| Move::from_letter(line.toks[i].text).ok_or_else(|| line.syntax(i, "move must be S or A"));
    let (m1, m2) = (mv(5)?, mv(6)?);
    TdfaRule::check(a, b, m1, m2).map_err(|e| line.err_at(5, e))?;
    Ok((from, a, b, TdfaRule { target: to, input_move: m1, output_move: m2 }))
}

fn tm_transition(
    line: &Line<'_>,
    states: &States,
    alphabet: &Alphabet,
) -> Result<(StateId, Option<u32>, TmRule), ParseError> {
    expect_arity(line, 6, "t <state> <read> <state> <write> <L|R>")?;
    let from = state_in(line, 1, states)?;
    let read = read_in(line, 2, alphabet)?;
    let to = state_in(line, 3, states)?;
    if line.toks[4].text == BLANK {
        return Err(line.err_at(4, MachineError::BlankWrite));
    }
    let write = symbol_in(line, 4, alphabet)?;
    let direction = Direction::from_letter(line.toks[5].text).ok_or_else(|| line.syntax(5, "direction must be L or R"))?;
    Ok((from, read, TmRule { target: to, write, direction }))
}

fn header(out: &mut String, kw: &str, items: impl IntoIterator<Item = impl AsRef<str>>) {
    out.push_str(kw);
    for it in items {
        out.push(' ');
        out.push_str(it.as_ref());
    }
    out.push('\n');
}

fn common_header(out: &mut String, kind: MachineKind, states: &States) {
    let _ = writeln!(out, "machine {}", kind.keyword());
    header(out, "states", states.names());
}

fn accept_lines(out: &mut String, states: &States, initial: StateId, accepting: impl Fn(StateId) -> bool) {
    let _ = writeln!(out, "initial {}", states.name(initial));
    header(out, "accept", (0..states.len()).filter(|&q| accepting(q)).map(|q| states.name(q)));
}

/// Canonical text: states in declaration order, transitions sorted by
/// (source, symbol, target, output) in declaration order.
pub fn serialize_machine(m: &Machine) -> String {
    match m {
        Machine::Nft(n) => n.to_text(),
        Machine::Tdfa(a) => a.to_text(),
        Machine::Tm(t) => t.to_text(),
    }
}

impl Nft {
    pub fn parse(text: &str) -> Result<Nft, ParseError> {
        match parse_machine(text)? {
            Machine::Nft(n) => Ok(n),
            other => Err(kind_mismatch(MachineKind::Nft, other.kind())),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        common_header(&mut out, MachineKind::Nft, self.states());
        header(&mut out, "input", self.input().symbols().iter().map(Symbol::as_str));
        header(&mut out, "output", self.output().symbols().iter().map(Symbol::as_str));
        accept_lines(&mut out, self.states(), self.initial(), |q| self.is_accepting(q));
        for (q, a, e) in self.transitions() {
            let _ = writeln!(
                out,
                "t {} {} {} {}",
                self.state_name(q),
                self.input().symbol(a),
                self.state_name(e.target),
                self.output().render_ids(&e.output)
            );
        }
        out
    }
}

impl Tdfa {
    pub fn parse(text: &str) -> Result<Tdfa, ParseError> {
        match parse_machine(text)? {
            Machine::Tdfa(a) => Ok(a),
            other => Err(kind_mismatch(MachineKind::Tdfa, other.kind())),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        common_header(&mut out, MachineKind::Tdfa, self.states());
        header(&mut out, "input", self.input().symbols().iter().map(Symbol::as_str));
        header(&mut out, "output", self.output().symbols().iter().map(Symbol::as_str));
        accept_lines(&mut out, self.states(), self.initial(), |q| self.is_accepting(q));
        for (q, a, b, r) in self.rules() {
            let _ = writeln!(
                out,
                "t {} {} {} {} {} {}",
                self.state_name(q),
                super::tdfa::render_read(self.input(), a),
                super::tdfa::render_read(self.output(), b),
                self.state_name(r.target),
                r.input_move,
                r.output_move
            );
        }
        out
    }
}

impl TuringMachine {
    pub fn parse(text: &str) -> Result<TuringMachine, ParseError> {
        match parse_machine(text)? {
            Machine::Tm(t) => Ok(t),
            other => Err(kind_mismatch(MachineKind::Tm, other.kind())),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        common_header(&mut out, MachineKind::Tm, self.states());
        header(&mut out, "alphabet", self.alphabet().symbols().iter().map(Symbol::as_str));
        accept_lines(&mut out, self.states(), self.initial(), |q| self.is_accepting(q));
        for (q, read, r) in self.rules() {
            let _ = writeln!(
                out,
                "t {} {} {} {} {}",
                self.state_name(q),
                self.render_symbol(read),
                self.state_name(r.target),
                self.alphabet().symbol(r.write),
                r.direction
            );
        }
        out
    }
}

fn kind_mismatch(want: MachineKind, got: MachineKind) -> ParseError {
    ParseError {
        line: 1,
        column: 9,
        kind: ParseErrorKind::Syntax(format!("expected a {} machine, found {}", want.keyword(), got.keyword())),
    }
}
