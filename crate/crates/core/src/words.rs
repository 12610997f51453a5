//! Symbols, words, and the prefix distance used by the variation analyses.
//!
//! Symbols are opaque text tokens rather than characters so that one word
//! model serves plain alphabets (`a`, `b`) as well as the composite cell
//! tokens produced by the Turing machine reduction (`p@1`, `;;`).
//!
//! Text syntax for words:
//!
//! * `_` is the empty word;
//! * `[tok,tok,...]` is the general form;
//! * over an alphabet whose symbols are all single characters a word may be
//!   written as plain concatenation (`abab`).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Token reserved for the blank / end marker in every machine format.
pub const BLANK: &str = ".";
/// Text form of the empty word.
pub const EMPTY_WORD: &str = "_";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid symbol token {0:?}")]
    InvalidToken(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("malformed word {0:?}")]
    Malformed(String),
}

/// A single alphabet token.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(token: &str) -> Result<Self, WordError> {
        if is_valid_token(token) {
            Ok(Symbol(Arc::from(token)))
        } else {
            Err(WordError::InvalidToken(token.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn is_single_char(&self) -> bool {
        self.0.chars().count() == 1
    }
}

/// Whether `token` may be used as a symbol: non-empty, no whitespace, none of
/// `#`, `,`, `[`, `]`, and not one of the reserved tokens `.` and `_`.
pub fn is_valid_token(token: &str) -> bool {
    !token.is_empty()
        && token != BLANK
        && token != EMPTY_WORD
        && !token
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '#' | ',' | '[' | ']'))
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A finite sequence of symbols; the empty word is a valid value.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    /// Builds a word from tokens, validating each one.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self, WordError> {
        tokens
            .iter()
            .map(|t| Symbol::new(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Parses the word syntax without alphabet context: `_`, `[..]`,
    /// whitespace-separated tokens, or one symbol per character.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        match split_general(text)? {
            Some(tokens) => Word::from_tokens(&tokens),
            None => {
                let chars: Vec<String> = text.trim().chars().map(String::from).collect();
                Word::from_tokens(&chars)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Bracketed general form; always unambiguous.
    pub fn to_general(&self) -> String {
        if self.is_empty() {
            return EMPTY_WORD.to_string();
        }
        let toks: Vec<&str> = self.0.iter().map(|s| s.as_str()).collect();
        format!("[{}]", toks.join(","))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_general())
    }
}

/// Renders compactly when every symbol of the word is one character.
/// Use [`Alphabet::render`] when the alphabet is known.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str(EMPTY_WORD)
        } else if self.0.iter().all(Symbol::is_single_char) {
            self.0.iter().try_for_each(|s| f.write_str(s.as_str()))
        } else {
            f.write_str(&self.to_general())
        }
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Returns `Some(tokens)` for the `_`, bracketed and whitespace-separated
/// forms, `None` for a plain run of characters.
fn split_general(text: &str) -> Result<Option<Vec<String>>, WordError> {
    let t = text.trim();
    if t == EMPTY_WORD {
        return Ok(Some(Vec::new()));
    }
    if let Some(inner) = t.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| WordError::Malformed(text.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Some(Vec::new()));
        }
        return Ok(Some(inner.split(',').map(|s| s.trim().to_string()).collect()));
    }
    if t.chars().any(char::is_whitespace) {
        return Ok(Some(t.split_whitespace().map(String::from).collect()));
    }
    Ok(None)
}

/// Length of the longest common prefix of two sequences.
pub fn lcp_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `|a| + |b| - 2·|lcp(a, b)|` over any sequence type.
pub fn distance_of<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.len() + b.len() - 2 * lcp_len(a, b)
}

pub fn lcp(w1: &Word, w2: &Word) -> Word {
    Word(w1.0[..lcp_len(&w1.0, &w2.0)].to_vec())
}

pub fn distance(w1: &Word, w2: &Word) -> usize {
    distance_of(&w1.0, &w2.0)
}

/// The suffix `s` with `w = p·s`, if `p` is a prefix of `w`.
pub fn strip_prefix(p: &Word, w: &Word) -> Option<Word> {
    w.0.strip_prefix(p.0.as_slice()).map(|s| Word(s.to_vec()))
}

/// An ordered, duplicate-free set of symbols with dense indices.
///
/// Algorithms work on `u32` symbol ids; the declaration order defines the
/// enumeration order used by every bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, u32>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, WordError> {
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(WordError::Malformed(format!("duplicate symbol {s}")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self, WordError> {
        let syms = tokens
            .iter()
            .map(|t| Symbol::new(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(syms)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: u32) -> &Symbol {
        &self.symbols[id as usize]
    }

    pub fn id(&self, s: &Symbol) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn id_of_token(&self, token: &str) -> Option<u32> {
        Symbol::new(token).ok().and_then(|s| self.id(&s))
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.index.contains_key(s)
    }

    /// True when every symbol is a single character, enabling the compact
    /// concatenated word syntax.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(Symbol::is_single_char)
    }

    /// Encodes a word as symbol ids; `None` if a symbol is foreign.
    pub fn encode(&self, w: &Word) -> Option<Vec<u32>> {
        w.0.iter().map(|s| self.id(s)).collect()
    }

    pub fn decode(&self, ids: &[u32]) -> Word {
        Word(ids.iter().map(|&i| self.symbols[i as usize].clone()).collect())
    }

    /// Parses a word written in the syntax appropriate for this alphabet and
    /// checks every symbol belongs to it.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let word = match split_general(text)? {
            Some(tokens) => Word::from_tokens(&tokens)?,
            None if self.is_compact() => Word::parse(text)?,
            None => Word::from_tokens(&[text.trim()])?,
        };
        if let Some(bad) = word.0.iter().find(|s| !self.contains(s)) {
            return Err(WordError::UnknownSymbol(bad.to_string()));
        }
        Ok(word)
    }

    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            EMPTY_WORD.to_string()
        } else if self.is_compact() {
            w.0.iter().map(Symbol::as_str).collect()
        } else {
            w.to_general()
        }
    }

    pub fn render_ids(&self, ids: &[u32]) -> String {
        self.render(&self.decode(ids))
    }

    /// Compares id words in length-then-lexicographic order, the canonical
    /// enumeration order (ids follow declaration order).
    pub fn shortlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| a.cmp(b))
    }
}

/// Iterates over all id words of length `0..=max_len` over `n` symbols in
/// length-then-lexicographic order.
pub fn shortlex_words(n: usize, max_len: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..=max_len).flat_map(move |len| {
        let total = if n == 0 && len > 0 { 0 } else { n.pow(len as u32) };
        (0..total).map(move |mut k| {
            let mut w = vec![0u32; len];
            for slot in w.iter_mut().rev() {
                *slot = (k % n) as u32;
                k /= n;
            }
            w
        })
    })
}
