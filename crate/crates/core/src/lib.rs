//! Finite transducers, two-tape deterministic automata, and the tools to
//! move between them.
//!
//! The crate parses and runs nondeterministic finite transducers (NFTs),
//! two-tape automata with one-way heads (2DFAs) and Turing machines;
//! computes static properties and bounded witnesses for the trailing and
//! variation of an NFT; builds an equivalent 2DFA from an NFT with a known
//! trailing bound; and compiles Turing machines into transducers whose
//! trailing is unbounded exactly when the machine reaches arbitrarily long
//! configurations.

pub mod analysis;
pub mod determinize;
mod error;
pub mod harness;
pub mod machines;
pub mod reduction;
pub mod semantics;
pub mod words;

pub use error::Error;
pub use machines::{Machine, MachineKind, Move, Nft, StateId, Tdfa, TuringMachine};
pub use words::{Alphabet, Symbol, Word};
