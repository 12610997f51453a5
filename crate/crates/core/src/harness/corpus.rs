//! The bundled example machines.

use crate::machines::{Nft, Tdfa, TuringMachine};

pub const CONSTR_NFT: &str = include_str!("../../../../corpus/constr.nft");
pub const EXBT_NFT: &str = include_str!("../../../../corpus/exbt.nft");
pub const LE2N_NFT: &str = include_str!("../../../../corpus/le2n.nft");
pub const LE2N_TDFA: &str = include_str!("../../../../corpus/le2n.tdfa");
pub const LASTSYM_TDFA: &str = include_str!("../../../../corpus/lastsym.tdfa");
pub const WALKER_TM: &str = include_str!("../../../../corpus/walker.tm");
pub const STOPPER_TM: &str = include_str!("../../../../corpus/stopper.tm");

/// File name and text of every corpus machine.
pub const FILES: [(&str, &str); 7] = [
    ("constr.nft", CONSTR_NFT),
    ("exbt.nft", EXBT_NFT),
    ("le2n.nft", LE2N_NFT),
    ("le2n.tdfa", LE2N_TDFA),
    ("lastsym.tdfa", LASTSYM_TDFA),
    ("walker.tm", WALKER_TM),
    ("stopper.tm", STOPPER_TM),
];

/// Kleene closure of `{(aa, ababa), (aa, ababab), (ab, ababaa)}`.
pub fn constr() -> Nft {
    Nft::parse(CONSTR_NFT).expect("corpus machine parses")
}

/// `{(0^i 1 0^j 1 0, 0^i)} ∪ {(0^i 1 0^j 1 1, 0^j)}`: functional with
/// unbounded trailing.
pub fn exbt() -> Nft {
    Nft::parse(EXBT_NFT).expect("corpus machine parses")
}

/// `{(0^n, 0^m) | m <= 2n}` as a transducer.
pub fn le2n_nft() -> Nft {
    Nft::parse(LE2N_NFT).expect("corpus machine parses")
}

/// `{(0^n, 0^m) | m <= 2n}` as a 2DFA.
pub fn le2n_tdfa() -> Tdfa {
    Tdfa::parse(LE2N_TDFA).expect("corpus machine parses")
}

/// `w -> 0^|w|` if `w` ends in 0, else `1^|w|`.
pub fn lastsym_tdfa() -> Tdfa {
    Tdfa::parse(LASTSYM_TDFA).expect("corpus machine parses")
}

/// Walks right forever writing 1s.
pub fn walker_tm() -> TuringMachine {
    TuringMachine::parse(WALKER_TM).expect("corpus machine parses")
}

/// Halts immediately.
pub fn stopper_tm() -> TuringMachine {
    TuringMachine::parse(STOPPER_TM).expect("corpus machine parses")
}
