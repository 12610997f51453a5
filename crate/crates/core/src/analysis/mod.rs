//! Static quantities of NFTs and bounded witness searches.

mod search;
mod static_props;

pub use search::{
    find_trailing_witness, find_trailing_witness_with_budget, find_variation_witness,
    find_variation_witness_with_budget, longest_trailing_witness, max_ambiguity, max_valuedness, SearchError,
    TrailingWitness, Valuedness, VariationWitness, WitnessFields, DEFAULT_NODE_BUDGET,
};
pub use static_props::{
    accepting_continuation, co_reachable, co_reachable_mask, output_speed, shortcut_guarantee, shortest_acceptance,
    Continuation,
};
