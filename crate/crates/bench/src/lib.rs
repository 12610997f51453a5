//! Shared workloads for the benchmarks.

use xduce::harness::random_nft;
use xduce::Nft;

/// Seeded random transducers of growing size used across benchmarks.
pub fn random_workloads() -> Vec<(String, Nft)> {
    [(3, 2), (5, 2), (8, 3)]
        .into_iter()
        .map(|(states, symbols)| (format!("random-{states}x{symbols}"), random_nft(42, states, symbols, 2, 0.3)))
        .collect()
}
