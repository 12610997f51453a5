use std::collections::VecDeque;

use crate::machines::{Nft, StateId};
use crate::words::Word;

/// States with an accepting continuation on some (possibly empty) input,
/// as a mask indexed by state id.
pub fn co_reachable_mask(nft: &Nft) -> Vec<bool> {
    shortest_acceptance(nft).iter().map(Option::is_some).collect()
}

/// Co-reachable states in declaration order.
pub fn co_reachable(nft: &Nft) -> Vec<StateId> {
    co_reachable_mask(nft)
        .into_iter()
        .enumerate()
        .filter_map(|(q, on)| on.then_some(q))
        .collect()
}

/// For each state, the length of a shortest input leading it into an
/// accepting state (`None` when there is none): a backward breadth-first
/// search from the accepting states with unit edge length.
pub fn shortest_acceptance(nft: &Nft) -> Vec<Option<usize>> {
    let n = nft.num_states();
    let mut preds = vec![Vec::new(); n];
    for (q, _, e) in nft.transitions() {
        preds[e.target].push(q);
    }
    let mut dist = vec![None; n];
    let mut queue = VecDeque::new();
    for f in nft.accepting_states() {
        dist[f] = Some(0);
        queue.push_back(f);
    }
    while let Some(q) = queue.pop_front() {
        let d = dist[q].expect("queued states have a distance");
        for &p in &preds[q] {
            if dist[p].is_none() {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

/// Longest output of a single transition; 0 when every output is empty or
/// there are no transitions.
pub fn output_speed(nft: &Nft) -> usize {
    nft.transitions().map(|(_, _, e)| e.output.len()).max().unwrap_or(0)
}

/// Maximum over co-reachable states of the shortest accepting input length;
/// 0 when no state is co-reachable.
pub fn shortcut_guarantee(nft: &Nft) -> usize {
    shortest_acceptance(nft).into_iter().flatten().max().unwrap_or(0)
}

/// An accepting continuation `q --b/w--> f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Continuation {
    pub input: Vec<u32>,
    pub output: Vec<u32>,
    pub accepting_state: StateId,
}

impl Continuation {
    pub fn input_word(&self, nft: &Nft) -> Word {
        nft.input().decode(&self.input)
    }

    pub fn output_word(&self, nft: &Nft) -> Word {
        nft.output().decode(&self.output)
    }
}

/// Searches for an accepting continuation from `q` whose output starts with
/// `prefix` (or equals it when `exact`).
///
/// Nodes are `(state, matched)` with `matched ∈ 0..=|prefix|`, plus a
/// `Beyond(state)` tier for runs whose output has already covered the whole
/// prefix mid-transition. The graph is finite, so the search is exact with
/// no bound on the continuation length; breadth-first order returns a
/// shortest continuation input.
pub fn accepting_continuation(nft: &Nft, q: StateId, prefix: &[u32], exact: bool) -> Option<Continuation> {
    let n = nft.num_states();
    let width = prefix.len() + 1;
    let beyond = |s: StateId| n * width + s;
    let total = n * width + n;
    let is_goal = |node: usize| {
        if node >= n * width {
            !exact && nft.is_accepting(node - n * width)
        } else {
            node % width == prefix.len() && nft.is_accepting(node / width)
        }
    };
    let start = q * width;
    let mut parent: Vec<Option<(usize, u32, usize)>> = vec![None; total];
    let mut seen = vec![false; total];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut goal = None;
    while let Some(node) = queue.pop_front() {
        if is_goal(node) {
            goal = Some(node);
            break;
        }
        let (state, matched) = if node >= n * width { (node - n * width, None) } else { (node / width, Some(node % width)) };
        for sym in 0..nft.input().len() as u32 {
            for (k, e) in nft.edges(state, sym).iter().enumerate() {
                let next = match matched {
                    None => Some(beyond(e.target)),
                    Some(m) => {
                        let rem = &prefix[m..];
                        if rem.starts_with(&e.output) {
                            Some(e.target * width + m + e.output.len())
                        } else if !exact && e.output.starts_with(rem) {
                            Some(beyond(e.target))
                        } else {
                            None
                        }
                    }
                };
                if let Some(next) = next {
                    if !seen[next] {
                        seen[next] = true;
                        parent[next] = Some((node, sym, k));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    let goal = goal?;
    let mut steps = Vec::new();
    let mut cur = goal;
    while let Some((prev, sym, k)) = parent[cur] {
        steps.push((prev, sym, k));
        cur = prev;
    }
    steps.reverse();
    let mut input = Vec::with_capacity(steps.len());
    let mut output = Vec::new();
    for (node, sym, k) in steps {
        let state = if node >= n * width { node - n * width } else { node / width };
        input.push(sym);
        output.extend_from_slice(&nft.edges(state, sym)[k].output);
    }
    let accepting_state = if goal >= n * width { goal - n * width } else { goal / width };
    Some(Continuation { input, output, accepting_state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus;
    use crate::machines::NftBuilder;

    fn ids(nft: &Nft, s: &str) -> Vec<u32> {
        nft.output().encode(&Word::parse(s).unwrap()).unwrap()
    }

    fn chain(n: usize) -> Nft {
        let names: Vec<String> = (0..=n).map(|i| format!("c{i}")).collect();
        let mut b = NftBuilder::new()
            .states(&names)
            .input(&["x"])
            .output(&["y"])
            .initial("c0")
            .accepting(&[names[n].as_str()]);
        for i in 0..n {
            b = b.transition(&names[i], "x", &names[i + 1], Word::empty());
        }
        b.build().unwrap()
    }

    #[test]
    fn constr_static_quantities() {
        let t = corpus::constr();
        assert_eq!(co_reachable(&t), vec![0, 1, 2, 3]);
        assert_eq!(output_speed(&t), 4);
        assert_eq!(shortcut_guarantee(&t), 1);
        assert_eq!(shortest_acceptance(&t), vec![Some(0), Some(1), Some(1), Some(1)]);
    }

    #[test]
    fn exbt_output_speed() {
        assert_eq!(output_speed(&corpus::exbt()), 1);
    }

    #[test]
    fn degenerate_machines() {
        let t = corpus::constr();
        let none = t.with_accepting(vec![false; 4]);
        assert!(co_reachable(&none).is_empty());
        assert_eq!(shortcut_guarantee(&none), 0);
        let lone = NftBuilder::new()
            .states(&["q0", "q1"])
            .input(&["a"])
            .output(&["a"])
            .initial("q0")
            .accepting(&["q0"])
            .build()
            .unwrap();
        assert_eq!(co_reachable(&lone), vec![0]);
        assert_eq!(shortcut_guarantee(&lone), 0);
        assert_eq!(output_speed(&lone), 0);
        let silent = NftBuilder::new()
            .states(&["q"])
            .input(&["a"])
            .output(&["a"])
            .initial("q")
            .transition("q", "a", "q", Word::empty())
            .build()
            .unwrap();
        assert_eq!(output_speed(&silent), 0);
    }

    #[test]
    fn chain_guarantee() {
        for n in [1, 3, 7] {
            assert_eq!(shortcut_guarantee(&chain(n)), n);
        }
    }

    #[test]
    fn continuation_examples() {
        let t = corpus::constr();
        assert_eq!(accepting_continuation(&t, 3, &ids(&t, "ab"), false), None);
        let c = accepting_continuation(&t, 2, &ids(&t, "ab"), false).unwrap();
        assert_eq!(c.input_word(&t), Word::parse("a").unwrap());
        assert_eq!(c.output_word(&t), Word::parse("ab").unwrap());
        assert_eq!(c.accepting_state, 0);
        let z = accepting_continuation(&t, 0, &[], true).unwrap();
        assert!(z.input.is_empty() && z.output.is_empty());
        // q1 can cover the prefix "b" while emitting "ba"
        let c = accepting_continuation(&t, 1, &ids(&t, "b"), false).unwrap();
        assert_eq!(c.output_word(&t), Word::parse("ba").unwrap());
        assert_eq!(accepting_continuation(&t, 1, &ids(&t, "b"), true), None);
        // q0 cannot produce exactly "b": every output from q0 starts with a
        assert_eq!(accepting_continuation(&t, 0, &ids(&t, "b"), true), None);
        assert_eq!(accepting_continuation(&t, 0, &ids(&t, "b"), false), None);
    }

    #[test]
    fn empty_prefix_continuation_is_co_reachability() {
        for t in [corpus::constr(), corpus::exbt(), corpus::le2n_nft()] {
            let mask = co_reachable_mask(&t);
            for (q, &co) in mask.iter().enumerate() {
                assert_eq!(accepting_continuation(&t, q, &[], false).is_some(), co);
            }
        }
    }

    #[test]
    fn long_continuations_need_no_length_bound() {
        let t = chain(20);
        let c = accepting_continuation(&t, 0, &[], true).unwrap();
        assert_eq!(c.input.len(), 20);
    }
}
