use std::collections::VecDeque;

use proptest::prelude::*;

use xduce::analysis::max_ambiguity;
use xduce::harness::corpus;
use xduce::machines::{Direction, TmBuilder};
use xduce::reduction::{build_reduction_input, tm_to_nft, Mode};
use xduce::semantics::nft_outputs;
use xduce::{TuringMachine, Word};

const STATES: [&str; 3] = ["s0", "s1", "h"];
const SYMBOLS: [&str; 2] = ["a", "b"];

/// (state, read, next, write, direction); `read` of `None` is the blank.
type Rule = (usize, Option<usize>, usize, usize, Direction);

fn build(rules: &[Rule]) -> TuringMachine {
    let mut b = TmBuilder::new().states(&STATES).alphabet(&SYMBOLS).initial("s0").accepting(&["h"]);
    for &(q, read, next, write, dir) in rules {
        b = b.rule(STATES[q], read.map_or(".", |x| SYMBOLS[x]), STATES[next], SYMBOLS[write], dir);
    }
    b.build().unwrap()
}

/// Token sequences of the first `steps + 1` configurations, from a plain
/// tape simulation.
fn simulate(rules: &[Rule], steps: usize) -> Vec<Vec<String>> {
    let mut tape: VecDeque<Option<usize>> = VecDeque::from([None]);
    let (mut head, mut q) = (0usize, 0usize);
    let mut out = Vec::new();
    loop {
        out.push(
            tape.iter()
                .enumerate()
                .map(|(i, c)| {
                    let sym = c.map_or(".", |x| SYMBOLS[x]);
                    if i == head {
                        format!("{}@{sym}", STATES[q])
                    } else {
                        sym.to_string()
                    }
                })
                .collect(),
        );
        if out.len() > steps || q == 2 {
            return out;
        }
        let Some(&(_, _, next, write, dir)) = rules.iter().find(|r| r.0 == q && r.1 == tape[head]) else {
            return out;
        };
        tape[head] = Some(write);
        q = next;
        match dir {
            Direction::Right => {
                head += 1;
                if head == tape.len() {
                    tape.push_back(None);
                }
            }
            Direction::Left if head == 0 => tape.push_front(None),
            Direction::Left => head -= 1,
        }
    }
}

fn separated(configs: &[Vec<String>]) -> Vec<String> {
    configs.iter().flat_map(|c| c.iter().cloned().chain(std::iter::once(";;".to_string()))).collect()
}

fn word(tokens: &[String]) -> Word {
    Word::from_tokens(tokens).unwrap()
}

fn rules_strategy() -> impl Strategy<Value = Vec<Rule>> {
    let read = prop_oneof![Just(None), (0usize..2).prop_map(Some)];
    let dir = prop_oneof![Just(Direction::Left), Just(Direction::Right)];
    prop::collection::vec((0usize..2, read, 0usize..3, 0usize..2, dir), 0..6).prop_map(|mut rules| {
        // keep the machine deterministic: first rule per (state, read) wins
        let mut seen = Vec::new();
        rules.retain(|r| {
            let key = (r.0, r.1);
            !seen.contains(&key) && {
                seen.push(key);
                true
            }
        });
        rules
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn modes_follow_the_simulated_run(rules in rules_strategy(), k in 0usize..4) {
        let tm = build(&rules);
        let red = tm_to_nft(&tm);
        let run = simulate(&rules, k + 1);
        if run.len() <= k {
            prop_assert!(build_reduction_input(&tm, k, Mode::Copy).is_err());
            return Ok(());
        }
        let prefix = separated(&run[..=k]);
        let mut copy_in = prefix.clone();
        copy_in.push("copy".into());
        let mut step_in = prefix.clone();
        step_in.push("step".into());
        prop_assert_eq!(build_reduction_input(&tm, k, Mode::Copy).unwrap(), word(&copy_in));
        prop_assert_eq!(build_reduction_input(&tm, k, Mode::Step).unwrap(), word(&step_in));

        prop_assert_eq!(nft_outputs(&red.nft, &word(&copy_in), 4).value, vec![word(&prefix)]);
        let step_out = nft_outputs(&red.nft, &word(&step_in), 4).value;
        if run.len() > k + 1 {
            prop_assert_eq!(step_out, vec![word(&separated(&run[..=k + 1]))]);
        } else {
            prop_assert!(step_out.is_empty());
        }
    }
}

#[test]
fn step_output_extends_copy_output_only_on_genuine_runs() {
    let walker = corpus::walker_tm();
    let red = tm_to_nft(&walker);
    let c = |i: usize| {
        let mut v = vec!["1".to_string(); i];
        v.push("p@.".into());
        v
    };
    for seq in [vec![0, 1, 2], vec![0, 2], vec![1, 2], vec![0, 1, 1], vec![0, 0]] {
        let configs: Vec<Vec<String>> = seq.iter().map(|&i| c(i)).collect();
        let genuine = seq.iter().enumerate().all(|(pos, &i)| i == pos);
        let mut input = separated(&configs);
        input.push("step".into());
        let step = nft_outputs(&red.nft, &word(&input), 4).value;
        let mut extended = configs.clone();
        extended.push(c(seq.len()));
        assert_eq!(step == vec![word(&separated(&extended))], genuine, "{seq:?}");
    }
}

#[test]
fn corrupt_inputs_produce_nothing() {
    let red = tm_to_nft(&corpus::walker_tm());
    for bad in [
        "",
        ";; copy",
        "1 1 ;; copy",
        "p@. 1 p@. ;; step",
        "p@. ;; ;; copy",
        "p@. ;; copy ;;",
        "p@. ;; step step",
        "p@. ;; 1 p@.",
    ] {
        let input = Word::from_tokens(&bad.split_whitespace().collect::<Vec<_>>()).unwrap();
        assert!(nft_outputs(&red.nft, &input, 4).value.is_empty(), "{bad:?}");
    }
}

#[test]
fn reductions_are_unambiguous() {
    for tm in [corpus::walker_tm(), corpus::stopper_tm()] {
        let red = tm_to_nft(&tm);
        assert!(max_ambiguity(&red.nft, 8, 24, 100).value <= 1);
    }
}
