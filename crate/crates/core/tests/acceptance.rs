//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_words, macro_state_walk, w, WALK_GOLDEN};
use xduce::analysis::{
    find_trailing_witness, longest_trailing_witness, max_ambiguity, max_valuedness, DEFAULT_NODE_BUDGET,
};
use xduce::determinize::determinize;
use xduce::harness::{check_equivalence, corpus, random_nft, Domain, TdfaRecognizer};
use xduce::reduction::{build_reduction_input, tm_to_nft, Mode};
use xduce::semantics::{nft_membership, tdfa_run};
use xduce::words::{distance, lcp};
use xduce::{Symbol, Word};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = corpus::constr();
    let res = determinize(&t, 1, 10_000).unwrap();
    let got = macro_state_walk(&res, &t, &w("aa"), &w("ababab"));
    let elapsed = start.elapsed();
    let exact = got == WALK_GOLDEN;
    outcome(
        exact && within(elapsed, Duration::from_secs(1)),
        format!("golden match={exact} s={} r={} elapsed={elapsed:.2?} (limit 1s)", res.s, res.r),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let t = corpus::constr();
    let res = determinize(&t, 1, 100_000).unwrap();
    let r = TdfaRecognizer::new(&res.automaton);
    let cex = check_equivalence(&t, &r, Domain::new(6, 24), 1).unwrap();
    let elapsed = start.elapsed();
    outcome(
        cex.is_none() && res.overflow_drops == 0 && within(elapsed, Duration::from_secs(30)),
        format!(
            "counterexample={:?} overflow_drops={} elapsed={elapsed:.2?} (limit 30s)",
            cex.map(|c| (c.input, c.output)),
            res.overflow_drops
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = corpus::constr();
    let at0 = find_trailing_witness(&t, 0, 8).unwrap();
    let at1 = find_trailing_witness(&t, 1, 8).unwrap();
    let v_len = at0.as_ref().map(|w| w.v.len());
    outcome(v_len == Some(1) && at1.is_none(), format!("t=0: |v|={v_len:?}; t=1: witness={}", at1.is_some()))
}

fn criterion_4() -> Outcome {
    let t = corpus::exbt();
    let mut pass = true;
    let mut parts = Vec::new();
    for bound in 0..=4usize {
        let zeros = Word::from_tokens(&vec!["0"; bound + 1]).unwrap();
        let found = find_trailing_witness(&t, bound, bound + 1).unwrap();
        let ok = found.as_ref().is_some_and(|x| x.v.len() == bound + 1 && x.a == zeros && x.v == zeros);
        pass &= ok;
        parts.push(format!("t={bound}:{}", if ok { "ok" } else { "bad" }));
    }
    let k = max_valuedness(&t, 5, 100).k;
    pass &= k == 1;
    outcome(pass, format!("{} valuedness={k}", parts.join(" ")))
}

fn criterion_5() -> Outcome {
    let t = corpus::le2n_nft();
    let a = corpus::le2n_tdfa();
    let cex = check_equivalence(&t, &TdfaRecognizer::new(&a), Domain::new(6, 12), 1).unwrap();
    let mut pass = cex.is_none();
    let mut parts = Vec::new();
    for bound in [0usize, 2, 4, 6] {
        // With no input symbol there is a single run, so the smallest
        // radius that can hold a witness for t = 0 is one symbol.
        let radius = bound.max(1);
        let found = find_trailing_witness(&t, bound, radius).unwrap();
        pass &= found.is_some();
        parts.push(format!("t={bound}@{radius}:{}", found.map_or("absent".into(), |x| format!("|v|={}", x.v.len()))));
    }
    outcome(pass, format!("equivalent={} {}", cex.is_none(), parts.join(" ")))
}

fn walker_config(i: usize) -> Vec<&'static str> {
    let mut v = vec!["1"; i];
    v.push("p@.");
    v
}

fn separated(configs: impl IntoIterator<Item = Vec<&'static str>>) -> Vec<&'static str> {
    let mut out = Vec::new();
    for c in configs {
        out.extend(c);
        out.push(";;");
    }
    out
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let walker = corpus::walker_tm();
    let red = tm_to_nft(&walker);
    let mut pass = true;
    let mut notes = Vec::new();
    for k in 0..=3 {
        // walker's k-th configuration is 1^k p@.
        let copy_in = build_reduction_input(&walker, k, Mode::Copy).unwrap();
        let step_in = build_reduction_input(&walker, k, Mode::Step).unwrap();
        let mut expect_copy_in = separated((0..=k).map(walker_config));
        expect_copy_in.push("copy");
        let mut expect_step_in = separated((0..=k).map(walker_config));
        expect_step_in.push("step");
        let copy_out = Word::from_tokens(&separated((0..=k).map(walker_config))).unwrap();
        let step_out = Word::from_tokens(&separated((0..=k + 1).map(walker_config))).unwrap();
        let ok = copy_in == Word::from_tokens(&expect_copy_in).unwrap()
            && step_in == Word::from_tokens(&expect_step_in).unwrap()
            && nft_membership(&red.nft, &copy_in, &copy_out)
            && nft_membership(&red.nft, &step_in, &step_out);
        pass &= ok;
        if !ok {
            notes.push(format!("k={k} membership failed"));
        }
    }
    let mut growth = Vec::new();
    for budget in [6, 10, 14] {
        let best = longest_trailing_witness(&red.nft, budget, DEFAULT_NODE_BUDGET * 4).unwrap();
        growth.push(best.map_or(0, |x| x.v.len()));
    }
    let increasing = growth.windows(2).all(|p| p[0] < p[1]);
    pass &= increasing;
    let stopper = tm_to_nft(&corpus::stopper_tm());
    let stopper_absent = find_trailing_witness(&stopper.nft, 0, 10).unwrap().is_none();
    pass &= stopper_absent;
    let amb_walker = max_ambiguity(&red.nft, 8, 24, 100).value;
    let amb_stopper = max_ambiguity(&stopper.nft, 8, 24, 100).value;
    pass &= amb_walker <= 1 && amb_stopper <= 1;
    let elapsed = start.elapsed();
    pass &= within(elapsed, Duration::from_secs(120));
    notes.push(format!(
        "max |v| at budgets 6/10/14 = {growth:?}; stopper witness absent={stopper_absent}; ambiguity walker={amb_walker} stopper={amb_stopper}; elapsed={elapsed:.2?} (limit 120s)"
    ));
    outcome(pass, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let inputs = all_words(2, 4);
    let outputs = all_words(2, 8);
    let mut violations = 0usize;
    let mut failures = 0usize;
    let mut checked = 0usize;
    for seed in 0..100u64 {
        let n_states = 1 + (seed % 4) as usize;
        let max_out = (seed % 3) as usize;
        let t = random_nft(seed, n_states, 2, max_out, 0.4);
        for bound in 0..=2 {
            let Ok(res) = determinize(&t, bound, 100_000) else {
                failures += 1;
                continue;
            };
            for a in &inputs {
                let a = t.input().decode(a);
                for u in &outputs {
                    let u = t.output().decode(u);
                    if tdfa_run(&res.automaton, &a, &u).accepted {
                        checked += 1;
                        if !nft_membership(&t, &a, &u) {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && failures == 0 && within(elapsed, Duration::from_secs(300)),
        format!(
            "accepted pairs checked={checked} violations={violations} budget failures={failures} elapsed={elapsed:.2?} (limit 300s)"
        ),
    )
}

fn random_word(rng: &mut ChaCha8Rng) -> Word {
    let len = rng.gen_range(0..8);
    (0..len).map(|_| Symbol::new(["a", "b", "c"][rng.gen_range(0..3)]).unwrap()).collect()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for _ in 0..1000 {
        let (x, y, z) = (random_word(&mut rng), random_word(&mut rng), random_word(&mut rng));
        let symmetric = distance(&x, &y) == distance(&y, &x);
        let identity = distance(&x, &x) == 0 && (distance(&x, &y) == 0) == (x == y);
        let invariant = distance(&z.concat(&x), &z.concat(&y)) == distance(&x, &y);
        let triangle = distance(&x, &z) <= distance(&x, &y) + distance(&y, &z);
        let p = lcp(&x, &y);
        let next = |v: &Word| v.symbols().get(p.len()).cloned();
        let lcp_ok = p.is_prefix_of(&x) && p.is_prefix_of(&y) && (next(&x).is_none() || next(&x) != next(&y));
        if !(symmetric && identity && invariant && triangle && lcp_ok) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("1000 triples, violations={bad}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("construction walk golden", criterion_1),
        ("bounded equivalence at t=1", criterion_2),
        ("trailing bound bracketing for constr", criterion_3),
        ("witness family for exbt", criterion_4),
        ("counterexample separation", criterion_5),
        ("reduction behavior", criterion_6),
        ("soundness on random transducers", criterion_7),
        ("metric laws", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("criterion {} [{}] {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
