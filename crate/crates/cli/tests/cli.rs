use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn xduce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xduce")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn verdict(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json on stdout");
    v["verdict"].as_str().expect("verdict field").to_string()
}

#[test]
fn membership_exit_codes() {
    let constr = corpus("constr.nft");
    let c = constr.to_str().unwrap();
    let yes = xduce(&["member", c, "aa", "ababab"]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("accept"));
    let no = xduce(&["member", c, "aa", "abab"]);
    assert_eq!(code(&no), 1);
    assert!(stdout(&no).contains("reject"));
}

#[test]
fn determinized_trace_shows_macro_states() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("constr.tdfa");
    let det = xduce(&[
        "determinize",
        corpus("constr.nft").to_str().unwrap(),
        "--trailing-bound",
        "1",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&det), 0);
    assert!(stdout(&det).contains("s=4 t=1 r=5"));
    assert!(dir.path().join("constr.tdfa.ann").exists());

    let args = ["run-tdfa", out.to_str().unwrap(), "aa", "ababab", "--trace"];
    let run = xduce(&args);
    assert_eq!(code(&run), 0);
    let text = stdout(&run);
    let section: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "macro-states:")
        .skip(1)
        .map(|l| l.split_once(' ').unwrap().1)
        .collect();
    assert_eq!(
        section,
        [
            "z=_ P={(q0,0)}",
            "z=ababa P={(q0,0)}",
            "z=ba P={(q1,0),(q2,1),(q3,1)}",
            "z=bab P={(q1,0),(q2,1)}",
            "z=_ P={(q0,0)}",
        ]
    );
    assert_eq!(xduce(&args).stdout, run.stdout, "trace is reproducible");
}

#[test]
fn trailing_witness_for_exbt() {
    let exbt = corpus("exbt.nft");
    let o = xduce(&["find-trailing", exbt.to_str().unwrap(), "--bound", "2", "--max-input", "3"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "v=000"), "{text}");
    assert!(text.lines().any(|l| l == "a=000"), "{text}");
}

#[test]
fn json_verdicts_agree_with_exit_codes() {
    let constr = corpus("constr.nft");
    let exbt = corpus("exbt.nft");
    let le2n = corpus("le2n.nft");
    let le2n_tdfa = corpus("le2n.tdfa");
    let (c, e, l, lt) =
        (constr.to_str().unwrap(), exbt.to_str().unwrap(), le2n.to_str().unwrap(), le2n_tdfa.to_str().unwrap());
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["member", c, "aa", "ababab"], 0, "accept"),
        (vec!["member", c, "a", "_"], 1, "reject"),
        (vec!["find-trailing", e, "--bound", "0", "--max-input", "1"], 1, "witness"),
        (vec!["find-trailing", c, "--bound", "1", "--max-input", "4"], 0, "absent"),
        (vec!["check-equiv", l, lt, "--max-input", "4", "--max-output", "8"], 0, "equivalent"),
        (vec!["valuedness", e, "--max-input", "5", "--cap", "10"], 0, "functional"),
        (vec!["valuedness", l, "--max-input", "3", "--cap", "10"], 1, "multivalued"),
        (vec!["find-trailing", c, "--bound", "1", "--max-input", "6", "--node-budget", "3"], 3, "budget_exceeded"),
    ];
    for (args, want_code, want_verdict) in cases {
        let mut full = vec!["--json"];
        full.extend(&args);
        let o = xduce(&full);
        assert_eq!(code(&o), want_code, "{args:?}");
        assert_eq!(verdict(&o), want_verdict, "{args:?}");
    }
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.nft");
    std::fs::write(&bad, "machine nft\nstates q0\n").unwrap();
    let o = xduce(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());

    let o = xduce(&["member", corpus("constr.nft").to_str().unwrap(), "zz", "a"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&xduce(&["no-such-command"])), 2);
    let o = xduce(&["--json", "gen-input", corpus("stopper.tm").to_str().unwrap(), "--steps", "2", "--mode", "copy"]);
    assert_eq!(code(&o), 2);
    assert_eq!(verdict(&o), "error");
}

#[test]
fn reduction_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let walker = corpus("walker.tm");
    let nft = dir.path().join("walker.nft");
    assert_eq!(code(&xduce(&["tm-to-nft", walker.to_str().unwrap(), "-o", nft.to_str().unwrap()])), 0);
    let input = xduce(&["gen-input", walker.to_str().unwrap(), "--steps", "1", "--mode", "step"]);
    assert_eq!(code(&input), 0);
    let input = stdout(&input).trim().to_string();
    let outs = xduce(&["outputs", nft.to_str().unwrap(), &input]);
    assert_eq!(code(&outs), 0);
    assert!(stdout(&outs).contains("[p@.,;;,1,p@.,;;,1,1,p@.,;;]"), "{}", stdout(&outs));
}

#[test]
fn random_generation_is_reproducible() {
    let args = ["random-nft", "--seed", "7", "--states", "3", "--symbols", "2", "--max-out", "2", "--density", "0.4"];
    let a = xduce(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, xduce(&args).stdout);
    assert!(stdout(&a).starts_with("machine nft"));
}
