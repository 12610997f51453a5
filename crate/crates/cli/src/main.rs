use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use xduce::analysis::{
    co_reachable, find_trailing_witness_with_budget, find_variation_witness_with_budget, max_ambiguity,
    max_valuedness, output_speed, shortcut_guarantee, WitnessFields, DEFAULT_NODE_BUDGET,
};
use xduce::determinize::{determinize, DEFAULT_STATE_BUDGET};
use xduce::harness::{check_equivalence, random_nft, Domain, Recognizer, TdfaRecognizer};
use xduce::machines::{parse_machine, Machine};
use xduce::reduction::{build_reduction_input, tm_to_nft, Mode};
use xduce::semantics::{nft_membership, nft_outputs, tdfa_run, tm_run, RunStatus};
use xduce::{Alphabet, Nft, Tdfa, TuringMachine, Word};

#[derive(Parser)]
#[command(name = "xduce", version, about = "Finite transducers, two-tape automata and reductions")]
struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for equivalence sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Output speed, shortcut guarantee and co-reachable states of an NFT.
    Analyze { file: PathBuf },
    /// Decide whether (A, U) is in the relation of an NFT or 2DFA.
    Member { file: PathBuf, input: String, output: String },
    /// List the outputs an NFT produces for an input.
    Outputs {
        file: PathBuf,
        input: String,
        #[arg(long, default_value_t = 100)]
        cap: usize,
    },
    /// Run a 2DFA on (A, U).
    RunTdfa {
        file: PathBuf,
        input: String,
        output: String,
        #[arg(long)]
        trace: bool,
        /// Annotation file from `determinize`; defaults to FILE.ann when present.
        #[arg(long)]
        annotations: Option<PathBuf>,
    },
    /// Build a 2DFA from an NFT and a trailing bound.
    Determinize {
        file: PathBuf,
        #[arg(long)]
        trailing_bound: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        state_budget: usize,
        /// Write the automaton here and its annotations to OUT.ann.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two machines on all pairs within length bounds.
    CheckEquiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        max_input: usize,
        #[arg(long)]
        max_output: usize,
    },
    /// Search for a violation of a trailing bound.
    FindTrailing {
        file: PathBuf,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        max_input: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Search for two runs whose outputs are more than a bound apart.
    FindVariation {
        file: PathBuf,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        max_input: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Largest number of outputs for one input.
    Valuedness {
        file: PathBuf,
        #[arg(long)]
        max_input: usize,
        #[arg(long)]
        cap: usize,
    },
    /// Largest number of accepting runs for one pair.
    Ambiguity {
        file: PathBuf,
        #[arg(long)]
        max_input: usize,
        #[arg(long)]
        max_output: usize,
        #[arg(long)]
        cap: u64,
    },
    /// Run a Turing machine on the empty tape.
    TmRun {
        file: PathBuf,
        #[arg(long)]
        max_steps: usize,
    },
    /// Compile a Turing machine into its reduction transducer.
    TmToNft {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a reduction input from the first K steps of a Turing machine.
    GenInput {
        file: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Generate a seeded random NFT.
    RandomNft {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        states: usize,
        #[arg(long)]
        symbols: usize,
        #[arg(long)]
        max_out: usize,
        #[arg(long)]
        density: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Copy,
    Step,
}

const EXIT_POSITIVE: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// What a command produced: an exit code, a verdict, text for humans and
/// fields for JSON.
struct Report {
    code: u8,
    verdict: &'static str,
    text: String,
    fields: Map<String, Value>,
}

impl Report {
    fn new(code: u8, verdict: &'static str) -> Self {
        Report { code, verdict, text: String::new(), fields: Map::new() }
    }

    fn line(mut self, s: impl AsRef<str>) -> Self {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
        self
    }

    fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn budget(message: impl ToString) -> Failure {
    Failure { code: EXIT_BUDGET, message: message.to_string() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                let mut obj = report.fields;
                obj.insert("verdict".into(), report.verdict.into());
                println!("{}", Value::Object(obj));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if json {
                let verdict = if f.code == EXIT_BUDGET { "budget_exceeded" } else { "error" };
                println!("{}", json!({ "verdict": verdict, "error": f.message }));
            }
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<Machine, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_machine(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_nft(path: &Path) -> Result<Nft, Failure> {
    match load(path)? {
        Machine::Nft(n) => Ok(n),
        other => Err(usage(format!("{}: expected an nft, found a {}", path.display(), other.kind().keyword()))),
    }
}

fn load_tdfa(path: &Path) -> Result<Tdfa, Failure> {
    match load(path)? {
        Machine::Tdfa(a) => Ok(a),
        other => Err(usage(format!("{}: expected a tdfa, found a {}", path.display(), other.kind().keyword()))),
    }
}

fn load_tm(path: &Path) -> Result<TuringMachine, Failure> {
    match load(path)? {
        Machine::Tm(t) => Ok(t),
        other => Err(usage(format!("{}: expected a tm, found a {}", path.display(), other.kind().keyword()))),
    }
}

fn word(alpha: &Alphabet, text: &str) -> Result<Word, Failure> {
    alpha.parse_word(text).map_err(|e| usage(format!("word {text:?}: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn verdict_code(positive: bool) -> u8 {
    if positive {
        EXIT_POSITIVE
    } else {
        EXIT_NEGATIVE
    }
}

fn with_fields(mut report: Report, fields: &WitnessFields) -> Report {
    let mut obj = Map::new();
    for (k, v) in &fields.0 {
        obj.insert((*k).to_string(), Value::String(v.clone()));
    }
    report.text.push_str(&fields.to_text());
    report.fields.insert("witness".into(), Value::Object(obj));
    report
}

fn annotation_path(file: &Path) -> PathBuf {
    let mut s = file.as_os_str().to_owned();
    s.push(".ann");
    PathBuf::from(s)
}

/// Reads `<state> <description>` lines of an annotation file, skipping the
/// trailing parameter lines.
fn read_annotations(path: &Path) -> Result<Vec<(String, String)>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .filter_map(|l| l.split_once(' '))
        .map(|(s, d)| (s.to_string(), d.to_string()))
        .collect())
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Analyze { file } => {
            let t = load_nft(&file)?;
            let co: Vec<&str> = co_reachable(&t).into_iter().map(|q| t.state_name(q)).collect();
            let (s, g) = (output_speed(&t), shortcut_guarantee(&t));
            Ok(Report::new(EXIT_POSITIVE, "ok")
                .line(format!("output_speed={s}"))
                .line(format!("shortcut_guarantee={g}"))
                .line(format!("co_reachable={}", co.join(" ")))
                .field("output_speed", s)
                .field("shortcut_guarantee", g)
                .field("co_reachable", co))
        }
        Command::Member { file, input, output } => {
            let accepted = match load(&file)? {
                Machine::Nft(t) => nft_membership(&t, &word(t.input(), &input)?, &word(t.output(), &output)?),
                Machine::Tdfa(a) => tdfa_run(&a, &word(a.input(), &input)?, &word(a.output(), &output)?).accepted,
                Machine::Tm(_) => return Err(usage("member needs an nft or a tdfa")),
            };
            let v = if accepted { "accept" } else { "reject" };
            Ok(Report::new(verdict_code(accepted), v).line(v))
        }
        Command::Outputs { file, input, cap } => {
            if cap == 0 {
                return Err(usage("--cap must be positive"));
            }
            let t = load_nft(&file)?;
            let res = nft_outputs(&t, &word(t.input(), &input)?, cap);
            let outs: Vec<String> = res.value.iter().map(|u| t.output().render(u)).collect();
            let mut r = Report::new(verdict_code(!outs.is_empty()), if outs.is_empty() { "none" } else { "some" });
            for o in &outs {
                r = r.line(o);
            }
            if res.overflow {
                r = r.line(format!("truncated at {cap}"));
            }
            Ok(r.field("outputs", outs).field("overflow", res.overflow))
        }
        Command::RunTdfa { file, input, output, trace, annotations } => {
            let a = load_tdfa(&file)?;
            let run = tdfa_run(&a, &word(a.input(), &input)?, &word(a.output(), &output)?);
            let v = if run.accepted { "accept" } else { "reject" };
            let mut r = Report::new(verdict_code(run.accepted), v);
            if trace {
                r.text.push_str(&run.render(&a));
                let steps: Vec<Value> = run
                    .steps
                    .iter()
                    .map(|s| {
                        json!({
                            "state": a.state_name(s.state),
                            "in": s.input_pos,
                            "out": s.output_pos,
                            "moves": s.moves.map(|(m1, m2)| format!("{m1}{m2}")),
                        })
                    })
                    .collect();
                r = r.field("trace", steps);
                let ann_path = annotations.or_else(|| Some(annotation_path(&file)).filter(|p| p.exists()));
                if let Some(p) = ann_path {
                    let ann = read_annotations(&p)?;
                    let view = xduce::determinize::input_step_view(&run);
                    r.text.push_str("macro-states:\n");
                    let mut lines = Vec::new();
                    for q in view {
                        let name = a.state_name(q);
                        let desc = ann.iter().find(|(s, _)| s == name).map_or("?", |(_, d)| d.as_str());
                        let _ = writeln!(r.text, "{name} {desc}");
                        lines.push(format!("{name} {desc}"));
                    }
                    r = r.field("macro_states", lines);
                }
            } else {
                r = r.line(v);
            }
            Ok(r.field("final_state", a.state_name(run.final_state)))
        }
        Command::Determinize { file, trailing_bound, state_budget, output } => {
            if state_budget == 0 {
                return Err(usage("--state-budget must be positive"));
            }
            let t = load_nft(&file)?;
            let res = determinize(&t, trailing_bound, state_budget).map_err(budget)?;
            let machine = res.automaton.to_text();
            let ann = res.annotation_text(&t);
            let mut r = Report::new(EXIT_POSITIVE, "ok")
                .field("states", res.automaton.num_states())
                .field("s", res.s)
                .field("t", res.t)
                .field("r", res.r)
                .field("overflow_drops", res.overflow_drops);
            match output {
                Some(path) => {
                    write_file(&path, &machine)?;
                    write_file(&annotation_path(&path), &ann)?;
                    r = r
                        .line(format!("states={}", res.automaton.num_states()))
                        .line(format!("s={} t={} r={}", res.s, res.t, res.r))
                        .line(format!("overflow_drops={}", res.overflow_drops));
                }
                None => {
                    r.text.push_str(&machine);
                    for l in ann.lines() {
                        let _ = writeln!(r.text, "# {l}");
                    }
                    r = r.field("machine", machine);
                }
            }
            Ok(r)
        }
        Command::CheckEquiv { first, second, max_input, max_output } => {
            let (m1, m2) = (load(&first)?, load(&second)?);
            let r1 = recognizer(&m1)?;
            let r2 = recognizer(&m2)?;
            let d = Domain::new(max_input, max_output);
            let cex = check_equivalence(r1.as_ref(), r2.as_ref(), d, jobs).map_err(|e| usage(e.to_string()))?;
            Ok(match cex {
                None => Report::new(EXIT_POSITIVE, "equivalent")
                    .line(format!("equivalent on inputs up to {max_input} and outputs up to {max_output}")),
                Some(c) => {
                    let verdict = |b: bool| if b { "accept" } else { "reject" };
                    let input = r1.input().render(&c.input);
                    let output = r1.output().render(&c.output);
                    Report::new(EXIT_NEGATIVE, "counterexample")
                        .line(format!(
                            "counterexample a={input} u={output} first={} second={}",
                            verdict(c.first_accepts),
                            verdict(c.second_accepts)
                        ))
                        .field("a", input)
                        .field("u", output)
                        .field("first", verdict(c.first_accepts))
                        .field("second", verdict(c.second_accepts))
                }
            })
        }
        Command::FindTrailing { file, bound, max_input, node_budget } => {
            let t = load_nft(&file)?;
            let found = find_trailing_witness_with_budget(&t, bound, max_input, node_budget).map_err(budget)?;
            Ok(match found {
                Some(w) => with_fields(Report::new(EXIT_NEGATIVE, "witness"), &w.fields(&t)),
                None => absent(max_input),
            })
        }
        Command::FindVariation { file, bound, max_input, node_budget } => {
            let t = load_nft(&file)?;
            let found = find_variation_witness_with_budget(&t, bound, max_input, node_budget).map_err(budget)?;
            Ok(match found {
                Some(w) => with_fields(Report::new(EXIT_NEGATIVE, "witness"), &w.fields(&t)),
                None => absent(max_input),
            })
        }
        Command::Valuedness { file, max_input, cap } => {
            if cap == 0 {
                return Err(usage("--cap must be positive"));
            }
            let t = load_nft(&file)?;
            let v = max_valuedness(&t, max_input, cap);
            let witness = v.witness.as_ref().map(|w| t.input().render(w));
            let mut r = Report::new(verdict_code(v.k <= 1), if v.k <= 1 { "functional" } else { "multivalued" })
                .line(format!("k={}{}", v.k, if v.overflow { "+" } else { "" }));
            if let Some(w) = &witness {
                r = r.line(format!("witness={w}"));
            }
            Ok(r.field("k", v.k).field("overflow", v.overflow).field("witness", witness))
        }
        Command::Ambiguity { file, max_input, max_output, cap } => {
            if cap == 0 {
                return Err(usage("--cap must be positive"));
            }
            let t = load_nft(&file)?;
            let a = max_ambiguity(&t, max_input, max_output, cap);
            Ok(Report::new(verdict_code(a.value <= 1), if a.value <= 1 { "unambiguous" } else { "ambiguous" })
                .line(format!("max_runs={}{}", a.value, if a.overflow { "+" } else { "" }))
                .field("max_runs", a.value)
                .field("overflow", a.overflow))
        }
        Command::TmRun { file, max_steps } => {
            let tm = load_tm(&file)?;
            let run = tm_run(&tm, max_steps);
            let status = match run.status {
                RunStatus::Halted => "halted",
                RunStatus::Looping => "looping",
                RunStatus::StepLimit => "step_limit",
            };
            let mut r = Report::new(verdict_code(run.status == RunStatus::Halted), status);
            let configs: Vec<String> = run.configs.iter().map(|c| c.render(&tm)).collect();
            for (k, c) in configs.iter().enumerate() {
                r = r.line(format!("{k}: {c}"));
            }
            Ok(r.line(format!("status: {status}")).field("configurations", configs))
        }
        Command::TmToNft { file, output } => {
            let tm = load_tm(&file)?;
            let red = tm_to_nft(&tm);
            let text = red.to_text();
            let r = Report::new(EXIT_POSITIVE, "ok")
                .field("states", red.nft.num_states())
                .field("transitions", red.nft.num_transitions());
            Ok(match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    r.line(format!("states={} transitions={}", red.nft.num_states(), red.nft.num_transitions()))
                }
                None => {
                    let mut r = r.field("machine", text.clone());
                    r.text = text;
                    r
                }
            })
        }
        Command::GenInput { file, steps, mode } => {
            let tm = load_tm(&file)?;
            let mode = match mode {
                ModeArg::Copy => Mode::Copy,
                ModeArg::Step => Mode::Step,
            };
            let w = build_reduction_input(&tm, steps, mode).map_err(|e| usage(e.to_string()))?;
            let text = w.to_general();
            Ok(Report::new(EXIT_POSITIVE, "ok").line(&text).field("word", text))
        }
        Command::RandomNft { seed, states, symbols, max_out, density, output } => {
            if states == 0 || symbols == 0 || symbols > 26 || !(0.0..=1.0).contains(&density) {
                return Err(usage("need --states >= 1, 1 <= --symbols <= 26 and 0 <= --density <= 1"));
            }
            let t = random_nft(seed, states, symbols, max_out, density);
            let text = t.to_text();
            Ok(match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    Report::new(EXIT_POSITIVE, "ok").line(format!("wrote {}", path.display()))
                }
                None => {
                    let mut r = Report::new(EXIT_POSITIVE, "ok").field("machine", text.clone());
                    r.text = text;
                    r
                }
            })
        }
    }
}

fn absent(max_input: usize) -> Report {
    Report::new(EXIT_POSITIVE, "absent")
        .line(format!("no witness with input length up to {max_input}"))
        .field("max_input", max_input)
}

fn recognizer(m: &Machine) -> Result<Box<dyn Recognizer + '_>, Failure> {
    match m {
        Machine::Nft(t) => Ok(Box::new(t.clone())),
        Machine::Tdfa(a) => Ok(Box::new(TdfaRecognizer::new(a))),
        Machine::Tm(_) => Err(usage("check-equiv needs nft or tdfa machines")),
    }
}
