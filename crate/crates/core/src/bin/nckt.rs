use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nckt::counter::verify_counter;
use nckt::hardness::{self, AnalysisConfig};
use nckt::lemmas::{self, LemmaReport};
use nckt::qbf::{evaluate_qbf, normalize, parse_qdimacs, QbfFormula};
use nckt::reduction::{compile, solve_via_circuit};
use nckt::sim::{run, RunConfig, DEFAULT_HARD_CAP};
use nckt::{gen_counter, read_circuit, write_circuit, Circuit, Error, NeuronId, SilenceMask};

const EXIT_NO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_LIMIT: u8 = 4;

/// Recurrent threshold circuits: generate, compile, simulate, verify, analyze.
#[derive(Parser)]
#[command(name = "nckt", version)]
struct Cli {
    /// Simulation step budget (overrides per-command defaults).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Upper bound on any simulation budget.
    #[arg(long, global = true, default_value_t = DEFAULT_HARD_CAP)]
    hard_cap: u64,
    /// Emit JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel analyses (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the n-bit counter circuit.
    GenCounter {
        #[arg(short)]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Normalize a QDIMACS formula and compile it to a circuit.
    Compile {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write the compilation metadata as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Simulate a circuit from its initial condition.
    Sim(SimArgs),
    /// Decide a QDIMACS formula.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Circuit)]
        via: Via,
    },
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Analyze(Analyze),
}

#[derive(Args)]
struct SimArgs {
    file: PathBuf,
    /// Number of steps (default: the full `2^|V| + 1` with cycle detection).
    #[arg(long)]
    steps: Option<u64>,
    /// Comma-separated neurons to record.
    #[arg(long, value_delimiter = ',')]
    watch: Vec<String>,
    /// Write the recorded trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Comma-separated neurons to silence.
    #[arg(long, value_delimiter = ',')]
    silence: Vec<String>,
    /// Stop at the first firing of the output.
    #[arg(long)]
    until_output: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Circuit,
    Bruteforce,
}

#[derive(Subcommand)]
enum Verify {
    /// Check counters of sizes LO..HI against their closed forms.
    Counter {
        #[arg(short, value_parser = parse_range)]
        n: (usize, usize),
        /// Steps per counter (default `2n + 4 * 2^n`).
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Check a compiled formula: bounds, answer and firing deadline.
    Reduction { input: PathBuf },
    /// Check the stage timing of a compiled formula.
    Lemma39 {
        input: PathBuf,
        /// Check the block-level statements instead of the per-step ones.
        #[arg(long)]
        blockwise: bool,
    },
}

#[derive(Subcommand)]
enum Analyze {
    /// Degenerate sets of a small circuit.
    Degenerate {
        file: PathBuf,
        #[command(flatten)]
        which: DegenerateSelect,
        #[arg(long, default_value_t = hardness::DEFAULT_MAX_FREE)]
        max_free: usize,
    },
    /// Vital sets of a small circuit.
    Vital {
        file: PathBuf,
        /// Only the 1-vital neurons.
        #[arg(long, conflicts_with = "max_size")]
        one: bool,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value_t = hardness::DEFAULT_MAX_FREE)]
        max_free: usize,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct DegenerateSelect {
    #[arg(long)]
    all: bool,
    #[arg(long)]
    minimal: bool,
    #[arg(long)]
    minimum: bool,
    /// Decide whether a degenerate set of exactly this size exists.
    #[arg(long)]
    size: Option<usize>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// Outcome of a command: text and JSON renderings plus the exit code.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, code: 0 }
    }

    fn code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    fn decision(yes: bool, json: Value) -> Self {
        Output::new(if yes { "YES" } else { "NO" }, json).code(if yes { 0 } else { EXIT_NO })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("nckt: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match dispatch(&cli) {
        Ok(out) => {
            let body = if cli.json { out.json.to_string() } else { out.text };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            if !body.is_empty() {
                let _ = writeln!(std::io::stdout().lock(), "{body}");
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("nckt: {e}");
            ExitCode::from(match e {
                Error::LimitExceeded { .. } => EXIT_LIMIT,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn read(path: &Path) -> nckt::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, contents: &str) -> nckt::Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_circuit(path: &Path) -> nckt::Result<Circuit> {
    Ok(read_circuit(&read(path)?)?)
}

fn load_formula(path: &Path) -> nckt::Result<QbfFormula> {
    Ok(parse_qdimacs(&read(path)?)?)
}

fn names(c: &Circuit, list: &[String]) -> nckt::Result<Vec<NeuronId>> {
    list.iter().filter(|s| !s.is_empty()).map(|s| c.lookup(s)).collect()
}

fn dispatch(cli: &Cli) -> nckt::Result<Output> {
    match &cli.command {
        Command::GenCounter { n, output } => {
            let layout = gen_counter(*n)?;
            write(output, &write_circuit(&layout.circuit))?;
            let c = &layout.circuit;
            let text = format!("counter n={n}: {} neurons, {} edges, output {}", c.len(), c.edge_count(), c.name(c.output()));
            Ok(Output::new(text, json!({"n": n, "neurons": c.len(), "edges": c.edge_count(), "output": c.name(c.output())})))
        }
        Command::Compile { input, output, report } => {
            let q = normalize(&load_formula(input)?);
            let art = compile(&q)?;
            write(output, &write_circuit(&art.circuit))?;
            let meta = art.metadata();
            if let Some(path) = report {
                write(path, &serde_json::to_string_pretty(&meta).expect("metadata serializes"))?;
            }
            let text = format!(
                "n={} m={} neurons={} edges={} t_max={}",
                art.n,
                art.m,
                art.circuit.len(),
                art.circuit.edge_count(),
                art.t_max
            );
            Ok(Output::new(text, meta))
        }
        Command::Sim(args) => sim(cli, args),
        Command::Solve { input, via } => {
            let f = load_formula(input)?;
            let yes = match via {
                Via::Circuit => solve_via_circuit(&f)?,
                Via::Bruteforce => evaluate_qbf(&f)?,
            };
            Ok(Output::decision(yes, json!({"answer": yes})))
        }
        Command::Verify(v) => verify(v),
        Command::Analyze(a) => analyze(cli, a),
    }
}

fn sim(cli: &Cli, args: &SimArgs) -> nckt::Result<Output> {
    let c = load_circuit(&args.file)?;
    let mask = SilenceMask::from_ids(&c, names(&c, &args.silence)?)?;
    let watched = names(&c, &args.watch)?;
    let cfg = RunConfig {
        budget: args.steps.or(cli.budget),
        hard_cap: cli.hard_cap,
        watched,
        detect_cycles: args.steps.is_none(),
        stop_at_output: args.until_output,
    };
    let (outcome, trace) = run(&c, &mask, &cfg)?;
    if let Some(path) = &args.trace {
        write(path, &trace.to_csv())?;
    }
    let mut text = format!(
        "output_fired={} first_output_time={} steps={} terminated_by={}",
        outcome.output_fired,
        outcome.first_output_time.map_or("none".to_string(), |t| t.to_string()),
        outcome.steps_executed,
        outcome.terminated_by.as_str()
    );
    if args.trace.is_none() && !trace.watched().is_empty() {
        text.push('\n');
        text.push_str(trace.to_csv().trim_end());
    }
    let json = serde_json::to_value(&outcome).expect("outcome serializes");
    Ok(Output::new(text, json))
}

fn verify(v: &Verify) -> nckt::Result<Output> {
    match v {
        Verify::Counter { n: (lo, hi), horizon } => {
            let mut lines = Vec::new();
            let mut reports = Vec::new();
            let mut ok = true;
            for n in *lo..=*hi {
                let r = verify_counter(n, *horizon)?;
                ok &= r.ok();
                lines.push(match &r.mismatch {
                    None => format!("n={n}: ok ({} steps)", r.steps),
                    Some(m) => format!("n={n}: MISMATCH {} at t={} (expected {}, got {})", m.neuron, m.t, m.expected, m.actual),
                });
                reports.push(r);
            }
            let json = json!({"ok": ok, "reports": reports});
            Ok(Output::new(lines.join("\n"), json).code(if ok { 0 } else { EXIT_MISMATCH }))
        }
        Verify::Reduction { input } => {
            let f = load_formula(input)?;
            let expected = evaluate_qbf(&f)?;
            let art = compile(&normalize(&f))?;
            let validation = art.circuit.validate();
            let outcome = art.simulate()?;
            let deadline = outcome.first_output_time.is_none_or(|t| t <= art.t_max);
            let ok = validation.is_valid() && outcome.output_fired == expected && deadline;
            let violations: Vec<String> = validation.violations.iter().map(|v| v.to_string()).collect();
            let text = format!(
                "expected={} circuit={} first_output_time={} t_max={} bound_violations={}\n{}",
                expected,
                outcome.output_fired,
                outcome.first_output_time.map_or("none".to_string(), |t| t.to_string()),
                art.t_max,
                violations.len(),
                if ok { "ok" } else { "MISMATCH" }
            );
            let json = json!({
                "ok": ok,
                "expected": expected,
                "circuit": outcome.output_fired,
                "first_output_time": outcome.first_output_time,
                "t_max": art.t_max,
                "violations": violations,
            });
            Ok(Output::new(text, json).code(if ok { 0 } else { EXIT_MISMATCH }))
        }
        Verify::Lemma39 { input, blockwise } => {
            let art = compile(&normalize(&load_formula(input)?))?;
            let mut report = lemmas::check_base_claim(&art)?;
            report.merge(if *blockwise {
                lemmas::check_induction_lemma_blockwise(&art)?
            } else {
                lemmas::check_induction_lemma(&art)?
            });
            report.merge(lemmas::check_timing_claims(&art)?);
            Ok(lemma_output(&report))
        }
    }
}

fn lemma_output(report: &LemmaReport) -> Output {
    let mut lines = vec![format!("checked={} failures={}", report.checked, report.failure_count)];
    for f in report.failures.iter().take(10) {
        lines.push(format!(
            "  {} i={} {} t={}: expected {}, got {}",
            f.check, f.i, f.neuron, f.t, f.expected as u8, f.actual as u8
        ));
    }
    lines.push(if report.ok() { "ok" } else { "MISMATCH" }.to_string());
    let json = serde_json::to_value(report).expect("report serializes");
    Output::new(lines.join("\n"), json).code(if report.ok() { 0 } else { EXIT_MISMATCH })
}

fn analyze(cli: &Cli, a: &Analyze) -> nckt::Result<Output> {
    let cfg = |max_free: usize| AnalysisConfig { max_free, budget: cli.budget, ..Default::default() };
    // Reports are JSON documents in either mode.
    let doc = |v: Value| Output::new(serde_json::to_string_pretty(&v).expect("report serializes"), v);
    match a {
        Analyze::Degenerate { file, which, max_free } => {
            let c = load_circuit(file)?;
            let cfg = cfg(*max_free);
            if let Some(k) = which.size {
                let yes = hardness::decide_k_degenerate(&c, k, &cfg)?;
                return Ok(Output::decision(yes, json!({"size": k, "exists": yes})));
            }
            let r = hardness::enumerate_degenerate(&c, &cfg)?;
            let v = if which.minimal {
                json!({"base_nontrivial": r.base_nontrivial, "minimal_sets": r.minimal_sets})
            } else if which.minimum {
                json!({"base_nontrivial": r.base_nontrivial, "minimum_size": r.minimum_size, "minimum_sets": r.minimum_sets})
            } else {
                serde_json::to_value(&r).expect("report serializes")
            };
            Ok(doc(v))
        }
        Analyze::Vital { file, one, max_size, max_free } => {
            let c = load_circuit(file)?;
            let cfg = cfg(*max_free);
            let k = if *one { 1 } else { max_size.unwrap_or(c.len().saturating_sub(2)) };
            let r = match hardness::enumerate_vital(&c, k, &cfg) {
                // Too large to list: still decide whether a 1-vital neuron exists.
                Err(Error::LimitExceeded { .. }) if *one => {
                    let yes = hardness::one_vital_nonempty(&c, &cfg)?;
                    let certs: Vec<&str> = hardness::output_cut_certificates(&c).into_iter().map(|v| c.name(v)).collect();
                    let v = json!({"one_vital_nonempty": yes, "certificates": if yes { certs } else { vec![] }});
                    return Ok(Output::decision(yes, v));
                }
                other => other?,
            };
            let v = if *one {
                json!({"one_vital_neurons": r.one_vital_neurons})
            } else {
                serde_json::to_value(&r).expect("report serializes")
            };
            Ok(doc(v))
        }
    }
}
