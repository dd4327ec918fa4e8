use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use delta2::bench::{
    generate, load_corpus, run_benchmark, BenchError, BenchOptions, GeneratorSpec, RandomSpec,
};
use delta2::formula::{classify, is_dual_normal_form, is_normal_form, measures, parse, Formula};
use delta2::oracle::{bounded_equiv, EquivMode, EquivVerdict};
use delta2::rewrite::{normalize, NormalizeError, NormalizeOptions};

#[derive(Parser)]
#[command(name = "delta2", version, about = "Normalize LTL formulas into the Delta-2 normal form")]
struct Cli {
    /// Read formulas from FILE, one per line ('#' starts a comment line).
    #[arg(long, global = true, value_name = "FILE")]
    file: Option<PathBuf>,
    /// Print only what the exit status cannot convey.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a formula into the normal form.
    Normalize {
        formula: Option<String>,
        /// Print one line per rule application.
        #[arg(long)]
        trace: bool,
        /// Print node counts of input and output.
        #[arg(long)]
        stats: bool,
        /// Stop after this stage.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
        stage: u8,
        /// Produce the dual normal form.
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        no_simplify: bool,
        /// Replace every occurrence sharing the rewritten node's key argument.
        #[arg(long)]
        broad: bool,
    },
    /// Print the least hierarchy class containing the formula.
    Classify { formula: Option<String> },
    /// Check the normal-form conditions; exit 1 on a violation.
    Check {
        formula: Option<String>,
        /// Check the dual normal form instead.
        #[arg(long)]
        dual: bool,
    },
    /// Compare two formulas on all lasso words up to the given bounds.
    Equiv {
        left: String,
        right: String,
        #[arg(long, default_value_t = 3)]
        prefix: usize,
        #[arg(long = "loop", default_value_t = 3)]
        loop_len: usize,
        /// Draw this many random words instead of enumerating.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print generated formulas, one per line.
    Gen(GenArgs),
    /// Normalize a corpus and print one record per formula and a summary.
    Bench {
        #[command(flatten)]
        gen: GenArgs,
        /// Oracle-check every output on lassos up to P,L.
        #[arg(long, value_name = "P,L")]
        verify: Option<String>,
        /// Per-formula timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Report every time as zero, for byte-stable output.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        no_simplify: bool,
        #[arg(long)]
        broad: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    /// wu-star:N, wu-star:A..B, wu-nested:N, wu-nested:A..B or random.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    size: usize,
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Verification { .. } | BenchError::Invariant { .. } | BenchError::Oracle(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| Failure::Usage(format!("{e}\n{}", e.caret(text))))
}

/// The formulas to work on: the positional argument or the lines of
/// `--file`, where comment and blank lines map to `None`.
fn inputs(cli_file: &Option<PathBuf>, formula: &Option<String>) -> Result<Vec<Option<String>>, Failure> {
    match (cli_file, formula) {
        (Some(_), Some(_)) => Err(Failure::Usage("give either FORMULA or --file, not both".into())),
        (None, None) => Err(Failure::Usage("missing FORMULA (or --file)".into())),
        (None, Some(f)) => Ok(vec![Some(f.clone())]),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(text
                .lines()
                .map(|l| {
                    let t = l.trim();
                    (!t.is_empty() && !t.starts_with('#')).then(|| t.to_string())
                })
                .collect())
        }
    }
}

/// Runs `each` on every input, printing an empty line for skipped lines.
/// Parse errors are reported and the batch continues; the worst failure
/// decides the result.
fn batch(
    cli: &Cli,
    formula: &Option<String>,
    mut each: impl FnMut(&Formula, &mut dyn Write) -> Outcome,
) -> Outcome {
    let lines = inputs(&cli.file, formula)?;
    let single = cli.file.is_none();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut all = true;
    let mut usage = None;
    for (i, line) in lines.iter().enumerate() {
        let Some(text) = line else {
            let _ = writeln!(out);
            continue;
        };
        match parse_formula(text).and_then(|f| each(&f, &mut out)) {
            Ok(ok) => all &= ok,
            Err(Failure::Usage(msg)) if !single => {
                eprintln!("line {}: {msg}", i + 1);
                let _ = writeln!(out);
                usage = Some(msg);
            }
            Err(e) => return Err(e),
        }
    }
    match usage {
        Some(msg) => Err(Failure::Usage(msg)),
        None => Ok(all),
    }
}

fn internal(e: NormalizeError) -> Failure {
    match e {
        NormalizeError::Invariant(_) => Failure::Internal(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("invalid family size `{text}`"));
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let n = text.parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

/// Formulas described by the generator flags, numbered from 1.
fn generated(g: &GenArgs) -> Result<Vec<(usize, Formula)>, Failure> {
    let family = g.family.as_deref().ok_or_else(|| Failure::Usage("missing --family".into()))?;
    let (name, arg) = family.split_once(':').unwrap_or((family, ""));
    let specs: Vec<GeneratorSpec> = match name {
        "wu-star" | "wu-nested" => {
            let (a, b) = parse_range(arg)?;
            (a..=b)
                .map(|n| if name == "wu-star" { GeneratorSpec::WuStar(n) } else { GeneratorSpec::WuNested(n) })
                .collect()
        }
        "random" if arg.is_empty() => {
            vec![GeneratorSpec::Random(RandomSpec::new(g.seed, g.size, g.atoms))]
        }
        _ => return Err(Failure::Usage(format!("unknown family `{family}`"))),
    };
    let mut all = Vec::new();
    for spec in &specs {
        for (_, f) in generate(spec, g.count)? {
            all.push((all.len() + 1, f));
        }
    }
    Ok(all)
}

fn parse_bounds(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("invalid bounds `{text}`, expected P,L"));
    let (p, l) = text.split_once(',').ok_or_else(bad)?;
    let (p, l) = (p.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?);
    if l == 0 {
        return Err(Failure::Usage("loop bound must be at least 1".into()));
    }
    Ok((p, l))
}

fn run(cli: &Cli) -> Outcome {
    let quiet = cli.quiet;
    match &cli.command {
        Command::Normalize { formula, trace, stats, stage, dual, no_simplify, broad } => {
            let opts = NormalizeOptions {
                dual: *dual,
                broad_replacement: *broad,
                simplify: !no_simplify,
                stage_limit: *stage,
                ..NormalizeOptions::default()
            };
            batch(cli, formula, |f, out| {
                let n = normalize(f, &opts).map_err(internal)?;
                let _ = writeln!(out, "{}", n.formula);
                if *trace && !quiet {
                    for step in n.trace.steps() {
                        let _ = writeln!(out, "{step}");
                    }
                }
                if *stats && !quiet {
                    let (a, b) = (measures(f), measures(&n.formula));
                    let _ = writeln!(
                        out,
                        "in_nodes:{} in_dag:{} out_nodes:{} out_dag:{} rules:{}",
                        a.nodes,
                        a.dag_nodes,
                        b.nodes,
                        b.dag_nodes,
                        n.trace.len()
                    );
                }
                Ok(true)
            })
        }
        Command::Classify { formula } => batch(cli, formula, |f, out| {
            let _ = writeln!(out, "{}", classify(f));
            Ok(true)
        }),
        Command::Check { formula, dual } => batch(cli, formula, |f, out| {
            let verdict = if *dual { is_dual_normal_form(f) } else { is_normal_form(f) };
            if !quiet {
                let _ = writeln!(out, "{verdict}");
            }
            Ok(verdict.is_pass())
        }),
        Command::Equiv { left, right, prefix, loop_len, samples, seed } => {
            if cli.file.is_some() {
                return Err(Failure::Usage("equiv takes two formulas, not --file".into()));
            }
            let (f, g) = (parse_formula(left)?, parse_formula(right)?);
            let mode = match samples {
                Some(n) => EquivMode::Sampled { samples: *n, seed: *seed },
                None => EquivMode::Exhaustive,
            };
            let verdict =
                bounded_equiv(&f, &g, *prefix, *loop_len, mode).map_err(|e| Failure::Usage(e.to_string()))?;
            match verdict {
                EquivVerdict::EquivalentUpToBound { words_checked } => {
                    if !quiet {
                        println!("equivalent up to bound ({words_checked} words checked)");
                    }
                    Ok(true)
                }
                EquivVerdict::Counterexample(w) => {
                    if !quiet {
                        println!("counterexample {w}");
                    }
                    Ok(false)
                }
            }
        }
        Command::Gen(g) => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for (_, f) in generated(g)? {
                let _ = writeln!(out, "{f}");
            }
            Ok(true)
        }
        Command::Bench { gen, verify, timeout, no_timing, dual, no_simplify, broad } => {
            let corpus = match (&cli.file, &gen.family) {
                (Some(_), Some(_)) => return Err(Failure::Usage("give either --family or --file".into())),
                (Some(path), None) => load_corpus(path, false)?.entries,
                (None, _) => generated(gen)?,
            };
            if !timeout.is_finite() || *timeout < 0.0 {
                return Err(Failure::Usage("timeout must be a nonnegative number of seconds".into()));
            }
            let opts = BenchOptions {
                normalize: NormalizeOptions {
                    dual: *dual,
                    broad_replacement: *broad,
                    simplify: !no_simplify,
                    ..NormalizeOptions::default()
                },
                verify: verify.as_deref().map(parse_bounds).transpose()?,
                timeout: Duration::from_secs_f64(*timeout),
                timing: !no_timing,
            };
            let report = run_benchmark(&corpus, &opts)?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            if !quiet {
                for r in &report.records {
                    let _ = writeln!(out, "{r}");
                }
            }
            let _ = writeln!(out, "{}", report.summary);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
