use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use riesz_dstat::cert::{CheckOptions, DEFAULT_N_MAX, DEFAULT_PREFIX};
use riesz_dstat::corpus;
use riesz_dstat::index_set::DEFAULT_BUDGET;
use riesz_dstat::spec::{self, AnalysisSpec, Arg, Op, RunOptions, Task};

#[derive(Parser)]
#[command(name = "riesz-dstat", version, about = "Deferred statistical order convergence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Prefix length checked index by index.
    #[arg(long, global = true, default_value_t = DEFAULT_PREFIX)]
    prefix_n: u64,
    /// Largest n used when a density has to be estimated.
    #[arg(long, global = true, default_value_t = DEFAULT_N_MAX)]
    n_max: u64,
    /// Work budget for window counts.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Task worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Record per-task wall time (reports stop being reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a spec file.
    Run { spec: PathBuf },
    /// Deferred density of an index set.
    Density {
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "0")]
        p: String,
        #[arg(long, default_value = "n")]
        q: String,
    },
    /// Deferred Cesàro mean of a scalar sequence at one n.
    Cesaro {
        /// Sequence rule, e.g. "(n)" or "(1) if AP(2,0); (0)".
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "0")]
        p: String,
        #[arg(long, default_value = "n")]
        q: String,
    },
    /// Check the certificates declared in a spec file.
    Check {
        spec: PathBuf,
        /// Only this certificate.
        #[arg(long)]
        cert: Option<String>,
    },
    /// Which candidate limits admit a certificate with a given dominator.
    Member {
        spec: PathBuf,
        #[arg(long)]
        seq: String,
        /// A decrease certificate declared in the spec.
        #[arg(long)]
        cert: String,
        /// Candidate limit such as "(0, 0)"; repeatable.
        #[arg(long = "candidate", required = true)]
        candidates: Vec<String>,
    },
    /// Whitelist falsifier: the spec's falsify tasks, or the built-in alternating example.
    Falsify { spec: Option<PathBuf> },
    /// Seeded theorem-instance suite.
    Theorems {
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Validate a spec file, or one pair given by --p and --q.
    Validate {
        spec: Option<PathBuf>,
        #[arg(long, requires = "q", conflicts_with = "spec")]
        p: Option<String>,
        #[arg(long, requires = "p")]
        q: Option<String>,
    },
}

fn read_spec(path: &PathBuf) -> Result<AnalysisSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    spec::parse_spec(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn inline(text: String) -> Result<AnalysisSpec, String> {
    spec::parse_spec(&text).map_err(|e| format!("invalid argument: {}", e.message))
}

fn task(id: &str, op: Op, args: Vec<(&str, Arg)>) -> Task {
    Task {
        id: id.to_string(),
        op,
        args: args.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    }
}

fn build(command: Command) -> Result<AnalysisSpec, String> {
    Ok(match command {
        Command::Run { spec } => read_spec(&spec)?,
        Command::Density { set, p, q } => inline(format!("PAIR p: {p} q: {q}\nTASK density = density set={set}"))?,
        Command::Cesaro { seq, n, p, q } => {
            inline(format!("PAIR p: {p} q: {q}\nSEQ x = {seq}\nTASK cesaro = cesaro seq=x n={n}"))?
        }
        Command::Check { spec, cert } => {
            let mut s = read_spec(&spec)?;
            let names: Vec<String> = match cert {
                Some(name) if s.certificate(&name).is_some() => vec![name],
                Some(name) => return Err(format!("no certificate named `{name}`")),
                None => s.certificates.iter().map(|c| c.name.clone()).collect(),
            };
            s.tasks = names
                .into_iter()
                .map(|n| task(&format!("check_{n}"), Op::Check, vec![("cert", Arg::Name(n))]))
                .collect();
            s
        }
        Command::Member {
            spec,
            seq,
            cert,
            candidates,
        } => {
            let mut s = read_spec(&spec)?;
            s.tasks.clear();
            let text = format!(
                "{s}TASK member = member seq={seq} cert={cert} candidates=[{}]\n",
                candidates.join(", ")
            );
            inline(text)?
        }
        Command::Falsify { spec: Some(path) } => {
            let mut s = read_spec(&path)?;
            s.tasks.retain(|t| t.op == Op::Falsify);
            if s.tasks.is_empty() {
                return Err(format!("{}: no falsify tasks", path.display()));
            }
            s
        }
        Command::Falsify { spec: None } => inline(corpus::alternating_spec())?,
        Command::Theorems { trials } => inline(format!("TASK theorems = theorems trials={trials}"))?,
        Command::Validate {
            p: Some(p), q: Some(q), ..
        } => inline(format!("TASK validate = validate p={p} q={q}"))?,
        Command::Validate { spec: Some(path), .. } => {
            let mut s = read_spec(&path)?;
            s.tasks = s
                .pairs
                .iter()
                .map(|(name, pair)| {
                    task(
                        &format!("pair_{name}"),
                        Op::Validate,
                        vec![("p", Arg::Rule(pair.p())), ("q", Arg::Rule(pair.q()))],
                    )
                })
                .collect();
            s
        }
        Command::Validate { .. } => return Err("validate needs a spec file or both --p and --q".into()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.common;
    let options = RunOptions {
        check: CheckOptions {
            prefix_n: c.prefix_n,
            n_max: c.n_max,
            budget: c.budget,
        },
        seed: c.seed,
        jobs: c.jobs,
        timings: c.timings,
    };
    let spec = match build(cli.command) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = spec::run(&spec, &options);
    let rendered = report.render();
    match &c.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
            for t in &report.tasks {
                println!("{}: {}", t.id, t.status.as_str());
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
