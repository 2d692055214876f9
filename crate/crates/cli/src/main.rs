use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use semistab::cohomology::{extension_probe, highercohcor_classify, hk_vanishing, reduction_condition};
use semistab::cyclotomic::{compute_r, n_set, quasithm_oracle, DegreeValue, DEFAULT_DEGREE_BOUND};
use semistab::harness::generate::generate_hypothesis_instances;
use semistab::harness::suites::suite_info;
use semistab::harness::{analyze, run_suite, Scenario, SUITES};

// A closed pipe (e.g. `| head`) is not an error worth a panic.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "semistab", version, about = "Semistability criteria for modeled inertia actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a scenario and evaluate every applicable criterion.
    Analyze {
        scenario: PathBuf,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a property suite; exits nonzero on any violation.
    Verify {
        #[arg(long)]
        suite: String,
        /// Defaults to the suite's own trial count.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
    },
    /// List registered suites.
    Suites,
    /// Tables of N(k), or of the degree function R with certificates.
    Tables {
        #[arg(long, value_name = "KMAX", conflicts_with = "r", required_unless_present = "r")]
        nk: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["KMAX", "NMAX"])]
        r: Option<Vec<u64>>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        nbound: u64,
    },
    /// Exhaustive oracles.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
    /// Inertia on H^k with Z/n coefficients.
    Cohomology {
        scenario: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
    },
    /// Emit hypothesis-preserving scenarios with their witnesses.
    Generate {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Oracle {
    Quasithm {
        #[arg(long, default_value_t = 4)]
        kmax: u64,
        #[arg(long, default_value_t = 30)]
        nmax: u64,
        #[arg(long = "Nmax", default_value_t = 60)]
        order_max: u64,
    },
}

type CliResult = Result<ExitCode, String>;

fn load(path: &Path) -> Result<Scenario, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Scenario::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_analyze(path: &Path, n: Option<u64>, format: Format) -> CliResult {
    let scenario = load(path)?;
    let report = analyze(&scenario, n).map_err(|e| e.to_string())?;
    match format {
        Format::Json => outln!("{}", report.to_json()),
        Format::Text => out!("{}", report.to_text()),
    }
    let clean = report.violations().next().is_none();
    Ok(status(clean))
}

fn cmd_verify(suite: &str, trials: Option<u64>, seed: u64, dmax: usize) -> CliResult {
    let info = suite_info(suite).map_err(|e| e.to_string())?;
    let report = run_suite(suite, trials.unwrap_or(info.default_trials), seed, dmax).map_err(|e| e.to_string())?;
    outln!("{}", report.to_json());
    Ok(status(report.passed))
}

fn cmd_tables(nk: Option<u64>, r: Option<Vec<u64>>, nbound: u64) -> CliResult {
    if let Some(kmax) = nk {
        for k in 1..=kmax {
            outln!("{}", n_set(k));
        }
        return Ok(ExitCode::SUCCESS);
    }
    let r = r.expect("clap enforces one of the two");
    let (kmax, nmax) = (r[0], r[1]);
    for k in 1..=kmax {
        for n in 1..=nmax {
            match compute_r(k, n, nbound) {
                DegreeValue::Bounded { value, admissible, bound, .. } => {
                    let cert: Vec<String> = admissible.iter().map(u64::to_string).collect();
                    outln!("R({k}, {n}) = {value}  admissible N <= {bound}: {}", cert.join(", "));
                }
                DegreeValue::Unbounded { .. } => outln!("R({k}, {n}) = unbounded  every N is admissible"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cohomology(path: &Path, k: usize, n: u64) -> CliResult {
    let scenario = load(path)?;
    let g = scenario.generator().map_err(|e| e.to_string())?;
    let vanishing = hk_vanishing(&g, k, n).map_err(|e| e.to_string())?;
    let verdicts = highercohcor_classify(&g, k, n, scenario.flags.strictly_henselian);
    let extension = extension_probe(&g, k, n).map_err(|e| e.to_string())?;
    let (verdicts, excluded) = match verdicts {
        Ok(vs) => (vs, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let ok = verdicts.iter().all(|v| v.agree) && extension.as_ref().is_none_or(|v| v.agree);
    let out = json!({
        "k": k,
        "n": n,
        "vanishing": vanishing,
        "reduction_condition": reduction_condition(&g, k),
        "verdicts": verdicts,
        "excluded": excluded,
        "extension": extension,
    });
    outln!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(status(ok))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Analyze { scenario, n, format } => cmd_analyze(&scenario, n, format),
        Command::Verify { suite, trials, seed, dmax } => cmd_verify(&suite, trials, seed, dmax),
        Command::Suites => {
            for s in &SUITES {
                outln!("{:<26} {:>6}  {}", s.id, s.default_trials, s.summary);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables { nk, r, nbound } => cmd_tables(nk, r, nbound),
        Command::Oracle { which: Oracle::Quasithm { kmax, nmax, order_max } } => {
            let report = quasithm_oracle(kmax, nmax, order_max);
            outln!("{}", serde_json::to_string_pretty(&report).expect("json"));
            Ok(status(report.passed()))
        }
        Command::Cohomology { scenario, k, n } => cmd_cohomology(&scenario, k, n),
        Command::Generate { theorem, count, dmax, seed } => {
            let instances = generate_hypothesis_instances(&theorem, count, dmax, seed).map_err(|e| e.to_string())?;
            outln!("{}", serde_json::to_string_pretty(&instances).expect("json"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
