//! Library side of the `quartic-pd` command: argument types, input parsing,
//! the classification pipeline and report rendering.

pub mod input;
pub mod pipeline;
pub mod report;

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use quartic_core::inequality::{builtin_catalog, verify_all, Expectation};
use quartic_core::oracle::{sphere_minimize, zero_set_from_result, OracleConfig};

use input::{Input, InputError, Kind};
use pipeline::{Mode, Question};

/// Exit status for malformed input.
pub const EXIT_INPUT: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "quartic-pd", version, about = "Decide positive (semi)definiteness of 4th-order symmetric tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a tensor (exit 0 PD, 1 PSD, 2 indefinite, 3 undetermined, 64 bad input).
    Check(CheckArgs),
    /// Minimize the form over the unit sphere and probe its zero set.
    Minimize(MinimizeArgs),
    /// Run the built-in inequality catalog (exit 0 iff every entry behaves as expected).
    Inequalities(InequalityArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Tensor document (JSON or text); `-` reads stdin.
    pub path: Option<String>,
    /// Binary quartic shorthand `t1111 t1112 t1122 t1222 t2222`.
    #[arg(long, conflicts_with_all = ["path", "cyclic", "relaxed"], allow_hyphen_values = true)]
    pub binary: Option<String>,
    /// Cyclic ternary shorthand `a b c d e`.
    #[arg(long, conflicts_with_all = ["path", "relaxed"], allow_hyphen_values = true)]
    pub cyclic: Option<String>,
    /// Relaxed cyclic ternary shorthand `a b c d e123 e223 e233`.
    #[arg(long, conflicts_with = "path", allow_hyphen_values = true)]
    pub relaxed: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Lattice size (default 4096 for n = 2, 20000 for n = 3).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Jitter seed.
    #[arg(long, default_value_t = OracleConfig::default().seed)]
    pub seed: u64,
    /// Boundary band half-width.
    #[arg(long, default_value_t = OracleConfig::default().classify_margin)]
    pub margin: f64,
    /// Run the oracle on one thread.
    #[arg(long)]
    pub sequential: bool,
    /// Emit JSON.
    #[arg(long)]
    pub json: bool,
}

impl OracleArgs {
    pub fn config(&self) -> OracleConfig {
        OracleConfig {
            grid_points: self.grid,
            seed: self.seed,
            classify_margin: self.margin,
            parallel: !self.sequential,
            ..OracleConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: Source,
    /// Ask for semidefiniteness instead of definiteness.
    #[arg(long)]
    pub psd: bool,
    /// Skip the analytic stages.
    #[arg(long, conflicts_with = "analytic_only")]
    pub oracle_only: bool,
    /// Skip the numeric oracle.
    #[arg(long)]
    pub analytic_only: bool,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InequalityArgs {
    /// Restrict to these labels (e.g. `19u`, `19-14-14`, `41/3-15-15`).
    #[arg(long)]
    pub only: Vec<String>,
    /// Also verify the exchanged variant of every strict, expected-to-hold entry.
    #[arg(long)]
    pub exchanged: bool,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

/// Rendered output and exit status of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Run {
    fn ok(stdout: String, code: u8) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn input_error(message: String) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: EXIT_INPUT,
        }
    }
}

fn render(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

pub fn load(source: &Source, read: impl Fn(&str) -> std::io::Result<String>) -> Result<Input, InputError> {
    if let Some(s) = &source.binary {
        return input::parse_shorthand(Kind::Binary, s);
    }
    if let Some(s) = &source.cyclic {
        return input::parse_shorthand(Kind::Cyclic, s);
    }
    if let Some(s) = &source.relaxed {
        return input::parse_shorthand(Kind::Relaxed, s);
    }
    let path = source
        .path
        .as_deref()
        .ok_or_else(|| InputError {
            field: "input".into(),
            message: "give a path or one of --binary/--cyclic/--relaxed".into(),
        })?;
    let text = read(path).map_err(|e| InputError {
        field: "input".into(),
        message: format!("{path}: {e}"),
    })?;
    input::parse_document(&text)
}

fn read_path(path: &str) -> std::io::Result<String> {
    if path == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
}

pub fn cmd_check(args: &CheckArgs) -> Run {
    let input = match load(&args.source, read_path) {
        Ok(i) => i,
        Err(e) => return Run::input_error(e.to_string()),
    };
    let question = if args.psd {
        Question::PositiveSemidefinite
    } else {
        Question::PositiveDefinite
    };
    let mode = match (args.oracle_only, args.analytic_only) {
        (true, _) => Mode::OracleOnly,
        (_, true) => Mode::AnalyticOnly,
        _ => Mode::Full,
    };
    let outcome = match pipeline::run(&input.tensor, question, mode, &args.oracle.config()) {
        Ok(o) => o,
        Err(e) => return Run::input_error(e.to_string()),
    };
    let code = pipeline::exit_code(outcome.verdict.class);
    let stdout = if args.oracle.json {
        render(&report::check_json(&input, question, &outcome))
    } else {
        report::check_text(&input, question, &outcome)
    };
    Run::ok(stdout, code)
}

pub fn cmd_minimize(args: &MinimizeArgs) -> Run {
    let input = match load(&args.source, read_path) {
        Ok(i) => i,
        Err(e) => return Run::input_error(e.to_string()),
    };
    let cfg = args.oracle.config();
    let start = Instant::now();
    let res = match sphere_minimize(&input.tensor, &cfg) {
        Ok(r) => r,
        Err(e) => return Run::input_error(e.to_string()),
    };
    let zeros = zero_set_from_result(&res, &cfg);
    let elapsed = start.elapsed().as_micros();
    let stdout = if args.oracle.json {
        render(&report::minimize_json(&input, &res, &zeros, elapsed))
    } else {
        report::minimize_text(&input, &res, &zeros)
    };
    Run::ok(stdout, 0)
}

pub fn cmd_inequalities(args: &InequalityArgs) -> Run {
    let cfg = args.oracle.config();
    if let Err(e) = cfg.validate() {
        return Run::input_error(e.to_string());
    }
    let mut list = builtin_catalog();
    if args.exchanged {
        let extra: Vec<_> = list
            .iter()
            .filter(|i| i.strict && i.expectation == Expectation::Holds)
            .map(|i| i.exchanged())
            .collect();
        list.extend(extra);
    }
    if !args.only.is_empty() {
        if let Some(missing) = args.only.iter().find(|l| !list.iter().any(|i| &i.label == *l)) {
            return Run::input_error(format!("--only: unknown label {missing:?}"));
        }
        list.retain(|i| args.only.contains(&i.label));
    }
    let start = Instant::now();
    let reports = match verify_all(&list, &cfg) {
        Ok(r) => r,
        Err(e) => return Run::input_error(e.to_string()),
    };
    let elapsed = start.elapsed().as_micros();
    let all_ok = reports.iter().all(|r| r.as_expected);
    let rows: Vec<_> = list.into_iter().zip(reports).collect();
    let stdout = if args.oracle.json {
        render(&report::inequalities_json(&rows, all_ok, elapsed))
    } else {
        report::inequalities_text(&rows)
    };
    Run::ok(stdout, if all_ok { 0 } else { 1 })
}

pub fn dispatch(cli: &Cli) -> Run {
    match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Minimize(a) => cmd_minimize(a),
        Command::Inequalities(a) => cmd_inequalities(a),
    }
}
