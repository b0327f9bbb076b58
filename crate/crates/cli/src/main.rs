//! `valuegrep`: pattern search driven by letter-value window scores.
//!
//! Exit codes: 0 success, 1 nothing found (search and collide), 2 usage
//! error, 3 runtime error.

use std::env;
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use valuegrep_core::harness::{self, ExperimentConfig, HarnessError};
use valuegrep_core::matcher::DEFAULT_ENUMERATION_CAP;
use valuegrep_core::{
    default_table, find_collisions, search, CollisionMode, FormulaSpec, MatchError, ScoreError,
    Table, ValueTable,
};

#[derive(Parser)]
#[command(name = "valuegrep", version, about = "Letter-value pattern search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search line-oriented text for a pattern by comparing window scores.
    Search(SearchCmd),
    /// List pairs of distinct equal-scoring sequences for a formula.
    Collide(CollideCmd),
    /// Measure spurious hits across growing corpora; write CSV and SVG.
    Experiment(ExperimentCmd),
    /// Time the literal and score-based searchers on one text.
    Bench(BenchCmd),
    /// Print or validate the active letter-value table.
    Table(TableCmd),
}

#[derive(Args)]
struct FormulaOpt {
    /// Scoring formula, eq1 through eq8.
    #[arg(long, default_value = "eq1", value_parser = parse_formula)]
    formula: u8,
    /// Weight parameter: base of the exponent for eq1-eq4, the exponent
    /// itself for eq5-eq8.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=i32::MAX as i64))]
    k: u32,
}

impl FormulaOpt {
    fn spec(&self) -> Result<FormulaSpec, CliError> {
        FormulaSpec::from_number(self.formula, self.k).map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn parse_formula(raw: &str) -> Result<u8, String> {
    raw.strip_prefix("eq")
        .and_then(|d| d.parse::<u8>().ok())
        .filter(|n| (1..=8).contains(n))
        .ok_or_else(|| format!("expected eq1..eq8, got {raw:?}"))
}

#[derive(Args)]
struct TableOpt {
    /// Letter-value table file; defaults to $VALUEGREP_TABLE, then the
    /// bundled English letter frequencies.
    #[arg(long, value_name = "PATH")]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct SearchCmd {
    /// Pattern to look for; must be nonempty.
    #[arg(long)]
    pattern: String,
    /// Input file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    #[command(flatten)]
    formula: FormulaOpt,
    /// Relative score tolerance for candidate selection.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(flatten)]
    table: TableOpt,
    /// Report score candidates without literal verification.
    #[arg(long)]
    no_verify: bool,
    /// ASCII-uppercase the pattern and text before value lookup.
    #[arg(long)]
    ignore_case: bool,
    /// Treat the whole input as one text instead of line by line.
    #[arg(long)]
    whole_file: bool,
    /// Emit one JSON object instead of line:offset lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CollideCmd {
    #[command(flatten)]
    formula: FormulaOpt,
    /// Symbols sequences are built from, e.g. ABCDEFG.
    #[arg(long)]
    alphabet: String,
    /// Length of the sequences to compare.
    #[arg(long)]
    length: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Random mode: pairs to sample. Exhaustive mode: overrides the
    /// enumeration cap (default 10^7 sequences).
    #[arg(long)]
    budget: Option<usize>,
    /// Seed for random mode.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Absolute score difference treated as a collision.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Maximum number of witness lines.
    #[arg(long, default_value_t = 1000)]
    limit: usize,
    #[command(flatten)]
    table: TableOpt,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct ExperimentCmd {
    /// key=value config file; omitted means the built-in default
    /// (also shipped as data/experiment_default.cfg).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Where to write the results CSV.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Where to write the spurious-hit chart.
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[command(flatten)]
    table: TableOpt,
}

#[derive(Args)]
struct BenchCmd {
    /// Text file to scan, or `-` for stdin; treated as one text with a
    /// single trailing newline stripped.
    #[arg(long)]
    text: String,
    /// Pattern to benchmark; must be nonempty.
    #[arg(long)]
    pattern: String,
    /// Timing repetitions per algorithm; the best run is reported.
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    #[command(flatten)]
    formula: FormulaOpt,
    /// Relative score tolerance for the score-based searcher.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(flatten)]
    table: TableOpt,
}

#[derive(Args)]
struct TableCmd {
    #[command(flatten)]
    table: TableOpt,
    /// Check the table and print a summary instead of its entries.
    #[arg(long)]
    validate: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CliError::Usage(message) | CliError::Runtime(message)) = self;
        f.write_str(message)
    }
}

impl From<ScoreError> for CliError {
    fn from(e: ScoreError) -> Self {
        match e {
            // Data-dependent failures; everything else is bad flag input.
            ScoreError::UnmappedSymbol { .. }
            | ScoreError::WindowTooLong { .. }
            | ScoreError::NonFinite { .. } => CliError::Runtime(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MatchError> for CliError {
    fn from(e: MatchError) -> Self {
        match e {
            MatchError::Score(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::ConfigParse { .. } | HarnessError::InvalidConfig(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

enum Outcome {
    Found,
    NotFound,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Found) => ExitCode::SUCCESS,
        Ok(Outcome::NotFound) => ExitCode::from(1),
        Err(e) => {
            eprintln!("valuegrep: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Search(cmd) => run_search(cmd),
        Command::Collide(cmd) => run_collide(cmd),
        Command::Experiment(cmd) => run_experiment(cmd),
        Command::Bench(cmd) => run_bench(cmd),
        Command::Table(cmd) => run_table(cmd),
    }
}

fn load_table(flag: &Option<PathBuf>) -> Result<Table, CliError> {
    let path = flag
        .clone()
        .or_else(|| env::var_os("VALUEGREP_TABLE").map(PathBuf::from));
    match path {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            ValueTable::parse(&text)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
        }
        None => Ok(default_table()),
    }
}

fn read_input(source: &str) -> Result<String, CliError> {
    if source == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Runtime(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(source).map_err(|e| CliError::Runtime(format!("{source}: {e}")))
    }
}

fn strip_trailing_newline(text: &str) -> &str {
    let text = text.strip_suffix('\n').unwrap_or(text);
    text.strip_suffix('\r').unwrap_or(text)
}

fn check_tolerance(tolerance: f64) -> Result<(), CliError> {
    if tolerance >= 0.0 && tolerance.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(
            "tolerance must be finite and non-negative".into(),
        ))
    }
}

fn run_search(cmd: SearchCmd) -> Result<Outcome, CliError> {
    if cmd.pattern.is_empty() {
        return Err(CliError::Usage("pattern must not be empty".into()));
    }
    check_tolerance(cmd.tolerance)?;
    let spec = cmd.formula.spec()?;
    let table = load_table(&cmd.table.table)?;

    let raw = read_input(&cmd.input)?;
    let folded;
    let text: &str = if cmd.ignore_case {
        folded = raw.to_ascii_uppercase();
        &folded
    } else {
        &raw
    };
    let pattern: Vec<char> = if cmd.ignore_case {
        cmd.pattern.to_ascii_uppercase().chars().collect()
    } else {
        cmd.pattern.chars().collect()
    };

    let records: Vec<(usize, Vec<char>)> = if cmd.whole_file {
        vec![(1, strip_trailing_newline(text).chars().collect())]
    } else {
        text.lines()
            .enumerate()
            .map(|(idx, line)| (idx + 1, line.chars().collect()))
            .collect()
    };

    let verify = !cmd.no_verify;
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    let mut confirmed: Vec<(usize, usize)> = Vec::new();
    let mut spurious: Vec<(usize, usize)> = Vec::new();
    let mut comparisons = 0u64;
    for (line_no, chars) in &records {
        // Records shorter than the pattern cannot match.
        if chars.len() < pattern.len() {
            continue;
        }
        let report = search(&spec, &table, chars, &pattern, cmd.tolerance, verify)
            .map_err(|e| locate(*line_no, e))?;
        candidates.extend(report.candidates.iter().map(|&j| (*line_no, j)));
        confirmed.extend(report.confirmed.iter().map(|&j| (*line_no, j)));
        spurious.extend(report.spurious.iter().map(|&j| (*line_no, j)));
        comparisons += report.comparisons;
    }

    let reported: &[(usize, usize)] = if verify { &confirmed } else { &candidates };
    if cmd.json {
        let hits = |list: &[(usize, usize)]| -> serde_json::Value {
            list.iter()
                .map(|&(line, offset)| json!({ "line": line, "offset": offset }))
                .collect()
        };
        let doc = json!({
            "pattern": cmd.pattern,
            "formula": spec.to_string(),
            "tolerance": cmd.tolerance,
            "verified": verify,
            "candidates": hits(&candidates),
            "confirmed": hits(&confirmed),
            "spurious": hits(&spurious),
            "comparisons": comparisons,
        });
        println!("{doc}");
    } else {
        for &(line, offset) in reported {
            println!("{line}:{offset}");
        }
    }
    Ok(if reported.is_empty() {
        Outcome::NotFound
    } else {
        Outcome::Found
    })
}

fn locate(line: usize, e: MatchError) -> CliError {
    if let MatchError::Score(ScoreError::UnmappedSymbol { symbol, offset }) = e {
        CliError::Runtime(format!(
            "line {line}, offset {offset}: symbol {symbol:?} has no table value"
        ))
    } else {
        e.into()
    }
}

fn run_collide(cmd: CollideCmd) -> Result<Outcome, CliError> {
    check_tolerance(cmd.tolerance)?;
    let spec = cmd.formula.spec()?;
    let table = load_table(&cmd.table.table)?;
    let alphabet: Vec<char> = cmd.alphabet.chars().collect();
    let mode = match cmd.mode {
        ModeArg::Exhaustive => CollisionMode::Exhaustive {
            cap: cmd.budget.unwrap_or(DEFAULT_ENUMERATION_CAP),
        },
        ModeArg::Random => CollisionMode::Random {
            budget: cmd.budget.unwrap_or(100_000),
            seed: cmd.seed,
        },
    };
    let witnesses = find_collisions(
        &spec,
        &table,
        &alphabet,
        cmd.length,
        mode,
        cmd.tolerance,
        cmd.limit,
    )?;
    for w in &witnesses {
        println!("{} {} {}", w.a, w.b, format_value(w.value));
    }
    Ok(if witnesses.is_empty() {
        Outcome::NotFound
    } else {
        Outcome::Found
    })
}

/// Nine decimals, trailing zeros stripped; negative zero collapses to 0.
fn format_value(v: f64) -> String {
    let mut s = format!("{v:.9}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn run_experiment(cmd: ExperimentCmd) -> Result<Outcome, CliError> {
    let table = load_table(&cmd.table.table)?;
    let config = match &cmd.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_kv_text(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let rows = harness::run_experiment(&config, &table)?;
    let csv = harness::write_results_csv(&config, &rows);
    print!("{csv}");
    if let Some(path) = &cmd.out_csv {
        fs::write(path, &csv).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &cmd.out_svg {
        let svg = harness::render_spurious_chart(&rows);
        fs::write(path, svg).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome::Found)
}

fn run_bench(cmd: BenchCmd) -> Result<Outcome, CliError> {
    if cmd.pattern.is_empty() {
        return Err(CliError::Usage("pattern must not be empty".into()));
    }
    if cmd.repeat < 1 {
        return Err(CliError::Usage("repeat must be at least 1".into()));
    }
    check_tolerance(cmd.tolerance)?;
    let spec = cmd.formula.spec()?;
    let table = load_table(&cmd.table.table)?;
    let raw = read_input(&cmd.text)?;
    let text = strip_trailing_newline(&raw);

    let results = harness::run_benchmarks(
        &table,
        text,
        std::slice::from_ref(&cmd.pattern),
        std::slice::from_ref(&spec),
        cmd.tolerance,
        cmd.repeat,
    )?;
    println!(
        "{:<26} {:>11} {:>10} {:>12} {:>14} {:>11}",
        "algorithm", "pattern_len", "text_len", "seconds", "symbols_per_s", "occurrences"
    );
    for r in &results {
        println!(
            "{:<26} {:>11} {:>10} {:>12.6} {:>14.0} {:>11}",
            r.algorithm, r.pattern_len, r.text_len, r.seconds, r.throughput, r.occurrences
        );
    }
    Ok(Outcome::Found)
}

fn run_table(cmd: TableCmd) -> Result<Outcome, CliError> {
    let table = load_table(&cmd.table.table)?;
    if cmd.validate {
        println!("ok: {} symbols", table.len());
    } else {
        print!("{}", table.to_text());
    }
    Ok(Outcome::Found)
}
