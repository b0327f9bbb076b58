//! Experiment and benchmark harness.
//!
//! Reproduces the measurements the matcher's design is judged by: how the
//! number of spurious (score-colliding but literally different) candidates
//! grows with corpus size, and how the scorers and the classical searchers
//! compare in throughput. Everything is seeded and deterministic; corpora of
//! increasing size are nested (each is a prefix-extension of the smaller
//! one) so counts can only grow with size.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::baselines::{
    boyer_moore_search, kmp_search, naive_search, rabin_karp_search, RkParams, SearchError,
};
use crate::matcher::{search, MatchError};
use crate::scoring::{
    window_values_naive, window_values_rolling, FormulaSpec, ScoreError,
};
use crate::{Table, Value};

/// Problems in corpus generation, experiments, or benchmarks.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },
    #[error("results line {line}: {message}")]
    CsvParse { line: usize, message: String },
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{algorithm} disagrees with the oracle on pattern {pattern:?}")]
    PositionsMismatch { algorithm: String, pattern: String },
}

/// Generates `num_records` random strings over `alphabet`, each with a
/// length drawn uniformly from `length_range` (inclusive bounds).
///
/// Draws are sequential from one seeded stream, so for a fixed seed the
/// first `n` records are identical no matter how many are requested: corpora
/// of increasing size nest.
pub fn generate_corpus(
    alphabet: &[char],
    num_records: usize,
    length_range: (usize, usize),
    seed: u64,
) -> Result<Vec<String>, HarnessError> {
    if alphabet.is_empty() {
        return Err(HarnessError::InvalidConfig("alphabet is empty".into()));
    }
    let (lo, hi) = length_range;
    if lo < 1 || lo > hi {
        return Err(HarnessError::InvalidConfig(format!(
            "bad record length range {lo}..{hi}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(num_records);
    for _ in 0..num_records {
        let len = rng.gen_range(lo..=hi);
        let record: String = (0..len)
            .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
            .collect();
        out.push(record);
    }
    Ok(out)
}

/// Parameters of a spurious-hit experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Symbols the corpus is drawn from.
    pub alphabet: String,
    /// Corpus sizes to measure, strictly increasing.
    pub corpus_sizes: Vec<usize>,
    /// Inclusive record length range.
    pub record_len: (usize, usize),
    /// Number of query patterns; the same patterns are reused at every size.
    pub patterns_per_size: usize,
    /// Inclusive pattern length range.
    pub pattern_len: (usize, usize),
    /// Formula number, 1 through 8.
    pub formula: u8,
    pub k: u32,
    /// Relative score tolerance handed to the matcher.
    pub tolerance: Value,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 42,
            alphabet: "ACGT".to_string(),
            corpus_sizes: (1..=10).map(|i| i * 10_000).collect(),
            record_len: (64, 256),
            patterns_per_size: 4,
            pattern_len: (4, 8),
            formula: 1,
            k: 1,
            tolerance: 1e-9,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidConfig(msg));
        if self.alphabet.is_empty() {
            return bad("alphabet is empty".into());
        }
        if self.corpus_sizes.is_empty() {
            return bad("corpus_sizes is empty".into());
        }
        if !self.corpus_sizes.windows(2).all(|w| w[0] < w[1]) {
            return bad("corpus_sizes must be strictly increasing".into());
        }
        if self.record_len.0 < 1 || self.record_len.0 > self.record_len.1 {
            return bad(format!(
                "bad record length range {}..{}",
                self.record_len.0, self.record_len.1
            ));
        }
        if self.pattern_len.0 < 1 || self.pattern_len.0 > self.pattern_len.1 {
            return bad(format!(
                "bad pattern length range {}..{}",
                self.pattern_len.0, self.pattern_len.1
            ));
        }
        if self.patterns_per_size < 1 {
            return bad("patterns_per_size must be at least 1".into());
        }
        FormulaSpec::from_number(self.formula, self.k)?;
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return bad("tolerance must be finite and non-negative".into());
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<FormulaSpec, ScoreError> {
        FormulaSpec::from_number(self.formula, self.k)
    }

    /// Serializes as `key=value` lines, the format embedded in result files.
    pub fn to_kv_text(&self) -> String {
        let sizes = self
            .corpus_sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "seed={}\nalphabet={}\ncorpus_sizes={}\nrecord_len={}..{}\n\
             pattern_len={}..{}\npatterns_per_size={}\nformula=eq{}\nk={}\ntolerance={}\n",
            self.seed,
            self.alphabet,
            sizes,
            self.record_len.0,
            self.record_len.1,
            self.pattern_len.0,
            self.pattern_len.1,
            self.patterns_per_size,
            self.formula,
            self.k,
            self.tolerance,
        )
    }

    /// Parses `key=value` lines; keys not mentioned keep their defaults.
    pub fn from_kv_text(text: &str) -> Result<Self, HarnessError> {
        let mut config = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(HarnessError::ConfigParse {
                line,
                message: format!("expected key=value, got {trimmed:?}"),
            })?;
            let fail = |message: String| HarnessError::ConfigParse { line, message };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => {
                    config.seed = value
                        .parse()
                        .map_err(|e| fail(format!("bad seed {value:?}: {e}")))?
                }
                "alphabet" => config.alphabet = value.to_string(),
                "corpus_sizes" => {
                    config.corpus_sizes = value
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| fail(format!("bad corpus_sizes {value:?}: {e}")))?
                }
                "record_len" => config.record_len = parse_range(value).map_err(&fail)?,
                "pattern_len" => config.pattern_len = parse_range(value).map_err(&fail)?,
                "patterns_per_size" => {
                    config.patterns_per_size = value
                        .parse()
                        .map_err(|e| fail(format!("bad patterns_per_size {value:?}: {e}")))?
                }
                "formula" => {
                    config.formula = value
                        .strip_prefix("eq")
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| fail(format!("bad formula {value:?}")))?
                }
                "k" => {
                    config.k = value
                        .parse()
                        .map_err(|e| fail(format!("bad k {value:?}: {e}")))?
                }
                "tolerance" => {
                    config.tolerance = value
                        .parse()
                        .map_err(|e| fail(format!("bad tolerance {value:?}: {e}")))?
                }
                other => return Err(fail(format!("unknown key {other:?}"))),
            }
        }
        config.validate()?;
        Ok(config)
    }
}

fn parse_range(value: &str) -> Result<(usize, usize), String> {
    let (a, b) = value
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {value:?}"))?;
    let lo = a
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound {a:?}: {e}"))?;
    let hi = b
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound {b:?}: {e}"))?;
    Ok((lo, hi))
}

/// One corpus size's aggregate counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub num_strings: usize,
    pub candidates: u64,
    pub confirmed: u64,
    pub spurious: u64,
    /// Wall time for this corpus size, quantized to microseconds so the
    /// CSV round-trips exactly.
    pub wall_time_s: f64,
}

impl ExperimentRow {
    pub fn new(
        num_strings: usize,
        candidates: u64,
        confirmed: u64,
        spurious: u64,
        wall_time_s: f64,
    ) -> Self {
        let quantized: f64 = format!("{wall_time_s:.6}").parse().expect("own formatting");
        ExperimentRow {
            num_strings,
            candidates,
            confirmed,
            spurious,
            wall_time_s: quantized,
        }
    }
}

/// Runs the spurious-hit experiment described by `config`.
///
/// One corpus is generated at the largest requested size; smaller sizes use
/// its prefixes. The same patterns (half of them true substrings of records
/// in the smallest prefix, half random) are searched at every size with
/// verification on, so candidate, confirmed, and spurious counts are all
/// nondecreasing in corpus size.
pub fn run_experiment(
    config: &ExperimentConfig,
    table: &Table,
) -> Result<Vec<ExperimentRow>, HarnessError> {
    config.validate()?;
    let spec = config.spec()?;
    let alphabet: Vec<char> = config.alphabet.chars().collect();
    for &symbol in &alphabet {
        if !table.contains(symbol) {
            return Err(HarnessError::InvalidConfig(format!(
                "alphabet symbol {symbol:?} has no value in the table"
            )));
        }
    }

    let largest = *config.corpus_sizes.last().expect("validated non-empty");
    let corpus = generate_corpus(&alphabet, largest, config.record_len, config.seed)?;
    let texts: Vec<Vec<char>> = corpus.iter().map(|s| s.chars().collect()).collect();
    let patterns = generate_patterns(config, &alphabet, &texts);

    let mut rows = Vec::with_capacity(config.corpus_sizes.len());
    for &size in &config.corpus_sizes {
        let started = Instant::now();
        let (mut candidates, mut confirmed, mut spurious) = (0u64, 0u64, 0u64);
        for text in &texts[..size] {
            for pattern in &patterns {
                if pattern.len() > text.len() {
                    continue;
                }
                let report = search(&spec, table, text, pattern, config.tolerance, true)?;
                candidates += report.candidates.len() as u64;
                confirmed += report.confirmed.len() as u64;
                spurious += report.spurious.len() as u64;
            }
        }
        rows.push(ExperimentRow::new(
            size,
            candidates,
            confirmed,
            spurious,
            started.elapsed().as_secs_f64(),
        ));
    }
    Ok(rows)
}

/// Fixed pattern set for an experiment: the first half are substrings of
/// records inside the smallest corpus prefix (guaranteed confirmable hits at
/// every size), the rest uniform random strings.
fn generate_patterns(
    config: &ExperimentConfig,
    alphabet: &[char],
    texts: &[Vec<char>],
) -> Vec<Vec<char>> {
    // Stream 1: independent of the corpus stream for any seed.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let count = config.patterns_per_size;
    let substrings = count.div_ceil(2);
    let smallest = config.corpus_sizes[0].min(texts.len());
    let (lo, hi) = config.pattern_len;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let len = rng.gen_range(lo..=hi);
        let sampled = if i < substrings && smallest > 0 {
            let mut found = None;
            for _ in 0..64 {
                let record = &texts[rng.gen_range(0..smallest)];
                if record.len() >= len {
                    let start = rng.gen_range(0..=record.len() - len);
                    found = Some(record[start..start + len].to_vec());
                    break;
                }
            }
            found
        } else {
            None
        };
        out.push(sampled.unwrap_or_else(|| {
            (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect()
        }));
    }
    out
}

const CSV_HEADER: &str = "num_strings,candidates,confirmed,spurious,wall_time_s";

/// Renders the result file: the configuration as `# key=value` comment
/// lines, then a CSV header and one row per corpus size.
pub fn write_results_csv(config: &ExperimentConfig, rows: &[ExperimentRow]) -> String {
    let mut out = String::new();
    for line in config.to_kv_text().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6}\n",
            row.num_strings, row.candidates, row.confirmed, row.spurious, row.wall_time_s
        ));
    }
    out
}

/// Parses what [`write_results_csv`] produces.
pub fn parse_results_csv(text: &str) -> Result<(ExperimentConfig, Vec<ExperimentRow>), HarnessError> {
    let mut config_lines = String::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            config_lines.push_str(rest.trim());
            config_lines.push('\n');
            continue;
        }
        if !seen_header {
            if trimmed != CSV_HEADER {
                return Err(HarnessError::CsvParse {
                    line,
                    message: format!("expected header {CSV_HEADER:?}, got {trimmed:?}"),
                });
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 5 {
            return Err(HarnessError::CsvParse {
                line,
                message: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let parse_err = |what: &str, text: &str| HarnessError::CsvParse {
            line,
            message: format!("bad {what} {text:?}"),
        };
        rows.push(ExperimentRow {
            num_strings: fields[0].parse().map_err(|_| parse_err("num_strings", fields[0]))?,
            candidates: fields[1].parse().map_err(|_| parse_err("candidates", fields[1]))?,
            confirmed: fields[2].parse().map_err(|_| parse_err("confirmed", fields[2]))?,
            spurious: fields[3].parse().map_err(|_| parse_err("spurious", fields[3]))?,
            wall_time_s: fields[4].parse().map_err(|_| parse_err("wall_time_s", fields[4]))?,
        });
    }
    if !seen_header {
        return Err(HarnessError::CsvParse {
            line: text.lines().count() + 1,
            message: "missing header".into(),
        });
    }
    let config = ExperimentConfig::from_kv_text(&config_lines)?;
    Ok((config, rows))
}

/// Renders the spurious-count-versus-corpus-size chart as an 800x600 SVG:
/// axes, tick labels, the axis captions `number of strings` and
/// `mismatches`, and a single polyline through the measured points.
pub fn render_spurious_chart(rows: &[ExperimentRow]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 600.0;
    const LEFT: f64 = 90.0;
    const RIGHT: f64 = 30.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 70.0;
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;

    let x_min = rows.first().map_or(0, |r| r.num_strings) as f64;
    let x_max = rows.last().map_or(1, |r| r.num_strings) as f64;
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_max = rows.iter().map(|r| r.spurious).max().unwrap_or(0).max(1) as f64;

    let map_x = |v: f64| LEFT + (v - x_min) / x_span * plot_w;
    let map_y = |v: f64| H - BOTTOM - v / y_max * plot_h;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str("  <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "  <line x1=\"{LEFT}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - BOTTOM,
        W - RIGHT,
        H - BOTTOM
    ));
    svg.push_str(&format!(
        "  <line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - BOTTOM
    ));

    // X ticks: every measured size, thinned to at most 11 labels.
    let stride = rows.len().div_ceil(11).max(1);
    for (i, row) in rows.iter().enumerate() {
        if i % stride != 0 && i + 1 != rows.len() {
            continue;
        }
        let x = map_x(row.num_strings as f64);
        svg.push_str(&format!(
            "  <line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            H - BOTTOM,
            H - BOTTOM + 6.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            H - BOTTOM + 22.0,
            row.num_strings
        ));
    }

    // Y ticks: five evenly spaced values.
    let mut last_label = None;
    for i in 0..=4 {
        let value = (y_max * i as f64 / 4.0).round();
        if last_label == Some(value as u64) {
            continue;
        }
        last_label = Some(value as u64);
        let y = map_y(value);
        svg.push_str(&format!(
            "  <line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{LEFT}\" y2=\"{y:.1}\" stroke=\"black\"/>\n",
            LEFT - 6.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            LEFT - 10.0,
            y + 4.0,
            value as u64
        ));
    }

    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">number of strings</text>\n",
        LEFT + plot_w / 2.0,
        H - 15.0
    ));
    svg.push_str(&format!(
        "  <text x=\"24\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 24 {:.1})\">mismatches</text>\n",
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    ));

    let points: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{:.1},{:.1}",
                map_x(r.num_strings as f64),
                map_y(r.spurious as f64)
            )
        })
        .collect();
    svg.push_str(&format!(
        "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>\n",
        points.join(" ")
    ));
    svg.push_str("</svg>\n");
    svg
}

/// Checks that `svg` is well-formed XML, is 800x600, and contains exactly
/// one polyline. Returns a description of the first violation.
pub fn check_svg(svg: &str) -> Result<(), String> {
    check_xml(svg)?;
    let root_ok = svg.contains("width=\"800\"") && svg.contains("height=\"600\"");
    if !root_ok {
        return Err("missing 800x600 dimensions".into());
    }
    let polylines = svg.matches("<polyline").count();
    if polylines != 1 {
        return Err(format!("expected exactly one polyline, found {polylines}"));
    }
    Ok(())
}

/// Minimal XML well-formedness check: prolog and comments skipped, every
/// open tag closed in order, attributes quoted, only sanctioned entities.
fn check_xml(text: &str) -> Result<(), String> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut stack: Vec<String> = Vec::new();
    let mut seen_root = false;

    let entity_ok = |s: &str| -> bool {
        matches!(s, "amp" | "lt" | "gt" | "quot" | "apos")
            || (s.starts_with('#') && s.len() > 1 && s[1..].chars().all(|c| c.is_ascii_digit()))
    };

    while pos < bytes.len() {
        if bytes[pos] == b'<' {
            if text[pos..].starts_with("<?") {
                pos = text[pos..]
                    .find("?>")
                    .map(|e| pos + e + 2)
                    .ok_or("unterminated processing instruction")?;
                continue;
            }
            if text[pos..].starts_with("<!--") {
                pos = text[pos..]
                    .find("-->")
                    .map(|e| pos + e + 3)
                    .ok_or("unterminated comment")?;
                continue;
            }
            let end = text[pos..]
                .find('>')
                .map(|e| pos + e)
                .ok_or("unterminated tag")?;
            let inner = &text[pos + 1..end];
            if let Some(name) = inner.strip_prefix('/') {
                let name = name.trim();
                match stack.pop() {
                    Some(open) if open == name => {}
                    Some(open) => return Err(format!("</{name}> closes <{open}>")),
                    None => return Err(format!("</{name}> without opener")),
                }
            } else {
                let self_closing = inner.ends_with('/');
                let body = inner.strip_suffix('/').unwrap_or(inner);
                let mut parts = body.split_whitespace();
                let name = parts.next().ok_or("empty tag")?;
                if !name
                    .chars()
                    .all(|c| c.is_alphanumeric() || c == ':' || c == '-' || c == '_')
                {
                    return Err(format!("bad tag name {name:?}"));
                }
                // Attributes: name="value" pairs with balanced quotes.
                let attrs = body[name.len()..].trim();
                let mut rest = attrs;
                while !rest.is_empty() {
                    let eq = rest.find('=').ok_or(format!("bare attribute in <{name}>"))?;
                    let after = rest[eq + 1..].trim_start();
                    let quote = after
                        .chars()
                        .next()
                        .filter(|&c| c == '"' || c == '\'')
                        .ok_or(format!("unquoted attribute value in <{name}>"))?;
                    let close = after[1..]
                        .find(quote)
                        .ok_or(format!("unterminated attribute value in <{name}>"))?;
                    rest = after[close + 2..].trim_start();
                }
                if stack.is_empty() {
                    if seen_root && !self_closing {
                        return Err("multiple root elements".into());
                    }
                    seen_root = true;
                }
                if !self_closing {
                    stack.push(name.to_string());
                }
            }
            pos = end + 1;
        } else if bytes[pos] == b'&' {
            let semi = text[pos..]
                .find(';')
                .map(|e| pos + e)
                .ok_or("unterminated entity")?;
            if !entity_ok(&text[pos + 1..semi]) {
                return Err(format!("unknown entity {:?}", &text[pos..=semi]));
            }
            pos = semi + 1;
        } else {
            if stack.is_empty() && !bytes[pos].is_ascii_whitespace() {
                return Err("content outside the root element".into());
            }
            pos += 1;
        }
    }
    if !stack.is_empty() {
        return Err(format!("unclosed element <{}>", stack.last().unwrap()));
    }
    if !seen_root {
        return Err("no root element".into());
    }
    Ok(())
}

/// One timed measurement from [`run_benchmarks`].
#[derive(Debug, Clone)]
pub struct BenchResult {
    pub algorithm: String,
    pub pattern_len: usize,
    /// Text length in symbols.
    pub text_len: usize,
    /// Best wall time over the repetitions.
    pub seconds: f64,
    /// Symbols scanned per second, `text_len / seconds`.
    pub throughput: f64,
    /// Occurrences of the pattern in the text (identical for every
    /// algorithm; checked).
    pub occurrences: usize,
}

/// Times the two scorers and the four literal searchers on the same
/// text/pattern instances, best-of-`repeat` wall time each.
///
/// Every algorithm's occurrence set is checked against the naive oracle
/// first; a mismatch aborts the run.
pub fn run_benchmarks(
    table: &Table,
    text: &str,
    patterns: &[String],
    specs: &[FormulaSpec],
    tolerance: Value,
    repeat: usize,
) -> Result<Vec<BenchResult>, HarnessError> {
    if repeat < 1 {
        return Err(HarnessError::InvalidConfig("repeat must be at least 1".into()));
    }
    let text_chars: Vec<char> = text.chars().collect();
    let mut results = Vec::new();

    for pattern in patterns {
        let pat: Vec<char> = pattern.chars().collect();
        let oracle = naive_search(&text_chars, &pat)?;
        let mismatch = |algorithm: &str| HarnessError::PositionsMismatch {
            algorithm: algorithm.to_string(),
            pattern: pattern.clone(),
        };

        let mut push = |algorithm: String, seconds: f64| {
            results.push(BenchResult {
                algorithm,
                pattern_len: pat.len(),
                text_len: text_chars.len(),
                seconds,
                throughput: text_chars.len() as f64 / seconds.max(1e-12),
                occurrences: oracle.len(),
            });
        };

        let kmp = kmp_search(&text_chars, &pat)?;
        if kmp != oracle {
            return Err(mismatch("literal/kmp"));
        }
        let (rk, _) = rabin_karp_search(&text_chars, &pat, &RkParams::default())?;
        if rk != oracle {
            return Err(mismatch("literal/rabin-karp"));
        }
        let (bm, _) = boyer_moore_search(&text_chars, &pat)?;
        if bm != oracle {
            return Err(mismatch("literal/boyer-moore"));
        }

        push(
            "literal/naive".into(),
            time_best(repeat, || naive_search(&text_chars, &pat).unwrap()),
        );
        push(
            "literal/kmp".into(),
            time_best(repeat, || kmp_search(&text_chars, &pat).unwrap()),
        );
        push(
            "literal/rabin-karp".into(),
            time_best(repeat, || {
                rabin_karp_search(&text_chars, &pat, &RkParams::default()).unwrap()
            }),
        );
        push(
            "literal/boyer-moore".into(),
            time_best(repeat, || boyer_moore_search(&text_chars, &pat).unwrap()),
        );

        for spec in specs {
            let report = search(spec, table, &text_chars, &pat, tolerance, true)?;
            if report.confirmed != oracle {
                return Err(mismatch(&format!("score/{spec}")));
            }
            push(
                format!("score-naive/{spec}"),
                time_best(repeat, || {
                    window_values_naive(spec, table, &text_chars, pat.len()).unwrap()
                }),
            );
            push(
                format!("score-rolling/{spec}"),
                time_best(repeat, || {
                    window_values_rolling(spec, table, &text_chars, pat.len()).unwrap()
                }),
            );
        }
    }
    Ok(results)
}

fn time_best<R>(repeat: usize, mut work: impl FnMut() -> R) -> f64 {
    let mut best = f64::INFINITY;
    for _ in 0..repeat {
        let started = Instant::now();
        std::hint::black_box(work());
        best = best.min(started.elapsed().as_secs_f64());
    }
    best
}
