//! The window-scoring formula family.
//!
//! A formula assigns every length-`m` string a real score: position `i`
//! (0-based) contributes `sign(i) * weight(i) * value(s_i)`. Weights grow
//! either geometrically, `k^(i+1)`, or polynomially, `(i+1)^k`, with the
//! strength parameter `k >= 1`. Four sign layouts exist; combined with the
//! two weight families that yields the eight formulas named `eq1` through
//! `eq8`:
//!
//! | name | weights   | signs                                  |
//! |------|-----------|----------------------------------------|
//! | eq1  | k^(i+1)   | all positive                           |
//! | eq2  | k^(i+1)   | head positive, rest negative           |
//! | eq3  | k^(i+1)   | head and odd positive, even negative   |
//! | eq4  | k^(i+1)   | head and even positive, odd negative   |
//! | eq5  | (i+1)^k   | all positive                           |
//! | eq6  | (i+1)^k   | head positive, rest negative           |
//! | eq7  | (i+1)^k   | head and odd positive, even negative   |
//! | eq8  | (i+1)^k   | head and even positive, odd negative   |
//!
//! ("head" is position 0; "even"/"odd" refer to the remaining positions.)
//!
//! Scoring a text against a window length produces one score per window,
//! either by direct per-window summation ([`window_values_naive`]) or
//! incrementally ([`window_values_rolling`]). The two agree to within a
//! relative error of a few ulps; the rolling path is the fast one.

mod rolling;

use std::fmt;

use thiserror::Error;

use crate::scalar::{CompensatedSum, Scalar};
use crate::value_table::ValueTable;

pub use rolling::RollingOptions;

/// How position weights grow with the position index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// `weight(i) = k^(i+1)`
    Geometric,
    /// `weight(i) = (i+1)^k`
    Polynomial,
}

/// Which positions contribute positively and which negatively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignScheme {
    /// Every position counts with `+1`.
    UniformPlus,
    /// Position 0 counts with `+1`, everything after with `-1`.
    HeadPlusRestMinus,
    /// Position 0 and odd positions count with `+1`, even positions from 2 on
    /// with `-1`.
    HeadPlusOddPlusEvenMinus,
    /// Position 0 and even positions count with `+1`, odd positions with
    /// `-1`; this is strict alternation.
    HeadPlusOddMinusEvenPlus,
}

impl SignScheme {
    const ALL: [SignScheme; 4] = [
        SignScheme::UniformPlus,
        SignScheme::HeadPlusRestMinus,
        SignScheme::HeadPlusOddPlusEvenMinus,
        SignScheme::HeadPlusOddMinusEvenPlus,
    ];
}

/// A fully specified scoring formula: weight scheme, sign scheme, and `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormulaSpec {
    weight: WeightScheme,
    sign: SignScheme,
    k: u32,
}

/// Problems while building a formula or scoring with it.
#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("k must be at least 1, got {0}")]
    KTooSmall(u32),
    #[error("k = {0} is too large for the weight computation")]
    KTooLarge(u32),
    #[error("unknown formula name {0:?} (expected eq1 through eq8)")]
    UnknownFormula(String),
    #[error("formula number {0} is out of range (expected 1 through 8)")]
    FormulaOutOfRange(u8),
    #[error("empty pattern (window length must be at least 1)")]
    EmptyPattern,
    #[error("window length {m} exceeds text length {n}")]
    WindowTooLong { m: usize, n: usize },
    #[error("symbol {symbol:?} at offset {offset} has no value in the table")]
    UnmappedSymbol { symbol: char, offset: usize },
    #[error("score overflows the scalar range (window length {m}, k = {k})")]
    NonFinite { m: usize, k: u32 },
}

impl FormulaSpec {
    /// Builds a formula from its parts. `k` must be at least 1.
    pub fn new(weight: WeightScheme, sign: SignScheme, k: u32) -> Result<Self, ScoreError> {
        if k < 1 {
            return Err(ScoreError::KTooSmall(k));
        }
        if k > i32::MAX as u32 {
            return Err(ScoreError::KTooLarge(k));
        }
        Ok(FormulaSpec { weight, sign, k })
    }

    /// Builds formula number `n` (1 through 8; see the module table).
    pub fn from_number(n: u8, k: u32) -> Result<Self, ScoreError> {
        if !(1..=8).contains(&n) {
            return Err(ScoreError::FormulaOutOfRange(n));
        }
        let weight = if n <= 4 {
            WeightScheme::Geometric
        } else {
            WeightScheme::Polynomial
        };
        let sign = SignScheme::ALL[((n - 1) % 4) as usize];
        FormulaSpec::new(weight, sign, k)
    }

    /// Builds a formula from its name, `"eq1"` through `"eq8"`.
    pub fn from_name(name: &str, k: u32) -> Result<Self, ScoreError> {
        let lower = name.to_ascii_lowercase();
        let n = lower
            .strip_prefix("eq")
            .and_then(|d| d.parse::<u8>().ok())
            .ok_or_else(|| ScoreError::UnknownFormula(name.to_string()))?;
        FormulaSpec::from_number(n, k).map_err(|e| match e {
            ScoreError::FormulaOutOfRange(_) => ScoreError::UnknownFormula(name.to_string()),
            other => other,
        })
    }

    /// The formula number, 1 through 8.
    pub fn number(&self) -> u8 {
        let base = match self.weight {
            WeightScheme::Geometric => 0,
            WeightScheme::Polynomial => 4,
        };
        let offset = SignScheme::ALL
            .iter()
            .position(|s| *s == self.sign)
            .expect("sign scheme is one of the four") as u8;
        base + offset + 1
    }

    pub fn weight_scheme(&self) -> WeightScheme {
        self.weight
    }

    pub fn sign_scheme(&self) -> SignScheme {
        self.sign
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Unsigned weight of position `i`.
    pub fn weight<S: Scalar>(&self, i: usize) -> S {
        let exp_of = |e: usize| i32::try_from(e).unwrap_or(i32::MAX);
        match self.weight {
            WeightScheme::Geometric => {
                S::from_u32(self.k).expect("small integer fits").powi(exp_of(i + 1))
            }
            WeightScheme::Polynomial => S::from_usize(i + 1)
                .unwrap_or_else(S::max_value)
                .powi(self.k as i32),
        }
    }

    /// Sign of position `i`, `+1` or `-1`.
    pub fn sign(&self, i: usize) -> i32 {
        let negative = match self.sign {
            SignScheme::UniformPlus => false,
            SignScheme::HeadPlusRestMinus => i >= 1,
            SignScheme::HeadPlusOddPlusEvenMinus => i >= 2 && i % 2 == 0,
            SignScheme::HeadPlusOddMinusEvenPlus => i % 2 == 1,
        };
        if negative {
            -1
        } else {
            1
        }
    }

    /// `sign(i) * weight(i)` for `i` in `0..m`.
    ///
    /// Errors when a weight overflows the scalar range.
    pub fn signed_weights<S: Scalar>(&self, m: usize) -> Result<Vec<S>, ScoreError> {
        let mut coeffs = Vec::with_capacity(m);
        for i in 0..m {
            let w: S = self.weight(i);
            if !w.is_finite() {
                return Err(ScoreError::NonFinite { m, k: self.k });
            }
            coeffs.push(if self.sign(i) < 0 { -w } else { w });
        }
        Ok(coeffs)
    }
}

impl fmt::Display for FormulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eq{}(k={})", self.number(), self.k)
    }
}

/// One score per window position of a scored text.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSeries<S> {
    values: Vec<S>,
    window_len: usize,
    text_len: usize,
}

impl<S: Scalar> ScoreSeries<S> {
    fn new(values: Vec<S>, window_len: usize, text_len: usize) -> Self {
        debug_assert_eq!(values.len(), text_len - window_len + 1);
        ScoreSeries {
            values,
            window_len,
            text_len,
        }
    }

    /// Scores indexed by window start offset.
    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, start: usize) -> Option<S> {
        self.values.get(start).copied()
    }

    /// Number of windows, `text_len - window_len + 1`.
    pub fn window_count(&self) -> usize {
        self.values.len()
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn text_len(&self) -> usize {
        self.text_len
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }
}

/// Looks up every symbol of `text`, reporting the offset of the first
/// unmapped one.
pub(crate) fn lookup_values<S: Scalar>(
    table: &ValueTable<S>,
    text: &[char],
) -> Result<Vec<S>, ScoreError> {
    text.iter()
        .enumerate()
        .map(|(offset, &symbol)| {
            table
                .get(symbol)
                .ok_or(ScoreError::UnmappedSymbol { symbol, offset })
        })
        .collect()
}

fn dot_compensated<S: Scalar>(coeffs: &[S], vals: &[S]) -> S {
    let mut acc = CompensatedSum::new();
    for (&c, &v) in coeffs.iter().zip(vals) {
        acc.add(c * v);
    }
    acc.value()
}

/// Score of a whole pattern under `spec`.
pub fn pattern_value<S: Scalar>(
    spec: &FormulaSpec,
    table: &ValueTable<S>,
    pattern: &[char],
) -> Result<S, ScoreError> {
    if pattern.is_empty() {
        return Err(ScoreError::EmptyPattern);
    }
    let vals = lookup_values(table, pattern)?;
    let coeffs = spec.signed_weights::<S>(pattern.len())?;
    let value = dot_compensated(&coeffs, &vals);
    if !value.is_finite() {
        return Err(ScoreError::NonFinite {
            m: pattern.len(),
            k: spec.k(),
        });
    }
    Ok(value)
}

/// Scores every length-`m` window of `text` by direct summation.
///
/// Runs in `O(n * m)` time. Each window is summed with a compensated
/// accumulator, so the result is accurate to a few ulps and serves as the
/// reference the rolling scorer is checked against.
pub fn window_values_naive<S: Scalar>(
    spec: &FormulaSpec,
    table: &ValueTable<S>,
    text: &[char],
    m: usize,
) -> Result<ScoreSeries<S>, ScoreError> {
    if m == 0 {
        return Err(ScoreError::EmptyPattern);
    }
    if m > text.len() {
        return Err(ScoreError::WindowTooLong { m, n: text.len() });
    }
    let vals = lookup_values(table, text)?;
    let coeffs = spec.signed_weights::<S>(m)?;
    let mut values = Vec::with_capacity(text.len() - m + 1);
    for j in 0..=text.len() - m {
        values.push(dot_compensated(&coeffs, &vals[j..j + m]));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ScoreError::NonFinite { m, k: spec.k() });
    }
    Ok(ScoreSeries::new(values, m, text.len()))
}

/// Scores every length-`m` window of `text` incrementally.
///
/// Runs in `O(n)` time for fixed `k` (amortized; periodic direct
/// recomputations bound drift). Agrees with [`window_values_naive`] to within
/// a relative error far below `1e-9`.
pub fn window_values_rolling<S: Scalar>(
    spec: &FormulaSpec,
    table: &ValueTable<S>,
    text: &[char],
    m: usize,
) -> Result<ScoreSeries<S>, ScoreError> {
    window_values_rolling_with(spec, table, text, m, RollingOptions::default())
}

/// [`window_values_rolling`] with tuning knobs exposed.
pub fn window_values_rolling_with<S: Scalar>(
    spec: &FormulaSpec,
    table: &ValueTable<S>,
    text: &[char],
    m: usize,
    options: RollingOptions,
) -> Result<ScoreSeries<S>, ScoreError> {
    if m == 0 {
        return Err(ScoreError::EmptyPattern);
    }
    if m > text.len() {
        return Err(ScoreError::WindowTooLong { m, n: text.len() });
    }
    let vals = lookup_values(table, text)?;
    let values = rolling::series(spec, &vals, m, &options)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ScoreError::NonFinite { m, k: spec.k() });
    }
    Ok(ScoreSeries::new(values, m, text.len()))
}
