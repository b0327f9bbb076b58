//! Score-based matching and collision discovery.
//!
//! The matcher never misses a literal occurrence: a window whose symbols
//! equal the pattern has the same true score, so it always lands inside the
//! score tolerance. The price is spurious candidates, windows whose score
//! happens to collide with the pattern's. Verification separates the two by
//! literal comparison; the collision utilities quantify how often distinct
//! strings share a score in the first place.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::{CompensatedSum, Scalar};
use crate::scoring::{pattern_value, window_values_rolling, FormulaSpec, ScoreError};
use crate::value_table::ValueTable;

/// Default relative score tolerance used when callers do not pick their own.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Default cap on the number of sequences the exhaustive collision search
/// will enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

/// Problems in the matcher and the collision utilities.
#[derive(Debug, Error, PartialEq)]
pub enum MatchError {
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("tolerance must be finite and non-negative")]
    BadTolerance,
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet symbol {symbol:?} has no value in the table")]
    UnmappedAlphabetSymbol { symbol: char },
    #[error("sequence length must be at least 1")]
    ZeroLength,
    #[error("sample budget must be at least 1")]
    ZeroSamples,
    #[error("{total} sequences of length {length} exceed the enumeration cap {cap}")]
    EnumerationTooLarge {
        total: u128,
        length: usize,
        cap: usize,
    },
    #[error("sequence count overflows (alphabet of {alphabet_len}, length {length})")]
    CountOverflow { alphabet_len: usize, length: usize },
}

/// Outcome of one pattern search over one text.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport<S> {
    /// Score of the pattern itself.
    pub pattern_score: S,
    /// Absolute score distance below which a window became a candidate:
    /// `tolerance * max(1, |pattern_score|)`.
    pub threshold: S,
    /// Window start offsets whose score is within the threshold, ascending.
    pub candidates: Vec<usize>,
    /// Candidates that literal comparison proved to be occurrences.
    /// Empty when verification was skipped.
    pub confirmed: Vec<usize>,
    /// Candidates that literal comparison rejected. Empty when verification
    /// was skipped.
    pub spurious: Vec<usize>,
    /// Symbol comparisons spent verifying (0 when verification was skipped).
    pub comparisons: u64,
    /// Whether verification ran.
    pub verified: bool,
}

/// Searches `text` for `pattern` by score proximity.
///
/// A window starting at `j` is a candidate when its score is within
/// `tolerance * max(1, |pattern score|)` of the pattern's score. With
/// `verify`, each candidate is then compared symbol by symbol (left to
/// right, stopping at the first mismatch) and split into confirmed and
/// spurious offsets.
pub fn search<S: Scalar>(
    spec: &FormulaSpec,
    table: &ValueTable<S>,
    text: &[char],
    pattern: &[char],
    tolerance: S,
    verify: bool,
) -> Result<MatchReport<S>, MatchError> {
    if !(tolerance >= S::zero() && tolerance.is_finite()) {
        return Err(MatchError::BadTolerance);
    }
    let pattern_score = pattern_value(spec, table, pattern)?;
    let series = window_values_rolling(spec, table, text, pattern.len())?;
    let threshold = tolerance * pattern_score.abs().max(S::one());

    let candidates: Vec<usize> = series
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - pattern_score).abs() <= threshold)
        .map(|(j, _)| j)
        .collect();

    let mut confirmed = Vec::new();
    let mut spurious = Vec::new();
    let mut comparisons = 0u64;
    if verify {
        for &j in &candidates {
            let mut matches = true;
            for (i, &p) in pattern.iter().enumerate() {
                comparisons += 1;
                if text[j + i] != p {
                    matches = false;
                    break;
                }
            }
            if matches {
                confirmed.push(j);
            } else {
                spurious.push(j);
            }
        }
    }

    Ok(MatchReport {
        pattern_score,
        threshold,
        candidates,
        confirmed,
        spurious,
        comparisons,
        verified: verify,
    })
}

/// Two distinct strings of equal length whose scores differ by at most the
/// requested tolerance. `a` is lexicographically smaller than `b`; `value`
/// is the score of `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionWitness<S> {
    pub a: String,
    pub b: String,
    pub value: S,
}

/// How the collision search explores the sequence space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionMode {
    /// Score every sequence over the alphabet; errors when the space is
    /// larger than `cap`.
    Exhaustive { cap: usize },
    /// Sample `budget` pairs of independent uniform sequences.
    Random { budget: usize, seed: u64 },
}

impl Default for CollisionMode {
    fn default() -> Self {
        CollisionMode::Exhaustive {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Sorted, deduplicated alphabet with its symbol values.
fn prepare_alphabet<S: Scalar>(
    table: &ValueTable<S>,
    alphabet: &[char],
) -> Result<(Vec<char>, Vec<S>), MatchError> {
    let mut alpha: Vec<char> = alphabet.to_vec();
    alpha.sort_unstable();
    alpha.dedup();
    if alpha.is_empty() {
        return Err(MatchError::EmptyAlphabet);
    }
    let mut vals = Vec::with_capacity(alpha.len());
    for &symbol in &alpha {
        vals.push(
            table
                .get(symbol)
                .ok_or(MatchError::UnmappedAlphabetSymbol { symbol })?,
        );
    }
    Ok((alpha, vals))
}

fn decode(mut index: usize, length: usize, alpha: &[char]) -> String {
    let mut out = vec!['\0'; length];
    for slot in out.iter_mut().rev() {
        *slot = alpha[index % alpha.len()];
        index /= alpha.len();
    }
    out.into_iter().collect()
}

fn score_digits<S: Scalar>(coeffs: &[S], digit_vals: &[S], digits: &[usize]) -> S {
    let mut acc = CompensatedSum::new();
    for (&c, &d) in coeffs.iter().zip(digits) {
        acc.add(c * digit_vals[d]);
    }
    acc.value()
}

/// Finds up to `limit` collision witnesses: pairs of distinct length-`length`
/// strings over `alphabet` whose scores differ by at most `tolerance`
/// (an absolute bound; pass 0 to demand bit-equal scores).
///
/// Results are sorted by `(a, b)` and deterministic for a given mode.
pub fn find_collisions<S: Scalar>(
    spec: &FormulaSpec,
    table: &ValueTable<S>,
    alphabet: &[char],
    length: usize,
    mode: CollisionMode,
    tolerance: S,
    limit: usize,
) -> Result<Vec<CollisionWitness<S>>, MatchError> {
    if length == 0 {
        return Err(MatchError::ZeroLength);
    }
    if !(tolerance >= S::zero() && tolerance.is_finite()) {
        return Err(MatchError::BadTolerance);
    }
    let (alpha, alpha_vals) = prepare_alphabet(table, alphabet)?;
    let coeffs = spec.signed_weights::<S>(length)?;

    let mut witnesses = match mode {
        CollisionMode::Exhaustive { cap } => {
            let total = (alpha.len() as u128)
                .checked_pow(length as u32)
                .ok_or(MatchError::CountOverflow {
                    alphabet_len: alpha.len(),
                    length,
                })?;
            if total > cap as u128 {
                return Err(MatchError::EnumerationTooLarge { total, length, cap });
            }
            let total = total as usize;

            let mut values = Vec::with_capacity(total);
            let mut digits = vec![0usize; length];
            for i in 0..total {
                if i > 0 {
                    // Odometer step: last digit varies fastest, so sequence
                    // index order is lexicographic order.
                    for d in digits.iter_mut().rev() {
                        *d += 1;
                        if *d < alpha.len() {
                            break;
                        }
                        *d = 0;
                    }
                }
                let v = score_digits(&coeffs, &alpha_vals, &digits);
                if !v.is_finite() {
                    return Err(MatchError::Score(ScoreError::NonFinite {
                        m: length,
                        k: spec.k(),
                    }));
                }
                values.push(v);
            }

            let mut order: Vec<usize> = (0..total).collect();
            order.sort_unstable_by(|&a, &b| {
                values[a]
                    .partial_cmp(&values[b])
                    .expect("finite scores compare")
                    .then(a.cmp(&b))
            });

            let mut found = Vec::new();
            'outer: for i in 0..order.len() {
                for j in i + 1..order.len() {
                    if values[order[j]] - values[order[i]] > tolerance {
                        break;
                    }
                    let (lo, hi) = if order[i] < order[j] {
                        (order[i], order[j])
                    } else {
                        (order[j], order[i])
                    };
                    found.push(CollisionWitness {
                        a: decode(lo, length, &alpha),
                        b: decode(hi, length, &alpha),
                        value: values[lo],
                    });
                    if found.len() >= limit {
                        break 'outer;
                    }
                }
            }
            found
        }
        CollisionMode::Random { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found = Vec::new();
            let mut digits_a = vec![0usize; length];
            let mut digits_b = vec![0usize; length];
            for _ in 0..budget {
                for d in digits_a.iter_mut() {
                    *d = rng.gen_range(0..alpha.len());
                }
                for d in digits_b.iter_mut() {
                    *d = rng.gen_range(0..alpha.len());
                }
                if digits_a == digits_b {
                    continue;
                }
                let va = score_digits(&coeffs, &alpha_vals, &digits_a);
                let vb = score_digits(&coeffs, &alpha_vals, &digits_b);
                if !(va.is_finite() && vb.is_finite()) {
                    return Err(MatchError::Score(ScoreError::NonFinite {
                        m: length,
                        k: spec.k(),
                    }));
                }
                if (va - vb).abs() <= tolerance {
                    let sa: String = digits_a.iter().map(|&d| alpha[d]).collect();
                    let sb: String = digits_b.iter().map(|&d| alpha[d]).collect();
                    let w = if sa <= sb {
                        CollisionWitness { a: sa, b: sb, value: va }
                    } else {
                        CollisionWitness { a: sb, b: sa, value: vb }
                    };
                    found.push(w);
                }
            }
            found.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
            found.dedup_by(|x, y| x.a == y.a && x.b == y.b);
            found.truncate(limit);
            found
        }
    };

    witnesses.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    Ok(witnesses)
}

/// Estimates the probability that two independent uniform distinct
/// sequences of the given length collide under the default relative
/// tolerance: `|va - vb| <= 1e-9 * max(1, |va|, |vb|)`.
pub fn collision_rate<S: Scalar>(
    spec: &FormulaSpec,
    table: &ValueTable<S>,
    alphabet: &[char],
    length: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, MatchError> {
    if length == 0 {
        return Err(MatchError::ZeroLength);
    }
    if samples == 0 {
        return Err(MatchError::ZeroSamples);
    }
    let (alpha, alpha_vals) = prepare_alphabet(table, alphabet)?;
    if alpha.len() == 1 {
        // Only one sequence exists; no distinct pairs to speak of.
        return Ok(0.0);
    }
    let coeffs = spec.signed_weights::<S>(length)?;
    let tol = S::from_f64(DEFAULT_RELATIVE_TOLERANCE).expect("constant fits");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut digits_a = vec![0usize; length];
    let mut digits_b = vec![0usize; length];
    let mut hits = 0usize;
    for _ in 0..samples {
        loop {
            for d in digits_a.iter_mut() {
                *d = rng.gen_range(0..alpha.len());
            }
            for d in digits_b.iter_mut() {
                *d = rng.gen_range(0..alpha.len());
            }
            if digits_a != digits_b {
                break;
            }
        }
        let va = score_digits(&coeffs, &alpha_vals, &digits_a);
        let vb = score_digits(&coeffs, &alpha_vals, &digits_b);
        if !(va.is_finite() && vb.is_finite()) {
            return Err(MatchError::Score(ScoreError::NonFinite {
                m: length,
                k: spec.k(),
            }));
        }
        let scale = va.abs().max(vb.abs()).max(S::one());
        if (va - vb).abs() <= tol * scale {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples as f64)
}
