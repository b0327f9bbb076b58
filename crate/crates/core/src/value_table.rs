//! Symbol-to-value tables.
//!
//! A table assigns a real value to each symbol of the alphabet; every score in
//! the crate is a weighted signed sum of these values. The format on disk is
//! one entry per line, `symbol whitespace decimal`, with `#` comments and
//! blank lines ignored. The bundled default maps the uppercase English
//! letters to their relative frequencies in percent.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalar::Scalar;

/// Text of the bundled default table (English letter frequencies).
const DEFAULT_TABLE_TEXT: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/english_letter_values.txt"));

/// Problems while building or parsing a table.
#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: malformed entry {text:?}: {reason}")]
    Malformed {
        line: usize,
        text: String,
        reason: String,
    },
    #[error("line {line}: duplicate symbol {symbol:?}")]
    DuplicateSymbol { line: usize, symbol: char },
    #[error("line {line}: value for {symbol:?} is not finite")]
    NonFiniteValue { line: usize, symbol: char },
    #[error("table has no entries")]
    Empty,
}

/// Lookup of a symbol that has no entry in the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("symbol {symbol:?} has no value in the table")]
pub struct UnmappedSymbol {
    pub symbol: char,
}

/// Immutable mapping from symbols to scalar values.
///
/// Symbols are single Unicode characters and lookups are case-sensitive.
/// ASCII symbols additionally sit in a dense side array so the hot path of
/// the scorers avoids the tree walk.
#[derive(Debug, Clone)]
pub struct ValueTable<S> {
    entries: BTreeMap<char, S>,
    ascii: Box<[Option<S>; 128]>,
}

impl<S: Scalar> ValueTable<S> {
    /// Builds a table from `(symbol, value)` pairs.
    ///
    /// Rejects duplicates, non-finite values, and the empty table. The
    /// `line` reported in errors is the 1-based position in the input
    /// sequence.
    pub fn from_entries<I>(pairs: I) -> Result<Self, TableError>
    where
        I: IntoIterator<Item = (char, S)>,
    {
        let mut entries = BTreeMap::new();
        let mut ascii: Box<[Option<S>; 128]> = Box::new([None; 128]);
        let mut count = 0usize;
        for (i, (symbol, value)) in pairs.into_iter().enumerate() {
            let line = i + 1;
            if !value.is_finite() {
                return Err(TableError::NonFiniteValue { line, symbol });
            }
            if entries.insert(symbol, value).is_some() {
                return Err(TableError::DuplicateSymbol { line, symbol });
            }
            if (symbol as u32) < 128 {
                ascii[symbol as usize] = Some(value);
            }
            count += 1;
        }
        if count == 0 {
            return Err(TableError::Empty);
        }
        Ok(ValueTable { entries, ascii })
    }

    /// Parses the on-disk format: `symbol whitespace decimal` per line,
    /// `#`-to-end-of-line comments, blank lines skipped.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut pairs = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let body = body.trim();
            if body.is_empty() {
                continue;
            }
            let mut chars = body.chars();
            let symbol = chars.next().expect("non-empty after trim");
            let rest = chars.as_str();
            if !rest.starts_with(|c: char| c.is_whitespace()) {
                return Err(TableError::Malformed {
                    line,
                    text: raw.to_string(),
                    reason: "expected whitespace after the symbol".to_string(),
                });
            }
            let mut fields = rest.split_whitespace();
            let value_text = fields.next().ok_or_else(|| TableError::Malformed {
                line,
                text: raw.to_string(),
                reason: "missing value".to_string(),
            })?;
            if fields.next().is_some() {
                return Err(TableError::Malformed {
                    line,
                    text: raw.to_string(),
                    reason: "trailing fields after the value".to_string(),
                });
            }
            let parsed: f64 = value_text.parse().map_err(|e| TableError::Malformed {
                line,
                text: raw.to_string(),
                reason: format!("bad decimal {value_text:?}: {e}"),
            })?;
            let value = S::from_f64(parsed).ok_or_else(|| TableError::Malformed {
                line,
                text: raw.to_string(),
                reason: format!("value {value_text} does not fit the scalar type"),
            })?;
            pairs.push((symbol, value));
            lines.push(line);
        }
        // Re-map entry indices in errors back to source line numbers.
        Self::from_entries(pairs).map_err(|e| match e {
            TableError::DuplicateSymbol { line, symbol } => TableError::DuplicateSymbol {
                line: lines[line - 1],
                symbol,
            },
            TableError::NonFiniteValue { line, symbol } => TableError::NonFiniteValue {
                line: lines[line - 1],
                symbol,
            },
            other => other,
        })
    }

    /// Value for `symbol`, or `None` when unmapped.
    #[inline]
    pub fn get(&self, symbol: char) -> Option<S> {
        let code = symbol as u32;
        if code < 128 {
            self.ascii[code as usize]
        } else {
            self.entries.get(&symbol).copied()
        }
    }

    /// Value for `symbol`; unmapped symbols are an error.
    pub fn lookup(&self, symbol: char) -> Result<S, UnmappedSymbol> {
        self.get(symbol).ok_or(UnmappedSymbol { symbol })
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.get(symbol).is_some()
    }

    /// Number of mapped symbols.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Mapped symbols in code-point order.
    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.entries.keys().copied()
    }

    /// `(symbol, value)` pairs in code-point order.
    pub fn entries(&self) -> impl Iterator<Item = (char, S)> + '_ {
        self.entries.iter().map(|(&c, &v)| (c, v))
    }

    /// Serializes back to the on-disk format, one entry per line in
    /// code-point order. `parse` of the output reproduces the table exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (symbol, value) in self.entries() {
            out.push(symbol);
            out.push(' ');
            out.push_str(&format!("{value}"));
            out.push('\n');
        }
        out
    }
}

/// The bundled English letter-frequency table.
pub fn default_table<S: Scalar>() -> ValueTable<S> {
    ValueTable::parse(DEFAULT_TABLE_TEXT).expect("bundled table is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_has_26_uppercase_letters() {
        let t = default_table::<f64>();
        assert_eq!(t.len(), 26);
        let symbols: Vec<char> = t.symbols().collect();
        let expected: Vec<char> = ('A'..='Z').collect();
        assert_eq!(symbols, expected);
    }

    #[test]
    fn default_table_spot_values() {
        let t = default_table::<f64>();
        assert_eq!(t.lookup('A').unwrap(), 8.167);
        assert_eq!(t.lookup('E').unwrap(), 12.702);
        assert_eq!(t.lookup('C').unwrap(), 2.780);
        assert_eq!(t.lookup('D').unwrap(), 4.252);
        assert_eq!(t.lookup('Z').unwrap(), 0.074);
    }

    #[test]
    fn default_table_frequencies_sum_to_almost_100() {
        let t = default_table::<f64>();
        let sum: f64 = t.entries().map(|(_, v)| v).sum();
        assert!((sum - 99.996).abs() < 1e-9, "sum = {sum}");
    }

    #[test]
    fn lookup_is_case_sensitive() {
        let t = default_table::<f64>();
        assert_eq!(t.lookup('a'), Err(UnmappedSymbol { symbol: 'a' }));
    }

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let t = ValueTable::<f64>::parse("# header\n\nA 1.5 # inline\n\nB 2.5\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.lookup('A').unwrap(), 1.5);
        assert_eq!(t.lookup('B').unwrap(), 2.5);
    }

    #[test]
    fn parse_accepts_tabs_and_extra_spaces() {
        let t = ValueTable::<f64>::parse("A\t1.0\n  B   2.0  \n").unwrap();
        assert_eq!(t.lookup('A').unwrap(), 1.0);
        assert_eq!(t.lookup('B').unwrap(), 2.0);
    }

    #[test]
    fn parse_supports_non_ascii_symbols_and_negative_values() {
        let t = ValueTable::<f64>::parse("é -3.25\n€ 0.5\n").unwrap();
        assert_eq!(t.lookup('é').unwrap(), -3.25);
        assert_eq!(t.lookup('€').unwrap(), 0.5);
    }

    #[test]
    fn parse_rejects_duplicate_symbols() {
        let err = ValueTable::<f64>::parse("A 1.0\nB 2.0\nA 3.0\n").unwrap_err();
        match err {
            TableError::DuplicateSymbol { line, symbol } => {
                assert_eq!(line, 3);
                assert_eq!(symbol, 'A');
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_rejects_missing_value() {
        assert!(matches!(
            ValueTable::<f64>::parse("A\n").unwrap_err(),
            TableError::Malformed { line: 1, .. }
        ));
    }

    #[test]
    fn parse_rejects_trailing_fields() {
        assert!(matches!(
            ValueTable::<f64>::parse("A 1.0 2.0\n").unwrap_err(),
            TableError::Malformed { line: 1, .. }
        ));
    }

    #[test]
    fn parse_rejects_glued_symbol_and_value() {
        assert!(matches!(
            ValueTable::<f64>::parse("A1.0\n").unwrap_err(),
            TableError::Malformed { line: 1, .. }
        ));
    }

    #[test]
    fn parse_rejects_non_finite_values() {
        assert!(matches!(
            ValueTable::<f64>::parse("A inf\n").unwrap_err(),
            TableError::NonFiniteValue { line: 1, symbol: 'A' }
        ));
        assert!(matches!(
            ValueTable::<f64>::parse("B 1.0\nC NaN\n").unwrap_err(),
            TableError::NonFiniteValue { line: 2, symbol: 'C' }
        ));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            ValueTable::<f64>::parse("# only comments\n\n").unwrap_err(),
            TableError::Empty
        ));
    }

    #[test]
    fn round_trip_through_text() {
        let t = default_table::<f64>();
        let text = t.to_text();
        let back = ValueTable::<f64>::parse(&text).unwrap();
        assert_eq!(t.len(), back.len());
        for (symbol, value) in t.entries() {
            assert_eq!(back.lookup(symbol).unwrap(), value);
        }
    }

    #[test]
    fn round_trip_preserves_f32_values() {
        let t = ValueTable::<f32>::parse("A 8.167\nB 0.1\n").unwrap();
        let back = ValueTable::<f32>::parse(&t.to_text()).unwrap();
        assert_eq!(back.lookup('A').unwrap(), 8.167f32);
        assert_eq!(back.lookup('B').unwrap(), 0.1f32);
    }
}
