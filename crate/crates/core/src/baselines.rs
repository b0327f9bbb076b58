//! Classical exact string search, used as ground truth and speed yardsticks.
//!
//! All four searchers report every (possibly overlapping) occurrence in
//! ascending order. `naive_search` is the oracle the others are checked
//! against; Rabin-Karp additionally reports its spurious hash hits and
//! Boyer-Moore the number of alignments it inspected, the two quantities
//! the experiment harness cares about.

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

/// Symbols the hashing searchers can digest: anything that maps to a stable
/// numeric code.
pub trait Symbol: Copy + Eq + Hash {
    fn code(self) -> u64;
}

impl Symbol for u8 {
    fn code(self) -> u64 {
        self as u64
    }
}

impl Symbol for u32 {
    fn code(self) -> u64 {
        self as u64
    }
}

impl Symbol for char {
    fn code(self) -> u64 {
        self as u64
    }
}

/// Problems common to the baseline searchers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("empty pattern")]
    EmptyPattern,
    #[error("pattern length {m} exceeds text length {n}")]
    PatternLongerThanText { m: usize, n: usize },
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

fn check_lengths<T>(text: &[T], pattern: &[T]) -> Result<(), SearchError> {
    if pattern.is_empty() {
        return Err(SearchError::EmptyPattern);
    }
    if pattern.len() > text.len() {
        return Err(SearchError::PatternLongerThanText {
            m: pattern.len(),
            n: text.len(),
        });
    }
    Ok(())
}

/// Checks every alignment by direct comparison. `O(n * m)`, and the
/// correctness oracle for everything else in this crate.
pub fn naive_search<T: Eq>(text: &[T], pattern: &[T]) -> Result<Vec<usize>, SearchError> {
    check_lengths(text, pattern)?;
    let m = pattern.len();
    Ok((0..=text.len() - m)
        .filter(|&j| &text[j..j + m] == pattern)
        .collect())
}

/// Longest-proper-prefix-which-is-also-suffix table for a pattern.
///
/// `values()[i]` is the length of the longest proper prefix of
/// `pattern[..=i]` that is also a suffix of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpsTable {
    values: Vec<usize>,
}

impl LpsTable {
    pub fn build<T: Eq>(pattern: &[T]) -> Result<Self, SearchError> {
        if pattern.is_empty() {
            return Err(SearchError::EmptyPattern);
        }
        let m = pattern.len();
        let mut values = vec![0usize; m];
        let mut len = 0usize;
        let mut i = 1usize;
        while i < m {
            if pattern[i] == pattern[len] {
                len += 1;
                values[i] = len;
                i += 1;
            } else if len != 0 {
                len = values[len - 1];
            } else {
                values[i] = 0;
                i += 1;
            }
        }
        Ok(LpsTable { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// Knuth-Morris-Pratt: `O(n + m)` via the failure links in [`LpsTable`].
pub fn kmp_search<T: Eq>(text: &[T], pattern: &[T]) -> Result<Vec<usize>, SearchError> {
    check_lengths(text, pattern)?;
    let lps = LpsTable::build(pattern)?;
    let lps = lps.values();
    let m = pattern.len();
    let mut out = Vec::new();
    let mut i = 0usize;
    let mut j = 0usize;
    while i < text.len() {
        if text[i] == pattern[j] {
            i += 1;
            j += 1;
            if j == m {
                out.push(i - m);
                j = lps[j - 1];
            }
        } else if j != 0 {
            j = lps[j - 1];
        } else {
            i += 1;
        }
    }
    Ok(out)
}

/// Rolling-hash parameters for Rabin-Karp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RkParams {
    pub base: u64,
    pub modulus: u64,
}

impl Default for RkParams {
    fn default() -> Self {
        RkParams {
            base: 256,
            modulus: 1_000_003,
        }
    }
}

impl RkParams {
    /// The modulus must be prime (so the rolling update is invertible and
    /// hash quality is predictable) and the base must not vanish mod it.
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.base < 2 {
            return Err(SearchError::BadParams(format!(
                "base must be at least 2, got {}",
                self.base
            )));
        }
        if !is_prime(self.modulus) {
            return Err(SearchError::BadParams(format!(
                "modulus {} is not prime",
                self.modulus
            )));
        }
        if self.base % self.modulus == 0 {
            return Err(SearchError::BadParams(format!(
                "base {} is a multiple of the modulus {}",
                self.base, self.modulus
            )));
        }
        Ok(())
    }
}

fn mulmod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, modulus);
        }
        base = mulmod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Rabin-Karp: rolling hash with literal confirmation of every hash hit.
///
/// Returns `(positions, spurious_hits)`; a spurious hit is a window whose
/// hash matched the pattern's but whose symbols did not.
pub fn rabin_karp_search<T: Symbol>(
    text: &[T],
    pattern: &[T],
    params: &RkParams,
) -> Result<(Vec<usize>, usize), SearchError> {
    check_lengths(text, pattern)?;
    params.validate()?;
    let (base, modulus) = (params.base % params.modulus, params.modulus);
    let m = pattern.len();
    let code = |t: T| t.code() % modulus;
    let fold = |s: &[T]| s.iter().fold(0u64, |h, &t| {
        (mulmod(h, base, modulus) + code(t)) % modulus
    });

    let target = fold(pattern);
    let mut h = fold(&text[..m]);
    // base^(m-1), the weight of the outgoing symbol.
    let lead = powmod(base, (m - 1) as u64, modulus);

    let mut positions = Vec::new();
    let mut spurious = 0usize;
    for j in 0..=text.len() - m {
        if h == target {
            if &text[j..j + m] == pattern {
                positions.push(j);
            } else {
                spurious += 1;
            }
        }
        if j + m < text.len() {
            let out = mulmod(code(text[j]), lead, modulus);
            h = (h + modulus - out) % modulus;
            h = (mulmod(h, base, modulus) + code(text[j + m])) % modulus;
        }
    }
    Ok((positions, spurious))
}

/// Shift tables for Boyer-Moore.
#[derive(Debug, Clone)]
pub struct BmTables<T> {
    /// Rightmost position of each symbol in the pattern.
    bad_character: HashMap<T, usize>,
    /// `good_suffix[j]` is the safe shift when the suffix `pattern[j..]`
    /// matched but position `j - 1` did not (`j = 0`: after a full match).
    good_suffix: Vec<usize>,
}

impl<T: Symbol> BmTables<T> {
    pub fn build(pattern: &[T]) -> Result<Self, SearchError> {
        if pattern.is_empty() {
            return Err(SearchError::EmptyPattern);
        }
        let m = pattern.len();
        let mut bad_character = HashMap::new();
        for (i, &t) in pattern.iter().enumerate() {
            bad_character.insert(t, i);
        }

        // Strong good-suffix preprocessing, two passes over border links.
        let mut shift = vec![0usize; m + 1];
        let mut border = vec![0usize; m + 1];
        let mut i = m;
        let mut j = m + 1;
        border[i] = j;
        while i > 0 {
            while j <= m && pattern[i - 1] != pattern[j - 1] {
                if shift[j] == 0 {
                    shift[j] = j - i;
                }
                j = border[j];
            }
            i -= 1;
            j -= 1;
            border[i] = j;
        }
        let mut widest = border[0];
        for (s, slot) in shift.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = widest;
            }
            if s == widest {
                widest = border[widest];
            }
        }
        Ok(BmTables {
            bad_character,
            good_suffix: shift,
        })
    }

    pub fn bad_character_shift(&self, symbol: T) -> Option<usize> {
        self.bad_character.get(&symbol).copied()
    }

    pub fn good_suffix(&self) -> &[usize] {
        &self.good_suffix
    }
}

/// Boyer-Moore with both the bad-character and strong good-suffix rules.
///
/// Returns `(positions, alignments)` where `alignments` counts the window
/// positions actually inspected; the gap to `n - m + 1` is what the
/// shift rules skipped.
pub fn boyer_moore_search<T: Symbol>(
    text: &[T],
    pattern: &[T],
) -> Result<(Vec<usize>, usize), SearchError> {
    check_lengths(text, pattern)?;
    let tables = BmTables::build(pattern)?;
    let m = pattern.len();
    let n = text.len();
    let mut positions = Vec::new();
    let mut alignments = 0usize;
    let mut s = 0usize;
    while s <= n - m {
        alignments += 1;
        let mut j = m;
        while j > 0 && pattern[j - 1] == text[s + j - 1] {
            j -= 1;
        }
        if j == 0 {
            positions.push(s);
            s += tables.good_suffix[0].max(1);
        } else {
            let gs = tables.good_suffix[j];
            let mismatched = text[s + j - 1];
            let bc = match tables.bad_character_shift(mismatched) {
                // Align the rightmost occurrence under the mismatch; when it
                // sits to the right this would be a backward move, so the
                // max() below discards it.
                Some(occ) => (j - 1) as i64 - occ as i64,
                None => j as i64,
            };
            s += gs.max(bc.max(1) as usize);
        }
    }
    Ok((positions, alignments))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn b(s: &str) -> Vec<u8> {
        s.bytes().collect()
    }

    #[test]
    fn naive_finds_overlapping_occurrences() {
        assert_eq!(naive_search(&b("ABABABA"), &b("ABA")).unwrap(), vec![0, 2, 4]);
        assert_eq!(naive_search(&b("AAAA"), &b("AA")).unwrap(), vec![0, 1, 2]);
        assert_eq!(naive_search(&b("ABC"), &b("ABC")).unwrap(), vec![0]);
        assert_eq!(naive_search(&b("ABC"), &b("X")).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn length_errors_are_uniform() {
        for result in [
            naive_search(&b("ABC"), &b("")).map(|_| ()),
            kmp_search(&b("ABC"), &b("")).map(|_| ()),
            rabin_karp_search(&b("ABC"), &b(""), &RkParams::default()).map(|_| ()),
            boyer_moore_search(&b("ABC"), &b("")).map(|_| ()),
        ] {
            assert_eq!(result.unwrap_err(), SearchError::EmptyPattern);
        }
        for result in [
            naive_search(&b("AB"), &b("ABC")).map(|_| ()),
            kmp_search(&b("AB"), &b("ABC")).map(|_| ()),
            rabin_karp_search(&b("AB"), &b("ABC"), &RkParams::default()).map(|_| ()),
            boyer_moore_search(&b("AB"), &b("ABC")).map(|_| ()),
        ] {
            assert_eq!(
                result.unwrap_err(),
                SearchError::PatternLongerThanText { m: 3, n: 2 }
            );
        }
    }

    #[test]
    fn lps_tables_match_known_values() {
        assert_eq!(LpsTable::build(&b("ABABAA")).unwrap().values(), &[0, 0, 1, 2, 3, 1]);
        assert_eq!(LpsTable::build(&b("AAAA")).unwrap().values(), &[0, 1, 2, 3]);
        assert_eq!(LpsTable::build(&b("ABCD")).unwrap().values(), &[0, 0, 0, 0]);
        assert_eq!(
            LpsTable::build(&b("AABAACAABAA")).unwrap().values(),
            &[0, 1, 0, 1, 2, 0, 1, 2, 3, 4, 5]
        );
    }

    #[test]
    fn kmp_agrees_with_naive_on_classics() {
        let text = b("AABAACAADAABAABA");
        let pattern = b("AABA");
        assert_eq!(
            kmp_search(&text, &pattern).unwrap(),
            naive_search(&text, &pattern).unwrap()
        );
        assert_eq!(kmp_search(&text, &pattern).unwrap(), vec![0, 9, 12]);
    }

    #[test]
    fn rabin_karp_with_roomy_modulus_has_no_spurious_hits() {
        let text = b("GEEKS FOR GEEKS");
        let (positions, spurious) =
            rabin_karp_search(&text, &b("GEEK"), &RkParams::default()).unwrap();
        assert_eq!(positions, vec![0, 10]);
        assert_eq!(spurious, 0);
    }

    #[test]
    fn rabin_karp_counts_spurious_hits_under_a_tiny_modulus() {
        let text = b("ABCDABCEABCD");
        let pattern = b("ABCD");
        let params = RkParams { base: 2, modulus: 11 };
        let (positions, spurious) = rabin_karp_search(&text, &pattern, &params).unwrap();
        assert_eq!(positions, naive_search(&text, &pattern).unwrap());
        // Oracle: count hash-equal, literal-unequal windows directly.
        let fold = |s: &[u8]| {
            s.iter()
                .fold(0u64, |h, &c| (h * 2 + c as u64) % 11)
        };
        let target = fold(&pattern);
        let expected = (0..=text.len() - 4)
            .filter(|&j| fold(&text[j..j + 4]) == target && text[j..j + 4] != pattern[..])
            .count();
        assert_eq!(spurious, expected);
        assert!(spurious > 0, "the tiny modulus should collide somewhere");
    }

    #[test]
    fn rabin_karp_rejects_bad_params() {
        let text = b("ABC");
        let pattern = b("AB");
        for params in [
            RkParams { base: 1, modulus: 97 },
            RkParams { base: 256, modulus: 1_000_000 },
            RkParams { base: 194, modulus: 97 },
        ] {
            assert!(matches!(
                rabin_karp_search(&text, &pattern, &params).unwrap_err(),
                SearchError::BadParams(_)
            ));
        }
    }

    #[test]
    fn primality_check_is_exact() {
        for p in [2u64, 3, 5, 97, 1_000_003, 2_305_843_009_213_693_951] {
            assert!(is_prime(p), "{p} is prime");
        }
        for c in [0u64, 1, 4, 9, 1_000_000, 1_000_005, 2_305_843_009_213_693_953] {
            assert!(!is_prime(c), "{c} is composite");
        }
    }

    #[test]
    fn boyer_moore_tables_expose_rightmost_occurrences() {
        let tables = BmTables::build(&b("ABCAB")).unwrap();
        assert_eq!(tables.bad_character_shift(b'A'), Some(3));
        assert_eq!(tables.bad_character_shift(b'B'), Some(4));
        assert_eq!(tables.bad_character_shift(b'C'), Some(2));
        assert_eq!(tables.bad_character_shift(b'X'), None);
        assert_eq!(tables.good_suffix().len(), 6);
        assert!(tables.good_suffix().iter().all(|&s| s >= 1));
    }

    #[test]
    fn boyer_moore_finds_occurrences_and_skips_alignments() {
        let text = b("AABAACAADAABAABA");
        let pattern = b("AABA");
        let (positions, alignments) = boyer_moore_search(&text, &pattern).unwrap();
        assert_eq!(positions, vec![0, 9, 12]);
        assert!(alignments <= text.len() - pattern.len() + 1);
        assert!(alignments >= positions.len());

        // On a text with no occurrences at all the skips should bite.
        let haystack: Vec<u8> = std::iter::repeat(b"XYZW".as_slice())
            .take(64)
            .flatten()
            .copied()
            .collect();
        let (hits, alignments) = boyer_moore_search(&haystack, &b("AAAA")).unwrap();
        assert!(hits.is_empty());
        assert!(alignments * 2 < haystack.len(), "alignments = {alignments}");
    }

    #[test]
    fn all_searchers_agree_on_seeded_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..500 {
            let alphabet = [1usize, 2, 4, 26][trial % 4] as u8;
            let n = rng.gen_range(1..=120);
            let m = rng.gen_range(1..=n.min(12));
            let text: Vec<u8> = (0..n).map(|_| rng.gen_range(0..alphabet)).collect();
            // Half the patterns are genuine substrings so matches happen.
            let pattern: Vec<u8> = if trial % 2 == 0 && n >= m {
                let start = rng.gen_range(0..=n - m);
                text[start..start + m].to_vec()
            } else {
                (0..m).map(|_| rng.gen_range(0..alphabet)).collect()
            };
            let expected = naive_search(&text, &pattern).unwrap();
            assert_eq!(kmp_search(&text, &pattern).unwrap(), expected);
            let (rk, _) = rabin_karp_search(&text, &pattern, &RkParams::default()).unwrap();
            assert_eq!(rk, expected);
            let (bm, _) = boyer_moore_search(&text, &pattern).unwrap();
            assert_eq!(bm, expected);
        }
    }

    #[test]
    fn searchers_are_generic_over_symbol_types() {
        let text: Vec<char> = "надстройка".chars().collect();
        let pattern: Vec<char> = "строй".chars().collect();
        assert_eq!(naive_search(&text, &pattern).unwrap(), vec![3]);
        assert_eq!(kmp_search(&text, &pattern).unwrap(), vec![3]);
        assert_eq!(
            rabin_karp_search(&text, &pattern, &RkParams::default()).unwrap().0,
            vec![3]
        );
        assert_eq!(boyer_moore_search(&text, &pattern).unwrap().0, vec![3]);
    }

    proptest! {
        #[test]
        fn searchers_agree_on_binary_strings(
            text in proptest::collection::vec(0u8..2, 1..80),
            pattern in proptest::collection::vec(0u8..2, 1..8),
        ) {
            prop_assume!(pattern.len() <= text.len());
            let expected = naive_search(&text, &pattern).unwrap();
            prop_assert_eq!(kmp_search(&text, &pattern).unwrap(), expected.clone());
            prop_assert_eq!(
                rabin_karp_search(&text, &pattern, &RkParams::default()).unwrap().0,
                expected.clone()
            );
            prop_assert_eq!(boyer_moore_search(&text, &pattern).unwrap().0, expected);
        }
    }
}
