//! Permutations in one-line notation: parsing, descents, pattern containment
//! and lexicographic enumeration.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap on `n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10;

/// A permutation of `1..=n` in one-line notation.
///
/// Values are 1-based, positions are 0-based. The empty permutation is the
/// identity of length 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation, checking that `entries` is a rearrangement of `1..=n`.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            let idx = v as usize;
            if v == 0 || idx > n {
                return Err(Error::ValueOutOfRange { value: v as u64, n });
            }
            if seen[idx] {
                return Err(Error::DuplicateValue { value: v });
            }
            seen[idx] = true;
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Self::new(entries.clone()).is_ok());
        Self { entries }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// Number of positions `i` with `p_i > p_{i+1}`.
    pub fn descent_count(&self) -> usize {
        self.entries.windows(2).filter(|w| w[0] > w[1]).count()
    }

    pub fn reverse(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        Self { entries }
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    ///
    /// Exhaustive search over increasing position tuples. A partial match is
    /// extended only while its relative order agrees with the pattern prefix,
    /// which prunes most branches early.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let k = pattern.len();
        if k == 0 {
            return true;
        }
        if k > self.len() {
            return false;
        }
        let mut chosen: Vec<u32> = Vec::with_capacity(k);
        self.extend_match(pattern.entries(), 0, &mut chosen)
    }

    fn extend_match(&self, pattern: &[u32], start: usize, chosen: &mut Vec<u32>) -> bool {
        let depth = chosen.len();
        if depth == pattern.len() {
            return true;
        }
        let remaining = pattern.len() - depth;
        let q = pattern[depth];
        for pos in start..=self.len() - remaining {
            let v = self.entries[pos];
            let consistent = chosen
                .iter()
                .zip(pattern)
                .all(|(&c, &pq)| (c < v) == (pq < q));
            if !consistent {
                continue;
            }
            chosen.push(v);
            if self.extend_match(pattern, pos + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// The pattern `2 3 ... m 1` of length `m`.
    pub fn rotated_identity(m: usize) -> Self {
        if m == 0 {
            return Self::identity(0);
        }
        let mut entries: Vec<u32> = (2..=m as u32).collect();
        entries.push(1);
        Self { entries }
    }

    /// Compact rendering: a digit string when `n <= 9`, comma-separated otherwise.
    pub fn to_compact_string(&self) -> String {
        if self.len() <= 9 {
            self.entries.iter().map(|v| v.to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.entries {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_permutation(s)
    }
}

/// Parses comma/whitespace separated integers, or a bare digit string for `n <= 9`.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let trimmed = text.trim();
    let is_separated = trimmed.contains(|c: char| c == ',' || c.is_whitespace());
    let values: Vec<u32> = if !is_separated && !trimmed.is_empty() && trimmed.len() <= 9 {
        trimmed
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::MalformedToken(c.to_string()))
            })
            .collect::<Result<_>>()?
    } else {
        trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| Error::MalformedToken(tok.to_string()))
            })
            .collect::<Result<_>>()?
    };
    Permutation::new(values)
}

/// Lexicographic stream of permutations of `1..=n`, optionally restricted to
/// a contiguous rank range.
#[derive(Clone, Debug)]
pub struct Permutations {
    current: Option<Vec<u32>>,
    remaining: u128,
}

impl Permutations {
    /// Permutations with lexicographic rank in `start..end`.
    pub fn range(n: usize, start: u128, end: u128) -> Self {
        let total = factorial_u128(n);
        let end = end.min(total);
        if start >= end {
            return Self {
                current: None,
                remaining: 0,
            };
        }
        Self {
            current: Some(unrank(n, start)),
            remaining: end - start,
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let cur = self.current.as_mut()?;
        let out = Permutation::from_vec_unchecked(cur.clone());
        self.remaining -= 1;
        if self.remaining > 0 && !next_lexicographic(cur) {
            self.remaining = 0;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

/// All `n!` permutations of length `n` in lexicographic order.
pub fn all_permutations(n: usize, limit: usize) -> Result<Permutations> {
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }
    Ok(Permutations::range(n, 0, factorial_u128(n)))
}

pub fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn unrank(n: usize, mut rank: u128) -> Vec<u32> {
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial_u128(i);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

fn next_lexicographic(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
