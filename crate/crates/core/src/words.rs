//! Stack words: the move sequences of the series machine.
//!
//! Letter `L_0` pushes the next input entry onto the first stack, `L_i`
//! moves the top of stack `i` onto stack `i + 1`, and `L_t` sends the top of
//! the last stack to the output. Letters are stored as integers `0..=t` and
//! rendered as consecutive uppercase letters starting at a configurable
//! offset, so a projected 2-stack word can still print as `B`, `C`, `D`.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::machine::{run_series_machine, MAX_STACKS};
use crate::perm::Permutation;

pub type Letter = u8;

pub(crate) fn render_letter(letter: Letter, base: u8) -> char {
    (b'A' + base + letter) as char
}

/// A ballot word with `n` copies of each of the `t + 1` move letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StackWord {
    letters: Vec<Letter>,
    t: usize,
    base: u8,
}

impl StackWord {
    pub(crate) fn from_letters_unchecked(letters: Vec<Letter>, t: usize, base: u8) -> Self {
        Self { letters, t, base }
    }

    /// Validates raw letters `0..=t`; `base` only affects rendering.
    pub fn from_letters(letters: Vec<Letter>, t: usize, base: u8) -> Result<Self> {
        let text: String = letters
            .iter()
            .map(|&l| {
                if (l as usize) <= t {
                    render_letter(l, base)
                } else {
                    '?'
                }
            })
            .collect();
        validate_word_with_base(&text, t, base)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.letters.len() / (self.t + 1)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same letters, rendered from `A`.
    pub fn rebased(&self, base: u8) -> Self {
        Self {
            letters: self.letters.clone(),
            t: self.t,
            base,
        }
    }
}

impl fmt::Display for StackWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .letters
            .iter()
            .map(|&l| render_letter(l, self.base))
            .collect();
        f.write_str(&s)
    }
}

impl Serialize for StackWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parses and validates a word over `A..` with `t + 1` letters.
pub fn validate_word(text: &str, t: usize) -> Result<StackWord> {
    validate_word_with_base(text, t, 0)
}

/// Parses and validates a word whose first letter is `'A' + base`.
pub fn validate_word_with_base(text: &str, t: usize, base: u8) -> Result<StackWord> {
    if t == 0 || t > MAX_STACKS || base as usize + t > 25 {
        return Err(Error::StackCount { t, max: MAX_STACKS });
    }
    let first = b'A' + base;
    let mut letters = Vec::with_capacity(text.len());
    for (position, c) in text.chars().enumerate() {
        let offset = (c as u32).wrapping_sub(first as u32);
        if !c.is_ascii_uppercase() || offset as usize > t {
            return Err(Error::UnknownLetter { letter: c, position: position + 1 });
        }
        letters.push(offset as Letter);
    }

    let mut counts = vec![0usize; t + 1];
    for &l in &letters {
        counts[l as usize] += 1;
    }
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(Error::UnequalCounts { counts });
    }

    let mut prefix = vec![0usize; t + 1];
    for (i, &l) in letters.iter().enumerate() {
        prefix[l as usize] += 1;
        if l > 0 && prefix[l as usize] > prefix[l as usize - 1] {
            return Err(Error::BallotViolation {
                position: i + 1,
                earlier: render_letter(l - 1, base),
                later: render_letter(l, base),
            });
        }
    }
    Ok(StackWord { letters, t, base })
}

/// The factors excluded from every 3-stack word of a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ForbiddenFactor {
    BB,
    CC,
    BAB,
    /// `C B A^j C` for some `j >= 0`.
    CBAjC { j: usize },
    DA,
    DB,
    CA,
}

impl ForbiddenFactor {
    pub fn name(&self) -> &'static str {
        match self {
            ForbiddenFactor::BB => "BB",
            ForbiddenFactor::CC => "CC",
            ForbiddenFactor::BAB => "BAB",
            ForbiddenFactor::CBAjC { .. } => "CBA^jC",
            ForbiddenFactor::DA => "DA",
            ForbiddenFactor::DB => "DB",
            ForbiddenFactor::CA => "CA",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: ForbiddenFactor,
    /// 0-based start of the factor.
    pub index: usize,
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let j = match self.rule {
            ForbiddenFactor::CBAjC { j } => Some(j),
            _ => None,
        };
        let mut s = serializer.serialize_struct("Violation", if j.is_some() { 3 } else { 2 })?;
        s.serialize_field("rule", self.rule.name())?;
        s.serialize_field("index", &self.index)?;
        if let Some(j) = j {
            s.serialize_field("j", &j)?;
        }
        s.end()
    }
}

const A: Letter = 0;
const B: Letter = 1;
const C: Letter = 2;
const D: Letter = 3;

/// Every occurrence of a forbidden factor in a 3-stack word, ordered by
/// start index.
pub fn forbidden_factor_violations(word: &StackWord) -> Result<Vec<Violation>> {
    if word.t != 3 {
        return Err(Error::WrongStackCount { expected: 3, actual: word.t });
    }
    let w = &word.letters;
    let mut found = Vec::new();
    let pairs = [
        ([B, B], ForbiddenFactor::BB),
        ([C, C], ForbiddenFactor::CC),
        ([D, A], ForbiddenFactor::DA),
        ([D, B], ForbiddenFactor::DB),
        ([C, A], ForbiddenFactor::CA),
    ];
    for index in 0..w.len() {
        let rest = &w[index..];
        for (pattern, rule) in pairs {
            if rest.starts_with(&pattern) {
                found.push(Violation { rule, index });
            }
        }
        if rest.starts_with(&[B, A, B]) {
            found.push(Violation { rule: ForbiddenFactor::BAB, index });
        }
        if rest.starts_with(&[C, B]) {
            let j = rest[2..].iter().take_while(|&&l| l == A).count();
            if rest.get(2 + j) == Some(&C) {
                found.push(Violation { rule: ForbiddenFactor::CBAjC { j }, index });
            }
        }
    }
    Ok(found)
}

/// The stack word of `p` under the `t`-stack series machine.
pub fn encode(p: &Permutation, t: usize) -> Result<StackWord> {
    Ok(run_series_machine(p, t)?.word)
}

/// Replays `word` with anonymous entries and labels them by output order.
///
/// The returned permutation lists, in input order, the output position of
/// each entry. For the word of a `t`-stack sortable permutation this is the
/// permutation itself.
pub fn decode(word: &StackWord) -> Permutation {
    let n = word.n();
    let t = word.t;
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); t];
    let mut next_token = 0usize;
    let mut emitted = 0u32;
    let mut values = vec![0u32; n];
    for &l in &word.letters {
        let l = l as usize;
        if l == 0 {
            stacks[0].push(next_token);
            next_token += 1;
        } else {
            let tok = stacks[l - 1]
                .pop()
                .expect("ballot-valid word popped an empty stack");
            if l == t {
                emitted += 1;
                values[tok] = emitted;
            } else {
                stacks[l].push(tok);
            }
        }
    }
    Permutation::from_vec_unchecked(values)
}

/// True iff `word` is the trace of the series machine on `decode(word)`.
pub fn is_genuine_stack_word(word: &StackWord) -> bool {
    let p = decode(word);
    match encode(&p, word.t) {
        Ok(w) => w.letters == word.letters,
        Err(_) => false,
    }
}

/// Deletes every `A` from a 3-stack word, leaving a 2-stack word over `B, C, D`.
pub fn project_v(word: &StackWord) -> Result<StackWord> {
    if word.t != 3 {
        return Err(Error::WrongStackCount { expected: 3, actual: word.t });
    }
    let letters = word
        .letters
        .iter()
        .filter(|&&l| l != A)
        .map(|&l| l - 1)
        .collect();
    Ok(StackWord { letters, t: 2, base: word.base + 1 })
}

/// Overlapping occurrences of `factor` in the rendered word.
pub fn count_factor(word: &StackWord, factor: &str) -> usize {
    let rendered: Vec<u8> = word.to_string().into_bytes();
    let needle = factor.as_bytes();
    if needle.is_empty() || needle.len() > rendered.len() {
        return 0;
    }
    rendered.windows(needle.len()).filter(|w| *w == needle).count()
}

/// Candidate 3-stack words obtained by inserting `n` copies of `A` into a
/// 2-stack word over `B, C, D`.
///
/// Two `A`s go inside every `BB` factor and one goes before the first `B`.
/// The remaining `A`s are spread over `n` slots: before the first `B`, and
/// right after each `B` except the last. Words are produced in
/// lexicographic order of the free-occupancy vector.
#[derive(Clone, Debug)]
pub struct APlacements {
    v: Vec<Letter>,
    forced: Vec<usize>,
    free: Vec<usize>,
    done: bool,
}

pub fn enumerate_a_placements(v: &StackWord, n: usize) -> Result<APlacements> {
    if v.t != 2 {
        return Err(Error::WrongStackCount { expected: 2, actual: v.t });
    }
    if v.n() != n || n == 0 {
        return Err(Error::ValueOutOfRange { value: n as u64, n: v.n() });
    }
    let letters = v.letters.clone();
    let bb_factors = letters.windows(2).filter(|w| w == &[0, 0]).count();
    let free_total = (n as i64) - 2 * bb_factors as i64 - 1;
    if free_total < 0 {
        return Err(Error::TooManyBbFactors { bb_factors, n });
    }

    // forced[j] for slot j: slot 0 precedes the first B, slot j >= 1 follows the j-th B.
    let mut forced = vec![0usize; n];
    forced[0] = 1;
    let mut b_seen = 0;
    for (i, &l) in letters.iter().enumerate() {
        if l == 0 {
            b_seen += 1;
            if letters.get(i + 1) == Some(&0) {
                forced[b_seen] = 2;
            }
        }
    }
    let mut free = vec![0usize; n];
    free[n - 1] = free_total as usize;
    Ok(APlacements { v: letters, forced, free, done: false })
}

impl APlacements {
    fn build(&self) -> StackWord {
        let n = self.forced.len();
        let mut out = Vec::with_capacity(4 * n);
        let slot = |j: usize| self.forced[j] + self.free[j];
        out.extend(std::iter::repeat_n(A, slot(0)));
        let mut b_seen = 0;
        for &l in &self.v {
            out.push(l + 1);
            if l == 0 {
                b_seen += 1;
                if b_seen < n {
                    out.extend(std::iter::repeat_n(A, slot(b_seen)));
                }
            }
        }
        StackWord { letters: out, t: 3, base: 0 }
    }

    fn advance(&mut self) {
        let n = self.free.len();
        // Rightmost slot with a nonzero slot after it.
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| self.free[i + 1..].iter().any(|&c| c > 0))
        else {
            self.done = true;
            return;
        };
        let tail: usize = self.free[i + 1..].iter().sum();
        self.free[i] += 1;
        for c in &mut self.free[i + 1..] {
            *c = 0;
        }
        self.free[n - 1] = tail - 1;
    }
}

impl Iterator for APlacements {
    type Item = StackWord;

    fn next(&mut self) -> Option<StackWord> {
        if self.done {
            return None;
        }
        let word = self.build();
        self.advance();
        Some(word)
    }
}
