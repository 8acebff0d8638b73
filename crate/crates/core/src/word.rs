//! Letters and words over the free product of countably many copies of ℤ/3.
//!
//! A [`Letter`] is `x_i` or `x_i^2`; `x_i^-1` is the same element as
//! `x_i^2` and is only ever written in that form. A [`Word`] is a finite
//! sequence of letters together with a flag recording whether it is known
//! to be reduced (no two neighbouring letters on the same generator).

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Default upper bound accepted for generator indices when parsing.
pub const DEFAULT_GENERATOR_CAP: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("malformed token {0:?}: expected x<index> or x<index>^2")]
    MalformedToken(String),
    #[error("exponent {exponent} in {token:?} is outside {{1, 2}}")]
    ExponentOutOfRange { token: String, exponent: String },
    #[error("negative generator index in {0:?}")]
    NegativeIndex(String),
    #[error("generator index {index} exceeds the configured cap {cap}")]
    IndexAboveCap { index: u64, cap: u64 },
    #[error("word is not reduced")]
    NotReduced,
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("epsilon {0} is outside (0, 1]")]
    EpsilonOutOfRange(crate::Rational),
    #[error("window length {length} exceeds word length {word_len}")]
    WindowTooLong { length: usize, word_len: usize },
}

/// A generator `x_i` raised to exponent 1 or 2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    generator: u32,
    exponent: u8,
}

impl Letter {
    /// Returns `None` unless `exponent` is 1 or 2.
    pub fn new(generator: u32, exponent: u8) -> Option<Letter> {
        matches!(exponent, 1 | 2).then_some(Letter { generator, exponent })
    }

    /// `x_i`.
    pub fn gen(generator: u32) -> Letter {
        Letter { generator, exponent: 1 }
    }

    /// `x_i^2 = x_i^-1`.
    pub fn gen_inv(generator: u32) -> Letter {
        Letter { generator, exponent: 2 }
    }

    pub fn generator(self) -> u32 {
        self.generator
    }

    pub fn exponent(self) -> u8 {
        self.exponent
    }

    pub fn inverse(self) -> Letter {
        Letter { generator: self.generator, exponent: 3 - self.exponent }
    }

    /// Product of two letters on the same generator; `None` means identity.
    fn merge(self, other: Letter) -> Option<Letter> {
        debug_assert_eq!(self.generator, other.generator);
        match (self.exponent + other.exponent) % 3 {
            0 => None,
            e => Some(Letter { generator: self.generator, exponent: e }),
        }
    }

    /// Substitutes the generator index, keeping the exponent.
    pub fn relabel(self, generator: u32) -> Letter {
        Letter { generator, exponent: self.exponent }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "x{}", self.generator)
        } else {
            write!(f, "x{}^2", self.generator)
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A word in the letters `x_i^{1,2}`.
///
/// Equality and hashing are letter-for-letter and ignore the `reduced`
/// flag; the flag only records what is known about the word.
#[derive(Clone, Default)]
pub struct Word {
    letters: Vec<Letter>,
    reduced: bool,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new(), reduced: true }
    }

    /// Builds a word, computing the reducedness flag from the letters.
    pub fn from_letters(letters: Vec<Letter>) -> Word {
        let reduced = letters.windows(2).all(|p| p[0].generator != p[1].generator);
        Word { letters, reduced }
    }

    /// Builds a word as written, with the flag clear; see [`parse_word`].
    pub fn unreduced(letters: Vec<Letter>) -> Word {
        let reduced = letters.is_empty();
        Word { letters, reduced }
    }

    pub fn letter(generator: u32, exponent: u8) -> Word {
        Word::from_letters(vec![Letter::new(generator, exponent).expect("exponent in {1,2}")])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Whether the word is flagged reduced.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Length at most 1, or first and last letters on distinct generators.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.reduced
            && match (self.letters.first(), self.letters.last()) {
                (Some(a), Some(b)) if self.letters.len() > 1 => a.generator != b.generator,
                _ => true,
            }
    }

    /// Length at most 1, or first letter not the inverse of the last.
    pub fn is_weakly_cyclically_reduced(&self) -> bool {
        self.reduced
            && match (self.letters.first(), self.letters.last()) {
                (Some(a), Some(b)) if self.letters.len() > 1 => *a != b.inverse(),
                _ => true,
            }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            reduced: self.reduced,
        }
    }

    /// Concatenation without normalisation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word::from_letters(letters)
    }

    /// Free-product normal form of `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        reduce(&self.concat(other))
    }

    /// Cyclic rotation starting at `offset`.
    pub fn rotate(&self, offset: usize) -> Word {
        let n = self.letters.len();
        if n == 0 {
            return Word::empty();
        }
        let offset = offset % n;
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(&self.letters[offset..]);
        letters.extend_from_slice(&self.letters[..offset]);
        Word::from_letters(letters)
    }

    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word::from_letters(self.letters[start..start + len].to_vec())
    }

    /// Whether `self` is `u^r` for some `r >= 2`.
    pub fn is_proper_power(&self) -> bool {
        let n = self.letters.len();
        (1..n).filter(|p| n % p == 0).any(|p| {
            self.letters.iter().enumerate().all(|(i, l)| *l == self.letters[i % p])
        })
    }

    /// Space-separated tokens, `1` for the empty word.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Applies `f` to every generator index.
    pub fn relabel(&self, mut f: impl FnMut(u32) -> u32) -> Word {
        Word {
            letters: self.letters.iter().map(|l| l.relabel(f(l.generator))).collect(),
            reduced: self.reduced,
        }
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(generator, exponent)`, shorter prefix first.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_word(&s).map_err(serde::de::Error::custom)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from_letters(iter.into_iter().collect())
    }
}

/// Parses whitespace-separated `x<i>` / `x<i>^2` tokens, or `1` for the
/// empty word. No normalisation is performed.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    parse_word_with_cap(text, DEFAULT_GENERATOR_CAP)
}

pub fn parse_word_with_cap(text: &str, cap: u64) -> Result<Word, WordError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["1"] {
        return Ok(Word::empty());
    }
    let letters = tokens
        .into_iter()
        .map(|t| parse_letter(t, cap))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Word::unreduced(letters))
}

fn parse_letter(token: &str, cap: u64) -> Result<Letter, WordError> {
    let malformed = || WordError::MalformedToken(token.to_string());
    let body = token.strip_prefix('x').ok_or_else(malformed)?;
    let (index, exponent) = match body.split_once('^') {
        Some((i, e)) => (i, Some(e)),
        None => (body, None),
    };
    if index.starts_with('-') {
        return Err(WordError::NegativeIndex(token.to_string()));
    }
    if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let exponent = match exponent {
        None => 1,
        Some("1") => 1,
        Some("2") => 2,
        Some("") => return Err(malformed()),
        Some(e) => {
            return Err(WordError::ExponentOutOfRange {
                token: token.to_string(),
                exponent: e.to_string(),
            })
        }
    };
    let cap = cap.min(u32::MAX as u64);
    let value: u64 = index.parse().map_err(|_| WordError::IndexAboveCap { index: u64::MAX, cap })?;
    if value > cap {
        return Err(WordError::IndexAboveCap { index: value, cap });
    }
    Ok(Letter { generator: value as u32, exponent })
}

/// Free-product normal form: neighbouring letters on one generator are
/// merged (exponents add mod 3) and identities dropped, in a single
/// left-to-right stack pass.
pub fn reduce(w: &Word) -> Word {
    if w.reduced {
        return w.clone();
    }
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        match out.last() {
            Some(&top) if top.generator == l.generator => {
                out.pop();
                if let Some(m) = top.merge(l) {
                    out.push(m);
                }
            }
            _ => out.push(l),
        }
    }
    Word { letters: out, reduced: true }
}

/// Returns `(core, conjugator)` with `w = conjugator · core · conjugator⁻¹`
/// and `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> Result<(Word, Word), WordError> {
    let (core, mut conj) = strip_inverse_ends(w)?;
    let n = core.len();
    if n >= 2 && core[0].generator == core[n - 1].generator {
        // core = y V y  =  y · (V y²) · y⁻¹
        let y = core[0];
        let mut letters = core[1..n - 1].to_vec();
        letters.push(y.merge(y).expect("y² is never trivial"));
        conj.push(y);
        return Ok((Word::from_letters(letters), Word::from_letters(conj)));
    }
    Ok((Word::from_letters(core), Word::from_letters(conj)))
}

/// Like [`cyclic_reduce`] but only strips cancelling end pairs, leaving a
/// weakly cyclically reduced core (`x0 x1 x0` is returned unchanged).
pub fn weak_cyclic_reduce(w: &Word) -> Result<(Word, Word), WordError> {
    let (core, conj) = strip_inverse_ends(w)?;
    Ok((Word::from_letters(core), Word::from_letters(conj)))
}

fn strip_inverse_ends(w: &Word) -> Result<(Vec<Letter>, Vec<Letter>), WordError> {
    if !w.reduced {
        return Err(WordError::NotReduced);
    }
    let l = &w.letters;
    let (mut lo, mut hi) = (0, l.len());
    while hi - lo >= 2 && l[lo] == l[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    Ok((l[lo..hi].to_vec(), l[..lo].to_vec()))
}
