//! Distinct-letter counts, ε-density and cyclic windows.

use std::collections::HashMap;

use crate::word::{Word, WordError};
use crate::Rational;

/// Number of distinct generators occurring in `w`; `x_i` and `x_i^2`
/// count once.
pub fn distinct_letter_count(w: &Word) -> usize {
    let mut gens: Vec<u32> = w.letters().iter().map(|l| l.generator()).collect();
    gens.sort_unstable();
    gens.dedup();
    gens.len()
}

/// Whether every subword of length `n` contains at least `ε·n` distinct
/// generators.
pub fn is_epsilon_dense(w: &Word, epsilon: Rational) -> Result<bool, WordError> {
    if epsilon.is_zero() || epsilon > Rational::ONE {
        return Err(WordError::EpsilonOutOfRange(epsilon));
    }
    let letters = w.letters();
    let n = letters.len();
    // Dense ids keep the per-start scan on a flat table.
    let mut ids: HashMap<u32, usize> = HashMap::new();
    let gens: Vec<usize> = letters
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l.generator()).or_insert(next)
        })
        .collect();
    let mut seen = vec![usize::MAX; ids.len()];
    for start in 0..n {
        let mut distinct = 0u64;
        for (len, &g) in gens[start..].iter().enumerate() {
            if seen[g] != start {
                seen[g] = start;
                distinct += 1;
            }
            if !dense_enough(distinct, len as u64 + 1, epsilon) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn dense_enough(distinct: u64, len: u64, epsilon: Rational) -> bool {
    // distinct >= ε·len
    distinct as u128 * epsilon.denom() as u128 >= epsilon.numer() as u128 * len as u128
}

/// All `|w|` windows of the given length read around the cyclic word, in
/// start-index order.
pub fn cyclic_windows(w: &Word, length: usize) -> Result<CyclicWindows<'_>, WordError> {
    if !w.is_cyclically_reduced() {
        return Err(WordError::NotCyclicallyReduced);
    }
    if length > w.len() {
        return Err(WordError::WindowTooLong { length, word_len: w.len() });
    }
    Ok(CyclicWindows { word: w, length, start: 0 })
}

pub struct CyclicWindows<'a> {
    word: &'a Word,
    length: usize,
    start: usize,
}

impl Iterator for CyclicWindows<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let letters = self.word.letters();
        let n = letters.len();
        if self.start >= n {
            return None;
        }
        let s = self.start;
        self.start += 1;
        Some(Word::from_letters((0..self.length).map(|i| letters[(s + i) % n]).collect()))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.word.len() - self.start;
        (left, Some(left))
    }
}

impl ExactSizeIterator for CyclicWindows<'_> {}
