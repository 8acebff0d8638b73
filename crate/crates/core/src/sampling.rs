//! Seeded generators for the randomized suites.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{Letter, Word};
use crate::Rational;

/// Deterministic word generator; equal seeds give equal streams.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn letter_on(&mut self, generator: u32) -> Letter {
        Letter::new(generator, self.rng.random_range(1..=2)).expect("exponent in range")
    }

    /// A uniformly random reduced word of length `len` over `x_0 … x_{gens-1}`.
    /// Needs `gens >= 2` for lengths above one.
    pub fn reduced_word(&mut self, len: usize, gens: u32) -> Word {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let g = self.rng.random_range(0..gens);
            if letters.last().is_some_and(|l| l.generator() == g) {
                continue;
            }
            let l = self.letter_on(g);
            letters.push(l);
        }
        Word::from_letters(letters)
    }

    /// An ε-dense reduced word of length `len` built to resemble the
    /// sources: it copies runs of source letters and inserts fresh
    /// generators (indices from `fresh_from` upwards, each used once)
    /// whenever copying would break density.
    pub fn dense_word(&mut self, sources: &[Word], epsilon: Rational, len: usize, fresh_from: u32) -> Word {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        let mut fresh = fresh_from;
        let mut cursor: Option<(usize, usize)> = None;
        while letters.len() < len {
            let (src, pos) = match cursor {
                Some(c) if self.rng.random_range(0..16) != 0 => c,
                _ => {
                    let s = self.rng.random_range(0..sources.len());
                    (s, self.rng.random_range(0..sources[s].len()))
                }
            };
            let source = sources[src].letters();
            let candidate = source[pos % source.len()];
            cursor = Some((src, (pos + 1) % source.len()));
            let reduced = letters.last().map_or(true, |l| l.generator() != candidate.generator());
            letters.push(candidate);
            if reduced && suffixes_dense(&letters, epsilon) {
                continue;
            }
            letters.pop();
            letters.push(Letter::new(fresh, self.rng.random_range(1..=2)).unwrap());
            fresh += 1;
            cursor = None;
        }
        Word::from_letters(letters)
    }

    /// `∏ u_i R_i^{±1} u_i⁻¹` for `1..=max_factors` factors, each `u_i` a
    /// random reduced word of length `≤ max_conjugator` over `conj_gens`
    /// generators. Unreduced.
    pub fn conjugate_product(&mut self, relators: &[Word], max_factors: usize, max_conjugator: usize, conj_gens: u32) -> Word {
        let factors = self.rng.random_range(1..=max_factors);
        let mut out = Word::empty();
        for _ in 0..factors {
            let r = &relators[self.rng.random_range(0..relators.len())];
            let r = if self.rng.random_bool(0.5) { r.inverse() } else { r.clone() };
            let ulen = self.rng.random_range(0..=max_conjugator);
            let u = self.reduced_word(ulen, conj_gens);
            out = out.concat(&u).concat(&r).concat(&u.inverse());
        }
        out
    }
}

/// Whether every window ending at the last letter has at least `ε·n`
/// distinct generators.
fn suffixes_dense(letters: &[Letter], epsilon: Rational) -> bool {
    let mut seen = HashSet::new();
    for (n, l) in letters.iter().rev().enumerate() {
        seen.insert(l.generator());
        if !epsilon.le_ratio_of(seen.len() as u64, n as u64 + 1) {
            return false;
        }
    }
    true
}
