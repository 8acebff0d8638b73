//! The relators `w_{σ,k}`, symmetrized closures and the both-exponent
//! window scan.
//!
//! For an injective prefix `(s_0, …, s_{k-1})` and repetition bound `N`,
//!
//! ```text
//! w = ∏_{n=1..N} (x_{s_0} x_{s_{k-1}}^2) (x_{s_0} x_{s_1} ⋯ x_{s_{k-1}})^n
//! ```
//!
//! which has length `2N + k·N(N+1)/2` and is reduced and cyclically
//! reduced for every `k >= 2`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::word::{Letter, Word};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelatorError {
    #[error("prefix {0:?} is not injective")]
    NonInjective(Vec<u32>),
    #[error("k = {0} is below the minimum of 2")]
    KTooSmall(usize),
    #[error("repetition bound must be at least 1")]
    ZeroRepetitions,
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("base word {0} is not cyclically reduced")]
    NotCyclicallyReduced(Word),
    #[error("base word {0} is a proper power")]
    ProperPower(Word),
    #[error("window ratio {0} is outside (0, 1]")]
    RatioOutOfRange(Rational),
}

/// Parameters of a truncated relator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ConstructionParams {
    pub n_rep: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub lambda_target: Rational,
}

impl ConstructionParams {
    pub const DEFAULT_N_REP: usize = 80;

    /// `n_rep = 80`, `k ∈ [2, k_max]`, `λ = 1/10`.
    pub fn standard(k_max: usize) -> ConstructionParams {
        ConstructionParams { n_rep: Self::DEFAULT_N_REP, k_min: 2, k_max, lambda_target: Rational::new(1, 10) }
    }

    pub fn with_n_rep(self, n_rep: usize) -> ConstructionParams {
        ConstructionParams { n_rep, ..self }
    }

    pub fn validate(&self) -> Result<(), RelatorError> {
        if self.n_rep == 0 {
            return Err(RelatorError::ZeroRepetitions);
        }
        if self.k_min < 2 {
            return Err(RelatorError::KTooSmall(self.k_min));
        }
        if self.k_max < self.k_min {
            return Err(RelatorError::InvalidParams(format!("k_max {} < k_min {}", self.k_max, self.k_min)));
        }
        if self.lambda_target.is_zero() || self.lambda_target >= Rational::ONE {
            return Err(RelatorError::InvalidParams(format!("lambda {} outside (0, 1)", self.lambda_target)));
        }
        Ok(())
    }
}

/// `|w_{σ,k}| = 2·n_rep + k·n_rep(n_rep+1)/2`.
pub fn relator_length(k: usize, n_rep: usize) -> u64 {
    let (k, n) = (k as u64, n_rep as u64);
    2 * n + k * n * (n + 1) / 2
}

/// Expands `w_{σ,k}` for the prefix `(σ(0), …, σ(k-1))`.
pub fn make_relator(prefix: &[u32], n_rep: usize) -> Result<Word, RelatorError> {
    let k = prefix.len();
    if k < 2 {
        return Err(RelatorError::KTooSmall(k));
    }
    if n_rep == 0 {
        return Err(RelatorError::ZeroRepetitions);
    }
    let distinct: BTreeSet<u32> = prefix.iter().copied().collect();
    if distinct.len() != k {
        return Err(RelatorError::NonInjective(prefix.to_vec()));
    }
    let first = Letter::gen(prefix[0]);
    let last = prefix[k - 1];
    let block: Vec<Letter> = prefix.iter().map(|&g| Letter::gen(g)).collect();
    let mut letters = Vec::with_capacity(relator_length(k, n_rep) as usize);
    for n in 1..=n_rep {
        letters.push(first);
        letters.push(Letter::gen_inv(last));
        for _ in 0..n {
            letters.extend_from_slice(&block);
        }
    }
    let w = Word::from_letters(letters);
    debug_assert!(w.is_cyclically_reduced());
    Ok(w)
}

/// The split conjugate `y V y` of a rotation `V c`, where `y² = c`.
///
/// Since `c = y·y` in ℤ/3, `y V y = y (V c) y⁻¹` is a weakly cyclically
/// reduced conjugate that is not cyclically reduced.
pub(crate) fn split_of_rotation(rotation: &[Letter]) -> Option<Vec<Letter>> {
    let m = rotation.len();
    if m < 2 {
        return None;
    }
    let y = rotation[m - 1].inverse();
    let mut out = Vec::with_capacity(m + 1);
    out.push(y);
    out.extend_from_slice(&rotation[..m - 1]);
    out.push(y);
    Some(out)
}

pub(crate) fn check_base_word(w: &Word) -> Result<(), RelatorError> {
    if w.is_empty() || !w.is_cyclically_reduced() {
        return Err(RelatorError::NotCyclicallyReduced(w.clone()));
    }
    if w.is_proper_power() {
        return Err(RelatorError::ProperPower(w.clone()));
    }
    Ok(())
}

/// All weakly cyclically reduced conjugates of each base word and its
/// inverse: every rotation, plus the split conjugate of every rotation.
/// Sorted and deduplicated.
pub fn symmetrize(base: &[Word]) -> Result<Vec<Word>, RelatorError> {
    let mut out = BTreeSet::new();
    for w in base {
        check_base_word(w)?;
        for oriented in [w.clone(), w.inverse()] {
            for r in 0..oriented.len() {
                let rot = oriented.rotate(r);
                if let Some(split) = split_of_rotation(rot.letters()) {
                    out.insert(Word::from_letters(split));
                }
                out.insert(rot);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Both-exponent generators in one cyclic window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub offset: usize,
    pub both_exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub word_length: usize,
    pub window_ratio: Rational,
    pub window_length: usize,
    /// Generator every window is expected to report.
    pub expected: u32,
    /// Windows are read around the cyclic word, one per start offset.
    pub scope: &'static str,
    pub pass: bool,
    pub failing_windows: usize,
    pub windows: Vec<WindowReport>,
}

/// Scans every cyclic window of length `⌈ratio·|base|⌉` and records which
/// generators occur in it with both exponents. The expected generator is
/// that of the last letter, `x_{σ(k-1)}` for a generated relator.
pub fn unique_exponent_scan(base: &Word, window_ratio: Rational) -> Result<ScanReport, RelatorError> {
    let expected = base
        .letters()
        .last()
        .map(|l| l.generator())
        .ok_or_else(|| RelatorError::NotCyclicallyReduced(base.clone()))?;
    unique_exponent_scan_expecting(base, window_ratio, expected)
}

pub fn unique_exponent_scan_expecting(
    base: &Word,
    window_ratio: Rational,
    expected: u32,
) -> Result<ScanReport, RelatorError> {
    if window_ratio.is_zero() || window_ratio > Rational::ONE {
        return Err(RelatorError::RatioOutOfRange(window_ratio));
    }
    if base.is_empty() || !base.is_cyclically_reduced() {
        return Err(RelatorError::NotCyclicallyReduced(base.clone()));
    }
    let letters = base.letters();
    let n = letters.len();
    let len = window_ratio.ceil_mul(n as u64) as usize;

    let mut ids: HashMap<u32, usize> = HashMap::new();
    let mut gens: Vec<u32> = Vec::new();
    let dense: Vec<usize> = letters
        .iter()
        .map(|l| {
            *ids.entry(l.generator()).or_insert_with(|| {
                gens.push(l.generator());
                gens.len() - 1
            })
        })
        .collect();
    let mut counts = vec![[0usize; 2]; gens.len()];
    let mut both: BTreeSet<u32> = BTreeSet::new();

    let mut update = |i: usize, add: bool, both: &mut BTreeSet<u32>| {
        let g = dense[i];
        let e = (letters[i].exponent() - 1) as usize;
        if add {
            counts[g][e] += 1;
        } else {
            counts[g][e] -= 1;
        }
        if counts[g][0] > 0 && counts[g][1] > 0 {
            both.insert(gens[g]);
        } else {
            both.remove(&gens[g]);
        }
    };

    for i in 0..len {
        update(i % n, true, &mut both);
    }
    let mut windows = Vec::with_capacity(n);
    let mut failing = 0;
    for s in 0..n {
        if s > 0 {
            update(s - 1, false, &mut both);
            update((s + len - 1) % n, true, &mut both);
        }
        let set: Vec<u32> = both.iter().copied().collect();
        if set != [expected] {
            failing += 1;
        }
        windows.push(WindowReport { offset: s, both_exponents: set });
    }
    Ok(ScanReport {
        word_length: n,
        window_ratio,
        window_length: len,
        expected,
        scope: "all cyclic windows",
        pass: failing == 0,
        failing_windows: failing,
        windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_word, reduce};

    fn w(s: &str) -> Word {
        reduce(&parse_word(s).unwrap())
    }

    /// Direct summation of block lengths `Σ (2 + k·n)`.
    fn length_by_summation(k: usize, n_rep: usize) -> u64 {
        (1..=n_rep).map(|n| (2 + k * n) as u64).sum()
    }

    #[test]
    fn relator_examples() {
        let r = make_relator(&[0, 1], 80).unwrap();
        assert_eq!(r.len(), 6640);
        assert_eq!(r.subword(0, 10), w("x0 x1^2 x0 x1 x0 x1^2 x0 x1 x0 x1"));
        assert_eq!(make_relator(&[5, 9], 1).unwrap(), w("x5 x9^2 x5 x9"));
        assert_eq!(make_relator(&[0, 0], 80), Err(RelatorError::NonInjective(vec![0, 0])));
        assert_eq!(make_relator(&[3], 80), Err(RelatorError::KTooSmall(1)));
        assert_eq!(make_relator(&[0, 1], 0), Err(RelatorError::ZeroRepetitions));
    }

    #[test]
    fn length_formula() {
        assert_eq!(relator_length(2, 80), 6640);
        assert_eq!(relator_length(3, 80), 9880);
        assert_eq!(relator_length(2, 1), 4);
        for k in 2..=12 {
            for n in (1..=10).chain([80]) {
                let prefix: Vec<u32> = (0..k as u32).rev().collect();
                let r = make_relator(&prefix, n).unwrap();
                assert_eq!(r.len() as u64, relator_length(k, n));
                assert_eq!(relator_length(k, n), length_by_summation(k, n));
                assert!(r.is_cyclically_reduced());
            }
        }
    }

    #[test]
    fn symmetrize_small() {
        let s = symmetrize(&[w("x0 x1")]).unwrap();
        let rendered: Vec<String> = s.iter().map(|x| x.render()).collect();
        assert_eq!(
            rendered,
            [
                "x0 x1",
                "x0 x1^2 x0",
                "x0^2 x1 x0^2",
                "x0^2 x1^2",
                "x1 x0",
                "x1 x0^2 x1",
                "x1^2 x0 x1^2",
                "x1^2 x0^2",
            ]
        );
        assert!(symmetrize(&[]).unwrap().is_empty());
        assert!(matches!(symmetrize(&[w("x0 x1 x0")]), Err(RelatorError::NotCyclicallyReduced(_))));
        assert!(matches!(symmetrize(&[w("x0 x1 x0 x1")]), Err(RelatorError::ProperPower(_))));
        for v in &s {
            assert!(v.is_weakly_cyclically_reduced());
            assert!(s.contains(&v.inverse()));
        }
    }

    #[test]
    fn params_validation() {
        assert!(ConstructionParams::standard(6).validate().is_ok());
        assert!(ConstructionParams::standard(1).validate().is_err());
        assert!(ConstructionParams::standard(6).with_n_rep(0).validate().is_err());
        let bad = ConstructionParams { lambda_target: Rational::ONE, ..ConstructionParams::standard(3) };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn scan_small_relator() {
        let r = make_relator(&[0, 1], 80).unwrap();
        let full = unique_exponent_scan(&r, Rational::ONE).unwrap();
        assert_eq!(full.window_length, r.len());
        assert!(full.pass);
        assert!(full.windows.iter().all(|x| x.both_exponents == [1]));

        let low = make_relator(&[0, 1], 4).unwrap();
        let report = unique_exponent_scan(&low, Rational::new(7, 10)).unwrap();
        assert_eq!(report.windows.len(), low.len());
        assert_eq!(report.window_length, 20);
        assert!(unique_exponent_scan(&r, Rational::ZERO).is_err());
        assert!(unique_exponent_scan(&r, Rational::new(11, 10)).is_err());
    }

    #[test]
    fn scan_matches_window_by_window_oracle() {
        let r = make_relator(&[2, 0, 1], 5).unwrap();
        let ratio = Rational::new(1, 3);
        let report = unique_exponent_scan(&r, ratio).unwrap();
        let n = r.len();
        let len = report.window_length;
        for win in &report.windows {
            let mut both = BTreeSet::new();
            let ls: Vec<Letter> = (0..len).map(|i| r.letters()[(win.offset + i) % n]).collect();
            for l in &ls {
                if ls.contains(&l.inverse()) {
                    both.insert(l.generator());
                }
            }
            assert_eq!(win.both_exponents, both.into_iter().collect::<Vec<_>>());
        }
    }
}
