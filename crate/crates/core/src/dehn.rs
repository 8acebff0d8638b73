//! Dehn reduction, Greendlinger certificates and small probes built on
//! top of them.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::cancellation::{find_relator_subword, Certificate, SubwordMatch};
use crate::family::RelatorFamily;
use crate::index::MemberLabel;
use crate::word::{reduce, Letter, Word};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DehnError {
    #[error("certificate does not establish C'(1/6): {0}")]
    Uncertified(String),
    #[error("certificate was computed for another family")]
    FingerprintMismatch,
    #[error("word is empty")]
    EmptyWord,
    #[error("word is not reduced")]
    NotReduced,
    #[error("verdict for {0} is limited by the truncation")]
    TruncationLimited(Word),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Trivial,
    /// No relator missing from the truncation could shorten the final word.
    NontrivialSound,
    NontrivialTruncationLimited,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Trivial => "trivial",
            Status::NontrivialSound => "nontrivial_sound",
            Status::NontrivialTruncationLimited => "nontrivial_truncation_limited",
        })
    }
}

/// One replacement `S -> A⁻¹ B⁻¹` for a member `R = A S B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub position: usize,
    pub relator: MemberLabel,
    pub subword_len: usize,
    pub relator_len: usize,
    pub new_len: usize,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pos={} relator={} |S|/<|R|> {}/{} -> len={}",
            self.position, self.relator, self.subword_len, self.relator_len, self.new_len
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub input_len: usize,
    pub final_word: Word,
    pub trace: Vec<Step>,
    /// The first majority subword found, if any.
    pub certificate: Option<SubwordMatch>,
}

/// Dehn reduction over a family that carries a C'(1/6)-or-better
/// certificate.
pub struct DehnSolver<'a> {
    family: &'a RelatorFamily,
    lambda: Rational,
}

impl<'a> DehnSolver<'a> {
    pub fn new(family: &'a RelatorFamily, certificate: &Certificate) -> Result<DehnSolver<'a>, DehnError> {
        if certificate.fingerprint != family.fingerprint() {
            return Err(DehnError::FingerprintMismatch);
        }
        if !certificate.pass {
            return Err(DehnError::Uncertified(format!("certificate at λ = {} fails", certificate.lambda)));
        }
        if certificate.lambda > Rational::new(1, 6) {
            return Err(DehnError::Uncertified(format!("λ = {} exceeds 1/6", certificate.lambda)));
        }
        Ok(DehnSolver { family, lambda: certificate.lambda })
    }

    pub fn family(&self) -> &RelatorFamily {
        self.family
    }

    pub fn lambda(&self) -> Rational {
        self.lambda
    }

    pub fn dehn_reduce(&self, w: &Word) -> Verdict {
        let half = Rational::new(1, 2);
        let mut cur = reduce(w);
        let mut trace = Vec::new();
        let mut certificate = None;
        while let Some(m) = find_relator_subword(&cur, self.family, half) {
            let member = self.family.member_word(&m.member).expect("label from the family");
            let a = member.subword(0, m.offset_in_member);
            let b = member.subword(m.offset_in_member + m.len, member.len() - m.offset_in_member - m.len);
            let replacement = a.inverse().concat(&b.inverse());
            let next = cur
                .subword(0, m.start)
                .concat(&replacement)
                .concat(&cur.subword(m.start + m.len, cur.len() - m.start - m.len));
            let next = reduce(&next);
            debug_assert!(next.len() < cur.len());
            trace.push(Step {
                position: m.start,
                relator: m.member,
                subword_len: m.len,
                relator_len: m.member_len,
                new_len: next.len(),
            });
            certificate.get_or_insert(m);
            cur = next;
        }
        let status = if cur.is_empty() {
            Status::Trivial
        } else if self.family.excluded_min_length().map_or(true, |e| 2 * cur.len() as u64 <= e) {
            Status::NontrivialSound
        } else {
            Status::NontrivialTruncationLimited
        };
        Verdict { status, input_len: w.len(), final_word: cur, trace, certificate }
    }

    /// A subword of `w` exceeding `1 - 3λ` of a member, at the solver's λ.
    pub fn greendlinger_certificate(&self, w: &Word) -> Result<Option<SubwordMatch>, DehnError> {
        greendlinger_certificate(w, self.family, self.lambda.greendlinger_bound())
    }

    /// Least `n ∈ {1, 2, 3}` with `x_i^n` trivial.
    pub fn order_probe(&self, i: u32) -> u32 {
        (1..=3)
            .find(|&n| {
                let w = Word::unreduced(vec![Letter::gen(i); n as usize]);
                self.dehn_reduce(&w).status == Status::Trivial
            })
            .expect("x_i^3 = 1")
    }

    /// Whether `z x_i z⁻¹ x_i²` is trivial.
    pub fn commutes_probe(&self, z: &Word, i: u32) -> Result<bool, DehnError> {
        let w = z.concat(&Word::letter(i, 1)).concat(&z.inverse()).concat(&Word::letter(i, 2));
        let v = self.dehn_reduce(&w);
        match v.status {
            Status::Trivial => Ok(true),
            Status::NontrivialSound => Ok(false),
            Status::NontrivialTruncationLimited => Err(DehnError::TruncationLimited(w)),
        }
    }

    /// Checks `u x_i u⁻¹ x_j²` for every `i ≠ j ≤ max_gen` and every reduced
    /// `u` of length `≤ max_conjugator` over generators `0..=max_gen`.
    pub fn conjugacy_probe(&self, max_gen: u32, max_conjugator: usize) -> ConjugacyReport {
        let conjugators = reduced_words(max_gen, max_conjugator);
        let cases: Vec<(u32, u32)> =
            (0..=max_gen).flat_map(|i| (0..=max_gen).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let failures: Vec<ConjugacyFailure> = cases
            .par_iter()
            .flat_map_iter(|&(i, j)| {
                conjugators.iter().filter_map(move |u| {
                    let w = u.concat(&Word::letter(i, 1)).concat(&u.inverse()).concat(&Word::letter(j, 2));
                    let v = self.dehn_reduce(&w);
                    (v.status != Status::NontrivialSound).then(|| ConjugacyFailure { i, j, conjugator: u.clone(), status: v.status })
                })
            })
            .collect();
        ConjugacyReport {
            max_gen,
            max_conjugator,
            conjugators: conjugators.len(),
            checked: conjugators.len() * cases.len(),
            pass: failures.is_empty(),
            failures,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyFailure {
    pub i: u32,
    pub j: u32,
    pub conjugator: Word,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyReport {
    pub max_gen: u32,
    pub max_conjugator: usize,
    pub conjugators: usize,
    pub checked: usize,
    pub pass: bool,
    pub failures: Vec<ConjugacyFailure>,
}

/// All reduced words of length `≤ max_len` over generators `0..=max_gen`,
/// shortest first.
pub fn reduced_words(max_gen: u32, max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..=max_gen).flat_map(|g| [Letter::gen(g), Letter::gen_inv(g)]).collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.letters().last().is_some_and(|x| x.generator() == l.generator()) {
                    continue;
                }
                let mut v = w.letters().to_vec();
                v.push(l);
                next.push(Word::from_letters(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A subword of the reduced, nonempty `w` that is more than `bound` of
/// some member. `None` means the hypotheses of Greendlinger's lemma fail
/// for `w` (it is not trivial, or the family is not small-cancellation).
pub fn greendlinger_certificate(w: &Word, family: &RelatorFamily, bound: Rational) -> Result<Option<SubwordMatch>, DehnError> {
    if w.is_empty() {
        return Err(DehnError::EmptyWord);
    }
    if reduce(w) != *w {
        return Err(DehnError::NotReduced);
    }
    Ok(find_relator_subword(w, family, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cancellation::verify_cprime;
    use crate::word::parse_word;

    fn w(s: &str) -> Word {
        reduce(&parse_word(s).unwrap())
    }

    #[test]
    fn refuses_without_certificate() {
        let short = RelatorFamily::from_words(vec![w("x0 x1 x2")]).unwrap();
        let cert = verify_cprime(&short, Rational::new(1, 6)).unwrap();
        assert!(matches!(DehnSolver::new(&short, &cert), Err(DehnError::Uncertified(_))));

        let f = RelatorFamily::from_words(vec![w("x0 x1 x2 x3 x4 x5 x6 x7")]).unwrap();
        assert!(matches!(DehnSolver::new(&f, &cert), Err(DehnError::FingerprintMismatch)));
        let loose = verify_cprime(&f, Rational::new(1, 5)).unwrap();
        assert!(matches!(DehnSolver::new(&f, &loose), Err(DehnError::Uncertified(_))));
    }

    #[test]
    fn reduces_relator_and_free_cancellation() {
        let r = w("x0 x1 x2 x3 x4 x5 x6 x7");
        let f = RelatorFamily::from_words(vec![r.clone()]).unwrap();
        let cert = verify_cprime(&f, Rational::new(1, 6)).unwrap();
        assert!(cert.pass, "{cert:?}");
        let s = DehnSolver::new(&f, &cert).unwrap();
        let v = s.dehn_reduce(&r);
        assert_eq!(v.status, Status::Trivial);
        assert_eq!(v.trace.len(), 1);
        assert_eq!(s.dehn_reduce(&parse_word("x0 x0^2").unwrap()).status, Status::Trivial);

        // Five letters of eight is replaced by the inverse of the other three.
        let v = s.dehn_reduce(&w("x9 x0 x1 x2 x3 x4 x9"));
        assert_eq!(v.status, Status::NontrivialSound);
        assert_eq!(v.final_word, w("x9 x7^2 x6^2 x5^2 x9"));
        assert_eq!(v.trace[0].to_string(), "pos=1 relator=0@0 |S|/<|R|> 5/8 -> len=5");

        assert_eq!(s.order_probe(3), 3);
        assert!(s.commutes_probe(&w("x0"), 0).unwrap());
        assert!(!s.commutes_probe(&w("x1"), 0).unwrap());
        assert!(s.commutes_probe(&Word::empty(), 0).unwrap());
        assert!(matches!(s.greendlinger_certificate(&Word::empty()), Err(DehnError::EmptyWord)));
    }

    #[test]
    fn reduced_word_enumeration() {
        // 1 + 2g + 2g·2(g-1) for g generators and length 2.
        assert_eq!(reduced_words(2, 2).len(), 1 + 6 + 6 * 4);
        assert!(reduced_words(3, 3).iter().all(|u| reduce(u) == *u));
    }
}
