//! Pieces, the C'(λ) certificate, and long-subword search against the
//! symmetrized closure.
//!
//! Members are sorted in canonical order once per family. For a member
//! `U` with literal common prefix `ℓ` against a neighbour `V`, the
//! longest piece is `ℓ + 1` when both continue with letters on the same
//! generator (a semi-reduced seam consolidates `x^e · x^(f-e) = x^f`) and
//! `ℓ` otherwise. The maximum over all other members is attained at one of
//! the two neighbours in sorted order.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::family::RelatorFamily;
use crate::index::suffix_array::{inverse_suffix_array, suffix_array};
use crate::index::{inverse_code, same_generator, FamilyIndex, MemberId, MemberLabel};
use crate::word::Word;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CancellationError {
    #[error("host word is not a member of the symmetrized family")]
    HostNotInFamily,
    #[error("lambda {0} is outside (0, 1]")]
    LambdaOutOfRange(Rational),
}

/// Members in canonical order with the longest piece of each.
pub(crate) struct PieceTable {
    members: Vec<MemberId>,
    piece: Vec<u32>,
    partner: Vec<u32>,
    consolidated: Vec<bool>,
}

impl PieceTable {
    pub(crate) fn build(index: &FamilyIndex) -> PieceTable {
        let text = &index.text;
        log::info!("sorting symmetrized members over {} symbols", text.len());
        let rank = inverse_suffix_array(&suffix_array(text));
        let mut keyed: Vec<(u32, u32, u32, MemberId)> = index
            .all_members()
            .into_par_iter()
            .map(|m| {
                let b = index.block(m);
                let p = b.start + m.offset as usize;
                if m.split {
                    (inverse_code(text[p + b.len - 1]), rank[p], b.len as u32 + 1, m)
                } else {
                    (text[p], rank[p + 1], b.len as u32, m)
                }
            })
            .collect();
        drop(rank);
        keyed.par_sort_unstable();
        let mut order: Vec<MemberId> = keyed.into_iter().map(|k| k.3).collect();

        // Suffix order can disagree with word order only past a member's
        // end, i.e. between members with a common prefix of full length.
        let mut lcp = adjacent_lcp(index, &order);
        let sorted = (1..order.len()).into_par_iter().all(|i| {
            let l = lcp[i] as usize;
            index.member_code_at(order[i - 1], l) <= index.member_code_at(order[i], l)
        });
        if !sorted {
            log::debug!("suffix keys out of word order; re-sorting exactly");
            order.par_sort_by(|&a, &b| index.compare(a, b));
            lcp = adjacent_lcp(index, &order);
        }

        let mut members = Vec::with_capacity(order.len());
        let mut bound = Vec::with_capacity(order.len() + 1);
        bound.push(0u32);
        for (i, &m) in order.iter().enumerate() {
            let dup = i > 0 && {
                let l = lcp[i] as usize;
                l == index.member_len(m) && l == index.member_len(order[i - 1])
            };
            if !dup {
                if !members.is_empty() {
                    bound.push(lcp[i]);
                }
                members.push(m);
            }
        }
        bound.push(0);
        drop(lcp);
        drop(order);

        let n = members.len();
        let best: Vec<(u32, u32, bool)> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut out = (0u32, u32::MAX, false);
                // Prefer the predecessor on ties.
                for (nb, l) in [(j.checked_sub(1), bound[j]), ((j + 1 < n).then_some(j + 1), bound[j + 1])] {
                    let Some(nb) = nb else { continue };
                    let ext = match (
                        index.member_code_at(members[j], l as usize),
                        index.member_code_at(members[nb], l as usize),
                    ) {
                        (Some(a), Some(b)) => same_generator(a, b),
                        _ => false,
                    };
                    let len = l + ext as u32;
                    if len > out.0 || out.1 == u32::MAX {
                        out = (len, nb as u32, ext);
                    }
                }
                out
            })
            .collect();
        let (mut piece, mut partner, mut consolidated) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (p, q, c) in best {
            piece.push(p);
            partner.push(q);
            consolidated.push(c);
        }
        PieceTable { members, piece, partner, consolidated }
    }

    pub(crate) fn len(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn members(&self) -> &[MemberId] {
        &self.members
    }

    fn position(&self, index: &FamilyIndex, w: &Word) -> Option<usize> {
        let codes = index.codes(w);
        self.members
            .binary_search_by(|&m| index.compare_word(&codes, m).reverse())
            .ok()
    }

    pub(crate) fn find(&self, index: &FamilyIndex, w: &Word) -> Option<MemberId> {
        self.position(index, w).map(|i| self.members[i])
    }

    fn witness(&self, index: &FamilyIndex, j: usize) -> Option<PieceWitness> {
        let len = self.piece[j] as usize;
        if len == 0 || self.partner[j] == u32::MAX {
            return None;
        }
        let host_id = self.members[j];
        let other_id = self.members[self.partner[j] as usize];
        let host = index.member_word(host_id);
        let piece = host.subword(0, len);
        Some(PieceWitness {
            ratio: Rational::ratio(len, host.len()),
            piece,
            other: index.member_word(other_id),
            host,
            host_label: Some(index.member_label(host_id)),
            other_label: Some(index.member_label(other_id)),
            seam_consolidated: self.consolidated[j],
        })
    }
}

fn adjacent_lcp(index: &FamilyIndex, order: &[MemberId]) -> Vec<u32> {
    (0..order.len())
        .into_par_iter()
        .map(|i| if i == 0 { 0 } else { index.lcp(order[i - 1], order[i]) as u32 })
        .collect()
}

/// A longest piece of `host` against some other member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceWitness {
    pub piece: Word,
    pub host: Word,
    pub other: Word,
    pub host_label: Option<MemberLabel>,
    pub other_label: Option<MemberLabel>,
    /// `|piece| / |host|`.
    pub ratio: Rational,
    /// The piece's last letter differs from `other`'s letter at that
    /// position and only matches after consolidation.
    pub seam_consolidated: bool,
}

impl Serialize for PieceWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PieceWitness", 8)?;
        st.serialize_field("host", &self.host_label)?;
        st.serialize_field("host_length", &self.host.len())?;
        st.serialize_field("other", &self.other_label)?;
        st.serialize_field("other_length", &self.other.len())?;
        st.serialize_field("piece_length", &self.piece.len())?;
        st.serialize_field("ratio", &self.ratio)?;
        st.serialize_field("seam_consolidated", &self.seam_consolidated)?;
        st.serialize_field("piece", &self.piece)?;
        st.end()
    }
}

/// The longest piece of `host`, or `None` if it shares no nonempty piece
/// with any other member.
pub fn max_piece(host: &Word, family: &RelatorFamily) -> Result<Option<PieceWitness>, CancellationError> {
    let index = family.index();
    let table = family.pieces();
    let j = table.position(index, host).ok_or(CancellationError::HostNotInFamily)?;
    Ok(table.witness(index, j))
}

/// Longest piece length of every member, in canonical order.
pub fn piece_lengths(family: &RelatorFamily) -> Vec<(Word, usize)> {
    let index = family.index();
    let table = family.pieces();
    table.members.iter().zip(&table.piece).map(|(&m, &p)| (index.member_word(m), p as usize)).collect()
}

/// Outcome of [`verify_cprime`].
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub lambda: Rational,
    pub pass: bool,
    /// Every piece ratio is below `lambda`.
    pub piece_condition: bool,
    /// Every relator is longer than `1/lambda`.
    pub length_condition: bool,
    /// Largest `|piece| / |host|` over all members.
    pub max_piece_ratio: Rational,
    pub max_piece_length: usize,
    pub min_length: usize,
    pub base_relators: usize,
    pub members: usize,
    /// Truncation scope: the largest `k` and the prefixes used.
    pub k_max: Option<usize>,
    pub prefixes: Vec<String>,
    pub fingerprint: String,
    /// Number of members attaining `max_piece_ratio`.
    pub extremal_hosts: usize,
    pub witnesses: Vec<PieceWitness>,
}

const MAX_WITNESSES: usize = 8;

/// Checks C'(λ) over the whole symmetrized closure.
pub fn verify_cprime(family: &RelatorFamily, lambda: Rational) -> Result<Certificate, CancellationError> {
    if lambda.is_zero() || lambda > Rational::ONE {
        return Err(CancellationError::LambdaOutOfRange(lambda));
    }
    let index = family.index();
    let table = family.pieces();
    let ratio_cmp = |a: usize, b: usize| {
        let (pa, la) = (table.piece[a] as u128, index.member_len(table.members[a]) as u128);
        let (pb, lb) = (table.piece[b] as u128, index.member_len(table.members[b]) as u128);
        (pa * lb).cmp(&(pb * la))
    };
    let best = (0..table.len()).reduce(|a, b| if ratio_cmp(b, a) == Ordering::Greater { b } else { a }).expect("nonempty family");
    let max_piece_length = table.piece[best] as usize;
    let max_piece_ratio = Rational::ratio(max_piece_length, index.member_len(table.members[best]));
    let extremal: Vec<usize> = (0..table.len()).filter(|&j| ratio_cmp(j, best) == Ordering::Equal).collect();
    let witnesses = extremal.iter().take(MAX_WITNESSES).filter_map(|&j| table.witness(index, j)).collect();

    let min_length = family.min_length();
    let piece_condition = max_piece_ratio < lambda;
    // |R| > 1/λ  <=>  λ·|R| > 1
    let length_condition = lambda.numer() as u128 * min_length as u128 > lambda.denom() as u128;
    let prefixes = family
        .base()
        .iter()
        .filter_map(|b| match &b.source {
            crate::family::Source::Generated { prefix, .. } => Some(prefix.to_string()),
            crate::family::Source::Supplied => None,
        })
        .collect();
    Ok(Certificate {
        lambda,
        pass: piece_condition && length_condition,
        piece_condition,
        length_condition,
        max_piece_ratio,
        max_piece_length,
        min_length,
        base_relators: family.base().len(),
        members: table.len(),
        k_max: family.params().map(|p| p.k_max),
        prefixes,
        fingerprint: family.fingerprint(),
        extremal_hosts: extremal.len(),
        witnesses,
    })
}

/// A subword of the input that is also a subword of a family member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubwordMatch {
    /// Position of the subword in the searched word.
    pub start: usize,
    pub len: usize,
    pub member: MemberLabel,
    pub member_len: usize,
    /// Position of the subword inside the member.
    pub offset_in_member: usize,
    /// `len / member_len`.
    pub ratio: Rational,
    #[serde(skip)]
    pub subword: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    /// Subword of a rotation.
    Literal,
    /// Prefix of a split conjugate `y V y`.
    SplitPrefix,
    /// Suffix of a split conjugate.
    SplitSuffix,
    /// A whole split conjugate.
    WholeSplit,
}

/// Leftmost, then longest, subword `S` of `w` with `|S| > threshold·|R|`
/// for a member `R` containing `S`.
pub fn find_relator_subword(w: &Word, family: &RelatorFamily, threshold: Rational) -> Option<SubwordMatch> {
    let n = w.len();
    if n == 0 {
        return None;
    }
    let index = family.index();
    let sam = index.sam();
    let codes = index.codes(w);
    let classes = index.class_lengths.len();
    let ms: Vec<Vec<u32>> = (0..classes).map(|c| sam.longest_matches_from(&codes, 1 << c)).collect();
    let t = threshold;
    let in_class = |state: u32, bit: u64| sam.mask(state) & bit != 0;

    for s in 0..n {
        let Some(first) = codes[s] else { continue };
        // (length, shape, class)
        let mut best: Option<(usize, Shape, usize)> = None;
        let better = |best: &Option<(usize, Shape, usize)>, len: usize| best.map_or(true, |b| len > b.0);
        for (c, row) in ms.iter().enumerate().take(classes) {
            let m = index.class_lengths[c];
            let bit = 1u64 << c;
            let here = row[s] as usize;
            let next = if s + 1 < n { row[s + 1] as usize } else { 0 };

            let d = here.min(m);
            if t.lt_ratio_of(d as u64, m as u64) && better(&best, d) {
                best = Some((d, Shape::Literal, c));
            }

            // Prefix `y V[..d-1]` reads `c V[..d-1]` in a rotation, `c = y⁻¹`.
            let reach = (next + 1).min(m);
            let potential = if reach == m { m + 1 } else { reach };
            if t.lt_ratio_of(potential as u64, m as u64 + 1) && better(&best, potential) {
                if let Some(mut st) = sam.step(sam.root(), inverse_code(first)).filter(|&x| in_class(x, bit)) {
                    let mut d = 1;
                    while d < m && s + d < n {
                        match codes[s + d].and_then(|x| sam.step(st, x)).filter(|&x| in_class(x, bit)) {
                            Some(x) => {
                                st = x;
                                d += 1;
                            }
                            None => break,
                        }
                    }
                    if d == m && s + m < n && codes[s + m] == Some(first) && better(&best, m + 1) {
                        best = Some((m + 1, Shape::WholeSplit, c));
                    } else if t.lt_ratio_of(d as u64, m as u64 + 1) && better(&best, d) {
                        best = Some((d, Shape::SplitPrefix, c));
                    }
                }
            }

            // Suffix `V[m-1-d..] y` reads `V[m-1-d..] c` in a rotation.
            let reach = here.min(m - 1);
            if reach >= 1 && t.lt_ratio_of(reach as u64 + 1, m as u64 + 1) && better(&best, reach + 1) {
                let mut states = Vec::with_capacity(reach);
                let mut st = sam.root();
                for i in 0..reach {
                    st = sam.step(st, codes[s + i].expect("matched")).expect("matched");
                    states.push(st);
                }
                for d in (1..=reach).rev() {
                    if !(t.lt_ratio_of(d as u64 + 1, m as u64 + 1) && better(&best, d + 1)) {
                        break;
                    }
                    let Some(y) = codes.get(s + d).copied().flatten() else { continue };
                    if sam.step(states[d - 1], inverse_code(y)).is_some_and(|x| in_class(x, bit)) {
                        best = Some((d + 1, Shape::SplitSuffix, c));
                        break;
                    }
                }
            }
        }
        if let Some((len, shape, class)) = best {
            return Some(locate_match(index, w, &codes, s, len, shape, class));
        }
    }
    None
}

fn locate_match(
    index: &FamilyIndex,
    w: &Word,
    codes: &[Option<u32>],
    s: usize,
    len: usize,
    shape: Shape,
    class: usize,
) -> SubwordMatch {
    let m = index.class_lengths[class];
    let lit = |a: usize, b: usize| codes[a..b].iter().map(|c| c.expect("matched"));
    let first = codes[s].expect("matched");
    let pattern: Vec<u32> = match shape {
        Shape::Literal => lit(s, s + len).collect(),
        Shape::SplitPrefix => std::iter::once(inverse_code(first)).chain(lit(s + 1, s + len)).collect(),
        Shape::SplitSuffix => lit(s, s + len - 1).chain(std::iter::once(inverse_code(codes[s + len - 1].unwrap()))).collect(),
        Shape::WholeSplit => std::iter::once(inverse_code(first)).chain(lit(s + 1, s + m)).collect(),
    };
    let (block, p) = index
        .class_blocks(class)
        .find_map(|(bi, b)| find_subslice(&index.text[b.start..b.start + 2 * b.len], &pattern).map(|p| (bi, p % m)))
        .expect("matched subword occurs in its class");
    let (offset, split, offset_in_member) = match shape {
        Shape::Literal => (p, false, 0),
        Shape::SplitPrefix | Shape::WholeSplit => ((p + 1) % m, true, 0),
        Shape::SplitSuffix => ((p + len) % m, true, m + 1 - len),
    };
    let id = MemberId { block: block as u32, offset: offset as u32, split };
    let member_len = index.member_len(id);
    SubwordMatch {
        start: s,
        len,
        member: index.member_label(id),
        member_len,
        offset_in_member,
        ratio: Rational::ratio(len, member_len),
        subword: w.subword(s, len),
    }
}

/// First occurrence of `needle` in `hay` (Knuth–Morris–Pratt).
fn find_subslice(hay: &[u32], needle: &[u32]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    let mut fail = vec![0usize; needle.len()];
    let mut k = 0;
    for i in 1..needle.len() {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut k = 0;
    for (i, &c) in hay.iter().enumerate() {
        while k > 0 && c != needle[k] {
            k = fail[k - 1];
        }
        if c == needle[k] {
            k += 1;
        }
        if k == needle.len() {
            return Some(i + 1 - k);
        }
    }
    None
}
