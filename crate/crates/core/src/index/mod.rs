//! Implicit representation of a symmetrized relator set.
//!
//! Families at n = 80 have millions of symmetrized members, each
//! thousands of letters long, so members are never stored as words.
//! Every base relator `R` contributes two *blocks* to a shared text, one
//! for `R` and one for `R⁻¹`, each written twice (`R R #`). A member is
//! then a rotation (a length-`m` window of a block) or the split
//! conjugate `c⁻¹ V c⁻¹` of a rotation `V c`.

pub mod sam;
pub mod suffix_array;

use std::fmt;
use std::sync::OnceLock;

use crate::word::{Letter, Word};
use sam::SuffixAutomaton;

/// Separator between blocks; never a letter code.
pub(crate) const SEPARATOR: u32 = 0;

/// Dense letter codes ordered like [`Letter`]: `x_i` then `x_i^2`.
#[derive(Debug, Clone)]
pub(crate) struct Alphabet {
    gens: Vec<u32>,
}

impl Alphabet {
    fn new(mut gens: Vec<u32>) -> Alphabet {
        gens.sort_unstable();
        gens.dedup();
        Alphabet { gens }
    }

    pub fn code(&self, l: Letter) -> Option<u32> {
        let r = self.gens.binary_search(&l.generator()).ok()? as u32;
        Some(1 + 2 * r + (l.exponent() as u32 - 1))
    }

    pub fn letter(&self, code: u32) -> Letter {
        debug_assert_ne!(code, SEPARATOR);
        let g = self.gens[((code - 1) / 2) as usize];
        Letter::new(g, ((code - 1) % 2 + 1) as u8).unwrap()
    }
}

pub(crate) fn inverse_code(code: u32) -> u32 {
    if (code - 1) % 2 == 0 {
        code + 1
    } else {
        code - 1
    }
}

pub(crate) fn same_generator(a: u32, b: u32) -> bool {
    (a - 1) / 2 == (b - 1) / 2
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Block {
    /// Offset of `R R` in the text.
    pub start: usize,
    /// `|R|`.
    pub len: usize,
    pub base: usize,
    pub inverted: bool,
    pub class: usize,
}

/// A member of the symmetrized set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberId {
    pub(crate) block: u32,
    pub(crate) offset: u32,
    pub(crate) split: bool,
}

/// One piece of a member's letter sequence.
#[derive(Clone, Copy)]
pub(crate) enum Seg {
    Code(u32),
    Text(usize, usize),
}

pub struct FamilyIndex {
    pub(crate) alphabet: Alphabet,
    pub(crate) text: Vec<u32>,
    pub(crate) blocks: Vec<Block>,
    /// Distinct rotation lengths, ascending; a class is an index here.
    pub(crate) class_lengths: Vec<usize>,
    sam: OnceLock<SuffixAutomaton>,
}

pub const MAX_LENGTH_CLASSES: usize = 64;

impl FamilyIndex {
    /// Base words must be nonempty and cyclically reduced.
    pub(crate) fn build(base: &[Word]) -> FamilyIndex {
        let alphabet = Alphabet::new(base.iter().flat_map(|w| w.letters().iter().map(|l| l.generator())).collect());
        let mut class_lengths: Vec<usize> = base.iter().map(Word::len).collect();
        class_lengths.sort_unstable();
        class_lengths.dedup();
        assert!(class_lengths.len() <= MAX_LENGTH_CLASSES, "too many distinct relator lengths");

        let total: usize = base.iter().map(|w| 2 * (2 * w.len() + 1)).sum();
        let mut text = Vec::with_capacity(total);
        let mut blocks = Vec::with_capacity(2 * base.len());
        for (b, w) in base.iter().enumerate() {
            for (inverted, oriented) in [(false, w.clone()), (true, w.inverse())] {
                let start = text.len();
                let codes: Vec<u32> = oriented.letters().iter().map(|&l| alphabet.code(l).unwrap()).collect();
                text.extend_from_slice(&codes);
                text.extend_from_slice(&codes);
                text.push(SEPARATOR);
                let class = class_lengths.binary_search(&w.len()).unwrap();
                blocks.push(Block { start, len: w.len(), base: b, inverted, class });
            }
        }
        FamilyIndex { alphabet, text, blocks, class_lengths, sam: OnceLock::new() }
    }

    pub(crate) fn sam(&self) -> &SuffixAutomaton {
        self.sam.get_or_init(|| {
            log::info!("building suffix automaton over {} symbols", self.text.len());
            let mut classes = vec![0u64; self.text.len()];
            for b in &self.blocks {
                classes[b.start..b.start + 2 * b.len].iter_mut().for_each(|c| *c = 1 << b.class);
            }
            SuffixAutomaton::build(&self.text, &classes)
        })
    }

    pub(crate) fn codes(&self, w: &Word) -> Vec<Option<u32>> {
        w.letters().iter().map(|&l| self.alphabet.code(l)).collect()
    }

    /// Every member, unsorted and possibly with duplicate words.
    pub(crate) fn all_members(&self) -> Vec<MemberId> {
        let mut out = Vec::with_capacity(self.member_count_upper_bound());
        for (bi, b) in self.blocks.iter().enumerate() {
            for offset in 0..b.len as u32 {
                out.push(MemberId { block: bi as u32, offset, split: false });
                if b.len >= 2 {
                    out.push(MemberId { block: bi as u32, offset, split: true });
                }
            }
        }
        out
    }

    pub(crate) fn member_count_upper_bound(&self) -> usize {
        self.blocks.iter().map(|b| if b.len >= 2 { 2 * b.len } else { 1 }).sum()
    }

    pub(crate) fn block(&self, m: MemberId) -> &Block {
        &self.blocks[m.block as usize]
    }

    pub(crate) fn member_len(&self, m: MemberId) -> usize {
        let b = self.block(m);
        b.len + m.split as usize
    }

    /// Letter segments of a member, in order.
    pub(crate) fn segments(&self, m: MemberId) -> ([Seg; 3], usize) {
        let b = self.block(m);
        let p = b.start + m.offset as usize;
        if !m.split {
            return ([Seg::Text(p, b.len), Seg::Code(0), Seg::Code(0)], 1);
        }
        let y = inverse_code(self.text[p + b.len - 1]);
        ([Seg::Code(y), Seg::Text(p, b.len - 1), Seg::Code(y)], 3)
    }

    pub(crate) fn member_codes(&self, m: MemberId) -> Vec<u32> {
        let (segs, n) = self.segments(m);
        let mut out = Vec::with_capacity(self.member_len(m));
        for s in &segs[..n] {
            match *s {
                Seg::Code(c) => out.push(c),
                Seg::Text(p, l) => out.extend_from_slice(&self.text[p..p + l]),
            }
        }
        out
    }

    pub(crate) fn member_word(&self, m: MemberId) -> Word {
        Word::from_letters(self.member_codes(m).into_iter().map(|c| self.alphabet.letter(c)).collect())
    }

    pub(crate) fn member_label(&self, m: MemberId) -> MemberLabel {
        let b = self.block(m);
        MemberLabel { base: b.base, inverted: b.inverted, offset: m.offset as usize, split: m.split }
    }

    /// Length of the longest common prefix of two members.
    pub(crate) fn lcp(&self, a: MemberId, b: MemberId) -> usize {
        let (sa, na) = self.segments(a);
        let (sb, nb) = self.segments(b);
        let mut cur_a = SegCursor::new(&sa[..na]);
        let mut cur_b = SegCursor::new(&sb[..nb]);
        let mut total = 0;
        loop {
            match (cur_a.peek(), cur_b.peek()) {
                (Some(Seg::Text(pa, la)), Some(Seg::Text(pb, lb))) => {
                    let l = la.min(lb);
                    let same = common_prefix(&self.text[pa..pa + l], &self.text[pb..pb + l]);
                    total += same;
                    if same < l {
                        return total;
                    }
                    cur_a.advance(l);
                    cur_b.advance(l);
                }
                (Some(x), Some(y)) => {
                    if self.head_code(x) != self.head_code(y) {
                        return total;
                    }
                    total += 1;
                    cur_a.advance(1);
                    cur_b.advance(1);
                }
                _ => return total,
            }
        }
    }

    /// Code at position `i` of a member.
    pub(crate) fn member_code_at(&self, m: MemberId, i: usize) -> Option<u32> {
        let b = self.block(m);
        let p = b.start + m.offset as usize;
        if !m.split {
            return (i < b.len).then(|| self.text[p + i]);
        }
        let y = inverse_code(self.text[p + b.len - 1]);
        match i {
            0 => Some(y),
            i if i < b.len => Some(self.text[p + i - 1]),
            i if i == b.len => Some(y),
            _ => None,
        }
    }

    fn head_code(&self, s: Seg) -> u32 {
        match s {
            Seg::Code(c) => c,
            Seg::Text(p, _) => self.text[p],
        }
    }

    /// Lexicographic comparison of two members' words.
    pub(crate) fn compare(&self, a: MemberId, b: MemberId) -> std::cmp::Ordering {
        let l = self.lcp(a, b);
        self.member_code_at(a, l).cmp(&self.member_code_at(b, l))
    }

    pub(crate) fn compare_word(&self, codes: &[Option<u32>], m: MemberId) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let len = self.member_len(m);
        for (i, c) in codes.iter().enumerate() {
            if i == len {
                return Ordering::Greater;
            }
            let mc = self.member_code_at(m, i).unwrap();
            match c {
                // Letters outside the alphabet never occur in a member.
                None => return Ordering::Greater,
                Some(c) if *c != mc => return c.cmp(&mc),
                _ => {}
            }
        }
        codes.len().cmp(&len)
    }

    /// Blocks of a length class as `(start, len)` pairs.
    pub(crate) fn class_blocks(&self, class: usize) -> impl Iterator<Item = (usize, &Block)> {
        self.blocks.iter().enumerate().filter(move |(_, b)| b.class == class)
    }
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    const CHUNK: usize = 16;
    let n = a.len().min(b.len());
    let mut i = 0;
    while i + CHUNK <= n && a[i..i + CHUNK] == b[i..i + CHUNK] {
        i += CHUNK;
    }
    while i < n && a[i] == b[i] {
        i += 1;
    }
    i
}

struct SegCursor<'a> {
    segs: &'a [Seg],
    idx: usize,
    used: usize,
}

impl<'a> SegCursor<'a> {
    fn new(segs: &'a [Seg]) -> Self {
        SegCursor { segs, idx: 0, used: 0 }
    }

    fn peek(&self) -> Option<Seg> {
        let s = *self.segs.get(self.idx)?;
        Some(match s {
            Seg::Code(c) => Seg::Code(c),
            Seg::Text(p, l) => Seg::Text(p + self.used, l - self.used),
        })
    }

    fn advance(&mut self, n: usize) {
        match self.segs[self.idx] {
            Seg::Code(_) => {
                debug_assert_eq!(n, 1);
                self.idx += 1;
            }
            Seg::Text(_, l) => {
                self.used += n;
                if self.used == l {
                    self.idx += 1;
                    self.used = 0;
                }
            }
        }
        // Skip empty text segments (split of a length-1 rotation cannot occur,
        // but V may be empty for m = 1).
        while let Some(Seg::Text(_, 0)) = self.segs.get(self.idx) {
            self.idx += 1;
        }
    }
}

/// Human-readable identity of a member: base relator index, orientation,
/// rotation offset and whether it is the split conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberLabel {
    pub base: usize,
    pub inverted: bool,
    pub offset: usize,
    pub split: bool,
}

impl fmt::Display for MemberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}@{}{}", self.base, if self.inverted { "'" } else { "" }, self.offset, if self.split { "s" } else { "" })
    }
}

impl serde::Serialize for MemberLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
