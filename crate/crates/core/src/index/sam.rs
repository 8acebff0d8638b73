//! Suffix automaton with a per-state bitmask of the text blocks (length
//! classes) in which the state's substrings occur.

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Edge {
    symbol: u32,
    to: u32,
    next: u32,
}

pub struct SuffixAutomaton {
    len: Vec<u32>,
    link: Vec<u32>,
    head: Vec<u32>,
    edges: Vec<Edge>,
    mask: Vec<u64>,
}

impl SuffixAutomaton {
    /// `classes[i]` is the class bit set on the state ending at text
    /// position `i` (0 for separators).
    pub fn build(text: &[u32], classes: &[u64]) -> SuffixAutomaton {
        debug_assert_eq!(text.len(), classes.len());
        let cap = 2 * text.len() + 1;
        let mut sam = SuffixAutomaton {
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            head: Vec::with_capacity(cap),
            edges: Vec::with_capacity(3 * text.len()),
            mask: Vec::with_capacity(cap),
        };
        sam.new_state(0, NONE, 0);
        let mut last = 0u32;
        for (&c, &bits) in text.iter().zip(classes) {
            last = sam.extend(last, c, bits);
        }
        sam.propagate_masks();
        sam.len.shrink_to_fit();
        sam.link.shrink_to_fit();
        sam.head.shrink_to_fit();
        sam.edges.shrink_to_fit();
        sam.mask.shrink_to_fit();
        sam
    }

    fn new_state(&mut self, len: u32, link: u32, mask: u64) -> u32 {
        self.len.push(len);
        self.link.push(link);
        self.head.push(NONE);
        self.mask.push(mask);
        (self.len.len() - 1) as u32
    }

    pub fn root(&self) -> u32 {
        0
    }

    pub fn step(&self, state: u32, symbol: u32) -> Option<u32> {
        let mut e = self.head[state as usize];
        while e != NONE {
            let edge = self.edges[e as usize];
            if edge.symbol == symbol {
                return Some(edge.to);
            }
            e = edge.next;
        }
        None
    }

    fn set(&mut self, state: u32, symbol: u32, to: u32) {
        let mut e = self.head[state as usize];
        while e != NONE {
            let edge = &mut self.edges[e as usize];
            if edge.symbol == symbol {
                edge.to = to;
                return;
            }
            e = edge.next;
        }
        self.edges.push(Edge { symbol, to, next: self.head[state as usize] });
        self.head[state as usize] = (self.edges.len() - 1) as u32;
    }

    fn extend(&mut self, last: u32, c: u32, bits: u64) -> u32 {
        let cur = self.new_state(self.len[last as usize] + 1, NONE, bits);
        let mut p = last;
        while p != NONE && self.step(p, c).is_none() {
            self.set(p, c, cur);
            p = self.link[p as usize];
        }
        if p == NONE {
            self.link[cur as usize] = 0;
            return cur;
        }
        let q = self.step(p, c).unwrap();
        if self.len[p as usize] + 1 == self.len[q as usize] {
            self.link[cur as usize] = q;
            return cur;
        }
        let clone = self.new_state(self.len[p as usize] + 1, self.link[q as usize], 0);
        let mut e = self.head[q as usize];
        while e != NONE {
            let edge = self.edges[e as usize];
            self.set(clone, edge.symbol, edge.to);
            e = edge.next;
        }
        while p != NONE && self.step(p, c) == Some(q) {
            self.set(p, c, clone);
            p = self.link[p as usize];
        }
        self.link[q as usize] = clone;
        self.link[cur as usize] = clone;
        cur
    }

    fn propagate_masks(&mut self) {
        let n = self.len.len();
        let max_len = self.len.iter().copied().max().unwrap_or(0) as usize;
        let mut bucket = vec![0u32; max_len + 2];
        for &l in &self.len {
            bucket[l as usize + 1] += 1;
        }
        for i in 1..bucket.len() {
            bucket[i] += bucket[i - 1];
        }
        let mut order = vec![0u32; n];
        for (v, &l) in self.len.iter().enumerate() {
            let slot = &mut bucket[l as usize];
            order[*slot as usize] = v as u32;
            *slot += 1;
        }
        for &v in order.iter().rev() {
            let link = self.link[v as usize];
            if link != NONE {
                let m = self.mask[v as usize];
                self.mask[link as usize] |= m;
            }
        }
    }

    pub fn mask(&self, state: u32) -> u64 {
        self.mask[state as usize]
    }

    pub fn link(&self, state: u32) -> Option<u32> {
        let l = self.link[state as usize];
        (l != NONE).then_some(l)
    }

    pub fn max_len(&self, state: u32) -> u32 {
        self.len[state as usize]
    }

    pub fn state_count(&self) -> usize {
        self.len.len()
    }

    /// For each start `s`, the length of the longest prefix of
    /// `pattern[s..]` that occurs in the text at a position whose class
    /// bit is in `classes`. Symbols absent from the text are passed as
    /// `None`.
    pub fn longest_matches_from(&self, pattern: &[Option<u32>], classes: u64) -> Vec<u32> {
        let n = pattern.len();
        // Longest match ending at each position.
        let mut ending = vec![0u32; n];
        let (mut v, mut l) = (self.root(), 0u32);
        for (e, c) in pattern.iter().enumerate() {
            match c {
                None => {
                    v = self.root();
                    l = 0;
                }
                Some(c) => loop {
                    if let Some(t) = self.step(v, *c).filter(|&t| self.mask(t) & classes != 0) {
                        v = t;
                        l += 1;
                        break;
                    }
                    match self.link(v) {
                        Some(link) => {
                            v = link;
                            l = self.max_len(v);
                        }
                        None => {
                            l = 0;
                            break;
                        }
                    }
                },
            }
            ending[e] = l;
        }
        // The start of the longest match ending at e is nondecreasing in e.
        let mut from = vec![0u32; n];
        let mut e = 0usize;
        for (s, slot) in from.iter_mut().enumerate() {
            if e < s {
                e = s;
            }
            while e < n && (e + 1) as u32 - ending[e] <= s as u32 {
                e += 1;
            }
            // Positions s..e all have matches covering s.
            *slot = (e - s) as u32;
        }
        from
    }
}
