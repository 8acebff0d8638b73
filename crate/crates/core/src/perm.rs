//! Finite-support permutations of ℕ, closure enumeration of finitely
//! generated subgroups and prefix patterns `(σ(0), …, σ(k-1))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("malformed cycle notation {0:?}")]
    Malformed(String),
    #[error("point {0} appears more than once")]
    RepeatedPoint(u32),
    #[error("prefix pattern {0:?} is not injective")]
    NonInjective(Vec<u32>),
    #[error("prefix length must be at least 1")]
    EmptyPrefix,
    #[error("group file line {line}: {message}")]
    Spec { line: usize, message: String },
}

/// A permutation of ℕ moving finitely many points.
///
/// Only moved points are stored, so two equal permutations always have
/// equal representations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Perm {
    moved: BTreeMap<u32, u32>,
}

impl Perm {
    pub fn identity() -> Perm {
        Perm::default()
    }

    /// Builds a permutation from point images. Fixed points in `map` are
    /// dropped; the map must be a bijection of its support.
    pub fn from_map(map: impl IntoIterator<Item = (u32, u32)>) -> Result<Perm, PermError> {
        let mut moved = BTreeMap::new();
        for (a, b) in map {
            if moved.insert(a, b).is_some() {
                return Err(PermError::RepeatedPoint(a));
            }
        }
        let domain: BTreeSet<u32> = moved.keys().copied().collect();
        let image: BTreeSet<u32> = moved.values().copied().collect();
        if domain != image {
            return Err(PermError::Malformed(format!("{moved:?} is not a bijection of its support")));
        }
        moved.retain(|a, b| a != b);
        Ok(Perm { moved })
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.moved.get(&i).copied().unwrap_or(i)
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.moved.keys().copied()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let points: BTreeSet<u32> = self.moved.keys().chain(other.moved.keys()).copied().collect();
        let moved = points
            .into_iter()
            .map(|i| (i, self.apply(other.apply(i))))
            .filter(|(a, b)| a != b)
            .collect();
        Perm { moved }
    }

    pub fn inverse(&self) -> Perm {
        Perm { moved: self.moved.iter().map(|(&a, &b)| (b, a)).collect() }
    }

    /// Disjoint cycles, each starting at its least point, ordered by that
    /// point; `id` for the identity.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut done = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.moved.keys() {
            if done.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            done.insert(start);
            let mut i = self.apply(start);
            while i != start {
                cycle.push(i);
                done.insert(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    /// `(σ(0), …, σ(k-1))`.
    pub fn prefix(&self, k: usize) -> PrefixPattern {
        PrefixPattern((0..k as u32).map(|i| self.apply(i)).collect())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for c in self.cycles() {
            let body: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Perm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_perm(s)
    }
}

/// Parses disjoint cycles such as `(0 1 2)(3 4)`, or `id`.
pub fn parse_perm(text: &str) -> Result<Perm, PermError> {
    let t = text.trim();
    if t == "id" {
        return Ok(Perm::identity());
    }
    let malformed = || PermError::Malformed(text.to_string());
    let mut rest = t;
    let mut seen = BTreeSet::new();
    let mut map = Vec::new();
    if rest.is_empty() {
        return Err(malformed());
    }
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(malformed)?;
        let close = inner.find(')').ok_or_else(malformed)?;
        let points = inner[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u32>().map_err(|_| malformed()))
            .collect::<Result<Vec<_>, _>>()?;
        if points.is_empty() {
            return Err(malformed());
        }
        for &p in &points {
            if !seen.insert(p) {
                return Err(PermError::RepeatedPoint(p));
            }
        }
        for (i, &p) in points.iter().enumerate() {
            map.push((p, points[(i + 1) % points.len()]));
        }
        rest = inner[close + 1..].trim_start();
    }
    Perm::from_map(map)
}

/// An injective tuple `(σ(0), …, σ(k-1))`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixPattern(Vec<u32>);

impl PrefixPattern {
    pub fn new(values: Vec<u32>) -> Result<PrefixPattern, PermError> {
        let distinct: BTreeSet<u32> = values.iter().copied().collect();
        if distinct.len() != values.len() {
            return Err(PermError::NonInjective(values));
        }
        Ok(PrefixPattern(values))
    }

    pub fn identity(k: usize) -> PrefixPattern {
        PrefixPattern((0..k as u32).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for PrefixPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

impl fmt::Debug for PrefixPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PrefixPattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for PrefixPattern {
    type Err = PermError;

    /// Accepts `(0,1,2)` or `0,1,2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        let values = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u32>().map_err(|_| PermError::Malformed(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        PrefixPattern::new(values)
    }
}

/// Depth used when a group file has no `depth=` header.
pub const DEFAULT_CLOSURE_DEPTH: usize = 32;

/// Generators of a finite-support permutation group plus the word-length
/// bound used to enumerate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    pub generators: Vec<Perm>,
    pub closure_depth: usize,
}

impl GroupSpec {
    pub fn new(generators: Vec<Perm>, closure_depth: usize) -> GroupSpec {
        GroupSpec { generators, closure_depth }
    }

    pub fn trivial() -> GroupSpec {
        GroupSpec::new(Vec::new(), 0)
    }

    /// Parses a group file: one generator per line in cycle notation,
    /// `#` comments, and an optional `depth=<n>` line.
    pub fn parse(text: &str) -> Result<GroupSpec, PermError> {
        let mut generators = Vec::new();
        let mut depth = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(d) = line.strip_prefix("depth=") {
                let parsed = d.trim().parse().map_err(|_| PermError::Spec {
                    line: i + 1,
                    message: format!("bad depth {d:?}"),
                })?;
                if depth.replace(parsed).is_some() {
                    return Err(PermError::Spec { line: i + 1, message: "duplicate depth header".into() });
                }
                continue;
            }
            let p = parse_perm(line).map_err(|e| PermError::Spec { line: i + 1, message: e.to_string() })?;
            generators.push(p);
        }
        Ok(GroupSpec::new(generators, depth.unwrap_or(DEFAULT_CLOSURE_DEPTH)))
    }

    pub fn render(&self) -> String {
        let mut out = format!("depth={}\n", self.closure_depth);
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

/// Result of [`closure_enumerate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Closure {
    /// Sorted, deduplicated.
    pub elements: Vec<Perm>,
    /// One further multiplication round would add nothing.
    pub complete: bool,
}

/// All products of at most `closure_depth` generators and their inverses.
pub fn closure_enumerate(spec: &GroupSpec) -> Closure {
    let mut steps: Vec<Perm> = Vec::new();
    for g in &spec.generators {
        steps.push(g.clone());
        steps.push(g.inverse());
    }
    steps.sort();
    steps.dedup();

    let mut all: BTreeSet<Perm> = BTreeSet::from([Perm::identity()]);
    let mut frontier = vec![Perm::identity()];
    let grow = |frontier: &[Perm], all: &BTreeSet<Perm>| -> Vec<Perm> {
        let mut next = BTreeSet::new();
        for f in frontier {
            for s in &steps {
                let p = s.compose(f);
                if !all.contains(&p) {
                    next.insert(p);
                }
            }
        }
        next.into_iter().collect()
    };
    for _ in 0..spec.closure_depth {
        let next = grow(&frontier, &all);
        if next.is_empty() {
            frontier.clear();
            break;
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let complete = frontier.is_empty() || grow(&frontier, &all).is_empty();
    Closure { elements: all.into_iter().collect(), complete }
}

/// `{(σ(0), …, σ(k-1)) : σ ∈ elements}`, sorted and deduplicated.
pub fn prefix_patterns(elements: &[Perm], k: usize) -> Result<Vec<PrefixPattern>, PermError> {
    if k == 0 {
        return Err(PermError::EmptyPrefix);
    }
    let set: BTreeSet<PrefixPattern> = elements.iter().map(|s| s.prefix(k)).collect();
    Ok(set.into_iter().collect())
}

/// Substitutes `x_i ↦ x_{σ(i)}`, keeping exponents.
pub fn apply_sigma(sigma: &Perm, w: &Word) -> Word {
    w.relabel(|i| sigma.apply(i))
}
