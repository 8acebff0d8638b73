//! Finite relator families: the base relators, their construction data,
//! and a lazily built index over the symmetrized closure.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::cancellation::PieceTable;
use crate::density::distinct_letter_count;
use crate::index::{FamilyIndex, MemberId, MemberLabel, MAX_LENGTH_CLASSES};
use crate::perm::{apply_sigma, closure_enumerate, prefix_patterns, GroupSpec, Perm, PrefixPattern};
use crate::relator::{check_base_word, make_relator, relator_length, ConstructionParams, RelatorError};
use crate::word::{parse_word, reduce, Word, WordError};
use crate::Rational;

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error(transparent)]
    Relator(#[from] RelatorError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("empty family")]
    Empty,
    #[error("family has {0} distinct relator lengths; at most {MAX_LENGTH_CLASSES} are supported")]
    TooManyLengths(usize),
    #[error("construction parameters differ: {0} vs {1}")]
    ParamMismatch(String, String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("unknown member {0}")]
    UnknownMember(MemberLabel),
}

/// How a base relator was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Source {
    Generated { prefix: PrefixPattern, n_rep: usize },
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseRelator {
    pub source: Source,
    pub word: Word,
}

impl BaseRelator {
    /// Number of generators the relator is built on.
    pub fn k(&self) -> usize {
        match &self.source {
            Source::Generated { prefix, .. } => prefix.k(),
            Source::Supplied => distinct_letter_count(&self.word),
        }
    }
}

/// Where a family came from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// Rendered group file, if generated from a group.
    pub group: Option<String>,
    pub closure_size: Option<usize>,
    pub closure_complete: Option<bool>,
}

pub struct RelatorFamily {
    base: Vec<BaseRelator>,
    params: Option<ConstructionParams>,
    provenance: Provenance,
    per_letter_floor: Rational,
    excluded_min_length: Option<u64>,
    index: OnceLock<FamilyIndex>,
    pieces: OnceLock<PieceTable>,
}

impl fmt::Debug for RelatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RelatorFamily")
            .field("base", &self.base.len())
            .field("params", &self.params)
            .field("fingerprint", &self.fingerprint())
            .finish()
    }
}

impl RelatorFamily {
    fn assemble(
        base: Vec<BaseRelator>,
        params: Option<ConstructionParams>,
        provenance: Provenance,
        excluded_min_length: Option<u64>,
    ) -> Result<RelatorFamily, FamilyError> {
        if base.is_empty() {
            return Err(FamilyError::Empty);
        }
        for b in &base {
            check_base_word(&b.word)?;
        }
        let lengths: BTreeSet<usize> = base.iter().map(|b| b.word.len()).collect();
        if lengths.len() > MAX_LENGTH_CLASSES {
            return Err(FamilyError::TooManyLengths(lengths.len()));
        }
        let per_letter_floor = base
            .iter()
            .map(|b| Rational::ratio(b.word.len(), b.k().max(1)))
            .min()
            .expect("nonempty");
        Ok(RelatorFamily {
            base,
            params,
            provenance,
            per_letter_floor,
            excluded_min_length,
            index: OnceLock::new(),
            pieces: OnceLock::new(),
        })
    }

    /// A family from explicit base words. Duplicates are dropped, first
    /// occurrence kept. Nothing is known about relators outside the
    /// family, so every nontrivial verdict counts as sound.
    pub fn from_words(words: Vec<Word>) -> Result<RelatorFamily, FamilyError> {
        let mut seen = HashSet::new();
        let base = words
            .into_iter()
            .map(|w| reduce(&w))
            .filter(|w| seen.insert(w.clone()))
            .map(|word| BaseRelator { source: Source::Supplied, word })
            .collect();
        Self::assemble(base, None, Provenance::default(), None)
    }

    /// The relators `w_{p,k}` for the given prefixes under `params`.
    pub fn generated(
        prefixes: impl IntoIterator<Item = PrefixPattern>,
        params: ConstructionParams,
        provenance: Provenance,
        excluded_min_length: Option<u64>,
    ) -> Result<RelatorFamily, FamilyError> {
        params.validate()?;
        let prefixes: BTreeSet<(usize, PrefixPattern)> = prefixes.into_iter().map(|p| (p.k(), p)).collect();
        let base = prefixes
            .into_par_iter()
            .map(|(_, prefix)| {
                let word = make_relator(prefix.values(), params.n_rep)?;
                Ok(BaseRelator { source: Source::Generated { prefix, n_rep: params.n_rep }, word })
            })
            .collect::<Result<Vec<_>, RelatorError>>()?;
        Self::assemble(base, Some(params), provenance, excluded_min_length)
    }

    pub fn base(&self) -> &[BaseRelator] {
        &self.base
    }

    pub fn base_words(&self) -> impl Iterator<Item = &Word> {
        self.base.iter().map(|b| &b.word)
    }

    pub fn params(&self) -> Option<&ConstructionParams> {
        self.params.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `min |R| / k(R)` over the base relators.
    pub fn per_letter_floor(&self) -> Rational {
        self.per_letter_floor
    }

    /// A lower bound on the length of every relator of the untruncated
    /// family that is missing here, or `None` if there is no larger family.
    pub fn excluded_min_length(&self) -> Option<u64> {
        self.excluded_min_length
    }

    pub fn min_length(&self) -> usize {
        self.base.iter().map(|b| b.word.len()).min().expect("nonempty")
    }

    pub fn max_length(&self) -> usize {
        self.base.iter().map(|b| b.word.len()).max().expect("nonempty")
    }

    /// Hash of the parameters and base words; ties certificates to the
    /// family they were computed for.
    pub fn fingerprint(&self) -> String {
        let mut h = DefaultHasher::new();
        self.params.map(|p| (p.n_rep, p.k_min, p.k_max)).hash(&mut h);
        for b in &self.base {
            b.word.hash(&mut h);
        }
        format!("{:016x}", h.finish())
    }

    pub(crate) fn index(&self) -> &FamilyIndex {
        self.index.get_or_init(|| {
            let words: Vec<Word> = self.base.iter().map(|b| b.word.clone()).collect();
            FamilyIndex::build(&words)
        })
    }

    pub(crate) fn pieces(&self) -> &PieceTable {
        self.pieces.get_or_init(|| PieceTable::build(self.index()))
    }

    /// Number of distinct symmetrized members.
    pub fn symmetrized_len(&self) -> usize {
        self.pieces().len()
    }

    /// The symmetrized closure in canonical order. Materializes every
    /// member; intended for small families.
    pub fn symmetrized_words(&self) -> Vec<Word> {
        let index = self.index();
        self.pieces().members().iter().map(|&m| index.member_word(m)).collect()
    }

    /// Membership in the symmetrized closure.
    pub fn contains(&self, w: &Word) -> bool {
        self.locate(w).is_some()
    }

    pub(crate) fn locate(&self, w: &Word) -> Option<MemberId> {
        self.pieces().find(self.index(), w)
    }

    pub fn member_word(&self, label: &MemberLabel) -> Result<Word, FamilyError> {
        let id = self.member_id(label)?;
        Ok(self.index().member_word(id))
    }

    pub(crate) fn member_id(&self, label: &MemberLabel) -> Result<MemberId, FamilyError> {
        let block = 2 * label.base + label.inverted as usize;
        let ok = label.base < self.base.len()
            && label.offset < self.base[label.base].word.len()
            && (!label.split || self.base[label.base].word.len() >= 2);
        if !ok {
            return Err(FamilyError::UnknownMember(*label));
        }
        Ok(MemberId { block: block as u32, offset: label.offset as u32, split: label.split })
    }

    /// Base words as a set, for inclusion checks.
    pub fn base_set(&self) -> BTreeSet<&Word> {
        self.base_words().collect()
    }

    /// Whether `σ` maps the base relators onto themselves.
    pub fn is_invariant_under(&self, sigma: &Perm) -> bool {
        let set = self.base_set();
        self.base.iter().all(|b| set.contains(&apply_sigma(sigma, &b.word)))
    }

    /// Manifest text: one base relator per line as
    /// `<prefix> k=<k> n=<n_rep> | <word>` or `custom | <word>`, after
    /// `#!` header lines carrying the parameters.
    pub fn to_manifest(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.params {
            out.push_str(&format!("#! n_rep={} k_min={} k_max={} lambda={}\n", p.n_rep, p.k_min, p.k_max, p.lambda_target));
        }
        if let Some(e) = self.excluded_min_length {
            out.push_str(&format!("#! excluded_min_length={e}\n"));
        }
        for b in &self.base {
            match &b.source {
                Source::Generated { prefix, n_rep } => {
                    out.push_str(&format!("{prefix} k={} n={n_rep} | {}\n", prefix.k(), b.word))
                }
                Source::Supplied => out.push_str(&format!("custom | {}\n", b.word)),
            }
        }
        out
    }

    /// Parses [`RelatorFamily::to_manifest`] output. A generated line may
    /// omit the word; when present it must match the expansion.
    pub fn from_manifest(text: &str) -> Result<RelatorFamily, FamilyError> {
        let err = |line: usize, message: String| FamilyError::Manifest { line, message };
        let mut params: Option<ConstructionParams> = None;
        let mut excluded = None;
        let mut base = Vec::new();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if let Some(header) = line.strip_prefix("#!") {
                for item in header.split_whitespace() {
                    let (key, value) = item.split_once('=').ok_or_else(|| err(line_no, format!("bad header item {item:?}")))?;
                    let int = || value.parse::<usize>().map_err(|_| err(line_no, format!("bad value {value:?} for {key}")));
                    let p = params.get_or_insert(ConstructionParams::standard(2));
                    match key {
                        "n_rep" => p.n_rep = int()?,
                        "k_min" => p.k_min = int()?,
                        "k_max" => p.k_max = int()?,
                        "lambda" => p.lambda_target = value.parse().map_err(|e| err(line_no, format!("{e}")))?,
                        "excluded_min_length" => excluded = Some(int()? as u64),
                        _ => return Err(err(line_no, format!("unknown header key {key:?}"))),
                    }
                }
                continue;
            }
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, word) = match line.split_once('|') {
                Some((h, w)) => (h.trim(), Some(w.trim())),
                None => (line, None),
            };
            let parsed_word = word.map(|w| parse_word(w).map(|w| reduce(&w))).transpose()?;
            let relator = if head == "custom" {
                let word = parsed_word.ok_or_else(|| err(line_no, "custom line without a word".into()))?;
                BaseRelator { source: Source::Supplied, word }
            } else {
                let mut parts = head.split_whitespace();
                let prefix: PrefixPattern = parts
                    .next()
                    .ok_or_else(|| err(line_no, "missing prefix".into()))?
                    .parse()
                    .map_err(|e| err(line_no, format!("{e}")))?;
                let mut k = None;
                let mut n = None;
                for part in parts {
                    let value = |v: &str| v.parse::<usize>().map_err(|_| err(line_no, format!("bad field {part:?}")));
                    if let Some(v) = part.strip_prefix("k=") {
                        k = Some(value(v)?);
                    } else if let Some(v) = part.strip_prefix("n=") {
                        n = Some(value(v)?);
                    } else {
                        return Err(err(line_no, format!("unknown field {part:?}")));
                    }
                }
                if k.is_some_and(|k| k != prefix.k()) {
                    return Err(err(line_no, format!("k does not match prefix {prefix}")));
                }
                let n_rep = n.ok_or_else(|| err(line_no, "missing n=".into()))?;
                let expected = make_relator(prefix.values(), n_rep)?;
                if parsed_word.as_ref().is_some_and(|w| *w != expected) {
                    return Err(err(line_no, format!("word does not match the expansion of {prefix}")));
                }
                BaseRelator { source: Source::Generated { prefix, n_rep }, word: expected }
            };
            if seen.insert(relator.word.clone()) {
                base.push(relator);
            }
        }
        if let Some(p) = &params {
            p.validate()?;
        }
        Self::assemble(base, params, Provenance::default(), excluded)
    }
}

/// The truncated family of a permutation group: all `w_{p,k}` with
/// `k ∈ [k_min, k_max]` and `p` a prefix of an enumerated element.
pub fn materialize_family(spec: &GroupSpec, params: ConstructionParams) -> Result<RelatorFamily, FamilyError> {
    params.validate()?;
    let closure = closure_enumerate(spec);
    let mut prefixes = Vec::new();
    for k in params.k_min..=params.k_max {
        prefixes.extend(prefix_patterns(&closure.elements, k).expect("k >= 2"));
    }
    let excluded = if closure.complete && params.k_min == 2 {
        relator_length(params.k_max + 1, params.n_rep)
    } else {
        relator_length(2, params.n_rep)
    };
    let provenance = Provenance {
        group: Some(spec.render()),
        closure_size: Some(closure.elements.len()),
        closure_complete: Some(closure.complete),
    };
    log::info!("materializing {} base relators from a closure of {} elements", prefixes.len(), closure.elements.len());
    RelatorFamily::generated(prefixes, params, provenance, Some(excluded))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionReport {
    pub subset: bool,
    /// Base relators of the first family absent from the second, labelled
    /// by prefix when generated.
    pub missing: Vec<String>,
}

/// Whether every base relator of `a` is a base relator of `b`.
pub fn check_inclusion(a: &RelatorFamily, b: &RelatorFamily) -> Result<InclusionReport, FamilyError> {
    if a.params != b.params {
        let show = |p: &Option<ConstructionParams>| match p {
            Some(p) => format!("n_rep={} k={}..{}", p.n_rep, p.k_min, p.k_max),
            None => "custom".to_string(),
        };
        return Err(FamilyError::ParamMismatch(show(&a.params), show(&b.params)));
    }
    let target = b.base_set();
    let missing: Vec<String> = a
        .base
        .iter()
        .filter(|r| !target.contains(&r.word))
        .map(|r| match &r.source {
            Source::Generated { prefix, .. } => prefix.to_string(),
            Source::Supplied => r.word.to_string(),
        })
        .collect();
    Ok(InclusionReport { subset: missing.is_empty(), missing })
}
