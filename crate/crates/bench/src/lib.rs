//! Fixtures shared by the benchmarks.

use smallcancel::{materialize_family, ConstructionParams, GroupSpec, Perm, RelatorFamily, Sampler, Word};

/// `⟨(0 1 2), (3 4)⟩`, the group whose truncations are certified at
/// full scale.
pub fn group() -> GroupSpec {
    let gens = ["(0 1 2)", "(3 4)"].iter().map(|g| g.parse::<Perm>().expect("valid cycle")).collect();
    GroupSpec::new(gens, 16)
}

pub fn family(k_max: usize) -> RelatorFamily {
    materialize_family(&group(), ConstructionParams::standard(k_max)).expect("valid parameters")
}

/// Products of conjugated base relators, trivial in the group.
pub fn trivial_words(family: &RelatorFamily, count: usize, seed: u64) -> Vec<Word> {
    let rels: Vec<Word> = family.base_words().cloned().collect();
    let mut s = Sampler::new(seed);
    (0..count).map(|_| s.conjugate_product(&rels, 3, 4, 8)).collect()
}

pub fn random_words(count: usize, len: usize, seed: u64) -> Vec<Word> {
    let mut s = Sampler::new(seed);
    (0..count).map(|_| s.reduced_word(len, 8)).collect()
}
