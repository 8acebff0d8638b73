use std::sync::OnceLock;

use proptest::prelude::*;
use smallcancel::*;

fn w(s: &str) -> Word {
    reduce(&parse_word(s).unwrap())
}

fn family(k_max: usize) -> &'static RelatorFamily {
    static F3: OnceLock<RelatorFamily> = OnceLock::new();
    static F4: OnceLock<RelatorFamily> = OnceLock::new();
    let cell = if k_max == 3 { &F3 } else { &F4 };
    cell.get_or_init(|| {
        let spec = GroupSpec::parse("(0 1)\n").unwrap();
        materialize_family(&spec, ConstructionParams::standard(k_max)).unwrap()
    })
}

fn solver(k_max: usize) -> DehnSolver<'static> {
    let f = family(k_max);
    let cert = verify_cprime(f, Rational::new(1, 10)).unwrap();
    DehnSolver::new(f, &cert).unwrap()
}

fn check_trace(v: &Verdict) {
    let mut prev = v.input_len;
    for s in &v.trace {
        assert!(2 * s.subword_len > s.relator_len);
        assert!(s.new_len < prev);
        prev = s.new_len;
    }
    assert!(v.final_word.len() <= v.input_len);
    assert_eq!(v.trace.last().map_or(v.final_word.len(), |s| s.new_len), v.final_word.len());
}

#[test]
fn worked_examples() {
    let s = solver(3);
    let f = s.family();
    assert_eq!(s.dehn_reduce(&parse_word("x0 x0^2").unwrap()).status, Status::Trivial);
    let v = s.dehn_reduce(&w("x0 x1"));
    assert_eq!((v.status, v.final_word.clone()), (Status::NontrivialSound, w("x0 x1")));
    assert!(v.trace.is_empty());

    for b in f.base_words() {
        let v = s.dehn_reduce(b);
        assert_eq!(v.status, Status::Trivial);
        assert_eq!(v.trace.len(), 1);
        check_trace(&v);
        let cert = greendlinger_certificate(b, f, Rational::new(7, 10)).unwrap().unwrap();
        assert!(cert.ratio > Rational::new(7, 10));
    }
    assert!(matches!(greendlinger_certificate(&parse_word("x0 x0^2").unwrap(), f, Rational::new(7, 10)), Err(DehnError::NotReduced)));

    let json = serde_json::to_value(s.dehn_reduce(f.base_words().next().unwrap())).unwrap();
    assert_eq!(json["status"], "trivial");
    assert_eq!(Status::NontrivialTruncationLimited.to_string(), "nontrivial_truncation_limited");
}

#[test]
fn truncation_limited_words_are_flagged() {
    let s = solver(3);
    let excluded = s.family().excluded_min_length().unwrap() as usize;
    let mut sampler = Sampler::new(7);
    let long = sampler.reduced_word(excluded / 2 + 1, 40);
    let v = s.dehn_reduce(&long);
    assert!(v.final_word.len() * 2 > excluded);
    assert_eq!(v.status, Status::NontrivialTruncationLimited);
    assert!(matches!(s.commutes_probe(&long, 0), Err(DehnError::TruncationLimited(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugate_products_are_trivial(seed in any::<u64>()) {
        let s = solver(3);
        let rels: Vec<Word> = s.family().base_words().cloned().collect();
        let mut sampler = Sampler::new(seed);
        let p = sampler.conjugate_product(&rels, 3, 4, 6);
        let v = s.dehn_reduce(&p);
        prop_assert_eq!(v.status, Status::Trivial);
        check_trace(&v);
    }

    #[test]
    fn free_cancellation_is_trivial(u in proptest::collection::vec((0u32..12, 1u8..=2), 0..30)) {
        let s = solver(3);
        let u = Word::unreduced(u.into_iter().map(|(g, e)| Letter::new(g, e).unwrap()).collect());
        prop_assert_eq!(s.dehn_reduce(&u.concat(&u.inverse())).status, Status::Trivial);
    }

    #[test]
    fn final_words_have_no_majority_subword(seed in any::<u64>(), len in 1usize..60) {
        let s = solver(3);
        let word = Sampler::new(seed).reduced_word(len, 4);
        let v = s.dehn_reduce(&word);
        check_trace(&v);
        prop_assert!(find_relator_subword(&v.final_word, s.family(), Rational::new(1, 2)).is_none());
    }

    #[test]
    fn soundness_survives_a_larger_truncation(seed in any::<u64>(), len in 1usize..40) {
        let (small, big) = (solver(3), solver(4));
        let word = Sampler::new(seed).reduced_word(len, 5);
        let a = small.dehn_reduce(&word);
        let b = big.dehn_reduce(&word);
        if a.status == Status::NontrivialSound {
            prop_assert_eq!(b.status, Status::NontrivialSound);
            prop_assert_eq!(a.final_word, b.final_word);
        }
    }
}
