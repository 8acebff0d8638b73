use std::collections::BTreeSet;

use proptest::prelude::*;
use smallcancel::*;

fn p(s: &str) -> Perm {
    parse_perm(s).unwrap()
}

fn group(gens: &[&str], depth: usize) -> GroupSpec {
    GroupSpec::new(gens.iter().map(|g| p(g)).collect(), depth)
}

/// Breadth-first closure by repeated multiplication until nothing new
/// appears.
fn closure_oracle(gens: &[Perm]) -> BTreeSet<Perm> {
    let mut all = BTreeSet::from([Perm::identity()]);
    loop {
        let next: BTreeSet<Perm> = all.iter().flat_map(|a| gens.iter().map(move |g| g.compose(a))).collect();
        let before = all.len();
        all.extend(next);
        if all.len() == before {
            return all;
        }
    }
}

fn perm_on(points: u32) -> impl Strategy<Value = Perm> {
    Just((0..points).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|img| Perm::from_map(img.into_iter().enumerate().map(|(i, v)| (i as u32, v))).unwrap())
}

#[test]
fn worked_examples() {
    let c = closure_enumerate(&group(&["(0 1 2)"], 3));
    assert_eq!(c.elements, vec![Perm::identity(), p("(0 1 2)"), p("(0 2 1)")]);
    assert!(c.complete);
    let s3 = closure_enumerate(&group(&["(0 1)", "(1 2)"], 4));
    assert_eq!((s3.elements.len(), s3.complete), (6, true));
    let c = closure_enumerate(&group(&["(0 1)"], 0));
    assert_eq!((c.elements, c.complete), (vec![Perm::identity()], false));

    let z3 = closure_enumerate(&group(&["(0 1 2)"], 3)).elements;
    let pats: Vec<Vec<u32>> = prefix_patterns(&z3, 2).unwrap().iter().map(|q| q.values().to_vec()).collect();
    assert_eq!(pats, vec![vec![0, 1], vec![1, 2], vec![2, 0]]);
    assert_eq!(prefix_patterns(&z3, 1).unwrap().len(), 3);
    assert_eq!(prefix_patterns(&[Perm::identity()], 4).unwrap(), vec![PrefixPattern::identity(4)]);

    let f = materialize_family(&group(&["(0 1 2)"], 3), ConstructionParams::standard(4)).unwrap();
    assert_eq!(f.base().len(), 9);
    for k in 2..=4 {
        assert_eq!(f.base().iter().filter(|b| b.k() == k).count(), 3);
    }
    let t = materialize_family(&GroupSpec::trivial(), ConstructionParams::standard(3)).unwrap();
    let expected: BTreeSet<Word> = [make_relator(&[0, 1], 80).unwrap(), make_relator(&[0, 1, 2], 80).unwrap()].into();
    assert_eq!(t.base_words().cloned().collect::<BTreeSet<_>>(), expected);

    assert_eq!(apply_sigma(&p("(0 1 2)"), &make_relator(&[0, 1], 80).unwrap()), make_relator(&[1, 2], 80).unwrap());
    let w = parse_word("x0 x1^2").unwrap();
    assert_eq!(apply_sigma(&Perm::identity(), &w), w);
    assert_eq!(apply_sigma(&p("(0 5)"), &w), parse_word("x5 x1^2").unwrap());

    let q = materialize_family(&group(&["(0 1 2)", "(0 1)"], 8), ConstructionParams::standard(4)).unwrap();
    assert!(check_inclusion(&f, &q).unwrap().subset);
    assert!(check_inclusion(&f, &f).unwrap().subset);
    let tq = materialize_family(&GroupSpec::trivial(), ConstructionParams::standard(4)).unwrap();
    assert!(check_inclusion(&tq, &q).unwrap().subset);
    assert!(!check_inclusion(&q, &f).unwrap().subset);
    assert!(matches!(check_inclusion(&t, &q), Err(FamilyError::ParamMismatch { .. })));
}

#[test]
fn group_file_round_trip() {
    let spec = GroupSpec::parse("# S3\ndepth=5\n(0 1)\n(1 2) # swap\n").unwrap();
    assert_eq!(spec, group(&["(0 1)", "(1 2)"], 5));
    assert_eq!(GroupSpec::parse(&spec.render()).unwrap(), spec);
    assert!(matches!(GroupSpec::parse("(0 1)\n(0 1\n"), Err(PermError::Spec { line: 2, .. })));
}

#[test]
fn manifest_round_trip() {
    let f = materialize_family(&group(&["(0 1 2)", "(3 4)"], 8), ConstructionParams::standard(3)).unwrap();
    let g = RelatorFamily::from_manifest(&f.to_manifest()).unwrap();
    assert_eq!(g.fingerprint(), f.fingerprint());
    assert_eq!(g.excluded_min_length(), f.excluded_min_length());
    assert_eq!(g.base_set(), f.base_set());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_matches_oracle(gens in proptest::collection::vec(perm_on(5), 0..3)) {
        let c = closure_enumerate(&GroupSpec::new(gens.clone(), 200));
        prop_assert!(c.complete);
        let oracle = closure_oracle(&gens);
        prop_assert_eq!(c.elements.iter().cloned().collect::<BTreeSet<_>>(), oracle);
        for s in &c.elements {
            prop_assert!(c.elements.binary_search(&s.inverse()).is_ok());
        }
    }

    #[test]
    fn prefixes_separate_on_support(gens in proptest::collection::vec(perm_on(5), 1..3)) {
        let els = closure_enumerate(&GroupSpec::new(gens, 200)).elements;
        // Permutations of 0..5 are determined by their first four values.
        prop_assert_eq!(prefix_patterns(&els, 4).unwrap().len(), els.len());
        for k in 1..6 {
            prop_assert!(prefix_patterns(&els, k).unwrap().len() <= prefix_patterns(&els, k + 1).unwrap().len());
        }
    }

    #[test]
    fn equivariance(sigma in perm_on(6), tau in perm_on(6), k in 2usize..7) {
        let lhs = apply_sigma(&sigma, &make_relator(tau.prefix(k).values(), 12).unwrap());
        let rhs = make_relator(sigma.compose(&tau).prefix(k).values(), 12).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn families_are_monotone_and_invariant(a in perm_on(4), b in perm_on(4), k_max in 2usize..5) {
        let params = ConstructionParams::standard(k_max).with_n_rep(6);
        let small = GroupSpec::new(vec![a.clone()], 50);
        let big = GroupSpec::new(vec![a, b], 50);
        let fs = materialize_family(&small, params).unwrap();
        let fb = materialize_family(&big, params).unwrap();
        prop_assert!(check_inclusion(&fs, &fb).unwrap().subset);
        for s in closure_enumerate(&big).elements {
            prop_assert!(fb.is_invariant_under(&s));
        }
    }
}
