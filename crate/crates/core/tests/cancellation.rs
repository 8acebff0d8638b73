use proptest::prelude::*;
use smallcancel::*;

fn w(s: &str) -> Word {
    reduce(&parse_word(s).unwrap())
}

fn base_word(gens: u32) -> impl Strategy<Value = Word> {
    proptest::collection::vec((0..gens, 1u8..=2), 2..9).prop_filter_map("needs a valid base word", |v| {
        let word = reduce(&Word::unreduced(v.into_iter().map(|(g, e)| Letter::new(g, e).unwrap()).collect()));
        let (core, _) = cyclic_reduce(&word).ok()?;
        (core.len() >= 2 && !core.is_proper_power()).then_some(core)
    })
}

fn family() -> impl Strategy<Value = Vec<Word>> {
    proptest::collection::vec(base_word(4), 1..4)
}

fn literal_piece_oracle(u: &Word, members: &[Word]) -> usize {
    members
        .iter()
        .filter(|v| *v != u)
        .map(|v| {
            let l = u.letters().iter().zip(v.letters()).take_while(|(a, b)| a == b).count();
            let ext = matches!((u.letters().get(l), v.letters().get(l)), (Some(a), Some(b)) if a.generator() == b.generator());
            l + ext as usize
        })
        .max()
        .unwrap_or(0)
}

fn contains_at(hay: &Word, needle: &Word) -> Option<usize> {
    let (h, n) = (hay.letters(), needle.letters());
    (0..=h.len().saturating_sub(n.len())).find(|&i| h.len() >= n.len() && &h[i..i + n.len()] == n)
}

/// Leftmost start, then longest length, by trying every subword against
/// every member.
fn subword_oracle(word: &Word, members: &[Word], t: Rational) -> Option<(usize, usize)> {
    for s in 0..word.len() {
        for len in (1..=word.len() - s).rev() {
            let sub = word.subword(s, len);
            if members.iter().any(|m| t.lt_ratio_of(len as u64, m.len() as u64) && contains_at(m, &sub).is_some()) {
                return Some((s, len));
            }
        }
    }
    None
}

#[test]
fn worked_examples() {
    let f = RelatorFamily::from_words(vec![w("x0 x1 x2 x3 x4 x5 x6 x7 x8 x9 x10")]).unwrap();
    let members = f.symmetrized_words();
    for (host, len) in piece_lengths(&f) {
        assert_eq!(len, literal_piece_oracle(&host, &members));
    }
    let short = RelatorFamily::from_words(vec![w("x0 x1 x2 x3 x4")]).unwrap();
    let c = verify_cprime(&short, Rational::new(1, 10)).unwrap();
    assert!(!c.pass && !c.length_condition);

    let scaled = materialize_family(&GroupSpec::trivial(), ConstructionParams::standard(3).with_n_rep(4)).unwrap();
    let c = verify_cprime(&scaled, Rational::new(1, 6)).unwrap();
    assert!(c.max_piece_ratio > Rational::ZERO);
    assert_eq!(c.pass, c.max_piece_ratio < Rational::new(1, 6) && c.length_condition);
    let json = serde_json::to_value(&c).unwrap();
    assert_eq!(json["max_piece_ratio"], c.max_piece_ratio.to_string());
    assert!(json["witnesses"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn full_scale_subwords() {
    let f = materialize_family(&GroupSpec::trivial(), ConstructionParams::standard(3)).unwrap();
    let r = make_relator(&[0, 1], 80).unwrap();
    let m = find_relator_subword(&r, &f, Rational::new(1, 2)).unwrap();
    assert_eq!((m.start, m.len, m.ratio), (0, r.len(), Rational::ONE));
    assert!(find_relator_subword(&w("x0 x1 x2"), &f, Rational::new(1, 2)).is_none());
    let conj = reduce(&Word::letter(5, 1).concat(&r).concat(&Word::letter(5, 2)));
    let m = find_relator_subword(&conj, &f, Rational::new(7, 10)).unwrap();
    assert!(m.ratio >= Rational::new(7, 10));
    assert_eq!(f.member_word(&m.member).unwrap().subword(m.offset_in_member, m.len), m.subword);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pieces_match_oracle(base in family()) {
        let f = RelatorFamily::from_words(base.clone()).unwrap();
        let members = symmetrize(&base).unwrap();
        prop_assert_eq!(f.symmetrized_words(), members.clone());
        for (host, len) in piece_lengths(&f) {
            prop_assert_eq!(len, literal_piece_oracle(&host, &members));
            let wit = max_piece(&host, &f).unwrap();
            prop_assert_eq!(wit.as_ref().map_or(0, |p| p.piece.len()), len);
            if let Some(p) = wit {
                prop_assert!(p.other != p.host);
                prop_assert_eq!(p.ratio, Rational::ratio(p.piece.len(), p.host.len()));
                prop_assert!(f.contains(&p.other));
            }
        }
    }

    #[test]
    fn piece_ratios_are_relabel_invariant(base in family(), shift in 1u32..30) {
        let f = RelatorFamily::from_words(base.clone()).unwrap();
        let g = RelatorFamily::from_words(base.iter().map(|b| b.relabel(|i| 3 * (i + shift))).collect()).unwrap();
        let lam = Rational::new(1, 2);
        let (a, b) = (verify_cprime(&f, lam).unwrap(), verify_cprime(&g, lam).unwrap());
        prop_assert_eq!(a.max_piece_ratio, b.max_piece_ratio);
        prop_assert_eq!(a.members, b.members);
    }

    #[test]
    fn certificate_is_monotone(base in family(), num in 1u64..10) {
        let f = RelatorFamily::from_words(base).unwrap();
        let lam = Rational::new(num, 10);
        let c = verify_cprime(&f, lam).unwrap();
        if c.pass {
            for bigger in (num..=10).map(|n| Rational::new(n, 10)) {
                let d = verify_cprime(&f, bigger).unwrap();
                prop_assert!(d.pass || !d.length_condition);
            }
        }
    }

    #[test]
    fn subword_search_matches_oracle(
        base in family(),
        word in proptest::collection::vec((0u32..5, 1u8..=2), 0..18),
        t in (1u64..=4).prop_map(|n| Rational::new(n, 4)),
    ) {
        let f = RelatorFamily::from_words(base.clone()).unwrap();
        let members = symmetrize(&base).unwrap();
        let word = reduce(&Word::unreduced(word.into_iter().map(|(g, e)| Letter::new(g, e).unwrap()).collect()));
        let got = find_relator_subword(&word, &f, t);
        prop_assert_eq!(got.as_ref().map(|m| (m.start, m.len)), subword_oracle(&word, &members, t));
        if let Some(m) = got {
            let member = f.member_word(&m.member).unwrap();
            prop_assert_eq!(member.len(), m.member_len);
            prop_assert_eq!(&m.subword, &word.subword(m.start, m.len));
            prop_assert_eq!(member.subword(m.offset_in_member, m.len), m.subword);
            prop_assert!(t.lt_ratio_of(m.len as u64, m.member_len as u64));
        }
    }
}
