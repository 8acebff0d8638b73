use proptest::prelude::*;
use smallcancel::*;

fn letter() -> impl Strategy<Value = Letter> {
    (0u32..3, 1u8..=2).prop_map(|(g, e)| Letter::new(g, e).unwrap())
}

fn raw_word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(letter(), 0..=max).prop_map(Word::unreduced)
}

fn reduced_word(max: usize) -> impl Strategy<Value = Word> {
    raw_word(max).prop_map(|w| reduce(&w))
}

/// Rewrites the rightmost same-generator pair until none is left.
fn rewrite(w: &Word) -> Vec<(u32, u8)> {
    let mut v: Vec<(u32, u8)> = w.letters().iter().map(|l| (l.generator(), l.exponent())).collect();
    loop {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1].0 == v[i].0) else { return v };
        let e = (v[i - 1].1 + v[i].1) % 3;
        if e == 0 {
            v.drain(i - 1..=i);
        } else {
            v[i - 1].1 = e;
            v.remove(i);
        }
    }
}

proptest! {
    #[test]
    fn reduce_agrees_with_rewriting(w in raw_word(8)) {
        let r = reduce(&w);
        let expect = rewrite(&w);
        let got: Vec<(u32, u8)> = r.letters().iter().map(|l| (l.generator(), l.exponent())).collect();
        prop_assert_eq!(got, expect);
        prop_assert!(r.len() <= w.len());
        prop_assert!(r.is_reduced());
    }

    #[test]
    fn reduce_is_idempotent(w in raw_word(24)) {
        let r = reduce(&w);
        prop_assert_eq!(reduce(&r), r);
    }

    #[test]
    fn word_times_inverse_is_trivial(w in raw_word(24)) {
        prop_assert!(reduce(&w.concat(&w.inverse())).is_empty());
        prop_assert!(reduce(&w.inverse().concat(&w)).is_empty());
    }

    #[test]
    fn render_round_trips(w in reduced_word(24)) {
        prop_assert_eq!(reduce(&parse_word(&w.render()).unwrap()), w);
    }

    #[test]
    fn cyclic_reduce_postconditions(w in reduced_word(16)) {
        let (core, conj) = cyclic_reduce(&w).unwrap();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(reduce(&conj.concat(&core).concat(&conj.inverse())), w.clone());
        let (weak, wconj) = weak_cyclic_reduce(&w).unwrap();
        prop_assert!(weak.is_weakly_cyclically_reduced());
        prop_assert_eq!(reduce(&wconj.concat(&weak).concat(&wconj.inverse())), w);
    }

    #[test]
    fn density_is_monotone(w in reduced_word(16), a in 1u64..=12, b in 1u64..=12) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let strong = Rational::new(hi, 12);
        let weak = Rational::new(lo, 12);
        if is_epsilon_dense(&w, strong).unwrap() {
            prop_assert!(is_epsilon_dense(&w, weak).unwrap());
        }
    }

    #[test]
    fn one_dense_iff_distinct(gens in proptest::collection::vec(0u32..6, 0..8)) {
        let letters: Vec<Letter> = gens.iter().map(|&g| Letter::gen(g)).collect();
        let w = reduce(&Word::unreduced(letters));
        let distinct = distinct_letter_count(&w) == w.len();
        prop_assert_eq!(is_epsilon_dense(&w, Rational::ONE).unwrap(), distinct);
        if distinct {
            for l in w.letters() {
                prop_assert!(is_epsilon_dense(&Word::from_letters(vec![*l]), Rational::ONE).unwrap());
            }
        }
    }
}

#[test]
fn worked_examples() {
    assert_eq!(parse_word("x0 x1^2").unwrap().to_string(), "x0 x1^2");
    assert!(parse_word("1").unwrap().is_empty());
    let raw = parse_word("x0 x0").unwrap();
    assert!(!raw.is_reduced());
    assert_eq!(raw.len(), 2);
    assert_eq!(reduce(&raw).to_string(), "x0^2");
    assert!(reduce(&parse_word("x0 x1 x1^2 x0^2").unwrap()).is_empty());
    assert!(reduce(&parse_word("x0 x0 x0").unwrap()).is_empty());
    assert!(parse_word("x3^-1").is_err());
    assert!(parse_word("x-1").is_err());
    assert!(parse_word("y0").is_err());

    let w = |s: &str| reduce(&parse_word(s).unwrap());
    assert_eq!(distinct_letter_count(&w("x1 x2 x1^2 x3^2")), 3);
    assert_eq!(distinct_letter_count(&w("x5 x5^2")), 0);
    assert_eq!(distinct_letter_count(&parse_word("x5 x5^2").unwrap()), 1);
    assert!(is_epsilon_dense(&w("x1 x2 x1^2 x3^2"), Rational::new(1, 2)).unwrap());
    assert!(is_epsilon_dense(&w("x4"), Rational::ONE).unwrap());
    assert!(!is_epsilon_dense(&w("x0 x1 x0 x1"), Rational::ONE).unwrap());
    assert!(is_epsilon_dense(&w("x0"), Rational::ZERO).is_err());

    let windows: Vec<String> = cyclic_windows(&w("x0 x1 x2"), 2).unwrap().map(|v| v.to_string()).collect();
    assert_eq!(windows, ["x0 x1", "x1 x2", "x2 x0"]);
    assert!(cyclic_windows(&w("x0 x1"), 3).is_err());
    assert!(cyclic_windows(&w("x0 x1 x0"), 1).is_err());
}
