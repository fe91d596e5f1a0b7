use std::collections::BTreeSet;

use proptest::prelude::*;

use lingual::lang::{
    compile_expr, concat_singleton, concat_star, dfa_to_expr, enumerate_dfa, enumerate_expr, ideal_to_expr,
    ordered_union, regular_automaton, Dfa, OrderedExpr,
};
use lingual::poset::{ideal_member, PosetIdeal, WordOrder};
use lingual::word::words_up_to;
use lingual::{Alphabet, Error, Limits, Word};

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn letter_set() -> impl Strategy<Value = BTreeSet<u8>> {
    prop::collection::btree_set(prop::sample::select(b"ab".as_slice()), 1..=2)
}

fn atom() -> impl Strategy<Value = OrderedExpr> {
    prop_oneof![
        prop::sample::select(b"ab".as_slice()).prop_map(OrderedExpr::Singleton),
        letter_set().prop_map(OrderedExpr::Star),
    ]
}

fn expr() -> impl Strategy<Value = OrderedExpr> {
    prop::collection::vec(prop::collection::vec(atom(), 0..=3).prop_map(OrderedExpr::Concat), 1..=2)
        .prop_map(OrderedExpr::Union)
}

fn lang_dfa(d: &Dfa, n: usize) -> BTreeSet<Word> {
    enumerate_dfa(d, n, &Limits::default()).unwrap().into_iter().collect()
}

fn lang_expr(e: &OrderedExpr, n: usize) -> BTreeSet<Word> {
    enumerate_expr(e, n, &Limits::default()).unwrap().into_iter().collect()
}

proptest! {
    #[test]
    fn compiled_language_matches_expansion(e in expr()) {
        match compile_expr(&e, &ab()) {
            Ok(d) => {
                prop_assert!(d.is_ordered());
                prop_assert_eq!(lang_dfa(&d, 6), lang_expr(&e, 6));
                let back = dfa_to_expr(&d).unwrap();
                prop_assert_eq!(lang_expr(&back, 6), lang_expr(&e, 6));
            }
            Err(Error::NotOrderedLanguage(_)) => {
                let d = regular_automaton(&e, &ab(), &Limits::default()).unwrap();
                prop_assert_eq!(lang_dfa(&d, 6), lang_expr(&e, 6));
                prop_assert!(!d.minimize().is_ordered());
            }
            Err(other) => prop_assert!(false, "{}", other),
        }
    }

    #[test]
    fn minimize_keeps_language(e in expr()) {
        let d = regular_automaton(&e, &ab(), &Limits::default()).unwrap();
        let m = d.minimize();
        prop_assert!(m.num_states() <= d.trim().num_states());
        prop_assert_eq!(lang_dfa(&m, 6), lang_dfa(&d, 6));
        prop_assert_eq!(m.minimize(), m);
    }

    #[test]
    fn constructions_match_word_operations(e in expr(), f in expr(), p in letter_set(), c in prop::sample::select(b"ab".as_slice())) {
        let (Ok(x), Ok(y)) = (compile_expr(&e, &ab()), compile_expr(&f, &ab())) else {
            return Ok(());
        };
        let lx = lang_dfa(&x, 6);
        let ly = lang_dfa(&y, 6);
        let u = ordered_union(&x, &y).unwrap();
        prop_assert!(u.is_ordered());
        prop_assert_eq!(lang_dfa(&u, 6), lx.union(&ly).cloned().collect::<BTreeSet<_>>());

        let starred = concat_star(&x, &p).unwrap();
        prop_assert!(starred.is_ordered());
        let expected: BTreeSet<Word> = words_up_to(&ab(), 6)
            .into_iter()
            .filter(|w| (0..=w.len()).any(|k| {
                lx.contains(&Word::new(w.letters()[..k].to_vec()))
                    && w.letters()[k..].iter().all(|l| p.contains(l))
            }))
            .collect();
        prop_assert_eq!(lang_dfa(&starred, 6), expected);

        let expected: BTreeSet<Word> = lx.iter().filter(|w| w.len() < 6).map(|w| {
            let mut v = w.letters().to_vec();
            v.push(c);
            Word::new(v)
        }).collect();
        match concat_singleton(&x, c) {
            Ok(d) => {
                prop_assert!(d.is_ordered());
                prop_assert_eq!(lang_dfa(&d, 6), expected);
            }
            Err(Error::NotOrderedLanguage(_)) => {}
            Err(other) => prop_assert!(false, "{}", other),
        }
    }

    #[test]
    fn os_ideal_languages(gens in prop::collection::vec("1[12]{0,3}", 1..=3)) {
        let alphabet = Alphabet::parse("12").unwrap();
        let order = WordOrder::os(alphabet.clone());
        let words: Vec<Word> = gens.iter().map(|g| Word::from(g.as_str())).collect();
        let ideal = PosetIdeal::new(order, &words).unwrap();
        let e = ideal_to_expr(&ideal).unwrap();
        let d = compile_expr(&e, &alphabet).unwrap();
        prop_assert!(d.is_ordered());
        for w in words_up_to(&alphabet, 7) {
            prop_assert_eq!(d.accepts(&w).unwrap(), ideal_member(&ideal, &w).unwrap(), "{}", w);
        }
    }

    #[test]
    fn oi_ideal_languages(gens in prop::collection::vec("[12]{0,2}0[12]{0,2}", 1..=2)) {
        let alphabet = Alphabet::parse("012").unwrap();
        let order = WordOrder::oi(2).unwrap();
        let words: Vec<Word> = gens.iter().map(|g| Word::from(g.as_str())).collect();
        let ideal = PosetIdeal::new(order, &words).unwrap();
        let e = ideal_to_expr(&ideal).unwrap();
        let d = compile_expr(&e, &alphabet).unwrap();
        prop_assert!(d.is_ordered());
        for w in words_up_to(&alphabet, 6) {
            if w.count(b'0') == 1 {
                prop_assert_eq!(d.accepts(&w).unwrap(), ideal_member(&ideal, &w).unwrap(), "{}", w);
            } else {
                prop_assert!(!d.accepts(&w).unwrap());
            }
        }
    }

    #[test]
    fn dfa_records_round_trip(e in expr()) {
        if let Ok(d) = compile_expr(&e, &ab()) {
            let json = serde_json::to_string(&d).unwrap();
            let back: Dfa = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
