use std::collections::BTreeMap;

use proptest::prelude::*;

use lingual::lang::{compile_expr, enumerate_dfa, regular_automaton, Cfg, Dfa, OrderedExpr};
use lingual::poly::{q, Poly, Q};
use lingual::series::{
    cfg_count, dfa_series, egf_agrees, egf_convert, expand, fit_rational, linear_form, NormedAlphabet,
    RationalSeries,
};
use lingual::{Alphabet, Error, Limits};

fn abc() -> Alphabet {
    Alphabet::parse("abc").unwrap()
}

fn expr() -> impl Strategy<Value = OrderedExpr> {
    let atom = prop_oneof![
        prop::sample::select(b"abc".as_slice()).prop_map(OrderedExpr::Singleton),
        prop::collection::btree_set(prop::sample::select(b"abc".as_slice()), 1..=3).prop_map(OrderedExpr::Star),
    ];
    prop::collection::vec(prop::collection::vec(atom, 0..=4).prop_map(OrderedExpr::Concat), 1..=2)
        .prop_map(OrderedExpr::Union)
}

fn automaton(e: &OrderedExpr) -> Dfa {
    match compile_expr(e, &abc()) {
        Ok(d) => d,
        Err(Error::NotOrderedLanguage(_)) => regular_automaton(e, &abc(), &Limits::default()).unwrap(),
        Err(other) => panic!("{other}"),
    }
}

fn series() -> impl Strategy<Value = RationalSeries> {
    (
        prop::collection::vec(-4i64..=4, 1..=4),
        prop::collection::vec((1i64..=3, 1u32..=2), 0..=3),
    )
        .prop_map(|(num, factors)| {
            let num: Vec<Q> = num.into_iter().map(q).collect();
            RationalSeries::new(
                Poly::from_coeffs(&num),
                factors.into_iter().map(|(j, e)| (linear_form(j), e)).collect(),
            )
            .unwrap()
        })
}

fn coeffs(s: &RationalSeries, n: usize) -> Vec<Q> {
    expand(s, n).unwrap().to_vec(n + 1)
}

proptest! {
    #[test]
    fn automaton_series_counts_words(e in expr()) {
        let d = automaton(&e);
        let s = dfa_series(&d, &NormedAlphabet::by_length(&abc())).unwrap();
        let mut counts = vec![q(0); 8];
        for w in enumerate_dfa(&d, 7, &Limits::default()).unwrap() {
            counts[w.len()] += q(1);
        }
        prop_assert_eq!(coeffs(&s, 7), counts);
    }

    #[test]
    fn multigraded_series_counts_letters(e in expr()) {
        let d = automaton(&e);
        let s = dfa_series(&d, &NormedAlphabet::by_letter(&abc())).unwrap();
        let table = expand(&s, 5).unwrap();
        let mut counts: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for w in enumerate_dfa(&d, 5, &Limits::default()).unwrap() {
            let e: Vec<u32> = b"abc".iter().map(|&c| w.count(c) as u32).collect();
            *counts.entry(e).or_insert_with(|| q(0)) += q(1);
        }
        let got: BTreeMap<Vec<u32>, Q> = table.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        prop_assert_eq!(got, counts);
    }

    #[test]
    fn derivation_counts_of_a_right_linear_grammar(e in expr()) {
        // S_s -> c S_t for every transition, S_s -> ε at final states
        let d = automaton(&e).trim();
        let names: Vec<char> = (0..d.num_states()).map(|s| (b'A' + s as u8) as char).collect();
        let mut bodies = Vec::new();
        for s in 0..d.num_states() {
            for (li, &c) in abc().letters().iter().enumerate() {
                bodies.push((names[s], format!("{}{}", c as char, names[d.step_index(s, li)])));
            }
            if d.is_final(s) {
                bodies.push((names[s], String::new()));
            }
        }
        let rules: Vec<(char, &str)> = bodies.iter().map(|(h, b)| (*h, b.as_str())).collect();
        let g = Cfg::new(abc(), &names, names[d.initial()], &rules).unwrap();
        let counted = cfg_count(&g, &NormedAlphabet::by_length(&abc()), 6, &Limits::default()).unwrap();
        let s = dfa_series(&d, &NormedAlphabet::by_length(&abc())).unwrap();
        prop_assert_eq!(counted.to_vec(7), coeffs(&s, 6));
    }

    #[test]
    fn arithmetic_matches_coefficients(a in series(), b in series()) {
        let (ca, cb) = (coeffs(&a, 8), coeffs(&b, 8));
        let sum: Vec<Q> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
        prop_assert_eq!(coeffs(&a.add(&b), 8), sum);
        let diff: Vec<Q> = ca.iter().zip(&cb).map(|(x, y)| x - y).collect();
        prop_assert_eq!(coeffs(&a.sub(&b), 8), diff);
        let prod: Vec<Q> = (0..=8)
            .map(|n| (0..=n).map(|i| &ca[i] * &cb[n - i]).fold(q(0), |x, y| x + y))
            .collect();
        prop_assert_eq!(coeffs(&a.mul(&b), 8), prod);
        prop_assert_eq!(coeffs(&a.reduce(), 8), ca);
    }

    #[test]
    fn record_round_trip(a in series()) {
        let json = serde_json::to_string(&a).unwrap();
        let back: RationalSeries = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn exponential_form_agrees(a in series()) {
        let g = egf_convert(&a).unwrap();
        prop_assert!(egf_agrees(&a, &g, 12).unwrap());
    }

    #[test]
    fn fit_recovers_the_series(a in series()) {
        let den: Vec<(Poly, u32)> = a.factors().iter().map(|f| (f.form.clone(), f.exponent)).collect();
        let num_degree = a.numerator().total_degree().unwrap_or(0) as usize;
        let c = coeffs(&a, 14);
        let fitted = fit_rational(&c, &den, num_degree).unwrap();
        prop_assert_eq!(coeffs(&fitted, 14), c);
    }
}
