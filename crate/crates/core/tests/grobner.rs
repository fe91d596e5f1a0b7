use std::collections::BTreeSet;

use proptest::prelude::*;

use lingual::category::{hom_count, hom_words, CategoryId};
use lingual::grobner::{
    initial_module, is_groebner_up_to, module_series, quotient_series, span_generators, ModuleElement,
};
use lingual::poly::{q, q_int};
use lingual::poset::{ideal_member, PosetIdeal, WordOrder};
use lingual::series::expand;
use lingual::{Alphabet, Limits};

const D: usize = 5;

/// A category, a source size, and generators given as lists of
/// `(hom index, coefficient)` at a chosen target size.
fn setup() -> impl Strategy<Value = (CategoryId, usize, Vec<(usize, Vec<(usize, i64)>)>)> {
    let cat = prop::sample::select(vec![CategoryId::Oi(1), CategoryId::Oi(2), CategoryId::Os]);
    let gen = (0usize..=2, prop::collection::vec((any::<usize>(), -2i64..=2), 1..=3));
    (cat, 0usize..=1, prop::collection::vec(gen, 0..=2))
}

fn build(cat: &CategoryId, n: usize, spec: &[(usize, Vec<(usize, i64)>)]) -> Vec<ModuleElement> {
    spec.iter()
        .map(|(extra, terms)| {
            let target = n + extra;
            let pool = hom_words(cat, n, target, &Limits::default()).unwrap();
            ModuleElement::from_terms(
                target,
                terms.iter().map(|(i, c)| ((0, pool[i % pool.len()].clone()), q(*c))),
            )
            .unwrap()
        })
        .collect()
}

fn word_order(cat: &CategoryId, n: usize) -> WordOrder {
    match cat {
        CategoryId::Oi(d) => WordOrder::oi(*d).unwrap(),
        CategoryId::Os => WordOrder::os(Alphabet::digits_from_one(n).unwrap()),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn initial_ideal_has_the_same_dimensions((cat, n, spec) in setup()) {
        let n = if cat == CategoryId::Os { n + 1 } else { n };
        let gens = build(&cat, n, &spec);
        let m = span_generators(&cat, &[n], &gens, D, &Limits::default()).unwrap();
        let init = initial_module(&m).unwrap();
        let words: Vec<_> = init.generators().iter().map(|(_, w)| w.word().clone()).collect();
        let ideal = PosetIdeal::new(word_order(&cat, n), &words).unwrap();
        let series = expand(&module_series(&init).unwrap(), D).unwrap().to_vec(D + 1);
        let quotient = expand(&quotient_series(&init).unwrap(), D).unwrap().to_vec(D + 1);
        for deg in 0..=D {
            let pivots: BTreeSet<_> = m.initial_monomials(deg).into_iter().collect();
            prop_assert_eq!(pivots.len(), m.dim(deg));
            let members: BTreeSet<_> = hom_words(&cat, n, deg, &Limits::default())
                .unwrap()
                .into_iter()
                .filter(|w| ideal_member(&ideal, w.word()).unwrap())
                .map(|w| (0, w))
                .collect();
            prop_assert_eq!(&pivots, &members, "degree {}", deg);
            prop_assert_eq!(&series[deg], &q(m.dim(deg) as i64));
            let total = q_int(hom_count(&cat, n, deg).unwrap());
            prop_assert_eq!(&quotient[deg], &(total - q(m.dim(deg) as i64)));
        }
    }

    #[test]
    fn generators_and_their_images_lie_in_the_span((cat, n, spec) in setup()) {
        let n = if cat == CategoryId::Os { n + 1 } else { n };
        let gens = build(&cat, n, &spec);
        let m = span_generators(&cat, &[n], &gens, D, &Limits::default()).unwrap();
        for g in &gens {
            prop_assert!(m.contains(g).unwrap());
            for h in hom_words(&cat, g.target(), (g.target() + 1).min(D), &Limits::default()).unwrap() {
                prop_assert!(m.contains(&g.apply(&cat, &h).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn the_echelon_basis_is_a_groebner_basis((cat, n, spec) in setup()) {
        let n = if cat == CategoryId::Os { n + 1 } else { n };
        let gens = build(&cat, n, &spec);
        let m = span_generators(&cat, &[n], &gens, D, &Limits::default()).unwrap();
        let basis: Vec<_> = (0..=D).flat_map(|deg| m.basis(deg)).collect();
        prop_assert!(is_groebner_up_to(&m, &basis, D).unwrap());
        // a single element of a module with more than one initial generator is never enough
        let init = initial_module(&m).unwrap();
        if init.generators().len() > 1 {
            prop_assert!(!is_groebner_up_to(&m, &basis[..1], D).unwrap());
        }
    }
}
