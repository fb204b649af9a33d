//! Randomized invariants of scalars, the free algebra and crystals.

use std::sync::Arc;

use num_traits::One;
use proptest::prelude::*;

use qbb::crystal::{tensor, validate_axioms, AbstractCrystal, ModelCrystal};
use qbb::freealg::{lusztig_to_kashiwara_factor, parse_element, FormKind, Forms, FreeElement, Word};
use qbb::qrat::parse_scalar;
use qbb::{BorcherdsCartanDatum, GenIndex, ScalarQ};

fn laurent() -> impl Strategy<Value = ScalarQ> {
    (-3i64..=3, prop::collection::vec(-3i64..=3, 1..4)).prop_map(|(low, c)| ScalarQ::laurent_i64(low, &c))
}

fn scalar() -> impl Strategy<Value = ScalarQ> {
    (laurent(), laurent()).prop_map(|(n, d)| if d.is_zero() { n } else { n.checked_div(&d).unwrap() })
}

/// Letters of the mixed datum: `(1,1)`, `(2,1)`, `(2,2)`.
fn letter() -> impl Strategy<Value = GenIndex> {
    prop_oneof![Just(GenIndex::new(0, 1)), Just(GenIndex::new(1, 1)), Just(GenIndex::new(1, 2))]
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(Word)
}

/// A word and a rearrangement of it, so both have the same degree.
fn word_pair(max: usize) -> impl Strategy<Value = (Word, Word)> {
    word(max).prop_flat_map(|w| {
        let v = w.0.clone();
        (Just(w), Just(v).prop_shuffle().prop_map(Word))
    })
}

fn element() -> impl Strategy<Value = FreeElement> {
    word_pair(3).prop_flat_map(|(a, b)| {
        (Just(a), Just(b), scalar(), scalar()).prop_map(|(a, b, x, y)| {
            let mut e = FreeElement::zero(a.weight(2));
            e.add_term(a, x);
            e.add_term(b, y);
            e
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn bar_is_an_involutive_ring_map(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
    }

    #[test]
    fn valuation(a in scalar(), b in scalar()) {
        if let (Some(x), Some(y)) = (a.val0(), b.val0()) {
            prop_assert_eq!((&a * &b).val0(), Some(x + y));
            if let Some(z) = (&a + &b).val0() {
                prop_assert!(z >= x.min(y));
            }
        }
    }

    #[test]
    fn scalar_text_roundtrip(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn star_and_bar_on_products(x in element(), y in element()) {
        prop_assert_eq!(x.mul(&y).star(), y.star().mul(&x.star()));
        prop_assert_eq!(x.star().star(), x.clone());
        prop_assert_eq!(x.mul(&y).bar(), x.bar().mul(&y.bar()));
    }

    #[test]
    fn element_text_roundtrip(x in element()) {
        // "0" carries no degree
        prop_assume!(!x.is_zero());
        let d = BorcherdsCartanDatum::mixed();
        prop_assert_eq!(parse_element(&d, &x.render(&d)).unwrap(), x);
    }

    #[test]
    fn forms_symmetric_and_star_invariant((a, b) in word_pair(4)) {
        let d = BorcherdsCartanDatum::mixed();
        let forms = Forms::new(Arc::new(d.clone()));
        for kind in [FormKind::Lusztig, FormKind::Kashiwara] {
            let f = forms.words(kind, &a, &b);
            prop_assert_eq!(&f, &forms.words(kind, &b, &a));
            prop_assert_eq!(&f, &forms.words(kind, &a.reversed(), &b.reversed()));
        }
        let l = forms.words(FormKind::Lusztig, &a, &b);
        prop_assert_eq!(&l * &lusztig_to_kashiwara_factor(&d, &a), forms.words(FormKind::Kashiwara, &a, &b));
    }

    #[test]
    fn model_tensors_are_crystals(a1 in prop_oneof![Just(0i64), Just(-2), Just(-4)], m1 in 0i64..3, m2 in 0i64..3) {
        let d = BorcherdsCartanDatum::rank_one(a1);
        let left = ModelCrystal::new(d.clone(), Some(m1), 3).unwrap();
        let right = ModelCrystal::new(d, Some(m2), 3).unwrap();
        let t = tensor(&left, &right);
        let rep = validate_axioms(&t, 3);
        prop_assert!(rep.passed(), "{:?}", rep.violations.first());
        for b in qbb::crystal::generate(&left, &left.sources(), 3) {
            for g in left.gens() {
                let fb = left.f(g, &b).unwrap();
                prop_assert_eq!(left.e(g, &fb), Some(b.clone()));
            }
        }
    }
}
