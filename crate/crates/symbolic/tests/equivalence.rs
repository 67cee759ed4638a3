mod common;

use common::{entries, permutation, plain, random_relabel, random_term};
use gft_symbolic::equiv::{auid, equivalent, equivalent_brute_force};
use gft_symbolic::{canonicalize, TermContainer};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn equivalence_matches_brute_force_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_e0);
    let (mut agree_true, mut disagreements) = (0usize, Vec::new());
    for i in 0..10_000 {
        let observable = i % 2 == 1;
        let t1 = random_term(&mut rng, 5, 6, observable);
        // Half the pairs are relabelings, some of them with one entry moved,
        // the rest are independent draws with the same shape.
        let t2 = match rng.random_range(0..4) {
            0 | 1 => random_relabel(&mut rng, &t1, 6),
            2 => {
                let mut t = random_relabel(&mut rng, &t1, 6);
                let f = rng.random_range(0..t.factors.len());
                if let Some(&((x, y), _)) = t.factors[f].entries().first() {
                    t.factors[f].remove_one(x, y);
                    t.factors[f].insert(x, x, 1);
                }
                t
            }
            _ => random_term(&mut rng, 5, 6, observable),
        };
        let fast = equivalent(&t1, &t2).unwrap();
        let slow = equivalent_brute_force(&t1, &t2);
        if fast != slow {
            disagreements.push((t1.to_text(), t2.to_text(), fast));
        }
        agree_true += usize::from(fast && slow);
    }
    assert!(disagreements.is_empty(), "{} disagreements, first {:?}", disagreements.len(), disagreements[0]);
    // The corpus must exercise both answers.
    assert!(agree_true > 3000 && agree_true < 9000, "{agree_true} equivalent pairs");
}

#[test]
fn container_classes_follow_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let terms: Vec<_> = (0..300).map(|_| random_term(&mut rng, 4, 4, false)).collect();
    let mut c = TermContainer::new();
    let ids: Vec<_> = terms.iter().map(|t| c.insert(t).unwrap()).collect();
    for i in 0..terms.len() {
        for j in (i + 1)..terms.len() {
            assert_eq!(ids[i] == ids[j], equivalent_brute_force(&terms[i], &terms[j]));
        }
    }
}

proptest! {
    #[test]
    fn auid_and_equivalence_are_permutation_invariant(es in entries(5, 6), perm in permutation(5)) {
        let t = plain(&es);
        let s = t.relabel(|v| perm[v as usize]);
        prop_assert_eq!(auid(&t).unwrap(), auid(&s).unwrap());
        prop_assert!(equivalent(&t, &s).unwrap());
        prop_assert_eq!(canonicalize(&t).unwrap(), canonicalize(&s).unwrap());
    }

    #[test]
    fn canonical_form_preserves_degree_and_type(es in entries(5, 6)) {
        let t = plain(&es);
        let c = canonicalize(&t).unwrap();
        prop_assert_eq!(t.degree(), c.degree());
        prop_assert_eq!(t.is_type_0(), c.is_type_0());
        prop_assert_eq!(t.is_type_a(), c.is_type_a());
        prop_assert_eq!(t.is_type_ab(), c.is_type_ab());
        prop_assert!(equivalent_brute_force(&t, &c));
        prop_assert_eq!(canonicalize(&c).unwrap(), c);
    }

    #[test]
    fn canonical_forms_agree_iff_equivalent(a in entries(4, 5), b in entries(4, 5)) {
        let (s, t) = (plain(&a), plain(&b));
        let same = canonicalize(&s).unwrap() == canonicalize(&t).unwrap();
        prop_assert_eq!(same, equivalent_brute_force(&s, &t));
    }
}
