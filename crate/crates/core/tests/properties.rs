mod common;

use nakamura_core::aggregation::{core, dominance, random_relation, Profile};
use nakamura_core::axioms::{classify, monotone_closure};
use nakamura_core::coalition::Coalition;
use nakamura_core::constructions::product::{disjoint_image, product_finite, Pairing};
use nakamura_core::effectivity::{alpha_effective, exactly_effective, GameForm};
use nakamura_core::nakamura::{check_lemmas, lemma_constraints, nakamura_number};
use nakamura_core::{FiniteGame, NakamuraValue};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn game(max_universe: usize) -> impl Strategy<Value = FiniteGame> {
    (1..=max_universe).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |table| FiniteGame::from_predicate(n, |m| table[m as usize]).unwrap())
    })
}

fn proper_game(max_universe: usize) -> impl Strategy<Value = FiniteGame> {
    game(max_universe).prop_map(|g| {
        let masks = g.winning_masks().iter().copied().filter(|&m| m != 0).collect::<Vec<_>>();
        FiniteGame::from_masks(g.universe(), masks).unwrap()
    })
}

fn meet(g: &FiniteGame, family: &[Coalition]) -> u64 {
    family.iter().fold(g.full_mask(), |acc, c| acc & c.mask())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solver_matches_definition(g in game(5)) {
        let r = nakamura_number(&g);
        prop_assert_eq!(r.value, common::naive_nakamura(g.universe(), &common::winning_list(&g)));
        if let NakamuraValue::Finite(v) = r.value {
            prop_assert_eq!(r.witness.len(), v);
            prop_assert!(r.witness.iter().all(|c| g.wins(c.mask())));
            prop_assert_eq!(meet(&g, &r.witness), 0);
        }
    }

    #[test]
    fn nu_respects_lemma_bounds(g in proper_game(5)) {
        let sig = classify(&g).unwrap().signature;
        let nu = nakamura_number(&g).value;
        prop_assert!(lemma_constraints(&sig, true).unwrap().contains(nu));
        for check in check_lemmas(&g).unwrap() {
            prop_assert!(check.holds, "{} fails on {:?}", check.lemma, g.to_lists());
        }
    }

    #[test]
    fn monotone_closure_is_least_monotone_extension(g in game(4)) {
        let c = monotone_closure(&g).unwrap();
        prop_assert!(classify(&c).unwrap().signature.monotonic);
        for m in 0..1u64 << g.universe() {
            if g.wins(m) {
                prop_assert!(c.wins(m));
            }
            let from_below = g.winning_masks().iter().any(|&w| w & m == w);
            prop_assert_eq!(c.wins(m), from_below);
        }
    }

    #[test]
    fn classification_survives_embedding(g in game(4), extra in 1usize..3) {
        let big = g.embed(g.universe() + extra).unwrap();
        prop_assert_eq!(classify(&g).unwrap().signature, classify(&big).unwrap().signature);
        prop_assert_eq!(nakamura_number(&g).value, nakamura_number(&big).value);
    }

    #[test]
    fn disjoint_images_decompose(s1 in 0u64..8, s2 in 0u64..8, shift in any::<bool>()) {
        let pr = if shift { Pairing::Shift { k: 3 } } else { Pairing::EvenOdd };
        let c1 = Coalition::from_mask(s1, 3).unwrap();
        let c2 = Coalition::from_mask(s2, 3).unwrap();
        let s = disjoint_image(&c1, &c2, &pr).unwrap();
        prop_assert_eq!(pr.decompose_mask(s.mask()), (s1, s2));
        let comp = disjoint_image(&c1.complement(), &c2.complement(), &pr).unwrap();
        prop_assert_eq!(comp.mask(), s.complement().mask());
    }

    #[test]
    fn product_preserves_axioms(g1 in proper_game(3), g2 in proper_game(3), shift in any::<bool>()) {
        let pr = if shift { Pairing::Shift { k: g1.universe() } } else { Pairing::EvenOdd };
        let p = product_finite(&g1, &g2, &pr).unwrap();
        let s1 = classify(&g1).unwrap().signature;
        let s2 = classify(&g2).unwrap().signature;
        let sp = classify(&p).unwrap().signature;
        let nonempty = !g1.is_empty_game() && !g2.is_empty_game();
        for a in 0..1u64 << g1.universe() {
            for b in 0..1u64 << g2.universe() {
                let s = disjoint_image(
                    &Coalition::from_mask(a, g1.universe()).unwrap(),
                    &Coalition::from_mask(b, g2.universe()).unwrap(),
                    &pr,
                )
                .unwrap();
                prop_assert_eq!(p.wins(s.mask()), g1.wins(a) && g2.wins(b));
            }
        }
        if s1.monotonic && s2.monotonic {
            prop_assert!(sp.monotonic);
        }
        if sp.monotonic && nonempty {
            prop_assert!(s1.monotonic && s2.monotonic);
        }
        if s1.proper || s2.proper {
            prop_assert!(sp.proper);
        }
        let has_losing = |g: &FiniteGame| g.winning_count() < 1 << g.universe();
        if !s1.strong || !s2.strong || (has_losing(&g1) && has_losing(&g2)) {
            prop_assert!(!sp.strong);
        }
        if s1.nonweak && s2.nonweak {
            prop_assert!(sp.nonweak);
            let expect = nakamura_number(&g1).value.max(nakamura_number(&g2).value);
            prop_assert_eq!(nakamura_number(&p).value, expect);
        }
    }

    #[test]
    fn dominance_grows_with_the_game(g in proper_game(3), seed in any::<u64>(), m in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = g.universe();
        let profile = Profile::new((0..n).map(|_| random_relation(m, &mut rng)).collect()).unwrap();
        let bigger = monotone_closure(&g).unwrap();
        let d = dominance(&g, &profile).unwrap();
        let d2 = dominance(&bigger, &profile).unwrap();
        for (x, y) in d.pairs() {
            prop_assert!(d2.prefers(x, y));
        }
        let c = core(&g, &profile).unwrap();
        for x in core(&bigger, &profile).unwrap() {
            prop_assert!(c.contains(&x));
        }
        if let NakamuraValue::Finite(v) = nakamura_number(&g).value {
            if m < v {
                prop_assert!(!c.is_empty());
            }
        } else {
            prop_assert!(!c.is_empty() || g.is_empty_game());
        }
    }

    #[test]
    fn alpha_effectivity_is_exact_effectivity_below(
        k in 1usize..=4,
        outcomes in 2usize..=3,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = (0..outcomes).map(|i| format!("x{i}")).collect();
        let gf = GameForm::from_fn(vec![2; k], labels, |_| rng.gen_range(0..outcomes)).unwrap();
        for s in 0..1u64 << k {
            let s = Coalition::from_mask(s, k).unwrap();
            for b in 0..1u64 << outcomes {
                let alpha = alpha_effective(&gf, &s, b).unwrap();
                let below = (0..=b).filter(|&b2| b2 & !b == 0).any(|b2| exactly_effective(&gf, &s, b2).unwrap());
                prop_assert_eq!(alpha, below);
                for b2 in 0..1u64 << outcomes {
                    if b & !b2 == 0 && alpha {
                        prop_assert!(alpha_effective(&gf, &s, b2).unwrap());
                    }
                }
            }
        }
    }
}
