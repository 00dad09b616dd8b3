use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use provtop::dmap::SymbolicDMap;
use provtop::formula::{parse, random_formula};
use provtop::icard::{eval_word, min_word, word_entails};
use provtop::kripke::{gl_decide, model_check_tree, random_tree, Tree};
use provtop::space::enumerate::random_space;
use provtop::space::PointSet;
use provtop::{Ordinal, Word};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    any::<u64>().prop_map(|s| Ordinal::random(&mut rng(s), 3, 3, 5))
}

fn word(max_len: usize, max_index: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..=max_index, 0..=max_len).prop_map(Word::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ordinal_order_is_total(a in ordinal(), b in ordinal()) {
        let rels = [a < b, a == b, a > b].iter().filter(|&&x| x).count();
        prop_assert_eq!(rels, 1);
    }

    #[test]
    fn addition_is_associative(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn addition_is_monotone_on_the_right(a in ordinal(), b in ordinal(), c in ordinal()) {
        if b < c {
            prop_assert!(a.add(&b) < a.add(&c));
        }
        prop_assert!(a.add(&b) >= b);
    }

    #[test]
    fn left_subtraction_inverts_addition(a in ordinal(), b in ordinal()) {
        let s = a.add(&b);
        let d = s.sub_left(&a).unwrap();
        prop_assert_eq!(a.add(&d), s.clone());
        if b.is_zero() || a.is_zero() {
            prop_assert_eq!(d, b);
        }
    }

    #[test]
    fn ell_reads_the_last_exponent(g in ordinal(), b in ordinal()) {
        prop_assert_eq!(g.add(&Ordinal::omega_pow(b.clone())).ell(), b);
    }

    #[test]
    fn ordinal_text_roundtrip(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Ordinal>(&json).unwrap(), a);
    }

    #[test]
    fn pointset_algebra(a in any::<u16>(), b in any::<u16>()) {
        let (x, y) = (PointSet(a as u64), PointSet(b as u64));
        prop_assert_eq!((x | y).len() + (x & y).len(), x.len() + y.len());
        prop_assert_eq!(x.minus(y) | (x & y), x);
        prop_assert_eq!(x.complement(16).complement(16), x);
        prop_assert_eq!(PointSet::from_points(x.iter()), x);
    }

    #[test]
    fn derivative_is_additive_and_monotone(seed in any::<u64>(), n in 1usize..=7, a in any::<u8>(), b in any::<u8>()) {
        let x = random_space(&mut rng(seed), n);
        let mask = PointSet::full(n);
        let (a, b) = (PointSet(a as u64) & mask, PointSet(b as u64) & mask);
        prop_assert_eq!(x.derivative(a | b), x.derivative(a) | x.derivative(b));
        prop_assert!(x.derivative(a & b).is_subset(x.derivative(a)));
        prop_assert_eq!(x.closure(a), a | x.derivative(a));
        prop_assert_eq!(x.derivative(a), x.derivative_by_definition(a));
    }

    #[test]
    fn scattered_spaces_have_ranks(seed in any::<u64>(), n in 1usize..=7) {
        let x = random_space(&mut rng(seed), n);
        if let Some(r) = x.cb_rank() {
            let ranks = x.ranks();
            prop_assert!(ranks.iter().all(|k| k.is_some_and(|k| k < r)));
            let map = x.rank_map().unwrap();
            prop_assert!(map.is_onto() && map.is_dmap());
        }
    }

    #[test]
    fn formula_text_roundtrip(seed in any::<u64>()) {
        let phi = random_formula(&mut rng(seed), 3, 3, 6);
        prop_assert_eq!(parse(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn tree_json_roundtrip(seed in any::<u64>(), n in 1usize..=12) {
        let t = random_tree(&mut rng(seed), n);
        let back: Tree = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert!(Tree::from_shape(&t.shape()).is_isomorphic(&t));
        prop_assert!(t.decompose().build().unwrap().is_isomorphic(&t));
    }

    #[test]
    fn gl_verdicts_are_sound(seed in any::<u64>()) {
        let phi = random_formula(&mut rng(seed), 3, 3, 5);
        let v = gl_decide(&phi).unwrap();
        if let Some(m) = v.countermodel {
            prop_assert!(!model_check_tree(&m.tree, &m.valuation, &phi).unwrap().contains(m.node));
        }
    }

    #[test]
    fn dmap_preserves_rank(seed in any::<u64>(), n in 1usize..=7) {
        let mut r = rng(seed);
        let t = random_tree(&mut r, n);
        let f = SymbolicDMap::build(&t);
        for xi in f.sample_points(&mut r, 40) {
            let x = f.apply(&xi).unwrap();
            prop_assert_eq!(xi.ell(), Ordinal::from(t.node_height(x) as u64));
        }
    }

    #[test]
    fn shifting_a_word_composes_with_ell(w in word(4, 2), a in ordinal()) {
        prop_assert_eq!(eval_word(&w.shift_up(), &a).unwrap(), eval_word(&w, &a.ell()).unwrap());
    }

    #[test]
    fn higher_diamonds_imply_lower(w in word(3, 2), a in ordinal(), n in 1u32..=3) {
        if eval_word(&w.prefixed(n), &a).unwrap() {
            for m in 0..n {
                prop_assert!(eval_word(&w.prefixed(m), &a).unwrap());
            }
        }
    }

    #[test]
    fn diamonds_are_transitive(w in word(3, 2), a in ordinal(), n in 0u32..=2) {
        if eval_word(&w.prefixed(n).prefixed(n), &a).unwrap() {
            prop_assert!(eval_word(&w.prefixed(n), &a).unwrap());
        }
    }

    #[test]
    fn entailment_orders_minima(v in word(4, 2), w in word(4, 2)) {
        if word_entails(&v, &w).unwrap() {
            prop_assert!(min_word(&v).unwrap() >= min_word(&w).unwrap());
        }
    }

    #[test]
    fn no_point_below_the_minimum_satisfies_a_word(w in word(4, 2), a in ordinal()) {
        let m = min_word(&w).unwrap();
        if eval_word(&w, &a).unwrap() {
            prop_assert!(a >= m);
        }
    }
}
