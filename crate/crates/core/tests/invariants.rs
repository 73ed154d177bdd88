//! Property tests over randomly generated expressions, words and graphs.
//! Each case is drawn from a proptest-chosen seed so that failures shrink
//! to a reproducible seed.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rewb::eval::member_by_semantics;
use rewb::random::{random_expr, random_graph, random_valuation, random_word, GenConfig};
use rewb::witness::{is_mismatch, mismatch_samples};
use rewb::{
    alpha_rename, classify, eval_flat, eval_stratified, free_vars, is_alpha_renamed, member, parse_expr, print_expr,
    register_nfa, to_unf, Rewb,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn levels_are_bounded(seed in any::<u64>()) {
        let e = random_expr(&mut rng(seed), &GenConfig::new(14, &["a", "b"], &["x", "y"], &["1"]));
        let l = classify(&e);
        prop_assert!(l.e_level >= 1);
        prop_assert!(l.f_level <= l.e_level && l.e_level <= l.f_level + 1, "{}", l);
    }

    #[test]
    fn renaming_keeps_meaning(seed in any::<u64>()) {
        let cfg = GenConfig::small();
        let mut r = rng(seed);
        let e = random_expr(&mut r, &cfg);
        let renamed = alpha_rename(&e);
        prop_assert!(is_alpha_renamed(&renamed));
        prop_assert_eq!(free_vars(&renamed), free_vars(&e));
        let nu = random_valuation(&mut r, &cfg, &free_vars(&e));
        for _ in 0..20 {
            let w = random_word(&mut r, &cfg, 5);
            prop_assert_eq!(member(&e, &w, &nu).unwrap(), member(&renamed, &w, &nu).unwrap());
        }
    }

    #[test]
    fn register_automaton_matches_semantics(seed in any::<u64>()) {
        let cfg = GenConfig::small();
        let mut r = rng(seed);
        let e = alpha_rename(&random_expr(&mut r, &cfg));
        let nfa = register_nfa(&e).unwrap();
        let nu = random_valuation(&mut r, &cfg, &free_vars(&e));
        for _ in 0..30 {
            let w = random_word(&mut r, &cfg, 5);
            let by_automaton = nfa.accepts(&w, &nu).map_err(|e| e.to_string());
            let by_semantics = member_by_semantics(&e, &w, &nu).map_err(|e| e.to_string());
            prop_assert_eq!(by_automaton, by_semantics);
        }
    }

    #[test]
    fn union_normal_form_keeps_meaning(seed in any::<u64>()) {
        let cfg = GenConfig::small();
        let mut r = rng(seed);
        let e = random_expr(&mut r, &cfg);
        let union = Rewb::union_all(to_unf(&e)).unwrap();
        let nu = random_valuation(&mut r, &cfg, &free_vars(&e));
        for _ in 0..20 {
            let w = random_word(&mut r, &cfg, 5);
            prop_assert_eq!(member(&e, &w, &nu).unwrap(), member(&union, &w, &nu).unwrap());
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let e = random_expr(&mut rng(seed), &GenConfig::new(20, &["a", "b"], &["x", "y"], &["1"]));
        prop_assert_eq!(parse_expr(&print_expr(&e)).unwrap(), e);
    }

    #[test]
    fn flat_and_stratified_agree(seed in any::<u64>()) {
        let cfg = GenConfig::small();
        let mut r = rng(seed);
        let e = random_expr(&mut r, &cfg);
        let g = random_graph(&mut r, &cfg, 4, 8);
        let nu = random_valuation(&mut r, &cfg, &free_vars(&e));
        prop_assert_eq!(eval_flat(&e, &g, &nu).unwrap(), eval_stratified(&e, &g, &nu).unwrap());
    }

    #[test]
    fn mismatch_samples_are_mismatches(seed in any::<u64>(), i in 1usize..=2, n in 2usize..=3) {
        for w in mismatch_samples(i, n, 5, seed).unwrap() {
            prop_assert!(is_mismatch(&w, i, n).is_some());
        }
    }
}
