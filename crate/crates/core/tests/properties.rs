use proptest::prelude::*;

use starx::canon::{alpha_eq, canonicalize, congruent};
use starx::encode::{star_to_x, x_to_star};
use starx::fuzz::{linear_term, linear_x_term, rng, x_term, GenConfig};
use starx::names::{check_linear, free_names};
use starx::reduction::{simplify_with, star_redexes, star_step, StarConfig};
use starx::typing::{infer_star, typecheck_star, typecheck_x};
use starx::xcalc::{x_redexes, x_step, XConfig};
use starx::{parse, print, Term};

fn star(seed: u64, typed: bool) -> (Term, Option<starx::typing::Sequent>) {
    let s = linear_term(
        &mut rng(seed),
        GenConfig {
            typed,
            ..GenConfig::default()
        },
    );
    (s.term, s.sequent)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), typed in any::<bool>()) {
        // generated free names are fresh, so compare the text
        let (t, _) = star(seed, typed);
        let x = x_term(&mut rng(seed), 12);
        for text in [print(&t), print(&x)] {
            let back = parse(&text).unwrap();
            prop_assert_eq!(print(&back), text.clone());
            prop_assert!(alpha_eq(&back, &parse(&text).unwrap()));
        }
    }

    #[test]
    fn star_steps_keep_linearity_and_interface(seed in any::<u64>()) {
        let (t, _) = star(seed, false);
        let cfg = StarConfig::default();
        for (pos, rule) in star_redexes(&t, &cfg).unwrap() {
            let next = star_step(&t, &pos, rule, &cfg).unwrap();
            prop_assert!(check_linear(&next).is_ok(), "{rule} at {pos}: {}", print(&next));
            prop_assert_eq!(free_names(&next), free_names(&t), "{} at {}", rule, pos);
        }
    }

    #[test]
    fn star_steps_preserve_types(seed in any::<u64>()) {
        let (t, s) = star(seed, true);
        let s = s.unwrap();
        let cfg = StarConfig::default();
        for (pos, rule) in star_redexes(&t, &cfg).unwrap() {
            let next = star_step(&t, &pos, rule, &cfg).unwrap();
            prop_assert!(typecheck_star(&next, &s).is_ok(), "{rule} at {pos}: {}", print(&next));
        }
    }

    #[test]
    fn x_steps_shrink_interface(seed in any::<u64>()) {
        let p = x_term(&mut rng(seed), 12);
        let cfg = XConfig::default();
        for (pos, rule) in x_redexes(&p, &cfg) {
            let next = x_step(&p, &pos, rule, &cfg).unwrap();
            prop_assert!(free_names(&next).is_subset(&free_names(&p)), "{rule:?} at {pos}");
        }
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>()) {
        let (t, _) = star(seed, false);
        let c = canonicalize(&t);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert!(congruent(&t, &c));
    }

    #[test]
    fn simplification_order_does_not_matter(seed in any::<u64>()) {
        let (t, _) = star(seed, false);
        let first = simplify_with(&t, |_| 0);
        let last = simplify_with(&t, |rs| rs.len() - 1);
        prop_assert!(congruent(&first, &last), "{} vs {}", print(&first), print(&last));
    }

    #[test]
    fn inferred_sequent_checks(seed in any::<u64>()) {
        let (t, s) = star(seed, true);
        prop_assert!(typecheck_star(&t, &s.unwrap()).is_ok());
        let inferred = infer_star(&t).unwrap();
        prop_assert!(typecheck_star(&t, &inferred).is_ok(), "{}", print(&t));
    }

    #[test]
    fn encodings(seed in any::<u64>()) {
        let p = x_term(&mut rng(seed), 12);
        let q = x_to_star(&p);
        prop_assert!(check_linear(&q).is_ok(), "{}", print(&q));
        prop_assert_eq!(free_names(&q), free_names(&p));
        prop_assert!(alpha_eq(&star_to_x(&q), &p));

        let typed = linear_x_term(&mut rng(seed), 12, true);
        let s = typed.sequent.unwrap();
        prop_assert!(typecheck_x(&typed.term, &s).is_ok());
        prop_assert!(typecheck_star(&x_to_star(&typed.term), &s).is_ok());
    }
}
