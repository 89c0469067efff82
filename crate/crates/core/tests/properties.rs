use proptest::prelude::*;

use coreduality::analysis::{
    core_polytope, deterministic_dual, dual_to_imputation, is_core_imputation, primal_optimum,
    sample_core_vertices, surplus_account,
};
use coreduality::formulations::build_dual;
use coreduality::generate::random_instance;
use coreduality::lp::solve;
use coreduality::oracle::{all_matchings, max_weight};
use coreduality::{Caps, GameKind, Imputation, Rational};

fn kind() -> impl Strategy<Value = GameKind> {
    prop::sample::select(GameKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strong_duality(kind in kind(), seed in any::<u64>()) {
        let g = random_instance(kind, seed, 8);
        let primal = primal_optimum(&g).unwrap();
        let dual = solve(&build_dual(&g));
        prop_assert_eq!(dual.expect_value().unwrap(), &primal);
    }

    #[test]
    fn pruned_search_matches_full_enumeration(kind in kind(), seed in any::<u64>()) {
        let g = random_instance(kind, seed, 6);
        let caps = Caps::default();
        let best = all_matchings(&g, &caps)
            .unwrap()
            .iter()
            .map(|m| m.weight(&g))
            .max()
            .unwrap();
        prop_assert_eq!(max_weight(&g, &caps).unwrap().0, best);
    }

    #[test]
    fn dual_payments_split_the_surplus(kind in kind(), seed in any::<u64>()) {
        let g = random_instance(kind, seed, 8);
        prop_assume!(kind != GameKind::GeneralMatching);
        let d = deterministic_dual(&g).unwrap();
        let imp = dual_to_imputation(&g, &d).unwrap();
        prop_assert_eq!(imp.total(), surplus_account(&g, &d).unwrap().surplus);
        prop_assert!(is_core_imputation(&g, &imp, &Caps::default()).unwrap().in_core);
    }

    #[test]
    fn brute_force_core_agrees_with_polytope(
        kind in prop::sample::select(vec![GameKind::Assignment, GameKind::BMatching, GameKind::GeneralMatching]),
        seed in any::<u64>(),
        shift in 1i64..4,
    ) {
        let g = random_instance(kind, seed, 6);
        let caps = Caps::default();
        let polytope = core_polytope(&g, &caps).unwrap();
        for p in sample_core_vertices(&g, &caps, 4, seed).unwrap() {
            prop_assert!(is_core_imputation(&g, &Imputation::external(p.clone()), &caps).unwrap().in_core);
            // Moving payment from one agent to another stays in the core
            // exactly when the polytope still contains the point.
            if p.len() >= 2 && p[0].is_positive() {
                let mut q = p.clone();
                let delta = (Rational::new(shift, 4)).min(p[0].clone());
                q[0] -= &delta;
                q[1] += &delta;
                let inside = polytope.is_feasible(&q);
                let verdict = is_core_imputation(&g, &Imputation::external(q), &caps).unwrap();
                prop_assert_eq!(verdict.in_core, inside);
            }
        }
    }
}
