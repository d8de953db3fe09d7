//! Property tests over seeded random logics, relations and assignments.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use revlab::audit::{check_compatible, check_faithful, check_postulates, AuditOptions, Postulate};
use revlab::change::{make_induced, make_loop_operator};
use revlab::extract::{extract_assignment, representability, Representability};
use revlab::kernel::{Logic, ModelSet};
use revlab::loops::{find_critical_loops, is_disjunctive};
use revlab::orders::{
    is_min_complete, is_min_friendly, is_min_retractive, is_preorder, is_total, min_set,
    order_extend, WorldRelation,
};
use revlab::random::{
    random_assignment, random_logic, random_loop_prone_logic, random_min_retractive,
    random_preorder, random_total, random_union_closed_logic,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimal elements under "nothing strictly below".
fn non_dominated(rel: &WorldRelation, set: ModelSet) -> ModelSet {
    set.iter()
        .filter(|&w| !set.iter().any(|v| rel.lt(v, w)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn universal_min_matches_non_dominated_for_total_relations(seed: u64) {
        let mut r = rng(seed);
        let logic = random_logic(&mut r, 5, 8);
        let rel = random_total(&mut r, logic.world_count());
        for c in logic.classes() {
            prop_assert_eq!(min_set(&rel, c.models), non_dominated(&rel, c.models));
        }
    }

    #[test]
    fn min_of_expressible_union_is_union_of_member_mins(seed: u64) {
        let mut r = rng(seed);
        let logic = random_logic(&mut r, 5, 8);
        let rel = random_min_retractive(&mut r, &logic);
        prop_assume!(is_min_retractive(&rel, &logic).unwrap().holds());
        for a in logic.classes() {
            for b in logic.classes() {
                let union = a.models.union(b.models);
                if !logic.is_expressible(union) {
                    continue;
                }
                let min = min_set(&rel, union);
                let expected = [a.models, b.models]
                    .into_iter()
                    .filter(|m| m.intersects(min))
                    .fold(ModelSet::EMPTY, |acc, m| acc.union(min_set(&rel, m)));
                prop_assert_eq!(min, expected);
            }
        }
    }

    #[test]
    fn total_preorders_are_min_friendly(seed: u64) {
        let mut r = rng(seed);
        let logic = random_logic(&mut r, 5, 8);
        let rel = random_preorder(&mut r, logic.world_count());
        prop_assert!(is_min_friendly(&rel, &logic).unwrap().holds());
    }

    #[test]
    fn order_extend_keeps_strict_pairs(seed: u64) {
        let mut r = rng(seed);
        let n = 1 + (seed % 6) as usize;
        // Random partial preorder: transitive closure of a random reflexive relation.
        let base = random_total(&mut r, n);
        let keep = random_total(&mut r, n);
        let mut rel = WorldRelation::from_fn(n, |i, j| i == j || (base.lt(i, j) && keep.lt(i, j)));
        loop {
            let next = WorldRelation::from_fn(n, |i, j| {
                rel.le(i, j) || (0..n).any(|m| rel.le(i, m) && rel.le(m, j))
            });
            if next == rel { break; }
            rel = next;
        }
        let ext = order_extend(&rel).unwrap();
        prop_assert!(rel.is_subset(&ext));
        prop_assert!(is_total(&ext).holds());
        prop_assert!(is_preorder(&ext).holds());
        for (i, j) in rel.pairs() {
            if rel.lt(i, j) {
                prop_assert!(ext.lt(i, j));
            }
        }
    }

    #[test]
    fn disjunctive_logics_have_no_loops(seed: u64) {
        let mut r = rng(seed);
        let logic = random_union_closed_logic(&mut r, 5, 4);
        prop_assert!(is_disjunctive(&logic).holds());
        prop_assert_eq!(find_critical_loops(&logic, 10).total, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn induced_operators_round_trip(seed: u64) {
        let mut r = rng(seed);
        let logic = Arc::new(random_logic(&mut r, 5, 8));
        let source = random_assignment(logic.clone(), &mut r);
        let op = make_induced(source.clone()).unwrap();
        let opts = AuditOptions { seed, ..Default::default() };
        let audit = check_postulates(&op, &Postulate::ALL, &opts);
        prop_assert!(audit.passed(), "{:?}", audit);

        let extracted = extract_assignment(&op).unwrap();
        prop_assert!(check_faithful(&extracted, &opts).passed());
        prop_assert!(check_compatible(&op, &extracted).passed());
        for c in logic.class_ids() {
            let rel = extracted.relation(c);
            prop_assert!(is_min_friendly(rel, &logic).unwrap().holds());
            prop_assert!(source.relation(c).is_subset(rel));
        }
    }

    #[test]
    fn loops_revalidate_and_yield_counterexamples(seed: u64) {
        let mut r = rng(seed);
        let logic = Arc::new(random_loop_prone_logic(&mut r, 3));
        let search = find_critical_loops(&logic, 2);
        for found in &search.loops {
            prop_assert!(found.revalidate(&logic));
        }
        if let Some(found) = search.loops.first() {
            let op = make_loop_operator(logic.clone(), found.loop_data(&logic).unwrap());
            let opts = AuditOptions::default();
            let audit = check_postulates(&op, &Postulate::ALL, &opts);
            prop_assert!(audit.passed(), "{:?}", audit);
            let verdict = representability(&op, &opts).unwrap();
            prop_assert!(matches!(verdict, Representability::NotRepresentable(_)), "{}", verdict.label());
        }
    }

    #[test]
    fn audits_are_deterministic(seed: u64) {
        let mut r = rng(seed);
        let logic = Arc::new(random_logic(&mut r, 4, 6));
        let op = make_induced(random_assignment(logic, &mut r)).unwrap();
        let opts = AuditOptions { seed, ..Default::default() };
        let a = check_postulates(&op, &Postulate::ALL, &opts).to_json().to_string();
        let b = check_postulates(&op, &Postulate::ALL, &opts).to_json().to_string();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn extracted_relations_of_passing_operators_are_min_complete() {
    let mut r = rng(99);
    for _ in 0..20 {
        let logic: Arc<Logic> = Arc::new(random_logic(&mut r, 5, 8));
        let op = make_induced(random_assignment(logic.clone(), &mut r)).unwrap();
        let a = extract_assignment(&op).unwrap();
        for rel in a.relations() {
            assert!(is_min_complete(rel, &logic).unwrap().holds());
        }
    }
}
