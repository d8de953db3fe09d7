//! Seeded generators for logics, relations and assignments, used by the
//! fuzz suites and the counterexample pipeline.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::audit::Assignment;
use crate::kernel::{Logic, ModelSet};
use crate::orders::{is_min_expressible, is_min_friendly, is_min_retractive, WorldRelation};

/// Attempts at a random relation before falling back to a safe one.
const TRIES: usize = 20;

fn random_subset(rng: &mut impl Rng, worlds: usize) -> ModelSet {
    ModelSet::from_bits(rng.gen::<u64>()).intersection(ModelSet::full(worlds))
}

/// 1..=`max_worlds` worlds and 1..=`max_sentences` sentences with random
/// model sets.
pub fn random_logic(rng: &mut impl Rng, max_worlds: usize, max_sentences: usize) -> Logic {
    let worlds = rng.gen_range(1..=max_worlds);
    let sentences = rng.gen_range(1..=max_sentences);
    let models = (0..sentences).map(|_| random_subset(rng, worlds)).collect();
    named_logic("random", worlds, models)
}

/// A random logic whose sentence model sets are closed under union, so it
/// is disjunctive.
pub fn random_union_closed_logic(rng: &mut impl Rng, max_worlds: usize, max_seeds: usize) -> Logic {
    let worlds = rng.gen_range(1..=max_worlds);
    let mut sets: Vec<ModelSet> = (0..rng.gen_range(1..=max_seeds))
        .map(|_| random_subset(rng, worlds))
        .collect();
    let mut i = 0;
    while i < sets.len() {
        for j in 0..i {
            let u = sets[i].union(sets[j]);
            if !sets.contains(&u) {
                sets.push(u);
            }
        }
        i += 1;
    }
    sets.sort();
    sets.dedup();
    named_logic("random-disjunctive", worlds, sets)
}

/// Plants three pairwise-overlapping sets `{a,b}`, `{b,c}`, `{c,a}` and a
/// disjoint world, then adds random noise sentences. Critical loops are
/// common but not guaranteed.
pub fn random_loop_prone_logic(rng: &mut impl Rng, max_noise: usize) -> Logic {
    let worlds = rng.gen_range(4..=6);
    let mut order: Vec<usize> = (0..worlds).collect();
    order.shuffle(rng);
    let [a, b, c, k] = [order[0], order[1], order[2], order[3]];
    let pair = |x: usize, y: usize| ModelSet::singleton(x).with(y);
    let mut models = vec![pair(a, b), pair(b, c), pair(c, a), ModelSet::singleton(k)];
    for w in [a, b, c] {
        if rng.gen_bool(0.7) {
            models.push(ModelSet::singleton(w));
        }
    }
    for _ in 0..rng.gen_range(0..=max_noise) {
        models.push(random_subset(rng, worlds));
    }
    named_logic("random-loop-prone", worlds, models)
}

fn named_logic(name: &str, worlds: usize, models: Vec<ModelSet>) -> Logic {
    Logic::new(
        name,
        (0..worlds).map(|w| format!("w{w}")).collect(),
        models
            .into_iter()
            .enumerate()
            .map(|(i, m)| (format!("s{i}"), m))
            .collect(),
    )
    .expect("generated logic is well formed")
}

/// Each unordered pair gets `⪯`, `⪰` or both, uniformly; reflexive.
pub fn random_total(rng: &mut impl Rng, n: usize) -> WorldRelation {
    let mut choice = vec![vec![0u8; n]; n];
    for (i, row) in choice.iter_mut().enumerate() {
        for c in row.iter_mut().skip(i + 1) {
            *c = rng.gen_range(0..3);
        }
    }
    WorldRelation::from_fn(n, |i, j| {
        let (a, b, flip) = if i <= j { (i, j, false) } else { (j, i, true) };
        a == b
            || match choice[a][b] {
                0 => !flip,
                1 => flip,
                _ => true,
            }
    })
}

/// Random total preorder with ranks below `n`.
pub fn random_preorder(rng: &mut impl Rng, n: usize) -> WorldRelation {
    let ranks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n.max(1))).collect();
    WorldRelation::from_ranks(&ranks)
}

/// Min-retractive total relation: a random total relation when one is found
/// quickly, otherwise a random total preorder.
pub fn random_min_retractive(rng: &mut impl Rng, logic: &Logic) -> WorldRelation {
    let n = logic.world_count();
    for _ in 0..TRIES {
        let rel = random_total(rng, n);
        if is_min_retractive(&rel, logic)
            .expect("dimensions match")
            .holds()
        {
            return rel;
        }
    }
    random_preorder(rng, n)
}

/// `k` at the bottom (all equivalent), everything else strictly above and
/// related among itself by `rest`.
fn faithful_over(k: ModelSet, rest: &WorldRelation) -> WorldRelation {
    WorldRelation::from_fn(rest.world_count(), |i, j| {
        match (k.contains(i), k.contains(j)) {
            (true, _) => true,
            (false, true) => false,
            (false, false) => rest.le(i, j),
        }
    })
}

/// `K`-models below everything else, which is flat. Always faithful,
/// min-friendly and min-expressible.
pub fn drastic(k: ModelSet, n: usize) -> WorldRelation {
    faithful_over(k, &WorldRelation::full(n))
}

/// Faithful, min-friendly, min-expressible total relations, frequently
/// non-transitive.
pub fn random_assignment(logic: Arc<Logic>, rng: &mut impl Rng) -> Assignment {
    let n = logic.world_count();
    Assignment::from_fn(logic.clone(), |c| {
        let k = logic.class(c).models;
        for attempt in 0..TRIES {
            let rest = if attempt % 2 == 0 {
                random_total(rng, n)
            } else {
                random_preorder(rng, n)
            };
            let rel = faithful_over(k, &rest);
            if is_min_friendly(&rel, &logic).expect("dims").holds()
                && is_min_expressible(&rel, &logic).expect("dims").holds()
            {
                return rel;
            }
        }
        drastic(k, n)
    })
    .expect("generated relations are total")
}

/// Faithful min-expressible total preorders.
pub fn random_preorder_assignment(logic: Arc<Logic>, rng: &mut impl Rng) -> Assignment {
    let n = logic.world_count();
    Assignment::from_fn(logic.clone(), |c| {
        let k = logic.class(c).models;
        for _ in 0..TRIES {
            let rel = faithful_over(k, &random_preorder(rng, n));
            if is_min_expressible(&rel, &logic).expect("dims").holds() {
                return rel;
            }
        }
        drastic(k, n)
    })
    .expect("generated relations are total")
}
