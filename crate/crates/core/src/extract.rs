//! From operators back to preferences: the canonical relation `⪯◦_K`,
//! forced strict edges, detached pairs, the preorder lift, and the
//! three-valued representability verdict.

use std::collections::VecDeque;

use crate::audit::{
    check_compatible, check_faithful, check_postulates, Assignment, AuditOptions, Postulate,
};
use crate::change::{ChangeOperator, OperatorKind};
use crate::error::{Error, Result};
use crate::kernel::{BeliefBase, ClassId, Logic, ModelSet};
use crate::orders::{
    is_min_complete, is_preorder, is_total, is_transitive, min_set, order_extend, PropertyWitness,
    WorldRelation,
};

/// `Mod(K ◦ Γ)` for every class `Γ`, in class order.
fn outputs(op: &ChangeOperator, k: &BeliefBase) -> Vec<ModelSet> {
    op.logic()
        .classes()
        .iter()
        .map(|gc| op.apply_models(k, &gc.canonical))
        .collect()
}

fn relation_from_outputs(logic: &Logic, out: &[ModelSet]) -> WorldRelation {
    let classes = logic.classes();
    WorldRelation::from_fn(logic.world_count(), |i, j| {
        classes.iter().zip(out).all(|(gc, r)| {
            !(gc.models.contains(i) && gc.models.contains(j)) || r.contains(i) || !r.contains(j)
        })
    })
}

/// `ω1 ⪯◦_K ω2` iff every class `Γ` containing both worlds has
/// `ω1 ∈ Mod(K ◦ Γ)` or `ω2 ∉ Mod(K ◦ Γ)`.
pub fn extract_relation(op: &ChangeOperator, k: &BeliefBase) -> WorldRelation {
    relation_from_outputs(op.logic(), &outputs(op, k))
}

/// The extracted relation of every class. Fails if some relation is not
/// total, which cannot happen when the operator satisfies (G5) and (G6).
pub fn extract_assignment(op: &ChangeOperator) -> Result<Assignment> {
    let logic = op.logic().clone();
    let relations: Vec<WorldRelation> = logic
        .classes()
        .iter()
        .map(|c| extract_relation(op, &c.canonical))
        .collect();
    for (c, rel) in logic.classes().iter().zip(&relations) {
        if let Some(PropertyWitness::Unrelated { left, right }) = is_total(rel).witness {
            return Err(Error::NotTotal {
                context: format!("extracted K = {}", logic.show_base(&c.canonical)),
                left: logic.world_name(left).to_string(),
                right: logic.world_name(right).to_string(),
            });
        }
    }
    Assignment::new(logic, relations)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForcedEdge {
    pub from: usize,
    pub to: usize,
    /// Least class `Γ` with both worlds, `from` selected and `to` not.
    pub gamma: ClassId,
}

/// Strict preferences every compatible assignment must contain, per class
/// of `K`.
#[derive(Clone, Debug)]
pub struct ForcedStrictGraph {
    worlds: usize,
    edges: Vec<Vec<ForcedEdge>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedCycle {
    pub k: ClassId,
    /// `worlds[i] → worlds[i+1]`, closing back to `worlds[0]`.
    pub worlds: Vec<usize>,
    /// Witness class of each edge.
    pub gammas: Vec<ClassId>,
}

pub fn forced_strict_graph(op: &ChangeOperator) -> ForcedStrictGraph {
    let logic = op.logic();
    let n = logic.world_count();
    let edges = logic
        .classes()
        .iter()
        .map(|kc| {
            let out = outputs(op, &kc.canonical);
            let mut edges = Vec::new();
            for from in 0..n {
                for to in 0..n {
                    let witness = logic.class_ids().find(|g| {
                        let gm = logic.class(*g).models;
                        let r = out[g.0];
                        gm.contains(from) && gm.contains(to) && r.contains(from) && !r.contains(to)
                    });
                    if let Some(gamma) = witness {
                        edges.push(ForcedEdge { from, to, gamma });
                    }
                }
            }
            edges
        })
        .collect();
    ForcedStrictGraph { worlds: n, edges }
}

impl ForcedStrictGraph {
    /// Edges for the class of `K`, sorted by `(from, to)`.
    pub fn edges(&self, k: ClassId) -> &[ForcedEdge] {
        &self.edges[k.0]
    }

    /// Shortest cycle through the least possible start world, for the first
    /// class of `K` that has one.
    pub fn find_cycle(&self) -> Option<ForcedCycle> {
        (0..self.edges.len()).find_map(|k| self.cycle_in(ClassId(k)))
    }

    pub fn cycle_in(&self, k: ClassId) -> Option<ForcedCycle> {
        let edges = &self.edges[k.0];
        let n = self.worlds;
        for start in 0..n {
            // BFS from start, looking for an edge back into it.
            let mut parent: Vec<Option<&ForcedEdge>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for e in edges.iter().filter(|e| e.from == v) {
                    if e.to == start {
                        let mut path = vec![e];
                        let mut cur = v;
                        while cur != start {
                            let pe = parent[cur].expect("BFS tree");
                            path.push(pe);
                            cur = pe.from;
                        }
                        path.reverse();
                        return Some(ForcedCycle {
                            k,
                            worlds: path.iter().map(|e| e.from).collect(),
                            gammas: path.iter().map(|e| e.gamma).collect(),
                        });
                    }
                    if !seen[e.to] {
                        seen[e.to] = true;
                        parent[e.to] = Some(e);
                        queue.push_back(e.to);
                    }
                }
            }
        }
        None
    }
}

/// Worlds outside every `Mod(K ◦ Γ)`; pairs of them are detached.
fn detached_worlds(logic: &Logic, out: &[ModelSet]) -> ModelSet {
    let seen = out.iter().fold(ModelSet::EMPTY, |acc, r| acc.union(*r));
    logic.omega().difference(seen)
}

/// Pairs `(ω, ω')`, `ω ≤ ω'` by index, with neither world in any output
/// `K ◦ Γ`.
pub fn detached_pairs(op: &ChangeOperator, k: &BeliefBase) -> Vec<(usize, usize)> {
    let d = detached_worlds(op.logic(), &outputs(op, k));
    d.iter()
        .flat_map(|a| d.iter().filter(move |b| a <= *b).map(move |b| (a, b)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftFailure {
    /// After dropping detached pairs, `a ⪯ b ⪯ c` but not `a ⪯ c`.
    Transitivity { a: usize, b: usize, c: usize },
    /// The extended order changes the minimum of this class.
    MinPreservation { class: ClassId },
}

/// Drops detached pairs (keeping reflexive ones) from `⪯◦_K`, checks
/// transitivity, extends to a total preorder and checks that the minimum of
/// every class is unchanged.
pub fn preorder_lift(
    op: &ChangeOperator,
    k: &BeliefBase,
) -> std::result::Result<WorldRelation, LiftFailure> {
    let logic = op.logic();
    let out = outputs(op, k);
    let extracted = relation_from_outputs(logic, &out);
    let d = detached_worlds(logic, &out);
    let reduced = WorldRelation::from_fn(logic.world_count(), |i, j| {
        i == j || (extracted.le(i, j) && !(d.contains(i) && d.contains(j)))
    });
    if let Some(PropertyWitness::Intransitive { a, b, c }) = is_transitive(&reduced).witness {
        return Err(LiftFailure::Transitivity { a, b, c });
    }
    let lifted = order_extend(&reduced).expect("reflexive and transitive");
    for class in logic.class_ids() {
        let models = logic.class(class).models;
        if min_set(&lifted, models) != min_set(&extracted, models) {
            return Err(LiftFailure::MinPreservation { class });
        }
    }
    Ok(lifted)
}

#[derive(Clone, Debug)]
pub enum Representability {
    /// A faithful, compatible, min-complete total preorder assignment.
    Representable(Assignment),
    NotRepresentable(ForcedCycle),
    /// No forced cycle, but the lift failed for this class of `K`.
    Unknown {
        k: ClassId,
        failure: LiftFailure,
    },
}

impl Representability {
    pub fn label(&self) -> &'static str {
        match self {
            Representability::Representable(_) => "representable",
            Representability::NotRepresentable(_) => "not-representable",
            Representability::Unknown { .. } => "unknown",
        }
    }
}

/// Decides total-preorder representability where the evidence allows it.
/// The operator must pass the postulates (audited first).
pub fn representability(op: &ChangeOperator, opts: &AuditOptions) -> Result<Representability> {
    let audit = check_postulates(op, &Postulate::ALL, opts);
    if !audit.passed() {
        return Err(Error::PostulateFailure(Box::new(audit)));
    }
    if let Some(cycle) = forced_strict_graph(op).find_cycle() {
        return Ok(Representability::NotRepresentable(cycle));
    }
    // An operator induced by total preorders carries its own witness; the
    // lift below is only guaranteed to succeed in loop-free logics.
    if let OperatorKind::Induced(source) = op.kind() {
        if source.relations().iter().all(|r| is_preorder(r).holds())
            && verify_witness(op, source, opts).is_ok()
        {
            return Ok(Representability::Representable(source.clone()));
        }
    }
    let logic = op.logic().clone();
    let mut relations = Vec::with_capacity(logic.class_count());
    for c in logic.class_ids() {
        match preorder_lift(op, &logic.class(c).canonical) {
            Ok(rel) => relations.push(rel),
            Err(failure) => return Ok(Representability::Unknown { k: c, failure }),
        }
    }
    let witness = Assignment::new(logic.clone(), relations)?;
    verify_witness(op, &witness, opts)?;
    Ok(Representability::Representable(witness))
}

fn verify_witness(op: &ChangeOperator, a: &Assignment, opts: &AuditOptions) -> Result<()> {
    let logic = a.logic();
    let structural = a
        .relations()
        .iter()
        .zip(logic.class_ids())
        .find_map(|(rel, c)| {
            let problem = if !is_preorder(rel).holds() {
                Some("not a preorder")
            } else if !is_min_complete(rel, logic).ok()?.holds() {
                Some("not min-complete")
            } else {
                None
            };
            problem.map(|p| {
                format!(
                    "lifted relation for K = {} is {p}",
                    logic.show_base(&logic.class(c).canonical)
                )
            })
        });
    if let Some(msg) = structural {
        return Err(Error::Contract(msg));
    }
    if !check_faithful(a, opts).passed() || !check_compatible(op, a).passed() {
        return Err(Error::Contract(
            "lifted assignment failed verification".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::change::{
        make_builtin_ex, make_full_meet, make_induced, make_loop_operator, LoopData,
    };
    use crate::kernel::{lex_core, lex_paper, propositional};
    use crate::orders::is_min_friendly;
    use std::sync::Arc;

    fn rows(rel: &WorldRelation) -> Vec<String> {
        format!("{rel:?}").lines().map(str::to_string).collect()
    }

    #[test]
    fn ex_extraction_matches_oracle() {
        for l in [lex_paper(), lex_core()] {
            let l = Arc::new(l);
            let op = make_builtin_ex(l.clone()).unwrap();
            let rel = extract_relation(&op, &l.base(&["ψ0"]).unwrap());
            assert_eq!(
                rows(&rel),
                ["111111", "011001", "001101", "010101", "011111", "011101"]
            );
            for i in 1..6 {
                assert!(rel.lt(0, i));
            }
            assert!(rel.lt(1, 2) && rel.lt(2, 3) && rel.lt(3, 1));
            for i in [1, 2, 3, 5] {
                assert!(rel.lt(4, i));
            }
            for i in [1, 2, 3] {
                assert!(rel.le(i, 5) && rel.le(5, i));
            }
        }
    }

    #[test]
    fn full_meet_extraction() {
        let l = Arc::new(lex_paper());
        let op = make_full_meet(l.clone());
        let a = extract_assignment(&op).unwrap();
        assert!(check_faithful(&a, &AuditOptions::default()).passed());
        assert!(check_compatible(&op, &a).passed());
        for rel in a.relations() {
            assert!(is_min_friendly(rel, &l).unwrap().holds());
        }
    }

    #[test]
    fn detached() {
        let l = Arc::new(lex_paper());
        let k = l.base(&["ψ0"]).unwrap();
        assert!(detached_pairs(&make_full_meet(l.clone()), &k).is_empty());
        assert!(detached_pairs(&make_builtin_ex(l.clone()).unwrap(), &k).is_empty());
        // An operator that never selects ω4 or ω5 detaches them.
        let op = ChangeOperator::custom(l.clone(), "hide", |l, _, g| {
            let m = l.mods(g).difference([4, 5].into_iter().collect());
            l.canonical_base(m).cloned().unwrap_or_else(|| g.clone())
        });
        assert_eq!(detached_pairs(&op, &k), vec![(4, 4), (4, 5), (5, 5)]);
    }

    #[test]
    fn full_meet_lift() {
        let l = Arc::new(lex_paper());
        let k = l.base(&["ψ0"]).unwrap();
        let lifted = preorder_lift(&make_full_meet(l.clone()), &k).unwrap();
        for j in 1..6 {
            assert!(lifted.lt(0, j));
            for i in 1..6 {
                assert!(lifted.le(i, j));
            }
        }
    }

    fn core_loop_op() -> ChangeOperator {
        let l = Arc::new(lex_core());
        let b = |n: &[&str]| l.base(n).unwrap();
        let data = LoopData::new(
            &l,
            [b(&["φ1"]), b(&["φ2"]), b(&["φ3"])],
            [b(&["ψ2"]), b(&["ψ3"]), b(&["ψ1"])],
            b(&["ψ0"]),
        )
        .unwrap();
        make_loop_operator(l, data)
    }

    #[test]
    fn loop_operator_is_not_representable() {
        let op = core_loop_op();
        let l = op.logic().clone();
        let k = l.base(&["ψ0"]).unwrap();
        assert!(matches!(
            preorder_lift(&op, &k),
            Err(LiftFailure::Transitivity { .. })
        ));
        match representability(&op, &AuditOptions::default()).unwrap() {
            Representability::NotRepresentable(cycle) => {
                assert_eq!(cycle.k, l.class_of(&k));
                let mut ws = cycle.worlds.clone();
                ws.sort();
                assert_eq!(ws, [1, 2, 3]);
                let mut gs: Vec<String> = cycle
                    .gammas
                    .iter()
                    .map(|g| l.show_base(&l.class(*g).canonical))
                    .collect();
                gs.sort();
                assert_eq!(gs, ["{φ1}", "{φ2}", "{φ3}"]);
            }
            other => panic!("expected a forced cycle, got {other:?}"),
        }
    }

    #[test]
    fn full_meet_is_representable() {
        let l = Arc::new(propositional(2).unwrap());
        let v = representability(&make_full_meet(l), &AuditOptions::default()).unwrap();
        assert_eq!(v.label(), "representable");
    }

    #[test]
    fn induced_preorder_is_representable() {
        // lex_core has a critical loop, so the lift alone may not succeed.
        use rand::SeedableRng;
        let l = Arc::new(lex_core());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = crate::random::random_preorder_assignment(l, &mut rng);
        let op = make_induced(a).unwrap();
        let v = representability(&op, &AuditOptions::default()).unwrap();
        assert_eq!(v.label(), "representable");
    }

    #[test]
    fn failing_operator_is_rejected() {
        let l = Arc::new(lex_paper());
        let op = make_builtin_ex(l).unwrap();
        assert!(matches!(
            representability(&op, &AuditOptions::default()),
            Err(Error::PostulateFailure(_))
        ));
    }
}
