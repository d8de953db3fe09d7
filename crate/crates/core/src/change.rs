//! Multiple base change operators `◦ : P_fin(L) × P_fin(L) → P_fin(L)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::audit::Assignment;
use crate::error::{Error, Result};
use crate::kernel::{BeliefBase, ClassId, Logic, ModelSet};
use crate::orders::{is_min_expressible, min_set, PropertyWitness};

type CustomFn = dyn Fn(&Logic, &BeliefBase, &BeliefBase) -> BeliefBase + Send + Sync;

/// A total base change operator over one logic.
#[derive(Clone)]
pub struct ChangeOperator {
    logic: Arc<Logic>,
    name: String,
    kind: OperatorKind,
}

#[derive(Clone)]
pub enum OperatorKind {
    FullMeet,
    Table(TableOperator),
    Induced(Assignment),
    BuiltinEx(ExOperator),
    LoopCounterexample(LoopData),
    /// Arbitrary closure; not necessarily semantic.
    Custom(Arc<CustomFn>),
}

impl OperatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::FullMeet => "full-meet",
            OperatorKind::Table(_) => "table",
            OperatorKind::Induced(_) => "induced",
            OperatorKind::BuiltinEx(_) => "builtin-ex",
            OperatorKind::LoopCounterexample(_) => "loop-counterexample",
            OperatorKind::Custom(_) => "custom",
        }
    }
}

impl fmt::Debug for ChangeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChangeOperator")
            .field("logic", &self.logic.name())
            .field("name", &self.name)
            .field("kind", &self.kind.label())
            .finish()
    }
}

impl ChangeOperator {
    pub fn logic(&self) -> &Arc<Logic> {
        &self.logic
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn custom(
        logic: Arc<Logic>,
        name: impl Into<String>,
        f: impl Fn(&Logic, &BeliefBase, &BeliefBase) -> BeliefBase + Send + Sync + 'static,
    ) -> Self {
        ChangeOperator {
            logic,
            name: name.into(),
            kind: OperatorKind::Custom(Arc::new(f)),
        }
    }

    /// `K ◦ Γ`. Both bases must belong to the operator's logic.
    pub fn apply(&self, k: &BeliefBase, gamma: &BeliefBase) -> BeliefBase {
        let logic = &*self.logic;
        match &self.kind {
            OperatorKind::FullMeet => full_meet(logic, k, gamma),
            OperatorKind::Table(t) => t.apply(logic, k, gamma),
            OperatorKind::Induced(a) => {
                let min = min_set(a.relation_for(k), logic.mods(gamma));
                logic
                    .canonical_base(min)
                    .expect("checked min-expressible at construction")
                    .clone()
            }
            OperatorKind::BuiltinEx(ex) => ex.apply(logic, k, gamma),
            OperatorKind::LoopCounterexample(data) => data.apply(logic, k, gamma),
            OperatorKind::Custom(f) => f(logic, k, gamma),
        }
    }

    /// `Mod(K ◦ Γ)`.
    pub fn apply_models(&self, k: &BeliefBase, gamma: &BeliefBase) -> ModelSet {
        self.logic.mods(&self.apply(k, gamma))
    }
}

fn full_meet(logic: &Logic, k: &BeliefBase, gamma: &BeliefBase) -> BeliefBase {
    let union = k.union(gamma);
    if logic.mods(&union).is_empty() {
        gamma.clone()
    } else {
        union
    }
}

/// `K ◦ Γ = K ∪ Γ` if consistent, else `Γ`.
pub fn make_full_meet(logic: Arc<Logic>) -> ChangeOperator {
    ChangeOperator {
        logic,
        name: "full-meet".into(),
        kind: OperatorKind::FullMeet,
    }
}

/// Operator induced by a min-expressible assignment: `K ◦ Γ` is the
/// canonical base of `min(Mod(Γ), ⪯_K)`.
pub fn make_induced(assignment: Assignment) -> Result<ChangeOperator> {
    let logic = assignment.logic().clone();
    let keyed = logic
        .class_ids()
        .map(|c| (logic.class(c).canonical.clone(), assignment.relation(c)))
        .chain(assignment.overrides().iter().map(|(b, r)| (b.clone(), r)));
    for (k, rel) in keyed {
        if let Some(PropertyWitness::NotExpressible { class, .. }) =
            is_min_expressible(rel, &logic)?.witness
        {
            return Err(Error::MinExpressibility {
                k: logic.show_base(&k),
                gamma: logic.show_base(&logic.class(class).canonical),
            });
        }
    }
    Ok(ChangeOperator {
        logic,
        name: "induced".into(),
        kind: OperatorKind::Induced(assignment),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableDefault {
    FullMeet,
    Error,
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub base: BeliefBase,
    pub input: BeliefBase,
    pub result: BeliefBase,
}

/// Operator given by explicit entries, matched on the semantic classes of
/// `K` and `Γ`.
#[derive(Clone, Debug)]
pub struct TableOperator {
    entries: HashMap<(ClassId, ClassId), BeliefBase>,
    default: TableDefault,
}

impl TableOperator {
    fn apply(&self, logic: &Logic, k: &BeliefBase, gamma: &BeliefBase) -> BeliefBase {
        match self
            .entries
            .get(&(logic.class_of(k), logic.class_of(gamma)))
        {
            Some(result) => result.clone(),
            None => {
                debug_assert_eq!(self.default, TableDefault::FullMeet);
                full_meet(logic, k, gamma)
            }
        }
    }
}

pub fn make_table(
    logic: Arc<Logic>,
    default: TableDefault,
    entries: Vec<TableEntry>,
) -> Result<ChangeOperator> {
    let mut map: HashMap<(ClassId, ClassId), BeliefBase> = HashMap::new();
    for e in entries {
        for b in [&e.base, &e.input, &e.result] {
            logic.models_of(b)?;
        }
        let key = (logic.class_of(&e.base), logic.class_of(&e.input));
        match map.get(&key) {
            Some(prev) if logic.mods(prev) != logic.mods(&e.result) => {
                return Err(Error::ConflictingEntries {
                    k: logic.show_base(&e.base),
                    gamma: logic.show_base(&e.input),
                })
            }
            Some(_) => {}
            None => {
                map.insert(key, e.result);
            }
        }
    }
    if default == TableDefault::Error {
        for kc in logic.class_ids() {
            for gc in logic.class_ids() {
                if !map.contains_key(&(kc, gc)) {
                    return Err(Error::IncompleteTable {
                        k: logic.show_base(&logic.class(kc).canonical),
                        gamma: logic.show_base(&logic.class(gc).canonical),
                    });
                }
            }
        }
    }
    Ok(ChangeOperator {
        logic,
        name: "table".into(),
        kind: OperatorKind::Table(TableOperator {
            entries: map,
            default,
        }),
    })
}

/// The six-case operator over the lex fixtures, for `K ≡ {ψ0}`; full meet
/// for every other `K`.
#[derive(Clone, Debug)]
pub struct ExOperator {
    psi: [usize; 5],
}

impl ExOperator {
    fn apply(&self, logic: &Logic, k: &BeliefBase, gamma: &BeliefBase) -> BeliefBase {
        let k_models = logic.sentence_models(self.psi[0]);
        if logic.mods(k) != k_models {
            return full_meet(logic, k, gamma);
        }
        let g = logic.mods(gamma);
        let consistent = |i: usize| logic.sentence_models(self.psi[i]).intersects(g);
        if k_models.intersects(g) {
            gamma.with(self.psi[0])
        } else if consistent(4) {
            gamma.with(self.psi[4])
        } else if consistent(1) && !consistent(3) {
            gamma.with(self.psi[1])
        } else if consistent(2) && !consistent(1) {
            gamma.with(self.psi[2])
        } else if consistent(3) && !consistent(2) {
            gamma.with(self.psi[3])
        } else {
            gamma.clone()
        }
    }
}

/// Requires sentences `ψ0..ψ4` with `Mod(ψi) = {ωi}`, as in `lex_paper`
/// and `lex_core`.
pub fn make_builtin_ex(logic: Arc<Logic>) -> Result<ChangeOperator> {
    let mut psi = [0usize; 5];
    for (i, slot) in psi.iter_mut().enumerate() {
        let id = logic.sentence_index(&format!("ψ{i}"))?;
        let world = logic.world_index(&format!("ω{i}"))?;
        if logic.sentence_models(id) != ModelSet::singleton(world) {
            return Err(Error::Contract(format!(
                "the ex operator needs Mod(ψ{i}) = {{ω{i}}}"
            )));
        }
        *slot = id;
    }
    Ok(ChangeOperator {
        logic,
        name: "ex".into(),
        kind: OperatorKind::BuiltinEx(ExOperator { psi }),
    })
}

/// Data of a critical loop as used by the counterexample operator: the
/// bases `Γ0..Γ2`, `Γ'0..Γ'2`, `K`, and the ordered classes `𝔅'`.
#[derive(Clone, Debug)]
pub struct LoopData {
    pub gammas: [BeliefBase; 3],
    pub gamma_primes: [BeliefBase; 3],
    pub k: BeliefBase,
    b_prime: Vec<ClassId>,
}

impl LoopData {
    /// Validates the inconsistency and region conditions and computes `𝔅'`:
    /// classes `Γ'` with `∅ ≠ Mod(Γ') ⊆ Mod(Γ) \ ⋃ Mod(Γi)` for some class
    /// `Γ` consistent with every `Γ'i`, restricted to those inconsistent
    /// with `K`, in canonical class order.
    pub fn new(
        logic: &Logic,
        gammas: [BeliefBase; 3],
        gamma_primes: [BeliefBase; 3],
        k: BeliefBase,
    ) -> Result<Self> {
        let g = [
            logic.models_of(&gammas[0])?,
            logic.models_of(&gammas[1])?,
            logic.models_of(&gammas[2])?,
        ];
        let gp = [
            logic.models_of(&gamma_primes[0])?,
            logic.models_of(&gamma_primes[1])?,
            logic.models_of(&gamma_primes[2])?,
        ];
        let km = logic.models_of(&k)?;
        if let Some(i) = (0..3).find(|&i| km.intersects(g[i])) {
            return Err(Error::InvalidLoop(format!("K is consistent with Γ{i}")));
        }
        for i in 0..3 {
            let region = g[i].intersection(g[(i + 1) % 3]).difference(g[(i + 2) % 3]);
            if gp[i].is_empty() || !gp[i].is_subset(region) {
                return Err(Error::InvalidLoop(format!(
                    "Mod(Γ'{i}) must be a nonempty subset of (Mod(Γ{i}) ∩ Mod(Γ{})) \\ Mod(Γ{})",
                    (i + 1) % 3,
                    (i + 2) % 3
                )));
            }
        }
        let covered = g[0].union(g[1]).union(g[2]);
        let mut in_b = vec![false; logic.class_count()];
        for gc in logic.classes() {
            if gp.iter().all(|p| p.intersects(gc.models)) {
                let region = gc.models.difference(covered);
                for (idx, cand) in logic.classes().iter().enumerate() {
                    if !cand.models.is_empty() && cand.models.is_subset(region) {
                        in_b[idx] = true;
                    }
                }
            }
        }
        let b_prime = logic
            .class_ids()
            .filter(|c| in_b[c.0] && !logic.class(*c).models.intersects(km))
            .collect();
        Ok(LoopData {
            gammas,
            gamma_primes,
            k,
            b_prime,
        })
    }

    /// `𝔅'` in its linear order.
    pub fn b_prime(&self) -> &[ClassId] {
        &self.b_prime
    }

    fn apply(&self, logic: &Logic, k: &BeliefBase, gamma: &BeliefBase) -> BeliefBase {
        let km = logic.mods(&self.k);
        if logic.mods(k) != km {
            return full_meet(logic, k, gamma);
        }
        let g = logic.mods(gamma);
        if km.intersects(g) {
            return self.k.union(gamma);
        }
        if let Some(least) = self
            .b_prime
            .iter()
            .find(|c| logic.class(**c).models.intersects(g))
        {
            return gamma.union(&logic.class(*least).canonical);
        }
        let consistent = |i: usize| logic.mods(&self.gamma_primes[i]).intersects(g);
        match (0..3).find(|&i| consistent(i) && !consistent((i + 2) % 3)) {
            Some(i) => gamma.union(&self.gamma_primes[i]),
            None => gamma.clone(),
        }
    }
}

/// The four-case counterexample operator for `K` (and equivalent bases),
/// full meet elsewhere.
pub fn make_loop_operator(logic: Arc<Logic>, data: LoopData) -> ChangeOperator {
    ChangeOperator {
        logic,
        name: "loop-counterexample".into(),
        kind: OperatorKind::LoopCounterexample(data),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{lex_core, lex_paper, propositional};
    use crate::orders::WorldRelation;

    fn set(ws: &[usize]) -> ModelSet {
        ws.iter().copied().collect()
    }

    fn lp() -> Arc<Logic> {
        Arc::new(lex_paper())
    }

    #[test]
    fn full_meet_examples() {
        let l = lp();
        let op = make_full_meet(l.clone());
        let b = |n: &[&str]| l.base(n).unwrap();
        assert_eq!(op.apply_models(&b(&["ψ1"]), &b(&["φ1"])), set(&[1]));
        assert_eq!(op.apply_models(&b(&["ψ0"]), &b(&[])), set(&[0]));
        assert_eq!(op.apply_models(&b(&["ψ0"]), &b(&["ψ1"])), set(&[1]));
        // Inconsistent union falls back to Γ itself.
        assert_eq!(op.apply(&b(&["ψ0"]), &b(&["φ1"])), b(&["φ1"]));
        for c in l.classes() {
            assert_eq!(
                op.apply_models(&BeliefBase::empty(), &c.canonical),
                c.models
            );
        }
    }

    #[test]
    fn ex_examples() {
        let l = lp();
        let op = make_builtin_ex(l.clone()).unwrap();
        let b = |n: &[&str]| l.base(n).unwrap();
        let k = b(&["ψ0"]);
        assert_eq!(op.apply(&k, &b(&["φ4"])), b(&["φ4", "ψ4"]));
        assert_eq!(op.apply_models(&k, &b(&["φ4"])), set(&[4]));
        assert_eq!(op.apply(&k, &b(&["φ1"])), b(&["φ1", "ψ1"]));
        assert_eq!(op.apply(&k, &b(&["φ3"])), b(&["φ3", "ψ3"]));
        assert_eq!(op.apply_models(&k, &b(&["φ2"])), set(&[2]));
        assert_eq!(op.apply(&k, &b(&["φ0", "φ4"])), b(&["φ0", "φ4"]));
        // Equivalent K uses the same cases.
        assert_eq!(op.apply_models(&b(&["ψ0", "φ0"]), &b(&["φ4"])), set(&[4]));
        // Other K: full meet.
        assert_eq!(op.apply_models(&b(&["ψ5"]), &b(&["φ4"])), set(&[5]));
        assert!(make_builtin_ex(Arc::new(propositional(2).unwrap())).is_err());
    }

    #[test]
    fn induced_examples() {
        let l = lp();
        let flat = Assignment::from_fn(l.clone(), |_| WorldRelation::full(6)).unwrap();
        let op = make_induced(flat).unwrap();
        for kc in l.classes() {
            for gc in l.classes() {
                assert_eq!(op.apply_models(&kc.canonical, &gc.canonical), gc.models);
            }
        }

        // Faithful "drastic" assignment: K-models below everything else.
        let drastic = Assignment::from_fn(l.clone(), |c| {
            let km = l.class(c).models;
            WorldRelation::from_fn(6, |i, j| km.contains(i) || !km.contains(j))
        })
        .unwrap();
        let op = make_induced(drastic).unwrap();
        for kc in l.classes() {
            for gc in l.classes() {
                let both = kc.models.intersection(gc.models);
                if !both.is_empty() {
                    assert_eq!(op.apply_models(&kc.canonical, &gc.canonical), both);
                }
            }
        }
    }

    #[test]
    fn induced_rejects_non_min_expressible() {
        let l = lp();
        let bad = Assignment::from_fn(l.clone(), |_| {
            WorldRelation::from_ranks(&[0, 1, 1, 1, 0, 1])
        })
        .unwrap();
        match make_induced(bad) {
            Err(Error::MinExpressibility { k, gamma }) => {
                assert_eq!(k, "{}");
                assert_eq!(gamma, "{}");
            }
            other => panic!("expected min-expressibility error, got {other:?}"),
        }
    }

    #[test]
    fn table_operator() {
        let l = lp();
        let b = |n: &[&str]| l.base(n).unwrap();
        let entries = vec![TableEntry {
            base: b(&["ψ0"]),
            input: b(&["φ4"]),
            result: b(&["ψ5"]),
        }];
        let op = make_table(l.clone(), TableDefault::FullMeet, entries.clone()).unwrap();
        assert_eq!(op.apply(&b(&["ψ0", "φ0"]), &b(&["φ4", "φ4"])), b(&["ψ5"]));
        assert_eq!(op.apply_models(&b(&["ψ1"]), &b(&["φ4"])), set(&[1]));
        assert!(matches!(
            make_table(l.clone(), TableDefault::Error, entries.clone()),
            Err(Error::IncompleteTable { .. })
        ));
        let mut conflicting = entries;
        conflicting.push(TableEntry {
            base: b(&["ψ0"]),
            input: b(&["φ4"]),
            result: b(&["ψ4"]),
        });
        assert!(matches!(
            make_table(l, TableDefault::FullMeet, conflicting),
            Err(Error::ConflictingEntries { .. })
        ));
    }

    fn core_loop(l: &Logic) -> LoopData {
        let b = |n: &[&str]| l.base(n).unwrap();
        LoopData::new(
            l,
            [b(&["φ1"]), b(&["φ2"]), b(&["φ3"])],
            [b(&["ψ2"]), b(&["ψ3"]), b(&["ψ1"])],
            b(&["ψ0"]),
        )
        .unwrap()
    }

    #[test]
    fn loop_data_b_prime() {
        let l = lex_core();
        let data = core_loop(&l);
        let psi4 = l.class_of(&l.base(&["ψ4"]).unwrap());
        let psi5 = l.class_of(&l.base(&["ψ5"]).unwrap());
        assert_eq!(data.b_prime(), &[psi4, psi5]);
    }

    #[test]
    fn loop_data_validation() {
        let l = lex_core();
        let b = |n: &[&str]| l.base(n).unwrap();
        // Γ'2 = {ψ4} lies outside its region.
        let bad = LoopData::new(
            &l,
            [b(&["φ1"]), b(&["φ2"]), b(&["φ3"])],
            [b(&["ψ2"]), b(&["ψ3"]), b(&["ψ4"])],
            b(&["ψ0"]),
        );
        assert!(matches!(bad, Err(Error::InvalidLoop(_))));
        let bad_k = LoopData::new(
            &l,
            [b(&["φ1"]), b(&["φ2"]), b(&["φ3"])],
            [b(&["ψ2"]), b(&["ψ3"]), b(&["ψ1"])],
            b(&["φ1"]),
        );
        assert!(matches!(bad_k, Err(Error::InvalidLoop(_))));
    }

    #[test]
    fn loop_operator_cases() {
        let l = Arc::new(lex_core());
        let op = make_loop_operator(l.clone(), core_loop(&l));
        let b = |n: &[&str]| l.base(n).unwrap();
        let k = b(&["ψ0"]);
        assert_eq!(op.apply_models(&k, &b(&["φ4"])), set(&[4]));
        let out = op.apply_models(&k, &b(&["φ1"]));
        assert_eq!(out.len(), 1);
        assert!(out.is_subset(set(&[1, 2])));
        assert_eq!(op.apply_models(&k, &b(&[])), set(&[0]));
        assert_eq!(op.apply_models(&b(&["ψ3"]), &b(&["φ1"])), set(&[1, 2]));
    }

    #[test]
    fn custom_operator() {
        let l = Arc::new(lex_core());
        let op = ChangeOperator::custom(l.clone(), "ignore-k", |_, _, g| g.clone());
        let g = l.base(&["φ1"]).unwrap();
        assert_eq!(op.apply(&l.base(&["ψ1"]).unwrap(), &g), g);
        assert_eq!(op.kind().label(), "custom");
    }
}
