//! Rendering of library results: JSON values for machine replay, pair lists
//! for reading.

use std::fmt::Write;

use revlab::audit::AuditReport;
use revlab::extract::{LiftFailure, Representability};
use revlab::format::assignment_to_json;
use revlab::kernel::{BeliefBase, Logic};
use revlab::loops::{is_disjunctive, LoopConditions, LoopSearch};
use revlab::orders::{PropertyVerdict, PropertyWitness, WorldRelation};
use serde_json::{json, Value};

/// What a command produced, plus whether its checks passed.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

pub fn matrix(rel: &WorldRelation) -> Value {
    json!(rel
        .matrix()
        .iter()
        .map(|row| row.iter().map(|b| u8::from(*b)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn base(logic: &Logic, k: &BeliefBase) -> Value {
    json!(logic.render_base(k))
}

/// Strict pairs, equivalent pairs (listed once, `i < j`) and incomparable
/// pairs, by world index.
pub fn pairs(rel: &WorldRelation) -> [Vec<(usize, usize)>; 3] {
    let n = rel.world_count();
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..n {
        for j in 0..n {
            if rel.lt(i, j) {
                out[0].push((i, j));
            } else if i < j && rel.le(i, j) && rel.le(j, i) {
                out[1].push((i, j));
            } else if i < j && !rel.le(i, j) && !rel.le(j, i) {
                out[2].push((i, j));
            }
        }
    }
    out
}

pub fn pair_names(logic: &Logic, list: &[(usize, usize)]) -> Value {
    json!(list
        .iter()
        .map(|&(a, b)| [logic.world_name(a), logic.world_name(b)])
        .collect::<Vec<_>>())
}

pub fn relation_text(logic: &Logic, rel: &WorldRelation) -> String {
    let [strict, equiv, incomparable] = pairs(rel);
    let mut out = String::new();
    for (list, sym) in [(&strict, "≺"), (&equiv, "≈"), (&incomparable, "∥")] {
        for &(a, b) in list {
            let _ = writeln!(
                out,
                "  {} {sym} {}",
                logic.world_name(a),
                logic.world_name(b)
            );
        }
    }
    if out.is_empty() {
        out.push_str("  (all worlds equivalent)\n");
    }
    out
}

pub fn witness(logic: &Logic, w: &PropertyWitness) -> Value {
    let name = |i: usize| logic.world_name(i).to_string();
    let models = |c| json!(logic.render_models(logic.class(c).models));
    match w {
        PropertyWitness::Unrelated { left, right } => {
            json!({"kind": "unrelated", "left": name(*left), "right": name(*right)})
        }
        PropertyWitness::Intransitive { a, b, c } => {
            json!({"kind": "intransitive", "a": name(*a), "b": name(*b), "c": name(*c)})
        }
        PropertyWitness::NotRetractive {
            class,
            lower,
            minimal,
        } => json!({
            "kind": "not-retractive",
            "class": models(*class),
            "lower": name(*lower),
            "minimal": name(*minimal),
        }),
        PropertyWitness::EmptyMin { class } => {
            json!({"kind": "empty-min", "class": models(*class)})
        }
        PropertyWitness::NotExpressible { class, min } => json!({
            "kind": "not-expressible",
            "class": models(*class),
            "min": logic.render_models(*min),
        }),
        PropertyWitness::NonExpressibleUnion { left, right, union } => json!({
            "kind": "non-expressible-union",
            "left": models(*left),
            "right": models(*right),
            "union": logic.render_models(*union),
        }),
    }
}

pub fn verdict(logic: &Logic, v: &PropertyVerdict) -> Value {
    json!({
        "holds": v.holds(),
        "witness": v.witness.as_ref().map(|w| witness(logic, w)),
    })
}

pub fn info(logic: &Logic) -> Output {
    let disjunctive = is_disjunctive(logic);
    let classes: Vec<Value> = logic
        .classes()
        .iter()
        .map(|c| {
            json!({
                "models": logic.render_models(c.models),
                "canonical": logic.render_base(&c.canonical),
            })
        })
        .collect();
    let mut text = format!(
        "{}: {} worlds, {} sentences, closure size {}\n",
        logic.name(),
        logic.world_count(),
        logic.sentence_count(),
        logic.class_count()
    );
    for c in logic.classes() {
        let _ = writeln!(
            text,
            "  {} = Mod {}",
            logic.show_models(c.models),
            logic.show_base(&c.canonical)
        );
    }
    let _ = writeln!(
        text,
        "disjunctive: {}",
        if disjunctive.holds() { "yes" } else { "no" }
    );
    if let Some(PropertyWitness::NonExpressibleUnion { union, .. }) = &disjunctive.witness {
        let _ = writeln!(text, "  {} is not expressible", logic.show_models(*union));
    }
    Output {
        json: json!({
            "command": "info",
            "logic": logic.name(),
            "worlds": logic.worlds(),
            "sentences": logic.sentences(),
            "closure_size": logic.class_count(),
            "classes": classes,
            "disjunctive": verdict(logic, &disjunctive),
        }),
        text,
        ok: true,
    }
}

pub fn audit_text(reports: &[AuditReport]) -> String {
    reports.iter().map(AuditReport::to_text).collect()
}

pub fn loops_json(logic: &Logic, search: &LoopSearch, limit: usize) -> Value {
    json!({
        "total": search.total,
        "limit": limit,
        "loops": search.loops.iter().map(|l| l.to_json(logic)).collect::<Vec<_>>(),
    })
}

pub fn loops_text(logic: &Logic, search: &LoopSearch) -> String {
    let mut out = format!(
        "{} loop{}\n",
        search.total,
        if search.total == 1 { "" } else { "s" }
    );
    let show = |c| logic.show_base(&logic.class(c).canonical);
    for l in &search.loops {
        let _ = writeln!(
            out,
            "  Γ = {}, {}, {}; Γ' = {}, {}, {}; K = {}",
            show(l.gammas[0]),
            show(l.gammas[1]),
            show(l.gammas[2]),
            show(l.gamma_primes[0]),
            show(l.gamma_primes[1]),
            show(l.gamma_primes[2]),
            show(l.k)
        );
    }
    out
}

pub fn conditions_json(logic: &Logic, c: &LoopConditions) -> Value {
    json!({
        "inconsistent_with_K": c.inconsistent,
        "regions": c.regions,
        "uncovered": c.uncovered.map(|u| logic.render_models(logic.class(u).models)),
        "holds": c.holds(),
    })
}

pub fn lift_failure_json(logic: &Logic, f: &LiftFailure) -> Value {
    match f {
        LiftFailure::Transitivity { a, b, c } => json!({
            "kind": "transitivity",
            "a": logic.world_name(*a),
            "b": logic.world_name(*b),
            "c": logic.world_name(*c),
        }),
        LiftFailure::MinPreservation { class } => json!({
            "kind": "min-preservation",
            "class": logic.render_models(logic.class(*class).models),
        }),
    }
}

pub fn lift_failure_text(logic: &Logic, f: &LiftFailure) -> String {
    match f {
        LiftFailure::Transitivity { a, b, c } => format!(
            "not transitive after dropping detached pairs: {} ⪯ {} ⪯ {} but not {} ⪯ {}",
            logic.world_name(*a),
            logic.world_name(*b),
            logic.world_name(*c),
            logic.world_name(*a),
            logic.world_name(*c)
        ),
        LiftFailure::MinPreservation { class } => format!(
            "extension changes the minimum of {}",
            logic.show_models(logic.class(*class).models)
        ),
    }
}

pub fn representability_json(logic: &Logic, r: &Representability) -> Value {
    match r {
        Representability::Representable(a) => json!({
            "verdict": r.label(),
            "assignment": assignment_to_json(a),
        }),
        Representability::NotRepresentable(cycle) => json!({
            "verdict": r.label(),
            "cycle": {
                "K": base(logic, &logic.class(cycle.k).canonical),
                "worlds": cycle.worlds.iter().map(|w| logic.world_name(*w)).collect::<Vec<_>>(),
                "Gamma": cycle.gammas.iter()
                    .map(|g| base(logic, &logic.class(*g).canonical))
                    .collect::<Vec<_>>(),
            },
        }),
        Representability::Unknown { k, failure } => json!({
            "verdict": r.label(),
            "K": base(logic, &logic.class(*k).canonical),
            "failure": lift_failure_json(logic, failure),
        }),
    }
}

pub fn representability_text(logic: &Logic, r: &Representability) -> String {
    match r {
        Representability::Representable(a) => format!(
            "representable: total preorder assignment over {} classes\n",
            a.relations().len()
        ),
        Representability::NotRepresentable(cycle) => {
            let mut out = format!(
                "not representable: forced strict cycle for K = {}\n",
                logic.show_base(&logic.class(cycle.k).canonical)
            );
            let n = cycle.worlds.len();
            for i in 0..n {
                let _ = writeln!(
                    out,
                    "  {} ≺ {} (Γ = {})",
                    logic.world_name(cycle.worlds[i]),
                    logic.world_name(cycle.worlds[(i + 1) % n]),
                    logic.show_base(&logic.class(cycle.gammas[i]).canonical)
                );
            }
            out
        }
        Representability::Unknown { k, failure } => format!(
            "unknown: lift failed for K = {}: {}\n",
            logic.show_base(&logic.class(*k).canonical),
            lift_failure_text(logic, failure)
        ),
    }
}
