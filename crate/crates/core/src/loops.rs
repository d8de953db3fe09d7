//! Critical loops, disjunctivity, and the end-to-end counterexample
//! pipeline.
//!
//! Three bases `Γ0, Γ1, Γ2` form a critical loop if there are `K, Γ'0, Γ'1,
//! Γ'2` with
//!
//! 1. `K ∪ Γi` inconsistent for every `i`,
//! 2. `∅ ≠ Mod(Γ'i) ⊆ (Mod(Γi) ∩ Mod(Γi⊕1)) \ Mod(Γi⊕2)`,
//! 3. every `Γ` consistent with all `Γ'i` has some `Γ'` with
//!    `∅ ≠ Mod(Γ') ⊆ Mod(Γ) \ ⋃ Mod(Γi)`.
//!
//! Everything is searched over semantic classes.

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::audit::{check_postulates, AuditOptions, AuditReport, Postulate};
use crate::change::{make_full_meet, make_induced, make_loop_operator, ChangeOperator, LoopData};
use crate::error::Result;
use crate::extract::{preorder_lift, representability, Representability};
use crate::kernel::{ClassId, Logic, ModelSet};
use crate::orders::{PropertyVerdict, PropertyWitness};
use crate::random::random_preorder_assignment;

pub const DEFAULT_LOOP_LIMIT: usize = 10;

/// A validated critical loop over semantic classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalLoop {
    pub gammas: [ClassId; 3],
    pub gamma_primes: [ClassId; 3],
    pub k: ClassId,
    /// For every class `Γ` consistent with all `Γ'i`, the least nonempty
    /// class inside `Mod(Γ) \ ⋃ Mod(Γi)`.
    pub certificate: Vec<(ClassId, ClassId)>,
}

/// Outcome of checking the three loop conditions for explicit components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopConditions {
    /// Condition (1).
    pub inconsistent: bool,
    /// Condition (2), per `i` (also requires `Γ'i` expressible).
    pub regions: [bool; 3],
    /// Condition (3): the least class `Γ` without a covering `Γ'`.
    pub uncovered: Option<ClassId>,
}

impl LoopConditions {
    pub fn holds(&self) -> bool {
        self.inconsistent && self.regions.iter().all(|r| *r) && self.uncovered.is_none()
    }
}

fn region(g: &[ModelSet; 3], i: usize) -> ModelSet {
    g[i].intersection(g[(i + 1) % 3]).difference(g[(i + 2) % 3])
}

/// Least nonempty class contained in `target`.
fn least_inside(logic: &Logic, target: ModelSet) -> Option<ClassId> {
    logic.class_ids().find(|c| {
        let m = logic.class(*c).models;
        !m.is_empty() && m.is_subset(target)
    })
}

/// Evaluates the loop conditions for the given model sets, returning the
/// condition-(3) certificate alongside.
fn evaluate(
    logic: &Logic,
    g: [ModelSet; 3],
    gp: [ModelSet; 3],
    k: ModelSet,
) -> (LoopConditions, Vec<(ClassId, ClassId)>) {
    let inconsistent = g.iter().all(|gi| !gi.intersects(k));
    let regions = [0, 1, 2].map(|i| {
        !gp[i].is_empty() && logic.is_expressible(gp[i]) && gp[i].is_subset(region(&g, i))
    });
    let covered = g[0].union(g[1]).union(g[2]);
    let mut certificate = Vec::new();
    let mut uncovered = None;
    for c in logic.class_ids() {
        let m = logic.class(c).models;
        if gp.iter().all(|p| p.intersects(m)) {
            match least_inside(logic, m.difference(covered)) {
                Some(inner) => certificate.push((c, inner)),
                None => {
                    uncovered = Some(c);
                    break;
                }
            }
        }
    }
    let conditions = LoopConditions {
        inconsistent,
        regions,
        uncovered,
    };
    (conditions, certificate)
}

/// Checks the loop conditions for explicit components, e.g. a candidate
/// taken from a hand derivation.
pub fn evaluate_loop(
    logic: &Logic,
    gammas: [ModelSet; 3],
    gamma_primes: [ModelSet; 3],
    k: ModelSet,
) -> LoopConditions {
    evaluate(logic, gammas, gamma_primes, k).0
}

impl CriticalLoop {
    fn models(&self, logic: &Logic, ids: [ClassId; 3]) -> [ModelSet; 3] {
        ids.map(|c| logic.class(c).models)
    }

    /// Re-checks all three conditions and the stored certificate.
    pub fn revalidate(&self, logic: &Logic) -> bool {
        let g = self.models(logic, self.gammas);
        let gp = self.models(logic, self.gamma_primes);
        let (conditions, certificate) = evaluate(logic, g, gp, logic.class(self.k).models);
        conditions.holds() && certificate == self.certificate
    }

    /// Canonical bases of the components, as used by the counterexample
    /// operator.
    pub fn loop_data(&self, logic: &Logic) -> Result<LoopData> {
        let base = |c: ClassId| logic.class(c).canonical.clone();
        LoopData::new(
            logic,
            self.gammas.map(base),
            self.gamma_primes.map(base),
            base(self.k),
        )
    }

    pub fn to_json(&self, logic: &Logic) -> Value {
        let b = |c: ClassId| json!(logic.render_base(&logic.class(c).canonical));
        let m = |c: ClassId| json!(logic.render_models(logic.class(c).models));
        json!({
            "Gamma": self.gammas.map(b),
            "Gamma_models": self.gammas.map(m),
            "Gamma_prime": self.gamma_primes.map(b),
            "Gamma_prime_models": self.gamma_primes.map(m),
            "K": b(self.k),
            "certificate": self.certificate.iter().map(|(g, inner)| json!({
                "Gamma": b(*g),
                "inside": b(*inner),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Loops found (up to the limit) and the total number of loop triples.
#[derive(Clone, Debug)]
pub struct LoopSearch {
    pub loops: Vec<CriticalLoop>,
    pub total: usize,
}

/// Inclusion-minimal nonempty classes inside `target`, in class order.
fn minimal_inside(logic: &Logic, target: ModelSet) -> Vec<ClassId> {
    let inside: Vec<ClassId> = logic
        .class_ids()
        .filter(|c| {
            let m = logic.class(*c).models;
            !m.is_empty() && m.is_subset(target)
        })
        .collect();
    inside
        .iter()
        .copied()
        .filter(|c| {
            let m = logic.class(*c).models;
            !inside
                .iter()
                .any(|d| d != c && logic.class(*d).models.is_subset(m))
        })
        .collect()
}

/// Searches every unordered triple of classes `Γ0 < Γ1 < Γ2`.
///
/// `K` is the smallest consistent class disjoint from all three (falling
/// back to the inconsistent class). Shrinking `Γ'i` only weakens condition
/// (3)'s premise, so trying inclusion-minimal `Γ'i` is exhaustive.
pub fn find_critical_loops(logic: &Logic, limit: usize) -> LoopSearch {
    let n = logic.class_count();
    let models: Vec<ModelSet> = logic.classes().iter().map(|c| c.models).collect();
    // Smallest consistent classes first, then canonical order.
    let mut k_order: Vec<ClassId> = logic.class_ids().collect();
    k_order.sort_by_key(|c| (models[c.0].is_empty(), models[c.0].len(), *c));
    let mut minimal_cache: HashMap<ModelSet, Vec<ClassId>> = HashMap::new();

    let mut loops = Vec::new();
    let mut total = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let g = [models[a], models[b], models[c]];
                let regions = [0, 1, 2].map(|i| region(&g, i));
                if regions.iter().any(|r| r.is_empty()) {
                    continue;
                }
                let covered = g[0].union(g[1]).union(g[2]);
                let Some(&k) = k_order.iter().find(|k| !models[k.0].intersects(covered)) else {
                    continue;
                };
                let choices = regions.map(|r| {
                    minimal_cache
                        .entry(r)
                        .or_insert_with(|| minimal_inside(logic, r))
                        .clone()
                });
                let found = choices[0].iter().find_map(|&p0| {
                    choices[1].iter().find_map(|&p1| {
                        choices[2].iter().find_map(|&p2| {
                            let gp = [p0, p1, p2];
                            let (conditions, certificate) =
                                evaluate(logic, g, gp.map(|p| models[p.0]), models[k.0]);
                            conditions.holds().then_some(CriticalLoop {
                                gammas: [ClassId(a), ClassId(b), ClassId(c)],
                                gamma_primes: gp,
                                k,
                                certificate,
                            })
                        })
                    })
                });
                if let Some(found) = found {
                    total += 1;
                    if loops.len() < limit {
                        loops.push(found);
                    }
                }
            }
        }
    }
    LoopSearch { loops, total }
}

/// Whether the union of any two expressible sets is expressible; the
/// witness is the least non-expressible union.
pub fn is_disjunctive(logic: &Logic) -> PropertyVerdict {
    let witness = logic.class_ids().find_map(|left| {
        logic.class_ids().skip(left.0 + 1).find_map(|right| {
            let union = logic.class(left).models.union(logic.class(right).models);
            (!logic.is_expressible(union)).then_some(PropertyWitness::NonExpressibleUnion {
                left,
                right,
                union,
            })
        })
    });
    PropertyVerdict { witness }
}

/// Result of running one operator through audit and representability.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub operator: String,
    pub audit: AuditReport,
    /// `None` when the audit failed.
    pub verdict: Option<Representability>,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub logic: String,
    pub search: LoopSearch,
    pub runs: Vec<PipelineRun>,
    /// Expectation failures; empty when everything behaved as predicted.
    pub findings: Vec<String>,
}

impl PipelineReport {
    pub fn ok(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Number of seeded preorder-induced operators tried on loop-free logics.
pub const PIPELINE_INDUCED: usize = 3;

/// With a loop: builds the counterexample operator, which must pass the
/// postulates and be judged not representable. Without one: full meet and
/// a few seeded preorder-induced operators must all be representable, and
/// the preorder lift must succeed for every class of `K`.
pub fn counterexample_pipeline(logic: Arc<Logic>, opts: &AuditOptions) -> PipelineReport {
    let search = find_critical_loops(&logic, 1);
    let mut findings = Vec::new();
    let mut operators: Vec<ChangeOperator> = Vec::new();
    match search.loops.first() {
        Some(found) => match found.loop_data(&logic) {
            Ok(data) => operators.push(make_loop_operator(logic.clone(), data)),
            Err(e) => findings.push(format!("loop data rejected: {e}")),
        },
        None => {
            operators.push(make_full_meet(logic.clone()));
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for i in 0..PIPELINE_INDUCED {
                let a = random_preorder_assignment(logic.clone(), &mut rng);
                match make_induced(a) {
                    Ok(op) => operators.push(op.with_name(format!("induced-{i}"))),
                    Err(e) => findings.push(format!("induced-{i}: {e}")),
                }
            }
        }
    }
    let expect_cycle = !search.loops.is_empty();
    let mut runs = Vec::new();
    for op in operators {
        let audit = check_postulates(&op, &Postulate::ALL, opts);
        let verdict = if audit.passed() {
            representability(&op, opts).ok()
        } else {
            findings.push(format!("{} fails the postulates", op.name()));
            None
        };
        match (&verdict, expect_cycle) {
            (Some(Representability::NotRepresentable(_)), true) => {}
            (Some(Representability::Representable(_)), false) => {}
            (Some(v), _) => findings.push(format!(
                "{} judged {}, expected {}",
                op.name(),
                v.label(),
                if expect_cycle {
                    "not-representable"
                } else {
                    "representable"
                }
            )),
            (None, _) => {}
        }
        if !expect_cycle {
            for c in logic.class_ids() {
                let k = &logic.class(c).canonical;
                if let Err(failure) = preorder_lift(&op, k) {
                    findings.push(format!(
                        "{}: lift failed for K = {}: {failure:?}",
                        op.name(),
                        logic.show_base(k)
                    ));
                }
            }
        }
        runs.push(PipelineRun {
            operator: op.name().to_string(),
            audit,
            verdict,
        });
    }
    PipelineReport {
        logic: logic.name().to_string(),
        search,
        runs,
        findings,
    }
}
