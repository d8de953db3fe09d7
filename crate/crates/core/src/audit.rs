//! Postulate, faithfulness and compatibility audits with least witnesses.
//!
//! Every check scans its domain in canonical order (classes by [`ClassId`],
//! worlds by index, raw bases by sentence bitmask) and reports the first
//! violation, so reports are deterministic and witnesses are minimal in
//! that order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::change::ChangeOperator;
use crate::error::{Error, Result};
use crate::kernel::{BeliefBase, ClassId, Logic, ModelSet};
use crate::orders::{is_total, min_set, PropertyWitness, WorldRelation};

/// G4 is checked over every pair of raw bases when there are at most this
/// many bases, and sampled otherwise.
pub const G4_EXHAUSTIVE_BASES: usize = 4096;
pub const G4_SAMPLES: usize = 10_000;

/// A total relation `⪯_K` for every semantic class of `K`.
///
/// In syntactic mode, individual bases may carry their own relation
/// (overrides), which makes (F3) a real condition.
#[derive(Clone)]
pub struct Assignment {
    logic: Arc<Logic>,
    relations: Vec<WorldRelation>,
    overrides: BTreeMap<BeliefBase, WorldRelation>,
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Assignment")
            .field("logic", &self.logic.name())
            .field("relations", &self.relations.len())
            .field("overrides", &self.overrides.len())
            .finish()
    }
}

fn check_relation(logic: &Logic, base: &BeliefBase, rel: &WorldRelation) -> Result<()> {
    rel.check_dims(logic)?;
    if let Some(PropertyWitness::Unrelated { left, right }) = is_total(rel).witness {
        return Err(Error::NotTotal {
            context: format!("K = {}", logic.show_base(base)),
            left: logic.world_name(left).to_string(),
            right: logic.world_name(right).to_string(),
        });
    }
    Ok(())
}

impl Assignment {
    /// One relation per class, in class order.
    pub fn new(logic: Arc<Logic>, relations: Vec<WorldRelation>) -> Result<Self> {
        if relations.len() < logic.class_count() {
            let missing = ClassId(relations.len());
            return Err(Error::MissingClass(
                logic.show_base(&logic.class(missing).canonical),
            ));
        }
        if relations.len() > logic.class_count() {
            return Err(Error::Contract(format!(
                "{} relations given for {} classes",
                relations.len(),
                logic.class_count()
            )));
        }
        for (c, rel) in logic.class_ids().zip(&relations) {
            check_relation(&logic, &logic.class(c).canonical, rel)?;
        }
        Ok(Assignment {
            logic,
            relations,
            overrides: BTreeMap::new(),
        })
    }

    pub fn from_fn(logic: Arc<Logic>, f: impl FnMut(ClassId) -> WorldRelation) -> Result<Self> {
        let relations = logic.class_ids().map(f).collect();
        Self::new(logic, relations)
    }

    /// Gives `base` its own relation (syntactic mode).
    pub fn with_override(mut self, base: BeliefBase, rel: WorldRelation) -> Result<Self> {
        self.logic.models_of(&base)?;
        check_relation(&self.logic, &base, &rel)?;
        self.overrides.insert(base, rel);
        Ok(self)
    }

    pub fn logic(&self) -> &Arc<Logic> {
        &self.logic
    }

    pub fn relation(&self, class: ClassId) -> &WorldRelation {
        &self.relations[class.0]
    }

    pub fn relations(&self) -> &[WorldRelation] {
        &self.relations
    }

    pub fn overrides(&self) -> &BTreeMap<BeliefBase, WorldRelation> {
        &self.overrides
    }

    pub fn is_syntactic(&self) -> bool {
        !self.overrides.is_empty()
    }

    /// `⪯_K` for a concrete base.
    pub fn relation_for(&self, k: &BeliefBase) -> &WorldRelation {
        self.overrides
            .get(k)
            .unwrap_or_else(|| self.relation(self.logic.class_of(k)))
    }

    /// Every keyed base with its relation: class representatives first, then
    /// overrides.
    pub fn keyed(&self) -> impl Iterator<Item = (&BeliefBase, &WorldRelation)> {
        self.logic
            .classes()
            .iter()
            .map(|c| &c.canonical)
            .zip(&self.relations)
            .chain(&self.overrides)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Postulate {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
}

impl Postulate {
    pub const ALL: [Postulate; 6] = [
        Postulate::G1,
        Postulate::G2,
        Postulate::G3,
        Postulate::G4,
        Postulate::G5,
        Postulate::G6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Postulate::G1 => "G1",
            Postulate::G2 => "G2",
            Postulate::G3 => "G3",
            Postulate::G4 => "G4",
            Postulate::G5 => "G5",
            Postulate::G6 => "G6",
        }
    }
}

impl FromStr for Postulate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Postulate::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Contract(format!("unknown postulate `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No violation among the sampled inputs.
    SampledPass,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::SampledPass => "sampled-pass",
        }
    }

    pub fn is_pass(self) -> bool {
        self != Verdict::Fail
    }
}

/// Evidence for a failed check. Bases are concrete and can be fed back
/// into [`ChangeOperator::apply`] to reproduce the violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Pair {
        k: BeliefBase,
        gamma: BeliefBase,
    },
    Triple {
        k: BeliefBase,
        gamma1: BeliefBase,
        gamma2: BeliefBase,
    },
    /// `K1 ≡ K2` and `Γ1 ≡ Γ2` but the results differ.
    Syntactic {
        k1: BeliefBase,
        gamma1: BeliefBase,
        k2: BeliefBase,
        gamma2: BeliefBase,
    },
    Worlds {
        k: BeliefBase,
        left: usize,
        right: usize,
    },
    /// Equivalent bases with different relations.
    Relations {
        k1: BeliefBase,
        k2: BeliefBase,
    },
    Compatibility {
        k: BeliefBase,
        gamma: BeliefBase,
        result: ModelSet,
        min: ModelSet,
    },
}

impl Witness {
    pub fn to_json(&self, logic: &Logic) -> Value {
        let b = |base: &BeliefBase| json!(logic.render_base(base));
        let m = |models: ModelSet| json!(logic.render_models(models));
        match self {
            Witness::Pair { k, gamma } => json!({"K": b(k), "Gamma": b(gamma)}),
            Witness::Triple { k, gamma1, gamma2 } => {
                json!({"K": b(k), "Gamma1": b(gamma1), "Gamma2": b(gamma2)})
            }
            Witness::Syntactic {
                k1,
                gamma1,
                k2,
                gamma2,
            } => json!({"K1": b(k1), "Gamma1": b(gamma1), "K2": b(k2), "Gamma2": b(gamma2)}),
            Witness::Worlds { k, left, right } => json!({
                "K": b(k),
                "left": logic.world_name(*left),
                "right": logic.world_name(*right),
            }),
            Witness::Relations { k1, k2 } => json!({"K1": b(k1), "K2": b(k2)}),
            Witness::Compatibility {
                k,
                gamma,
                result,
                min,
            } => json!({"K": b(k), "Gamma": b(gamma), "result": m(*result), "min": m(*min)}),
        }
    }

    pub fn describe(&self, logic: &Logic) -> String {
        let b = |base: &BeliefBase| logic.show_base(base);
        match self {
            Witness::Pair { k, gamma } => format!("K = {}, Γ = {}", b(k), b(gamma)),
            Witness::Triple { k, gamma1, gamma2 } => {
                format!("K = {}, Γ1 = {}, Γ2 = {}", b(k), b(gamma1), b(gamma2))
            }
            Witness::Syntactic {
                k1,
                gamma1,
                k2,
                gamma2,
            } => format!(
                "K1 = {}, Γ1 = {} vs K2 = {}, Γ2 = {}",
                b(k1),
                b(gamma1),
                b(k2),
                b(gamma2)
            ),
            Witness::Worlds { k, left, right } => format!(
                "K = {}, {} vs {}",
                b(k),
                logic.world_name(*left),
                logic.world_name(*right)
            ),
            Witness::Relations { k1, k2 } => format!("K1 = {}, K2 = {}", b(k1), b(k2)),
            Witness::Compatibility {
                k,
                gamma,
                result,
                min,
            } => format!(
                "K = {}, Γ = {}: Mod(K ◦ Γ) = {} but min = {}",
                b(k),
                b(gamma),
                logic.show_models(*result),
                logic.show_models(*min)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl CheckResult {
    fn new(name: impl Into<String>, witness: Option<Witness>, sampled: bool) -> Self {
        let verdict = match (&witness, sampled) {
            (Some(_), _) => Verdict::Fail,
            (None, true) => Verdict::SampledPass,
            (None, false) => Verdict::Pass,
        };
        CheckResult {
            name: name.into(),
            verdict,
            witnesses: witness.into_iter().collect(),
        }
    }
}

#[derive(Clone)]
pub struct AuditReport {
    logic: Arc<Logic>,
    pub subject: String,
    pub checks: Vec<CheckResult>,
    /// False when some check was sampled.
    pub exhaustive: bool,
}

impl fmt::Debug for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AuditReport")
            .field("subject", &self.subject)
            .field("checks", &self.checks)
            .field("exhaustive", &self.exhaustive)
            .finish()
    }
}

impl AuditReport {
    pub fn new(logic: Arc<Logic>, subject: impl Into<String>) -> Self {
        AuditReport {
            logic,
            subject: subject.into(),
            checks: Vec::new(),
            exhaustive: true,
        }
    }

    pub fn logic(&self) -> &Arc<Logic> {
        &self.logic
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.is_pass())
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.verdict.is_pass())
    }

    /// `(passed, failed)` counts.
    pub fn summary(&self) -> (usize, usize) {
        let failed = self.failures().count();
        (self.checks.len() - failed, failed)
    }

    /// Appends the checks of another report on the same logic.
    pub fn merge(&mut self, other: AuditReport) {
        self.exhaustive &= other.exhaustive;
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "verdict": c.verdict.as_str(),
                    "witnesses": c.witnesses.iter().map(|w| w.to_json(&self.logic)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"subject": self.subject, "checks": checks, "exhaustive": self.exhaustive})
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} on {}\n", self.subject, self.logic.name());
        for c in &self.checks {
            out.push_str(&format!("  {:<12} {}\n", c.name, c.verdict.as_str()));
            for w in &c.witnesses {
                out.push_str(&format!("    witness: {}\n", w.describe(&self.logic)));
            }
        }
        let (pass, fail) = self.summary();
        out.push_str(&format!(
            "  {pass} passed, {fail} failed{}\n",
            if self.exhaustive {
                ""
            } else {
                " (some checks sampled)"
            }
        ));
        out
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AuditOptions {
    /// Seed for sampled checks.
    pub seed: u64,
    /// Drop (G4) and (F3).
    pub syntax_sensitive: bool,
}

/// Checks the requested postulates. G1–G3 range over class pairs, G5/G6
/// over class triples (with `Γ1 ∪ Γ2` formed syntactically from the
/// canonical bases), G4 over raw bases.
pub fn check_postulates(
    op: &ChangeOperator,
    which: &[Postulate],
    opts: &AuditOptions,
) -> AuditReport {
    let logic = op.logic().clone();
    let mut which: Vec<Postulate> = which.to_vec();
    which.sort();
    which.dedup();
    if opts.syntax_sensitive {
        which.retain(|p| *p != Postulate::G4);
    }

    let classes = logic.classes();
    let n = classes.len();
    let out: Vec<Vec<ModelSet>> = classes
        .iter()
        .map(|kc| {
            classes
                .iter()
                .map(|gc| op.apply_models(&kc.canonical, &gc.canonical))
                .collect()
        })
        .collect();
    let pairs = || (0..n).flat_map(|k| (0..n).map(move |g| (k, g)));
    let pair = |(k, g): (usize, usize)| Witness::Pair {
        k: classes[k].canonical.clone(),
        gamma: classes[g].canonical.clone(),
    };

    let mut report = AuditReport::new(logic.clone(), op.name());
    let triples_needed = which.contains(&Postulate::G5) || which.contains(&Postulate::G6);
    let (g5, g6) = if triples_needed {
        triple_scan(op, &out)
    } else {
        (None, None)
    };
    let (mut g5, mut g6) = (g5, g6);
    for p in which {
        let (witness, sampled) = match p {
            Postulate::G1 => (
                pairs()
                    .find(|&(k, g)| !out[k][g].is_subset(classes[g].models))
                    .map(pair),
                false,
            ),
            Postulate::G2 => (
                pairs()
                    .find(|&(k, g)| {
                        let both = classes[k].models.intersection(classes[g].models);
                        !both.is_empty() && out[k][g] != both
                    })
                    .map(pair),
                false,
            ),
            Postulate::G3 => (
                pairs()
                    .find(|&(k, g)| !classes[g].models.is_empty() && out[k][g].is_empty())
                    .map(pair),
                false,
            ),
            Postulate::G4 => {
                let (w, sampled) = g4_scan(op, &out, opts.seed);
                report.exhaustive &= !sampled;
                (w, sampled)
            }
            Postulate::G5 => (g5.take(), false),
            Postulate::G6 => (g6.take(), false),
        };
        report
            .checks
            .push(CheckResult::new(p.name(), witness, sampled));
    }
    report
}

fn triple_scan(op: &ChangeOperator, out: &[Vec<ModelSet>]) -> (Option<Witness>, Option<Witness>) {
    let logic = op.logic();
    let classes = logic.classes();
    let (mut g5, mut g6) = (None, None);
    'scan: for (k, kc) in classes.iter().enumerate() {
        for (g1, c1) in classes.iter().enumerate() {
            for c2 in classes {
                // Mod((K ◦ Γ1) ∪ Γ2) and Mod(K ◦ (Γ1 ∪ Γ2)).
                let lhs = out[k][g1].intersection(c2.models);
                let rhs = op.apply_models(&kc.canonical, &c1.canonical.union(&c2.canonical));
                let triple = || Witness::Triple {
                    k: kc.canonical.clone(),
                    gamma1: c1.canonical.clone(),
                    gamma2: c2.canonical.clone(),
                };
                if g5.is_none() && !lhs.is_subset(rhs) {
                    g5 = Some(triple());
                }
                if g6.is_none() && !lhs.is_empty() && !rhs.is_subset(lhs) {
                    g6 = Some(triple());
                }
                if g5.is_some() && g6.is_some() {
                    break 'scan;
                }
            }
        }
    }
    (g5, g6)
}

fn bits_to_base(mask: u64, n: usize) -> BeliefBase {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Returns the least violation and whether the scan was sampled.
fn g4_scan(op: &ChangeOperator, out: &[Vec<ModelSet>], seed: u64) -> (Option<Witness>, bool) {
    let logic = op.logic();
    let n = logic.sentence_count();
    let witness = |k2: &BeliefBase, g2: &BeliefBase| Witness::Syntactic {
        k1: logic.class(logic.class_of(k2)).canonical.clone(),
        gamma1: logic.class(logic.class_of(g2)).canonical.clone(),
        k2: k2.clone(),
        gamma2: g2.clone(),
    };

    if n < usize::BITS as usize && 1usize << n <= G4_EXHAUSTIVE_BASES {
        let bases: Vec<(BeliefBase, ClassId)> = (0..1u64 << n)
            .map(|m| {
                let b = bits_to_base(m, n);
                let c = logic.class_of(&b);
                (b, c)
            })
            .collect();
        for (k, kc) in &bases {
            for (g, gc) in &bases {
                if op.apply_models(k, g) != out[kc.0][gc.0] {
                    return (Some(witness(k, g)), false);
                }
            }
        }
        return (None, false);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut supersets: HashMap<ClassId, Vec<usize>> = HashMap::new();
    let mut variant = |c: ClassId, rng: &mut ChaCha8Rng| -> BeliefBase {
        let models = logic.class(c).models;
        let sup = supersets.entry(c).or_insert_with(|| {
            (0..n)
                .filter(|&s| models.is_subset(logic.sentence_models(s)))
                .collect()
        });
        let extra: Vec<usize> = sup.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let mut base = logic.class(c).canonical.clone();
        for s in extra {
            base = base.with(s);
        }
        base
    };
    let count = logic.class_count();
    for _ in 0..G4_SAMPLES {
        let kc = ClassId(rng.gen_range(0..count));
        let gc = ClassId(rng.gen_range(0..count));
        let k = variant(kc, &mut rng);
        let g = variant(gc, &mut rng);
        if op.apply_models(&k, &g) != out[kc.0][gc.0] {
            return (Some(witness(&k, &g)), true);
        }
    }
    (None, true)
}

/// (F1) no strict preference among models of `K`; (F2) models of `K` are
/// strictly below non-models; (F3) equivalent bases share a relation.
pub fn check_faithful(a: &Assignment, opts: &AuditOptions) -> AuditReport {
    let logic = a.logic().clone();
    let mut f1 = None;
    let mut f2 = None;
    for (k, rel) in a.keyed() {
        let km = logic.mods(k);
        let non = logic.omega().difference(km);
        if f1.is_none() {
            f1 = km
                .iter()
                .flat_map(|l| km.iter().map(move |r| (l, r)))
                .find(|&(l, r)| rel.lt(l, r))
                .map(|(left, right)| Witness::Worlds {
                    k: k.clone(),
                    left,
                    right,
                });
        }
        if f2.is_none() {
            f2 = km
                .iter()
                .flat_map(|l| non.iter().map(move |r| (l, r)))
                .find(|&(l, r)| !rel.lt(l, r))
                .map(|(left, right)| Witness::Worlds {
                    k: k.clone(),
                    left,
                    right,
                });
        }
    }
    let mut report = AuditReport::new(logic.clone(), "assignment");
    report.checks.push(CheckResult::new("F1", f1, false));
    report.checks.push(CheckResult::new("F2", f2, false));
    if !opts.syntax_sensitive {
        let f3 = a.overrides().iter().find_map(|(k, rel)| {
            let c = logic.class_of(k);
            (rel != a.relation(c)).then(|| Witness::Relations {
                k1: logic.class(c).canonical.clone(),
                k2: k.clone(),
            })
        });
        report.checks.push(CheckResult::new("F3", f3, false));
    }
    report
}

/// `Mod(K ◦ Γ) = min(Mod(Γ), ⪯_K)` for every keyed `K` and every class `Γ`.
pub fn check_compatible(op: &ChangeOperator, a: &Assignment) -> AuditReport {
    let logic = op.logic().clone();
    let witness = a.keyed().find_map(|(k, rel)| {
        logic.classes().iter().find_map(|gc| {
            let result = op.apply_models(k, &gc.canonical);
            let min = min_set(rel, gc.models);
            (result != min).then(|| Witness::Compatibility {
                k: k.clone(),
                gamma: gc.canonical.clone(),
                result,
                min,
            })
        })
    });
    let mut report = AuditReport::new(logic, format!("{} vs assignment", op.name()));
    report
        .checks
        .push(CheckResult::new("compatible", witness, false));
    report
}
