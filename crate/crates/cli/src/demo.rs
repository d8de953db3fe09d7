//! Fixture walkthrough. Everything is computed; the reference listings are
//! printed next to the computed values and disagreements are reported as
//! divergences, never asserted away.

use std::fmt::Write;
use std::sync::Arc;

use anyhow::{anyhow, Result};
use revlab::audit::{check_postulates, AuditOptions, AuditReport, Postulate};
use revlab::change::{make_builtin_ex, make_full_meet, make_loop_operator};
use revlab::extract::{extract_relation, representability, Representability};
use revlab::kernel::{lex_core, lex_paper, propositional, Logic, ModelSet};
use revlab::loops::{evaluate_loop, find_critical_loops, DEFAULT_LOOP_LIMIT};
use revlab::orders::WorldRelation;
use serde_json::{json, Value};

use crate::report::{self, Output};

/// Strict pairs of the reference listing for `∘Ex` at `K = {ψ0}`, by world
/// index; everything else is reflexivity.
fn reference_strict() -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (1..=5).map(|i| (0, i)).collect();
    out.extend([(1, 2), (2, 3), (3, 1)]);
    out.extend([1, 2, 3, 5].map(|i| (4, i)));
    out.extend((0..=4).map(|i| (i, 5)));
    out.sort();
    out.dedup();
    out
}

fn reference_relation(n: usize) -> WorldRelation {
    let strict = reference_strict();
    WorldRelation::from_fn(n, |i, j| i == j || strict.contains(&(i, j)))
}

/// `≺`, `≻`, `≈` or `∥` between two worlds.
fn status(rel: &WorldRelation, i: usize, j: usize) -> &'static str {
    match (rel.le(i, j), rel.le(j, i)) {
        (true, false) => "≺",
        (false, true) => "≻",
        (true, true) => "≈",
        (false, false) => "∥",
    }
}

struct Divergence {
    topic: &'static str,
    reference: String,
    computed: String,
}

impl Divergence {
    fn json(&self) -> Value {
        json!({"topic": self.topic, "reference": self.reference, "computed": self.computed})
    }
}

fn models(logic: &Logic, names: &[&str]) -> Result<ModelSet> {
    Ok(logic.mods(&logic.base(names)?))
}

fn first_failure(report: &AuditReport) -> Option<String> {
    report.failures().next().map(|c| {
        let w = c
            .witnesses
            .first()
            .map(|w| format!(" at {}", w.describe(report.logic())))
            .unwrap_or_default();
        format!("{} fails{w}", c.name)
    })
}

fn lex_paper_section(
    opts: &AuditOptions,
    text: &mut String,
    divergences: &mut Vec<Divergence>,
) -> Result<Value> {
    let logic = Arc::new(lex_paper());
    let info = report::info(&logic);
    let _ = writeln!(text, "== lex_paper ==\n{}", info.text);

    // Extraction for K = {ψ0}.
    let ex = make_builtin_ex(logic.clone())?;
    let k = logic.base(&["ψ0"])?;
    let rel = extract_relation(&ex, &k);
    let reference = reference_relation(logic.world_count());
    let [strict, equivalent, incomparable] = report::pairs(&rel);
    let mut pair_diffs = Vec::new();
    let n = logic.world_count();
    for i in 0..n {
        for j in i + 1..n {
            let (c, r) = (status(&rel, i, j), status(&reference, i, j));
            if c != r {
                let (a, b) = (logic.world_name(i), logic.world_name(j));
                pair_diffs.push(json!({"pair": [a, b], "computed": c, "reference": r}));
                divergences.push(Divergence {
                    topic: "ex-extraction",
                    reference: format!("{a} {r} {b}"),
                    computed: format!("{a} {c} {b}"),
                });
            }
        }
    }
    let _ = writeln!(text, "∘Ex extraction for K = {{ψ0}} (computed):");
    text.push_str(&report::relation_text(&logic, &rel));
    let _ = writeln!(text, "reference listing:");
    text.push_str(&report::relation_text(&logic, &reference));
    let _ = writeln!(
        text,
        "{} pair(s) differ from the reference listing\n",
        pair_diffs.len()
    );
    let extraction = json!({
        "K": report::base(&logic, &k),
        "matrix": report::matrix(&rel),
        "strict": report::pair_names(&logic, &strict),
        "equivalent": report::pair_names(&logic, &equivalent),
        "incomparable": report::pair_names(&logic, &incomparable),
        "reference_strict": report::pair_names(&logic, &reference_strict()),
        "differences": pair_diffs,
    });

    let audit = check_postulates(&ex, &Postulate::ALL, opts);
    text.push_str(&audit.to_text());
    if let Some(failure) = first_failure(&audit) {
        divergences.push(Divergence {
            topic: "ex-postulates-lex_paper",
            reference: "∘Ex satisfies G1–G6".into(),
            computed: failure,
        });
    }

    // The φ triple, with the reference Γ' and with Γ' read off the regions.
    let gammas = [
        models(&logic, &["φ1"])?,
        models(&logic, &["φ2"])?,
        models(&logic, &["φ3"])?,
    ];
    let k_models = logic.mods(&k);
    let reference_primes = [
        models(&logic, &["ψ2"])?,
        models(&logic, &["ψ3"])?,
        models(&logic, &["ψ4"])?,
    ];
    let corrected_primes = [
        models(&logic, &["ψ2"])?,
        models(&logic, &["ψ3"])?,
        models(&logic, &["ψ1"])?,
    ];
    let with_reference = evaluate_loop(&logic, gammas, reference_primes, k_models);
    let with_corrected = evaluate_loop(&logic, gammas, corrected_primes, k_models);
    let _ = writeln!(
        text,
        "\nΓ = {{φ1}}, {{φ2}}, {{φ3}} with K = {{ψ0}}:\n  reference Γ' = {{ψ2}}, {{ψ3}}, {{ψ4}}: regions {:?}, loop {}\n  region Γ' = {{ψ2}}, {{ψ3}}, {{ψ1}}: regions {:?}, uncovered {}, loop {}",
        with_reference.regions,
        if with_reference.holds() { "yes" } else { "no" },
        with_corrected.regions,
        with_corrected
            .uncovered
            .map(|c| logic.show_models(logic.class(c).models))
            .unwrap_or_else(|| "none".into()),
        if with_corrected.holds() { "yes" } else { "no" },
    );
    if !with_reference.holds() || !with_corrected.holds() {
        let mut why = Vec::new();
        if let Some(i) = with_reference.regions.iter().position(|r| !r) {
            why.push(format!("reference Γ'_{i} misses its region"));
        }
        if let Some(c) = with_corrected.uncovered {
            why.push(format!(
                "condition (3) fails at Γ with models {}",
                logic.show_models(logic.class(c).models)
            ));
        }
        divergences.push(Divergence {
            topic: "phi-triple-loop",
            reference: "{φ1}, {φ2}, {φ3} form a critical loop".into(),
            computed: why.join("; "),
        });
    }

    let search = find_critical_loops(&logic, DEFAULT_LOOP_LIMIT);
    text.push_str(&report::loops_text(&logic, &search));
    text.push('\n');

    Ok(json!({
        "closure_size": logic.class_count(),
        "disjunctive": info.json["disjunctive"],
        "ex_extraction": extraction,
        "ex_audit": audit.to_json(),
        "phi_triple": {
            "Gamma": [["φ1"], ["φ2"], ["φ3"]],
            "K": ["ψ0"],
            "reference_Gamma_prime": [["ψ2"], ["ψ3"], ["ψ4"]],
            "reference_conditions": report::conditions_json(&logic, &with_reference),
            "region_Gamma_prime": [["ψ2"], ["ψ3"], ["ψ1"]],
            "region_conditions": report::conditions_json(&logic, &with_corrected),
        },
        "loops": report::loops_json(&logic, &search, DEFAULT_LOOP_LIMIT),
    }))
}

/// Returns the section and whether the counterexample chain held up.
fn lex_core_section(
    opts: &AuditOptions,
    text: &mut String,
    divergences: &mut Vec<Divergence>,
) -> Result<(Value, bool)> {
    let logic = Arc::new(lex_core());
    let _ = writeln!(text, "== lex_core ==");
    let ex_audit = check_postulates(&make_builtin_ex(logic.clone())?, &Postulate::ALL, opts);
    text.push_str(&ex_audit.to_text());
    let search = find_critical_loops(&logic, DEFAULT_LOOP_LIMIT);
    text.push_str(&report::loops_text(&logic, &search));
    let found = search
        .loops
        .first()
        .ok_or_else(|| anyhow!("lex_core has no critical loop"))?;
    let data = found.loop_data(&logic)?;
    let b_prime: Vec<Value> = data
        .b_prime()
        .iter()
        .map(|c| report::base(&logic, &logic.class(*c).canonical))
        .collect();
    let b_prime_text: Vec<String> = data
        .b_prime()
        .iter()
        .map(|c| logic.show_base(&logic.class(*c).canonical))
        .collect();
    let _ = writeln!(
        text,
        "𝔅′ = [{}] (reference: [{{φ4}}])",
        b_prime_text.join(", ")
    );
    if b_prime_text != ["{φ4}"] {
        divergences.push(Divergence {
            topic: "loop-b-prime",
            reference: "𝔅′ = [{φ4}]".into(),
            computed: format!("𝔅′ = [{}]", b_prime_text.join(", ")),
        });
    }
    let op = make_loop_operator(logic.clone(), data);
    let op_audit = check_postulates(&op, &Postulate::ALL, opts);
    text.push_str(&op_audit.to_text());
    let verdict = representability(&op, opts)?;
    text.push_str(&report::representability_text(&logic, &verdict));
    text.push('\n');
    let ok = op_audit.passed() && matches!(verdict, Representability::NotRepresentable(_));
    Ok((
        json!({
            "ex_audit": ex_audit.to_json(),
            "loops": report::loops_json(&logic, &search, DEFAULT_LOOP_LIMIT),
            "b_prime": b_prime,
            "loop_operator_audit": op_audit.to_json(),
            "representability": report::representability_json(&logic, &verdict),
        }),
        ok,
    ))
}

fn propositional_section(opts: &AuditOptions, text: &mut String) -> Result<(Value, bool)> {
    let logic = Arc::new(propositional(2)?);
    let _ = writeln!(text, "== {} ==", logic.name());
    let search = find_critical_loops(&logic, DEFAULT_LOOP_LIMIT);
    text.push_str(&report::loops_text(&logic, &search));
    let verdict = representability(&make_full_meet(logic.clone()), opts)?;
    let _ = write!(
        text,
        "full meet: {}",
        report::representability_text(&logic, &verdict)
    );
    text.push('\n');
    let ok = search.total == 0 && matches!(verdict, Representability::Representable(_));
    Ok((
        json!({
            "loops": report::loops_json(&logic, &search, DEFAULT_LOOP_LIMIT),
            "full_meet_representability": report::representability_json(&logic, &verdict),
        }),
        ok,
    ))
}

pub fn run(seed: u64) -> Result<Output> {
    let opts = AuditOptions {
        seed,
        syntax_sensitive: false,
    };
    let mut text = String::new();
    let mut divergences = Vec::new();
    let paper = lex_paper_section(&opts, &mut text, &mut divergences)?;
    let (core, core_ok) = lex_core_section(&opts, &mut text, &mut divergences)?;
    let (prop, prop_ok) = propositional_section(&opts, &mut text)?;

    let _ = writeln!(text, "== divergences from the reference listings ==");
    for d in &divergences {
        let _ = writeln!(
            text,
            "  [{}] reference: {}\n  {:width$}  computed:  {}",
            d.topic,
            d.reference,
            "",
            d.computed,
            width = d.topic.len() + 1
        );
    }
    let ok = core_ok && prop_ok;
    Ok(Output {
        json: json!({
            "command": "demo",
            "seed": seed,
            "lex_paper": paper,
            "lex_core": core,
            "propositional2": prop,
            "divergences": divergences.iter().map(Divergence::json).collect::<Vec<_>>(),
            "ok": ok,
        }),
        text,
        ok,
    })
}
