//! `revlab`: audit, extract and classify base-change operators over finite
//! logics.
//!
//! Exit codes: 0 when the command succeeded and its checks passed, 1 when a
//! check failed, 2 on input errors.

mod demo;
mod load;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use revlab::audit::{check_compatible, check_faithful, check_postulates, AuditOptions, Postulate};
use revlab::extract::{detached_pairs, extract_relation, preorder_lift, representability};
use revlab::loops::{find_critical_loops, DEFAULT_LOOP_LIMIT};
use revlab::orders::{is_min_expressible, is_min_friendly, is_total, is_transitive};
use revlab::Error;
use serde_json::json;

use report::Output;

#[derive(Parser)]
#[command(
    name = "revlab",
    version,
    about = "Belief base revision verification lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `builtin:NAME` (lex_paper, lex_core, propositionalN, hornN) or a logic file
    #[arg(long, global = true)]
    logic: Option<String>,
    /// `builtin:full-meet|ex|loop` or an operator file
    #[arg(long, global = true)]
    operator: Option<String>,
    /// Assignment file; induces the operator when --operator is absent
    #[arg(long, global = true)]
    assignment: Option<String>,
    /// Comma-separated sentence names for K; empty for the empty base
    #[arg(long, global = true)]
    base: Option<String>,
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks and generated operators
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 256)]
    max_classes: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_LOOP_LIMIT)]
    loop_limit: usize,
    /// Drop (G4) and (F3): bases are not identified up to equivalence
    #[arg(long, global = true)]
    syntax_sensitive: bool,
    /// Comma-separated subset of G1..G6 to audit
    #[arg(long, global = true, value_delimiter = ',')]
    postulates: Vec<Postulate>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Worlds, semantic classes, closure size and disjunctivity
    Info,
    /// Postulates, plus faithfulness and compatibility when an assignment is given
    Audit,
    /// The relation an operator reveals for K
    Extract,
    /// Total preorder lift of the extracted relation for K
    Lift,
    /// Critical loop search
    Loops,
    /// Total preorder representability
    Represent,
    /// Fixture walkthrough with computed-vs-reference notes
    Demo,
}

impl Cli {
    fn options(&self) -> AuditOptions {
        AuditOptions {
            seed: self.seed,
            syntax_sensitive: self.syntax_sensitive,
        }
    }

    fn logic_source(&self) -> Result<&str> {
        match &self.logic {
            Some(l) => Ok(l),
            None => bail!("--logic is required"),
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    if let Command::Demo = cli.command {
        return demo::run(cli.seed);
    }
    let logic = load::logic(cli.logic_source()?, cli.max_classes)?;
    let opts = cli.options();
    let assignment = match &cli.assignment {
        Some(src) => Some(load::assignment(src, &logic)?),
        None => None,
    };
    let operator =
        || load::operator_or_induced(cli.operator.as_deref(), assignment.as_ref(), &logic);
    let k = || match &cli.base {
        Some(spec) => load::base(spec, &logic),
        None => bail!("--base is required"),
    };

    Ok(match cli.command {
        Command::Demo => unreachable!(),
        Command::Info => report::info(&logic),
        Command::Audit => {
            let op = operator()?;
            let which: &[Postulate] = if cli.postulates.is_empty() {
                &Postulate::ALL
            } else {
                &cli.postulates
            };
            let mut reports = vec![check_postulates(&op, which, &opts)];
            if let Some(a) = &assignment {
                reports.push(check_faithful(a, &opts));
                reports.push(check_compatible(&op, a));
            }
            let ok = reports.iter().all(|r| r.passed());
            Output {
                json: json!({
                    "command": "audit",
                    "logic": logic.name(),
                    "operator": op.name(),
                    "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    "passed": ok,
                }),
                text: report::audit_text(&reports),
                ok,
            }
        }
        Command::Extract => {
            let op = operator()?;
            let k = k()?;
            let rel = extract_relation(&op, &k);
            let [strict, equivalent, incomparable] = report::pairs(&rel);
            let detached = detached_pairs(&op, &k);
            let properties = json!({
                "total": report::verdict(&logic, &is_total(&rel)),
                "transitive": report::verdict(&logic, &is_transitive(&rel)),
                "min_friendly": report::verdict(&logic, &is_min_friendly(&rel, &logic)?),
                "min_expressible": report::verdict(&logic, &is_min_expressible(&rel, &logic)?),
            });
            Output {
                json: json!({
                    "command": "extract",
                    "logic": logic.name(),
                    "operator": op.name(),
                    "K": report::base(&logic, &k),
                    "worlds": logic.worlds(),
                    "matrix": report::matrix(&rel),
                    "strict": report::pair_names(&logic, &strict),
                    "equivalent": report::pair_names(&logic, &equivalent),
                    "incomparable": report::pair_names(&logic, &incomparable),
                    "detached_pairs": report::pair_names(&logic, &detached),
                    "properties": properties,
                }),
                text: format!(
                    "{} for K = {} on {}\n{}",
                    op.name(),
                    logic.show_base(&k),
                    logic.name(),
                    report::relation_text(&logic, &rel)
                ),
                ok: true,
            }
        }
        Command::Lift => {
            let op = operator()?;
            let k = k()?;
            let head = format!("lift of {} for K = {}", op.name(), logic.show_base(&k));
            let (json, text, ok) = match preorder_lift(&op, &k) {
                Ok(rel) => (
                    json!({"ok": true, "matrix": report::matrix(&rel), "failure": null}),
                    format!("{head}\n{}", report::relation_text(&logic, &rel)),
                    true,
                ),
                Err(f) => (
                    json!({"ok": false, "matrix": null, "failure": report::lift_failure_json(&logic, &f)}),
                    format!("{head}: {}\n", report::lift_failure_text(&logic, &f)),
                    false,
                ),
            };
            let mut json = json;
            json["command"] = json!("lift");
            json["logic"] = json!(logic.name());
            json["operator"] = json!(op.name());
            json["K"] = report::base(&logic, &k);
            json["worlds"] = json!(logic.worlds());
            Output { json, text, ok }
        }
        Command::Loops => {
            let search = find_critical_loops(&logic, cli.loop_limit);
            let mut json = report::loops_json(&logic, &search, cli.loop_limit);
            json["command"] = json!("loops");
            json["logic"] = json!(logic.name());
            Output {
                json,
                text: report::loops_text(&logic, &search),
                ok: true,
            }
        }
        Command::Represent => {
            let op = operator()?;
            let (mut json, text, ok) = match representability(&op, &opts) {
                Ok(r) => (
                    report::representability_json(&logic, &r),
                    report::representability_text(&logic, &r),
                    matches!(r, revlab::extract::Representability::Representable(_)),
                ),
                Err(Error::PostulateFailure(audit)) => (
                    json!({"verdict": "postulate-failure", "audit": audit.to_json()}),
                    format!(
                        "postulates fail; representability undefined\n{}",
                        audit.to_text()
                    ),
                    false,
                ),
                Err(e) => return Err(e.into()),
            };
            json["command"] = json!("represent");
            json["logic"] = json!(logic.name());
            json["operator"] = json!(op.name());
            Output { json, text, ok }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n"
            } else {
                out.text
            };
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = io::stdout().lock().write_all(body.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
