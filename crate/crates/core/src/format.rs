//! JSON file formats for logics, relations, operators and assignments.
//!
//! Unknown keys are rejected; errors carry the file path and the position
//! reported by the parser.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::audit::Assignment;
use crate::change::{
    make_builtin_ex, make_full_meet, make_table, ChangeOperator, TableDefault, TableEntry,
};
use crate::error::{Error, Result};
use crate::kernel::{BeliefBase, Logic, ModelSet};
use crate::orders::WorldRelation;
use crate::random::drastic;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogicFile {
    name: String,
    worlds: Vec<String>,
    sentences: Vec<SentenceEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SentenceEntry {
    name: String,
    models: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationFile {
    logic: String,
    matrix: Vec<Vec<u8>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum OperatorFile {
    FullMeet,
    Builtin {
        name: String,
    },
    Table {
        default: DefaultMode,
        entries: Vec<TableEntryFile>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum DefaultMode {
    FullMeet,
    Error,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntryFile {
    base: Vec<String>,
    input: Vec<String>,
    result: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentFile {
    logic: String,
    #[serde(default = "default_mode")]
    default: DefaultMode,
    relations: Vec<AssignmentEntry>,
}

fn default_mode() -> DefaultMode {
    DefaultMode::Error
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentEntry {
    base: Vec<String>,
    matrix: Vec<Vec<u8>>,
}

fn format_error(path: &str, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_string(),
        message: message.into(),
    }
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str, path: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| format_error(path, e.to_string()))
}

/// Re-labels an error from a nested value with a JSON-pointer-like location.
fn at(path: &str, location: String) -> impl FnOnce(Error) -> Error + '_ {
    move |e| format_error(path, format!("{location}: {e}"))
}

pub fn parse_logic(text: &str, path: &str) -> Result<Logic> {
    let file: LogicFile = parse(text, path)?;
    let index = |name: &str| file.worlds.iter().position(|w| w == name);
    let mut sentences = Vec::with_capacity(file.sentences.len());
    for (i, s) in file.sentences.iter().enumerate() {
        let mut models = ModelSet::EMPTY;
        for w in &s.models {
            let idx = index(w).ok_or_else(|| {
                format_error(path, format!("/sentences/{i}/models: unknown world `{w}`"))
            })?;
            models = models.with(idx);
        }
        sentences.push((s.name.clone(), models));
    }
    Logic::new(file.name, file.worlds, sentences).map_err(|e| format_error(path, e.to_string()))
}

pub fn logic_to_json(logic: &Logic) -> Value {
    let file = LogicFile {
        name: logic.name().to_string(),
        worlds: logic.worlds().to_vec(),
        sentences: (0..logic.sentence_count())
            .map(|s| SentenceEntry {
                name: logic.sentence_name(s).to_string(),
                models: logic.render_models(logic.sentence_models(s)),
            })
            .collect(),
    };
    serde_json::to_value(file).expect("plain data")
}

fn matrix(raw: &[Vec<u8>], logic: &Logic, path: &str, location: &str) -> Result<WorldRelation> {
    let mut bools = Vec::with_capacity(raw.len());
    for (i, row) in raw.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, v) in row.iter().enumerate() {
            match v {
                0 => out.push(false),
                1 => out.push(true),
                _ => {
                    return Err(format_error(
                        path,
                        format!("{location}/{i}/{j}: expected 0 or 1, found {v}"),
                    ))
                }
            }
        }
        bools.push(out);
    }
    let rel = WorldRelation::from_matrix(&bools).map_err(at(path, location.to_string()))?;
    rel.check_dims(logic)
        .map_err(at(path, location.to_string()))?;
    Ok(rel)
}

fn check_logic_name(file_logic: &str, logic: &Logic, path: &str) -> Result<()> {
    if file_logic == logic.name() {
        Ok(())
    } else {
        Err(format_error(
            path,
            format!(
                "/logic: file is for `{file_logic}` but the loaded logic is `{}`",
                logic.name()
            ),
        ))
    }
}

pub fn parse_relation(text: &str, path: &str, logic: &Logic) -> Result<WorldRelation> {
    let file: RelationFile = parse(text, path)?;
    check_logic_name(&file.logic, logic, path)?;
    matrix(&file.matrix, logic, path, "/matrix")
}

fn matrix_json(rel: &WorldRelation) -> Value {
    json!(rel
        .matrix()
        .iter()
        .map(|row| row.iter().map(|b| u8::from(*b)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn relation_to_json(logic: &Logic, rel: &WorldRelation) -> Value {
    json!({"logic": logic.name(), "matrix": matrix_json(rel)})
}

fn base(logic: &Logic, names: &[String], path: &str, location: String) -> Result<BeliefBase> {
    logic.base(names).map_err(at(path, location))
}

pub fn parse_operator(text: &str, path: &str, logic: Arc<Logic>) -> Result<ChangeOperator> {
    match parse::<OperatorFile>(text, path)? {
        OperatorFile::FullMeet => Ok(make_full_meet(logic)),
        OperatorFile::Builtin { name } => match name.as_str() {
            "ex" => make_builtin_ex(logic).map_err(at(path, "/name".into())),
            "full-meet" => Ok(make_full_meet(logic)),
            other => Err(format_error(
                path,
                format!("/name: unknown builtin operator `{other}`"),
            )),
        },
        OperatorFile::Table { default, entries } => {
            let mut parsed = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                parsed.push(TableEntry {
                    base: base(&logic, &e.base, path, format!("/entries/{i}/base"))?,
                    input: base(&logic, &e.input, path, format!("/entries/{i}/input"))?,
                    result: base(&logic, &e.result, path, format!("/entries/{i}/result"))?,
                });
            }
            let default = match default {
                DefaultMode::FullMeet => TableDefault::FullMeet,
                DefaultMode::Error => TableDefault::Error,
            };
            make_table(logic, default, parsed).map_err(|e| format_error(path, e.to_string()))
        }
    }
}

/// Relations keyed by bases. The first entry for a class sets the class
/// relation; further entries for equivalent bases become syntactic
/// overrides. With `"default": "full-meet"` missing classes get the
/// relation placing `Mod(K)` below everything else.
pub fn parse_assignment(text: &str, path: &str, logic: Arc<Logic>) -> Result<Assignment> {
    let file: AssignmentFile = parse(text, path)?;
    check_logic_name(&file.logic, &logic, path)?;
    let mut relations: Vec<Option<WorldRelation>> = vec![None; logic.class_count()];
    let mut overrides = Vec::new();
    for (i, e) in file.relations.iter().enumerate() {
        let k = base(&logic, &e.base, path, format!("/relations/{i}/base"))?;
        let rel = matrix(&e.matrix, &logic, path, &format!("/relations/{i}/matrix"))?;
        let slot = &mut relations[logic.class_of(&k).0];
        if slot.is_none() {
            *slot = Some(rel);
        } else {
            overrides.push((i, k, rel));
        }
    }
    let mut complete = Vec::with_capacity(relations.len());
    for (c, rel) in logic.class_ids().zip(relations) {
        match (rel, file.default) {
            (Some(rel), _) => complete.push(rel),
            (None, DefaultMode::FullMeet) => {
                complete.push(drastic(logic.class(c).models, logic.world_count()))
            }
            (None, DefaultMode::Error) => {
                return Err(format_error(
                    path,
                    format!(
                        "/relations: no relation for the class of {}",
                        logic.show_base(&logic.class(c).canonical)
                    ),
                ))
            }
        }
    }
    let mut a =
        Assignment::new(logic.clone(), complete).map_err(|e| format_error(path, e.to_string()))?;
    for (i, k, rel) in overrides {
        a = a
            .with_override(k, rel)
            .map_err(at(path, format!("/relations/{i}")))?;
    }
    Ok(a)
}

pub fn assignment_to_json(a: &Assignment) -> Value {
    let logic = a.logic();
    let relations: Vec<Value> = a
        .keyed()
        .map(|(k, rel)| json!({"base": logic.render_base(k), "matrix": matrix_json(rel)}))
        .collect();
    json!({"logic": logic.name(), "default": "error", "relations": relations})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{lex_core, lex_paper};

    #[test]
    fn logic_round_trip() {
        let l = lex_paper();
        let text = logic_to_json(&l).to_string();
        let back = parse_logic(&text, "mem").unwrap();
        assert_eq!(back.worlds(), l.worlds());
        assert_eq!(back.sentences(), l.sentences());
        for s in 0..l.sentence_count() {
            assert_eq!(back.sentence_models(s), l.sentence_models(s));
        }
    }

    #[test]
    fn logic_errors_carry_positions() {
        let err = parse_logic(
            r#"{"name": "x", "worlds": ["a"], "sentences": [], "extra": 1}"#,
            "f.json",
        )
        .unwrap_err()
        .to_string();
        assert!(err.starts_with("f.json: unknown field `extra`"), "{err}");
        assert!(err.contains("line 1"), "{err}");
        let err = parse_logic(
            r#"{"name": "x", "worlds": ["a"], "sentences": [{"name": "s", "models": ["b"]}]}"#,
            "f.json",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("/sentences/0/models"), "{err}");
        let err = parse_logic(
            r#"{"name": "x", "worlds": ["a", "a"], "sentences": []}"#,
            "f.json",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn relation_round_trip_and_errors() {
        let l = lex_core();
        let rel = WorldRelation::from_ranks(&[0, 1, 1, 2, 3, 3]);
        let text = relation_to_json(&l, &rel).to_string();
        assert_eq!(parse_relation(&text, "r", &l).unwrap(), rel);
        assert!(parse_relation(r#"{"logic": "lex_core", "matrix": [[2]]}"#, "r", &l).is_err());
        assert!(parse_relation(r#"{"logic": "other", "matrix": []}"#, "r", &l).is_err());
        let err = parse_relation(r#"{"logic": "lex_core", "matrix": [[1]]}"#, "r", &l)
            .unwrap_err()
            .to_string();
        assert!(err.contains("/matrix"), "{err}");
    }

    #[test]
    fn operator_files() {
        let l = Arc::new(lex_paper());
        let fm = parse_operator(r#"{"type": "full-meet"}"#, "o", l.clone()).unwrap();
        assert_eq!(fm.name(), "full-meet");
        let ex = parse_operator(r#"{"type": "builtin", "name": "ex"}"#, "o", l.clone()).unwrap();
        assert_eq!(ex.name(), "ex");
        let table = parse_operator(
            r#"{"type": "table", "default": "full-meet",
                "entries": [{"base": ["ψ0"], "input": ["φ4"], "result": ["ψ5"]}]}"#,
            "o",
            l.clone(),
        )
        .unwrap();
        let k = l.base(&["ψ0"]).unwrap();
        assert_eq!(
            table.apply(&k, &l.base(&["φ4"]).unwrap()),
            l.base(&["ψ5"]).unwrap()
        );
        let err = parse_operator(
            r#"{"type": "table", "default": "error", "entries": []}"#,
            "o",
            l.clone(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("no entry"), "{err}");
        assert!(parse_operator(r#"{"type": "magic"}"#, "o", l).is_err());
    }

    #[test]
    fn assignment_files() {
        let l = Arc::new(lex_core());
        let a = crate::random::random_assignment(l.clone(), &mut {
            use rand::SeedableRng;
            rand_chacha::ChaCha8Rng::seed_from_u64(1)
        });
        let text = assignment_to_json(&a).to_string();
        let back = parse_assignment(&text, "a", l.clone()).unwrap();
        assert_eq!(back.relations(), a.relations());

        let partial = r#"{"logic": "lex_core", "default": "full-meet", "relations": []}"#;
        let filled = parse_assignment(partial, "a", l.clone()).unwrap();
        assert!(crate::audit::check_faithful(&filled, &Default::default()).passed());
        let strict = r#"{"logic": "lex_core", "relations": []}"#;
        assert!(parse_assignment(strict, "a", l.clone()).is_err());

        let ones = vec![vec![1u8; 6]; 6];
        let text = json!({
            "logic": "lex_core",
            "default": "full-meet",
            "relations": [
                {"base": ["ψ1"], "matrix": ones},
                {"base": ["ψ1", "φ1"], "matrix": ones},
            ],
        })
        .to_string();
        let syn = parse_assignment(&text, "a", l).unwrap();
        assert!(syn.is_syntactic());
    }
}
