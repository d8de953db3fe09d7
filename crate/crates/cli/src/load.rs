//! Resolving `--logic`, `--operator`, `--assignment` and `--base` into
//! library values. Every failure here is an input error.

use std::fs;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use revlab::audit::Assignment;
use revlab::change::{
    make_builtin_ex, make_full_meet, make_induced, make_loop_operator, ChangeOperator,
};
use revlab::format::{parse_assignment, parse_logic, parse_operator};
use revlab::kernel::{builtin_logic, BeliefBase, Logic};
use revlab::loops::find_critical_loops;

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
}

pub fn logic(source: &str, max_classes: usize) -> Result<Arc<Logic>> {
    let logic = match source.strip_prefix("builtin:") {
        Some(name) => builtin_logic(name)?,
        None => parse_logic(&read(source)?, source)?,
    };
    if logic.class_count() > max_classes {
        bail!(
            "{} has {} semantic classes, above --max-classes {max_classes}",
            logic.name(),
            logic.class_count()
        );
    }
    Ok(Arc::new(logic))
}

pub fn operator(source: &str, logic: &Arc<Logic>) -> Result<ChangeOperator> {
    match source.strip_prefix("builtin:") {
        Some("full-meet") => Ok(make_full_meet(logic.clone())),
        Some("ex") => Ok(make_builtin_ex(logic.clone())?),
        Some("loop") => {
            let search = find_critical_loops(logic, 1);
            let found = search
                .loops
                .first()
                .ok_or_else(|| anyhow!("{} has no critical loop", logic.name()))?;
            Ok(make_loop_operator(logic.clone(), found.loop_data(logic)?))
        }
        Some(other) => bail!("unknown builtin operator `{other}` (full-meet, ex, loop)"),
        None => Ok(parse_operator(&read(source)?, source, logic.clone())?),
    }
}

pub fn assignment(source: &str, logic: &Arc<Logic>) -> Result<Assignment> {
    Ok(parse_assignment(&read(source)?, source, logic.clone())?)
}

/// The explicit operator, or the one induced by the assignment.
pub fn operator_or_induced(
    operator_source: Option<&str>,
    assignment: Option<&Assignment>,
    logic: &Arc<Logic>,
) -> Result<ChangeOperator> {
    match (operator_source, assignment) {
        (Some(src), _) => operator(src, logic),
        (None, Some(a)) => Ok(make_induced(a.clone())?),
        (None, None) => bail!("--operator or --assignment is required"),
    }
}

/// Comma-separated sentence names; the empty string is the empty base.
pub fn base(spec: &str, logic: &Logic) -> Result<BeliefBase> {
    let names: Vec<&str> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    Ok(logic.base(&names)?)
}
