//! Built-in fixture logics.
//!
//! * `lex_paper`: six worlds `ω0..ω5`, atoms `ψ0..ψ5` with `Mod(ψi) = {ωi}`,
//!   and `φ0..φ4` covering `{ω0..ω3}`, `{ω1,ω2}`, `{ω2,ω3}`, `{ω3,ω1}`,
//!   `{ω1..ω5}`.
//! * `lex_core`: the same logic without `φ0`, so that `{ω1,ω2,ω3}` is no
//!   longer expressible.
//! * `propositional(n)`: truth assignments over `n ≤ 4` atoms, one sentence
//!   `s<mask>` per subset of worlds.
//! * `horn(n)`: truth assignments over `n ≤ 3` atoms, one sentence per
//!   non-empty Horn clause.
//!
//! Worlds of the last two are named `w` followed by one digit per atom
//! (`w10` makes `a` true and `b` false); world `i` sets atom `j` iff bit `j`
//! of `i` is set.

use crate::error::{Error, Result};
use crate::kernel::logic::Logic;
use crate::kernel::model_set::ModelSet;

pub const MAX_PROPOSITIONAL_ATOMS: usize = 4;
pub const MAX_HORN_ATOMS: usize = 3;

const ATOMS: [char; 4] = ['a', 'b', 'c', 'd'];

/// Resolves a builtin by name: `lex_paper`, `lex_core`, `propositional(n)`
/// (or `propositionalN`) and `horn(n)` (or `hornN`).
pub fn builtin_logic(name: &str) -> Result<Logic> {
    match name {
        "lex_paper" => return Ok(lex_paper()),
        "lex_core" => return Ok(lex_core()),
        _ => {}
    }
    let parse = |prefix: &str| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        let digits = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(rest);
        digits.parse().ok()
    };
    if let Some(n) = parse("propositional") {
        return propositional(n);
    }
    if let Some(n) = parse("horn") {
        return horn(n);
    }
    Err(Error::UnknownBuiltin(name.to_string()))
}

pub fn lex_paper() -> Logic {
    lex(true)
}

pub fn lex_core() -> Logic {
    lex(false)
}

fn lex(with_phi0: bool) -> Logic {
    let set = |ws: &[usize]| ws.iter().copied().collect::<ModelSet>();
    let worlds = (0..6).map(|i| format!("ω{i}")).collect();
    let mut sentences: Vec<(String, ModelSet)> = (0..6)
        .map(|i| (format!("ψ{i}"), ModelSet::singleton(i)))
        .collect();
    if with_phi0 {
        sentences.push(("φ0".into(), set(&[0, 1, 2, 3])));
    }
    sentences.push(("φ1".into(), set(&[1, 2])));
    sentences.push(("φ2".into(), set(&[2, 3])));
    sentences.push(("φ3".into(), set(&[3, 1])));
    sentences.push(("φ4".into(), set(&[1, 2, 3, 4, 5])));
    let name = if with_phi0 { "lex_paper" } else { "lex_core" };
    Logic::new(name, worlds, sentences).expect("fixture is well formed")
}

fn assignment_worlds(n: usize) -> Vec<String> {
    (0..1usize << n)
        .map(|w| {
            let digits: String = (0..n)
                .map(|j| if w >> j & 1 == 1 { '1' } else { '0' })
                .collect();
            format!("w{digits}")
        })
        .collect()
}

pub fn propositional(n: usize) -> Result<Logic> {
    if n > MAX_PROPOSITIONAL_ATOMS {
        return Err(Error::CapExceeded {
            what: format!("propositional({n})"),
            cap: MAX_PROPOSITIONAL_ATOMS,
        });
    }
    let worlds = assignment_worlds(n);
    let count = worlds.len();
    let sentences = (0..1u64 << count)
        .map(|mask| (format!("s{mask}"), ModelSet::from_bits(mask)))
        .collect();
    Logic::new(format!("propositional({n})"), worlds, sentences)
}

pub fn horn(n: usize) -> Result<Logic> {
    if n > MAX_HORN_ATOMS {
        return Err(Error::CapExceeded {
            what: format!("horn({n})"),
            cap: MAX_HORN_ATOMS,
        });
    }
    let worlds = assignment_worlds(n);
    let mut sentences = Vec::new();
    let heads = std::iter::once(None).chain((0..n).map(Some));
    for head in heads {
        for negs in 0..1usize << n {
            if head.is_some_and(|h| negs >> h & 1 == 1) || (head.is_none() && negs == 0) {
                continue;
            }
            let mut literals: Vec<String> = (0..n)
                .filter(|j| negs >> j & 1 == 1)
                .map(|j| format!("~{}", ATOMS[j]))
                .collect();
            if let Some(h) = head {
                literals.push(ATOMS[h].to_string());
            }
            let models = (0..1usize << n)
                .filter(|w| {
                    head.is_some_and(|h| w >> h & 1 == 1)
                        || (0..n).any(|j| negs >> j & 1 == 1 && w >> j & 1 == 0)
                })
                .collect();
            sentences.push((literals.join("|"), models));
        }
    }
    Logic::new(format!("horn({n})"), worlds, sentences)
}
