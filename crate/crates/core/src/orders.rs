//! Binary relations over worlds and the minimality-based properties used by
//! the representation results.
//!
//! Minimality always uses the universal reading: `ω` is minimal in `S` iff
//! `ω ⪯ ω'` for every `ω' ∈ S`. For non-total relations this differs from
//! "nothing in `S` is strictly below `ω`".

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{ClassId, Logic, ModelSet, MAX_WORLDS};

/// A binary relation `⪯` over the worlds of a logic. Row `i` holds the set
/// of worlds `j` with `ωi ⪯ ωj`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WorldRelation {
    rows: Vec<ModelSet>,
}

impl WorldRelation {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        assert!(n <= MAX_WORLDS);
        let rows = (0..n)
            .map(|i| (0..n).filter(|&j| f(i, j)).collect())
            .collect();
        WorldRelation { rows }
    }

    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Self> {
        let n = matrix.len();
        if n > MAX_WORLDS {
            return Err(Error::TooManyWorlds(n));
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        Ok(Self::from_fn(n, |i, j| matrix[i][j]))
    }

    /// Every pair related.
    pub fn full(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| i == j)
    }

    /// Total preorder `ωi ⪯ ωj iff rank[i] ≤ rank[j]`.
    pub fn from_ranks(ranks: &[usize]) -> Self {
        Self::from_fn(ranks.len(), |i, j| ranks[i] <= ranks[j])
    }

    pub fn world_count(&self) -> usize {
        self.rows.len()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// `ωi ≺ ωj`: `ωi ⪯ ωj` and not `ωj ⪯ ωi`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && !self.le(j, i)
    }

    /// Worlds `j` with `ωi ⪯ ωj`.
    pub fn above(&self, i: usize) -> ModelSet {
        self.rows[i]
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let n = self.world_count();
        (0..n)
            .map(|i| (0..n).map(|j| self.le(i, j)).collect())
            .collect()
    }

    /// Edge-set inclusion.
    pub fn is_subset(&self, other: &WorldRelation) -> bool {
        self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(*b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.world_count();
        (0..n)
            .flat_map(move |i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.le(i, j))
    }

    pub(crate) fn check_dims(&self, logic: &Logic) -> Result<()> {
        if self.world_count() == logic.world_count() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: logic.world_count(),
                found: self.world_count(),
            })
        }
    }
}

impl fmt::Debug for WorldRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.world_count() {
            let row: String = (0..self.world_count())
                .map(|j| if self.le(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Counterexample to a structural or minimality property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyWitness {
    /// Neither `left ⪯ right` nor `right ⪯ left` (`left == right` for
    /// reflexivity).
    Unrelated { left: usize, right: usize },
    /// `a ⪯ b` and `b ⪯ c` but not `a ⪯ c`.
    Intransitive { a: usize, b: usize, c: usize },
    /// `lower ⪯ minimal`, `minimal` is minimal in the class, `lower` is not.
    NotRetractive {
        class: ClassId,
        lower: usize,
        minimal: usize,
    },
    /// A consistent class without minimal elements.
    EmptyMin { class: ClassId },
    /// The minimal elements of a class are not the models of any base.
    NotExpressible { class: ClassId, min: ModelSet },
    /// The union of two expressible sets is not expressible.
    NonExpressibleUnion {
        left: ClassId,
        right: ClassId,
        union: ModelSet,
    },
}

/// Outcome of a property check. The witness, when present, is the least
/// counterexample in the canonical enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub witness: Option<PropertyWitness>,
}

impl PropertyVerdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    fn from(witness: Option<PropertyWitness>) -> Self {
        PropertyVerdict { witness }
    }
}

/// `{ ω ∈ subset | ω ⪯ ω' for all ω' ∈ subset }`.
pub fn min_set(rel: &WorldRelation, subset: ModelSet) -> ModelSet {
    subset
        .iter()
        .filter(|&w| subset.is_subset(rel.above(w)))
        .collect()
}

pub fn is_total(rel: &WorldRelation) -> PropertyVerdict {
    let n = rel.world_count();
    PropertyVerdict::from(
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .find(|&(i, j)| !rel.le(i, j) && !rel.le(j, i))
            .map(|(left, right)| PropertyWitness::Unrelated { left, right }),
    )
}

pub fn is_reflexive(rel: &WorldRelation) -> PropertyVerdict {
    PropertyVerdict::from(
        (0..rel.world_count())
            .find(|&i| !rel.le(i, i))
            .map(|i| PropertyWitness::Unrelated { left: i, right: i }),
    )
}

pub fn is_transitive(rel: &WorldRelation) -> PropertyVerdict {
    let n = rel.world_count();
    for a in 0..n {
        for b in rel.above(a).iter() {
            let missing = rel.above(b).difference(rel.above(a));
            if let Some(c) = missing.iter().next() {
                return PropertyVerdict::from(Some(PropertyWitness::Intransitive { a, b, c }));
            }
        }
    }
    PropertyVerdict::from(None)
}

pub fn is_preorder(rel: &WorldRelation) -> PropertyVerdict {
    let reflexive = is_reflexive(rel);
    if reflexive.holds() {
        is_transitive(rel)
    } else {
        reflexive
    }
}

/// Anything `⪯`-below a minimal element of an expressible set, inside that
/// set, is itself minimal. Quantifies over semantic classes.
pub fn is_min_retractive(rel: &WorldRelation, logic: &Logic) -> Result<PropertyVerdict> {
    rel.check_dims(logic)?;
    for class in logic.class_ids() {
        let models = logic.class(class).models;
        let min = min_set(rel, models);
        for lower in models.difference(min).iter() {
            for minimal in min.iter() {
                if rel.le(lower, minimal) {
                    return Ok(PropertyVerdict::from(Some(
                        PropertyWitness::NotRetractive {
                            class,
                            lower,
                            minimal,
                        },
                    )));
                }
            }
        }
    }
    Ok(PropertyVerdict::from(None))
}

/// Every consistent expressible set has a minimal element.
pub fn is_min_complete(rel: &WorldRelation, logic: &Logic) -> Result<PropertyVerdict> {
    rel.check_dims(logic)?;
    Ok(PropertyVerdict::from(
        logic
            .class_ids()
            .find(|&c| {
                let models = logic.class(c).models;
                !models.is_empty() && min_set(rel, models).is_empty()
            })
            .map(|class| PropertyWitness::EmptyMin { class }),
    ))
}

/// Min-retractive and min-complete.
pub fn is_min_friendly(rel: &WorldRelation, logic: &Logic) -> Result<PropertyVerdict> {
    let retractive = is_min_retractive(rel, logic)?;
    if retractive.holds() {
        is_min_complete(rel, logic)
    } else {
        Ok(retractive)
    }
}

/// The minimal elements of every expressible set are expressible.
pub fn is_min_expressible(rel: &WorldRelation, logic: &Logic) -> Result<PropertyVerdict> {
    rel.check_dims(logic)?;
    Ok(PropertyVerdict::from(logic.class_ids().find_map(|class| {
        let min = min_set(rel, logic.class(class).models);
        (!logic.is_expressible(min)).then_some(PropertyWitness::NotExpressible { class, min })
    })))
}

/// Extends a (possibly partial) preorder to a total preorder by ranking each
/// world with the length of the longest strict chain below it.
///
/// The result contains the input and keeps every strict pair strict.
pub fn order_extend(rel: &WorldRelation) -> Result<WorldRelation> {
    if let Some(w) = is_reflexive(rel).witness {
        return Err(Error::Contract(format!(
            "order extension needs a reflexive relation: {w:?}"
        )));
    }
    if let Some(w) = is_transitive(rel).witness {
        return Err(Error::Contract(format!(
            "order extension needs a transitive relation: {w:?}"
        )));
    }
    Ok(WorldRelation::from_ranks(&chain_ranks(rel)))
}

/// Longest strict chain below each world. Requires `≺` to be acyclic, which
/// holds for any preorder.
pub fn chain_ranks(rel: &WorldRelation) -> Vec<usize> {
    let n = rel.world_count();
    let mut rank = vec![0usize; n];
    // Relaxation converges after at most n rounds on an acyclic graph.
    for _ in 0..n {
        let mut changed = false;
        for w in 0..n {
            for v in 0..n {
                if rel.lt(v, w) && rank[v] + 1 > rank[w] {
                    rank[w] = rank[v] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    rank
}
