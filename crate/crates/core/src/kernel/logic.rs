use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::kernel::model_set::{ModelSet, MAX_WORLDS};

/// A finite set of sentence indices of one logic.
///
/// Stored sorted and deduplicated, so equality is set equality and the
/// derived ordering compares sorted index sequences lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BeliefBase(Vec<u32>);

impl BeliefBase {
    pub fn empty() -> Self {
        BeliefBase(Vec::new())
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.binary_search(&(id as u32)).is_ok()
    }

    pub fn union(&self, other: &BeliefBase) -> BeliefBase {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        BeliefBase(out)
    }

    pub fn with(&self, id: usize) -> BeliefBase {
        self.union(&BeliefBase(vec![id as u32]))
    }
}

impl FromIterator<usize> for BeliefBase {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<u32> = iter.into_iter().map(|i| i as u32).collect();
        v.sort_unstable();
        v.dedup();
        BeliefBase(v)
    }
}

impl fmt::Debug for BeliefBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Index of a semantic class in the canonical class enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(pub usize);

/// One equivalence class of bases, identified by its model set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticClass {
    pub models: ModelSet,
    /// Smallest base with these models; ties go to the lexicographically
    /// least sorted index sequence.
    pub canonical: BeliefBase,
}

struct Semantics {
    classes: Vec<SemanticClass>,
    by_models: HashMap<ModelSet, ClassId>,
}

/// A finite monotonic logic given extensionally: worlds, sentences and the
/// model set of each sentence.
pub struct Logic {
    name: String,
    worlds: Vec<String>,
    sentences: Vec<String>,
    models: Vec<ModelSet>,
    world_index: HashMap<String, usize>,
    sentence_index: HashMap<String, usize>,
    semantics: OnceLock<Semantics>,
}

impl fmt::Debug for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Logic")
            .field("name", &self.name)
            .field("worlds", &self.worlds.len())
            .field("sentences", &self.sentences.len())
            .finish()
    }
}

fn transliterate(name: &str) -> String {
    name.replace('ψ', "psi")
        .replace('φ', "phi")
        .replace('ω', "w")
        .replace('Γ', "Gamma")
}

impl Logic {
    pub fn new(
        name: impl Into<String>,
        worlds: Vec<String>,
        sentences: Vec<(String, ModelSet)>,
    ) -> Result<Self> {
        if worlds.is_empty() {
            return Err(Error::NoWorlds);
        }
        if worlds.len() > MAX_WORLDS {
            return Err(Error::TooManyWorlds(worlds.len()));
        }
        let omega = ModelSet::full(worlds.len());
        let mut world_index = HashMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if world_index.insert(w.clone(), i).is_some() {
                return Err(Error::DuplicateName {
                    kind: "world",
                    name: w.clone(),
                });
            }
        }
        let mut sentence_index = HashMap::new();
        let mut names = Vec::with_capacity(sentences.len());
        let mut models = Vec::with_capacity(sentences.len());
        for (i, (s, m)) in sentences.into_iter().enumerate() {
            if !m.is_subset(omega) {
                return Err(Error::WorldOutOfRange(
                    m.difference(omega).iter().next().unwrap_or(0),
                ));
            }
            if sentence_index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateName {
                    kind: "sentence",
                    name: s,
                });
            }
            names.push(s);
            models.push(m);
        }
        Ok(Logic {
            name: name.into(),
            worlds,
            sentences: names,
            models,
            world_index,
            sentence_index,
            semantics: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn sentence_models(&self, id: usize) -> ModelSet {
        self.models[id]
    }

    /// Ω, the set of all worlds.
    pub fn omega(&self) -> ModelSet {
        ModelSet::full(self.worlds.len())
    }

    /// Looks a world up by name. Greek names also match their ASCII
    /// spelling (`ω3` and `w3`).
    pub fn world_index(&self, name: &str) -> Result<usize> {
        lookup(&self.world_index, &self.worlds, name)
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn sentence_index(&self, name: &str) -> Result<usize> {
        lookup(&self.sentence_index, &self.sentences, name)
            .ok_or_else(|| Error::UnknownSentence(name.to_string()))
    }

    pub fn base<S: AsRef<str>>(&self, names: &[S]) -> Result<BeliefBase> {
        names
            .iter()
            .map(|n| self.sentence_index(n.as_ref()))
            .collect()
    }

    pub fn base_from_ids(&self, ids: impl IntoIterator<Item = usize>) -> Result<BeliefBase> {
        let base: BeliefBase = ids.into_iter().collect();
        let bad = base.ids().find(|&i| i >= self.sentences.len());
        match bad {
            Some(bad) => Err(Error::SentenceOutOfRange(bad)),
            None => Ok(base),
        }
    }

    pub fn models_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ModelSet> {
        names.iter().map(|n| self.world_index(n.as_ref())).collect()
    }

    /// Mod(K): the intersection of the sentences' model sets, Ω for ∅.
    pub fn models_of(&self, base: &BeliefBase) -> Result<ModelSet> {
        match base.ids().find(|&i| i >= self.sentences.len()) {
            Some(bad) => Err(Error::SentenceOutOfRange(bad)),
            None => Ok(self.mods(base)),
        }
    }

    /// Unchecked variant of [`Logic::models_of`] for bases already known to
    /// belong to this logic.
    pub fn mods(&self, base: &BeliefBase) -> ModelSet {
        base.ids()
            .fold(self.omega(), |acc, i| acc.intersection(self.models[i]))
    }

    pub fn entails(&self, k1: &BeliefBase, k2: &BeliefBase) -> Result<bool> {
        Ok(self.models_of(k1)?.is_subset(self.models_of(k2)?))
    }

    pub fn equivalent(&self, k1: &BeliefBase, k2: &BeliefBase) -> Result<bool> {
        Ok(self.models_of(k1)? == self.models_of(k2)?)
    }

    pub fn is_consistent(&self, base: &BeliefBase) -> Result<bool> {
        Ok(!self.models_of(base)?.is_empty())
    }

    fn semantics(&self) -> &Semantics {
        self.semantics.get_or_init(|| self.compute_semantics())
    }

    /// Every model set of some base, in canonical class order.
    pub fn expressible_closure(&self) -> Vec<ModelSet> {
        self.classes().iter().map(|c| c.models).collect()
    }

    pub fn is_expressible(&self, models: ModelSet) -> bool {
        self.semantics().by_models.contains_key(&models)
    }

    pub fn classes(&self) -> &[SemanticClass] {
        &self.semantics().classes
    }

    pub fn class_count(&self) -> usize {
        self.classes().len()
    }

    pub fn class(&self, id: ClassId) -> &SemanticClass {
        &self.classes()[id.0]
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> {
        (0..self.class_count()).map(ClassId)
    }

    pub fn class_of_models(&self, models: ModelSet) -> Option<ClassId> {
        self.semantics().by_models.get(&models).copied()
    }

    /// Class of a base. Panics if the base is not over this logic.
    pub fn class_of(&self, base: &BeliefBase) -> ClassId {
        self.class_of_models(self.mods(base))
            .expect("model set of a base is always expressible")
    }

    pub fn canonical_base(&self, models: ModelSet) -> Option<&BeliefBase> {
        self.class_of_models(models)
            .map(|id| &self.class(id).canonical)
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn sentence_name(&self, id: usize) -> &str {
        &self.sentences[id]
    }

    pub fn render_models(&self, models: ModelSet) -> Vec<String> {
        models.iter().map(|w| self.worlds[w].clone()).collect()
    }

    pub fn render_base(&self, base: &BeliefBase) -> Vec<String> {
        base.ids().map(|i| self.sentences[i].clone()).collect()
    }

    /// `{ψ0, φ1}` style rendering for diagnostics.
    pub fn show_base(&self, base: &BeliefBase) -> String {
        format!("{{{}}}", self.render_base(base).join(", "))
    }

    pub fn show_models(&self, models: ModelSet) -> String {
        format!("{{{}}}", self.render_models(models).join(", "))
    }

    fn compute_semantics(&self) -> Semantics {
        let omega = self.omega();
        // Distinct sentence model sets, largest first: once the closure
        // contains a set, intersecting with it adds nothing new.
        let mut distinct: Vec<ModelSet> = {
            let mut seen = HashSet::new();
            self.models
                .iter()
                .copied()
                .filter(|m| seen.insert(*m))
                .collect()
        };
        distinct.sort_by_key(|m| std::cmp::Reverse(m.len()));

        let mut closure: HashSet<ModelSet> = HashSet::from([omega]);
        let mut members = vec![omega];
        for m in distinct {
            if closure.contains(&m) {
                continue;
            }
            let fresh: Vec<ModelSet> = members
                .iter()
                .map(|c| c.intersection(m))
                .filter(|x| !closure.contains(x))
                .collect();
            for x in fresh {
                if closure.insert(x) {
                    members.push(x);
                }
            }
        }
        members.sort();

        // Lowest sentence index per distinct model set.
        let mut first_sentence: HashMap<ModelSet, usize> = HashMap::new();
        for (i, m) in self.models.iter().enumerate() {
            first_sentence.entry(*m).or_insert(i);
        }
        let mut reps: Vec<(usize, ModelSet)> = first_sentence
            .iter()
            .filter(|(m, _)| **m != omega)
            .map(|(m, i)| (*i, *m))
            .collect();
        reps.sort_unstable();

        let classes: Vec<SemanticClass> = members
            .iter()
            .map(|&models| SemanticClass {
                models,
                canonical: smallest_base(models, omega, &first_sentence, &reps),
            })
            .collect();
        let by_models = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.models, ClassId(i)))
            .collect();
        Semantics { classes, by_models }
    }
}

fn lookup(index: &HashMap<String, usize>, names: &[String], name: &str) -> Option<usize> {
    if let Some(&i) = index.get(name) {
        return Some(i);
    }
    let wanted = transliterate(name);
    let mut hits = names
        .iter()
        .enumerate()
        .filter(|(_, n)| transliterate(n) == wanted);
    match (hits.next(), hits.next()) {
        (Some((i, _)), None) => Some(i),
        _ => None,
    }
}

/// Minimum-cardinality base with the given models. `reps` holds, for each
/// distinct non-tautological model set, its lowest sentence index, sorted by
/// index; a minimum base never uses a tautology or two sentences with the
/// same models, and the lowest index is the lexicographically least choice.
fn smallest_base(
    target: ModelSet,
    omega: ModelSet,
    first_sentence: &HashMap<ModelSet, usize>,
    reps: &[(usize, ModelSet)],
) -> BeliefBase {
    if target == omega {
        return BeliefBase::empty();
    }
    if let Some(&i) = first_sentence.get(&target) {
        return std::iter::once(i).collect();
    }
    let candidates: Vec<(usize, ModelSet)> = reps
        .iter()
        .copied()
        .filter(|(_, m)| target.is_subset(*m))
        .collect();
    let mut chosen = Vec::new();
    for size in 2..=candidates.len() {
        if search(&candidates, 0, size, omega, target, &mut chosen) {
            return chosen.into_iter().collect();
        }
    }
    unreachable!("target {target:?} is expressible")
}

fn search(
    candidates: &[(usize, ModelSet)],
    start: usize,
    remaining: usize,
    current: ModelSet,
    target: ModelSet,
    chosen: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        return current == target;
    }
    if candidates.len() - start < remaining {
        return false;
    }
    for idx in start..=candidates.len() - remaining {
        let (sentence, models) = candidates[idx];
        let next = current.intersection(models);
        if next == current {
            continue;
        }
        chosen.push(sentence);
        if search(candidates, idx + 1, remaining - 1, next, target, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
