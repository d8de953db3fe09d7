//! Brute-force reference implementation over raw bases.
//!
//! Shares no code with the library beyond the fixture data: bases are
//! sentence bitmasks, model sets are `BTreeSet<usize>`, and every quantifier
//! ranges over all 2^|sentences| bases unless stated otherwise.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub type Worlds = BTreeSet<usize>;

#[derive(Clone, Debug)]
pub struct RawLogic {
    pub worlds: usize,
    pub names: Vec<String>,
    pub models: Vec<Worlds>,
    /// Mod of every raw base, for small logics.
    cache: Vec<Worlds>,
}

impl RawLogic {
    fn new(worlds: usize, names: Vec<String>, models: Vec<Worlds>) -> Self {
        let mut l = RawLogic {
            worlds,
            names,
            models,
            cache: Vec::new(),
        };
        if l.names.len() <= 12 {
            l.cache = (0..l.base_count()).map(|b| l.compute_mods(b)).collect();
        }
        l
    }

    pub fn lex(with_phi0: bool) -> Self {
        let mut names = Vec::new();
        let mut models = Vec::new();
        for i in 0..6 {
            names.push(format!("ψ{i}"));
            models.push(BTreeSet::from([i]));
        }
        let mut add = |n: &str, ws: &[usize]| {
            names.push(n.to_string());
            models.push(ws.iter().copied().collect());
        };
        if with_phi0 {
            add("φ0", &[0, 1, 2, 3]);
        }
        add("φ1", &[1, 2]);
        add("φ2", &[2, 3]);
        add("φ3", &[1, 3]);
        add("φ4", &[1, 2, 3, 4, 5]);
        RawLogic::new(6, names, models)
    }

    pub fn propositional(atoms: usize) -> Self {
        let worlds = 1 << atoms;
        let mut names = Vec::new();
        let mut models = Vec::new();
        for mask in 0u32..1 << worlds {
            names.push(format!("s{mask}"));
            models.push((0..worlds).filter(|w| mask >> w & 1 == 1).collect());
        }
        RawLogic::new(worlds, names, models)
    }

    pub fn sentence(&self, name: &str) -> usize {
        self.names
            .iter()
            .position(|n| n == name)
            .expect("known sentence")
    }

    pub fn base(&self, names: &[&str]) -> u32 {
        names.iter().fold(0, |acc, n| acc | 1 << self.sentence(n))
    }

    pub fn base_count(&self) -> u32 {
        1 << self.names.len()
    }

    pub fn omega(&self) -> Worlds {
        (0..self.worlds).collect()
    }

    pub fn mods(&self, base: u32) -> Worlds {
        match self.cache.get(base as usize) {
            Some(m) => m.clone(),
            None => self.compute_mods(base),
        }
    }

    fn compute_mods(&self, base: u32) -> Worlds {
        let mut out = self.omega();
        for (i, m) in self.models.iter().enumerate() {
            if base >> i & 1 == 1 {
                out = out.intersection(m).copied().collect();
            }
        }
        out
    }

    /// Every expressible model set, with the first base (by bitmask) that
    /// expresses it.
    pub fn expressible(&self) -> BTreeMap<Worlds, u32> {
        let mut out = BTreeMap::new();
        for b in 0..self.base_count() {
            out.entry(self.mods(b)).or_insert(b);
        }
        out
    }
}

pub fn full_meet(l: &RawLogic, k: u32, g: u32) -> u32 {
    if l.mods(k | g).is_empty() {
        g
    } else {
        k | g
    }
}

/// The six-case operator, written out from its case list.
pub fn ex(l: &RawLogic, k: u32, g: u32) -> u32 {
    let psi = |i: usize| 1u32 << l.sentence(&format!("ψ{i}"));
    if l.mods(k) != BTreeSet::from([0]) {
        return full_meet(l, k, g);
    }
    let consistent = |extra: u32| !l.mods(g | extra).is_empty();
    if consistent(psi(0)) {
        g | psi(0)
    } else if consistent(psi(4)) {
        g | psi(4)
    } else if consistent(psi(1)) && !consistent(psi(3)) {
        g | psi(1)
    } else if consistent(psi(2)) && !consistent(psi(1)) {
        g | psi(2)
    } else if consistent(psi(3)) && !consistent(psi(2)) {
        g | psi(3)
    } else {
        g
    }
}

fn subset(a: &Worlds, b: &Worlds) -> bool {
    a.is_subset(b)
}

/// Postulate verdicts. G1–G4 range over all raw base pairs; G5/G6 over
/// triples of one representative base per expressible set (the first by
/// bitmask), with the union formed on raw bases.
pub fn postulates(
    l: &RawLogic,
    op: impl Fn(&RawLogic, u32, u32) -> u32,
) -> BTreeMap<&'static str, bool> {
    let n = l.base_count();
    let mods: Vec<Worlds> = (0..n).map(|b| l.mods(b)).collect();
    let mut ok = BTreeMap::from([
        ("G1", true),
        ("G2", true),
        ("G3", true),
        ("G4", true),
        ("G5", true),
        ("G6", true),
    ]);
    let reps: BTreeMap<Worlds, u32> = l.expressible();
    let mut result_by_sets: BTreeMap<(Worlds, Worlds), Worlds> = BTreeMap::new();
    for k in 0..n {
        for g in 0..n {
            let r = l.mods(op(l, k, g));
            if !subset(&r, &mods[g as usize]) {
                ok.insert("G1", false);
            }
            let both = l.mods(k | g);
            if !both.is_empty() && r != both {
                ok.insert("G2", false);
            }
            if !mods[g as usize].is_empty() && r.is_empty() {
                ok.insert("G3", false);
            }
            let key = (mods[k as usize].clone(), mods[g as usize].clone());
            match result_by_sets.get(&key) {
                Some(prev) if *prev != r => {
                    ok.insert("G4", false);
                }
                Some(_) => {}
                None => {
                    result_by_sets.insert(key, r);
                }
            }
        }
    }
    for &k in reps.values() {
        for &g1 in reps.values() {
            for &g2 in reps.values() {
                let lhs = l.mods(op(l, k, g1) | g2);
                let rhs = l.mods(op(l, k, g1 | g2));
                if !subset(&lhs, &rhs) {
                    ok.insert("G5", false);
                }
                if !lhs.is_empty() && !subset(&rhs, &lhs) {
                    ok.insert("G6", false);
                }
            }
        }
    }
    ok
}

/// The revealed relation, over every raw base Γ: `le[i][j]` iff for all Γ
/// with both worlds, `ωi ∈ Mod(K ◦ Γ)` or `ωj ∉ Mod(K ◦ Γ)`.
pub fn extract(l: &RawLogic, op: impl Fn(&RawLogic, u32, u32) -> u32, k: u32) -> Vec<Vec<bool>> {
    let mut le = vec![vec![true; l.worlds]; l.worlds];
    for g in 0..l.base_count() {
        let gm = l.mods(g);
        let r = l.mods(op(l, k, g));
        for &i in &gm {
            for &j in &gm {
                if !r.contains(&i) && r.contains(&j) {
                    le[i][j] = false;
                }
            }
        }
    }
    le
}

/// Counts unordered triples of expressible sets that form a critical loop,
/// trying every K and every Γ'i among expressible sets.
pub fn count_loops(l: &RawLogic) -> usize {
    let sets: Vec<Worlds> = l.expressible().into_keys().collect();
    let union3 = |a: &Worlds, b: &Worlds, c: &Worlds| -> Worlds {
        a.union(b).chain(c.iter()).copied().collect()
    };
    let region = |a: &Worlds, b: &Worlds, c: &Worlds| -> Worlds {
        a.intersection(b)
            .filter(|w| !c.contains(w))
            .copied()
            .collect()
    };
    let mut count = 0;
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            for c in b + 1..sets.len() {
                let g = [&sets[a], &sets[b], &sets[c]];
                let covered = union3(g[0], g[1], g[2]);
                let has_k = sets.iter().any(|k| k.is_disjoint(&covered));
                if !has_k {
                    continue;
                }
                let candidates: Vec<Vec<&Worlds>> = (0..3)
                    .map(|i| {
                        let r = region(g[i], g[(i + 1) % 3], g[(i + 2) % 3]);
                        sets.iter()
                            .filter(|s| !s.is_empty() && s.is_subset(&r))
                            .collect()
                    })
                    .collect();
                let found = candidates[0].iter().any(|p0| {
                    candidates[1].iter().any(|p1| {
                        candidates[2].iter().any(|p2| {
                            sets.iter().all(|gamma| {
                                let premise = [p0, p1, p2].iter().all(|p| !p.is_disjoint(gamma));
                                !premise
                                    || sets.iter().any(|inner| {
                                        !inner.is_empty()
                                            && inner.is_subset(gamma)
                                            && inner.is_disjoint(&covered)
                                    })
                            })
                        })
                    })
                });
                if found {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Whether the union of any two expressible sets is expressible.
pub fn disjunctive(l: &RawLogic) -> bool {
    let sets: BTreeSet<Worlds> = l.expressible().into_keys().collect();
    sets.iter().all(|a| {
        sets.iter()
            .all(|b| sets.contains(&a.union(b).copied().collect::<Worlds>()))
    })
}
