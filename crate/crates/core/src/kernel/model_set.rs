use std::cmp::Ordering;
use std::fmt;

/// Maximum number of worlds a logic may declare.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds, stored as a bitmask over world indices.
///
/// The ordering is the canonical class order used for every deterministic
/// enumeration in the crate: larger sets first, then the set containing the
/// lowest world index on which the two differ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ModelSet(u64);

impl ModelSet {
    pub const EMPTY: ModelSet = ModelSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ModelSet(bits)
    }

    /// All worlds `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds are supported");
        if n == MAX_WORLDS {
            ModelSet(u64::MAX)
        } else {
            ModelSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(world: usize) -> Self {
        assert!(world < MAX_WORLDS);
        ModelSet(1u64 << world)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, world: usize) -> bool {
        world < MAX_WORLDS && self.0 >> world & 1 == 1
    }

    pub fn with(self, world: usize) -> Self {
        self.union(Self::singleton(world))
    }

    pub fn intersection(self, other: Self) -> Self {
        ModelSet(self.0 & other.0)
    }

    pub fn union(self, other: Self) -> Self {
        ModelSet(self.0 | other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ModelSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// World indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }

    /// Every subset of `self`, including the empty set.
    pub fn subsets(self) -> impl Iterator<Item = ModelSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ModelSet(cur))
        })
    }
}

impl FromIterator<usize> for ModelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(ModelSet::EMPTY, |acc, w| acc.with(w))
    }
}

impl Ord for ModelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        other.len().cmp(&self.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 >> diff.trailing_zeros() & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for ModelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let a: ModelSet = [0, 1, 2].into_iter().collect();
        let b: ModelSet = [2, 3].into_iter().collect();
        assert_eq!(a.intersection(b), ModelSet::singleton(2));
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(a.difference(b), [0, 1].into_iter().collect());
        assert!(ModelSet::singleton(1).is_subset(a));
        assert!(!b.is_subset(a));
        assert!(ModelSet::EMPTY.is_subset(b));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn full_sets() {
        assert_eq!(ModelSet::full(0), ModelSet::EMPTY);
        assert_eq!(ModelSet::full(3).len(), 3);
        assert_eq!(ModelSet::full(64).len(), 64);
    }

    #[test]
    fn canonical_order() {
        let mut sets: Vec<ModelSet> = vec![
            ModelSet::singleton(1),
            ModelSet::EMPTY,
            [0, 1].into_iter().collect(),
            ModelSet::singleton(0),
            [1, 2].into_iter().collect(),
            [0, 2].into_iter().collect(),
        ];
        sets.sort();
        let shown: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().collect()).collect();
        assert_eq!(
            shown,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0], vec![1], vec![]]
        );
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let s: ModelSet = [1, 3, 4].into_iter().collect();
        let subs: Vec<ModelSet> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(ModelSet::EMPTY.subsets().count(), 1);
    }
}
