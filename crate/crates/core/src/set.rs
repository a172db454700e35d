use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A finite set of positive integers, stored strictly increasing.
///
/// Sets order shortlex: by cardinality first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteSet(Vec<usize>);

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i >= 1, "indices start at 1");
        FiniteSet(alloc::vec![i])
    }

    /// Validates that `elements` is strictly increasing and positive.
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::Parse("set elements must be positive integers".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("set elements must be strictly increasing".into()));
        }
        Ok(FiniteSet(elements))
    }

    /// Sorts and deduplicates; panics on a zero index.
    pub fn from_unsorted(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        assert!(elements.first() != Some(&0), "indices start at 1");
        FiniteSet(elements)
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        FiniteSet::from_unsorted((lo..=hi).collect())
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn with(&self, i: usize) -> Self {
        let mut out = self.clone();
        if let Err(pos) = out.0.binary_search(&i) {
            assert!(i >= 1, "indices start at 1");
            out.0.insert(pos, i);
        }
        out
    }

    pub fn without(&self, i: usize) -> Self {
        FiniteSet(self.0.iter().copied().filter(|&e| e != i).collect())
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.0.iter().all(|&e| other.contains(e))
    }

    /// The first `n` elements (`B(n)` in the ordered-set notation).
    pub fn prefix(&self, n: usize) -> Self {
        FiniteSet(self.0.iter().copied().take(n).collect())
    }

    /// All subsets, in increasing bitmask order. Caller bounds the size.
    pub fn subsets(&self) -> impl Iterator<Item = FiniteSet> + '_ {
        let n = self.0.len();
        assert!(n < usize::BITS as usize, "set too large for subset enumeration");
        (0usize..1 << n).map(move |mask| {
            FiniteSet(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect(),
            )
        })
    }
}

impl Ord for FiniteSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for FiniteSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl From<FiniteSet> for Vec<usize> {
    fn from(set: FiniteSet) -> Self {
        set.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_input() {
        assert!(FiniteSet::new(vec![0, 1]).is_err());
        assert!(FiniteSet::new(vec![2, 2]).is_err());
        assert!(FiniteSet::new(vec![3, 1]).is_err());
        assert!(FiniteSet::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn shortlex_order() {
        let mut sets = [
            FiniteSet::from_unsorted(vec![2, 3]),
            FiniteSet::singleton(3),
            FiniteSet::empty(),
            FiniteSet::from_unsorted(vec![1, 9]),
            FiniteSet::singleton(1),
        ];
        sets.sort();
        let shown: Vec<_> = sets.iter().map(|s| s.elements().to_vec()).collect();
        assert_eq!(shown, vec![vec![], vec![1], vec![3], vec![1, 9], vec![2, 3]]);
    }

    #[test]
    fn subset_enumeration() {
        let s = FiniteSet::from_unsorted(vec![4, 7, 9]);
        assert_eq!(s.subsets().count(), 8);
        assert!(s.subsets().all(|t| t.is_subset(&s)));
        assert_eq!(s.prefix(2), FiniteSet::from_unsorted(vec![4, 7]));
        assert_eq!(s.prefix(5), s);
        assert_eq!(s.with(5).elements(), &[4, 5, 7, 9]);
        assert_eq!(s.without(7).elements(), &[4, 9]);
    }
}
