//! Finitely supported vectors with exact rational coordinates.
//!
//! Primal vectors live in the space itself, dual vectors in its dual; the
//! marker keeps the two from being mixed up outside of [`SparseVector::pair`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::marker::PhantomData;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{format_rational, Rational};
use crate::set::FiniteSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primal {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dual {}

/// Sparse vector indexed from 1; zero entries are never stored.
pub struct SparseVector<S> {
    entries: BTreeMap<usize, Rational>,
    side: PhantomData<S>,
}

pub type FsVector = SparseVector<Primal>;
pub type DualVector = SparseVector<Dual>;

impl<S> Clone for SparseVector<S> {
    fn clone(&self) -> Self {
        SparseVector { entries: self.entries.clone(), side: PhantomData }
    }
}

impl<S> PartialEq for SparseVector<S> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<S> Eq for SparseVector<S> {}

impl<S> fmt::Debug for SparseVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(k, v)| (k, format_rational(v)))).finish()
    }
}

impl<S> Default for SparseVector<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S> SparseVector<S> {
    pub fn zero() -> Self {
        SparseVector { entries: BTreeMap::new(), side: PhantomData }
    }

    /// Builds from `(index, value)` pairs; repeated indices are rejected.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut out = Self::zero();
        for (i, v) in entries {
            if i == 0 {
                return Err(Error::precondition("vector indices start at 1"));
            }
            if out.entries.contains_key(&i) {
                return Err(Error::precondition(alloc::format!("index {i} given twice")));
            }
            if !v.is_zero() {
                out.entries.insert(i, v);
            }
        }
        Ok(out)
    }

    /// Coordinates `1, 2, ...` taken from a dense slice.
    pub fn from_dense(values: &[Rational]) -> Self {
        let mut out = Self::zero();
        for (k, v) in values.iter().enumerate() {
            out.set(k + 1, v.clone());
        }
        out
    }

    pub fn unit(i: usize) -> Self {
        let mut out = Self::zero();
        out.set(i, Rational::from_integer(1.into()));
        out
    }

    /// `Σ_{i ∈ set} signs_i e_i`, with signs given in increasing index order.
    pub fn signed_indicator(set: &FiniteSet, signs: &[i8]) -> Self {
        debug_assert_eq!(set.len(), signs.len());
        let mut out = Self::zero();
        for (i, &s) in set.iter().zip(signs) {
            out.set(i, Rational::from_integer(i64::from(s).into()));
        }
        out
    }

    pub fn get(&self, i: usize) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, value: Rational) {
        assert!(i >= 1, "vector indices start at 1");
        if value.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(&i, v)| (i, v))
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn support_set(&self) -> FiniteSet {
        FiniteSet::from_unsorted(self.support())
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dense coordinates `1..=n`.
    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        (1..=n).map(|i| self.get(i)).collect()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = Self::zero();
        for (i, v) in self.iter() {
            out.set(i, v * factor);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, v) in other.iter() {
            out.set(i, out.get(i) + v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, v) in other.iter() {
            out.set(i, out.get(i) - v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (i, v) in self.iter() {
            out.set(i, -v.clone());
        }
        out
    }

    /// `Σ_{i ∈ set} x_i`.
    pub fn sum_over(&self, set: &FiniteSet) -> Rational {
        set.iter().map(|i| self.get(i)).sum()
    }

    /// `Σ_{i ∈ set} |x_i|`.
    pub fn abs_sum_over(&self, set: &FiniteSet) -> Rational {
        set.iter().map(|i| self.get(i).abs()).sum()
    }

    /// The restriction `P_E x`.
    pub fn project(&self, set: &FiniteSet) -> Self {
        let mut out = Self::zero();
        for (i, v) in self.iter() {
            if set.contains(i) {
                out.set(i, v.clone());
            }
        }
        out
    }

    /// Coordinate signs `-1, 0, 1` on `set`, in increasing index order.
    pub fn signs_on(&self, set: &FiniteSet) -> Vec<i8> {
        set.iter().map(|i| crate::num::signum(&self.get(i))).collect()
    }

    pub fn max_abs(&self) -> Rational {
        self.entries.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn min_abs(&self) -> Rational {
        self.entries.values().map(|v| v.abs()).min().unwrap_or_else(Rational::zero)
    }

    /// Relabels the side; coordinates are unchanged.
    pub fn transpose<T>(self) -> SparseVector<T> {
        SparseVector { entries: self.entries, side: PhantomData }
    }
}

impl SparseVector<Dual> {
    /// `⟨f, x⟩ = Σ f_i x_i`.
    pub fn pair(&self, x: &FsVector) -> Rational {
        let (small, large) = if self.entries.len() <= x.entries.len() {
            (&self.entries, &x.entries)
        } else {
            (&x.entries, &self.entries)
        };
        small.iter().filter_map(|(i, v)| large.get(i).map(|w| v * w)).sum()
    }
}

impl<S> fmt::Display for SparseVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, v)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}: {}", format_rational(v))?;
        }
        f.write_str("}")
    }
}
