//! Shared helpers for unit tests.

use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use crate::family::FamilyRep;
use crate::num::{rat, Rational};
use crate::set::FiniteSet;
use crate::vector::SparseVector;

pub fn builtins() -> Vec<FamilyRep> {
    vec![
        FamilyRep::Singletons,
        FamilyRep::AllSubsets,
        FamilyRep::schreier(1).unwrap(),
        FamilyRep::schreier(2).unwrap(),
        FamilyRep::EvensOdds,
        FamilyRep::dyadic(None).unwrap(),
        FamilyRep::dyadic(Some(3)).unwrap(),
        FamilyRep::spread_closure(vec![
            FiniteSet::new(vec![2, 3]).unwrap(),
            FiniteSet::new(vec![4, 5, 6]).unwrap(),
        ]),
    ]
}

/// Dense vector from `(numerator, denominator)` pairs at indices `1, 2, ...`.
pub fn dense<S>(coords: &[(i64, i64)]) -> SparseVector<S> {
    let values: Vec<Rational> = coords.iter().map(|&(n, d)| rat(n, d)).collect();
    SparseVector::from_dense(&values)
}

/// Vectors on `{1..n}` with small rational coordinates, zeros included.
pub fn rational_vector<S: core::fmt::Debug>(n: usize) -> impl Strategy<Value = SparseVector<S>> {
    proptest::collection::vec((-6i64..=6, 1i64..=4), n).prop_map(|c| dense(&c))
}
