//! Polyhedrality of `h_{𝒜,1}` read off the family.
//!
//! The unit ball is polyhedral, (V)-polyhedral and the basis shrinking
//! exactly when every member of the family is finite; (I)- and
//! (IV)-polyhedrality hold exactly when every star `{A : i ∈ A}` is finite.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::dual;
use crate::error::{Error, Result};
use crate::family::{Budget, FamilyRep, MaximalScope, Window};
use crate::num::{int, Rational};
use crate::set::FiniteSet;
use crate::vector::{DualVector, FsVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Decided from the representation.
    ByComputation,
    /// Follows from another field through a theorem.
    ByTheorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    /// `None` when the representation cannot decide.
    pub value: Option<bool>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralityReport {
    pub finite_sets_only: Verdict,
    pub polyhedral: Verdict,
    pub v: Verdict,
    pub iv: Verdict,
    pub i: Verdict,
    pub shrinking_basis: Verdict,
    /// A set meeting every member in at most one point, found greedily in
    /// a window; a hint towards a copy of `c_0`, not a proof of one.
    pub c0_hint: Option<FiniteSet>,
}

const C0_HINT_WINDOW: usize = 16;

/// Whether every star is finite, decided per representation.
pub fn all_stars_finite(rep: &FamilyRep) -> Option<bool> {
    if !rep.finite_sets_only() {
        return Some(false);
    }
    Some(match rep {
        FamilyRep::Singletons | FamilyRep::Explicit(_) | FamilyRep::DyadicBranches { depth: Some(_) } => true,
        FamilyRep::Schreier { .. } => false,
        FamilyRep::SpreadHereditaryClosure { generators } => generators.iter().all(|g| g.len() <= 1),
        FamilyRep::AllSubsets | FamilyRep::EvensOdds | FamilyRep::DyadicBranches { depth: None } => false,
    })
}

pub fn classify(rep: &FamilyRep) -> PolyhedralityReport {
    let finite = Some(rep.finite_sets_only());
    let stars = all_stars_finite(rep);
    let computed = |value| Verdict { value, provenance: Provenance::ByComputation };
    let derived = |value| Verdict { value, provenance: Provenance::ByTheorem };
    PolyhedralityReport {
        finite_sets_only: computed(finite),
        polyhedral: derived(finite),
        v: derived(finite),
        iv: computed(stars),
        i: derived(stars),
        shrinking_basis: derived(finite),
        c0_hint: c0_hint(rep),
    }
}

fn c0_hint(rep: &FamilyRep) -> Option<FiniteSet> {
    let mut picked: Vec<usize> = Vec::new();
    for j in 1..=C0_HINT_WINDOW {
        if picked.iter().all(|&e| !rep.contains(&FiniteSet::from_unsorted([e, j].into()))) {
            picked.push(j);
        }
    }
    (picked.len() >= 2).then(|| FiniteSet::from_unsorted(picked))
}

/// Extreme points `x_n* = Σ_{A_n} e_i*` converging weak* to `x* = Σ_A e_i*`,
/// which attains its norm at `x`: a failure of (IV)-polyhedrality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IvWitness {
    pub index: usize,
    pub limit_set: FiniteSet,
    pub x_star: DualVector,
    pub x: FsVector,
    /// `(A_n, window in which A_n is maximal)`.
    pub sets: Vec<(FiniteSet, Window)>,
    pub sequence: Vec<DualVector>,
    pub probe: FsVector,
    /// `|x_n*(probe) - x*(probe)|`.
    pub pairing_gaps: Vec<Rational>,
}

impl IvWitness {
    /// Every `x_n*` is a window extreme point and `x*(x) = 1`.
    pub fn is_valid(&self, rep: &FamilyRep) -> bool {
        self.x_star.pair(&self.x).is_one()
            && self
                .sequence
                .iter()
                .zip(&self.sets)
                .all(|(g, (_, w))| dual::is_window_extreme_point(g, rep, *w))
    }
}

/// `Σ_{k <= n} 2^{-k} e_k`.
pub fn geometric_probe(n: usize) -> FsVector {
    let mut y = FsVector::zero();
    let mut weight = Rational::one();
    for k in 1..=n {
        weight /= int(2);
        y.set(k, weight.clone());
    }
    y
}

/// Builds the witness from the sets `C_n`, `n = i+1..=w`, where `C_n` is the
/// first maximal set of the window `{1..n}` containing `i` and `n`. A
/// diagonal pass over the coordinates picks the limit `A`: coordinate `k`
/// joins `A` when most remaining candidates contain it, and the first
/// candidate discarded at each step becomes the next term, so the terms
/// agree with `A` on ever longer initial segments.
pub fn iv_violation_witness(
    rep: &FamilyRep,
    i: usize,
    w: Window,
    probe: Option<&FsVector>,
    budget: &Budget,
) -> Result<IvWitness> {
    if rep.star_size(i).is_finite() {
        return Err(Error::precondition(format!("the star of {i} is finite")));
    }
    let mut pool: Vec<(FiniteSet, Window)> = Vec::new();
    for n in (i + 1)..=w.n() {
        let window = Window::new(n)?;
        let found = rep
            .maximal_sets(window, MaximalScope::Window, budget)?
            .into_iter()
            .find(|a| a.contains(i) && a.contains(n));
        if let Some(a) = found {
            pool.push((a, window));
        }
    }
    let mut limit = Vec::new();
    let mut sets = Vec::new();
    for k in 1..=w.n() {
        let (with, without): (Vec<_>, Vec<_>) = pool.into_iter().partition(|(a, _)| a.contains(k));
        if with.len() >= 2 && with.len() > without.len() {
            limit.push(k);
            sets.extend(without.into_iter().take(1));
            pool = with;
        } else {
            sets.extend(with.into_iter().take(1));
            pool = without;
        }
    }
    let limit_set = FiniteSet::from_unsorted(limit);
    if !limit_set.contains(i) || sets.is_empty() || !rep.contains(&limit_set) {
        return Err(Error::HypothesisFailed(format!("no convergent sequence through {i} in window {}", w.n())));
    }
    let x_star = DualVector::signed_indicator(&limit_set, &alloc::vec![1; limit_set.len()]);
    let share = Rational::new(1.into(), (limit_set.len() as i64).into());
    let x = FsVector::signed_indicator(&limit_set, &alloc::vec![1; limit_set.len()]).scale(&share);
    let probe = probe.cloned().unwrap_or_else(|| geometric_probe(w.n()));
    let sequence: Vec<DualVector> =
        sets.iter().map(|(a, _)| DualVector::signed_indicator(a, &alloc::vec![1; a.len()])).collect();
    let target = x_star.pair(&probe);
    let pairing_gaps = sequence.iter().map(|g| (g.pair(&probe) - &target).abs()).collect();
    Ok(IvWitness { index: i, limit_set, x_star, x, sets, sequence, probe, pairing_gaps })
}

/// Whether `gaps` never increase.
pub fn gaps_nonincreasing(gaps: &[Rational]) -> bool {
    gaps.windows(2).all(|p| p[1] <= p[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::testutil::builtins;
    use alloc::string::ToString;
    use alloc::vec;

    fn set(e: &[usize]) -> FiniteSet {
        FiniteSet::new(e.to_vec()).unwrap()
    }

    fn truth(r: &PolyhedralityReport) -> [Option<bool>; 6] {
        [r.finite_sets_only.value, r.polyhedral.value, r.v.value, r.iv.value, r.i.value, r.shrinking_basis.value]
    }

    #[test]
    fn golden_reports() {
        let s = classify(&FamilyRep::Singletons);
        assert_eq!(truth(&s), [Some(true); 6]);
        assert_eq!(s.c0_hint, Some(FiniteSet::range(1, C0_HINT_WINDOW)));
        let t = classify(&FamilyRep::schreier(1).unwrap());
        assert_eq!(truth(&t), [Some(true), Some(true), Some(true), Some(false), Some(false), Some(true)]);
        let a = classify(&FamilyRep::AllSubsets);
        assert_eq!(a.finite_sets_only.value, Some(false));
        assert_eq!(a.polyhedral.value, Some(false));
        assert_eq!(a.polyhedral.provenance, Provenance::ByTheorem);
        assert_eq!(a.finite_sets_only.provenance, Provenance::ByComputation);
    }

    #[test]
    fn reports_are_consistent() {
        for rep in builtins() {
            let r = classify(&rep);
            let implies = |a: Option<bool>, b: Option<bool>| !(a == Some(true) && b == Some(false));
            assert!(implies(r.i.value, r.iv.value) && implies(r.iv.value, r.v.value), "{}", rep.name());
            assert_eq!(r.polyhedral.value, r.finite_sets_only.value);
            assert_eq!(r.shrinking_basis.value, r.finite_sets_only.value);
            assert_eq!(r.i.value, r.iv.value);
        }
    }

    #[test]
    fn spread_closures_follow_their_generators() {
        let wide = FamilyRep::spread_closure(vec![set(&[3, 7])]);
        assert_eq!(classify(&wide).iv.value, Some(false));
        let thin = FamilyRep::spread_closure(vec![set(&[2]), set(&[5])]);
        assert_eq!(classify(&thin).iv.value, Some(true));
        let budget = Budget::default();
        let window = Window::new(8).unwrap();
        assert_eq!(thin.restrict(window, &budget).unwrap(), FamilyRep::Singletons.restrict(window, &budget).unwrap());
    }

    #[test]
    fn schreier_witness() {
        let rep = FamilyRep::schreier(1).unwrap();
        let wit = iv_violation_witness(&rep, 2, Window::new(10).unwrap(), None, &Budget::default()).unwrap();
        assert_eq!(wit.limit_set, set(&[2]));
        assert_eq!(wit.x_star, DualVector::unit(2));
        assert_eq!(wit.x, FsVector::unit(2));
        let sets: Vec<FiniteSet> = wit.sets.iter().map(|(a, _)| a.clone()).collect();
        assert_eq!(sets, (3..=10).map(|n| set(&[2, n])).collect::<Vec<_>>());
        let gaps: Vec<Rational> = (3..=10).map(|n| Rational::new(1.into(), (1i64 << n).into())).collect();
        assert_eq!(wit.pairing_gaps, gaps);
        assert!(wit.is_valid(&rep));
        assert!(gaps_nonincreasing(&wit.pairing_gaps));
    }

    #[test]
    fn dyadic_witness_follows_a_chain() {
        let rep = FamilyRep::dyadic(None).unwrap();
        let wit = iv_violation_witness(&rep, 1, Window::new(16).unwrap(), None, &Budget::default()).unwrap();
        // Ties in the diagonal pass settle on the chain {1, 2, 5}.
        assert_eq!(wit.limit_set, set(&[1, 2, 5]));
        assert!(wit.is_valid(&rep));
        // Each term agrees with the limit below the first index where they differ,
        // and those indices increase.
        let first_difference = |a: &FiniteSet| (1..=16).find(|&k| a.contains(k) != wit.limit_set.contains(k));
        let marks: Vec<usize> = wit.sets.iter().map(|(a, _)| first_difference(a).unwrap()).collect();
        assert!(marks.windows(2).all(|m| m[0] < m[1]));
        assert_eq!(wit.x_star.pair(&wit.x), rat(1, 1));
    }

    #[test]
    fn witnesses_for_other_families() {
        let budget = Budget::default();
        let window = Window::new(9).unwrap();
        for rep in [FamilyRep::schreier(2).unwrap(), FamilyRep::spread_closure(vec![set(&[2, 3])])] {
            let wit = iv_violation_witness(&rep, 2, window, None, &budget).unwrap();
            assert!(wit.is_valid(&rep), "{}", rep.name());
            assert!(gaps_nonincreasing(&wit.pairing_gaps), "{}", rep.name());
        }
        assert!(iv_violation_witness(&FamilyRep::Singletons, 1, window, None, &budget).is_err());
        assert!(iv_violation_witness(&FamilyRep::schreier(1).unwrap(), 1, window, None, &budget).is_err());
        assert!(iv_violation_witness(&FamilyRep::Singletons, 1, window, None, &budget).unwrap_err().to_string().contains("finite"));
    }
}
