//! Norms of finitely supported vectors and their norming sets.
//!
//! Heredity makes the supremum over the whole family equal to the maximum
//! over members contained in the support, so every computation here is a
//! finite enumeration. At `p = 1` everything is exact.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{Budget, FamilyRep};
use crate::num::{abs_pow, Exponent, Rational, Scalar};
use crate::set::FiniteSet;
use crate::vector::FsVector;

/// Relative tolerance for comparing `Σ |x_i|^p` sums when `p > 1`.
pub const POWER_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NormResult {
    pub value: Scalar,
    /// Members inside the support attaining the supremum, in shortlex order.
    pub achieving_sets: Vec<FiniteSet>,
}

/// Norm of `x` together with the sets attaining it.
pub fn norm(x: &FsVector, rep: &FamilyRep, p: &Exponent, budget: &Budget) -> Result<NormResult> {
    let members = rep.members_within(&x.support(), budget)?;
    if p.is_one() {
        let sums: Vec<Rational> = members.iter().map(|a| x.abs_sum_over(a)).collect();
        let best = sums.iter().max().cloned().unwrap_or_else(Rational::zero);
        let achieving = if best.is_zero() {
            Vec::new()
        } else {
            members.into_iter().zip(sums).filter(|(_, s)| *s == best).map(|(a, _)| a).collect()
        };
        return Ok(NormResult { value: Scalar::Exact(best), achieving_sets: achieving });
    }
    let exponent = p.as_f64();
    let sums: Vec<f64> = members.iter().map(|a| power_sum(x, a, exponent)).collect();
    let best = sums.iter().copied().fold(0.0, f64::max);
    let achieving = if best == 0.0 {
        Vec::new()
    } else {
        members
            .into_iter()
            .zip(sums)
            .filter(|(_, s)| best - s <= POWER_SUM_TOLERANCE * best)
            .map(|(a, _)| a)
            .collect()
    };
    Ok(NormResult { value: Scalar::Approx(libm::pow(best, 1.0 / exponent)), achieving_sets: achieving })
}

/// Exact `p = 1` norm. Uses closed forms where the family allows.
pub fn norm_value(x: &FsVector, rep: &FamilyRep, budget: &Budget) -> Result<Rational> {
    match rep {
        FamilyRep::Singletons => Ok(x.max_abs()),
        FamilyRep::AllSubsets => Ok(x.iter().map(|(_, v)| v.abs()).sum()),
        FamilyRep::Schreier { order: 1 } => Ok(schreier_norm(x)),
        _ => {
            let members = rep.members_within(&x.support(), budget)?;
            Ok(members.iter().map(|a| x.abs_sum_over(a)).max().unwrap_or_else(Rational::zero))
        }
    }
}

/// Float norm for any `p`.
pub fn norm_f64(x: &FsVector, rep: &FamilyRep, p: &Exponent, budget: &Budget) -> Result<f64> {
    if p.is_one() {
        return Ok(crate::num::to_f64(&norm_value(x, rep, budget)?));
    }
    Ok(norm(x, rep, p, budget)?.value.to_f64())
}

/// For each candidate minimum `m`, the best Schreier set starting at `m`
/// takes the `m - 1` largest coordinates beyond `m`.
fn schreier_norm(x: &FsVector) -> Rational {
    let entries: Vec<(usize, Rational)> = x.iter().map(|(i, v)| (i, v.abs())).collect();
    let mut best = Rational::zero();
    for (k, (m, head)) in entries.iter().enumerate() {
        let mut tail: Vec<&Rational> = entries[k + 1..].iter().map(|(_, v)| v).collect();
        tail.sort_by(|a, b| b.cmp(a));
        let total: Rational = head + tail.into_iter().take(m - 1).sum::<Rational>();
        if total > best {
            best = total;
        }
    }
    best
}

fn power_sum(x: &FsVector, a: &FiniteSet, p: f64) -> f64 {
    a.iter().map(|i| abs_pow(&x.get(i), p)).sum()
}

/// `P_A x`.
pub fn project(x: &FsVector, a: &FiniteSet) -> FsVector {
    x.project(a)
}

/// Minimal norming sets `M(x)`.
///
/// Inside the support, a set is minimal norming exactly when it is a member
/// attaining the norm: dropping a nonzero coordinate strictly lowers every
/// sum, and a minimal norming set that were not a member would contain a
/// strictly smaller attaining member.
pub fn norming_sets(x: &FsVector, rep: &FamilyRep, p: &Exponent, budget: &Budget) -> Result<Vec<FiniteSet>> {
    if x.is_zero() {
        return Err(Error::precondition("norming sets of the zero vector are undefined"));
    }
    Ok(norm(x, rep, p, budget)?.achieving_sets)
}

/// `{D(n) : D ∈ M(x), |D| >= n}`, deduplicated, in shortlex order.
pub fn prefix_collection(
    x: &FsVector,
    rep: &FamilyRep,
    p: &Exponent,
    n: usize,
    budget: &Budget,
) -> Result<Vec<FiniteSet>> {
    if n == 0 {
        return Err(Error::precondition("prefix length must be positive"));
    }
    let mut out: Vec<FiniteSet> =
        norming_sets(x, rep, p, budget)?.into_iter().filter(|d| d.len() >= n).map(|d| d.prefix(n)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};
    use crate::testutil::{builtins, dense, rational_vector};
    use alloc::vec;
    use proptest::prelude::*;

    fn set(e: &[usize]) -> FiniteSet {
        FiniteSet::new(e.to_vec()).unwrap()
    }

    fn one() -> Exponent {
        Exponent::one()
    }

    /// Brute force: every subset of the support that the rule accepts.
    fn oracle_norm(x: &FsVector, rep: &FamilyRep) -> Rational {
        x.support_set()
            .subsets()
            .filter(|a| rep.contains(a))
            .map(|a| x.abs_sum_over(&a))
            .max()
            .unwrap()
    }

    /// The definition of `M(x)` read literally, over every subset of the support.
    fn oracle_norming_sets(x: &FsVector, rep: &FamilyRep) -> Vec<FiniteSet> {
        let full = oracle_norm(x, rep);
        let mut out: Vec<FiniteSet> = x
            .support_set()
            .subsets()
            .filter(|a| oracle_norm(&x.project(a), rep) == full)
            .filter(|a| {
                a.iter().all(|i| {
                    let mut dropped = x.project(a);
                    dropped.set(i, Rational::zero());
                    oracle_norm(&dropped, rep) < full
                })
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn norm_examples() {
        let b = Budget::default();
        let schreier = FamilyRep::schreier(1).unwrap();
        let x = dense(&[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1)]);
        let r = norm(&x, &schreier, &one(), &b).unwrap();
        assert_eq!(r.value, Scalar::Exact(int(3)));
        assert_eq!(r.achieving_sets, vec![set(&[3, 4, 5])]);

        let y = dense(&[(1, 1), (-2, 1), (1, 2)]);
        assert_eq!(norm(&y, &FamilyRep::Singletons, &one(), &b).unwrap().value, Scalar::Exact(int(2)));

        let z = dense(&[(3, 5), (4, 5)]);
        let two = Exponent::new(int(2)).unwrap();
        let r = norm(&z, &FamilyRep::AllSubsets, &two, &b).unwrap();
        assert!((r.value.to_f64() - 1.0).abs() < 1e-12);
        assert_eq!(r.achieving_sets, vec![set(&[1, 2])]);
    }

    #[test]
    fn project_examples() {
        let x = dense(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(project(&x, &set(&[1, 3])), dense(&[(1, 1), (0, 1), (3, 1)]));
        assert!(project(&x, &FiniteSet::empty()).is_zero());
        assert_eq!(project(&x, &set(&[1, 2, 3, 9])), x);
    }

    #[test]
    fn norming_set_examples() {
        let b = Budget::default();
        let x = dense(&[(1, 1), (1, 1)]);
        assert_eq!(norming_sets(&x, &FamilyRep::Singletons, &one(), &b).unwrap(), vec![set(&[1]), set(&[2])]);

        let schreier = FamilyRep::schreier(1).unwrap();
        let x = dense(&[(1, 1), (1, 2), (1, 2), (1, 2)]);
        let expected = vec![set(&[1]), set(&[2, 3]), set(&[2, 4]), set(&[3, 4])];
        assert_eq!(oracle_norming_sets(&x, &schreier), expected);
        assert_eq!(norming_sets(&x, &schreier, &one(), &b).unwrap(), expected);
        assert_eq!(norm_value(&x, &schreier, &b).unwrap(), int(1));

        let x = dense(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        assert_eq!(
            norming_sets(&x, &FamilyRep::EvensOdds, &one(), &b).unwrap(),
            vec![set(&[1, 3]), set(&[2, 4])]
        );
        assert!(norming_sets(&FsVector::zero(), &schreier, &one(), &b).is_err());
    }

    #[test]
    fn prefix_examples() {
        let b = Budget::default();
        let schreier = FamilyRep::schreier(1).unwrap();
        let x = dense(&[(1, 1), (1, 2), (1, 2), (1, 2)]);
        assert_eq!(
            prefix_collection(&x, &schreier, &one(), 1, &b).unwrap(),
            vec![set(&[1]), set(&[2]), set(&[3])]
        );
        assert_eq!(
            prefix_collection(&x, &schreier, &one(), 2, &b).unwrap(),
            vec![set(&[2, 3]), set(&[2, 4]), set(&[3, 4])]
        );
        let single = FsVector::unit(4);
        assert!(prefix_collection(&single, &schreier, &one(), 2, &b).unwrap().is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matches_brute_force(x in rational_vector(8)) {
            for rep in builtins() {
                let expected = oracle_norm(&x, &rep);
                let r = norm(&x, &rep, &one(), &Budget::default()).unwrap();
                prop_assert_eq!(r.value.as_exact().unwrap(), &expected);
                prop_assert_eq!(norm_value(&x, &rep, &Budget::default()).unwrap(), expected.clone());
                for a in &r.achieving_sets {
                    prop_assert!(rep.contains(a));
                    prop_assert_eq!(x.abs_sum_over(a), expected.clone());
                }
            }
        }

        #[test]
        fn norming_sets_match_definition(x in rational_vector(6)) {
            prop_assume!(!x.is_zero());
            for rep in builtins() {
                let got = norming_sets(&x, &rep, &one(), &Budget::default()).unwrap();
                prop_assert_eq!(got, oracle_norming_sets(&x, &rep));
            }
        }

        #[test]
        fn unconditional_and_monotone(x in rational_vector(6), flips in 0u32..64, shrink in 1i64..5) {
            let b = Budget::default();
            for rep in builtins() {
                let base = norm_value(&x, &rep, &b).unwrap();
                let mut flipped = x.clone();
                let mut smaller = x.clone();
                for (k, i) in x.support().into_iter().enumerate() {
                    if flips & (1 << k) != 0 {
                        flipped.set(i, -x.get(i));
                        smaller.set(i, x.get(i) / int(shrink));
                    }
                }
                prop_assert_eq!(norm_value(&flipped, &rep, &b).unwrap(), base.clone());
                prop_assert!(norm_value(&smaller, &rep, &b).unwrap() <= base);
            }
        }

        #[test]
        fn triangle_and_homogeneity(x in rational_vector(6), y in rational_vector(6), t in -5i64..5) {
            let b = Budget::default();
            for rep in builtins() {
                let nx = norm_value(&x, &rep, &b).unwrap();
                let ny = norm_value(&y, &rep, &b).unwrap();
                prop_assert!(norm_value(&x.add(&y), &rep, &b).unwrap() <= &nx + &ny);
                let scaled = x.scale(&rat(t, 3));
                prop_assert_eq!(norm_value(&scaled, &rep, &b).unwrap(), nx * rat(t, 3).abs());
            }
        }

        #[test]
        fn projections_contract(x in rational_vector(6), mask in 0u32..64) {
            let b = Budget::default();
            let a = FiniteSet::from_unsorted((1..=6).filter(|i| mask & (1 << (i - 1)) != 0).collect());
            for rep in builtins() {
                prop_assert!(norm_value(&project(&x, &a), &rep, &b).unwrap() <= norm_value(&x, &rep, &b).unwrap());
            }
        }

        #[test]
        fn classical_spaces(x in rational_vector(6), p_num in 2i64..7) {
            let b = Budget::default();
            let sum: Rational = x.iter().map(|(_, v)| v.abs()).sum();
            prop_assert_eq!(norm(&x, &FamilyRep::AllSubsets, &one(), &b).unwrap().value, Scalar::Exact(sum));
            prop_assert_eq!(norm(&x, &FamilyRep::Singletons, &one(), &b).unwrap().value, Scalar::Exact(x.max_abs()));
            let p = Exponent::new(rat(p_num, 2)).unwrap();
            let lp: f64 = x.iter().map(|(_, v)| abs_pow(v, p.as_f64())).sum::<f64>().powf(1.0 / p.as_f64());
            let got = norm(&x, &FamilyRep::AllSubsets, &p, &b).unwrap().value.to_f64();
            prop_assert!((got - lp).abs() <= 1e-12 * lp.max(1.0));
        }

        #[test]
        fn strictly_monotone_and_two_blocks(x in rational_vector(6)) {
            prop_assume!(!x.is_zero());
            let b = Budget::default();
            prop_assert_eq!(
                norming_sets(&x, &FamilyRep::AllSubsets, &one(), &b).unwrap(),
                vec![x.support_set()]
            );
            prop_assert!(norming_sets(&x, &FamilyRep::EvensOdds, &one(), &b).unwrap().len() <= 2);
        }
    }
}
