//! The dual space at `p = 1`: dual norms by exact linear programming,
//! extreme points of the dual ball, convex decompositions and exposedness.
//!
//! On a window the dual ball is the convex hull of the signed indicators
//! `Σ_{i ∈ A} ε_i e_i*` over maximal sets `A`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{Budget, FamilyRep, MaximalScope, Window};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::norms;
use crate::num::{int, Exponent, Rational, Scalar};
use crate::set::FiniteSet;
use crate::vector::{DualVector, FsVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(s: i8) -> Result<Self> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::precondition(format!("sign must be 1 or -1, got {s}"))),
        }
    }

    fn of(value: &Rational) -> Self {
        if value.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// `Σ_{i ∈ set} ε_i e_i*`; signs are listed in increasing index order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedIndicator {
    set: FiniteSet,
    signs: Vec<Sign>,
}

impl SignedIndicator {
    pub fn new(set: FiniteSet, signs: Vec<Sign>) -> Result<Self> {
        if set.len() != signs.len() {
            return Err(Error::precondition(format!(
                "{} signs given for a set of size {}",
                signs.len(),
                set.len()
            )));
        }
        Ok(SignedIndicator { set, signs })
    }

    pub fn positive(set: FiniteSet) -> Self {
        let signs = vec![Sign::Plus; set.len()];
        SignedIndicator { set, signs }
    }

    /// Signs matching the coordinates of `x` on `set` (zeros count as plus).
    pub fn matching(set: FiniteSet, x: &FsVector) -> Self {
        let signs = set.iter().map(|i| Sign::of(&x.get(i))).collect();
        SignedIndicator { set, signs }
    }

    pub fn set(&self) -> &FiniteSet {
        &self.set
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn signs_i8(&self) -> Vec<i8> {
        self.signs.iter().map(|s| s.as_i8()).collect()
    }

    pub fn to_dual(&self) -> DualVector {
        DualVector::signed_indicator(&self.set, &self.signs_i8())
    }

    pub fn pair(&self, x: &FsVector) -> Rational {
        self.set
            .iter()
            .zip(&self.signs)
            .map(|(i, s)| match s {
                Sign::Plus => x.get(i),
                Sign::Minus => -x.get(i),
            })
            .sum()
    }

    /// Every sign pattern on `set`, starting from all plus.
    pub fn all_patterns(set: &FiniteSet) -> impl Iterator<Item = SignedIndicator> + '_ {
        let k = set.len();
        (0u64..1 << k).map(move |mask| SignedIndicator {
            set: set.clone(),
            signs: (0..k).map(|t| if mask >> t & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect(),
        })
    }
}

/// Signed indicators over the maximal sets of the requested scope.
pub fn extreme_points(
    rep: &FamilyRep,
    w: Window,
    scope: MaximalScope,
    budget: &Budget,
) -> Result<Vec<SignedIndicator>> {
    let sets = rep.maximal_sets(w, scope, budget)?;
    let mut out = Vec::new();
    for set in &sets {
        out.extend(SignedIndicator::all_patterns(set));
        if out.len() > budget.max_sets {
            return Err(Error::BudgetExceeded { limit: budget.max_sets });
        }
    }
    Ok(out)
}

/// Whether `g` is a signed indicator over a window-maximal set.
pub fn is_window_extreme_point(g: &DualVector, rep: &FamilyRep, w: Window) -> bool {
    if g.iter().any(|(_, v)| v.abs() != Rational::one()) || g.max_index().is_some_and(|m| m > w.n()) {
        return false;
    }
    let set = g.support_set();
    if set.is_empty() || !rep.contains(&set) {
        return false;
    }
    w.indices().filter(|&j| !set.contains(j)).all(|j| !rep.contains(&set.with(j)))
}

fn abs_coords(y: &DualVector) -> (Vec<usize>, Vec<Rational>) {
    y.iter().map(|(i, v)| (i, v.abs())).unzip()
}

/// `sup{⟨y, x⟩ : ‖x‖ <= 1}` at `p = 1`, exactly.
pub fn dual_norm(y: &DualVector, rep: &FamilyRep, budget: &Budget) -> Result<Rational> {
    let (support, weights) = abs_coords(y);
    if support.is_empty() {
        return Ok(Rational::zero());
    }
    match rep {
        FamilyRep::Singletons => return Ok(weights.into_iter().sum()),
        FamilyRep::AllSubsets => return Ok(weights.into_iter().max().unwrap_or_else(Rational::zero)),
        _ => {}
    }
    let maximal = rep.maximal_within(&support, budget)?;
    let mut lp = LinearProgram::maximize(weights);
    for a in &maximal {
        let row = support.iter().map(|&i| if a.contains(i) { int(1) } else { int(0) }).collect();
        lp.constrain(row, Relation::Le, int(1));
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => unreachable!("dual norm program is feasible and bounded, got {other:?}"),
    }
}

/// Cheapest fractional cover of `|y|` by maximal sets, with its weights.
pub fn covering(y: &DualVector, rep: &FamilyRep, budget: &Budget) -> Result<(Rational, Vec<(FiniteSet, Rational)>)> {
    let (support, weights) = abs_coords(y);
    if support.is_empty() {
        return Ok((Rational::zero(), Vec::new()));
    }
    let maximal = rep.maximal_within(&support, budget)?;
    let mut lp = LinearProgram::maximize(vec![int(-1); maximal.len()]);
    for (&i, need) in support.iter().zip(&weights) {
        let row = maximal.iter().map(|a| if a.contains(i) { int(1) } else { int(0) }).collect();
        lp.constrain(row, Relation::Ge, need.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, x } => {
            let cover = maximal.into_iter().zip(x).filter(|(_, l)| !l.is_zero()).collect();
            Ok((-value, cover))
        }
        other => unreachable!("covering program is feasible and bounded, got {other:?}"),
    }
}

/// `min{Σ λ_A : Σ λ_A 1_A >= |y|}`; equals [`dual_norm`] by LP duality.
pub fn covering_norm(y: &DualVector, rep: &FamilyRep, budget: &Budget) -> Result<Rational> {
    Ok(covering(y, rep, budget)?.0)
}

/// Dual norm for any `p`. Beyond `p = 1` only the families whose dual is a
/// classical sequence space are supported.
pub fn dual_norm_p(y: &DualVector, rep: &FamilyRep, p: &Exponent, budget: &Budget) -> Result<Scalar> {
    if p.is_one() {
        return Ok(Scalar::Exact(dual_norm(y, rep, budget)?));
    }
    match rep {
        FamilyRep::Singletons => Ok(Scalar::Exact(y.iter().map(|(_, v)| v.abs()).sum())),
        FamilyRep::AllSubsets => {
            let q = p.conjugate_f64();
            let sum: f64 = y.iter().map(|(_, v)| crate::num::abs_pow(v, q)).sum();
            Ok(Scalar::Approx(libm::pow(sum, 1.0 / q)))
        }
        _ => Err(Error::Unsupported(format!("dual norm of {} for p > 1", rep.name()))),
    }
}

/// Relative tolerance for dual-side comparisons when `p > 1`.
pub const DUAL_TOLERANCE: f64 = 1e-9;

/// Minimal norming sets of a unit dual vector, judged by the dual norm.
pub fn dual_norming_sets(y: &DualVector, rep: &FamilyRep, p: &Exponent, budget: &Budget) -> Result<Vec<FiniteSet>> {
    let full = dual_norm_p(y, rep, p, budget)?;
    let unit = match &full {
        Scalar::Exact(v) => v.is_one(),
        Scalar::Approx(v) => (v - 1.0).abs() <= DUAL_TOLERANCE,
    };
    if !unit {
        return Err(Error::precondition(format!("dual vector has norm {full}, expected 1")));
    }
    // `a` attains the norm when `‖P_a y‖ = ‖y‖`; strictly below otherwise.
    let attains = |a: &FiniteSet| -> Result<bool> {
        let part = dual_norm_p(&y.project(a), rep, p, budget)?;
        Ok(match (&part, &full) {
            (Scalar::Exact(u), Scalar::Exact(v)) => u == v,
            _ => (full.to_f64() - part.to_f64()) <= DUAL_TOLERANCE * full.to_f64(),
        })
    };
    let mut out = Vec::new();
    for a in y.support_set().subsets() {
        if attains(&a)? {
            let mut minimal = true;
            for i in a.iter() {
                if attains(&a.without(i))? {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push(a);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: Vec<(Rational, SignedIndicator)>,
}

impl Decomposition {
    pub fn total_weight(&self) -> Rational {
        self.terms.iter().map(|(w, _)| w.clone()).sum()
    }

    pub fn reconstruct(&self) -> DualVector {
        self.terms.iter().fold(DualVector::zero(), |acc, (w, a)| acc.add(&a.to_dual().scale(w)))
    }

    /// The term with the largest weight, first on ties.
    pub fn heaviest(&self) -> Option<&(Rational, SignedIndicator)> {
        self.terms.iter().fold(None, |best: Option<&(Rational, SignedIndicator)>, t| match best {
            Some(b) if b.0 >= t.0 => Some(b),
            _ => Some(t),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionOptions {
    /// Extra indices beyond the support where globally maximal supersets may live.
    pub margin: usize,
    /// Largest window tried when the margin is widened; defaults to
    /// `4 * (max supp + margin)`.
    pub max_window: Option<usize>,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions { margin: 2, max_window: None }
    }
}

/// Writes `y` with `‖y‖* <= 1` as a convex combination of globally maximal
/// signed indicators. The margin doubles until a decomposition is found.
pub fn convex_decomposition(
    y: &DualVector,
    rep: &FamilyRep,
    options: &DecompositionOptions,
    budget: &Budget,
) -> Result<Decomposition> {
    let norm = dual_norm(y, rep, budget)?;
    if norm > Rational::one() {
        return Err(Error::precondition(format!("dual norm {norm} exceeds 1")));
    }
    let top = y.max_index().unwrap_or(1);
    let limit = options.max_window.unwrap_or(4 * (top + options.margin.max(1)));
    let mut margin = options.margin;
    loop {
        let n = top + margin;
        if !rep.finite_sets_only() {
            return Err(Error::Infeasible { window: n });
        }
        if let Some(found) = decompose_in_window(y, rep, Window::new(n)?, budget)? {
            return Ok(found);
        }
        if n >= limit {
            return Err(Error::Infeasible { window: n });
        }
        margin = (margin * 2).max(1).min(limit - top);
    }
}

fn decompose_in_window(y: &DualVector, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Option<Decomposition>> {
    let atoms = extreme_points(rep, w, MaximalScope::Global, budget)?;
    let mut lp = LinearProgram::maximize(vec![Rational::zero(); atoms.len()]);
    for i in w.indices() {
        let row = atoms.iter().map(|a| a.to_dual().get(i)).collect();
        lp.constrain(row, Relation::Eq, y.get(i));
    }
    lp.constrain(vec![int(1); atoms.len()], Relation::Eq, int(1));
    Ok(match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(Decomposition {
            terms: x.into_iter().zip(atoms).filter(|(l, _)| !l.is_zero()).collect(),
        }),
        _ => None,
    })
}

/// `x = Σ_{i ∈ B} (ε_i / |B|) e_i`, a unit vector normed only by `f`.
pub fn exposing_vector(f: &SignedIndicator, rep: &FamilyRep) -> Result<FsVector> {
    if !rep.is_globally_maximal(f.set())? {
        return Err(Error::precondition(format!("{} is not a maximal set of the family", f.set())));
    }
    let share = Rational::new(int(1).to_integer(), (f.set().len() as i64).into());
    let mut x = FsVector::zero();
    for (i, s) in f.set().iter().zip(f.signs()) {
        x.set(i, &share * int(i64::from(s.as_i8())));
    }
    Ok(x)
}

fn check_normed(f: &SignedIndicator, x: &FsVector, rep: &FamilyRep, budget: &Budget) -> Result<()> {
    if f.pair(x) != Rational::one() || norms::norm_value(x, rep, budget)? != Rational::one() {
        return Err(Error::precondition("expected a unit vector x with f(x) = 1"));
    }
    Ok(())
}

/// Whether `f` is the only point of the window dual ball with `g(x) = 1`.
///
/// The face `{g : g(x) = 1}` is the hull of the window atoms attaining 1,
/// so it is a single point exactly when one atom attains.
pub fn verify_exposed(f: &SignedIndicator, x: &FsVector, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<bool> {
    check_normed(f, x, rep, budget)?;
    let w = w.covering(x.max_index().unwrap_or(1)).covering(f.set().last().unwrap_or(1));
    let support = x.support_set();
    let mut attaining = 0u64;
    for a in rep.maximal_sets(w, MaximalScope::Window, budget)? {
        if x.abs_sum_over(&a).is_one() {
            let free = a.iter().filter(|&i| !support.contains(i)).count() as u32;
            attaining = attaining.saturating_add(1u64.checked_shl(free).unwrap_or(u64::MAX));
            if attaining > 1 {
                return Ok(false);
            }
        }
    }
    // The single attaining atom matches `x` in sign; it is `f` when the sets agree.
    Ok(attaining == 1 && {
        let sets = rep.maximal_sets(w, MaximalScope::Window, budget)?;
        sets.iter().any(|a| a == f.set() && x.abs_sum_over(a).is_one())
            && f.signs_i8() == x.signs_on(f.set())
    })
}

/// The perturbation argument: each `x ± m e_j` with `j` outside the support
/// and `m = min |x_i|` keeps norm 1, which forces any norming functional to
/// vanish off the support and to equal `f` on it.
pub fn perturbation_check(f: &SignedIndicator, x: &FsVector, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<bool> {
    check_normed(f, x, rep, budget)?;
    if x.support_set() != *f.set() {
        return Ok(false);
    }
    let m = x.min_abs();
    for j in w.indices().filter(|&j| !f.set().contains(j)) {
        for s in [int(1), int(-1)] {
            let mut moved = x.clone();
            moved.set(j, &m * &s);
            if norms::norm_value(&moved, rep, budget)? != Rational::one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
