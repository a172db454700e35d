//! Slices of the unit balls and certificates against delta- and
//! Daugavet-point behaviour.
//!
//! A slice `S(f, δ) = {y ∈ B : f(y) > 1 - δ}` is handled through its closure,
//! so every distance reported here bounds the open slice from above.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::dual::{self, DecompositionOptions, SignedIndicator};
use crate::error::{Error, Result};
use crate::family::{Budget, FamilyRep, Window};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::norms;
use crate::num::{abs_pow, int, to_f64, Exponent, Rational};
use crate::set::FiniteSet;
use crate::vector::{DualVector, FsVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slice {
    /// A slice of the primal ball cut by a dual functional.
    Primal { functional: DualVector, width: Rational },
    /// A slice of the dual ball cut by a primal vector.
    Dual { functional: FsVector, width: Rational },
}

impl Slice {
    pub fn primal(functional: DualVector, width: Rational) -> Result<Self> {
        check_width(&width)?;
        Ok(Slice::Primal { functional, width })
    }

    pub fn dual(functional: FsVector, width: Rational) -> Result<Self> {
        check_width(&width)?;
        Ok(Slice::Dual { functional, width })
    }

    pub fn width(&self) -> &Rational {
        match self {
            Slice::Primal { width, .. } | Slice::Dual { width, .. } => width,
        }
    }

    /// `1 - δ`.
    pub fn level(&self) -> Rational {
        Rational::one() - self.width()
    }

    fn max_index(&self) -> usize {
        match self {
            Slice::Primal { functional, .. } => functional.max_index(),
            Slice::Dual { functional, .. } => functional.max_index(),
        }
        .unwrap_or(1)
    }

    fn check_unit(&self, rep: &FamilyRep, budget: &Budget) -> Result<()> {
        let norm = match self {
            Slice::Primal { functional, .. } => dual::dual_norm(functional, rep, budget)?,
            Slice::Dual { functional, .. } => norms::norm_value(functional, rep, budget)?,
        };
        if !norm.is_one() {
            return Err(Error::precondition(format!("slice functional has norm {norm}, expected 1")));
        }
        Ok(())
    }
}

/// Widths up to 2 are allowed; width 2 is the whole ball.
fn check_width(width: &Rational) -> Result<()> {
    if !width.is_positive() || *width > int(2) {
        return Err(Error::precondition(format!("slice width {width} is outside (0, 2]")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Primal(FsVector),
    Dual(DualVector),
}

impl Point {
    fn max_index(&self) -> usize {
        match self {
            Point::Primal(x) => x.max_index(),
            Point::Dual(y) => y.max_index(),
        }
        .unwrap_or(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    NonDelta,
    DaugavetExclusion,
}

/// A slice together with an exact bound on the distance from a point to the
/// slice, certifying that the point is not a delta- or Daugavet-point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub slice: Slice,
    pub point: Point,
    pub window: Window,
    pub sup_distance: Rational,
    pub bound_claimed: Rational,
    /// Prefix length and the number of prefixes used by a non-delta certificate.
    pub prefix: Option<(usize, usize)>,
    /// Weight and atom singled out by a Daugavet exclusion.
    pub heaviest: Option<(Rational, SignedIndicator)>,
}

impl Certificate {
    /// Checks the certificate along a route that shares no LP with its
    /// construction: the functional norm by covering, the slice distance by
    /// the dual programs. Returns the recomputed distance.
    pub fn verify(&self, rep: &FamilyRep, budget: &Budget) -> Result<Rational> {
        let unit = match &self.slice {
            Slice::Primal { functional, .. } => dual::covering_norm(functional, rep, budget)?.is_one(),
            Slice::Dual { functional, .. } => norms::norm(functional, rep, &Exponent::one(), budget)?
                .value
                .as_exact()
                .is_some_and(|v| v.is_one()),
        };
        if !unit {
            return Err(Error::HypothesisFailed("slice functional is not a unit vector".into()));
        }
        if let (CertificateKind::NonDelta, Slice::Primal { functional, .. }, Point::Primal(x)) =
            (self.kind, &self.slice, &self.point)
        {
            if functional.pair(x) <= self.slice.level() {
                return Err(Error::HypothesisFailed("point is not in the open slice".into()));
            }
        }
        let distance = verify_sup_distance(&self.point, &self.slice, rep, self.window, budget)?;
        if distance > self.bound_claimed || self.bound_claimed >= int(2) {
            return Err(Error::HypothesisFailed(format!(
                "recomputed distance {distance} against claimed bound {}",
                self.bound_claimed
            )));
        }
        Ok(distance)
    }
}

/// Signed indicators over window-maximal sets, with signs enumerated only on
/// `relevant` (fixed to plus elsewhere).
fn window_atoms(sets: &[FiniteSet], relevant: Option<&FiniteSet>) -> Vec<SignedIndicator> {
    let mut out = Vec::new();
    for set in sets {
        match relevant {
            None => out.extend(SignedIndicator::all_patterns(set)),
            Some(r) => {
                let free = FiniteSet::from_unsorted(set.iter().filter(|&i| r.contains(i)).collect());
                for pattern in SignedIndicator::all_patterns(&free) {
                    let signs = set
                        .iter()
                        .map(|i| match free.elements().binary_search(&i) {
                            Ok(k) => pattern.signs()[k],
                            Err(_) => dual::Sign::Plus,
                        })
                        .collect();
                    out.push(SignedIndicator::new(set.clone(), signs).expect("sign count matches"));
                }
            }
        }
    }
    out
}

fn window_sets(rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Vec<FiniteSet>> {
    let support: Vec<usize> = w.indices().collect();
    rep.maximal_within(&support, budget)
}

/// `max{⟨c, y⟩ : ‖y‖ <= 1, g(y) >= level}` over coordinates in
/// `supp(c) ∪ supp(g)`; `None` when the slice is empty.
fn support_function(c: &DualVector, g: &DualVector, level: &Rational, sets: &[FiniteSet]) -> Option<Rational> {
    let coords: Vec<usize> = c.support_set().iter().chain(g.support()).collect::<BTreeSet<_>>().into_iter().collect();
    let k = coords.len();
    let mut objective = vec![Rational::zero(); 2 * k];
    let mut slice_row = vec![Rational::zero(); 2 * k];
    for (t, &i) in coords.iter().enumerate() {
        objective[2 * t] = c.get(i);
        objective[2 * t + 1] = -c.get(i);
        slice_row[2 * t] = g.get(i);
        slice_row[2 * t + 1] = -g.get(i);
    }
    let mut lp = LinearProgram::maximize(objective);
    let rows: BTreeSet<Vec<usize>> = sets
        .iter()
        .map(|b| (0..k).filter(|&t| b.contains(coords[t])).collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    for r in rows {
        let mut row = vec![Rational::zero(); 2 * k];
        for t in r {
            row[2 * t] = int(1);
            row[2 * t + 1] = int(1);
        }
        lp.constrain(row, Relation::Le, int(1));
    }
    lp.constrain(slice_row, Relation::Ge, level.clone());
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("the ball is bounded"),
    }
}

/// The same support function through the dual program
/// `min{Σ λ_B - level·μ : Σ_{B ∋ i} λ_B ∓ μ g_i >= ±c_i}` over every window coordinate.
fn support_function_dual(c: &DualVector, g: &DualVector, level: &Rational, sets: &[FiniteSet], n: usize) -> Option<Rational> {
    let m = sets.len();
    let mut objective = vec![int(-1); m + 1];
    objective[m] = level.clone();
    let mut lp = LinearProgram::maximize(objective);
    for i in 1..=n {
        for s in [1i64, -1] {
            let mut row: Vec<Rational> = sets.iter().map(|b| if b.contains(i) { int(1) } else { int(0) }).collect();
            row.push(-g.get(i) * int(s));
            lp.constrain(row, Relation::Ge, c.get(i) * int(s));
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Some(-value),
        LpOutcome::Unbounded => None,
        LpOutcome::Infeasible => unreachable!("large λ is always feasible"),
    }
}

fn empty_slice() -> Error {
    Error::precondition("the slice is empty")
}

fn effective_window(point: &Point, slice: &Slice, w: Window) -> Window {
    w.covering(point.max_index()).covering(slice.max_index())
}

/// `sup{‖x - y‖ : y in the closed slice}` over the window, at `p = 1`.
pub fn slice_sup_distance(point: &Point, slice: &Slice, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Rational> {
    slice.check_unit(rep, budget)?;
    let w = effective_window(point, slice, w);
    match (point, slice) {
        (Point::Primal(x), Slice::Primal { functional, .. }) => primal_sup_distance(x, functional, &slice.level(), rep, w, budget),
        (Point::Dual(y), Slice::Dual { functional, .. }) => {
            let candidates = dual_slice_vertices(functional, &slice.level(), rep, w, budget)?;
            dual_sup_distance(y, &candidates, rep, budget)
        }
        _ => Err(Error::precondition("point and slice live on different sides")),
    }
}

/// [`slice_sup_distance`] at any exponent; only `p = 1` is supported.
pub fn slice_sup_distance_p(
    point: &Point,
    slice: &Slice,
    rep: &FamilyRep,
    w: Window,
    p: &Exponent,
    budget: &Budget,
) -> Result<Rational> {
    if !p.is_one() {
        return Err(Error::Unsupported("slice distances are computed for p = 1 only".into()));
    }
    slice_sup_distance(point, slice, rep, w, budget)
}

fn primal_sup_distance(x: &FsVector, g: &DualVector, level: &Rational, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Rational> {
    let sets = window_sets(rep, w, budget)?;
    let relevant = x.support_set().iter().chain(g.support()).collect::<Vec<_>>();
    let relevant = FiniteSet::from_unsorted(relevant.into_iter().collect::<BTreeSet<_>>().into_iter().collect());
    let mut atoms: Vec<(Rational, SignedIndicator)> =
        window_atoms(&sets, Some(&relevant)).into_iter().map(|c| (c.pair(x), c)).collect();
    atoms.sort_by(|a, b| b.0.cmp(&a.0));
    let mut best: Option<Rational> = None;
    for (base, c) in atoms {
        if best.as_ref().is_some_and(|b| &base + int(1) <= *b) {
            break;
        }
        let far = support_function(&c.to_dual().neg(), g, level, &sets).ok_or_else(empty_slice)?;
        let value = base + far;
        if best.as_ref().is_none_or(|b| value > *b) {
            best = Some(value);
        }
    }
    best.ok_or_else(empty_slice)
}

/// Vertices of the closed dual slice, up to repetition: atoms inside it and
/// crossings of the cutting hyperplane with segments between atoms.
fn dual_slice_vertices(x: &FsVector, level: &Rational, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Vec<(DualVector, Rational)>> {
    let sets = window_sets(rep, w, budget)?;
    let atoms: Vec<(DualVector, Rational)> =
        window_atoms(&sets, None).into_iter().map(|a| (a.to_dual(), a.pair(x))).collect();
    let (inside, outside): (Vec<_>, Vec<_>) = atoms.into_iter().partition(|(_, beta)| beta >= level);
    if inside.is_empty() {
        return Err(empty_slice());
    }
    let mut out: Vec<(DualVector, Rational)> = inside.iter().map(|(a, _)| (a.clone(), int(1))).collect();
    for (a, beta_a) in &inside {
        for (b, beta_b) in &outside {
            let t = (level - beta_b) / (beta_a - beta_b);
            let q = a.scale(&t).add(&b.scale(&(Rational::one() - &t)));
            out.push((q, t));
        }
    }
    Ok(out)
}

fn dual_sup_distance(y: &DualVector, candidates: &[(DualVector, Rational)], rep: &FamilyRep, budget: &Budget) -> Result<Rational> {
    let mut seen: BTreeSet<Vec<(usize, Rational)>> = BTreeSet::new();
    let mut best = Rational::zero();
    for (q, _) in candidates {
        if seen.insert(q.iter().map(|(i, r)| (i, r.clone())).collect()) {
            best = best.max(dual::dual_norm(&y.sub(q), rep, budget)?);
        }
    }
    Ok(best)
}

/// Recomputes the slice distance along the dual route: LP duals for the
/// primal side and covering norms for the dual side, without sign pruning.
pub fn verify_sup_distance(point: &Point, slice: &Slice, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Rational> {
    let w = effective_window(point, slice, w);
    let sets = window_sets(rep, w, budget)?;
    let level = slice.level();
    match (point, slice) {
        (Point::Primal(x), Slice::Primal { functional, .. }) => {
            let mut best: Option<Rational> = None;
            for c in window_atoms(&sets, None) {
                let far = support_function_dual(&c.to_dual().neg(), functional, &level, &sets, w.n()).ok_or_else(empty_slice)?;
                let value = c.pair(x) + far;
                if best.as_ref().is_none_or(|b| value > *b) {
                    best = Some(value);
                }
            }
            best.ok_or_else(empty_slice)
        }
        (Point::Dual(y), Slice::Dual { functional, .. }) => {
            let mut best = Rational::zero();
            for (q, _) in dual_slice_vertices(functional, &level, rep, w, budget)? {
                best = best.max(dual::covering_norm(&y.sub(&q), rep, budget)?);
            }
            Ok(best)
        }
        _ => Err(Error::precondition("point and slice live on different sides")),
    }
}

/// `sup{‖u - v‖ : u, v in the closed slice}` over the window, at `p = 1`.
pub fn slice_diameter(slice: &Slice, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Rational> {
    slice.check_unit(rep, budget)?;
    let w = w.covering(slice.max_index());
    let level = slice.level();
    match slice {
        Slice::Primal { functional, .. } => {
            let sets = window_sets(rep, w, budget)?;
            let mut best: Option<Rational> = None;
            for c in window_atoms(&sets, Some(&functional.support_set())) {
                let c = c.to_dual();
                let up = support_function(&c, functional, &level, &sets).ok_or_else(empty_slice)?;
                let down = support_function(&c.neg(), functional, &level, &sets).ok_or_else(empty_slice)?;
                let value = up + down;
                if best.as_ref().is_none_or(|b| value > *b) {
                    best = Some(value);
                }
            }
            best.ok_or_else(empty_slice)
        }
        Slice::Dual { functional, .. } => {
            let vertices = dual_slice_vertices(functional, &level, rep, w, budget)?;
            let mut best = Rational::zero();
            for (k, (u, _)) in vertices.iter().enumerate() {
                for (v, _) in &vertices[k + 1..] {
                    best = best.max(dual::dual_norm(&u.sub(v), rep, budget)?);
                }
            }
            Ok(best)
        }
    }
}

/// Non-delta certificate for a unit vector at `p = 1`.
///
/// For a prefix length `n`, the sets `E_k` are the length-`n` prefixes of the
/// minimal norming sets (a shorter norming set serves as its own prefix).
/// When `‖P_E x‖ > 1 - 1/(2s)` for all `s` of them, the average of the
/// sign-matched indicators of the `E_k` cuts a slice around `x` that stays
/// away from the antipode. `prefix` fixes `n`; otherwise the smallest
/// working `n` is used.
pub fn non_delta_certificate(
    x: &FsVector,
    rep: &FamilyRep,
    w: Window,
    prefix: Option<usize>,
    budget: &Budget,
) -> Result<Certificate> {
    let one = Exponent::one();
    let norm = norms::norm_value(x, rep, budget)?;
    if !norm.is_one() {
        return Err(Error::precondition(format!("vector has norm {norm}, expected 1")));
    }
    let norming = norms::norming_sets(x, rep, &one, budget)?;
    let longest = norming.iter().map(FiniteSet::len).max().unwrap_or(1);
    let lengths: Vec<usize> = match prefix {
        Some(0) => return Err(Error::precondition("prefix length must be positive")),
        Some(n) => vec![n],
        None => (1..=longest).collect(),
    };
    for n in lengths {
        let prefixes: Vec<FiniteSet> =
            norming.iter().map(|d| d.prefix(n.min(d.len()))).collect::<BTreeSet<_>>().into_iter().collect();
        let s = prefixes.len();
        let threshold = Rational::one() - Rational::new(1.into(), (2 * s as i64).into());
        let mut holds = true;
        for e in &prefixes {
            if norms::norm_value(&x.project(e), rep, budget)? <= threshold {
                holds = false;
                break;
            }
        }
        if !holds {
            continue;
        }
        let share = Rational::new(1.into(), (s as i64).into());
        let average = prefixes
            .iter()
            .fold(DualVector::zero(), |acc, e| acc.add(&SignedIndicator::matching(e.clone(), x).to_dual()))
            .scale(&share);
        let scale = dual::dual_norm(&average, rep, budget)?;
        let functional = average.scale(&scale.recip());
        let width = Rational::one() - threshold / &scale;
        let slice = Slice::primal(functional, width)?;
        let point = Point::Primal(x.clone());
        let w = effective_window(&point, &slice, w);
        let sup_distance = slice_sup_distance(&point, &slice, rep, w, budget)?;
        if sup_distance >= int(2) {
            return Err(Error::HypothesisFailed(format!("slice reaches distance {sup_distance}")));
        }
        return Ok(Certificate {
            kind: CertificateKind::NonDelta,
            slice,
            point,
            window: w,
            bound_claimed: sup_distance.clone(),
            sup_distance,
            prefix: Some((n, s)),
            heaviest: None,
        });
    }
    Err(Error::HypothesisFailed("no prefix length satisfies ‖P_E x‖ > 1 - 1/(2s)".into()))
}

/// Exclusion of Daugavet behaviour at a unit dual vector `y`: a slice of the
/// dual ball around the heaviest atom `f` of a convex decomposition with
/// diameter below 1 keeps every point within `2 - λ` of `y`.
pub fn daugavet_exclusion(y: &DualVector, rep: &FamilyRep, w: Window, budget: &Budget) -> Result<Certificate> {
    let norm = dual::dual_norm(y, rep, budget)?;
    if !norm.is_one() {
        return Err(Error::precondition(format!("dual vector has norm {norm}, expected 1")));
    }
    let decomposition = dual::convex_decomposition(y, rep, &DecompositionOptions::default(), budget)?;
    let (weight, atom) = decomposition.heaviest().cloned().expect("a unit vector has a nonempty decomposition");
    let exposing = dual::exposing_vector(&atom, rep)?;
    let point = Point::Dual(y.clone());
    let w = w.covering(point.max_index()).covering(atom.set().last().unwrap_or(1));
    let sets = window_sets(rep, w, budget)?;
    let f = atom.to_dual();
    // Runner-up pairing against the exposing vector.
    let mut runner_up: Option<Rational> = None;
    for b in window_atoms(&sets, None) {
        if b.to_dual() == f {
            continue;
        }
        let beta = b.pair(&exposing);
        if beta.is_one() {
            return Err(Error::HypothesisFailed(format!("{} is not exposed on window {}", atom.set(), w.n())));
        }
        if runner_up.as_ref().is_none_or(|r| beta > *r) {
            runner_up = Some(beta);
        }
    }
    // A point of S(x, δ) moves at most δ·2/(1 - β) from f, so the diameter is
    // below 1 once δ < (1 - β)/4.
    let gap = Rational::one() - runner_up.unwrap_or_else(|| int(-1));
    let floor = Rational::new(1.into(), (1i64 << 30).into());
    let mut width = Rational::new(1.into(), 2.into());
    while int(4) * &width >= gap {
        width /= int(2);
        if width < floor {
            return Err(Error::HypothesisFailed("could not shrink the slice diameter below 1".into()));
        }
    }
    let slice = Slice::dual(exposing, width)?;
    let sup_distance = slice_sup_distance(&point, &slice, rep, w, budget)?;
    let bound_claimed = int(2) - &weight;
    if sup_distance > bound_claimed {
        return Err(Error::HypothesisFailed(format!("distance {sup_distance} exceeds {bound_claimed}")));
    }
    Ok(Certificate {
        kind: CertificateKind::DaugavetExclusion,
        slice,
        point,
        window: w,
        sup_distance,
        bound_claimed,
        prefix: None,
        heaviest: Some((weight, atom)),
    })
}

/// Witnesses `x* - 2e_a*` for a dual delta-point `x* = Σ_{i ∈ A} e_i*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaWitness {
    pub x_star: DualVector,
    /// `(a, x* - 2e_a*)` for each qualifying index `a`.
    pub witnesses: Vec<(usize, DualVector)>,
    /// `‖x* - (x* - 2e_a*)‖*` for each witness; all equal 2.
    pub distances: Vec<Rational>,
    /// Qualifying indices over `|A ∩ window|`.
    pub qualifying_fraction: Rational,
}

/// Flips of `x* = Σ_{i ∈ A} e_i*` that stay in a dual slice, where `A` is
/// the window trace of an infinite member of the family.
pub fn delta_witness_sequence(a: &FiniteSet, rep: &FamilyRep, slice: &Slice, w: Window, budget: &Budget) -> Result<DeltaWitness> {
    let Slice::Dual { functional: x, .. } = slice else {
        return Err(Error::precondition("delta witnesses live in a slice of the dual ball"));
    };
    if a.is_empty() || !rep.extends_to_infinite_member(a) {
        return Err(Error::precondition(format!("{a} is not the trace of an infinite member")));
    }
    slice.check_unit(rep, budget)?;
    let level = slice.level();
    let x_star = DualVector::signed_indicator(a, &vec![1; a.len()]);
    if x_star.pair(x) <= level {
        return Err(Error::precondition("x* is not in the slice"));
    }
    let traced: Vec<usize> = a.iter().filter(|&i| i <= w.n()).collect();
    let mut witnesses = Vec::new();
    let mut distances = Vec::new();
    for &i in &traced {
        let flipped = x_star.sub(&DualVector::unit(i).scale(&int(2)));
        if flipped.pair(x) > level {
            distances.push(dual::dual_norm(&x_star.sub(&flipped), rep, budget)?);
            witnesses.push((i, flipped));
        }
    }
    let qualifying_fraction = if traced.is_empty() {
        Rational::zero()
    } else {
        Rational::new((witnesses.len() as i64).into(), (traced.len() as i64).into())
    };
    Ok(DeltaWitness { x_star, witnesses, distances, qualifying_fraction })
}

/// One norming set's share of a Hölder certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderTerm {
    pub norming_set: FiniteSet,
    /// First index `d` of the norming set.
    pub first: usize,
    /// Every point of the slice has `sgn(x_d) y_d >= threshold = |x_d| / 2`.
    pub threshold: f64,
    /// Width of the slice of the `ℓ_p` ball cut by this term's functional.
    pub delta: f64,
}

/// Certificate for `p > 1`, built from Hölder-dual functionals. Floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderCertificate {
    pub point: FsVector,
    pub exponent: f64,
    /// Averaged functional `x*` with the signs of the point.
    pub functional: BTreeMap<usize, f64>,
    /// Width of the slice `S(x*, width)`, the smallest term width over the term count.
    pub width: f64,
    pub terms: Vec<HolderTerm>,
}

/// Tolerance on the normalisation of the point for `p > 1`.
pub const HOLDER_NORM_TOLERANCE: f64 = 1e-9;
const HOLDER_MIN_WIDTH: f64 = 1.0 / (1u64 << 40) as f64;

/// Largest value of `⟨ξ, u⟩` over the `ℓ_p` ball when the first coordinate of
/// `u` is pinned to `t`; `lead = ξ_1`, `rest = ‖(ξ_2, ξ_3, ...)‖_q`.
pub fn pinned_support(lead: f64, rest: f64, p: f64, t: f64) -> f64 {
    let slack = (1.0 - libm::pow(t.abs(), p)).max(0.0);
    lead * t + rest * libm::pow(slack, 1.0 / p)
}

/// Smallest first coordinate in the closed slice `{⟨ξ, u⟩ >= 1 - δ}` of the
/// `ℓ_p` ball; `peak` is where the pinned support reaches 1.
fn lowest_first_coordinate(lead: f64, rest: f64, p: f64, peak: f64, delta: f64) -> f64 {
    let target = 1.0 - delta;
    if pinned_support(lead, rest, p, -1.0) >= target {
        return -1.0;
    }
    let (mut lo, mut hi) = (-1.0, peak);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pinned_support(lead, rest, p, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Hölder certificate for a unit vector of `h_{𝒜,p}`, `p > 1`.
pub fn holder_certificate(x: &FsVector, rep: &FamilyRep, p: &Exponent, budget: &Budget) -> Result<HolderCertificate> {
    if p.is_one() {
        return Err(Error::precondition("the Hölder certificate needs p > 1"));
    }
    let pf = p.as_f64();
    let q = p.conjugate_f64();
    let norm = norms::norm_f64(x, rep, p, budget)?;
    if (norm - 1.0).abs() > HOLDER_NORM_TOLERANCE {
        return Err(Error::precondition(format!("vector has norm {norm}, expected 1")));
    }
    let magnitude = |i: usize| to_f64(&x.get(i).abs()) / norm;
    let mut by_first: BTreeMap<usize, FiniteSet> = BTreeMap::new();
    for d in norms::norming_sets(x, rep, p, budget)? {
        by_first.entry(d.first().expect("norming sets are nonempty")).or_insert(d);
    }
    let k = by_first.len();
    let mut terms = Vec::with_capacity(k);
    let mut functional: BTreeMap<usize, f64> = BTreeMap::new();
    for (first, d) in by_first {
        let lead = libm::pow(magnitude(first), pf - 1.0);
        let rest_q: f64 = d.iter().skip(1).map(|i| libm::pow(magnitude(i), pf)).sum();
        let rest = libm::pow(rest_q, 1.0 / q);
        let peak = magnitude(first);
        let threshold = 0.5 * peak;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if lowest_first_coordinate(lead, rest, pf, peak, mid) >= threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo < HOLDER_MIN_WIDTH {
            return Err(Error::HypothesisFailed(format!("no slice width above 2^-40 for the set {d}")));
        }
        for i in d.iter() {
            let sign = if x.get(i).is_negative() { -1.0 } else { 1.0 };
            *functional.entry(i).or_insert(0.0) += sign * libm::pow(magnitude(i), pf - 1.0) / k as f64;
        }
        terms.push(HolderTerm { norming_set: d, first, threshold, delta: lo });
    }
    let width = terms.iter().map(|t| t.delta).fold(f64::INFINITY, f64::min) / k as f64;
    Ok(HolderCertificate { point: x.clone(), exponent: pf, functional, width, terms })
}

impl HolderCertificate {
    /// Per term, `1 - k·width - φ(threshold)` with `φ` the pinned support:
    /// nonnegative means no point of the closed slice has its first
    /// coordinate below the threshold.
    pub fn margins(&self) -> Vec<f64> {
        let p = self.exponent;
        let q = p / (p - 1.0);
        let k = self.terms.len() as f64;
        let norm: f64 = libm::pow(self.point.iter().map(|(_, v)| abs_pow(v, p)).sum::<f64>(), 1.0 / p);
        self.terms
            .iter()
            .map(|t| {
                let mags: Vec<f64> = t.norming_set.iter().map(|i| to_f64(&self.point.get(i).abs()) / norm).collect();
                let lead = libm::pow(mags[0], p - 1.0);
                let rest = libm::pow(mags[1..].iter().map(|m| libm::pow(*m, p)).sum::<f64>(), 1.0 / q);
                1.0 - k * self.width - pinned_support(lead, rest, p, t.threshold)
            })
            .collect()
    }

    pub fn verify(&self) -> bool {
        self.margins().iter().all(|m| *m >= -1e-12)
    }
}
