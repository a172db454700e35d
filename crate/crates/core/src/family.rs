//! Adequate families of subsets of the positive integers.
//!
//! A family is adequate when it contains the empty set and every singleton,
//! is hereditary, and is closed under pointwise limits. Every representation
//! here decides membership of a finite set in finite time; finite windows
//! `{1..n}` are enough for everything downstream because heredity makes the
//! restriction `{A : A ⊆ {1..n}}` lossless for vectors supported in the window.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// Computations are restricted to the indices `{1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window(usize);

impl Window {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("window must contain at least one index"));
        }
        Ok(Window(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        1..=self.0
    }

    /// The smallest window containing both `self` and index `i`.
    pub fn covering(self, i: usize) -> Window {
        Window(self.0.max(i))
    }
}

/// Upper bound on the number of sets any single enumeration may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_sets: usize,
}

impl Budget {
    pub const DEFAULT_MAX_SETS: usize = 1_000_000;

    pub fn new(max_sets: usize) -> Self {
        Budget { max_sets }
    }

    fn charge(&self, count: usize) -> Result<()> {
        if count > self.max_sets {
            Err(Error::BudgetExceeded { limit: self.max_sets })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_MAX_SETS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaximalScope {
    /// Maximal among the members contained in the window.
    Window,
    /// Maximal in the whole family, listed when contained in the window.
    Global,
}

/// Cardinality of the star `{A ∈ 𝒜 : i ∈ A}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarSize {
    Finite(u64),
    Infinite,
}

impl StarSize {
    pub fn is_finite(self) -> bool {
        matches!(self, StarSize::Finite(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingEmpty,
    MissingSingleton(usize),
    NotHereditary { set: FiniteSet, missing: FiniteSet },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub window: Window,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An explicitly listed family, stored after hereditary closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitFamily {
    declared: Vec<FiniteSet>,
    members: BTreeSet<FiniteSet>,
    complete: bool,
}

impl ExplicitFamily {
    /// The sets exactly as supplied, before closure.
    pub fn declared(&self) -> &[FiniteSet] {
        &self.declared
    }

    /// The hereditary closure (singletons of unlisted indices are implicit).
    pub fn members(&self) -> impl Iterator<Item = &FiniteSet> {
        self.members.iter()
    }

    /// Whether the listing is declared to be the whole family, which makes
    /// global maximality decidable.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    fn support(&self) -> BTreeSet<usize> {
        self.members.iter().flat_map(|s| s.iter()).collect()
    }
}

const MAX_EXPLICIT_SET_LEN: usize = 24;
const MAX_DYADIC_DEPTH: u32 = 31;
const MAX_EXHAUSTIVE_WINDOW: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyRep {
    Explicit(ExplicitFamily),
    /// `{∅} ∪ {{i}}`; generates `c_0`.
    Singletons,
    /// Every subset; generates `ℓ_p`.
    AllSubsets,
    /// Schreier family of finite order. Order 1 is `|A| <= min A`; order
    /// `k + 1` takes unions of at most `min A` successive order-`k` sets.
    /// Orders above 1 are experimental.
    Schreier { order: u32 },
    /// Subsets of the evens or of the odds; generates `ℓ_1 ⊕_∞ ℓ_1` at `p = 1`.
    EvensOdds,
    /// Subsets of root-to-node chains of the binary tree coded in level
    /// order (root 1, children of `m` are `2m` and `2m + 1`). With a depth
    /// `d` only the first `d` levels form the tree and larger indices are
    /// isolated.
    DyadicBranches { depth: Option<u32> },
    /// Smallest hereditary, spreading family containing the generators.
    SpreadHereditaryClosure { generators: Vec<FiniteSet> },
}

impl FamilyRep {
    /// Closes `sets` under subsets; `complete` declares the listing exhaustive.
    pub fn explicit(sets: Vec<FiniteSet>, complete: bool) -> Result<Self> {
        let mut members = BTreeSet::new();
        members.insert(FiniteSet::empty());
        for set in &sets {
            if set.len() > MAX_EXPLICIT_SET_LEN {
                return Err(Error::precondition(format!(
                    "explicit set of size {} exceeds the closure limit {MAX_EXPLICIT_SET_LEN}",
                    set.len()
                )));
            }
            if !members.contains(set) {
                members.extend(set.subsets());
            }
        }
        Ok(FamilyRep::Explicit(ExplicitFamily { declared: sets, members, complete }))
    }

    pub fn schreier(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::precondition("Schreier order must be positive"));
        }
        Ok(FamilyRep::Schreier { order })
    }

    pub fn dyadic(depth: Option<u32>) -> Result<Self> {
        match depth {
            Some(0) => Err(Error::precondition("dyadic depth must be positive")),
            Some(d) if d > MAX_DYADIC_DEPTH => {
                Err(Error::precondition(format!("dyadic depth is limited to {MAX_DYADIC_DEPTH}")))
            }
            _ => Ok(FamilyRep::DyadicBranches { depth }),
        }
    }

    pub fn spread_closure(mut generators: Vec<FiniteSet>) -> Self {
        generators.sort();
        generators.dedup();
        FamilyRep::SpreadHereditaryClosure { generators }
    }

    /// Short human-readable name, e.g. `schreier:1`.
    pub fn name(&self) -> alloc::string::String {
        match self {
            FamilyRep::Explicit(_) => "explicit".into(),
            FamilyRep::Singletons => "singletons".into(),
            FamilyRep::AllSubsets => "all_subsets".into(),
            FamilyRep::Schreier { order } => format!("schreier:{order}"),
            FamilyRep::EvensOdds => "evens_odds".into(),
            FamilyRep::DyadicBranches { depth: None } => "dyadic".into(),
            FamilyRep::DyadicBranches { depth: Some(d) } => format!("dyadic:{d}"),
            FamilyRep::SpreadHereditaryClosure { .. } => "spread_hereditary_closure".into(),
        }
    }

    pub fn contains(&self, s: &FiniteSet) -> bool {
        let e = s.elements();
        if e.len() <= 1 {
            return true;
        }
        match self {
            FamilyRep::Explicit(fam) => fam.members.contains(s),
            FamilyRep::Singletons => false,
            FamilyRep::AllSubsets => true,
            FamilyRep::Schreier { order } => schreier_contains(*order, e),
            FamilyRep::EvensOdds => e.iter().all(|&i| i % 2 == e[0] % 2),
            FamilyRep::DyadicBranches { depth } => {
                let in_tree = match depth {
                    Some(d) => e.iter().all(|&i| i < 1usize << d),
                    None => true,
                };
                in_tree && e.windows(2).all(|w| is_ancestor(w[0], w[1]))
            }
            FamilyRep::SpreadHereditaryClosure { generators } => {
                generators.iter().any(|g| dominates(g, e))
            }
        }
    }

    /// Members contained in `support` (a strictly increasing index list),
    /// in shortlex order. Enumeration is pruned by heredity.
    pub fn members_within(&self, support: &[usize], budget: &Budget) -> Result<Vec<FiniteSet>> {
        let mut out = vec![FiniteSet::empty()];
        let mut stack = vec![(FiniteSet::empty(), 0usize)];
        while let Some((set, start)) = stack.pop() {
            for (pos, &i) in support.iter().enumerate().skip(start) {
                let candidate = set.with(i);
                if self.contains(&candidate) {
                    out.push(candidate.clone());
                    budget.charge(out.len())?;
                    stack.push((candidate, pos + 1));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Inclusion-maximal members contained in `support`.
    pub fn maximal_within(&self, support: &[usize], budget: &Budget) -> Result<Vec<FiniteSet>> {
        let members = self.members_within(support, budget)?;
        Ok(members
            .into_iter()
            .filter(|a| {
                support
                    .iter()
                    .filter(|&&j| !a.contains(j))
                    .all(|&j| !self.contains(&a.with(j)))
            })
            .collect())
    }

    /// `{A ∈ 𝒜 : A ⊆ {1..n}}`, including `∅`.
    pub fn restrict(&self, w: Window, budget: &Budget) -> Result<Vec<FiniteSet>> {
        let support: Vec<usize> = w.indices().collect();
        self.members_within(&support, budget)
    }

    pub fn maximal_sets(
        &self,
        w: Window,
        scope: MaximalScope,
        budget: &Budget,
    ) -> Result<Vec<FiniteSet>> {
        match scope {
            MaximalScope::Window => {
                let support: Vec<usize> = w.indices().collect();
                self.maximal_within(&support, budget)
            }
            MaximalScope::Global => {
                let mut out = Vec::new();
                for set in self.restrict(w, budget)? {
                    if self.is_globally_maximal(&set)? {
                        out.push(set);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Whether `s` is an inclusion-maximal member of the whole family.
    pub fn is_globally_maximal(&self, s: &FiniteSet) -> Result<bool> {
        if s.is_empty() || !self.contains(s) {
            return Ok(false);
        }
        let e = s.elements();
        Ok(match self {
            FamilyRep::Explicit(fam) => {
                if !fam.complete {
                    return Err(Error::Capability(
                        "global maximality is undecidable for an explicit family not declared complete"
                            .into(),
                    ));
                }
                fam.support().into_iter().filter(|&j| !s.contains(j)).all(|j| !self.contains(&s.with(j)))
            }
            FamilyRep::Singletons => e.len() == 1,
            FamilyRep::AllSubsets | FamilyRep::EvensOdds => false,
            FamilyRep::DyadicBranches { depth: None } => false,
            FamilyRep::DyadicBranches { depth: Some(d) } => {
                let tree_size = 1usize << d;
                (e.len() == 1 && e[0] >= tree_size) || e.len() == *d as usize
            }
            // Spreading: some extension exists iff adding `max + 1` works.
            FamilyRep::Schreier { .. } => {
                let next = s.last().unwrap_or(0) + 1;
                !self.contains(&s.with(next))
            }
            FamilyRep::SpreadHereditaryClosure { generators } => {
                !generators.iter().any(|g| g.len() > e.len() && dominates(g, e))
            }
        })
    }

    /// `|{A ∈ 𝒜 : i ∈ A}|`, decided from the representation.
    pub fn star_size(&self, i: usize) -> StarSize {
        assert!(i >= 1, "indices start at 1");
        match self {
            FamilyRep::Singletons => StarSize::Finite(1),
            FamilyRep::AllSubsets | FamilyRep::EvensOdds => StarSize::Infinite,
            FamilyRep::DyadicBranches { depth: None } => StarSize::Infinite,
            FamilyRep::Schreier { .. } => {
                if i == 1 {
                    StarSize::Finite(1)
                } else {
                    StarSize::Infinite
                }
            }
            FamilyRep::Explicit(fam) => {
                let count = fam.members.iter().filter(|s| s.contains(i)).count() as u64;
                StarSize::Finite(count.max(1))
            }
            FamilyRep::DyadicBranches { depth: Some(d) } => {
                if i >= 1usize << d {
                    return StarSize::Finite(1);
                }
                let level = dyadic_level(i);
                let below = *d as usize - 1 - level;
                let down = 2 * chain_count(below) - 1;
                StarSize::Finite((1u64 << level) * down)
            }
            FamilyRep::SpreadHereditaryClosure { generators } => {
                if generators.iter().any(|g| g.len() >= 2 && g.elements()[0] <= i) {
                    StarSize::Infinite
                } else {
                    StarSize::Finite(1)
                }
            }
        }
    }

    /// `Some(answer)` for rule families; for explicit families `Some(false)`
    /// when a spread inside the window leaves the family, `None` otherwise.
    pub fn is_spreading(&self, w: Window, budget: &Budget) -> Result<Option<bool>> {
        Ok(match self {
            FamilyRep::Singletons
            | FamilyRep::AllSubsets
            | FamilyRep::Schreier { .. }
            | FamilyRep::SpreadHereditaryClosure { .. } => Some(true),
            FamilyRep::EvensOdds | FamilyRep::DyadicBranches { .. } => Some(false),
            FamilyRep::Explicit(_) => {
                // Every spread is a chain of unit moves that stay in the window,
                // so checking unit moves decides the window question.
                for set in self.restrict(w, budget)? {
                    let e = set.elements();
                    for k in 0..e.len() {
                        let bumped = e[k] + 1;
                        let fits = if k + 1 < e.len() { bumped < e[k + 1] } else { bumped <= w.n() };
                        if fits {
                            let moved = set.without(e[k]).with(bumped);
                            if !self.contains(&moved) {
                                return Ok(Some(false));
                            }
                        }
                    }
                }
                None
            }
        })
    }

    /// Whether every member is finite. Families with an infinite member have
    /// an infinite inclusion-maximal member as well.
    pub fn finite_sets_only(&self) -> bool {
        !matches!(
            self,
            FamilyRep::AllSubsets | FamilyRep::EvensOdds | FamilyRep::DyadicBranches { depth: None }
        )
    }

    /// Whether `a` is the trace of some infinite member.
    pub fn extends_to_infinite_member(&self, a: &FiniteSet) -> bool {
        !self.finite_sets_only() && self.contains(a)
    }

    /// Trace on the window of a canonical infinite maximal member, if any:
    /// everything for all subsets, the evens, the leftmost branch.
    pub fn infinite_member_trace(&self, w: Window) -> Option<FiniteSet> {
        match self {
            FamilyRep::AllSubsets => Some(FiniteSet::range(1, w.n())),
            FamilyRep::EvensOdds => Some(FiniteSet::from_unsorted(w.indices().filter(|i| i % 2 == 0).collect())),
            FamilyRep::DyadicBranches { depth: None } => {
                let mut branch = Vec::new();
                let mut node = 1usize;
                while node <= w.n() {
                    branch.push(node);
                    node *= 2;
                }
                Some(FiniteSet::from_unsorted(branch))
            }
            _ => None,
        }
    }

    /// Checks `∅`, the singletons and heredity on the window. For explicit
    /// families the check applies to the sets as declared, before closure.
    pub fn validate(&self, w: Window) -> Result<ValidationReport> {
        let mut violations = Vec::new();
        match self {
            FamilyRep::Explicit(fam) => {
                let declared: BTreeSet<&FiniteSet> = fam.declared.iter().collect();
                if !declared.contains(&FiniteSet::empty()) {
                    violations.push(Violation::MissingEmpty);
                }
                for i in w.indices() {
                    if !declared.contains(&FiniteSet::singleton(i)) {
                        violations.push(Violation::MissingSingleton(i));
                    }
                }
                for set in &fam.declared {
                    if set.last().is_some_and(|m| m > w.n()) {
                        continue;
                    }
                    for i in set.iter() {
                        let sub = set.without(i);
                        if sub.len() >= 2 && !declared.contains(&sub) {
                            violations.push(Violation::NotHereditary { set: set.clone(), missing: sub });
                        }
                    }
                }
            }
            _ => {
                if w.n() > MAX_EXHAUSTIVE_WINDOW {
                    return Err(Error::BudgetExceeded { limit: 1 << MAX_EXHAUSTIVE_WINDOW });
                }
                if !self.contains(&FiniteSet::empty()) {
                    violations.push(Violation::MissingEmpty);
                }
                for i in w.indices() {
                    if !self.contains(&FiniteSet::singleton(i)) {
                        violations.push(Violation::MissingSingleton(i));
                    }
                }
                for set in FiniteSet::range(1, w.n()).subsets() {
                    if set.len() < 2 || !self.contains(&set) {
                        continue;
                    }
                    for i in set.iter() {
                        let sub = set.without(i);
                        if !self.contains(&sub) {
                            violations.push(Violation::NotHereditary { set: set.clone(), missing: sub });
                        }
                    }
                }
            }
        }
        Ok(ValidationReport { window: w, violations })
    }
}

/// Greedy split into consecutive order-`(k-1)` blocks; the greedy count is
/// minimal because each order is hereditary.
fn schreier_contains(order: u32, e: &[usize]) -> bool {
    if e.len() <= 1 {
        return true;
    }
    if order == 0 {
        return false;
    }
    let limit = e[0];
    let mut blocks = 0usize;
    let mut start = 0usize;
    while start < e.len() {
        let mut end = start + 1;
        while end < e.len() && schreier_contains(order - 1, &e[start..=end]) {
            end += 1;
        }
        blocks += 1;
        if blocks > limit {
            return false;
        }
        start = end;
    }
    true
}

/// `|e| <= |g|` and `g_t <= e_t` for every position `t`.
fn dominates(g: &FiniteSet, e: &[usize]) -> bool {
    g.len() >= e.len() && g.elements().iter().zip(e).all(|(gt, et)| gt <= et)
}

pub(crate) fn dyadic_level(node: usize) -> usize {
    (usize::BITS - 1 - node.leading_zeros()) as usize
}

fn is_ancestor(m: usize, n: usize) -> bool {
    m <= n && n >> (dyadic_level(n) - dyadic_level(m)) == m
}

/// Chains (the empty chain included) in a complete binary tree with `levels` levels.
fn chain_count(levels: usize) -> u64 {
    (0..levels).fold(1u64, |c, _| 2 * (2 * c - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn set(e: &[usize]) -> FiniteSet {
        FiniteSet::new(e.to_vec()).unwrap()
    }

    fn sets(list: &[&[usize]]) -> Vec<FiniteSet> {
        list.iter().map(|e| set(e)).collect()
    }

    fn w(n: usize) -> Window {
        Window::new(n).unwrap()
    }

    fn builtins() -> Vec<FamilyRep> {
        vec![
            FamilyRep::Singletons,
            FamilyRep::AllSubsets,
            FamilyRep::schreier(1).unwrap(),
            FamilyRep::schreier(2).unwrap(),
            FamilyRep::EvensOdds,
            FamilyRep::dyadic(None).unwrap(),
            FamilyRep::dyadic(Some(3)).unwrap(),
            FamilyRep::spread_closure(sets(&[&[2, 3], &[4, 5, 6]])),
            FamilyRep::explicit(sets(&[&[1, 2], &[2, 5, 7]]), true).unwrap(),
        ]
    }

    /// Brute force over all subsets of the window with the raw rule.
    fn restrict_oracle(rule: impl Fn(&[usize]) -> bool, n: usize) -> Vec<FiniteSet> {
        let mut out: Vec<FiniteSet> =
            FiniteSet::range(1, n).subsets().filter(|s| s.len() <= 1 || rule(s.elements())).collect();
        out.sort();
        out
    }

    #[test]
    fn schreier_membership() {
        let s1 = FamilyRep::schreier(1).unwrap();
        assert!(s1.contains(&set(&[3, 4, 5])));
        assert!(!s1.contains(&set(&[2, 3, 4])));
        assert!(s1.contains(&FiniteSet::empty()));
        for rep in builtins() {
            assert!(rep.contains(&FiniteSet::empty()));
        }
    }

    #[test]
    fn second_order_schreier() {
        let s2 = FamilyRep::schreier(2).unwrap();
        // {2,3} ∪ {4,5,6}: two S_1 blocks, min = 2.
        assert!(s2.contains(&set(&[2, 3, 4, 5, 6])));
        assert!(s2.contains(&set(&[2, 3, 4, 5, 6, 7])));
        // Needs three blocks {2,3},{4,5,6,7},{8} but min is 2.
        assert!(!s2.contains(&set(&[2, 3, 4, 5, 6, 7, 8])));
        assert!(!s2.contains(&set(&[1, 2])));
        assert!(s2.contains(&set(&[3, 4, 5, 6, 7, 8, 9, 10, 11])));
    }

    #[test]
    fn restrict_examples() {
        let budget = Budget::default();
        assert_eq!(
            FamilyRep::Singletons.restrict(w(3), &budget).unwrap(),
            sets(&[&[], &[1], &[2], &[3]])
        );
        let schreier = FamilyRep::schreier(1).unwrap();
        let oracle = restrict_oracle(|e| e.len() <= e[0], 3);
        assert_eq!(oracle, sets(&[&[], &[1], &[2], &[3], &[2, 3]]));
        assert_eq!(schreier.restrict(w(3), &budget).unwrap(), oracle);
        let eo = restrict_oracle(|e| e.iter().all(|i| i % 2 == 0) || e.iter().all(|i| i % 2 == 1), 4);
        assert_eq!(eo, sets(&[&[], &[1], &[2], &[3], &[4], &[1, 3], &[2, 4]]));
        assert_eq!(FamilyRep::EvensOdds.restrict(w(4), &budget).unwrap(), eo);
    }

    #[test]
    fn restrict_respects_budget() {
        let err = FamilyRep::AllSubsets.restrict(w(12), &Budget::new(100)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { limit: 100 });
    }

    #[test]
    fn maximal_set_examples() {
        let budget = Budget::default();
        let schreier = FamilyRep::schreier(1).unwrap();
        assert_eq!(
            schreier.maximal_sets(w(4), MaximalScope::Window, &budget).unwrap(),
            sets(&[&[1], &[2, 3], &[2, 4], &[3, 4]])
        );
        assert_eq!(
            schreier.maximal_sets(w(4), MaximalScope::Global, &budget).unwrap(),
            sets(&[&[1], &[2, 3], &[2, 4]])
        );
        assert_eq!(
            FamilyRep::Singletons.maximal_sets(w(2), MaximalScope::Global, &budget).unwrap(),
            sets(&[&[1], &[2]])
        );
        let open = FamilyRep::explicit(sets(&[&[1, 2]]), false).unwrap();
        assert!(matches!(
            open.maximal_sets(w(2), MaximalScope::Global, &budget),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn global_maximality_matches_schreier_rule() {
        let schreier = FamilyRep::schreier(1).unwrap();
        for s in schreier.restrict(w(9), &Budget::default()).unwrap() {
            let rule = s.first().is_some_and(|m| s.len() == m);
            assert_eq!(schreier.is_globally_maximal(&s).unwrap(), rule, "{s}");
        }
    }

    #[test]
    fn dyadic_maximal_sets_are_full_chains() {
        let d3 = FamilyRep::dyadic(Some(3)).unwrap();
        let global = d3.maximal_sets(w(9), MaximalScope::Global, &Budget::default()).unwrap();
        assert_eq!(
            global,
            sets(&[&[8], &[9], &[1, 2, 4], &[1, 2, 5], &[1, 3, 6], &[1, 3, 7]])
        );
    }

    #[test]
    fn star_examples() {
        assert_eq!(FamilyRep::Singletons.star_size(5), StarSize::Finite(1));
        assert_eq!(FamilyRep::schreier(1).unwrap().star_size(2), StarSize::Infinite);
        assert_eq!(FamilyRep::schreier(1).unwrap().star_size(1), StarSize::Finite(1));
        let explicit = FamilyRep::explicit(sets(&[&[], &[1], &[2], &[1, 2]]), true).unwrap();
        assert_eq!(explicit.star_size(1), StarSize::Finite(2));
        assert_eq!(explicit.star_size(7), StarSize::Finite(1));
    }

    #[test]
    fn dyadic_star_matches_enumeration() {
        for depth in 1..=4u32 {
            let rep = FamilyRep::dyadic(Some(depth)).unwrap();
            let n = (1usize << depth) + 2;
            let members = rep.restrict(w(n), &Budget::default()).unwrap();
            for i in 1..=n {
                let count = members.iter().filter(|s| s.contains(i)).count() as u64;
                assert_eq!(rep.star_size(i), StarSize::Finite(count), "depth {depth} node {i}");
            }
        }
    }

    #[test]
    fn spread_closure_star_depends_on_index() {
        let rep = FamilyRep::spread_closure(sets(&[&[2, 3]]));
        assert_eq!(rep.star_size(1), StarSize::Finite(1));
        assert_eq!(rep.star_size(2), StarSize::Infinite);
        let trivial = FamilyRep::spread_closure(sets(&[&[4]]));
        assert_eq!(trivial.star_size(9), StarSize::Finite(1));
    }

    #[test]
    fn star_agrees_with_window_count_when_contained() {
        let budget = Budget::default();
        for rep in builtins() {
            let members = rep.restrict(w(10), &budget).unwrap();
            for i in 1..=10 {
                if let StarSize::Finite(k) = rep.star_size(i) {
                    let counted = members.iter().filter(|s| s.contains(i)).count() as u64;
                    // The star sits inside the window here, except for explicit
                    // families, whose star is bounded by their listed support.
                    assert_eq!(counted, k, "{} at {i}", rep.name());
                }
            }
        }
    }

    #[test]
    fn spreading_examples() {
        let budget = Budget::default();
        assert_eq!(FamilyRep::schreier(1).unwrap().is_spreading(w(6), &budget).unwrap(), Some(true));
        assert_eq!(FamilyRep::EvensOdds.is_spreading(w(6), &budget).unwrap(), Some(false));
        let explicit = FamilyRep::explicit(sets(&[&[1], &[2]]), false).unwrap();
        assert_eq!(explicit.is_spreading(w(2), &budget).unwrap(), None);
        let broken = FamilyRep::explicit(sets(&[&[1, 2]]), false).unwrap();
        assert_eq!(broken.is_spreading(w(3), &budget).unwrap(), Some(false));
    }

    /// Sanity oracle for the rule answers: all spreads inside window 6.
    #[test]
    fn spreading_rules_survive_window_spreads() {
        let budget = Budget::default();
        for rep in [FamilyRep::schreier(1).unwrap(), FamilyRep::schreier(2).unwrap(), FamilyRep::Singletons] {
            let members = rep.restrict(w(6), &budget).unwrap();
            for a in &members {
                for b in FiniteSet::range(1, 6).subsets().filter(|b| b.len() == a.len()) {
                    if a.iter().zip(b.iter()).all(|(k, l)| k <= l) {
                        assert!(rep.contains(&b), "{} spread {a} -> {b}", rep.name());
                    }
                }
            }
        }
        let eo = FamilyRep::EvensOdds;
        assert!(eo.contains(&set(&[1, 3])) && !eo.contains(&set(&[2, 3])));
    }

    #[test]
    fn validation_examples() {
        let schreier = FamilyRep::schreier(1).unwrap();
        assert!(schreier.validate(w(5)).unwrap().is_valid());
        let raw = FamilyRep::explicit(sets(&[&[1, 2]]), false).unwrap();
        assert_eq!(
            raw.validate(w(2)).unwrap().violations,
            vec![Violation::MissingEmpty, Violation::MissingSingleton(1), Violation::MissingSingleton(2)]
        );
        let closed = FamilyRep::explicit(sets(&[&[], &[1], &[2], &[1, 2]]), false).unwrap();
        assert!(closed.validate(w(2)).unwrap().is_valid());
    }

    #[test]
    fn validation_flags_non_hereditary_declarations() {
        let raw = FamilyRep::explicit(sets(&[&[], &[1], &[2], &[3], &[1, 2, 3]]), false).unwrap();
        let report = raw.validate(w(3)).unwrap();
        assert_eq!(report.violations.len(), 3);
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::NotHereditary { missing, .. } if missing.len() == 2)));
    }

    #[test]
    fn heredity_and_monotone_restriction() {
        let budget = Budget::default();
        for rep in builtins() {
            for n in 1..=10 {
                let members = rep.restrict(w(n), &budget).unwrap();
                let lookup: BTreeSet<_> = members.iter().cloned().collect();
                assert!(lookup.contains(&FiniteSet::empty()));
                for i in 1..=n {
                    assert!(lookup.contains(&FiniteSet::singleton(i)));
                }
                for a in &members {
                    for i in a.iter() {
                        assert!(lookup.contains(&a.without(i)), "{} not hereditary at {a}", rep.name());
                    }
                }
                if n < 10 {
                    let bigger = rep.restrict(w(n + 1), &budget).unwrap();
                    let trimmed: Vec<_> = bigger.into_iter().filter(|a| a.last().is_none_or(|m| m <= n)).collect();
                    assert_eq!(trimmed, members);
                }
            }
        }
    }

    #[test]
    fn global_maximal_sets_sit_under_window_maximal_sets() {
        let budget = Budget::default();
        for rep in builtins() {
            for n in 1..=8 {
                let local = rep.maximal_sets(w(n), MaximalScope::Window, &budget).unwrap();
                let global = rep.maximal_sets(w(n), MaximalScope::Global, &budget).unwrap();
                for g in &global {
                    assert!(local.iter().any(|l| g.is_subset(l)), "{} {g}", rep.name());
                }
            }
        }
    }
}
