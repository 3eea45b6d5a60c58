//! The characteristic poset of a monomial ideal and interval partitions of it.
//!
//! For an ideal `I` with generators `v_1..v_m` and a bounding exponent `g`
//! with `lcm(v_i) <= g`, the poset holds every exponent `c <= g` divisible by
//! some generator. Partitions of the poset into intervals `[lo, hi]` realize
//! Stanley decompositions; the depth of a partition is the minimum over its
//! intervals of `rho(hi)`, the number of coordinates where `hi` saturates
//! `g`. In the squarefree case (`g = (1,..,1)`) elements are subsets and
//! `rho` is the cardinality.
//!
//! Elements are stored as mixed-radix codes sorted by `(rho, lex)`, which is
//! a linear extension of the componentwise order; membership is O(1). A
//! partition is verified by per-interval containment checks, a pairwise
//! interval-intersection test, and a cardinality count that rules out
//! overlap/gap cancellation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ideal::{Exponent, MonomialIdeal};

/// Default cap on `prod_j (g_j + 1)`, the size of the enumeration box.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

const DENSE_INDEX_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("bounding vector has {got} coordinates, ambient has {want}")]
    AmbientMismatch { got: usize, want: usize },
    #[error("bounding vector is below the lcm of the generators at x{var}")]
    BoundBelowLcm { var: usize },
    #[error("enumeration box of size {size} exceeds the cap {cap}")]
    TooLarge { size: u128, cap: u64 },
}

/// Why a claimed partition is not a partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// An element exhibiting the failure: doubly covered, uncovered, or
    /// outside the poset/box.
    pub witness: Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Overlap,
    Gap,
    OutOfPoset,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ViolationKind::Overlap => "overlap",
            ViolationKind::Gap => "gap",
            ViolationKind::OutOfPoset => "out-of-poset",
        };
        write!(f, "{kind} at {:?}", self.witness.coords())
    }
}

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("partition does not verify: {0}")]
    Unverified(Violation),
    #[error("operation defined for squarefree posets only")]
    NotSquarefree,
}

/// Count of coordinates where `d` saturates `g`; the number of free
/// directions of the Stanley space with top `d`. Equals `|d|` when
/// `g = (1,..,1)`.
pub fn rho(d: &Exponent, g: &Exponent) -> usize {
    debug_assert_eq!(d.len(), g.len());
    d.coords()
        .iter()
        .zip(g.coords())
        .filter(|(d_j, g_j)| d_j == g_j)
        .count()
}

enum ElementIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

const NO_ELEMENT: u32 = u32::MAX;

impl ElementIndex {
    fn get(&self, code: u64) -> Option<u32> {
        match self {
            ElementIndex::Dense(v) => match v.get(code as usize) {
                Some(&idx) if idx != NO_ELEMENT => Some(idx),
                _ => None,
            },
            ElementIndex::Sparse(m) => m.get(&code).copied(),
        }
    }
}

/// The finite poset of exponents `c <= g` divisible by some generator of the
/// ideal, with O(1) membership and elements sorted by `(rho, lex)`.
pub struct CharacteristicPoset {
    n: usize,
    g: Exponent,
    weights: Vec<u64>,
    codes: Vec<u64>,
    rhos: Vec<u32>,
    index: ElementIndex,
    ideal: MonomialIdeal,
    squarefree: bool,
}

impl CharacteristicPoset {
    /// Build the poset with the default enumeration cap. With no explicit
    /// bound, squarefree ideals get `g = (1,..,1)` and general ideals get
    /// the lcm exponent of their generators.
    pub fn build(
        ideal: &MonomialIdeal,
        g: Option<Exponent>,
    ) -> Result<Arc<Self>, PosetError> {
        Self::build_with_cap(ideal, g, DEFAULT_ENUM_CAP)
    }

    pub fn build_with_cap(
        ideal: &MonomialIdeal,
        g: Option<Exponent>,
        cap: u64,
    ) -> Result<Arc<Self>, PosetError> {
        let n = ideal.ambient();
        let lcm = ideal.lcm_exponent();
        let g = match g {
            Some(g) => {
                if g.len() != n {
                    return Err(PosetError::AmbientMismatch { got: g.len(), want: n });
                }
                if let Some(var) = (1..=n).find(|&v| g.get(v) < lcm.get(v)) {
                    return Err(PosetError::BoundBelowLcm { var });
                }
                g
            }
            None if ideal.is_squarefree() => {
                Exponent::new(vec![1; n])
            }
            None => lcm,
        };

        let mut box_size: u128 = 1;
        for v in 1..=n {
            box_size *= u128::from(g.get(v)) + 1;
        }
        if box_size > u128::from(cap) {
            return Err(PosetError::TooLarge { size: box_size, cap });
        }
        let box_size = box_size as u64;

        let mut weights = Vec::with_capacity(n);
        let mut w = 1u64;
        for v in 1..=n {
            weights.push(w);
            w *= u64::from(g.get(v)) + 1;
        }

        // Odometer over the whole box, keeping codes of divisible exponents.
        let gens = ideal.generators();
        let mut cur = vec![0u32; n];
        let mut code = 0u64;
        let mut elems: Vec<(u32, u64, u64)> = Vec::new(); // (rho, lexkey, code)
        loop {
            if gens.iter().any(|v| v.coords().iter().zip(&cur).all(|(a, b)| a <= b)) {
                let mut r = 0u32;
                let mut lexkey = 0u64;
                for v in 1..=n {
                    if cur[v - 1] == g.get(v) {
                        r += 1;
                    }
                    lexkey = lexkey * (u64::from(g.get(v)) + 1) + u64::from(cur[v - 1]);
                }
                elems.push((r, lexkey, code));
            }
            let mut j = 0;
            while j < n && cur[j] == g.get(j + 1) {
                code -= u64::from(cur[j]) * weights[j];
                cur[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
            cur[j] += 1;
            code += weights[j];
        }

        elems.sort_unstable_by_key(|&(r, lexkey, _)| (r, lexkey));
        let codes: Vec<u64> = elems.iter().map(|&(_, _, c)| c).collect();
        let rhos: Vec<u32> = elems.iter().map(|&(r, _, _)| r).collect();

        let index = if box_size <= DENSE_INDEX_LIMIT {
            let mut v = vec![NO_ELEMENT; box_size as usize];
            for (i, &c) in codes.iter().enumerate() {
                v[c as usize] = i as u32;
            }
            ElementIndex::Dense(v)
        } else {
            ElementIndex::Sparse(
                codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect(),
            )
        };

        let squarefree = (1..=n).all(|v| g.get(v) == 1);
        Ok(Arc::new(CharacteristicPoset {
            n,
            g,
            weights,
            codes,
            rhos,
            index,
            ideal: ideal.clone(),
            squarefree,
        }))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// The bounding exponent `g`.
    pub fn bound(&self) -> &Exponent {
        &self.g
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    /// True iff `g = (1,..,1)`, so elements are subsets of `{1..n}`.
    pub fn is_squarefree(&self) -> bool {
        self.squarefree
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Element codes in `(rho, lex)` order. For squarefree posets a code is
    /// exactly the subset mask.
    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn rho_at(&self, idx: usize) -> usize {
        self.rhos[idx] as usize
    }

    pub fn rho(&self, d: &Exponent) -> usize {
        rho(d, &self.g)
    }

    pub fn index_of_code(&self, code: u64) -> Option<u32> {
        self.index.get(code)
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        e.len() == self.n
            && e.divides_bound(&self.g)
            && self.index.get(self.encode(e)).is_some()
    }

    pub fn encode(&self, e: &Exponent) -> u64 {
        debug_assert_eq!(e.len(), self.n);
        e.coords()
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| u64::from(c) * w)
            .sum()
    }

    pub fn decode(&self, code: u64) -> Exponent {
        let mut coords = vec![0u32; self.n];
        let mut rest = code;
        for j in (0..self.n).rev() {
            coords[j] = (rest / self.weights[j]) as u32;
            rest %= self.weights[j];
        }
        Exponent::new(coords)
    }

    pub fn element(&self, idx: usize) -> Exponent {
        self.decode(self.codes[idx])
    }

    pub(crate) fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Exhaustive up-set check: every `w` with `c <= w <= g` for some element
    /// `c` is itself an element. Intended for tests.
    pub fn check_up_set(&self) -> bool {
        self.codes.iter().all(|&code| {
            let c = self.decode(code);
            for_each_in_box(c.coords(), self.g.coords(), &self.weights, |w| {
                self.index.get(w).is_some()
            })
        })
    }
}

impl fmt::Debug for CharacteristicPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CharacteristicPoset({} elements, g={:?}, {})",
            self.codes.len(),
            self.g.coords(),
            self.ideal
        )
    }
}

impl Exponent {
    /// Componentwise `<=` against a bound of the same length.
    pub(crate) fn divides_bound(&self, g: &Exponent) -> bool {
        self.len() == g.len() && self.divides(g)
    }
}

/// Visit the code of every exponent in the box `[lo, hi]` (componentwise).
/// The visitor returns `false` to abort; the function returns whether the
/// walk ran to completion.
pub(crate) fn for_each_in_box(
    lo: &[u32],
    hi: &[u32],
    weights: &[u64],
    mut f: impl FnMut(u64) -> bool,
) -> bool {
    debug_assert!(lo.iter().zip(hi).all(|(a, b)| a <= b));
    let n = lo.len();
    let mut cur = lo.to_vec();
    let mut code: u64 = lo
        .iter()
        .zip(weights)
        .map(|(&c, &w)| u64::from(c) * w)
        .sum();
    loop {
        if !f(code) {
            return false;
        }
        let mut j = 0;
        while j < n && cur[j] == hi[j] {
            code -= u64::from(cur[j] - lo[j]) * weights[j];
            cur[j] = lo[j];
            j += 1;
        }
        if j == n {
            return true;
        }
        cur[j] += 1;
        code += weights[j];
    }
}

/// An interval `[lo, hi]` of the poset, with an optional provenance label
/// naming the construction rule that produced it. Labels never affect
/// semantics.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Exponent,
    hi: Exponent,
    rule: Option<String>,
}

impl Interval {
    /// Panics unless `lo <= hi` componentwise with equal lengths; untrusted
    /// input must be validated before constructing intervals.
    pub fn new(lo: Exponent, hi: Exponent) -> Self {
        assert_eq!(lo.len(), hi.len(), "interval endpoints of unequal length");
        assert!(lo.divides(&hi), "interval lo not below hi");
        Interval { lo, hi, rule: None }
    }

    pub fn with_rule(mut self, rule: impl Into<String>) -> Self {
        self.rule = Some(rule.into());
        self
    }

    pub fn lo(&self) -> &Exponent {
        &self.lo
    }

    pub fn hi(&self) -> &Exponent {
        &self.hi
    }

    pub fn rule(&self) -> Option<&str> {
        self.rule.as_deref()
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    /// Number of lattice points in the box `[lo, hi]`.
    pub fn card(&self) -> u64 {
        self.lo
            .coords()
            .iter()
            .zip(self.hi.coords())
            .map(|(&a, &b)| u64::from(b - a) + 1)
            .product()
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        self.lo.divides(e) && e.divides(&self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?},{:?}]", self.lo.coords(), self.hi.coords())
    }
}

/// An ordered list of intervals claimed to partition a poset. Nothing is
/// assumed: [`IntervalPartition::verify`] decides.
#[derive(Clone)]
pub struct IntervalPartition {
    poset: Arc<CharacteristicPoset>,
    intervals: Vec<Interval>,
}

impl IntervalPartition {
    /// Panics if an interval's length differs from the poset ambient.
    pub fn new(poset: Arc<CharacteristicPoset>, intervals: Vec<Interval>) -> Self {
        for iv in &intervals {
            assert_eq!(iv.lo().len(), poset.ambient(), "interval/poset ambient mismatch");
        }
        IntervalPartition { poset, intervals }
    }

    pub fn poset(&self) -> &Arc<CharacteristicPoset> {
        &self.poset
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Check that the intervals are pairwise disjoint and cover the poset
    /// exactly.
    ///
    /// Disjointness is decided by the interval-intersection test (two boxes
    /// meet iff `max(lo1,lo2) <= min(hi1,hi2)`), not by enumeration. Exact
    /// coverage then follows from a cardinality count: each interval lies
    /// inside the poset (its lo is an element, its hi is below `g`, and the
    /// poset is an up-set), so disjoint intervals cover everything iff their
    /// sizes sum to the number of elements.
    pub fn verify(&self) -> Result<(), Violation> {
        let poset = &self.poset;
        let g = poset.bound();
        for iv in &self.intervals {
            if !iv.hi().divides(g) {
                return Err(Violation {
                    kind: ViolationKind::OutOfPoset,
                    witness: iv.hi().clone(),
                });
            }
            if !poset.contains(iv.lo()) {
                return Err(Violation {
                    kind: ViolationKind::OutOfPoset,
                    witness: iv.lo().clone(),
                });
            }
        }
        for i in 0..self.intervals.len() {
            for j in i + 1..self.intervals.len() {
                let a = &self.intervals[i];
                let b = &self.intervals[j];
                let meet_lo = a.lo().lcm(b.lo());
                if meet_lo.divides(a.hi()) && meet_lo.divides(b.hi()) {
                    return Err(Violation {
                        kind: ViolationKind::Overlap,
                        witness: meet_lo,
                    });
                }
            }
        }
        let covered: u64 = self.intervals.iter().map(Interval::card).sum();
        if covered != poset.len() as u64 {
            let witness = (0..poset.len())
                .map(|i| poset.element(i))
                .find(|e| !self.intervals.iter().any(|iv| iv.contains(e)))
                .expect("count mismatch implies an uncovered element");
            return Err(Violation { kind: ViolationKind::Gap, witness });
        }
        Ok(())
    }

    /// Minimum of `rho(hi)` over the intervals of a verified partition.
    pub fn sdepth(&self) -> Result<usize, PartitionError> {
        self.verify().map_err(PartitionError::Unverified)?;
        Ok(self.min_rho())
    }

    /// Minimum `rho(hi)` without verification; ambient count for the empty
    /// partition (of the empty poset).
    pub(crate) fn min_rho(&self) -> usize {
        self.intervals
            .iter()
            .map(|iv| self.poset.rho(iv.hi()))
            .min()
            .unwrap_or(self.poset.ambient())
    }

    /// True iff every interval top has `|hi| >= k`, and `lo = hi` whenever
    /// `|hi| > k`. Defined for squarefree posets; the partition must verify.
    pub fn is_upper_discrete(&self, k: usize) -> Result<bool, PartitionError> {
        if !self.poset.is_squarefree() {
            return Err(PartitionError::NotSquarefree);
        }
        self.verify().map_err(PartitionError::Unverified)?;
        Ok(self.intervals.iter().all(|iv| {
            let top = iv.hi().weight() as usize;
            top >= k && (top <= k || iv.is_singleton())
        }))
    }
}

impl fmt::Debug for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.intervals).finish()
    }
}
