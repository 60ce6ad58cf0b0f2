//! The acting group `G = Z^d`, finite subsets, set arithmetic, boundary
//! and invariance diagnostics, and Følner sequence generators.
//!
//! The dimension `d` is a run-time value between 1 and 3. All operations
//! are pure; sets iterate in lexicographic coordinate order so that greedy
//! constructions downstream are reproducible.

use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

pub const MAX_DIM: usize = 3;

/// An element of `Z^d`, stored inline for cheap copies. Coordinates beyond
/// the dimension are kept at zero so derived ordering and hashing agree
/// with lexicographic order on the first `d` coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    d: u8,
    c: [i64; MAX_DIM],
}

impl GroupElement {
    pub fn new(coords: &[i64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::BadParameter(format!(
                "dimension must be 1..={MAX_DIM}, got {}",
                coords.len()
            )));
        }
        let mut c = [0i64; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(GroupElement {
            d: coords.len() as u8,
            c,
        })
    }

    /// 1-dimensional element.
    pub fn z(x: i64) -> Self {
        GroupElement { d: 1, c: [x, 0, 0] }
    }

    /// 2-dimensional element.
    pub fn z2(x: i64, y: i64) -> Self {
        GroupElement { d: 2, c: [x, y, 0] }
    }

    pub fn identity(d: usize) -> Result<Self> {
        GroupElement::new(&vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.c[..self.d as usize]
    }

    /// Group law of `Z^d` (componentwise addition).
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let mut c = [0i64; MAX_DIM];
        for i in 0..self.dim() {
            c[i] = self.c[i] + other.c[i];
        }
        Ok(GroupElement { d: self.d, c })
    }

    pub fn inverse(&self) -> GroupElement {
        let mut c = [0i64; MAX_DIM];
        for i in 0..self.dim() {
            c[i] = -self.c[i];
        }
        GroupElement { d: self.d, c }
    }

    pub fn is_identity(&self) -> bool {
        self.coords().iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

/// A finite subset of `Z^d` in canonical (sorted, deduplicated) form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiniteSubset {
    d: usize,
    elems: BTreeSet<GroupElement>,
}

impl FiniteSubset {
    /// Builds a subset from elements; duplicates collapse. All elements
    /// must share the dimension `d`.
    pub fn new(d: usize, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(Error::BadParameter(format!("dimension {d} out of range")));
        }
        let mut elems = BTreeSet::new();
        for g in elements {
            if g.dim() != d {
                return Err(Error::DimensionMismatch(d, g.dim()));
            }
            elems.insert(g);
        }
        Ok(FiniteSubset { d, elems })
    }

    /// The interval `{lo, …, hi}` in `Z`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        FiniteSubset {
            d: 1,
            elems: (lo..=hi).map(GroupElement::z).collect(),
        }
    }

    /// The box `{0, …, side−1}^d`.
    pub fn box_at_origin(d: usize, side: i64) -> Result<Self> {
        if side < 1 {
            return Err(Error::BadParameter(format!("box side {side} < 1")));
        }
        let mut elems = BTreeSet::new();
        let mut idx = vec![0i64; d];
        loop {
            elems.insert(GroupElement::new(&idx)?);
            let mut k = d;
            loop {
                if k == 0 {
                    return Ok(FiniteSubset { d, elems });
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < side {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn singleton(g: GroupElement) -> Self {
        FiniteSubset {
            d: g.dim(),
            elems: std::iter::once(g).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elems.contains(g)
    }

    /// Elements in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elems.iter()
    }

    pub fn to_vec(&self) -> Vec<GroupElement> {
        self.elems.iter().copied().collect()
    }

    pub fn insert(&mut self, g: GroupElement) -> Result<()> {
        if g.dim() != self.d {
            return Err(Error::DimensionMismatch(self.d, g.dim()));
        }
        self.elems.insert(g);
        Ok(())
    }

    pub fn union(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.check_dim(other)?;
        Ok(FiniteSubset {
            d: self.d,
            elems: self.elems.union(&other.elems).copied().collect(),
        })
    }

    pub fn intersection(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.check_dim(other)?;
        Ok(FiniteSubset {
            d: self.d,
            elems: self.elems.intersection(&other.elems).copied().collect(),
        })
    }

    pub fn difference(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.check_dim(other)?;
        Ok(FiniteSubset {
            d: self.d,
            elems: self.elems.difference(&other.elems).copied().collect(),
        })
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.elems.is_subset(&other.elems)
    }

    pub fn is_disjoint(&self, other: &FiniteSubset) -> bool {
        self.elems.is_disjoint(&other.elems)
    }

    /// Translate by `g`: `{a·g : a ∈ self}`.
    pub fn translate(&self, g: &GroupElement) -> Result<FiniteSubset> {
        if g.dim() != self.d {
            return Err(Error::DimensionMismatch(self.d, g.dim()));
        }
        let elems = self
            .elems
            .iter()
            .map(|a| a.multiply(g))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(FiniteSubset { d: self.d, elems })
    }

    fn check_dim(&self, other: &FiniteSubset) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

/// `K F = {k·f : k ∈ K, f ∈ F}`, deduplicated.
pub fn set_product(k: &FiniteSubset, f: &FiniteSubset) -> Result<FiniteSubset> {
    if k.dim() != f.dim() {
        return Err(Error::DimensionMismatch(k.dim(), f.dim()));
    }
    let mut elems = BTreeSet::new();
    for a in k.iter() {
        for b in f.iter() {
            elems.insert(a.multiply(b)?);
        }
    }
    Ok(FiniteSubset { d: k.dim(), elems })
}

/// `K⁻¹ = {k⁻¹ : k ∈ K}`.
pub fn inverse_set(k: &FiniteSubset) -> FiniteSubset {
    FiniteSubset {
        d: k.dim(),
        elems: k.iter().map(|g| g.inverse()).collect(),
    }
}

/// The `K`-boundary `B(A,K) = {g : Kg ∩ A ≠ ∅ and Kg ∩ (G∖A) ≠ ∅}`.
///
/// `G∖A` is never materialized: `B(A,K) ⊆ K⁻¹A`, so it suffices to test
/// each `g ∈ K⁻¹A`.
pub fn boundary(a: &FiniteSubset, k: &FiniteSubset) -> Result<FiniteSubset> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let candidates = set_product(&inverse_set(k), a)?;
    let mut out = BTreeSet::new();
    for g in candidates.iter() {
        let mut meets_a = false;
        let mut meets_complement = false;
        for kk in k.iter() {
            if a.contains(&kk.multiply(g)?) {
                meets_a = true;
            } else {
                meets_complement = true;
            }
            if meets_a && meets_complement {
                break;
            }
        }
        if meets_a && meets_complement {
            out.insert(*g);
        }
    }
    Ok(FiniteSubset {
        d: a.dim(),
        elems: out,
    })
}

/// Boundary size and the `(K,δ)`-invariance ratio `|B(A,K)|/|A|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub boundary_size: usize,
    pub ratio: f64,
    /// Whether `ratio < δ` for the δ supplied at the call site.
    pub satisfied: bool,
}

pub fn invariance_report(a: &FiniteSubset, k: &FiniteSubset, delta: f64) -> Result<InvarianceReport> {
    let b = boundary(a, k)?;
    let ratio = b.len() as f64 / a.len() as f64;
    Ok(InvarianceReport {
        boundary_size: b.len(),
        ratio,
        satisfied: ratio < delta,
    })
}

/// `|B(A,K)|/|A|` without a δ threshold.
pub fn invariance_ratio(a: &FiniteSubset, k: &FiniteSubset) -> Result<f64> {
    Ok(invariance_report(a, k, f64::INFINITY)?.ratio)
}

/// `[K,ε]`-invariance: the interior count `|{g ∈ F : Kg ⊆ F}|` strictly
/// exceeds `(1−ε)|F|`.
pub fn bracket_invariant(f: &FiniteSubset, k: &FiniteSubset, epsilon: f64) -> Result<bool> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::BadParameter(format!("epsilon {epsilon} not in (0,1)")));
    }
    let mut interior = 0usize;
    'outer: for g in f.iter() {
        for kk in k.iter() {
            if !f.contains(&kk.multiply(g)?) {
                continue 'outer;
            }
        }
        interior += 1;
    }
    Ok(interior as f64 > (1.0 - epsilon) * f.len() as f64)
}

/// Følner sequence generators over `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FolnerSequence {
    /// `F_n = {0,…,n−1}^d`.
    Box { d: usize },
    /// `F_n = {a_n, a_n+1, …, a_n+n−1} ⊂ Z`; `offsets[i]` is `a_{i+1}`.
    ShiftedInterval { offsets: Vec<i64> },
    /// Explicit members, one per index.
    Custom { sets: Vec<FiniteSubset> },
}

impl FolnerSequence {
    pub fn dim(&self) -> usize {
        match self {
            FolnerSequence::Box { d } => *d,
            FolnerSequence::ShiftedInterval { .. } => 1,
            FolnerSequence::Custom { sets } => sets.first().map_or(1, |s| s.dim()),
        }
    }

    /// The `n`-th member, `n ≥ 1`.
    pub fn member(&self, n: usize) -> Result<FiniteSubset> {
        if n == 0 {
            return Err(Error::BadFolner("index must be >= 1".into()));
        }
        match self {
            FolnerSequence::Box { d } => FiniteSubset::box_at_origin(*d, n as i64),
            FolnerSequence::ShiftedInterval { offsets } => {
                let a = *offsets
                    .get(n - 1)
                    .ok_or_else(|| Error::BadFolner(format!("no offset for index {n}")))?;
                Ok(FiniteSubset::interval(a, a + n as i64 - 1))
            }
            FolnerSequence::Custom { sets } => {
                let f = sets
                    .get(n - 1)
                    .cloned()
                    .ok_or_else(|| Error::BadFolner(format!("no member for index {n}")))?;
                if f.len() < n {
                    return Err(Error::BadFolner(format!(
                        "member {n} has only {} elements; |F_n| >= n is required",
                        f.len()
                    )));
                }
                Ok(f)
            }
        }
    }
}

pub fn folner(seq: &FolnerSequence, n: usize) -> Result<FiniteSubset> {
    seq.member(n)
}
