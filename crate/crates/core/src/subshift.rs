//! Subshifts of finite type over `A^{Z^d}`, finite-window patterns,
//! cylinder sets, covers and partitions, and their symbolic operations.
//!
//! The shift convention is fixed once: `(gx)_h = x_{hg}`. Consequently
//! `translate(U, g) = {x : gx ∈ U}` moves cylinder coordinates by `+g`,
//! and `translate(translate(U, g), g⁻¹) = U` holds identically (pinned by
//! tests).

use crate::group::{FiniteSubset, GroupElement};
use crate::lang;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Default cap on symbolically materialized cylinder lists.
pub const DEFAULT_SYMBOLIC_BUDGET: usize = 1 << 22;

/// An ordered finite alphabet of distinct symbol tokens.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::BadParameter("alphabet must be non-empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::BadParameter(format!("duplicate symbol {s:?}")));
            }
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::BadParameter("alphabet too large".into()));
        }
        Ok(Alphabet { symbols })
    }

    pub fn binary() -> Self {
        Alphabet {
            symbols: vec!["0".into(), "1".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, idx: u8) -> &str {
        &self.symbols[idx as usize]
    }

    pub fn index_of(&self, token: &str) -> Result<u8> {
        self.symbols
            .iter()
            .position(|s| s == token)
            .map(|i| i as u8)
            .ok_or_else(|| Error::UnknownSymbol(token.into()))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.symbols)
    }
}

/// A finite pattern: a total symbol assignment on a finite shape.
/// Cells are kept sorted by coordinate, so equality and ordering are
/// canonical. The empty pattern denotes the full space when used as a
/// cylinder.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    cells: Vec<(GroupElement, u8)>,
}

impl Pattern {
    pub fn new(cells: impl IntoIterator<Item = (GroupElement, u8)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (g, s) in cells {
            if let Some(prev) = map.insert(g, s) {
                if prev != s {
                    return Err(Error::BadPattern(format!(
                        "conflicting symbols at {g:?}: {prev} vs {s}"
                    )));
                }
            }
        }
        Ok(Pattern {
            cells: map.into_iter().collect(),
        })
    }

    /// The empty pattern (full space as a cylinder).
    pub fn empty() -> Self {
        Pattern { cells: Vec::new() }
    }

    /// 1-d word `w` placed at consecutive coordinates starting at `at`.
    pub fn word(at: i64, w: &[u8]) -> Self {
        Pattern {
            cells: w
                .iter()
                .enumerate()
                .map(|(i, &s)| (GroupElement::z(at + i as i64), s))
                .collect(),
        }
    }

    pub fn cells(&self) -> &[(GroupElement, u8)] {
        &self.cells
    }

    pub fn is_empty_shape(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn shape(&self) -> Vec<GroupElement> {
        self.cells.iter().map(|(g, _)| *g).collect()
    }

    pub fn symbol_at(&self, g: &GroupElement) -> Option<u8> {
        self.cells
            .binary_search_by(|(h, _)| h.cmp(g))
            .ok()
            .map(|i| self.cells[i].1)
    }

    /// Shift all cells by `+g`.
    pub fn translate(&self, g: &GroupElement) -> Result<Pattern> {
        let cells = self
            .cells
            .iter()
            .map(|(h, s)| Ok((h.multiply(g)?, *s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Pattern { cells })
    }

    /// Merge two patterns into the cylinder of their intersection.
    /// Returns `None` when they conflict on a shared cell.
    pub fn merge(&self, other: &Pattern) -> Option<Pattern> {
        let mut map: BTreeMap<GroupElement, u8> = self.cells.iter().copied().collect();
        for (g, s) in &other.cells {
            if let Some(prev) = map.insert(*g, *s) {
                if prev != *s {
                    return None;
                }
            }
        }
        Some(Pattern {
            cells: map.into_iter().collect(),
        })
    }

    /// Whether `other` agrees with `self` on all of `self`'s cells.
    pub fn matches(&self, other: &Pattern) -> bool {
        self.cells
            .iter()
            .all(|(g, s)| other.symbol_at(g) == Some(*s))
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "[X]");
        }
        write!(f, "[")?;
        for (i, (g, s)) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}@{g:?}")?;
        }
        write!(f, "]")
    }
}

/// A subshift of finite type: configurations of `A^{Z^d}` avoiding every
/// translate of finitely many forbidden patterns.
#[derive(Clone)]
pub struct Sft {
    pub alphabet: Alphabet,
    pub d: usize,
    pub forbidden: Vec<Pattern>,
}

impl Sft {
    pub fn new(alphabet: Alphabet, d: usize, forbidden: Vec<Pattern>) -> Result<Self> {
        for p in &forbidden {
            for (g, s) in p.cells() {
                if g.dim() != d {
                    return Err(Error::DimensionMismatch(d, g.dim()));
                }
                if *s as usize >= alphabet.len() {
                    return Err(Error::UnknownSymbol(format!("symbol index {s}")));
                }
            }
            if p.is_empty_shape() {
                return Err(Error::BadPattern(
                    "a forbidden pattern with empty shape forbids everything".into(),
                ));
            }
        }
        Ok(Sft {
            alphabet,
            d,
            forbidden,
        })
    }

    /// The full shift on `k` symbols over `Z^d`.
    pub fn full_shift(k: usize, d: usize) -> Result<Self> {
        let alphabet = Alphabet::new((0..k).map(|i| i.to_string()).collect())?;
        Sft::new(alphabet, d, Vec::new())
    }

    /// The golden-mean shift: binary, `11` forbidden.
    pub fn golden_mean() -> Self {
        Sft::new(Alphabet::binary(), 1, vec![Pattern::word(0, &[1, 1])]).expect("static")
    }

    /// The two-point orbit of `…0101…`: binary with `00` and `11` forbidden.
    pub fn period_two_orbit() -> Self {
        Sft::new(
            Alphabet::binary(),
            1,
            vec![Pattern::word(0, &[0, 0]), Pattern::word(0, &[1, 1])],
        )
        .expect("static")
    }

    /// Product of two SFTs over the same `Z^d`: alphabet is the cartesian
    /// product, forbidden patterns lift componentwise (free component
    /// expanded over all symbols).
    pub fn product(a: &Sft, b: &Sft) -> Result<Sft> {
        if a.d != b.d {
            return Err(Error::DimensionMismatch(a.d, b.d));
        }
        let ka = a.alphabet.len();
        let kb = b.alphabet.len();
        let mut symbols = Vec::with_capacity(ka * kb);
        for i in 0..ka {
            for j in 0..kb {
                symbols.push(format!(
                    "({},{})",
                    a.alphabet.symbol(i as u8),
                    b.alphabet.symbol(j as u8)
                ));
            }
        }
        let pair = |i: u8, j: u8| i * kb as u8 + j;
        let mut forbidden = Vec::new();
        for p in &a.forbidden {
            // Expand the free second component over all fillings.
            let cells = p.cells();
            let mut fill = vec![0u8; cells.len()];
            loop {
                forbidden.push(Pattern::new(
                    cells
                        .iter()
                        .zip(&fill)
                        .map(|((g, s), &f)| (*g, pair(*s, f))),
                )?);
                let mut idx = cells.len();
                loop {
                    if idx == 0 {
                        fill = Vec::new();
                        break;
                    }
                    idx -= 1;
                    fill[idx] += 1;
                    if (fill[idx] as usize) < kb {
                        break;
                    }
                    fill[idx] = 0;
                }
                if fill.is_empty() {
                    break;
                }
            }
        }
        for p in &b.forbidden {
            let cells = p.cells();
            let mut fill = vec![0u8; cells.len()];
            loop {
                forbidden.push(Pattern::new(
                    cells
                        .iter()
                        .zip(&fill)
                        .map(|((g, s), &f)| (*g, pair(f, *s))),
                )?);
                let mut idx = cells.len();
                loop {
                    if idx == 0 {
                        fill = Vec::new();
                        break;
                    }
                    idx -= 1;
                    fill[idx] += 1;
                    if (fill[idx] as usize) < ka {
                        break;
                    }
                    fill[idx] = 0;
                }
                if fill.is_empty() {
                    break;
                }
            }
        }
        Sft::new(Alphabet::new(symbols)?, a.d, forbidden)
    }

    /// Whether the cylinder of `p` meets the subshift. Exact for `d = 1`;
    /// for `d ≥ 2` this is local admissibility on the `margin`-padded
    /// hull (sound for emptiness, an overcount for non-emptiness).
    pub fn cylinder_nonempty(&self, p: &Pattern, margin: i64) -> Result<bool> {
        if self.forbidden.is_empty() {
            // Full shift: every consistent pattern extends.
            return Ok(true);
        }
        if p.is_empty_shape() {
            return lang::language_nonempty(self);
        }
        let window = FiniteSubset::new(self.d, p.shape())?;
        let language = lang::language(self, &window, margin, DEFAULT_SYMBOLIC_BUDGET)?;
        Ok(language.words.iter().any(|w| {
            p.cells()
                .iter()
                .all(|(g, s)| w[language.position(g).expect("cell in window")] == *s)
        }))
    }
}

impl fmt::Debug for Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Sft(d={}, |A|={}, {} forbidden)",
            self.d,
            self.alphabet.len(),
            self.forbidden.len()
        )
    }
}

/// A finite union of cylinder sets, the Borel sets all covers are built
/// from. The empty list is the empty set; a cylinder with empty shape is
/// the full space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolicSet {
    pub cylinders: Vec<Pattern>,
}

impl SymbolicSet {
    pub fn new(cylinders: Vec<Pattern>) -> Self {
        SymbolicSet { cylinders }
    }

    pub fn full() -> Self {
        SymbolicSet {
            cylinders: vec![Pattern::empty()],
        }
    }

    pub fn empty() -> Self {
        SymbolicSet {
            cylinders: Vec::new(),
        }
    }

    pub fn cylinder(p: Pattern) -> Self {
        SymbolicSet { cylinders: vec![p] }
    }

    pub fn is_full_marker(&self) -> bool {
        self.cylinders.iter().any(|p| p.is_empty_shape())
    }

    pub fn shape_hull(&self) -> Vec<GroupElement> {
        let mut hull: Vec<GroupElement> = self
            .cylinders
            .iter()
            .flat_map(|p| p.shape())
            .collect();
        hull.sort();
        hull.dedup();
        hull
    }

    /// `{x : gx ∈ self}`: every cylinder shape moves by `+g`.
    pub fn translate(&self, g: &GroupElement) -> Result<SymbolicSet> {
        Ok(SymbolicSet {
            cylinders: self
                .cylinders
                .iter()
                .map(|p| p.translate(g))
                .collect::<Result<_>>()?,
        })
    }

    /// Symbolic intersection in cylinder-union normal form. Cylinders that
    /// conflict as patterns are dropped; SFT-emptiness is not decided here.
    pub fn intersect(&self, other: &SymbolicSet) -> SymbolicSet {
        let mut out = Vec::new();
        for a in &self.cylinders {
            for b in &other.cylinders {
                if let Some(m) = a.merge(b) {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            }
        }
        SymbolicSet { cylinders: out }
    }

    /// Whether the set meets the subshift.
    pub fn nonempty_in(&self, sft: &Sft, margin: i64) -> Result<bool> {
        for p in &self.cylinders {
            if sft.cylinder_nonempty(p, margin)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Whether the cover elements are open or merely Borel. Cylinder sets are
/// clopen in the product topology, so the distinction is bookkeeping for
/// reports.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoverKind {
    Open,
    Borel,
}

/// A finite family of symbolic sets meant to cover the space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cover {
    pub elements: Vec<SymbolicSet>,
    pub kind: CoverKind,
}

impl Cover {
    pub fn new(elements: Vec<SymbolicSet>, kind: CoverKind) -> Self {
        Cover { elements, kind }
    }

    pub fn open(elements: Vec<SymbolicSet>) -> Self {
        Cover::new(elements, CoverKind::Open)
    }

    /// The trivial cover `{X}`.
    pub fn trivial() -> Self {
        Cover::open(vec![SymbolicSet::full()])
    }

    /// The partition of the space by the symbol at `site`.
    pub fn symbol_partition(sft: &Sft, site: GroupElement) -> Partition {
        let elements = (0..sft.alphabet.len() as u8)
            .map(|s| SymbolicSet::cylinder(Pattern::new([(site, s)]).expect("single cell")))
            .collect();
        Partition(Cover::open(elements))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Union of all cylinder shapes.
    pub fn shape_hull(&self) -> Vec<GroupElement> {
        let mut hull: Vec<GroupElement> = self
            .elements
            .iter()
            .flat_map(|e| e.shape_hull())
            .collect();
        hull.sort();
        hull.dedup();
        hull
    }
}

/// A cover whose elements are pairwise disjoint on every sufficiently
/// large window. Construct via [`Partition::checked`] to verify, or wrap
/// directly when disjointness is known by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition(pub Cover);

impl Partition {
    pub fn cover(&self) -> &Cover {
        &self.0
    }

    pub fn into_cover(self) -> Cover {
        self.0
    }

    /// Verifies the partition property on `window` and wraps.
    pub fn checked(cover: Cover, sft: &Sft, window: &FiniteSubset) -> Result<Partition> {
        let model = crate::window::WindowModel::build(sft, window, 0, DEFAULT_SYMBOLIC_BUDGET)?;
        model.verify_partition(&cover)?;
        Ok(Partition(cover))
    }
}

/// Join of finitely many covers: all non-empty intersections
/// `U_1 ∩ … ∩ U_m`, one from each. Pattern-conflicting intersections are
/// dropped; intersections empty in the subshift are dropped via an exact
/// (d = 1) or margin-local (d ≥ 2) emptiness check.
pub fn join(covers: &[Cover], sft: &Sft, budget: usize) -> Result<Cover> {
    let mut elements = vec![SymbolicSet::full()];
    for cover in covers {
        let mut next = Vec::new();
        for acc in &elements {
            for e in &cover.elements {
                let meet = acc.intersect(e);
                if meet.cylinders.is_empty() {
                    continue;
                }
                if !meet.nonempty_in(sft, 1)? {
                    continue;
                }
                if !next.contains(&meet) {
                    next.push(meet);
                }
                if next.len() > budget {
                    return Err(Error::BudgetExceeded(next.len()));
                }
            }
        }
        elements = next;
    }
    let kind = if covers.iter().all(|c| c.kind == CoverKind::Open) {
        CoverKind::Open
    } else {
        CoverKind::Borel
    };
    Ok(Cover::new(elements, kind))
}

/// `U_F = ⋁_{g∈F} translate(U, g)` with `U_∅ = {X}`.
pub fn cover_pullback(cover: &Cover, f: &FiniteSubset, sft: &Sft, budget: usize) -> Result<Cover> {
    let translated = f
        .iter()
        .map(|g| {
            Ok(Cover::new(
                cover
                    .elements
                    .iter()
                    .map(|e| e.translate(g))
                    .collect::<Result<_>>()?,
                cover.kind,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    join(&translated, sft, budget)
}

/// The partition into non-empty Boolean atoms of a cover, computed on the
/// window language. Atom cells are returned as unions of full window
/// patterns.
pub fn atoms(cover: &Cover, window: &FiniteSubset, sft: &Sft) -> Result<Partition> {
    let model = crate::window::WindowModel::build(sft, window, 0, DEFAULT_SYMBOLIC_BUDGET)?;
    let bits = cover
        .elements
        .iter()
        .map(|e| model.restrict(e))
        .collect::<Result<Vec<_>>>()?;
    let atom_sets = crate::window::atoms_of(&bits, model.word_count());
    let elements = atom_sets
        .iter()
        .map(|a| SymbolicSet::new(a.iter_ones().map(|w| model.word_pattern(w)).collect()))
        .collect();
    Ok(Partition(Cover::new(elements, CoverKind::Borel)))
}

/// The return-time set restricted to a probe: `{g ∈ probe : U ∩ g⁻¹V ≠ ∅}`,
/// decided within the subshift.
pub fn return_set(
    sft: &Sft,
    u: &SymbolicSet,
    v: &SymbolicSet,
    probe: &FiniteSubset,
) -> Result<FiniteSubset> {
    let mut hits = Vec::new();
    for g in probe.iter() {
        let meet = u.intersect(&v.translate(g)?);
        if meet.nonempty_in(sft, 1)? {
            hits.push(*g);
        }
    }
    FiniteSubset::new(probe.dim(), hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn translate_round_trip_pins_convention() {
        let u = SymbolicSet::cylinder(Pattern::word(0, &[1]));
        let g = GroupElement::z(1);
        let moved = u.translate(&g).unwrap();
        assert_eq!(moved.cylinders[0], Pattern::new([(GroupElement::z(1), 1)]).unwrap());
        let back = moved.translate(&g.inverse()).unwrap();
        assert_eq!(back, u);
        // e_G and the full space are fixed.
        assert_eq!(u.translate(&GroupElement::z(0)).unwrap(), u);
        let full = SymbolicSet::full();
        assert_eq!(full.translate(&g).unwrap(), full);
    }

    #[test]
    fn join_product_structure() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let at0 = Cover::symbol_partition(&sft, GroupElement::z(0)).into_cover();
        let at1 = Cover::symbol_partition(&sft, GroupElement::z(1)).into_cover();
        let joined = join(&[at0.clone(), at1], &sft, 1 << 20).unwrap();
        assert_eq!(joined.len(), 4);
        // U ∨ {X} = U.
        let with_trivial = join(&[at0.clone(), Cover::trivial()], &sft, 1 << 20).unwrap();
        assert_eq!(with_trivial.elements, at0.elements);
    }

    #[test]
    fn join_is_associative_on_element_sets() {
        let sft = Sft::golden_mean();
        let a = Cover::symbol_partition(&sft, GroupElement::z(0)).into_cover();
        let b = Cover::symbol_partition(&sft, GroupElement::z(1)).into_cover();
        let c = Cover::open(vec![
            SymbolicSet::new(vec![Pattern::word(0, &[0, 0]), Pattern::word(0, &[0, 1])]),
            SymbolicSet::new(vec![Pattern::word(0, &[1, 0])]),
        ]);
        let left = join(&[join(&[a.clone(), b.clone()], &sft, 1 << 20).unwrap(), c.clone()], &sft, 1 << 20)
            .unwrap();
        let right = join(&[a, join(&[b, c], &sft, 1 << 20).unwrap()], &sft, 1 << 20).unwrap();
        let canon = |cover: &Cover| {
            let mut xs: Vec<Vec<Pattern>> = cover
                .elements
                .iter()
                .map(|e| {
                    let mut cs = e.cylinders.clone();
                    cs.sort();
                    cs
                })
                .collect();
            xs.sort();
            xs
        };
        assert_eq!(canon(&left), canon(&right));
    }

    #[test]
    fn golden_mean_join_drops_forbidden_atom() {
        let sft = Sft::golden_mean();
        let at0 = Cover::symbol_partition(&sft, GroupElement::z(0)).into_cover();
        let shifted = Cover::new(
            at0.elements
                .iter()
                .map(|e| e.translate(&GroupElement::z(1)).unwrap())
                .collect(),
            at0.kind,
        );
        let joined = join(&[at0, shifted], &sft, 1 << 20).unwrap();
        // Words 00, 01, 10 survive; 11 is excluded.
        assert_eq!(joined.len(), 3);
    }

    #[test]
    fn pullback_cases() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let u = Cover::symbol_partition(&sft, GroupElement::z(0)).into_cover();
        let empty = FiniteSubset::new(1, []).unwrap();
        let p_empty = cover_pullback(&u, &empty, &sft, 1 << 20).unwrap();
        assert_eq!(p_empty.len(), 1);
        assert!(p_empty.elements[0].is_full_marker());
        let ident = FiniteSubset::new(1, [GroupElement::z(0)]).unwrap();
        assert_eq!(cover_pullback(&u, &ident, &sft, 1 << 20).unwrap().elements, u.elements);
        let f2 = FiniteSubset::interval(0, 1);
        assert_eq!(cover_pullback(&u, &f2, &sft, 1 << 20).unwrap().len(), 4);
    }

    #[test]
    fn atoms_examples() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let window = FiniteSubset::interval(0, 1);
        // A partition is its own atom family.
        let part = Cover::symbol_partition(&sft, GroupElement::z(0)).into_cover();
        let a = atoms(&part, &window, &sft).unwrap();
        assert_eq!(a.cover().len(), 2);
        // {X, A} splits into {A, X∖A}.
        let cyl0 = SymbolicSet::cylinder(Pattern::word(0, &[0]));
        let ua = Cover::open(vec![SymbolicSet::full(), cyl0]);
        let a2 = atoms(&ua, &window, &sft).unwrap();
        assert_eq!(a2.cover().len(), 2);
        // Two overlapping unions covering the window language: 3 atoms,
        // matching the brute-force membership table over the 4 patterns
        // (00 ↦ {U1}, 01 ↦ {U1,U2}, 10 and 11 ↦ {U2}).
        let u1 = SymbolicSet::new(vec![Pattern::word(0, &[0, 0]), Pattern::word(0, &[0, 1])]);
        let u2 = SymbolicSet::new(vec![
            Pattern::word(0, &[0, 1]),
            Pattern::word(0, &[1, 0]),
            Pattern::word(0, &[1, 1]),
        ]);
        let a3 = atoms(&Cover::open(vec![u1.clone(), u2]), &window, &sft).unwrap();
        assert_eq!(a3.cover().len(), 3);
        // A non-covering family gains the all-complement atom.
        let u2_small = SymbolicSet::new(vec![Pattern::word(0, &[0, 1]), Pattern::word(0, &[1, 0])]);
        let a4 = atoms(&Cover::open(vec![u1, u2_small]), &window, &sft).unwrap();
        assert_eq!(a4.cover().len(), 4);
    }

    #[test]
    fn atoms_refine_the_cover() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let window = FiniteSubset::interval(0, 1);
        let u1 = SymbolicSet::new(vec![Pattern::word(0, &[0, 0]), Pattern::word(0, &[0, 1])]);
        let u2 = SymbolicSet::new(vec![
            Pattern::word(0, &[0, 1]),
            Pattern::word(0, &[1, 0]),
            Pattern::word(0, &[1, 1]),
        ]);
        let cover = Cover::open(vec![u1, u2]);
        let parts = atoms(&cover, &window, &sft).unwrap();
        let model = crate::window::WindowModel::build(&sft, &window, 0, 1 << 20).unwrap();
        let element_bits: Vec<_> = cover.elements.iter().map(|e| model.restrict(e).unwrap()).collect();
        for atom in &parts.cover().elements {
            let atom_bits = model.restrict(atom).unwrap();
            assert!(
                element_bits.iter().any(|e| atom_bits.is_subset(e)),
                "atom not inside any cover element"
            );
        }
    }

    #[test]
    fn return_set_examples() {
        let full = Sft::full_shift(2, 1).unwrap();
        let u = SymbolicSet::cylinder(Pattern::word(0, &[0]));
        let probe = FiniteSubset::interval(-3, 3);
        assert_eq!(return_set(&full, &u, &u, &probe).unwrap(), probe);

        let orbit = Sft::period_two_orbit();
        let v = SymbolicSet::cylinder(Pattern::word(0, &[1]));
        let probe01 = FiniteSubset::interval(0, 1);
        let hits = return_set(&orbit, &u, &v, &probe01).unwrap();
        assert_eq!(hits, FiniteSubset::new(1, [GroupElement::z(1)]).unwrap());
    }

    #[test]
    fn product_sft_lifts_constraints() {
        let full = Sft::full_shift(2, 1).unwrap();
        let orbit = Sft::period_two_orbit();
        let prod = Sft::product(&full, &orbit).unwrap();
        assert_eq!(prod.alphabet.len(), 4);
        // 2 forbidden words in the orbit factor × 4 fillings of the free
        // component each.
        assert_eq!(prod.forbidden.len(), 8);
        let window = FiniteSubset::interval(0, 2);
        let words = lang::language(&prod, &window, 0, 1 << 20).unwrap();
        // First component free (2^3), second component alternating (2).
        assert_eq!(words.words.len(), 16);
    }

    proptest! {
        #[test]
        fn translate_is_group_action(
            coords in prop::collection::btree_set(-5i64..5, 1..4),
            g in -6i64..6,
            h in -6i64..6,
        ) {
            let cells: Vec<(GroupElement, u8)> = coords
                .iter()
                .map(|&x| (GroupElement::z(x), (x.rem_euclid(2)) as u8))
                .collect();
            let u = SymbolicSet::new(vec![Pattern::new(cells).unwrap()]);
            let gh = GroupElement::z(g + h);
            let lhs = u.translate(&gh).unwrap();
            let rhs = u.translate(&GroupElement::z(h)).unwrap().translate(&GroupElement::z(g)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn join_is_commutative_on_elements(seed in 0u8..4) {
            let sft = Sft::full_shift(2, 1).unwrap();
            let u1 = SymbolicSet::new(vec![Pattern::word(0, &[seed & 1]), Pattern::word(0, &[1, 0])]);
            let u2 = SymbolicSet::new(vec![Pattern::word(1, &[seed >> 1]), Pattern::word(0, &[0, 1])]);
            let a = Cover::open(vec![u1.clone(), SymbolicSet::full()]);
            let b = Cover::open(vec![u2.clone(), u1]);
            let ab = join(&[a.clone(), b.clone()], &sft, 1 << 20).unwrap();
            let ba = join(&[b, a], &sft, 1 << 20).unwrap();
            // Compare as sets of cylinder sets.
            let canon = |c: &Cover| {
                let mut xs: Vec<Vec<Pattern>> = c
                    .elements
                    .iter()
                    .map(|e| {
                        let mut cs = e.cylinders.clone();
                        cs.sort();
                        cs
                    })
                    .collect();
                xs.sort();
                xs
            };
            prop_assert_eq!(canon(&ab), canon(&ba));
        }
    }
}
