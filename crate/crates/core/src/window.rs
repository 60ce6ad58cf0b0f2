//! Windowed computation model: a finite window, its language, and set
//! operations on the language as bitsets.
//!
//! Everything entropy-related reduces to finite set arithmetic over the
//! patterns of one window. Covers restrict to bitsets, joins over a
//! translate family become per-position membership tags, and Boolean
//! atoms are signature classes.

use crate::group::{FiniteSubset, GroupElement};
use crate::lang::{self, Language};
use crate::subshift::{Cover, Pattern, Sft, SymbolicSet};
use crate::{Error, Result};
use std::collections::HashMap;

/// A fixed-length bitset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bits {
    blocks: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len / 64 {
            b.blocks[i] = u64::MAX;
        }
        if !len.is_multiple_of(64) {
            b.blocks[len / 64] = (1u64 << (len % 64)) - 1;
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &Bits) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn intersects(&self, other: &Bits) -> bool {
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_count(&self, other: &Bits) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * 64 + t)
                }
            })
        })
    }
}

/// A window together with its admissible patterns and coordinate index.
pub struct WindowModel {
    window: Vec<GroupElement>,
    pos: HashMap<GroupElement, usize>,
    pub words: Vec<Vec<u8>>,
    pub exact: bool,
}

impl WindowModel {
    pub fn build(sft: &Sft, window: &FiniteSubset, margin: i64, budget: usize) -> Result<WindowModel> {
        let Language { window, words, exact } = lang::language(sft, window, margin, budget)?;
        let pos = window.iter().copied().enumerate().map(|(i, g)| (g, i)).collect();
        Ok(WindowModel {
            window,
            pos,
            words,
            exact,
        })
    }

    pub fn window(&self) -> &[GroupElement] {
        &self.window
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.pos.get(g).copied()
    }

    /// The full pattern of word `i` on the window.
    pub fn word_pattern(&self, i: usize) -> Pattern {
        Pattern::new(
            self.window
                .iter()
                .zip(&self.words[i])
                .map(|(g, &s)| (*g, s)),
        )
        .expect("window cells are distinct")
    }

    fn cylinder_positions(&self, p: &Pattern, shift: Option<&GroupElement>) -> Result<Vec<(usize, u8)>> {
        p.cells()
            .iter()
            .map(|(g, s)| {
                let at = match shift {
                    Some(t) => g.multiply(t)?,
                    None => *g,
                };
                self.position(&at)
                    .map(|i| (i, *s))
                    .ok_or_else(|| Error::WindowTooSmall(vec![at.coords().to_vec()]))
            })
            .collect()
    }

    /// Membership bitset of a symbolic set, optionally translated by `+g`.
    pub fn restrict_shifted(&self, set: &SymbolicSet, shift: Option<&GroupElement>) -> Result<Bits> {
        let mut bits = Bits::new(self.words.len());
        for cyl in &set.cylinders {
            let cols = self.cylinder_positions(cyl, shift)?;
            for (i, w) in self.words.iter().enumerate() {
                if cols.iter().all(|&(c, s)| w[c] == s) {
                    bits.set(i);
                }
            }
        }
        Ok(bits)
    }

    pub fn restrict(&self, set: &SymbolicSet) -> Result<Bits> {
        self.restrict_shifted(set, None)
    }

    /// Checks that the cover elements, restricted to this window, cover
    /// the language. Returns the element bitsets.
    pub fn verify_cover(&self, cover: &Cover) -> Result<Vec<Bits>> {
        let bits = cover
            .elements
            .iter()
            .map(|e| self.restrict(e))
            .collect::<Result<Vec<_>>>()?;
        let mut all = Bits::new(self.words.len());
        for b in &bits {
            all.union_with(b);
        }
        if all.count_ones() != self.words.len() {
            let missing = (0..self.words.len()).find(|&i| !all.get(i)).expect("uncovered");
            return Err(Error::NotACover(format!("{:?}", self.word_pattern(missing))));
        }
        Ok(bits)
    }

    /// Checks cover plus pairwise disjointness on the window.
    pub fn verify_partition(&self, cover: &Cover) -> Result<Vec<Bits>> {
        let bits = self.verify_cover(cover)?;
        for i in 0..bits.len() {
            for j in i + 1..bits.len() {
                if bits[i].intersects(&bits[j]) {
                    return Err(Error::NotAPartition(format!(
                        "elements {i} and {j} overlap on the window"
                    )));
                }
            }
        }
        Ok(bits)
    }

    /// Per-word, per-position membership masks for a cover pulled back
    /// over `positions`: bit `j` of `tags[w][p]` says word `w` lies in
    /// `translate(elements[j], positions[p])`.
    pub fn cover_tags(&self, elements: &[SymbolicSet], positions: &[GroupElement]) -> Result<Vec<Vec<u32>>> {
        if elements.len() > 32 {
            return Err(Error::BadParameter("more than 32 cover elements".into()));
        }
        let mut tags = vec![vec![0u32; positions.len()]; self.words.len()];
        for (pi, g) in positions.iter().enumerate() {
            for (ei, e) in elements.iter().enumerate() {
                let bits = self.restrict_shifted(e, Some(g))?;
                for w in bits.iter_ones() {
                    tags[w][pi] |= 1 << ei;
                }
            }
        }
        Ok(tags)
    }

    /// Elements of the pullback join `⋁_p translate(U, positions[p])`.
    /// The expansion cost is the total word-element incidence and is
    /// guarded by `budget`.
    pub fn join_elements(
        &self,
        elements: &[SymbolicSet],
        positions: &[GroupElement],
        budget: usize,
    ) -> Result<JoinedCover> {
        let tags = self.cover_tags(elements, positions)?;
        self.join_elements_from_tags(&tags, budget)
    }

    /// As [`join_elements`](Self::join_elements), but from precomputed
    /// per-word per-position membership masks.
    pub fn join_elements_from_tags(&self, tags: &[Vec<u32>], budget: usize) -> Result<JoinedCover> {
        let positions = tags.first().map_or(0, |t| t.len());
        for (w, t) in tags.iter().enumerate() {
            if t.contains(&0) {
                return Err(Error::NotACover(format!("{:?}", self.word_pattern(w))));
            }
        }
        // Partition fast path: unique membership at every position means
        // the join elements partition the language into profile classes.
        if tags.iter().all(|t| t.iter().all(|m| m.count_ones() == 1)) {
            let mut groups: HashMap<&[u32], Vec<u32>> = HashMap::new();
            for (w, t) in tags.iter().enumerate() {
                groups.entry(t.as_slice()).or_default().push(w as u32);
            }
            let mut keys: Vec<&[u32]> = groups.keys().copied().collect();
            keys.sort();
            return Ok(JoinedCover::Partition {
                groups: keys.into_iter().map(|k| groups[k].clone()).collect(),
            });
        }
        let mut members: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
        let mut incidence = 0usize;
        let mut profile = vec![0u8; positions];
        for (w, t) in tags.iter().enumerate() {
            // Expand the product of per-position tag sets.
            let mut depth = 0usize;
            let mut iters: Vec<u32> = vec![t[0]];
            while let Some(mask) = iters.last_mut() {
                if *mask == 0 {
                    iters.pop();
                    depth = depth.wrapping_sub(1);
                    continue;
                }
                let e = mask.trailing_zeros() as u8;
                *mask &= *mask - 1;
                profile[depth] = e;
                if depth + 1 == positions {
                    incidence += 1;
                    if incidence > budget {
                        return Err(Error::BudgetExceeded(incidence));
                    }
                    members.entry(profile.clone()).or_default().push(w as u32);
                } else {
                    depth += 1;
                    iters.push(t[depth]);
                }
            }
        }
        let mut keys: Vec<&Vec<u8>> = members.keys().collect();
        keys.sort();
        let mut out: Vec<Bits> = Vec::with_capacity(keys.len());
        let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
        for k in keys {
            let mut b = Bits::new(self.words.len());
            for &w in &members[k] {
                b.set(w as usize);
            }
            // Distinct profiles can carve out the same set; keep one.
            if seen.insert(b.blocks.clone(), ()).is_none() {
                out.push(b);
            }
        }
        Ok(JoinedCover::General { elements: out })
    }

    /// For a partition pulled back over `positions`: the cell index of
    /// each word at each position. Errors when membership is not unique,
    /// i.e. the family is not a partition on this window.
    pub fn partition_cell_ids(
        &self,
        cells: &[SymbolicSet],
        positions: &[GroupElement],
    ) -> Result<Vec<Vec<u16>>> {
        let tags = self.cover_tags(cells, positions)?;
        let mut ids = vec![vec![0u16; positions.len()]; self.words.len()];
        for (w, t) in tags.iter().enumerate() {
            for (p, &mask) in t.iter().enumerate() {
                if mask.count_ones() != 1 {
                    return Err(Error::NotAPartition(format!(
                        "word {:?} lies in {} cells at position {:?}",
                        self.word_pattern(w),
                        mask.count_ones(),
                        positions[p],
                    )));
                }
                ids[w][p] = mask.trailing_zeros() as u16;
            }
        }
        Ok(ids)
    }
}

/// A pullback join cover in the cheapest faithful representation: word
/// groups when the join is a partition of the language, bitsets when
/// elements overlap.
#[derive(Clone, Debug)]
pub enum JoinedCover {
    Partition { groups: Vec<Vec<u32>> },
    General { elements: Vec<Bits> },
}

impl JoinedCover {
    pub fn len(&self) -> usize {
        match self {
            JoinedCover::Partition { groups } => groups.len(),
            JoinedCover::General { elements } => elements.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_partition(&self) -> bool {
        matches!(self, JoinedCover::Partition { .. })
    }

    /// Per-element total mass.
    pub fn element_masses(&self, masses: &[f64]) -> Vec<f64> {
        match self {
            JoinedCover::Partition { groups } => groups
                .iter()
                .map(|g| g.iter().map(|&w| masses[w as usize]).sum())
                .collect(),
            JoinedCover::General { elements } => elements
                .iter()
                .map(|e| e.iter_ones().map(|w| masses[w]).sum())
                .collect(),
        }
    }

    /// Expands to bitsets (costly for huge partitions; callers prefer the
    /// group form when possible).
    pub fn to_bits(&self, universe: usize) -> Vec<Bits> {
        match self {
            JoinedCover::Partition { groups } => groups
                .iter()
                .map(|g| {
                    let mut b = Bits::new(universe);
                    for &w in g {
                        b.set(w as usize);
                    }
                    b
                })
                .collect(),
            JoinedCover::General { elements } => elements.clone(),
        }
    }
}

/// Non-empty Boolean atoms of a family of sets over a `len`-point
/// universe: words grouped by their membership signature.
pub fn atoms_of(elements: &[Bits], len: usize) -> Vec<Bits> {
    let mut groups: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for w in 0..len {
        let mut sig = vec![0u64; elements.len().div_ceil(64)];
        for (e, bits) in elements.iter().enumerate() {
            if bits.get(w) {
                sig[e / 64] |= 1 << (e % 64);
            }
        }
        groups.entry(sig).or_default().push(w);
    }
    let mut keys: Vec<&Vec<u64>> = groups.keys().collect();
    keys.sort();
    keys.into_iter()
        .map(|k| {
            let mut b = Bits::new(len);
            for &w in &groups[k] {
                b.set(w);
            }
            b
        })
        .collect()
}

/// Minkowski sum `A ⊕ B` of finite subsets (window of a pullback).
pub fn minkowski(a: &FiniteSubset, b: &[GroupElement]) -> Result<FiniteSubset> {
    let mut out = Vec::new();
    for g in a.iter() {
        for h in b {
            out.push(g.multiply(h)?);
        }
    }
    if b.is_empty() {
        for g in a.iter() {
            out.push(*g);
        }
    }
    FiniteSubset::new(a.dim(), out)
}
