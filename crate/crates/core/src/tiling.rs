//! Ornstein–Weiss covering machinery: ε-disjoint families, δ-even
//! covers, the greedy disjointification step, and the full ε-quasi-tiling
//! construction.
//!
//! The construction is greedy and deterministic (candidates in decreasing
//! size, then lexicographic order), and every returned tiling re-verifies
//! its definitional postconditions by independent set arithmetic rather
//! than trusting the derivation.

use crate::group::{invariance_ratio, inverse_set, set_product, FiniteSubset, GroupElement};
use crate::{Error, Result};
use std::collections::HashSet;

/// Witness for ε-disjointness: cores `B_i ⊆ A_i` with `|B_i| > (1−ε)|A_i|`
/// and pairwise disjoint cores.
#[derive(Clone, Debug)]
pub struct DisjointFamilyWitness {
    pub members: Vec<FiniteSubset>,
    pub cores: Vec<FiniteSubset>,
    pub epsilon: f64,
}

impl DisjointFamilyWitness {
    /// Re-checks all invariants from scratch.
    pub fn verify(&self) -> Result<()> {
        if self.members.len() != self.cores.len() {
            return Err(Error::BadParameter("witness lengths differ".into()));
        }
        for (a, b) in self.members.iter().zip(&self.cores) {
            if !b.is_subset(a) {
                return Err(Error::BadParameter("core escapes its member".into()));
            }
            if b.len() as f64 <= (1.0 - self.epsilon) * a.len() as f64 {
                return Err(Error::BadParameter("core ratio fails".into()));
            }
        }
        for i in 0..self.cores.len() {
            for j in i + 1..self.cores.len() {
                if !self.cores[i].is_disjoint(&self.cores[j]) {
                    return Err(Error::BadParameter("cores overlap".into()));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of the greedy ε-disjointness check: a witness, or the index of
/// the first member whose unclaimed part is too small.
#[derive(Clone, Debug)]
pub enum DisjointCheck {
    Witness(DisjointFamilyWitness),
    FailedAt(usize),
}

/// Greedy ε-disjointness certification in family order: `B_i` is `A_i`
/// minus everything claimed earlier. Greedy success is sufficient but not
/// necessary; families built by [`select_disjoint_subcover`] succeed by
/// construction.
pub fn epsilon_disjoint_check(family: &[FiniteSubset], epsilon: f64) -> Result<DisjointCheck> {
    if family.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::BadParameter(format!("epsilon {epsilon} not in (0,1)")));
    }
    let d = family[0].dim();
    let mut claimed: HashSet<GroupElement> = HashSet::new();
    let mut cores = Vec::with_capacity(family.len());
    for (i, a) in family.iter().enumerate() {
        let core_elems: Vec<GroupElement> = a.iter().filter(|g| !claimed.contains(g)).copied().collect();
        if core_elems.len() as f64 <= (1.0 - epsilon) * a.len() as f64 {
            return Ok(DisjointCheck::FailedAt(i));
        }
        claimed.extend(core_elems.iter().copied());
        cores.push(FiniteSubset::new(d, core_elems)?);
    }
    let witness = DisjointFamilyWitness {
        members: family.to_vec(),
        cores,
        epsilon,
    };
    witness.verify()?;
    Ok(DisjointCheck::Witness(witness))
}

/// Witness for a δ-even cover: members inside the target, pointwise
/// multiplicity at most `M`, total size at least `(1−δ)·M·|target|`.
#[derive(Clone, Debug)]
pub struct EvenCoverWitness {
    pub members: Vec<FiniteSubset>,
    pub target: FiniteSubset,
    pub multiplicity_bound: usize,
    pub delta: f64,
}

impl EvenCoverWitness {
    pub fn verify(&self) -> Result<()> {
        let mut multiplicity: std::collections::HashMap<GroupElement, usize> =
            std::collections::HashMap::new();
        let mut total = 0usize;
        for m in &self.members {
            if !m.is_subset(&self.target) {
                return Err(Error::NotAnEvenCover("member escapes the target".into()));
            }
            total += m.len();
            for g in m.iter() {
                *multiplicity.entry(*g).or_insert(0) += 1;
            }
        }
        if let Some((g, &m)) = multiplicity.iter().find(|(_, &m)| m > self.multiplicity_bound) {
            return Err(Error::NotAnEvenCover(format!(
                "multiplicity {m} at {g:?} exceeds M={}",
                self.multiplicity_bound
            )));
        }
        if (total as f64) < (1.0 - self.delta) * self.multiplicity_bound as f64 * self.target.len() as f64 {
            return Err(Error::NotAnEvenCover(format!(
                "total size {total} below (1−δ)·M·|A|"
            )));
        }
        Ok(())
    }
}

/// The right translates of `S` that lie inside `A`, `{Sg : Sg ⊆ A}`,
/// returned as a verified δ-even cover with `M = |S|`.
///
/// The classical sufficient hypothesis is that `A` is `(SS⁻¹, δ)`-
/// invariant; the even-cover conditions are checked directly here, and a
/// failure reports the measured invariance ratio as a diagnostic.
pub fn even_cover_translates(
    s: &FiniteSubset,
    a: &FiniteSubset,
    delta: f64,
) -> Result<EvenCoverWitness> {
    let d = s.dim();
    let e = GroupElement::identity(d)?;
    if !s.contains(&e) {
        return Err(Error::BadParameter("shape must contain the identity".into()));
    }
    let members = translates_inside(s, a)?;
    let witness = EvenCoverWitness {
        members,
        target: a.clone(),
        multiplicity_bound: s.len(),
        delta,
    };
    if let Err(err) = witness.verify() {
        let ratio = invariance_ratio(a, &set_product(s, &inverse_set(s))?)?;
        return Err(Error::NotAnEvenCover(format!(
            "{err}; measured (SS⁻¹)-invariance ratio {ratio:.6} vs δ={delta}"
        )));
    }
    Ok(witness)
}

/// `{Sg : g ∈ G, Sg ⊆ A}`; `g` ranges over the finite superset `S⁻¹A`.
fn translates_inside(s: &FiniteSubset, a: &FiniteSubset) -> Result<Vec<FiniteSubset>> {
    let candidates = set_product(&inverse_set(s), a)?;
    let mut out = Vec::new();
    for g in candidates.iter() {
        let translate = s.translate(g)?;
        if translate.is_subset(a) {
            out.push(translate);
        }
    }
    Ok(out)
}

/// Greedy ε-disjoint sub-collection of a δ-even cover that
/// `ε(1−δ)`-covers the target: candidates in decreasing size then
/// lexicographic order, admitted when the unclaimed part strictly exceeds
/// `(1−ε)` of the candidate.
pub fn select_disjoint_subcover(
    family: &[FiniteSubset],
    a: &FiniteSubset,
    epsilon: f64,
    delta: f64,
) -> Result<DisjointFamilyWitness> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::BadParameter(format!("epsilon {epsilon} not in (0,1)")));
    }
    // Even-cover precondition with the least valid multiplicity bound
    // (the definition is existential in M).
    let mut multiplicity: std::collections::HashMap<GroupElement, usize> =
        std::collections::HashMap::new();
    for m in family {
        for g in m.iter() {
            *multiplicity.entry(*g).or_insert(0) += 1;
        }
    }
    let witness = EvenCoverWitness {
        members: family.to_vec(),
        target: a.clone(),
        multiplicity_bound: multiplicity.values().copied().max().unwrap_or(1),
        delta,
    };
    witness.verify()?;
    let selected = greedy_admission(family, epsilon);
    let members: Vec<FiniteSubset> = selected.iter().map(|&i| family[i].clone()).collect();
    let witness = match epsilon_disjoint_check(&members, epsilon)? {
        DisjointCheck::Witness(w) => w,
        DisjointCheck::FailedAt(i) => {
            return Err(Error::BadParameter(format!(
                "greedy admission produced a non-ε-disjoint family at index {i}"
            )))
        }
    };
    // Covering bound of the disjointification step.
    let mut covered: HashSet<GroupElement> = HashSet::new();
    for m in &witness.members {
        covered.extend(m.iter().copied());
    }
    let covered_in_a = a.iter().filter(|g| covered.contains(g)).count();
    let bound = epsilon * (1.0 - delta) * a.len() as f64;
    if (covered_in_a as f64) < bound - 1e-9 {
        return Err(Error::BadParameter(format!(
            "sub-collection covers {covered_in_a} points, below ε(1−δ)|A| = {bound:.3}"
        )));
    }
    Ok(witness)
}

/// Greedy admission order: decreasing size, then lexicographic.
fn greedy_admission(family: &[FiniteSubset], epsilon: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by(|&i, &j| {
        family[j]
            .len()
            .cmp(&family[i].len())
            .then_with(|| family[i].cmp(&family[j]))
    });
    let mut claimed: HashSet<GroupElement> = HashSet::new();
    let mut admitted = Vec::new();
    for &i in &order {
        let unclaimed = family[i].iter().filter(|g| !claimed.contains(g)).count();
        if unclaimed as f64 > (1.0 - epsilon) * family[i].len() as f64 {
            admitted.push(i);
            claimed.extend(family[i].iter().copied());
        }
    }
    admitted
}

/// Parameters for the quasi-tiling construction: the smallest `k` with
/// `(1−ε/2)^k < ε`, and `δ = ε/(4·6^k)` (half the classical bound, for
/// slack).
pub fn choose_tiling_parameters(epsilon: f64) -> Result<(usize, f64)> {
    if !(0.0 < epsilon && epsilon < 0.25) {
        return Err(Error::BadParameter(format!("epsilon {epsilon} not in (0, 1/4)")));
    }
    let base = 1.0 - epsilon / 2.0;
    let mut k = 1usize;
    let mut power = base;
    while power >= epsilon {
        k += 1;
        power *= base;
        if k > 10_000 {
            return Err(Error::BadParameter("parameter search diverged".into()));
        }
    }
    let delta = epsilon / (2.0 * 6f64.powi(k as i32) * 2.0);
    Ok((k, delta))
}

/// An ε-quasi-tiling: translates of the shapes placed at the tiling
/// centers, ε-disjoint within each shape, disjoint across shapes, and
/// covering a `(1−ε)` fraction of the target.
#[derive(Clone, Debug)]
pub struct QuasiTiling {
    pub shapes: Vec<FiniteSubset>,
    pub centers: Vec<FiniteSubset>,
    pub target: FiniteSubset,
    pub epsilon: f64,
    pub coverage: f64,
    /// Whether coverage reached `1−ε`.
    pub ok: bool,
}

impl QuasiTiling {
    /// Independent verification of the three definitional conditions:
    /// containment plus per-shape ε-disjointness, cross-shape
    /// disjointness, and the coverage fraction.
    pub fn verify(&self) -> Result<()> {
        let mut all_extents: Vec<FiniteSubset> = Vec::new();
        for (shape, centers) in self.shapes.iter().zip(&self.centers) {
            let translates: Vec<FiniteSubset> = centers
                .iter()
                .map(|c| shape.translate(c))
                .collect::<Result<_>>()?;
            let mut extent_union: HashSet<GroupElement> = HashSet::new();
            for t in &translates {
                if !t.is_subset(&self.target) {
                    return Err(Error::BadParameter("tile escapes the target".into()));
                }
                extent_union.extend(t.iter().copied());
            }
            if !translates.is_empty() {
                match epsilon_disjoint_check(&translates, self.epsilon)? {
                    DisjointCheck::Witness(_) => {}
                    DisjointCheck::FailedAt(i) => {
                        return Err(Error::BadParameter(format!(
                            "shape tiles are not ε-disjoint (translate {i})"
                        )))
                    }
                }
            }
            all_extents.push(FiniteSubset::new(
                self.target.dim(),
                extent_union,
            )?);
        }
        for i in 0..all_extents.len() {
            for j in i + 1..all_extents.len() {
                if !all_extents[i].is_disjoint(&all_extents[j]) {
                    return Err(Error::BadParameter(format!(
                        "extents of shapes {i} and {j} overlap"
                    )));
                }
            }
        }
        let mut covered: HashSet<GroupElement> = HashSet::new();
        for e in &all_extents {
            covered.extend(e.iter().copied());
        }
        let covered_in_target = self.target.iter().filter(|g| covered.contains(g)).count();
        let coverage = covered_in_target as f64 / self.target.len() as f64;
        if (coverage - self.coverage).abs() > 1e-12 {
            return Err(Error::BadParameter(format!(
                "recorded coverage {} != recomputed {coverage}",
                self.coverage
            )));
        }
        if self.ok && coverage < 1.0 - self.epsilon - 1e-12 {
            return Err(Error::BadParameter("ok flag contradicts coverage".into()));
        }
        Ok(())
    }
}

/// Greedy quasi-tiling, largest shape first: on the running residual,
/// enumerate the translates lying inside it, admit greedily, record the
/// admitted base points as centers, subtract the admitted extents, and
/// recurse with the next smaller shape. Coverage below `1−ε` is reported
/// via the `ok` flag, not an error.
pub fn quasi_tile(shapes: &[FiniteSubset], target: &FiniteSubset, epsilon: f64) -> Result<QuasiTiling> {
    if shapes.is_empty() || target.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(0.0 < epsilon && epsilon < 0.25) {
        return Err(Error::BadParameter(format!("epsilon {epsilon} not in (0, 1/4)")));
    }
    let d = target.dim();
    let e = GroupElement::identity(d)?;
    for s in shapes {
        if !s.contains(&e) {
            return Err(Error::BadParameter("every shape must contain the identity".into()));
        }
    }
    // Largest shape first.
    let mut order: Vec<usize> = (0..shapes.len()).collect();
    order.sort_by(|&i, &j| shapes[j].len().cmp(&shapes[i].len()).then_with(|| shapes[i].cmp(&shapes[j])));

    let mut residual = target.clone();
    let mut centers_by_shape: Vec<FiniteSubset> = vec![FiniteSubset::new(d, [])?; shapes.len()];
    for &si in &order {
        let shape = &shapes[si];
        if residual.is_empty() {
            break;
        }
        // Since e ∈ S, any base point with Sg inside the residual lies in
        // the residual itself; scan it in lexicographic order directly.
        let residual_hash: HashSet<GroupElement> = residual.iter().copied().collect();
        let shape_cells = shape.to_vec();
        let mut claimed: HashSet<GroupElement> = HashSet::new();
        let mut admitted_centers = Vec::new();
        let mut admitted_extent: Vec<GroupElement> = Vec::new();
        let admit_threshold = (1.0 - epsilon) * shape.len() as f64;
        for g in residual.iter() {
            let mut cells = Vec::with_capacity(shape_cells.len());
            let mut fits = true;
            for s in &shape_cells {
                let cell = s.multiply(g)?;
                if !residual_hash.contains(&cell) {
                    fits = false;
                    break;
                }
                cells.push(cell);
            }
            if !fits {
                continue;
            }
            let unclaimed = cells.iter().filter(|x| !claimed.contains(x)).count();
            if unclaimed as f64 > admit_threshold {
                admitted_centers.push(*g);
                claimed.extend(cells.iter().copied());
                admitted_extent.extend(cells);
            }
        }
        centers_by_shape[si] = FiniteSubset::new(d, admitted_centers)?;
        let extent = FiniteSubset::new(d, admitted_extent)?;
        residual = residual.difference(&extent)?;
    }
    let covered = target.len() - residual.len();
    let coverage = covered as f64 / target.len() as f64;
    let tiling = QuasiTiling {
        shapes: shapes.to_vec(),
        centers: centers_by_shape,
        target: target.clone(),
        epsilon,
        coverage,
        ok: coverage >= 1.0 - epsilon,
    };
    tiling.verify()?;
    Ok(tiling)
}

/// Scans a Følner sequence for indices `n_1 < … < n_k` such that each
/// `F_{n_{i+1}}` is `(F_{n_i}F_{n_i}⁻¹, δ)`-invariant with
/// `|F_{n_i}|/|F_{n_{i+1}}| < δ`. The scan bound is a pragmatic cutoff,
/// not part of the classical statement.
pub fn scan_shape_indices(
    seq: &crate::group::FolnerSequence,
    k: usize,
    delta: f64,
    start: usize,
    scan_limit: usize,
) -> Result<Vec<usize>> {
    let mut indices = Vec::with_capacity(k);
    let mut prev: Option<FiniteSubset> = None;
    let mut n = start.max(1);
    while indices.len() < k && n <= scan_limit {
        let f = seq.member(n)?;
        let ok = match &prev {
            None => true,
            Some(p) => {
                let kk = set_product(p, &inverse_set(p))?;
                invariance_ratio(&f, &kk)? < delta && (p.len() as f64) < delta * f.len() as f64
            }
        };
        if ok {
            indices.push(n);
            prev = Some(f);
        }
        n += 1;
    }
    if indices.len() < k {
        return Err(Error::BadParameter(format!(
            "could not find {k} admissible indices below {scan_limit}"
        )));
    }
    Ok(indices)
}
