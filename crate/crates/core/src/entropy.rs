//! Entropy quantities along Følner windows: minimal subcover counts,
//! Shannon and conditional entropy, static cover entropy via the
//! partition-assignment minimum, topological and measure-theoretic
//! entropy estimates, the Katok counting statistic `b(F, a, U)`,
//! separated sets, and a local variational-principle checker.
//!
//! Estimates are reported as raw window sequences plus a certified
//! running-infimum upper bound for the limit (valid by the infimum
//! formula for partitions and by subadditivity along boxes for covers).
//! No extrapolation is applied.

use crate::group::{FiniteSubset, FolnerSequence, GroupElement};
use crate::measures::Measure;
use crate::phi;
use crate::subshift::{Cover, CoverKind, Partition, Pattern, Sft, SymbolicSet};
use crate::window::{atoms_of, minkowski, Bits, JoinedCover, WindowModel};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// Tunable budgets for the search and enumeration layers. Exceeding a
/// budget downgrades `exact` flags instead of failing.
#[derive(Clone, Debug)]
pub struct EntropyOptions {
    /// Branch-and-bound node budget for subcover searches.
    pub node_budget: u64,
    /// Word-element incidence budget when materializing join covers.
    pub incidence_budget: usize,
    /// Assignment enumeration budget for static cover entropy.
    pub assignment_budget: u64,
    /// Cap on refining partitions explored by `h_mu_cover`.
    pub refine_budget: usize,
    /// Cap on enumerated window languages.
    pub language_budget: usize,
    /// Local-admissibility margin for `d ≥ 2` languages.
    pub margin: i64,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        EntropyOptions {
            node_budget: 10_000_000,
            incidence_budget: 10_000_000,
            assignment_budget: 1_000_000,
            refine_budget: 4096,
            language_budget: 1 << 22,
            margin: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WindowValue {
    pub n: usize,
    pub window_size: usize,
    pub value: f64,
}

/// A sequence of normalized window values together with its certificate.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyEstimate {
    pub values: Vec<WindowValue>,
    /// Running infimum of the values; an upper bound for the limit when
    /// `certified` holds.
    pub certified_upper: f64,
    /// The raw last value; no acceleration is applied.
    pub extrapolated: f64,
    /// True when a closed form was used and the values are the limit.
    pub exact: bool,
    /// Whether `certified_upper` is a valid upper bound for the limit:
    /// box-style windows for cover quantities (subadditivity), any
    /// windows for partition entropies (the infimum formula), never for
    /// empirical measures or the Katok statistic. Budget-exhausted
    /// searches and locally admissible languages only inflate values, so
    /// they do not revoke the certificate.
    pub certified: bool,
    /// False when a subcover/static search exhausted its budget
    /// somewhere and an incumbent stood in for the true minimum.
    pub search_exact: bool,
    /// True when any window language was a `d ≥ 2` local-admissibility
    /// overcount.
    pub approximate_language: bool,
}

impl EntropyEstimate {
    fn assemble(
        values: Vec<WindowValue>,
        exact: bool,
        certified: bool,
        search_exact: bool,
        approx: bool,
    ) -> Self {
        let certified_upper = values.iter().map(|v| v.value).fold(f64::INFINITY, f64::min);
        let extrapolated = values.last().map_or(f64::NAN, |v| v.value);
        EntropyEstimate {
            values,
            certified_upper,
            extrapolated,
            exact,
            certified,
            search_exact,
            approximate_language: approx,
        }
    }
}

/// Whether a Følner sequence consists of translated boxes, the shape
/// class for which the running infimum of subadditive window quantities
/// certifies the limit.
fn box_like(seq: &FolnerSequence) -> bool {
    matches!(
        seq,
        FolnerSequence::Box { .. } | FolnerSequence::ShiftedInterval { .. }
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct SubcoverResult {
    pub count: usize,
    /// Indices of a minimum subcover within the element list.
    pub witness: Vec<usize>,
    pub exact: bool,
}

/// Exact minimum subcover of the window language by the cover elements
/// restricted to the window. `H(U) = log count`.
pub fn min_subcover(
    sft: &Sft,
    cover: &Cover,
    window: &FiniteSubset,
    opts: &EntropyOptions,
) -> Result<SubcoverResult> {
    let model = WindowModel::build(sft, window, opts.margin, opts.language_budget)?;
    let bits = model.verify_cover(cover)?;
    let mut budget = opts.node_budget;
    let (count, witness, exact) = exact_min_cover(&bits, model.word_count(), &mut budget);
    Ok(SubcoverResult {
        count,
        witness,
        exact,
    })
}

fn greedy_cover(elements: &[Bits], universe: usize) -> Vec<usize> {
    let mut uncovered = Bits::full(universe);
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let (best, gain) = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.intersection_count(&uncovered)))
            .max_by_key(|&(i, g)| (g, std::cmp::Reverse(i)))
            .expect("non-empty family");
        if gain == 0 {
            break;
        }
        uncovered.subtract(&elements[best]);
        chosen.push(best);
    }
    chosen
}

/// Exact minimum set cover by branch and bound. The caller guarantees
/// that the family covers the universe. Returns `(count, witness, exact)`;
/// exhausting the node budget reports the greedy incumbent inexactly.
pub(crate) fn exact_min_cover(
    elements: &[Bits],
    universe: usize,
    budget: &mut u64,
) -> (usize, Vec<usize>, bool) {
    if universe == 0 {
        return (0, Vec::new(), true);
    }
    // Unique-membership fast path (partitions): every non-empty element
    // is essential.
    let mut cover_count = vec![0u32; universe];
    for e in elements {
        for w in e.iter_ones() {
            cover_count[w] += 1;
        }
    }
    if cover_count.iter().all(|&c| c == 1) {
        let witness: Vec<usize> = (0..elements.len())
            .filter(|&i| !elements[i].is_empty())
            .collect();
        return (witness.len(), witness, true);
    }

    // Dominance preprocessing on moderate families.
    let mut active: Vec<usize> = (0..elements.len()).filter(|&i| !elements[i].is_empty()).collect();
    if active.len() <= 2048 {
        let mut keep = vec![true; active.len()];
        for i in 0..active.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..active.len() {
                if i == j || !keep[j] {
                    continue;
                }
                let (a, b) = (&elements[active[i]], &elements[active[j]]);
                if a.is_subset(b) && (a != b || i > j) {
                    keep[i] = false;
                    break;
                }
            }
        }
        active = active
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&i, _)| i)
            .collect();
    }

    let family: Vec<&Bits> = active.iter().map(|&i| &elements[i]).collect();
    let greedy = greedy_cover(&family.iter().map(|b| (*b).clone()).collect::<Vec<_>>(), universe);
    let mut best: Vec<usize> = greedy;
    let mut exact = true;
    // Static bound on the per-step gain; recomputing the true maximum per
    // node is too expensive on large families.
    let max_size = family.iter().map(|e| e.count_ones()).max().unwrap_or(1).max(1);

    // Per-word candidate lists, reused across nodes.
    let mut covers_of: Vec<Vec<usize>> = vec![Vec::new(); universe];
    for (i, e) in family.iter().enumerate() {
        for w in e.iter_ones() {
            covers_of[w].push(i);
        }
    }

    struct Ctx<'a> {
        family: Vec<&'a Bits>,
        covers_of: Vec<Vec<usize>>,
        max_size: usize,
    }
    fn recurse(
        ctx: &Ctx,
        uncovered: &Bits,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        budget: &mut u64,
        exact: &mut bool,
    ) {
        if uncovered.is_empty() {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        if *budget == 0 {
            *exact = false;
            return;
        }
        *budget -= 1;
        let unc = uncovered.count_ones();
        if chosen.len() + unc.div_ceil(ctx.max_size) >= best.len() {
            return;
        }
        // Branch on the uncovered word with the fewest candidates.
        let pick = uncovered
            .iter_ones()
            .min_by_key(|&w| ctx.covers_of[w].len())
            .expect("non-empty uncovered");
        let mut cands: Vec<(usize, usize)> = ctx.covers_of[pick]
            .iter()
            .map(|&i| (i, ctx.family[i].intersection_count(uncovered)))
            .collect();
        cands.sort_by_key(|&(i, g)| (std::cmp::Reverse(g), i));
        for (i, _) in cands {
            let mut rest = uncovered.clone();
            rest.subtract(ctx.family[i]);
            chosen.push(i);
            recurse(ctx, &rest, chosen, best, budget, exact);
            chosen.pop();
        }
    }

    let ctx = Ctx {
        family,
        covers_of,
        max_size,
    };
    let mut chosen = Vec::new();
    recurse(&ctx, &Bits::full(universe), &mut chosen, &mut best, budget, &mut exact);
    (best.len(), best.iter().map(|&i| active[i]).collect(), exact)
}

/// Minimum subcover count of a joined cover: free for partitions, branch
/// and bound otherwise.
fn subcover_count_joined(joined: &JoinedCover, universe: usize, budget: &mut u64) -> (usize, bool) {
    match joined {
        JoinedCover::Partition { groups } => (groups.len(), true),
        JoinedCover::General { elements } => {
            let (c, _w, exact) = exact_min_cover(elements, universe, budget);
            (c, exact)
        }
    }
}

/// Static cover entropy of a joined cover: `Σ φ` of the class masses for
/// partitions, assignment minimization otherwise.
fn static_entropy_joined(
    joined: &JoinedCover,
    masses: &[f64],
    universe: usize,
    assignment_budget: u64,
) -> Result<(f64, bool)> {
    match joined {
        JoinedCover::Partition { groups } => Ok((
            groups
                .iter()
                .map(|g| phi(g.iter().map(|&w| masses[w as usize]).sum()))
                .sum(),
            true,
        )),
        JoinedCover::General { elements } => {
            let st = static_min_entropy(elements, masses, universe, assignment_budget)?;
            Ok((st.value, st.exact))
        }
    }
}

fn hull_of_cover(cover: &Cover) -> Vec<GroupElement> {
    let mut hull = cover.shape_hull();
    if hull.is_empty() {
        hull.push(GroupElement::identity(1).expect("dim 1"));
    }
    hull
}

fn hull_window(f: &FiniteSubset, shapes: &[GroupElement]) -> Result<FiniteSubset> {
    if shapes.is_empty() {
        return Ok(f.clone());
    }
    // Patch dimension for shape-free covers like {X}.
    let shapes: Vec<GroupElement> = if shapes[0].dim() != f.dim() {
        vec![GroupElement::identity(f.dim())?]
    } else {
        shapes.to_vec()
    };
    minkowski(f, &shapes)
}

/// Topological entropy estimate of a cover: `log N(U_{F_n}) / |F_n|` for
/// `n ≤ n_max`.
pub fn h_top(
    sft: &Sft,
    cover: &Cover,
    seq: &FolnerSequence,
    n_max: usize,
    opts: &EntropyOptions,
) -> Result<EntropyEstimate> {
    if n_max == 0 {
        return Err(Error::BadParameter("n_max must be >= 1".into()));
    }
    let hull = hull_of_cover(cover);
    let mut values = Vec::with_capacity(n_max);
    let mut exact_search = true;
    let mut approx = false;
    for n in 1..=n_max {
        let f = seq.member(n)?;
        let positions = f.to_vec();
        let window = hull_window(&f, &hull)?;
        let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
        approx |= !model.exact;
        let joined = model.join_elements(&cover.elements, &positions, opts.incidence_budget)?;
        let mut budget = opts.node_budget;
        let (count, exact) = subcover_count_joined(&joined, model.word_count(), &mut budget);
        exact_search &= exact;
        values.push(WindowValue {
            n,
            window_size: f.len(),
            value: (count as f64).ln() / f.len() as f64,
        });
    }
    Ok(EntropyEstimate::assemble(
        values,
        false,
        box_like(seq),
        exact_search,
        approx,
    ))
}

/// The subcover counts `N(U_{F_n})` behind an `h_top` estimate, as exact
/// integers.
pub fn subcover_counts(
    sft: &Sft,
    cover: &Cover,
    seq: &FolnerSequence,
    n_max: usize,
    opts: &EntropyOptions,
) -> Result<Vec<(usize, usize, bool)>> {
    let hull = hull_of_cover(cover);
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let f = seq.member(n)?;
        let window = hull_window(&f, &hull)?;
        let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
        let joined = model.join_elements(&cover.elements, &f.to_vec(), opts.incidence_budget)?;
        let mut budget = opts.node_budget;
        let (count, exact) = subcover_count_joined(&joined, model.word_count(), &mut budget);
        out.push((n, count, exact && model.exact));
    }
    Ok(out)
}

fn masses_checked(mu: &Measure, model: &WindowModel) -> Result<Vec<f64>> {
    let masses = mu.word_masses_f64(model.window(), &model.words)?;
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Measure(format!(
            "measure mass {total} != 1 on the window; it is not supported on the subshift"
        )));
    }
    Ok(masses)
}

/// Shannon entropy `H_μ(α) = Σ φ(μ(A))` of a partition on a window.
pub fn shannon(
    sft: &Sft,
    mu: &Measure,
    partition: &Partition,
    window: &FiniteSubset,
    opts: &EntropyOptions,
) -> Result<f64> {
    let model = WindowModel::build(sft, window, opts.margin, opts.language_budget)?;
    let bits = model.verify_partition(partition.cover())?;
    let masses = masses_checked(mu, &model)?;
    Ok(bits
        .iter()
        .map(|b| phi(b.iter_ones().map(|w| masses[w]).sum()))
        .sum())
}

/// `H_μ(α|β) = H_μ(α∨β) − H_μ(β)`.
pub fn conditional(
    sft: &Sft,
    mu: &Measure,
    alpha: &Partition,
    beta: &Partition,
    window: &FiniteSubset,
    opts: &EntropyOptions,
) -> Result<f64> {
    let model = WindowModel::build(sft, window, opts.margin, opts.language_budget)?;
    let a = model.verify_partition(alpha.cover())?;
    let b = model.verify_partition(beta.cover())?;
    let masses = masses_checked(mu, &model)?;
    let mut joint = 0.0;
    for x in &a {
        for y in &b {
            let mut meet = x.clone();
            meet.intersect_with(y);
            joint += phi(meet.iter_ones().map(|w| masses[w]).sum());
        }
    }
    let hb: f64 = b.iter().map(|c| phi(c.iter_ones().map(|w| masses[w]).sum())).sum();
    Ok(joint - hb)
}

#[derive(Clone, Debug)]
pub struct StaticEntropy {
    pub value: f64,
    /// Atom-to-element assignment realizing the minimum.
    pub assignment: Vec<usize>,
    pub atoms: Vec<Bits>,
    pub exact: bool,
}

/// `H_μ(U) = min { H_μ(β) : atoms(U) ⪰ β ⪰ U }` on a window: every atom
/// of the cover is assigned to a containing element and the merged cells
/// are scored by `Σ φ`. Exhaustive within the assignment budget, then
/// greedy with steepest-descent reassignment (flagged inexact).
pub fn static_cover_entropy(
    sft: &Sft,
    mu: &Measure,
    cover: &Cover,
    window: &FiniteSubset,
    opts: &EntropyOptions,
) -> Result<StaticEntropy> {
    let model = WindowModel::build(sft, window, opts.margin, opts.language_budget)?;
    let bits = model.verify_cover(cover)?;
    let masses = masses_checked(mu, &model)?;
    static_min_entropy(&bits, &masses, model.word_count(), opts.assignment_budget)
}

fn static_min_entropy(
    elements: &[Bits],
    masses: &[f64],
    universe: usize,
    assignment_budget: u64,
) -> Result<StaticEntropy> {
    let atoms = atoms_of(elements, universe);
    let atom_mass: Vec<f64> = atoms
        .iter()
        .map(|a| a.iter_ones().map(|w| masses[w]).sum())
        .collect();
    let choices: Vec<Vec<usize>> = atoms
        .iter()
        .map(|a| {
            (0..elements.len())
                .filter(|&e| a.is_subset(&elements[e]))
                .collect::<Vec<_>>()
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return Err(Error::NotACover("atom not inside any element".into()));
    }

    // Zero-mass atoms never affect the entropy; pin them to their first
    // containing element.
    let free: Vec<usize> = (0..atoms.len())
        .filter(|&i| atom_mass[i] > 0.0 && choices[i].len() > 1)
        .collect();
    let mut assignment: Vec<usize> = choices.iter().map(|c| c[0]).collect();

    let cell_count = elements.len();
    let mut base_cells = vec![0.0f64; cell_count];
    for (i, &a) in assignment.iter().enumerate() {
        if !free.contains(&i) {
            base_cells[a] += atom_mass[i];
        }
    }

    let combos = free
        .iter()
        .map(|&i| choices[i].len() as u64)
        .try_fold(1u64, |acc, c| acc.checked_mul(c))
        .unwrap_or(u64::MAX);

    if combos <= assignment_budget {
        // Exhaustive enumeration over free atoms only.
        let touched: Vec<usize> = {
            let mut t: Vec<usize> = free
                .iter()
                .flat_map(|&i| choices[i].iter().copied())
                .collect();
            t.sort_unstable();
            t.dedup();
            t
        };
        let base_h: f64 = base_cells.iter().map(|&m| phi(m)).sum();
        let base_touched: f64 = touched.iter().map(|&c| phi(base_cells[c])).sum();
        let mut counters = vec![0usize; free.len()];
        let mut cur = base_cells.clone();
        for (&i, &c) in free.iter().zip(&counters) {
            cur[choices[i][c]] += atom_mass[i];
        }
        let mut best_h = f64::INFINITY;
        let mut best_counters = counters.clone();
        loop {
            let h = base_h - base_touched + touched.iter().map(|&c| phi(cur[c])).sum::<f64>();
            if h < best_h {
                best_h = h;
                best_counters = counters.clone();
            }
            // Advance the mixed-radix counter.
            let mut k = free.len();
            loop {
                if k == 0 {
                    counters = Vec::new();
                    break;
                }
                k -= 1;
                let i = free[k];
                cur[choices[i][counters[k]]] -= atom_mass[i];
                counters[k] += 1;
                if counters[k] < choices[i].len() {
                    cur[choices[i][counters[k]]] += atom_mass[i];
                    break;
                }
                counters[k] = 0;
                cur[choices[i][0]] += atom_mass[i];
            }
            if counters.is_empty() {
                break;
            }
        }
        for (k, &i) in free.iter().enumerate() {
            assignment[i] = choices[i][best_counters[k]];
        }
        if free.is_empty() {
            best_h = base_h;
        }
        return Ok(StaticEntropy {
            value: best_h.max(0.0),
            assignment,
            atoms,
            exact: true,
        });
    }

    // Greedy: heavy atoms first, each to the currently heaviest
    // containing cell, then steepest-descent single moves.
    let mut order: Vec<usize> = free.clone();
    order.sort_by(|&a, &b| atom_mass[b].partial_cmp(&atom_mass[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut cells = base_cells;
    for &i in &order {
        let &target = choices[i]
            .iter()
            .max_by(|&&x, &&y| cells[x].partial_cmp(&cells[y]).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty choices");
        assignment[i] = target;
        cells[target] += atom_mass[i];
    }
    let entropy_of = |cells: &[f64]| cells.iter().map(|&m| phi(m)).sum::<f64>();
    let mut current = entropy_of(&cells);
    for _ in 0..200 {
        let mut best_delta = -1e-15;
        let mut best_move: Option<(usize, usize)> = None;
        for &i in &free {
            let src = assignment[i];
            for &dst in &choices[i] {
                if dst == src {
                    continue;
                }
                let delta = phi(cells[src] - atom_mass[i]) + phi(cells[dst] + atom_mass[i])
                    - phi(cells[src])
                    - phi(cells[dst]);
                if delta < best_delta {
                    best_delta = delta;
                    best_move = Some((i, dst));
                }
            }
        }
        match best_move {
            Some((i, dst)) => {
                let src = assignment[i];
                cells[src] -= atom_mass[i];
                cells[dst] += atom_mass[i];
                assignment[i] = dst;
                current += best_delta;
            }
            None => break,
        }
    }
    Ok(StaticEntropy {
        value: current.max(0.0),
        assignment,
        atoms,
        exact: false,
    })
}

fn is_single_site_symbol_partition(sft: &Sft, cells: &[SymbolicSet]) -> bool {
    if cells.len() != sft.alphabet.len() {
        return false;
    }
    let mut site: Option<GroupElement> = None;
    let mut seen = vec![false; sft.alphabet.len()];
    for c in cells {
        if c.cylinders.len() != 1 || c.cylinders[0].cells().len() != 1 {
            return false;
        }
        let (g, s) = c.cylinders[0].cells()[0];
        match site {
            None => site = Some(g),
            Some(h) if h == g => {}
            _ => return false,
        }
        if seen[s as usize] {
            return false;
        }
        seen[s as usize] = true;
    }
    seen.iter().all(|&b| b)
}

/// Profile-based evaluation of `H_μ(α_F)` on a prepared model.
fn joined_partition_entropy(
    model: &WindowModel,
    masses: &[f64],
    cells: &[SymbolicSet],
    positions: &[GroupElement],
) -> Result<f64> {
    let ids = model.partition_cell_ids(cells, positions)?;
    let k = cells.len() as u64;
    let bits = 64 - (k.max(2) - 1).leading_zeros() as usize;
    if bits * positions.len() <= 64 {
        let mut groups: HashMap<u64, f64> = HashMap::new();
        for (w, id) in ids.iter().enumerate() {
            let mut key = 0u64;
            for &c in id {
                key = (key << bits) | c as u64;
            }
            *groups.entry(key).or_insert(0.0) += masses[w];
        }
        Ok(groups.values().map(|&m| phi(m)).sum())
    } else {
        let mut groups: HashMap<Vec<u16>, f64> = HashMap::new();
        for (w, id) in ids.iter().enumerate() {
            *groups.entry(id.clone()).or_insert(0.0) += masses[w];
        }
        Ok(groups.values().map(|&m| phi(m)).sum())
    }
}

/// Measure entropy estimate of a partition: `H_μ(α_{F_n})/|F_n|`. For a
/// Bernoulli measure and the symbol partition the product factorization
/// gives the exact value `H_μ(α)` at every window.
pub fn h_mu_partition(
    sft: &Sft,
    mu: &Measure,
    alpha: &Partition,
    seq: &FolnerSequence,
    n_max: usize,
    opts: &EntropyOptions,
) -> Result<EntropyEstimate> {
    if n_max == 0 {
        return Err(Error::BadParameter("n_max must be >= 1".into()));
    }
    let cells = &alpha.cover().elements;
    let empirical = matches!(mu.variant, crate::measures::MeasureVariant::Empirical { .. });
    let bernoulli = matches!(mu.variant, crate::measures::MeasureVariant::Bernoulli { .. });
    if bernoulli && is_single_site_symbol_partition(sft, cells) && sft.forbidden.is_empty() {
        let site = cells[0].cylinders[0].cells()[0].0;
        let window = FiniteSubset::new(sft.d, [site])?;
        let h = shannon(sft, mu, alpha, &window, opts)?;
        let mut values = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let f = seq.member(n)?;
            values.push(WindowValue {
                n,
                window_size: f.len(),
                value: h,
            });
        }
        return Ok(EntropyEstimate::assemble(values, true, true, true, false));
    }

    let hull = hull_of_cover(alpha.cover());
    let mut values = Vec::with_capacity(n_max);
    let mut approx = false;
    for n in 1..=n_max {
        let f = seq.member(n)?;
        let positions = f.to_vec();
        let window = hull_window(&f, &hull)?;
        let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
        approx |= !model.exact;
        let masses = masses_checked(mu, &model)?;
        let h = joined_partition_entropy(&model, &masses, cells, &positions)?;
        values.push(WindowValue {
            n,
            window_size: f.len(),
            value: h / f.len() as f64,
        });
    }
    // The infimum formula certifies partition entropies on any windows.
    Ok(EntropyEstimate::assemble(values, false, !empirical, true, approx))
}

/// `h_μ⁻` estimate: static cover entropy of `U_{F_n}` per window.
pub fn h_mu_minus_cover(
    sft: &Sft,
    mu: &Measure,
    cover: &Cover,
    seq: &FolnerSequence,
    n_max: usize,
    opts: &EntropyOptions,
) -> Result<EntropyEstimate> {
    if n_max == 0 {
        return Err(Error::BadParameter("n_max must be >= 1".into()));
    }
    let empirical = matches!(mu.variant, crate::measures::MeasureVariant::Empirical { .. });
    let hull = hull_of_cover(cover);
    let mut values = Vec::with_capacity(n_max);
    let mut exact_all = true;
    let mut approx = false;
    for n in 1..=n_max {
        let f = seq.member(n)?;
        let positions = f.to_vec();
        let window = hull_window(&f, &hull)?;
        let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
        approx |= !model.exact;
        let masses = masses_checked(mu, &model)?;
        let joined = model.join_elements(&cover.elements, &positions, opts.incidence_budget)?;
        let (value, exact) =
            static_entropy_joined(&joined, &masses, model.word_count(), opts.assignment_budget)?;
        exact_all &= exact;
        values.push(WindowValue {
            n,
            window_size: f.len(),
            value: value / f.len() as f64,
        });
    }
    Ok(EntropyEstimate::assemble(
        values,
        false,
        box_like(seq) && !empirical,
        exact_all,
        approx,
    ))
}

/// The refining family of a cover at `depth`: Boolean atoms of `U_B` for
/// `B = {0,…,depth}^d` on the window `B ⊕ hull(U)`, plus every
/// deduplicated assignment of atoms to containing elements of `U`.
struct RefinementFamily {
    /// Cells of the atom window, sorted.
    window_cells: Vec<GroupElement>,
    /// Window word → atom id.
    word_atom: HashMap<Vec<u8>, u16>,
    /// Deduplicated atom → element assignments.
    assignments: Vec<Vec<u8>>,
    n_elements: usize,
}

fn refining_partitions(
    sft: &Sft,
    cover: &Cover,
    depth: usize,
    opts: &EntropyOptions,
) -> Result<RefinementFamily> {
    let b = FiniteSubset::box_at_origin(sft.d, depth as i64 + 1)?;
    let positions = b.to_vec();
    let hull = hull_of_cover(cover);
    let window = hull_window(&b, &hull)?;
    let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
    let join = model
        .join_elements(&cover.elements, &positions, opts.incidence_budget)?
        .to_bits(model.word_count());
    let atoms = atoms_of(&join, model.word_count());
    if atoms.len() > u16::MAX as usize {
        return Err(Error::BudgetExceeded(atoms.len()));
    }
    let base: Vec<Bits> = cover
        .elements
        .iter()
        .map(|e| model.restrict(e))
        .collect::<Result<_>>()?;
    let choices: Vec<Vec<u8>> = atoms
        .iter()
        .map(|a| {
            (0..base.len() as u8)
                .filter(|&e| a.is_subset(&base[e as usize]))
                .collect::<Vec<_>>()
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return Err(Error::NotACover("atom not inside any base element".into()));
    }
    let mut word_atom = HashMap::with_capacity(model.word_count());
    for (atom_id, atom) in atoms.iter().enumerate() {
        for w in atom.iter_ones() {
            word_atom.insert(model.words[w].clone(), atom_id as u16);
        }
    }

    let free: Vec<usize> = (0..atoms.len()).filter(|&i| choices[i].len() > 1).collect();
    let mut assignment: Vec<u8> = choices.iter().map(|c| c[0]).collect();
    let mut assignments: Vec<Vec<u8>> = Vec::new();
    let mut seen: HashMap<Vec<Vec<u16>>, ()> = HashMap::new();
    let mut counters = vec![0usize; free.len()];
    loop {
        for (k, &i) in free.iter().enumerate() {
            assignment[i] = choices[i][counters[k]];
        }
        // Dedupe by the induced grouping of atoms into cells.
        let mut cells: Vec<Vec<u16>> = vec![Vec::new(); base.len()];
        for (i, &e) in assignment.iter().enumerate() {
            cells[e as usize].push(i as u16);
        }
        let key: Vec<Vec<u16>> = cells.into_iter().filter(|c| !c.is_empty()).collect();
        if seen.insert(key, ()).is_none() {
            assignments.push(assignment.clone());
        }
        if assignments.len() >= opts.refine_budget {
            break;
        }
        let mut k = free.len();
        loop {
            if k == 0 {
                counters = Vec::new();
                break;
            }
            k -= 1;
            counters[k] += 1;
            if counters[k] < choices[free[k]].len() {
                break;
            }
            counters[k] = 0;
        }
        if counters.is_empty() {
            break;
        }
    }
    Ok(RefinementFamily {
        window_cells: model.window().to_vec(),
        word_atom,
        assignments,
        n_elements: base.len(),
    })
}

/// `h_μ(G,U)` upper estimate: pointwise minimum of `H_μ(α_{F_n})/|F_n|`
/// over the finite family of assignment partitions `α ⪰ U` generated at
/// the given refinement depth.
pub fn h_mu_cover(
    sft: &Sft,
    mu: &Measure,
    cover: &Cover,
    seq: &FolnerSequence,
    n_max: usize,
    depth: usize,
    opts: &EntropyOptions,
) -> Result<EntropyEstimate> {
    if n_max == 0 {
        return Err(Error::BadParameter("n_max must be >= 1".into()));
    }
    // Partitions admit exactly one refining assignment: themselves.
    {
        let hull = hull_of_cover(cover);
        let window = hull_window(&FiniteSubset::box_at_origin(sft.d, 1)?, &hull)?;
        let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
        if model.verify_partition(cover).is_ok() {
            return h_mu_partition(sft, mu, &Partition(cover.clone()), seq, n_max, opts);
        }
    }
    let empirical = matches!(mu.variant, crate::measures::MeasureVariant::Empirical { .. });
    let family = refining_partitions(sft, cover, depth, opts)?;
    let cell_bits = 64 - (family.n_elements.max(2) as u64 - 1).leading_zeros() as usize;

    let mut values: Vec<WindowValue> = Vec::with_capacity(n_max);
    let mut approx = false;
    for n in 1..=n_max {
        let f = seq.member(n)?;
        let positions = f.to_vec();
        let window = hull_window(&f, &family.window_cells)?;
        let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
        approx |= !model.exact;
        let masses = masses_checked(mu, &model)?;
        // Shared atom table: the atom of each word's sub-word at each
        // translate; assignments only remap atoms to cells.
        let sub_index: Vec<Vec<usize>> = positions
            .iter()
            .map(|g| {
                family
                    .window_cells
                    .iter()
                    .map(|c| {
                        let at = c.multiply(g)?;
                        model
                            .position(&at)
                            .ok_or_else(|| Error::WindowTooSmall(vec![at.coords().to_vec()]))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut atom_table = vec![0u16; model.word_count() * positions.len()];
        let mut sub = vec![0u8; family.window_cells.len()];
        for (w, word) in model.words.iter().enumerate() {
            for (p, idx) in sub_index.iter().enumerate() {
                for (j, &i) in idx.iter().enumerate() {
                    sub[j] = word[i];
                }
                atom_table[w * positions.len() + p] = *family
                    .word_atom
                    .get(sub.as_slice())
                    .ok_or_else(|| Error::BadPattern("sub-word outside atom window language".into()))?;
            }
        }
        let mut best = f64::INFINITY;
        let wide = cell_bits * positions.len() > 64;
        for assignment in &family.assignments {
            let h = if wide {
                let mut groups: HashMap<Vec<u8>, f64> = HashMap::new();
                for w in 0..model.word_count() {
                    let key: Vec<u8> = (0..positions.len())
                        .map(|p| assignment[atom_table[w * positions.len() + p] as usize])
                        .collect();
                    *groups.entry(key).or_insert(0.0) += masses[w];
                }
                groups.values().map(|&m| phi(m)).sum::<f64>()
            } else {
                let mut groups: HashMap<u64, f64> = HashMap::new();
                for w in 0..model.word_count() {
                    let mut key = 0u64;
                    for p in 0..positions.len() {
                        key = (key << cell_bits)
                            | assignment[atom_table[w * positions.len() + p] as usize] as u64;
                    }
                    *groups.entry(key).or_insert(0.0) += masses[w];
                }
                groups.values().map(|&m| phi(m)).sum::<f64>()
            };
            best = best.min(h);
        }
        values.push(WindowValue {
            n,
            window_size: f.len(),
            value: best / f.len() as f64,
        });
    }
    // Pointwise minima of partition-certified upper bounds.
    Ok(EntropyEstimate::assemble(values, false, !empirical, true, approx))
}

#[derive(Clone, Debug, Serialize)]
pub struct KatokCount {
    pub count: usize,
    pub witness: Vec<usize>,
    pub union_mass: f64,
    pub exact: bool,
}

/// `b(F, a, U)`: the minimum number of `U_F`-elements whose union has
/// μ-mass at least `a`.
pub fn katok_b(
    sft: &Sft,
    mu: &Measure,
    f: &FiniteSubset,
    a: f64,
    cover: &Cover,
    opts: &EntropyOptions,
) -> Result<KatokCount> {
    if !(0.0 < a && a < 1.0) {
        return Err(Error::BadParameter(format!("a {a} not in (0,1)")));
    }
    let hull = hull_of_cover(cover);
    let window = hull_window(f, &hull)?;
    let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
    let masses = masses_checked(mu, &model)?;
    let joined = model.join_elements(&cover.elements, &f.to_vec(), opts.incidence_budget)?;
    let mut budget = opts.node_budget;
    Ok(min_mass_cover_joined(&joined, &masses, a, &mut budget))
}

fn min_mass_cover_joined(
    joined: &JoinedCover,
    masses: &[f64],
    a: f64,
    budget: &mut u64,
) -> KatokCount {
    match joined {
        // Disjoint classes: the largest masses are optimal.
        JoinedCover::Partition { .. } => {
            let tol = 1e-12;
            let element_mass = joined.element_masses(masses);
            let mut order: Vec<usize> = (0..element_mass.len()).collect();
            order.sort_by(|&i, &j| {
                element_mass[j]
                    .partial_cmp(&element_mass[i])
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            let mut acc = 0.0;
            let mut witness = Vec::new();
            for &i in &order {
                if acc >= a - tol {
                    break;
                }
                acc += element_mass[i];
                witness.push(i);
            }
            KatokCount {
                count: witness.len(),
                witness,
                union_mass: acc,
                exact: true,
            }
        }
        JoinedCover::General { elements } => min_mass_cover(elements, masses, a, budget),
    }
}

fn min_mass_cover(elements: &[Bits], masses: &[f64], a: f64, budget: &mut u64) -> KatokCount {
    let tol = 1e-12;
    let element_mass: Vec<f64> = elements
        .iter()
        .map(|e| e.iter_ones().map(|w| masses[w]).sum())
        .collect();
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&i, &j| element_mass[j].partial_cmp(&element_mass[i]).unwrap_or(std::cmp::Ordering::Equal));

    // Pairwise-disjoint fast path (every word covered at most once):
    // the top masses are optimal.
    let mut cover_count = vec![0u32; masses.len()];
    for e in elements {
        for w in e.iter_ones() {
            cover_count[w] += 1;
        }
    }
    if cover_count.iter().all(|&c| c <= 1) {
        let mut acc = 0.0;
        let mut witness = Vec::new();
        for &i in &order {
            if acc >= a - tol {
                break;
            }
            acc += element_mass[i];
            witness.push(i);
        }
        let count = witness.len();
        return KatokCount {
            count,
            witness,
            union_mass: acc,
            exact: true,
        };
    }

    // Greedy incumbent by marginal mass.
    let mut incumbent: Vec<usize> = Vec::new();
    {
        let mut used = Bits::new(masses.len());
        let mut acc = 0.0;
        while acc < a - tol {
            let mut best = usize::MAX;
            let mut best_gain = 0.0;
            for (i, e) in elements.iter().enumerate() {
                let gain: f64 = e
                    .iter_ones()
                    .filter(|&w| !used.get(w))
                    .map(|w| masses[w])
                    .sum();
                if gain > best_gain {
                    best_gain = gain;
                    best = i;
                }
            }
            if best == usize::MAX || best_gain <= 0.0 {
                break;
            }
            used.union_with(&elements[best]);
            acc += best_gain;
            incumbent.push(best);
        }
    }

    let mut best_len = incumbent.len().max(1);
    let mut best_witness = incumbent;
    let mut exact = true;

    // Branch and bound over the mass-descending order: at each index
    // either take or skip the element; prune with the optimistic bound
    // that ignores overlaps.
    struct St<'a> {
        elements: &'a [Bits],
        masses: &'a [f64],
        order: &'a [usize],
        element_mass: &'a [f64],
        a: f64,
        tol: f64,
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        st: &St,
        idx: usize,
        union: &Bits,
        acc: f64,
        chosen: &mut Vec<usize>,
        best_len: &mut usize,
        best_witness: &mut Vec<usize>,
        budget: &mut u64,
        exact: &mut bool,
    ) {
        if acc >= st.a - st.tol {
            if chosen.len() < *best_len {
                *best_len = chosen.len();
                *best_witness = chosen.clone();
            }
            return;
        }
        if chosen.len() + 1 >= *best_len || idx >= st.order.len() {
            return;
        }
        if *budget == 0 {
            *exact = false;
            return;
        }
        *budget -= 1;
        // Optimistic: remaining elements at full individual mass.
        let need = st.a - st.tol - acc;
        let mut t = 0usize;
        let mut gain = 0.0;
        while gain < need && idx + t < st.order.len() {
            gain += st.element_mass[st.order[idx + t]];
            t += 1;
        }
        if gain < need || chosen.len() + t >= *best_len {
            return;
        }
        // Take.
        let e = st.order[idx];
        let mut u2 = union.clone();
        u2.union_with(&st.elements[e]);
        let gain: f64 = st.elements[e]
            .iter_ones()
            .filter(|&w| !union.get(w))
            .map(|w| st.masses[w])
            .sum();
        chosen.push(e);
        rec(st, idx + 1, &u2, acc + gain, chosen, best_len, best_witness, budget, exact);
        chosen.pop();
        // Skip.
        rec(st, idx + 1, union, acc, chosen, best_len, best_witness, budget, exact);
    }
    let st = St {
        elements,
        masses,
        order: &order,
        element_mass: &element_mass,
        a,
        tol,
    };
    let mut chosen = Vec::new();
    rec(
        &st,
        0,
        &Bits::new(masses.len()),
        0.0,
        &mut chosen,
        &mut best_len,
        &mut best_witness,
        budget,
        &mut exact,
    );
    let union_mass = {
        let mut u = Bits::new(masses.len());
        for &i in &best_witness {
            u.union_with(&elements[i]);
        }
        u.iter_ones().map(|w| masses[w]).sum()
    };
    KatokCount {
        count: best_witness.len(),
        witness: best_witness,
        union_mass,
        exact,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeissCheck {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KatokEstimate {
    pub estimate: EntropyEstimate,
    /// Per-window verification of
    /// `H_μ(U_F) ≤ log b + (1−a)|F| log N(U) + log 2`.
    pub weiss: Vec<WeissCheck>,
}

/// Katok statistic sequence `(1/|F_n|) log b(F_n, 1−ε, U)` for an ergodic
/// measure, with the counting inequality checked on every window.
pub fn katok_entropy(
    sft: &Sft,
    mu: &Measure,
    cover: &Cover,
    seq: &FolnerSequence,
    n_max: usize,
    epsilon: f64,
    opts: &EntropyOptions,
) -> Result<KatokEstimate> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::BadParameter(format!("epsilon {epsilon} not in (0,1)")));
    }
    if !mu.ergodic {
        return Err(Error::Measure("katok_entropy requires an ergodic-flagged measure".into()));
    }
    let a = 1.0 - epsilon;
    let hull = hull_of_cover(cover);
    let hull_set = FiniteSubset::new(sft.d, hull.iter().copied())?;
    let n_u = {
        let model = WindowModel::build(sft, &hull_set, opts.margin, opts.language_budget)?;
        let bits = model.verify_cover(cover)?;
        let mut budget = opts.node_budget;
        exact_min_cover(&bits, model.word_count(), &mut budget).0
    };
    let mut values = Vec::with_capacity(n_max);
    let mut weiss = Vec::with_capacity(n_max);
    let mut exact_all = true;
    let mut approx = false;
    for n in 1..=n_max {
        let f = seq.member(n)?;
        let window = hull_window(&f, &hull)?;
        let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
        approx |= !model.exact;
        let masses = masses_checked(mu, &model)?;
        let joined = model.join_elements(&cover.elements, &f.to_vec(), opts.incidence_budget)?;
        let mut budget = opts.node_budget;
        let b = min_mass_cover_joined(&joined, &masses, a, &mut budget);
        exact_all &= b.exact;
        values.push(WindowValue {
            n,
            window_size: f.len(),
            value: (b.count as f64).ln() / f.len() as f64,
        });
        let (h_static, _exact) =
            static_entropy_joined(&joined, &masses, model.word_count(), opts.assignment_budget)?;
        let rhs = (b.count as f64).ln()
            + (1.0 - a) * f.len() as f64 * (n_u as f64).ln()
            + std::f64::consts::LN_2;
        weiss.push(WeissCheck {
            n,
            lhs: h_static,
            rhs,
            holds: h_static <= rhs + 1e-9,
        });
    }
    Ok(KatokEstimate {
        // The statistic approaches the limit from no particular side at
        // finite n; its running infimum certifies nothing.
        estimate: EntropyEstimate::assemble(values, false, false, exact_all, approx),
        weiss,
    })
}

#[derive(Clone, Debug)]
pub struct SeparatedSet {
    pub points: Vec<Pattern>,
    /// `N(U_F)/K`, the guaranteed lower bound on the number of points.
    pub lower_bound: f64,
    pub subcover_count: usize,
}

/// The separated set of the key combinatorial lemma: picks window
/// patterns so that every `(α_l)_F`-atom holds at most one point and at
/// least `N(U_F)/K` points are found. The residual-set induction is run
/// literally on the window language in lexicographic order.
pub fn separated_set(
    sft: &Sft,
    cover: &Cover,
    alphas: &[Partition],
    f: &FiniteSubset,
    opts: &EntropyOptions,
) -> Result<SeparatedSet> {
    if alphas.is_empty() {
        return Err(Error::BadParameter("need at least one refining partition".into()));
    }
    let mut hull = hull_of_cover(cover);
    for a in alphas {
        hull.extend(hull_of_cover(a.cover()));
    }
    hull.sort();
    hull.dedup();
    let window = hull_window(f, &hull)?;
    let model = WindowModel::build(sft, &window, opts.margin, opts.language_budget)?;
    let positions = f.to_vec();
    let joined = model.join_elements(&cover.elements, &positions, opts.incidence_budget)?;
    let mut budget = opts.node_budget;
    let (n_cover, _exact) = subcover_count_joined(&joined, model.word_count(), &mut budget);

    // Atom label of each word under each (α_l)_F.
    let mut labels: Vec<Vec<u64>> = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        let ids = model.partition_cell_ids(&alpha.cover().elements, &positions)?;
        let k = alpha.cover().len() as u64;
        let bits = 64 - (k.max(2) - 1).leading_zeros() as usize;
        if bits * positions.len() <= 64 {
            labels.push(
                ids.iter()
                    .map(|id| id.iter().fold(0u64, |acc, &c| (acc << bits) | c as u64))
                    .collect(),
            );
        } else {
            // Collapse via an interning map.
            let mut intern: HashMap<Vec<u16>, u64> = HashMap::new();
            labels.push(
                ids.iter()
                    .map(|id| {
                        let next = intern.len() as u64;
                        *intern.entry(id.clone()).or_insert(next)
                    })
                    .collect(),
            );
        }
    }

    let word_count = model.word_count();
    let mut alive = vec![true; word_count];
    let mut points = Vec::new();
    let mut picked_ids = Vec::new();
    for w in 0..word_count {
        if !alive[w] {
            continue;
        }
        points.push(model.word_pattern(w));
        picked_ids.push(w);
        for v in w..word_count {
            if alive[v] && labels.iter().any(|l| l[v] == l[w]) {
                alive[v] = false;
            }
        }
    }
    // Postcondition: atoms hold at most one point each.
    for l in &labels {
        let mut seen = std::collections::HashSet::new();
        for &w in &picked_ids {
            if !seen.insert(l[w]) {
                return Err(Error::BadParameter("separated set re-used an atom".into()));
            }
        }
    }
    let lower_bound = n_cover as f64 / alphas.len() as f64;
    if (points.len() as f64) < lower_bound - 1e-9 {
        return Err(Error::BadParameter(format!(
            "separated set bound violated: {} < {}",
            points.len(),
            lower_bound
        )));
    }
    Ok(SeparatedSet {
        points,
        lower_bound,
        subcover_count: n_cover,
    })
}

/// Builds the empirical measure of the variational-principle
/// construction: a separated set for window `F_n`, averaged over `F_n`.
/// `query_margin` widens the master window so that small cylinders can be
/// queried at every translate.
pub fn empirical_vp_measure(
    sft: &Sft,
    cover: &Cover,
    n: usize,
    alphas: &[Partition],
    seq: &FolnerSequence,
    query_margin: i64,
    opts: &EntropyOptions,
) -> Result<Measure> {
    let f = seq.member(n)?;
    let mut hull = hull_of_cover(cover);
    for a in alphas {
        hull.extend(hull_of_cover(a.cover()));
    }
    let pad = FiniteSubset::box_at_origin(sft.d, query_margin.max(1))?;
    for g in pad.iter() {
        for h in hull.clone() {
            hull.push(h.multiply(g)?);
        }
    }
    hull.sort();
    hull.dedup();
    let master = hull_window(&f, &hull)?;

    // Run the separated-set induction on the master language.
    let model = WindowModel::build(sft, &master, opts.margin, opts.language_budget)?;
    let positions = f.to_vec();
    let mut labels: Vec<Vec<u64>> = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        let ids = model.partition_cell_ids(&alpha.cover().elements, &positions)?;
        let mut intern: HashMap<Vec<u16>, u64> = HashMap::new();
        labels.push(
            ids.iter()
                .map(|id| {
                    let next = intern.len() as u64;
                    *intern.entry(id.clone()).or_insert(next)
                })
                .collect(),
        );
    }
    let mut alive = vec![true; model.word_count()];
    let mut base_points = Vec::new();
    for w in 0..model.word_count() {
        if !alive[w] {
            continue;
        }
        base_points.push(model.word_pattern(w));
        for v in w..model.word_count() {
            if alive[v] && labels.iter().any(|l| l[v] == l[w]) {
                alive[v] = false;
            }
        }
    }
    Measure::empirical(crate::measures::EmpiricalSpec {
        master,
        base_points,
        averaging: f,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VpReport {
    pub h_top: EntropyEstimate,
    pub per_measure: Vec<EntropyEstimate>,
    pub max_h_mu: f64,
    /// `h_top certified upper − max_μ h_μ certified upper`.
    pub gap: f64,
    /// Index of the measure attaining the maximum.
    pub argmax: usize,
    /// One-sided certificate: every `h_μ` certified upper is at most the
    /// `h_top` certified upper (up to `1e−9`).
    pub certificate_ok: bool,
}

/// Variational-principle check: compares the `h_top` estimate against the
/// per-measure `h_μ` estimates.
pub fn vp_check(
    sft: &Sft,
    cover: &Cover,
    measures: &[Measure],
    seq: &FolnerSequence,
    n_max: usize,
    depth: usize,
    opts: &EntropyOptions,
) -> Result<VpReport> {
    let top = h_top(sft, cover, seq, n_max, opts)?;
    let mut per = Vec::with_capacity(measures.len());
    for mu in measures {
        per.push(h_mu_cover(sft, mu, cover, seq, n_max, depth, opts)?);
    }
    let (argmax, max_h_mu) = per
        .iter()
        .enumerate()
        .map(|(i, e)| (i, e.certified_upper))
        .fold((0usize, f64::NEG_INFINITY), |acc, (i, v)| {
            if v > acc.1 {
                (i, v)
            } else {
                acc
            }
        });
    let certificate_ok = per.iter().all(|e| e.certified_upper <= top.certified_upper + 1e-9);
    Ok(VpReport {
        gap: top.certified_upper - max_h_mu,
        max_h_mu,
        argmax,
        certificate_ok,
        h_top: top,
        per_measure: per,
    })
}

/// Convenience: the cover `{X}` has every entropy equal to zero; used in
/// tests and the CLI examples.
pub fn trivial_cover() -> Cover {
    Cover::new(vec![SymbolicSet::full()], CoverKind::Open)
}
