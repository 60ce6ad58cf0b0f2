//! Entropy-pair/tuple detection and uniform-positive-entropy heuristics.
//!
//! A tuple candidate is a list of distinct window patterns standing for
//! points via their cylinders. Its canonical admissible cover consists of
//! the windowed complements of the point cylinders. Detection is a
//! semi-decision: a NEGATIVE verdict (certified upper bound of the cover
//! entropy below tolerance) soundly refutes tuple-hood, because the
//! canonical cover is admissible; POSITIVE verdicts are heuristic
//! evidence from the last window value, gated by a growth-stability check
//! so that slowly decaying subcover counts report UNDECIDED rather than
//! POSITIVE.

use crate::entropy::{self, EntropyEstimate, EntropyOptions};
use crate::group::{FiniteSubset, FolnerSequence, GroupElement};
use crate::lang;
use crate::measures::{Measure, MeasureVariant, Q};
use crate::subshift::{Cover, CoverKind, Pattern, Sft, SymbolicSet};
use crate::window::WindowModel;
use crate::{Error, Result};
use num_traits::Zero;
use serde::Serialize;

/// Detection thresholds. `tol` separates "zero" from "positive" entropy;
/// `stability_ratio` is the minimum allowed decay of the value sequence
/// between `n_max/2` and `n_max` for POSITIVE evidence.
#[derive(Clone, Debug)]
pub struct TupleOptions {
    pub tol: f64,
    pub stability_ratio: f64,
    pub entropy: EntropyOptions,
}

impl Default for TupleOptions {
    fn default() -> Self {
        // Tuple detection runs one subcover search per window per
        // extension cover; a leaner node budget keeps that affordable.
        // Exhausting it leaves the greedy incumbent, which is still an
        // upper bound on the count, so NEGATIVE verdicts remain sound.
        let entropy = EntropyOptions {
            node_budget: 100_000,
            ..EntropyOptions::default()
        };
        TupleOptions {
            tol: 1e-3,
            stability_ratio: 0.7,
            entropy,
        }
    }
}

/// `n ≥ 2` points given as patterns on a common window (`{0,…,r}^d` for
/// resolution `r`), not all identical.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleCandidate {
    pub window: FiniteSubset,
    pub points: Vec<Pattern>,
    pub r: usize,
}

impl TupleCandidate {
    /// Builds a candidate at resolution `r` from symbol words aligned
    /// with the sorted cells of the window `{0,…,r}^d`.
    pub fn from_words(sft: &Sft, r: usize, words: &[Vec<u8>]) -> Result<TupleCandidate> {
        let window = FiniteSubset::box_at_origin(sft.d, r as i64 + 1)?;
        let cells = window.to_vec();
        if words.len() < 2 {
            return Err(Error::BadCandidate("need at least two points".into()));
        }
        let language = lang::language(sft, &window, 1, 1 << 22)?;
        let mut points = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != cells.len() {
                return Err(Error::BadCandidate("word length mismatch".into()));
            }
            if !language.words.contains(w) {
                return Err(Error::BadCandidate(format!(
                    "word {w:?} is not in the window language"
                )));
            }
            points.push(Pattern::new(cells.iter().zip(w).map(|(g, &s)| (*g, s)))?);
        }
        if points.windows(2).all(|p| p[0] == p[1]) {
            return Err(Error::BadCandidate("candidate lies on the diagonal".into()));
        }
        Ok(TupleCandidate {
            window,
            points,
            r,
        })
    }
}

/// The canonical admissible cover of a candidate: one element per
/// distinct point, the windowed complement of its cylinder. Duplicated
/// points share an element.
#[derive(Clone, Debug)]
pub struct AdmissibleCoverSpec {
    pub cover: Cover,
    pub source: TupleCandidate,
}

pub fn admissible_cover(sft: &Sft, candidate: &TupleCandidate) -> Result<AdmissibleCoverSpec> {
    let language = lang::language(sft, &candidate.window, 1, 1 << 22)?;
    let mut distinct: Vec<&Pattern> = Vec::new();
    for p in &candidate.points {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    if distinct.len() < 2 {
        return Err(Error::BadCandidate("candidate lies on the diagonal".into()));
    }
    let cells = &language.window;
    let mut elements = Vec::with_capacity(distinct.len());
    for p in &distinct {
        let complement: Vec<Pattern> = language
            .words
            .iter()
            .filter(|w| {
                cells
                    .iter()
                    .zip(w.iter())
                    .any(|(g, &s)| p.symbol_at(g) != Some(s))
            })
            .map(|w| Pattern::new(cells.iter().zip(w).map(|(g, &s)| (*g, s))).expect("window cells"))
            .collect();
        if complement.is_empty() {
            return Err(Error::BadCandidate(
                "a point cylinder exhausts the window language".into(),
            ));
        }
        elements.push(SymbolicSet::new(complement));
    }
    Ok(AdmissibleCoverSpec {
        cover: Cover::new(elements, CoverKind::Open),
        source: candidate.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Positive,
    Negative,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub r: usize,
    pub verdict: Verdict,
    pub covers_checked: usize,
    /// Smallest certified upper bound among the extension covers.
    pub min_certified_upper: f64,
    /// Smallest last-window value among the extension covers.
    pub min_last: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleReport {
    pub verdict: Verdict,
    pub per_resolution: Vec<ResolutionReport>,
}

fn classify(est: &EntropyEstimate, opts: &TupleOptions) -> Verdict {
    if est.certified_upper < opts.tol {
        return Verdict::Negative;
    }
    let last = est.extrapolated;
    if last <= opts.tol {
        return Verdict::Undecided;
    }
    // Growth stability: compare against the value at half the horizon; a
    // sequence decaying like log(c·n)/n fails this and stays undecided.
    let half_n = est.values.len().div_ceil(2);
    let half = est.values[half_n - 1].value;
    if half > 0.0 && last / half >= opts.stability_ratio {
        Verdict::Positive
    } else {
        Verdict::Undecided
    }
}

/// Semi-decision of the entropy-tuple property via the canonical
/// admissible covers at resolutions `candidate.r ..= r_max`: at each
/// resolution all joint extensions of the points are tested. NEGATIVE at
/// any resolution refutes tuple-hood; POSITIVE across all resolutions is
/// heuristic evidence.
pub fn is_entropy_tuple(
    sft: &Sft,
    candidate: &TupleCandidate,
    r_max: usize,
    n_max: usize,
    opts: &TupleOptions,
) -> Result<TupleReport> {
    if r_max < candidate.r {
        return Err(Error::BadParameter("r_max below the candidate resolution".into()));
    }
    let seq = FolnerSequence::Box { d: sft.d };
    let mut reports = Vec::new();
    for r in candidate.r..=r_max {
        let window = FiniteSubset::box_at_origin(sft.d, r as i64 + 1)?;
        let cells = window.to_vec();
        let language = lang::language(sft, &window, 1, opts.entropy.language_budget)?;
        // Per-point extensions to the larger window.
        let extensions: Vec<Vec<Vec<u8>>> = candidate
            .points
            .iter()
            .map(|p| {
                language
                    .words
                    .iter()
                    .filter(|w| {
                        p.cells()
                            .iter()
                            .all(|(g, s)| w[language.position(g).expect("sub-window")] == *s)
                    })
                    .cloned()
                    .collect()
            })
            .collect();
        if extensions.iter().any(|e| e.is_empty()) {
            return Err(Error::BadCandidate("point has no extension".into()));
        }
        let mut verdicts = Vec::new();
        let mut min_cert = f64::INFINITY;
        let mut min_last = f64::INFINITY;
        let mut combo = vec![0usize; candidate.points.len()];
        'combos: loop {
            let words: Vec<Vec<u8>> = combo
                .iter()
                .enumerate()
                .map(|(i, &c)| extensions[i][c].clone())
                .collect();
            // Duplicated points must extend jointly.
            let mut consistent = true;
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    if candidate.points[i] == candidate.points[j] && words[i] != words[j] {
                        consistent = false;
                    }
                }
            }
            if consistent && !words.windows(2).all(|w| w[0] == w[1]) {
                let extended = TupleCandidate {
                    window: window.clone(),
                    points: words
                        .iter()
                        .map(|w| {
                            Pattern::new(cells.iter().zip(w).map(|(g, &s)| (*g, s)))
                                .expect("window cells")
                        })
                        .collect(),
                    r,
                };
                let spec = admissible_cover(sft, &extended)?;
                let est = entropy::h_top(sft, &spec.cover, &seq, n_max, &opts.entropy)?;
                min_cert = min_cert.min(est.certified_upper);
                min_last = min_last.min(est.extrapolated);
                verdicts.push(classify(&est, opts));
            }
            // Advance.
            let mut k = combo.len();
            loop {
                if k == 0 {
                    break 'combos;
                }
                k -= 1;
                combo[k] += 1;
                if combo[k] < extensions[k].len() {
                    break;
                }
                combo[k] = 0;
            }
        }
        let verdict = if verdicts.contains(&Verdict::Negative) {
            Verdict::Negative
        } else if !verdicts.is_empty() && verdicts.iter().all(|v| *v == Verdict::Positive) {
            Verdict::Positive
        } else {
            Verdict::Undecided
        };
        reports.push(ResolutionReport {
            r,
            verdict,
            covers_checked: verdicts.len(),
            min_certified_upper: min_cert,
            min_last,
        });
        if verdict == Verdict::Negative {
            break;
        }
    }
    let verdict = if reports.iter().any(|r| r.verdict == Verdict::Negative) {
        Verdict::Negative
    } else if reports.iter().all(|r| r.verdict == Verdict::Positive) {
        Verdict::Positive
    } else {
        Verdict::Undecided
    };
    Ok(TupleReport {
        verdict,
        per_resolution: reports,
    })
}

#[derive(Clone, Debug, Serialize)]
pub enum UpeVerdict {
    /// All canonical pair covers at this resolution show positive growth.
    Evidence,
    /// A pair with certified zero entropy; u.p.e. is refuted.
    Refuted { witness: (Vec<u8>, Vec<u8>) },
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct UpeReport {
    pub r: usize,
    pub verdict: UpeVerdict,
    pub pair_verdicts: Vec<(Vec<u8>, Vec<u8>, Verdict)>,
}

/// U.p.e. heuristic at resolution `r`: every pair of distinct window
/// words is tested as a tuple candidate.
pub fn upe_check(sft: &Sft, r: usize, n_max: usize, opts: &TupleOptions) -> Result<UpeReport> {
    let window = FiniteSubset::box_at_origin(sft.d, r as i64 + 1)?;
    let language = lang::language(sft, &window, 1, opts.entropy.language_budget)?;
    let words = &language.words;
    let mut pair_verdicts = Vec::new();
    let mut refuted: Option<(Vec<u8>, Vec<u8>)> = None;
    let mut all_positive = true;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let candidate = TupleCandidate::from_words(sft, r, &[words[i].clone(), words[j].clone()])?;
            let report = is_entropy_tuple(sft, &candidate, r, n_max, opts)?;
            if report.verdict == Verdict::Negative && refuted.is_none() {
                refuted = Some((words[i].clone(), words[j].clone()));
            }
            all_positive &= report.verdict == Verdict::Positive;
            pair_verdicts.push((words[i].clone(), words[j].clone(), report.verdict));
        }
    }
    let verdict = match refuted {
        Some(witness) => UpeVerdict::Refuted { witness },
        None if all_positive => UpeVerdict::Evidence,
        None => UpeVerdict::Undecided,
    };
    Ok(UpeReport {
        r,
        verdict,
        pair_verdicts,
    })
}

/// The relative `n`-fold product of `μ` over its Pinsker algebra,
/// restricted to the two solvable regimes: trivial Pinsker algebra
/// (Bernoulli, product measure) and full Pinsker algebra (zero entropy,
/// diagonal measure).
#[derive(Clone, Debug)]
pub struct LambdaN {
    pub variant: LambdaVariant,
    pub base: Measure,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LambdaVariant {
    Product,
    Diagonal,
}

pub fn lambda_n(mu: &Measure, n: usize) -> Result<LambdaN> {
    if n < 2 {
        return Err(Error::BadParameter("lambda_n needs n >= 2".into()));
    }
    let variant = match &mu.variant {
        MeasureVariant::Bernoulli { .. } if mu.pinsker_trivial => LambdaVariant::Product,
        MeasureVariant::Periodic { .. } => LambdaVariant::Diagonal,
        _ if mu.zero_entropy => LambdaVariant::Diagonal,
        _ => {
            return Err(Error::UnsupportedMeasure(
                "lambda_n supports Bernoulli (trivial Pinsker) and zero-entropy classes".into(),
            ))
        }
    };
    Ok(LambdaN {
        variant,
        base: mu.clone(),
        n,
    })
}

impl LambdaN {
    /// Mass of the product set `A_1 × … × A_n`.
    pub fn product_mass(&self, sets: &[SymbolicSet], window: &FiniteSubset, sft: &Sft) -> Result<Q> {
        if sets.len() != self.n {
            return Err(Error::BadParameter(format!(
                "expected {} factors, got {}",
                self.n,
                sets.len()
            )));
        }
        match self.variant {
            LambdaVariant::Product => {
                let mut m = Q::from_integer(1.into());
                for s in sets {
                    m *= self.base.set_mass(s, window, sft)?;
                }
                Ok(m)
            }
            LambdaVariant::Diagonal => {
                let mut meet = sets[0].clone();
                for s in &sets[1..] {
                    meet = meet.intersect(s);
                }
                if meet.cylinders.is_empty() {
                    return Ok(Q::zero());
                }
                self.base.set_mass(&meet, window, sft)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureTupleReport {
    pub h_minus_certified_upper: f64,
    pub h_minus_last: f64,
    pub h_positive: bool,
    pub lambda_mass: f64,
    pub lambda_positive: bool,
    pub agree: bool,
    /// Elements equal to the full space make the λ-side trivially zero;
    /// the equivalence is not asserted for them.
    pub degenerate_elements: Vec<usize>,
}

/// Checks the equivalence "positive measure entropy of the cover iff
/// positive `λ_n` mass of the product of complements" on one instance.
pub fn measure_tuple_check(
    sft: &Sft,
    mu: &Measure,
    cover: &Cover,
    seq: &FolnerSequence,
    n_max: usize,
    opts: &TupleOptions,
) -> Result<MeasureTupleReport> {
    let est = entropy::h_mu_minus_cover(sft, mu, cover, seq, n_max, &opts.entropy)?;
    // Windowed complements of the elements.
    let mut hull = cover.shape_hull();
    if hull.is_empty() {
        hull.push(GroupElement::identity(sft.d)?);
    }
    let window = FiniteSubset::new(sft.d, hull.iter().copied())?;
    let model = WindowModel::build(sft, &window, opts.entropy.margin, opts.entropy.language_budget)?;
    let mut degenerate = Vec::new();
    let mut complements = Vec::with_capacity(cover.len());
    for (i, e) in cover.elements.iter().enumerate() {
        let bits = model.restrict(e)?;
        let complement: Vec<Pattern> = (0..model.word_count())
            .filter(|&w| !bits.get(w))
            .map(|w| model.word_pattern(w))
            .collect();
        if complement.is_empty() {
            degenerate.push(i);
        }
        complements.push(SymbolicSet::new(complement));
    }
    let lambda = lambda_n(mu, cover.len())?;
    let mass = lambda.product_mass(&complements, &window, sft)?;
    let lambda_positive = mass > Q::zero();
    let h_positive = est.certified_upper > opts.tol;
    let agree = degenerate.is_empty() && (h_positive == lambda_positive);
    Ok(MeasureTupleReport {
        h_minus_certified_upper: est.certified_upper,
        h_minus_last: est.extrapolated,
        h_positive,
        lambda_mass: num_traits::ToPrimitive::to_f64(&mass).unwrap_or(f64::NAN),
        lambda_positive,
        agree,
        degenerate_elements: degenerate,
    })
}

/// One sampled instance of the product-formula check.
#[derive(Clone, Debug, Serialize)]
pub struct ProductInstance {
    pub detector: Verdict,
    pub predicted: Verdict,
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCheckReport {
    pub instances: Vec<ProductInstance>,
    pub decided: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub undecided: usize,
}

/// Compares detector verdicts on product-system candidates against the
/// product formula computed from factor verdicts. Both factors are
/// assumed fully supported (true for every built-in example system), so
/// the support-diagonal terms are diagonal language words. Instances
/// where either side is undecided are excluded from the tally.
#[allow(clippy::too_many_arguments)]
pub fn product_tuple_check(
    sft1: &Sft,
    sft2: &Sft,
    candidates: &[Vec<(Vec<u8>, Vec<u8>)>],
    r: usize,
    n_max_product: usize,
    n_max_factor1: usize,
    n_max_factor2: usize,
    opts: &TupleOptions,
) -> Result<ProductCheckReport> {
    let product = Sft::product(sft1, sft2)?;
    let kb = sft2.alphabet.len() as u8;
    let mut instances = Vec::new();
    for tuple in candidates {
        // tuple: per point, the (factor1 word, factor2 word) pair.
        let product_words: Vec<Vec<u8>> = tuple
            .iter()
            .map(|(w1, w2)| w1.iter().zip(w2).map(|(&a, &b)| a * kb + b).collect())
            .collect();
        if product_words.windows(2).all(|w| w[0] == w[1]) {
            continue;
        }
        let candidate = TupleCandidate::from_words(&product, r, &product_words)?;
        let detector = is_entropy_tuple(&product, &candidate, r, n_max_product, opts)?.verdict;

        let proj1: Vec<Vec<u8>> = tuple.iter().map(|(w1, _)| w1.clone()).collect();
        let proj2: Vec<Vec<u8>> = tuple.iter().map(|(_, w2)| w2.clone()).collect();
        let off1 = !proj1.windows(2).all(|w| w[0] == w[1]);
        let off2 = !proj2.windows(2).all(|w| w[0] == w[1]);
        let v1 = if off1 {
            is_entropy_tuple(sft1, &TupleCandidate::from_words(sft1, r, &proj1)?, r, n_max_factor1, opts)?
                .verdict
        } else {
            Verdict::Undecided
        };
        let v2 = if off2 {
            is_entropy_tuple(sft2, &TupleCandidate::from_words(sft2, r, &proj2)?, r, n_max_factor2, opts)?
                .verdict
        } else {
            Verdict::Undecided
        };
        let predicted = predict_product(off1, v1, off2, v2);
        let agree = match (detector, predicted) {
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => None,
            (d, p) => Some(d == p),
        };
        instances.push(ProductInstance {
            detector,
            predicted,
            agree,
        });
    }
    let decided = instances.iter().filter(|i| i.agree.is_some()).count();
    let agreements = instances.iter().filter(|i| i.agree == Some(true)).count();
    let disagreements = instances.iter().filter(|i| i.agree == Some(false)).count();
    let undecided = instances.len() - decided;
    Ok(ProductCheckReport {
        instances,
        decided,
        agreements,
        disagreements,
        undecided,
    })
}

/// `E_n(X_1×X_2) = E_n(X_1)×(E_n(X_2) ∪ Δ^S) ∪ Δ^S×E_n(X_2)` with both
/// factors fully supported.
fn predict_product(off1: bool, v1: Verdict, off2: bool, v2: Verdict) -> Verdict {
    use Verdict::*;
    match (off1, off2) {
        (true, true) => match (v1, v2) {
            (Positive, Positive) => Positive,
            (Negative, _) | (_, Negative) => {
                // Membership needs both off-diagonal projections to be
                // tuples; one certified non-tuple decides negatively.
                Negative
            }
            _ => Undecided,
        },
        (true, false) => v1,
        (false, true) => v2,
        (false, false) => Undecided,
    }
}

/// Searches for the transversality witness behind positive join growth:
/// if the join of `{U_1ᶜ, U_2ᶜ}` over the sequence `g_1,…,g_m` needs more
/// than `m+1` covering sets, then some `U_1 ∩ g_{j_1}g_{j_2}^{-1}U_2` is
/// non-empty; the indices are found and returned. Requires `U_1 ∩ U_2 = ∅`
/// so that the complements form a cover.
pub fn pair_cover_separation(
    sft: &Sft,
    u1: &SymbolicSet,
    u2: &SymbolicSet,
    gs: &[GroupElement],
    opts: &TupleOptions,
) -> Result<Option<(usize, usize)>> {
    if u1.intersect(u2).nonempty_in(sft, 1)? {
        return Err(Error::BadParameter(
            "U_1 and U_2 must be disjoint so that the complements cover".into(),
        ));
    }
    let mut hull: Vec<GroupElement> = u1.shape_hull();
    hull.extend(u2.shape_hull());
    if hull.is_empty() {
        hull.push(GroupElement::identity(sft.d)?);
    }
    hull.sort();
    hull.dedup();
    let f = FiniteSubset::new(sft.d, gs.iter().copied())?;
    let window = crate::window::minkowski(&f, &hull)?;
    let model = WindowModel::build(sft, &window, opts.entropy.margin, opts.entropy.language_budget)?;
    // Tags of the complement cover {U_1ᶜ, U_2ᶜ}.
    let mut tags = vec![vec![0u32; gs.len()]; model.word_count()];
    for (pi, g) in gs.iter().enumerate() {
        for (ei, u) in [u1, u2].iter().enumerate() {
            let inside = model.restrict_shifted(u, Some(g))?;
            for w in 0..model.word_count() {
                if !inside.get(w) {
                    tags[w][pi] |= 1 << ei;
                }
            }
        }
    }
    let joined = model.join_elements_from_tags(&tags, opts.entropy.incidence_budget)?;
    let mut budget = opts.entropy.node_budget;
    let count = match &joined {
        crate::window::JoinedCover::Partition { groups } => groups.len(),
        crate::window::JoinedCover::General { elements } => {
            entropy::exact_min_cover(elements, model.word_count(), &mut budget).0
        }
    };
    if count <= gs.len() + 1 {
        return Ok(None);
    }
    for j1 in 0..gs.len() {
        for j2 in j1 + 1..gs.len() {
            let shift = gs[j1].multiply(&gs[j2].inverse())?;
            let meet = u1.intersect(&u2.translate(&shift)?);
            if meet.nonempty_in(sft, 1)? {
                return Ok(Some((j1, j2)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::q;

    fn opts() -> TupleOptions {
        TupleOptions::default()
    }

    #[test]
    fn admissible_cover_binary_symbols() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let c = TupleCandidate::from_words(&sft, 0, &[vec![0], vec![1]]).unwrap();
        let spec = admissible_cover(&sft, &c).unwrap();
        // Each element is the other point's cylinder.
        assert_eq!(spec.cover.len(), 2);
        assert_eq!(spec.cover.elements[0].cylinders, vec![Pattern::word(0, &[1])]);
        assert_eq!(spec.cover.elements[1].cylinders, vec![Pattern::word(0, &[0])]);
        // Diagonal candidates are rejected at construction.
        assert!(TupleCandidate::from_words(&sft, 0, &[vec![1], vec![1]]).is_err());
    }

    #[test]
    fn admissible_cover_golden_mean_r1() {
        let sft = Sft::golden_mean();
        let c = TupleCandidate::from_words(&sft, 1, &[vec![0, 0], vec![1, 0]]).unwrap();
        let spec = admissible_cover(&sft, &c).unwrap();
        assert_eq!(spec.cover.len(), 2);
        // Complements within the 3-word language {00, 01, 10}.
        assert_eq!(spec.cover.elements[0].cylinders.len(), 2);
        assert_eq!(spec.cover.elements[1].cylinders.len(), 2);
    }

    #[test]
    fn full_shift_pair_is_positive() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let c = TupleCandidate::from_words(&sft, 0, &[vec![0], vec![1]]).unwrap();
        let report = is_entropy_tuple(&sft, &c, 0, 8, &opts()).unwrap();
        assert_eq!(report.verdict, Verdict::Positive);
        // The canonical cover is the symbol partition: growth is log 2.
        assert!((report.per_resolution[0].min_last - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn period_two_orbit_pair_is_negative() {
        let sft = Sft::period_two_orbit();
        let c = TupleCandidate::from_words(&sft, 0, &[vec![0], vec![1]]).unwrap();
        // N(U_{F_n}) ≤ 2 always, so the certified upper bound crosses the
        // tolerance once n exceeds ln2/tol.
        let report = is_entropy_tuple(&sft, &c, 0, 720, &opts()).unwrap();
        assert_eq!(report.verdict, Verdict::Negative);
    }

    #[test]
    fn upe_checks() {
        let full = Sft::full_shift(2, 1).unwrap();
        let report = upe_check(&full, 1, 8, &opts()).unwrap();
        assert!(matches!(report.verdict, UpeVerdict::Evidence));
        assert_eq!(report.pair_verdicts.len(), 6);

        let orbit = Sft::period_two_orbit();
        let report2 = upe_check(&orbit, 0, 720, &opts()).unwrap();
        assert!(matches!(report2.verdict, UpeVerdict::Refuted { .. }));

        let golden = Sft::golden_mean();
        let report3 = upe_check(&golden, 1, 10, &opts()).unwrap();
        assert!(
            matches!(report3.verdict, UpeVerdict::Evidence),
            "golden-mean pairs: {:?}",
            report3.pair_verdicts
        );
    }

    #[test]
    fn lambda_variants() {
        let bern = Measure::bernoulli(1, vec![q(1, 2), q(1, 2)]).unwrap();
        let l2 = lambda_n(&bern, 2).unwrap();
        assert_eq!(l2.variant, LambdaVariant::Product);
        let sft = Sft::full_shift(2, 1).unwrap();
        let window = FiniteSubset::interval(0, 0);
        let s0 = SymbolicSet::cylinder(Pattern::word(0, &[0]));
        let s1 = SymbolicSet::cylinder(Pattern::word(0, &[1]));
        assert_eq!(
            l2.product_mass(&[s0.clone(), s1.clone()], &window, &sft).unwrap(),
            q(1, 4)
        );
        // Bernoulli(1/3, 2/3), n = 3: product evaluation.
        let b3 = Measure::bernoulli(1, vec![q(1, 3), q(2, 3)]).unwrap();
        let l3 = lambda_n(&b3, 3).unwrap();
        assert_eq!(
            l3.product_mass(&[s0.clone(), s0.clone(), s1.clone()], &window, &sft).unwrap(),
            q(2, 27)
        );
        // Periodic base: diagonal; disjoint sets get zero mass.
        let per = Measure::periodic_word(vec![0, 1]).unwrap();
        let ld = lambda_n(&per, 2).unwrap();
        assert_eq!(ld.variant, LambdaVariant::Diagonal);
        let orbit = Sft::period_two_orbit();
        assert_eq!(ld.product_mass(&[s0, s1], &window, &orbit).unwrap(), Q::zero());
        // Markov is outside the two solvable regimes.
        let markov = Measure::golden_markov(q(1, 2)).unwrap();
        assert!(lambda_n(&markov, 2).is_err());
    }

    #[test]
    fn measure_tuple_check_both_sides() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let mu = Measure::bernoulli(1, vec![q(1, 2), q(1, 2)]).unwrap();
        let c = TupleCandidate::from_words(&sft, 0, &[vec![0], vec![1]]).unwrap();
        let cover = admissible_cover(&sft, &c).unwrap().cover;
        let seq = FolnerSequence::Box { d: 1 };
        let rep = measure_tuple_check(&sft, &mu, &cover, &seq, 8, &opts()).unwrap();
        assert!(rep.h_positive && rep.lambda_positive && rep.agree);

        // Degenerate element: U_1 = X makes the λ-side trivially zero.
        let degenerate = Cover::open(vec![
            SymbolicSet::full(),
            SymbolicSet::cylinder(Pattern::word(0, &[0])),
        ]);
        let rep2 = measure_tuple_check(&sft, &mu, &degenerate, &seq, 6, &opts()).unwrap();
        assert_eq!(rep2.degenerate_elements, vec![0]);
        assert!(!rep2.agree);
    }

    #[test]
    fn pair_cover_separation_cases() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let u1 = SymbolicSet::cylinder(Pattern::word(0, &[1]));
        let u2 = SymbolicSet::cylinder(Pattern::word(0, &[0]));
        let gs: Vec<GroupElement> = (1..=4).map(GroupElement::z).collect();
        let witness = pair_cover_separation(&sft, &u1, &u2, &gs, &opts()).unwrap();
        let (j1, j2) = witness.expect("full shift mixes");
        assert!(j1 < j2);
        // Overlapping U_1, U_2 violate the cover precondition.
        assert!(pair_cover_separation(&sft, &u1, &u1, &gs, &opts()).is_err());
        // Period-2 orbit: counts stay at 2 ≤ m+1, no witness sought.
        let orbit = Sft::period_two_orbit();
        let witness2 = pair_cover_separation(&orbit, &u1, &u2, &gs, &opts()).unwrap();
        assert!(witness2.is_none());
        // U_1 = ∅ gives U_1ᶜ = X: a single covering set, never exceeded.
        let empty = SymbolicSet::empty();
        let witness3 = pair_cover_separation(&sft, &empty, &u2, &gs, &opts()).unwrap();
        assert!(witness3.is_none());
    }

    #[test]
    fn verdict_is_symmetric_in_the_points() {
        let sft = Sft::golden_mean();
        let a = vec![0, 0];
        let b = vec![1, 0];
        let fwd = TupleCandidate::from_words(&sft, 1, &[a.clone(), b.clone()]).unwrap();
        let rev = TupleCandidate::from_words(&sft, 1, &[b, a]).unwrap();
        let o = opts();
        let vf = is_entropy_tuple(&sft, &fwd, 1, 8, &o).unwrap().verdict;
        let vr = is_entropy_tuple(&sft, &rev, 1, 8, &o).unwrap().verdict;
        assert_eq!(vf, vr);
    }

    #[test]
    fn product_check_small_sample() {
        let full = Sft::full_shift(2, 1).unwrap();
        let orbit = Sft::period_two_orbit();
        // (full × orbit): pairs differing in the first factor with equal
        // second factor are predicted positive.
        let candidates = vec![
            vec![(vec![0], vec![0]), (vec![1], vec![0])],
            vec![(vec![0], vec![1]), (vec![1], vec![1])],
        ];
        let report = product_tuple_check(&full, &orbit, &candidates, 0, 8, 8, 720, &opts()).unwrap();
        assert_eq!(report.disagreements, 0);
        assert_eq!(report.agreements, 2);
    }
}
