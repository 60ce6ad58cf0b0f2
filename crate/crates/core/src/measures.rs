//! Invariant measures with exact cylinder masses: Bernoulli products,
//! stationary Markov chains (d = 1), uniform measures on periodic orbits,
//! convex combinations, and empirical measures built from point sets.
//!
//! Masses are exact rationals wherever the defining data is rational;
//! entropy code consumes an `f64` fast path per window. Ergodicity and
//! Pinsker-triviality are metadata asserted by the constructors, not
//! decided.

use crate::group::{FiniteSubset, GroupElement};
use crate::subshift::{Pattern, Sft, SymbolicSet};
use crate::window::WindowModel;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Base points on a master window plus an averaging set, standing for the
/// finite-window average `(1/|F|) Σ_{g∈F} g·ν` of a uniform measure `ν`
/// on the points.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSpec {
    pub master: FiniteSubset,
    pub base_points: Vec<Pattern>,
    pub averaging: FiniteSubset,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureVariant {
    Bernoulli {
        probs: Vec<Q>,
    },
    Markov {
        transition: Vec<Vec<Q>>,
        stationary: Vec<Q>,
    },
    /// Uniform measure on the orbit of a configuration that is periodic
    /// with period `periods[j]` along axis `j`; `cells` holds the symbols
    /// of the fundamental box in row-major order.
    Periodic {
        periods: Vec<i64>,
        cells: Vec<u8>,
    },
    Convex {
        weights: Vec<Q>,
        components: Vec<Measure>,
    },
    Empirical {
        master: Vec<GroupElement>,
        base: Vec<Vec<u8>>,
        averaging: Vec<GroupElement>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    pub variant: MeasureVariant,
    pub d: usize,
    /// Asserted by the constructor, required by the Katok statistic.
    pub ergodic: bool,
    /// Trivial Pinsker algebra (Bernoulli with at least two positive
    /// weights); enables the product form of `λ_n`.
    pub pinsker_trivial: bool,
    /// Zero-entropy class (periodic orbits, degenerate Bernoulli);
    /// enables the diagonal form of `λ_n`.
    pub zero_entropy: bool,
}

impl Measure {
    pub fn bernoulli(d: usize, probs: Vec<Q>) -> Result<Measure> {
        let sum: Q = probs.iter().cloned().sum();
        if probs.iter().any(|p| p.is_negative()) || !sum.is_one() {
            return Err(Error::Measure("probabilities must be >= 0 and sum to 1".into()));
        }
        let positive = probs.iter().filter(|p| p.is_positive()).count();
        Ok(Measure {
            variant: MeasureVariant::Bernoulli { probs },
            d,
            ergodic: true,
            pinsker_trivial: positive >= 2,
            zero_entropy: positive == 1,
        })
    }

    pub fn bernoulli_uniform(d: usize, k: usize) -> Result<Measure> {
        Measure::bernoulli(d, vec![q(1, k as i64); k])
    }

    /// Stationary Markov chain over `Z`. When `stationary` is omitted it
    /// is solved exactly from `πP = π, Σπ = 1`.
    pub fn markov(transition: Vec<Vec<Q>>, stationary: Option<Vec<Q>>) -> Result<Measure> {
        let k = transition.len();
        if k == 0 || transition.iter().any(|row| row.len() != k) {
            return Err(Error::Measure("transition matrix must be square".into()));
        }
        for row in &transition {
            if row.iter().any(|p| p.is_negative()) {
                return Err(Error::Measure("negative transition probability".into()));
            }
            let s: Q = row.iter().cloned().sum();
            if !s.is_one() {
                return Err(Error::Measure("transition rows must sum to 1".into()));
            }
        }
        let pi = match stationary {
            Some(pi) => pi,
            None => solve_stationary(&transition)?,
        };
        if pi.len() != k {
            return Err(Error::Measure("stationary vector has wrong length".into()));
        }
        let s: Q = pi.iter().cloned().sum();
        if !s.is_one() || pi.iter().any(|p| p.is_negative()) {
            return Err(Error::Measure("stationary vector must be a distribution".into()));
        }
        for j in 0..k {
            let lhs: Q = (0..k).map(|i| pi[i].clone() * transition[i][j].clone()).sum();
            if lhs != pi[j] {
                return Err(Error::Measure("stationary vector fails πP = π".into()));
            }
        }
        let (irreducible, aperiodic) = chain_structure(&transition);
        Ok(Measure {
            variant: MeasureVariant::Markov {
                transition,
                stationary: pi,
            },
            d: 1,
            ergodic: irreducible,
            pinsker_trivial: irreducible && aperiodic,
            zero_entropy: false,
        })
    }

    /// The golden-mean chain with parameter `p`: transitions
    /// `0 → 1` with probability `p`, `1 → 0` always.
    pub fn golden_markov(p: Q) -> Result<Measure> {
        let one = Q::one();
        let transition = vec![vec![one.clone() - p.clone(), p], vec![one, Q::zero()]];
        Measure::markov(transition, None)
    }

    /// Uniform measure on the orbit of the `d = 1` periodic word.
    pub fn periodic_word(word: Vec<u8>) -> Result<Measure> {
        if word.is_empty() {
            return Err(Error::Measure("periodic word must be non-empty".into()));
        }
        Ok(Measure {
            variant: MeasureVariant::Periodic {
                periods: vec![word.len() as i64],
                cells: word,
            },
            d: 1,
            ergodic: true,
            pinsker_trivial: false,
            zero_entropy: true,
        })
    }

    pub fn convex(weights: Vec<Q>, components: Vec<Measure>) -> Result<Measure> {
        if weights.len() != components.len() || components.is_empty() {
            return Err(Error::Measure("weights and components must align".into()));
        }
        let s: Q = weights.iter().cloned().sum();
        if !s.is_one() || weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Measure("weights must be >= 0 and sum to 1".into()));
        }
        let d = components[0].d;
        if components.iter().any(|c| c.d != d) {
            return Err(Error::DimensionMismatch(d, 0));
        }
        let all_same = components.windows(2).all(|w| w[0] == w[1]);
        let ergodic = all_same && components[0].ergodic;
        let zero_entropy = components.iter().all(|c| c.zero_entropy);
        Ok(Measure {
            variant: MeasureVariant::Convex {
                weights,
                components,
            },
            d,
            ergodic,
            pinsker_trivial: false,
            zero_entropy,
        })
    }

    pub fn empirical(spec: EmpiricalSpec) -> Result<Measure> {
        if spec.base_points.is_empty() {
            return Err(Error::Measure("empirical spec needs base points".into()));
        }
        let master = spec.master.to_vec();
        let pos: HashMap<GroupElement, usize> =
            master.iter().copied().enumerate().map(|(i, g)| (g, i)).collect();
        let mut base = Vec::with_capacity(spec.base_points.len());
        for p in &spec.base_points {
            if p.cells().len() != master.len() {
                return Err(Error::Measure("base point must be total on the master window".into()));
            }
            let mut word = vec![0u8; master.len()];
            for (g, s) in p.cells() {
                match pos.get(g) {
                    Some(&i) => word[i] = *s,
                    None => return Err(Error::EscapesMasterWindow),
                }
            }
            base.push(word);
        }
        Ok(Measure {
            variant: MeasureVariant::Empirical {
                master,
                base,
                averaging: spec.averaging.to_vec(),
            },
            d: spec.master.dim(),
            ergodic: false,
            pinsker_trivial: false,
            zero_entropy: false,
        })
    }

    /// Exact mass of the cylinder of `p`.
    pub fn cylinder_mass(&self, p: &Pattern) -> Result<Q> {
        match &self.variant {
            MeasureVariant::Bernoulli { probs } => {
                let mut m = Q::one();
                for (_, s) in p.cells() {
                    let pr = probs
                        .get(*s as usize)
                        .ok_or_else(|| Error::UnknownSymbol(format!("symbol {s}")))?;
                    m *= pr.clone();
                }
                Ok(m)
            }
            MeasureVariant::Markov {
                transition,
                stationary,
            } => {
                let cells = p.cells();
                if cells.is_empty() {
                    return Ok(Q::one());
                }
                let mut m = stationary[cells[0].1 as usize].clone();
                for w in cells.windows(2) {
                    let gap = w[1].0.coords()[0] - w[0].0.coords()[0];
                    let step = markov_power(transition, gap as usize);
                    m *= step[w[0].1 as usize][w[1].1 as usize].clone();
                }
                Ok(m)
            }
            MeasureVariant::Periodic { periods, cells } => {
                let total: i64 = periods.iter().product();
                let mut consistent = 0i64;
                let mut shift = vec![0i64; periods.len()];
                loop {
                    if p.cells().iter().all(|(g, s)| {
                        periodic_symbol(periods, cells, g.coords(), &shift) == *s
                    }) {
                        consistent += 1;
                    }
                    let mut j = periods.len();
                    loop {
                        if j == 0 {
                            shift = Vec::new();
                            break;
                        }
                        j -= 1;
                        shift[j] += 1;
                        if shift[j] < periods[j] {
                            break;
                        }
                        shift[j] = 0;
                    }
                    if shift.is_empty() {
                        break;
                    }
                }
                Ok(q(consistent, total))
            }
            MeasureVariant::Convex {
                weights,
                components,
            } => {
                let mut m = Q::zero();
                for (w, c) in weights.iter().zip(components) {
                    m += w.clone() * c.cylinder_mass(p)?;
                }
                Ok(m)
            }
            MeasureVariant::Empirical {
                master,
                base,
                averaging,
            } => {
                let pos: HashMap<&GroupElement, usize> =
                    master.iter().enumerate().map(|(i, g)| (g, i)).collect();
                let mut hits = 0i64;
                for g in averaging {
                    let cols = p
                        .cells()
                        .iter()
                        .map(|(h, s)| {
                            let at = h.multiply(g)?;
                            pos.get(&at)
                                .map(|&i| (i, *s))
                                .ok_or(Error::EscapesMasterWindow)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    for b in base {
                        if cols.iter().all(|&(i, s)| b[i] == s) {
                            hits += 1;
                        }
                    }
                }
                Ok(q(hits, (averaging.len() * base.len()) as i64))
            }
        }
    }

    /// Fast `f64` masses for all words of a window model.
    pub fn word_masses_f64(&self, window: &[GroupElement], words: &[Vec<u8>]) -> Result<Vec<f64>> {
        match &self.variant {
            MeasureVariant::Bernoulli { probs } => {
                let pf: Vec<f64> = probs.iter().map(q_to_f64).collect();
                Ok(words
                    .iter()
                    .map(|w| w.iter().map(|&s| pf[s as usize]).product())
                    .collect())
            }
            MeasureVariant::Markov {
                transition,
                stationary,
            } => {
                let k = transition.len();
                let pf: Vec<f64> = stationary.iter().map(q_to_f64).collect();
                let mut powers: HashMap<i64, Vec<Vec<f64>>> = HashMap::new();
                let gaps: Vec<i64> = window
                    .windows(2)
                    .map(|w| w[1].coords()[0] - w[0].coords()[0])
                    .collect();
                for &gap in &gaps {
                    powers.entry(gap).or_insert_with(|| {
                        markov_power(transition, gap as usize)
                            .iter()
                            .map(|row| row.iter().map(q_to_f64).collect())
                            .collect()
                    });
                }
                let _ = k;
                Ok(words
                    .iter()
                    .map(|w| {
                        let mut m = pf[w[0] as usize];
                        for (i, &gap) in gaps.iter().enumerate() {
                            m *= powers[&gap][w[i] as usize][w[i + 1] as usize];
                        }
                        m
                    })
                    .collect())
            }
            MeasureVariant::Periodic { periods, cells } => {
                let total: i64 = periods.iter().product();
                Ok(words
                    .iter()
                    .map(|w| {
                        let mut consistent = 0i64;
                        let mut shift = vec![0i64; periods.len()];
                        loop {
                            if window
                                .iter()
                                .zip(w)
                                .all(|(g, &s)| periodic_symbol(periods, cells, g.coords(), &shift) == s)
                            {
                                consistent += 1;
                            }
                            let mut j = periods.len();
                            loop {
                                if j == 0 {
                                    shift = Vec::new();
                                    break;
                                }
                                j -= 1;
                                shift[j] += 1;
                                if shift[j] < periods[j] {
                                    break;
                                }
                                shift[j] = 0;
                            }
                            if shift.is_empty() {
                                break;
                            }
                        }
                        consistent as f64 / total as f64
                    })
                    .collect())
            }
            MeasureVariant::Convex {
                weights,
                components,
            } => {
                let mut out = vec![0.0; words.len()];
                for (w, c) in weights.iter().zip(components) {
                    let wf = q_to_f64(w);
                    for (o, m) in out.iter_mut().zip(c.word_masses_f64(window, words)?) {
                        *o += wf * m;
                    }
                }
                Ok(out)
            }
            MeasureVariant::Empirical {
                master,
                base,
                averaging,
            } => {
                let pos: HashMap<&GroupElement, usize> =
                    master.iter().enumerate().map(|(i, g)| (g, i)).collect();
                let index: HashMap<&[u8], usize> =
                    words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
                let mut out = vec![0.0; words.len()];
                let unit = 1.0 / (averaging.len() * base.len()) as f64;
                let mut proj = vec![0u8; window.len()];
                for g in averaging {
                    let cols = window
                        .iter()
                        .map(|h| {
                            let at = h.multiply(g)?;
                            pos.get(&at).copied().ok_or(Error::EscapesMasterWindow)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    for b in base {
                        for (j, &c) in cols.iter().enumerate() {
                            proj[j] = b[c];
                        }
                        if let Some(&i) = index.get(proj.as_slice()) {
                            out[i] += unit;
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Exact mass of a symbolic set, summed over the window language of
    /// the subshift.
    pub fn set_mass(&self, set: &SymbolicSet, window: &FiniteSubset, sft: &Sft) -> Result<Q> {
        let model = WindowModel::build(sft, window, 0, crate::subshift::DEFAULT_SYMBOLIC_BUDGET)?;
        let bits = model.restrict(set)?;
        let mut m = Q::zero();
        for w in bits.iter_ones() {
            m += self.cylinder_mass(&model.word_pattern(w))?;
        }
        Ok(m)
    }

    /// `|μ(U) − μ(g⁻¹U)|` as an `f64`; zero for the invariant classes,
    /// the measured defect for empirical measures.
    pub fn invariance_defect(
        &self,
        set: &SymbolicSet,
        g: &GroupElement,
        window: &FiniteSubset,
        sft: &Sft,
    ) -> Result<f64> {
        let here = self.set_mass(set, window, sft)?;
        let moved_set = set.translate(g)?;
        let moved_window = crate::window::minkowski(window, &[*g])?.union(window)?;
        let there = self.set_mass(&moved_set, &moved_window, sft)?;
        Ok(q_to_f64(&(here - there).abs()))
    }
}

/// `μ = a·ν + (1−a)·η`.
pub fn convex_combine(a: Q, nu: Measure, eta: Measure) -> Result<Measure> {
    if a.is_negative() || a > Q::one() {
        return Err(Error::Measure("mixing weight must lie in [0,1]".into()));
    }
    let b = Q::one() - a.clone();
    Measure::convex(vec![a, b], vec![nu, eta])
}

fn periodic_symbol(periods: &[i64], cells: &[u8], coords: &[i64], shift: &[i64]) -> u8 {
    let mut idx = 0usize;
    for (j, (&c, &l)) in coords.iter().zip(periods).enumerate() {
        let r = (c + shift[j]).rem_euclid(l);
        idx = idx * l as usize + r as usize;
    }
    cells[idx]
}

fn markov_power(p: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let k = p.len();
    let mut result: Vec<Vec<Q>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for _ in 0..n {
        let mut next = vec![vec![Q::zero(); k]; k];
        for i in 0..k {
            for l in 0..k {
                if result[i][l].is_zero() {
                    continue;
                }
                for j in 0..k {
                    if p[l][j].is_zero() {
                        continue;
                    }
                    let add = result[i][l].clone() * p[l][j].clone();
                    next[i][j] += add;
                }
            }
        }
        result = next;
    }
    result
}

fn solve_stationary(p: &[Vec<Q>]) -> Result<Vec<Q>> {
    let k = p.len();
    // Rows 0..k−1: Σ_i π_i (P_ij − δ_ij) = 0 for j < k−1; last row Σπ = 1.
    let mut a: Vec<Vec<Q>> = Vec::with_capacity(k);
    for j in 0..k - 1 {
        let mut row: Vec<Q> = (0..k)
            .map(|i| p[i][j].clone() - if i == j { Q::one() } else { Q::zero() })
            .collect();
        row.push(Q::zero());
        a.push(row);
    }
    let mut last = vec![Q::one(); k];
    last.push(Q::one());
    a.push(last);
    // Gaussian elimination with exact pivots.
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Measure("stationary system is singular".into()))?;
        a.swap(col, pivot);
        let pv = a[col][col].clone();
        for c in col..=k {
            a[col][c] = a[col][c].clone() / pv.clone();
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=k {
                    let sub = factor.clone() * a[col][c].clone();
                    a[r][c] = a[r][c].clone() - sub;
                }
            }
        }
    }
    Ok((0..k).map(|r| a[r][k].clone()).collect())
}

fn chain_structure(p: &[Vec<Q>]) -> (bool, bool) {
    let k = p.len();
    let reach = |from: usize| {
        let mut seen = vec![false; k];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if !p[i][j].is_zero() && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };
    let irreducible = (0..k).all(|i| reach(i).iter().all(|&s| s));
    // Period via gcd of return lengths from state 0 (bounded search).
    let mut gcd = 0u64;
    let mut frontier = vec![false; k];
    frontier[0] = true;
    for step in 1..=2 * k {
        let mut next = vec![false; k];
        for i in 0..k {
            if !frontier[i] {
                continue;
            }
            for j in 0..k {
                if !p[i][j].is_zero() {
                    next[j] = true;
                }
            }
        }
        if next[0] {
            gcd = num_integer::gcd(gcd, step as u64);
        }
        frontier = next;
    }
    (irreducible, gcd == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_masses() {
        let mu = Measure::bernoulli(1, vec![q(1, 2), q(1, 2)]).unwrap();
        let p01 = Pattern::word(0, &[0, 1]);
        assert_eq!(mu.cylinder_mass(&p01).unwrap(), q(1, 4));
        assert!(mu.ergodic && mu.pinsker_trivial && !mu.zero_entropy);
        let dirac = Measure::bernoulli(1, vec![Q::one(), Q::zero()]).unwrap();
        assert!(dirac.zero_entropy && !dirac.pinsker_trivial);
    }

    #[test]
    fn markov_golden_mean_parry_like() {
        let mu = Measure::golden_markov(q(1, 2)).unwrap();
        match &mu.variant {
            MeasureVariant::Markov { stationary, .. } => {
                assert_eq!(stationary, &vec![q(2, 3), q(1, 3)]);
            }
            _ => unreachable!(),
        }
        assert_eq!(mu.cylinder_mass(&Pattern::word(0, &[1, 1])).unwrap(), Q::zero());
        assert!(mu.ergodic);
        // Marginal of [a at 0] is the stationary mass; summing length-2
        // cylinders over the last symbol recovers length-1 masses.
        for a in 0..2u8 {
            let single = mu.cylinder_mass(&Pattern::word(0, &[a])).unwrap();
            let total: Q = (0..2u8)
                .map(|b| mu.cylinder_mass(&Pattern::word(0, &[a, b])).unwrap())
                .sum();
            assert_eq!(single, total);
        }
    }

    #[test]
    fn markov_gap_marginalisation() {
        let mu = Measure::golden_markov(q(1, 3)).unwrap();
        // Mass of a gapped pattern equals the sum over fillings.
        let gapped = Pattern::new([(GroupElement::z(0), 0), (GroupElement::z(2), 1)]).unwrap();
        let direct = mu.cylinder_mass(&gapped).unwrap();
        let summed: Q = (0..2u8)
            .map(|mid| mu.cylinder_mass(&Pattern::word(0, &[0, mid, 1])).unwrap())
            .sum();
        assert_eq!(direct, summed);
    }

    #[test]
    fn periodic_orbit_masses() {
        let mu = Measure::periodic_word(vec![0, 1]).unwrap();
        assert_eq!(mu.cylinder_mass(&Pattern::word(0, &[0])).unwrap(), q(1, 2));
        assert_eq!(mu.cylinder_mass(&Pattern::word(0, &[0, 1])).unwrap(), q(1, 2));
        assert_eq!(mu.cylinder_mass(&Pattern::word(0, &[0, 0])).unwrap(), Q::zero());
        assert!(mu.zero_entropy && mu.ergodic);
    }

    #[test]
    fn convex_combination_distributes() {
        let nu = Measure::bernoulli(1, vec![q(1, 2), q(1, 2)]).unwrap();
        let eta = Measure::bernoulli(1, vec![q(1, 4), q(3, 4)]).unwrap();
        let p = Pattern::word(0, &[0]);
        let half = convex_combine(q(1, 2), nu.clone(), eta.clone()).unwrap();
        assert_eq!(half.cylinder_mass(&p).unwrap(), q(3, 8));
        assert!(!half.ergodic);
        let all_nu = convex_combine(Q::one(), nu.clone(), eta.clone()).unwrap();
        assert_eq!(all_nu.cylinder_mass(&p).unwrap(), nu.cylinder_mass(&p).unwrap());
        let all_eta = convex_combine(Q::zero(), nu, eta.clone()).unwrap();
        assert_eq!(all_eta.cylinder_mass(&p).unwrap(), eta.cylinder_mass(&p).unwrap());
    }

    #[test]
    fn empirical_measure_masses() {
        // Base point 010101 on {0,…,5}, averaging over {0,1}.
        let master = FiniteSubset::interval(0, 5);
        let base = Pattern::word(0, &[0, 1, 0, 1, 0, 1]);
        let mu = Measure::empirical(EmpiricalSpec {
            master: master.clone(),
            base_points: vec![base],
            averaging: FiniteSubset::interval(0, 1),
        })
        .unwrap();
        assert_eq!(mu.cylinder_mass(&Pattern::word(0, &[0])).unwrap(), q(1, 2));
        // Constant base point: point mass.
        let fixed = Measure::empirical(EmpiricalSpec {
            master: master.clone(),
            base_points: vec![Pattern::word(0, &[0; 6])],
            averaging: FiniteSubset::interval(0, 2),
        })
        .unwrap();
        assert_eq!(fixed.cylinder_mass(&Pattern::word(0, &[0])).unwrap(), Q::one());
        // Both constant patterns: masses split evenly.
        let both = Measure::empirical(EmpiricalSpec {
            master,
            base_points: vec![Pattern::word(0, &[0; 6]), Pattern::word(0, &[1; 6])],
            averaging: FiniteSubset::interval(0, 1),
        })
        .unwrap();
        assert_eq!(both.cylinder_mass(&Pattern::word(0, &[0])).unwrap(), q(1, 2));
        // Escaping the master window is an error.
        assert!(matches!(
            both.cylinder_mass(&Pattern::word(5, &[0, 0])),
            Err(Error::EscapesMasterWindow)
        ));
    }

    #[test]
    fn set_mass_normalisation() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let mu = Measure::bernoulli(1, vec![q(1, 3), q(2, 3)]).unwrap();
        let window = FiniteSubset::interval(0, 2);
        assert_eq!(mu.set_mass(&SymbolicSet::full(), &window, &sft).unwrap(), Q::one());
        assert_eq!(mu.set_mass(&SymbolicSet::empty(), &window, &sft).unwrap(), Q::zero());
        let both = SymbolicSet::new(vec![Pattern::word(0, &[0]), Pattern::word(0, &[1])]);
        assert_eq!(mu.set_mass(&both, &window, &sft).unwrap(), Q::one());
    }

    #[test]
    fn invariance_defect_cases() {
        let sft = Sft::full_shift(2, 1).unwrap();
        let window = FiniteSubset::interval(0, 1);
        let cyl = SymbolicSet::cylinder(Pattern::word(0, &[0]));
        let bern = Measure::bernoulli(1, vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(
            bern.invariance_defect(&cyl, &GroupElement::z(1), &window, &sft).unwrap(),
            0.0
        );
        // Empirical with F = {0,…,n−1}: defect of a fixed cylinder is at
        // most 2·span/n (telescoping average).
        let n = 8i64;
        let master = FiniteSubset::interval(0, n + 3);
        let word: Vec<u8> = (0..=(n + 3) as usize).map(|i| (i % 2) as u8).collect();
        let mu = Measure::empirical(EmpiricalSpec {
            master,
            base_points: vec![Pattern::word(0, &word)],
            averaging: FiniteSubset::interval(0, n - 1),
        })
        .unwrap();
        let defect = mu
            .invariance_defect(&cyl, &GroupElement::z(1), &window, &sft)
            .unwrap();
        assert!(defect <= 2.0 * 1.0 / n as f64 + 1e-12, "defect {defect}");
    }

    proptest! {
        #[test]
        fn bernoulli_factorises_over_disjoint_shapes(
            xs in prop::collection::btree_set(-8i64..8, 1..5),
            ys in prop::collection::btree_set(10i64..18, 1..5),
            syms in prop::collection::vec(0u8..2, 10),
        ) {
            let mu = Measure::bernoulli(1, vec![q(1, 3), q(2, 3)]).unwrap();
            let left: Vec<(GroupElement, u8)> = xs.iter().enumerate()
                .map(|(i, &x)| (GroupElement::z(x), syms[i % syms.len()]))
                .collect();
            let right: Vec<(GroupElement, u8)> = ys.iter().enumerate()
                .map(|(i, &y)| (GroupElement::z(y), syms[(i + 3) % syms.len()]))
                .collect();
            let p_left = Pattern::new(left.clone()).unwrap();
            let p_right = Pattern::new(right.clone()).unwrap();
            let joint = Pattern::new(left.into_iter().chain(right)).unwrap();
            let lhs = mu.cylinder_mass(&joint).unwrap();
            let rhs = mu.cylinder_mass(&p_left).unwrap() * mu.cylinder_mass(&p_right).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn invariant_classes_are_shift_invariant(
            shift in -6i64..6,
            word in prop::collection::vec(0u8..2, 1..4),
        ) {
            let p = Pattern::word(0, &word);
            let moved = p.translate(&GroupElement::z(shift)).unwrap();
            for mu in [
                Measure::bernoulli(1, vec![q(2, 5), q(3, 5)]).unwrap(),
                Measure::golden_markov(q(1, 2)).unwrap(),
                Measure::periodic_word(vec![0, 1]).unwrap(),
            ] {
                prop_assert_eq!(mu.cylinder_mass(&p).unwrap(), mu.cylinder_mass(&moved).unwrap());
            }
        }
    }
}
