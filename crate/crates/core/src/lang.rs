//! Window languages of subshifts of finite type.
//!
//! For `d = 1` the language of a window is exact: words are enumerated as
//! bi-infinitely extensible walks in the transfer graph built from the
//! forbidden words (states of length `L−1` for `L` the longest forbidden
//! span, pruned to the essential part). For `d ≥ 2` global admissibility
//! is undecidable in general, so the language is the locally admissible
//! overcount on the window padded by `margin` in every coordinate, and the
//! result is flagged approximate; the overcount shrinks as the margin
//! grows. Downstream entropy values inherit the flag.

use crate::group::{FiniteSubset, GroupElement};
use crate::subshift::Sft;
use crate::{Error, Result};
use std::collections::{HashMap, HashSet};

/// The admissible patterns of a window, aligned with its sorted cells.
#[derive(Clone, Debug)]
pub struct Language {
    pub window: Vec<GroupElement>,
    pub words: Vec<Vec<u8>>,
    /// True when the enumeration is the exact set of globally admissible
    /// patterns (always for `d = 1`; for `d ≥ 2` only without constraints).
    pub exact: bool,
}

impl Language {
    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.window.binary_search(g).ok()
    }
}

/// Enumerates the admissible patterns on `window`.
pub fn language(sft: &Sft, window: &FiniteSubset, margin: i64, budget: usize) -> Result<Language> {
    if window.dim() != sft.d && !window.is_empty() {
        return Err(Error::DimensionMismatch(sft.d, window.dim()));
    }
    if margin < 0 {
        return Err(Error::BadParameter("margin must be >= 0".into()));
    }
    let cells = window.to_vec();
    if cells.is_empty() {
        return if language_nonempty(sft)? {
            Ok(Language {
                window: cells,
                words: vec![Vec::new()],
                exact: sft.d == 1 || sft.forbidden.is_empty(),
            })
        } else {
            Err(Error::EmptyLanguage)
        };
    }
    if sft.d == 1 {
        language_1d(sft, &cells, budget)
    } else {
        language_nd(sft, &cells, margin, budget)
    }
}

/// Whether the subshift is non-empty. Exact for `d = 1`; a local test for
/// `d ≥ 2`.
pub fn language_nonempty(sft: &Sft) -> Result<bool> {
    if sft.d == 1 {
        let graph = TransferGraph::build(sft)?;
        Ok(!graph.states.is_empty())
    } else {
        let origin = FiniteSubset::new(sft.d, [GroupElement::identity(sft.d)?])?;
        match language_nd(sft, &origin.to_vec(), 1, 1 << 16) {
            Ok(l) => Ok(!l.words.is_empty()),
            Err(Error::EmptyLanguage) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

struct TransferGraph {
    mem: usize,
    states: Vec<Vec<u8>>,
    /// `next[state][symbol]` is the successor state, if the transition is
    /// admissible.
    next: Vec<Vec<Option<usize>>>,
}

impl TransferGraph {
    fn build(sft: &Sft) -> Result<TransferGraph> {
        let k = sft.alphabet.len();
        // Forbidden words as (offset, symbol) lists with offsets starting
        // at zero.
        let mut forb: Vec<(Vec<(usize, u8)>, usize)> = Vec::new();
        for p in &sft.forbidden {
            let min = p.cells().iter().map(|(g, _)| g.coords()[0]).min().expect("non-empty");
            let max = p.cells().iter().map(|(g, _)| g.coords()[0]).max().expect("non-empty");
            let cells = p
                .cells()
                .iter()
                .map(|(g, s)| ((g.coords()[0] - min) as usize, *s))
                .collect();
            forb.push((cells, (max - min + 1) as usize));
        }
        let span = forb.iter().map(|(_, s)| *s).max().unwrap_or(1);
        let mem = span - 1;

        let word_ok = |w: &[u8]| {
            forb.iter().all(|(cells, sp)| {
                if *sp > w.len() {
                    return true;
                }
                (0..=w.len() - sp).all(|o| !cells.iter().all(|(off, sym)| w[o + off] == *sym))
            })
        };

        // All admissible memory words.
        let mut states: Vec<Vec<u8>> = Vec::new();
        let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            if w.len() == mem {
                if word_ok(&w) {
                    states.push(w);
                }
                continue;
            }
            for s in (0..k as u8).rev() {
                let mut w2 = w.clone();
                w2.push(s);
                stack.push(w2);
            }
        }
        states.sort();

        let index: HashMap<Vec<u8>, usize> =
            states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut next: Vec<Vec<Option<usize>>> = vec![vec![None; k]; states.len()];
        for (i, st) in states.iter().enumerate() {
            for s in 0..k as u8 {
                let mut w = st.clone();
                w.push(s);
                // Placements ending at the last cell; shorter placements
                // were checked when their end cell was produced.
                let ok = forb.iter().all(|(cells, sp)| {
                    let o = w.len() - sp;
                    !cells.iter().all(|(off, sym)| w[o + off] == *sym)
                });
                if ok {
                    let succ = w[w.len() - mem..].to_vec();
                    next[i][s as usize] = index.get(&succ).copied();
                }
            }
        }

        // Essential part: keep states lying on bi-infinite walks.
        let mut alive = vec![true; states.len()];
        loop {
            let mut changed = false;
            let mut has_in = vec![false; states.len()];
            for i in 0..states.len() {
                if !alive[i] {
                    continue;
                }
                for t in next[i].iter().flatten() {
                    if alive[*t] {
                        has_in[*t] = true;
                    }
                }
            }
            for i in 0..states.len() {
                if !alive[i] {
                    continue;
                }
                let has_out = next[i].iter().flatten().any(|t| alive[*t]);
                if !has_out || !has_in[i] {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..states.len()).filter(|&i| alive[i]).collect();
        let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(j, &i)| (i, j)).collect();
        let new_states: Vec<Vec<u8>> = keep.iter().map(|&i| states[i].clone()).collect();
        let new_next = keep
            .iter()
            .map(|&i| {
                next[i]
                    .iter()
                    .map(|t| t.and_then(|t| remap.get(&t).copied()))
                    .collect()
            })
            .collect();
        Ok(TransferGraph {
            mem,
            states: new_states,
            next: new_next,
        })
    }

    /// All globally admissible words of length `n ≥ 1`, lexicographically
    /// sorted.
    fn words(&self, n: usize, budget: usize) -> Result<Vec<Vec<u8>>> {
        if self.states.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        let mut out: Vec<Vec<u8>> = Vec::new();
        if n <= self.mem {
            let mut seen = HashSet::new();
            for st in &self.states {
                let prefix = st[..n].to_vec();
                if seen.insert(prefix.clone()) {
                    out.push(prefix);
                }
            }
            out.sort();
            return Ok(out);
        }
        // DFS over essential walks; no dead ends by construction. The
        // write position is `mem + level` for the current stack level.
        let mut word = vec![0u8; n];
        for (start, st) in self.states.iter().enumerate() {
            word[..self.mem].copy_from_slice(st);
            let mut state_stack = vec![start];
            let mut sym_stack = vec![0usize];
            while !sym_stack.is_empty() {
                let level = sym_stack.len() - 1;
                let cur = *state_stack.last().expect("stack");
                let s = sym_stack.last_mut().expect("stack");
                if *s >= self.next[cur].len() {
                    sym_stack.pop();
                    state_stack.pop();
                    continue;
                }
                let sym = *s;
                *s += 1;
                if let Some(t) = self.next[cur][sym] {
                    word[self.mem + level] = sym as u8;
                    if self.mem + level + 1 == n {
                        out.push(word.clone());
                        if out.len() > budget {
                            return Err(Error::BudgetExceeded(out.len()));
                        }
                    } else {
                        state_stack.push(t);
                        sym_stack.push(0);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn language_1d(sft: &Sft, cells: &[GroupElement], budget: usize) -> Result<Language> {
    let lo = cells.first().expect("non-empty").coords()[0];
    let hi = cells.last().expect("non-empty").coords()[0];
    let span = (hi - lo + 1) as usize;
    let graph = TransferGraph::build(sft)?;
    let span_words = graph.words(span, budget)?;
    if span_words.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let offsets: Vec<usize> = cells.iter().map(|g| (g.coords()[0] - lo) as usize).collect();
    let mut words: Vec<Vec<u8>> = span_words
        .iter()
        .map(|w| offsets.iter().map(|&o| w[o]).collect())
        .collect();
    words.sort();
    words.dedup();
    Ok(Language {
        window: cells.to_vec(),
        words,
        exact: true,
    })
}

fn language_nd(sft: &Sft, cells: &[GroupElement], margin: i64, budget: usize) -> Result<Language> {
    let d = sft.d;
    // Without constraints the margin is irrelevant; skip the padding.
    let margin = if sft.forbidden.is_empty() { 0 } else { margin };
    // Pad the window by the margin box in every coordinate.
    let mut padded: HashSet<GroupElement> = HashSet::new();
    let mut offset = vec![-margin; d];
    loop {
        let shift = GroupElement::new(&offset)?;
        for c in cells {
            padded.insert(c.multiply(&shift)?);
        }
        let mut k = d;
        loop {
            if k == 0 {
                offset = Vec::new();
                break;
            }
            k -= 1;
            offset[k] += 1;
            if offset[k] <= margin {
                break;
            }
            offset[k] = -margin;
        }
        if offset.is_empty() {
            break;
        }
    }
    let mut padded: Vec<GroupElement> = padded.into_iter().collect();
    padded.sort();
    let pos: HashMap<GroupElement, usize> =
        padded.iter().copied().enumerate().map(|(i, g)| (g, i)).collect();

    // Forbidden placements fully inside the padded region, grouped by the
    // last assigned cell.
    let mut by_last: Vec<Vec<(Vec<usize>, Vec<u8>)>> = vec![Vec::new(); padded.len()];
    for p in &sft.forbidden {
        let shape = p.shape();
        let base = shape[0];
        let mut seen = HashSet::new();
        for anchor in &padded {
            let t = base.inverse().multiply(anchor)?;
            if !seen.insert(t) {
                continue;
            }
            let mut idxs = Vec::with_capacity(shape.len());
            let mut syms = Vec::with_capacity(shape.len());
            let mut fits = true;
            for (g, s) in p.cells() {
                match pos.get(&g.multiply(&t)?) {
                    Some(&i) => {
                        idxs.push(i);
                        syms.push(*s);
                    }
                    None => {
                        fits = false;
                        break;
                    }
                }
            }
            if fits {
                let last = *idxs.iter().max().expect("non-empty");
                by_last[last].push((idxs, syms));
            }
        }
    }

    let k = sft.alphabet.len() as u8;
    let n = padded.len();
    let mut assign = vec![0u8; n];
    let mut full: Vec<Vec<u8>> = Vec::new();
    // Backtracking over cells in sorted order.
    let mut depth = 0usize;
    let mut sym: Vec<u8> = vec![0];
    while let Some(s) = sym.last_mut() {
        if *s >= k {
            sym.pop();
            depth = depth.wrapping_sub(1);
            continue;
        }
        assign[depth] = *s;
        *s += 1;
        let ok = by_last[depth]
            .iter()
            .all(|(idxs, syms)| !idxs.iter().zip(syms).all(|(&i, &v)| assign[i] == v));
        if !ok {
            continue;
        }
        if depth + 1 == n {
            full.push(assign.clone());
            if full.len() > budget {
                return Err(Error::BudgetExceeded(full.len()));
            }
        } else {
            depth += 1;
            sym.push(0);
        }
    }
    if full.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let window_idx: Vec<usize> = cells.iter().map(|c| pos[c]).collect();
    let mut words: Vec<Vec<u8>> = full
        .iter()
        .map(|w| window_idx.iter().map(|&i| w[i]).collect())
        .collect();
    words.sort();
    words.dedup();
    Ok(Language {
        window: cells.to_vec(),
        words,
        exact: sft.forbidden.is_empty(),
    })
}
