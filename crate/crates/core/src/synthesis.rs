//! Conversions between bitmaps and minimal automata.
//!
//! The constructions rest on one fact: the length-`k^i` segments of a
//! bitmap are exactly the bitmaps of the quotients of the language by
//! length-`(ell-i)` words. The minimal DFA therefore has the distinct
//! non-zero segments of each level as its rank states, and a minimal NFA
//! replaces each level's segment set by a minimal cover of it, found by the
//! [`cover`](crate::cover) solver. Both directions are implemented:
//! bitmap to automaton and automaton back to bitmap.

use crate::automaton::{RankedAutomaton, StateId, Symbol};
use crate::bitmap::Bitmap;
use crate::bits::Bits;
use crate::cover::{self, CoverInstance};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// How [`bitmap_to_min_nfa`] searches for per-rank covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Exact search; certifies minimality when every rank finishes within
    /// the node budget.
    Exact { budget: u64 },
    /// Greedy heuristic only; never certified.
    Greedy,
}

/// An NFA built from a bitmap together with its minimality certificate.
#[derive(Debug, Clone)]
pub struct NfaSynthesis {
    pub nfa: RankedAutomaton,
    /// True when every rank cover was proved minimal, which makes the whole
    /// NFA minimal.
    pub certified: bool,
}

/// State order inside a rank: first set bit, then whole-segment order.
/// First set bit is the index of the lexicographically least word the
/// state accepts, giving stable, diffable state numbering.
fn canonical_state_order(a: &Bits, b: &Bits) -> std::cmp::Ordering {
    let fa = a.iter_ones().next();
    let fb = b.iter_ones().next();
    fa.cmp(&fb).then_with(|| a.cmp(b))
}

/// Builds the minimal DFA for a non-empty bitmap.
///
/// Rank-`i` states are the distinct non-zero segments of length `k^i`; the
/// transition on symbol `j` from a segment goes to its `j`-th block, when
/// that block is non-zero. Equal segments collapse into one state by
/// construction, which is exactly what makes the result minimal. The DFA is
/// trim: the sink is left implicit.
pub fn bitmap_to_min_dfa(b: &Bitmap) -> Result<RankedAutomaton> {
    if b.is_empty_language() {
        return Err(Error::EmptyLanguage);
    }
    let params = b.params();
    let ell = params.ell();
    // per level: segment -> state id, ids assigned rank ell downward
    let mut ids: Vec<BTreeMap<Bits, StateId>> = vec![BTreeMap::new(); ell as usize + 1];
    let mut ranks: Vec<u32> = Vec::new();
    for i in (0..=ell).rev() {
        let mut members: Vec<Bits> = b.segment_set(i)?.members.into_iter().collect();
        members.sort_by(canonical_state_order);
        for seg in members {
            ids[i as usize].insert(seg, ranks.len() as StateId);
            ranks.push(i);
        }
    }
    let mut transitions = BTreeSet::new();
    for i in 1..=ell {
        let block_len = params.pow(i - 1) as usize;
        for (seg, &from) in &ids[i as usize] {
            for j in 0..params.k() {
                let block = seg.slice(j as usize * block_len, block_len);
                if block.is_zero() {
                    continue;
                }
                let to = ids[i as usize - 1][&block];
                transitions.insert((from, j as Symbol, to));
            }
        }
    }
    let initial = BTreeSet::from([ids[ell as usize][b.bits()]]);
    let unit = Bits::from_bit_str("1").expect("literal");
    let finals = BTreeSet::from([ids[0][&unit]]);
    RankedAutomaton::new(params, ranks, initial, finals, transitions)
}

/// Recovers the bitmap of the language of a ranked automaton, DFA or NFA,
/// minimal or not.
///
/// Walks the ranks bottom-up, assigning every state the bitmap of its right
/// language: a rank-0 final state maps to `1`, and a rank-`i` state maps to
/// the concatenation over symbols of the disjunction of its successors'
/// bitmaps (a zero block where a symbol is undefined). The result is the
/// disjunction over the initial states.
pub fn automaton_to_bitmap(a: &RankedAutomaton) -> Result<Bitmap> {
    let params = a.params();
    let ell = params.ell();
    let trimmed = a.trim();
    if trimmed.state_count() == 0 {
        return Ok(Bitmap::empty(params));
    }
    for &q in trimmed.finals() {
        if trimmed.rank(q) != 0 {
            // a final state above rank 0 accepts a short word
            return Err(Error::NotRanked);
        }
    }
    for &q in trimmed.initial() {
        if trimmed.rank(q) != ell {
            return Err(Error::NotRanked);
        }
    }
    let n = trimmed.state_count() as usize;
    let mut right: Vec<Option<Bits>> = vec![None; n];
    let mut by_rank: Vec<Vec<StateId>> = vec![Vec::new(); ell as usize + 1];
    for q in 0..n as StateId {
        by_rank[trimmed.rank(q) as usize].push(q);
    }
    for i in 0..=ell {
        let block_len = if i == 0 { 0 } else { params.pow(i - 1) as usize };
        for &q in &by_rank[i as usize] {
            let bits = if i == 0 {
                Bits::from_bit_str("1").expect("literal")
            } else {
                let mut s = Bits::zeros(0);
                for sym in 0..params.k() {
                    let mut block = Bits::zeros(block_len);
                    for succ in trimmed.successors(q, sym) {
                        block.or_assign(right[succ as usize].as_ref().expect("lower rank done"));
                    }
                    s.extend(&block);
                }
                s
            };
            right[q as usize] = Some(bits);
        }
    }
    let mut result = Bits::zeros(params.universe_size() as usize);
    for &q in trimmed.initial() {
        result.or_assign(right[q as usize].as_ref().expect("rank ell done"));
    }
    Bitmap::from_bits(params, result)
}

/// Builds a minimal NFA for a non-empty bitmap.
///
/// Rank-`i` states are the members of a minimal cover of the level-`i`
/// segment set. Cover candidates are restricted to concatenations of `k`
/// blocks drawn from the level below (or zero blocks), pruned to non-zero
/// submasks of at least one target; anything else could never participate
/// in an exact disjunction. Transitions from a cover element on symbol `j`
/// go to the stored selection of its `j`-th block.
///
/// With [`CoverStrategy::Exact`] and enough budget the result is certified
/// minimal; greedy covers and budget exhaustion produce a valid but
/// uncertified NFA.
pub fn bitmap_to_min_nfa(b: &Bitmap, strategy: CoverStrategy) -> Result<NfaSynthesis> {
    if b.is_empty_language() {
        return Err(Error::EmptyLanguage);
    }
    let params = b.params();
    let ell = params.ell();
    let unit = Bits::from_bit_str("1").expect("literal");
    // per level: the chosen cover, and for every segment of the level the
    // cover subset selected for it
    let mut covers: Vec<Vec<Bits>> = vec![vec![unit.clone()]];
    let mut selections: Vec<BTreeMap<Bits, Vec<Bits>>> =
        vec![BTreeMap::from([(unit.clone(), vec![unit.clone()])])];
    let mut certified = true;
    for i in 1..=ell {
        let targets: Vec<Bits> = b.segment_set(i)?.members.into_iter().collect();
        let candidates = rank_candidates(b, i, &targets)?;
        let width = params.pow(i) as usize;
        let inst = CoverInstance::new(width, targets.clone(), candidates)?;
        let solution = match strategy {
            CoverStrategy::Greedy => {
                certified = false;
                cover::greedy_cover(&inst)?
            }
            CoverStrategy::Exact { budget } => match cover::min_cover(&inst, budget) {
                Ok(sol) => {
                    certified &= sol.certified_minimal;
                    sol
                }
                Err(Error::BudgetExceeded { best, .. }) => {
                    certified = false;
                    *best
                }
                Err(other) => return Err(other),
            },
        };
        let mut selection = BTreeMap::new();
        for t in &targets {
            let chosen: Vec<Bits> = solution
                .selected(t)
                .expect("every target selected")
                .into_iter()
                .cloned()
                .collect();
            selection.insert(t.clone(), chosen);
        }
        covers.push(solution.elements);
        selections.push(selection);
    }
    // number the states rank ell downward in canonical order
    let mut ids: Vec<BTreeMap<Bits, StateId>> = vec![BTreeMap::new(); ell as usize + 1];
    let mut ranks = Vec::new();
    for i in (0..=ell).rev() {
        let mut elements = covers[i as usize].clone();
        elements.sort_by(canonical_state_order);
        for e in elements {
            ids[i as usize].insert(e, ranks.len() as StateId);
            ranks.push(i);
        }
    }
    let mut transitions = BTreeSet::new();
    for i in 1..=ell {
        let block_len = params.pow(i - 1) as usize;
        for (element, &from) in &ids[i as usize] {
            for j in 0..params.k() {
                let block = element.slice(j as usize * block_len, block_len);
                if block.is_zero() {
                    continue;
                }
                let chosen = selections[i as usize - 1]
                    .get(&block)
                    .expect("block is a segment of the level below");
                for e in chosen {
                    transitions.insert((from, j as Symbol, ids[i as usize - 1][e]));
                }
            }
        }
    }
    let top = &covers[ell as usize];
    if top.len() != 1 || top[0] != *b.bits() {
        // a single-target instance can only be covered by the target itself
        return Err(Error::Invalid(
            "top-rank cover must be the bitmap itself".into(),
        ));
    }
    let initial = BTreeSet::from([ids[ell as usize][b.bits()]]);
    let finals = BTreeSet::from([ids[0][&unit]]);
    let nfa = RankedAutomaton::new(params, ranks, initial, finals, transitions)?;
    Ok(NfaSynthesis { nfa, certified })
}

/// Candidate pool for the rank-`i` cover: concatenations of `k` blocks from
/// the level-`(i-1)` segment set (zero block allowed), kept when non-zero
/// and a submask of at least one target.
fn rank_candidates(b: &Bitmap, i: u32, targets: &[Bits]) -> Result<Vec<Bits>> {
    let params = b.params();
    let block_len = params.pow(i - 1) as usize;
    let mut blocks: Vec<Bits> = vec![Bits::zeros(block_len)];
    blocks.extend(b.segment_set(i - 1)?.members.iter().cloned());
    let k = params.k() as usize;
    let mut candidates = Vec::new();
    // depth-first product, pruning prefixes that already leave every target
    let mut prefixes: Vec<(Bits, usize)> = vec![(Bits::zeros(0), 0)];
    while let Some((prefix, depth)) = prefixes.pop() {
        if depth == k {
            if !prefix.is_zero() {
                candidates.push(prefix);
            }
            continue;
        }
        for block in &blocks {
            let mut next = prefix.clone();
            next.extend(block);
            // a candidate must fit under some target; check the prefix part
            let viable = targets.iter().any(|t| {
                let head = t.slice(0, next.len());
                next.is_submask_of(&head)
            });
            if viable {
                prefixes.push((next, depth + 1));
            }
        }
    }
    Ok(candidates)
}

/// `dsc` straight from the bitmap: one state per distinct non-zero segment
/// of every level, plus the sink.
pub fn dsc_of_bitmap(b: &Bitmap) -> Result<u64> {
    if b.is_empty_language() {
        return Ok(1);
    }
    let mut total = 1; // sink
    for i in 0..=b.params().ell() {
        total += b.segment_set(i)?.len() as u64;
    }
    Ok(total)
}

/// Exact `nsc` when the solver certifies minimality within the budget.
pub fn nsc_of_bitmap(b: &Bitmap, budget: u64) -> Result<Option<u64>> {
    let synth = bitmap_to_min_nfa(b, CoverStrategy::Exact { budget })?;
    Ok(synth.certified.then(|| synth.nfa.state_count()))
}
