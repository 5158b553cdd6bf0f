//! Exact and heuristic solvers for the minimal-cover problem on bit vectors.
//!
//! A set of bit vectors `C` covers a target `t` when some subset of `C` ORs
//! to exactly `t`. Finding a smallest `C` covering every target (the
//! set-basis problem) is NP-complete; the per-rank state minimization of
//! block-language NFAs reduces to it, so this module is the engine behind
//! [`bitmap_to_min_nfa`](crate::synthesis::bitmap_to_min_nfa).
//!
//! The exact solver runs a greedy pass to obtain an incumbent, then
//! iterative deepening on the cover size: for each size it searches subsets
//! of the candidate pool in canonical order (descending popcount, then
//! lexicographic), pruning branches from which some target can no longer be
//! completed. Work is metered in search nodes so callers can bound the
//! exponential worst case.

use crate::bits::Bits;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashSet};

/// Default node budget for exact search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// One minimal-cover problem: targets to cover and candidate vectors the
/// cover may use.
#[derive(Debug, Clone)]
pub struct CoverInstance {
    width: usize,
    targets: Vec<Bits>,
    candidates: Vec<Bits>,
}

impl CoverInstance {
    /// Deduplicates, drops zero vectors, rejects width mismatches and sorts
    /// candidates into canonical order.
    pub fn new(width: usize, targets: Vec<Bits>, candidates: Vec<Bits>) -> Result<Self> {
        for v in targets.iter().chain(candidates.iter()) {
            if v.len() != width {
                return Err(Error::WidthMismatch);
            }
        }
        let mut targets: Vec<Bits> = targets.into_iter().filter(|t| !t.is_zero()).collect();
        targets.sort();
        targets.dedup();
        let mut candidates: Vec<Bits> = candidates.into_iter().filter(|c| !c.is_zero()).collect();
        candidates.sort_by(canonical_order);
        candidates.dedup();
        Ok(CoverInstance {
            width,
            targets,
            candidates,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn targets(&self) -> &[Bits] {
        &self.targets
    }

    pub fn candidates(&self) -> &[Bits] {
        &self.candidates
    }

    /// `COV1` debug dump.
    pub fn to_cov(&self) -> String {
        let mut out = format!("COV1 {}\n", self.width);
        for t in &self.targets {
            out.push_str(&format!("target {t}\n"));
        }
        for c in &self.candidates {
            out.push_str(&format!("cand {c}\n"));
        }
        out
    }

    /// Parses the `COV1` dump format.
    pub fn from_cov(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 || fields[0] != "COV1" {
            return Err(Error::Parse("expected header `COV1 <width>`".into()));
        }
        let width: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad width `{}`", fields[1])))?;
        let mut targets = Vec::new();
        let mut candidates = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (kind, bits) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("bad line `{line}`")))?;
            let v = Bits::from_bit_str(bits.trim())
                .ok_or_else(|| Error::Parse(format!("bad bit vector `{bits}`")))?;
            match kind {
                "target" => targets.push(v),
                "cand" => candidates.push(v),
                _ => return Err(Error::Parse(format!("bad line `{line}`"))),
            }
        }
        CoverInstance::new(width, targets, candidates)
    }
}

/// Canonical candidate order: descending popcount, then lexicographic.
fn canonical_order(a: &Bits, b: &Bits) -> std::cmp::Ordering {
    b.count_ones().cmp(&a.count_ones()).then_with(|| a.cmp(b))
}

/// A cover together with, per target, the subset of elements selected to
/// reconstruct it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    /// Chosen cover elements in canonical order.
    pub elements: Vec<Bits>,
    /// For each target, the indices into `elements` whose OR equals it.
    pub selection: BTreeMap<Bits, Vec<usize>>,
    /// True when the solver proved no smaller cover exists.
    pub certified_minimal: bool,
}

impl CoverSolution {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// The selected elements for `target`, resolved to bit vectors.
    pub fn selected(&self, target: &Bits) -> Option<Vec<&Bits>> {
        self.selection
            .get(target)
            .map(|idx| idx.iter().map(|&i| &self.elements[i]).collect())
    }
}

/// True iff some subset of `elements` ORs to exactly `target`.
///
/// The OR of all submasks of `target` is the largest value any subset can
/// reach inside `target`, so it suffices to test that single union.
pub fn is_cover(elements: &[Bits], target: &Bits) -> Result<bool> {
    let mut acc = Bits::zeros(target.len());
    for e in elements {
        if e.len() != target.len() {
            return Err(Error::WidthMismatch);
        }
        if e.is_submask_of(target) {
            acc.or_assign(e);
        }
    }
    Ok(acc == *target)
}

/// Exact minimal cover via budgeted iterative deepening.
///
/// Returns a certified solution when the search completes; fails with
/// [`Error::BudgetExceeded`] carrying the best (greedy) cover found when the
/// node budget runs out, and [`Error::Infeasible`] when some target cannot
/// be assembled from the candidates at all.
pub fn min_cover(inst: &CoverInstance, budget: u64) -> Result<CoverSolution> {
    if inst.targets.is_empty() {
        return Ok(CoverSolution {
            elements: vec![],
            selection: BTreeMap::new(),
            certified_minimal: true,
        });
    }
    for t in &inst.targets {
        if !is_cover(&inst.candidates, t)? {
            return Err(Error::Infeasible {
                target: t.to_string(),
            });
        }
    }
    let incumbent = greedy_elements(inst);
    let mut search = Search {
        inst,
        budget,
        nodes: 0,
        seen: HashSet::new(),
    };
    for size in 1..incumbent.len() {
        match search.find_of_size(size) {
            Ok(Some(chosen)) => return Ok(build_solution(inst, chosen, true)),
            Ok(None) => continue,
            Err(nodes) => {
                let best = build_solution(inst, incumbent, false);
                return Err(Error::BudgetExceeded {
                    nodes,
                    best: Box::new(best),
                });
            }
        }
    }
    // nothing smaller exists, so the greedy cover is optimal
    Ok(build_solution(inst, incumbent, true))
}

/// Largest-uncovered-gain heuristic over the same candidate pool. Always
/// returns a valid cover (given feasibility) but never a certificate.
pub fn greedy_cover(inst: &CoverInstance) -> Result<CoverSolution> {
    for t in &inst.targets {
        if !is_cover(&inst.candidates, t)? {
            return Err(Error::Infeasible {
                target: t.to_string(),
            });
        }
    }
    Ok(build_solution(inst, greedy_elements(inst), false))
}

/// Greedy pass: repeatedly pick the candidate that newly covers the most
/// target bits, counted across all targets it fits under.
fn greedy_elements(inst: &CoverInstance) -> Vec<Bits> {
    let mut covered: Vec<Bits> = inst.targets.iter().map(|t| Bits::zeros(t.len())).collect();
    let mut chosen: Vec<Bits> = Vec::new();
    loop {
        let mut done = true;
        for (t, c) in inst.targets.iter().zip(&covered) {
            if t != c {
                done = false;
                break;
            }
        }
        if done {
            return chosen;
        }
        let mut best: Option<(usize, usize)> = None; // (gain, candidate index)
        for (ci, cand) in inst.candidates.iter().enumerate() {
            if chosen.contains(cand) {
                continue;
            }
            let mut gain = 0;
            for (t, c) in inst.targets.iter().zip(&covered) {
                if cand.is_submask_of(t) {
                    gain += cand.count_ones() - cand.and(c).count_ones();
                }
            }
            if gain > 0 && best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, ci));
            }
        }
        let (_, ci) = best.expect("feasible instance always offers a positive gain");
        let cand = inst.candidates[ci].clone();
        for (t, c) in inst.targets.iter().zip(covered.iter_mut()) {
            if cand.is_submask_of(t) {
                c.or_assign(&cand);
            }
        }
        chosen.push(cand);
    }
}

struct Search<'a> {
    inst: &'a CoverInstance,
    budget: u64,
    nodes: u64,
    seen: HashSet<(usize, Vec<Bits>)>,
}

impl Search<'_> {
    /// Depth-first search for a cover of exactly `size` elements.
    /// `Err(nodes)` signals budget exhaustion.
    fn find_of_size(&mut self, size: usize) -> std::result::Result<Option<Vec<Bits>>, u64> {
        self.seen.clear();
        let covered: Vec<Bits> = self
            .inst
            .targets
            .iter()
            .map(|t| Bits::zeros(t.len()))
            .collect();
        let mut chosen = Vec::with_capacity(size);
        self.dfs(0, size, covered, &mut chosen)
            .map(|found| if found { Some(chosen.clone()) } else { None })
    }

    fn dfs(
        &mut self,
        from: usize,
        slots: usize,
        covered: Vec<Bits>,
        chosen: &mut Vec<Bits>,
    ) -> std::result::Result<bool, u64> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(self.nodes);
        }
        if self
            .inst
            .targets
            .iter()
            .zip(&covered)
            .all(|(t, c)| t == c)
        {
            return Ok(true);
        }
        if slots == 0 {
            return Ok(false);
        }
        // fail fast: every target must still be completable from the
        // remaining candidate pool
        for (t, c) in self.inst.targets.iter().zip(&covered) {
            if t == c {
                continue;
            }
            let mut reach = c.clone();
            for cand in &self.inst.candidates[from..] {
                if cand.is_submask_of(t) {
                    reach.or_assign(cand);
                }
            }
            if reach != *t {
                return Ok(false);
            }
        }
        // memoized union-closure: identical coverage at the same frontier
        // with the same remaining depth cannot succeed twice
        if !self.seen.insert((from, covered.clone())) {
            return Ok(false);
        }
        for idx in from..self.inst.candidates.len() {
            let cand = &self.inst.candidates[idx];
            let mut next = covered.clone();
            let mut contributes = false;
            for (t, c) in self.inst.targets.iter().zip(next.iter_mut()) {
                if cand.is_submask_of(t) {
                    if !cand.is_submask_of(c) {
                        contributes = true;
                    }
                    c.or_assign(cand);
                }
            }
            if !contributes {
                continue;
            }
            chosen.push(cand.clone());
            if self.dfs(idx + 1, slots - 1, next, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Assembles a [`CoverSolution`]: canonical element order plus, for each
/// target, the selection produced by a contributing scan over the elements.
/// Elements no selection uses (possible for greedy covers) are dropped.
fn build_solution(inst: &CoverInstance, mut elements: Vec<Bits>, certified: bool) -> CoverSolution {
    elements.sort_by(canonical_order);
    elements.dedup();
    loop {
        let mut selection = BTreeMap::new();
        let mut used = vec![false; elements.len()];
        for t in &inst.targets {
            let picked = select_for(&elements, t);
            for &idx in &picked {
                used[idx] = true;
            }
            selection.insert(t.clone(), picked);
        }
        if used.iter().all(|&u| u) {
            return CoverSolution {
                elements,
                selection,
                certified_minimal: certified,
            };
        }
        let mut keep = used.iter();
        elements.retain(|_| *keep.next().unwrap());
    }
}

/// Scans elements in canonical order, keeping those that fit under the
/// target and add new bits. Feasibility of the element set for the target
/// guarantees the scan ends with an exact reconstruction.
fn select_for(elements: &[Bits], target: &Bits) -> Vec<usize> {
    let mut acc = Bits::zeros(target.len());
    let mut picked = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if acc == *target {
            break;
        }
        if e.is_submask_of(target) && !e.is_submask_of(&acc) {
            acc.or_assign(e);
            picked.push(i);
        }
    }
    debug_assert_eq!(acc, *target, "selection must reconstruct the target");
    picked
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        Bits::from_bit_str(s).unwrap()
    }

    fn inst(targets: &[&str], candidates: &[&str]) -> CoverInstance {
        let width = targets[0].len();
        CoverInstance::new(
            width,
            targets.iter().map(|s| bits(s)).collect(),
            candidates.iter().map(|s| bits(s)).collect(),
        )
        .unwrap()
    }

    /// All non-zero vectors of `width` that sit under at least one target.
    fn submask_closed_candidates(targets: &[&str]) -> Vec<String> {
        let width = targets[0].len();
        let ts: Vec<Bits> = targets.iter().map(|s| bits(s)).collect();
        (1u64..1 << width)
            .map(|m| {
                (0..width)
                    .map(|i| if m >> i & 1 == 1 { '1' } else { '0' })
                    .collect::<String>()
            })
            .filter(|s| {
                let v = bits(s);
                ts.iter().any(|t| v.is_submask_of(t))
            })
            .collect()
    }

    #[test]
    fn is_cover_examples() {
        let elems = [bits("1100"), bits("1010"), bits("0001")];
        assert!(is_cover(&elems, &bits("1110")).unwrap());
        assert!(!is_cover(&elems, &bits("0110")).unwrap());
        assert!(is_cover(&[bits("0110")], &bits("0110")).unwrap());
        assert!(matches!(
            is_cover(&elems, &bits("111")),
            Err(Error::WidthMismatch)
        ));
    }

    #[test]
    fn min_cover_worked_example() {
        // targets {1100,1110,1101,1111} admit a cover of size 3
        let targets = ["1100", "1110", "1101", "1111"];
        let cands = submask_closed_candidates(&targets);
        let cand_refs: Vec<&str> = cands.iter().map(|s| s.as_str()).collect();
        let sol = min_cover(&inst(&targets, &cand_refs), DEFAULT_BUDGET).unwrap();
        assert_eq!(sol.size(), 3);
        assert!(sol.certified_minimal);
        for t in targets {
            let t = bits(t);
            let mut acc = Bits::zeros(4);
            for e in sol.selected(&t).unwrap() {
                acc.or_assign(e);
            }
            assert_eq!(acc, t);
        }
    }

    #[test]
    fn min_cover_rank_one_example() {
        // targets {10,11,01} from candidates {01,10,11}: cover {01,10}
        let sol = min_cover(&inst(&["10", "11", "01"], &["01", "10", "11"]), DEFAULT_BUDGET)
            .unwrap();
        let names: Vec<String> = sol.elements.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["01", "10"]);
        assert!(sol.certified_minimal);
    }

    #[test]
    fn min_cover_single_target() {
        let sol = min_cover(&inst(&["1011"], &["1011", "0001", "1010"]), DEFAULT_BUDGET).unwrap();
        assert_eq!(sol.size(), 1);
        assert_eq!(sol.elements[0], bits("1011"));
    }

    #[test]
    fn min_cover_infeasible() {
        let err = min_cover(&inst(&["110"], &["001", "011"]), DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }));
    }

    #[test]
    fn budget_exhaustion_returns_best_found() {
        let targets = ["1100", "1110", "1101", "1111"];
        let cands = submask_closed_candidates(&targets);
        let cand_refs: Vec<&str> = cands.iter().map(|s| s.as_str()).collect();
        let err = min_cover(&inst(&targets, &cand_refs), 2).unwrap_err();
        match err {
            Error::BudgetExceeded { best, .. } => {
                assert!(!best.certified_minimal);
                for t in targets {
                    let t = bits(t);
                    let mut acc = Bits::zeros(4);
                    for e in best.selected(&t).unwrap() {
                        acc.or_assign(e);
                    }
                    assert_eq!(acc, t);
                }
            }
            other => panic!("expected BudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn greedy_examples() {
        let targets = ["1100", "1110", "1101", "1111"];
        let cands = submask_closed_candidates(&targets);
        let cand_refs: Vec<&str> = cands.iter().map(|s| s.as_str()).collect();
        let sol = greedy_cover(&inst(&targets, &cand_refs)).unwrap();
        assert!(!sol.certified_minimal);
        assert!(sol.size() <= 4, "never worse than the self-cover");

        // rank-2 instance of the running example: exact minimum is 3
        let targets = ["1011", "0111", "0001", "1110"];
        let cands: Vec<String> = [
            "0001", "0010", "0011", "0100", "0101", "0110", "0111", "1000", "1001", "1010",
            "1011", "1100", "1110",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let cand_refs: Vec<&str> = cands.iter().map(|s| s.as_str()).collect();
        let g = greedy_cover(&inst(&targets, &cand_refs)).unwrap();
        assert!(g.size() >= 3);

        let single = greedy_cover(&inst(&["0110"], &["0110"])).unwrap();
        assert_eq!(single.elements, vec![bits("0110")]);
    }

    #[test]
    fn deterministic_output() {
        let targets = ["1011", "0111", "0001", "1110"];
        let cands = submask_closed_candidates(&targets);
        let cand_refs: Vec<&str> = cands.iter().map(|s| s.as_str()).collect();
        let a = min_cover(&inst(&targets, &cand_refs), DEFAULT_BUDGET).unwrap();
        let b = min_cover(&inst(&targets, &cand_refs), DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cov_round_trip() {
        let i = inst(&["1100", "1010"], &["1100", "1010", "1000"]);
        let text = i.to_cov();
        let parsed = CoverInstance::from_cov(&text).unwrap();
        assert_eq!(parsed.targets(), i.targets());
        assert_eq!(parsed.candidates(), i.candidates());
        assert!(CoverInstance::from_cov("COV1\n").is_err());
        assert!(CoverInstance::from_cov("COV1 4\nwhat 1100\n").is_err());
    }
}
