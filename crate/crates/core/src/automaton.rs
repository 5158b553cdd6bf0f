//! Ranked acyclic automata for block languages, plus a general automaton
//! type for the operations whose results leave the block world.
//!
//! States of a trim automaton for a block language split into ranks: a state
//! has rank `i` when the longest word accepted from it has length `i`, and
//! every transition steps from rank `i` to rank `i-1`. Deterministic state
//! counts (`dsc`) follow the complete-DFA convention and include the sink;
//! nondeterministic counts (`nsc`) are trim and have no sink.

use crate::bitmap::BlockParams;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type StateId = u32;
pub type Symbol = u32;

/// Acyclic automaton whose states carry ranks; covers both the DFA and NFA
/// cases. Transitions must step down exactly one rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedAutomaton {
    params: BlockParams,
    ranks: Vec<u32>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    transitions: BTreeSet<(StateId, Symbol, StateId)>,
}

impl RankedAutomaton {
    pub fn new(
        params: BlockParams,
        ranks: Vec<u32>,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
        transitions: BTreeSet<(StateId, Symbol, StateId)>,
    ) -> Result<Self> {
        let n = ranks.len() as u32;
        for &r in &ranks {
            if r > params.ell() {
                return Err(Error::NotRanked);
            }
        }
        for &q in initial.iter().chain(finals.iter()) {
            if q >= n {
                return Err(Error::IndexOutOfRange {
                    index: q as u64,
                    limit: n as u64,
                });
            }
        }
        for &(from, sym, to) in &transitions {
            if from >= n || to >= n {
                return Err(Error::IndexOutOfRange {
                    index: from.max(to) as u64,
                    limit: n as u64,
                });
            }
            if sym >= params.k() {
                return Err(Error::BadSymbol {
                    symbol: sym,
                    k: params.k(),
                });
            }
            if ranks[from as usize] != ranks[to as usize] + 1 {
                return Err(Error::NotRanked);
            }
        }
        Ok(RankedAutomaton {
            params,
            ranks,
            initial,
            finals,
            transitions,
        })
    }

    pub fn params(&self) -> BlockParams {
        self.params
    }

    pub fn state_count(&self) -> u64 {
        self.ranks.len() as u64
    }

    pub fn rank(&self, q: StateId) -> u32 {
        self.ranks[q as usize]
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn transitions(&self) -> &BTreeSet<(StateId, Symbol, StateId)> {
        &self.transitions
    }

    pub fn successors(&self, q: StateId, sym: Symbol) -> impl Iterator<Item = StateId> + '_ {
        self.transitions
            .range((q, sym, 0)..=(q, sym, StateId::MAX))
            .map(|&(_, _, to)| to)
    }

    /// Single initial state and at most one successor per state and symbol.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        let mut last: Option<(StateId, Symbol)> = None;
        for &(from, sym, _) in &self.transitions {
            if last == Some((from, sym)) {
                return false;
            }
            last = Some((from, sym));
        }
        true
    }

    /// Subset simulation; works for DFAs and NFAs alike.
    pub fn accepts(&self, symbols: &[u32]) -> bool {
        let mut current: BTreeSet<StateId> = self.initial.clone();
        for &sym in symbols {
            let mut next = BTreeSet::new();
            for &q in &current {
                next.extend(self.successors(q, sym));
            }
            current = next;
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.finals.contains(q))
    }

    /// Keeps only states on some initial-to-final path; ids are renumbered
    /// in ascending order of the old ids. An automaton with no final state
    /// trims to zero states.
    pub fn trim(&self) -> RankedAutomaton {
        let n = self.ranks.len();
        let mut forward = vec![false; n];
        let mut queue: VecDeque<StateId> = self.initial.iter().copied().collect();
        for &q in &self.initial {
            forward[q as usize] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &(from, _, to) in self.transitions.range((q, 0, 0)..=(q, Symbol::MAX, StateId::MAX))
            {
                debug_assert_eq!(from, q);
                if !forward[to as usize] {
                    forward[to as usize] = true;
                    queue.push_back(to);
                }
            }
        }
        let mut backward = vec![false; n];
        let mut rev: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
        for &(from, _, to) in &self.transitions {
            rev.entry(to).or_default().push(from);
        }
        let mut queue: VecDeque<StateId> = self.finals.iter().copied().collect();
        for &q in &self.finals {
            backward[q as usize] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &from in rev.get(&q).into_iter().flatten() {
                if !backward[from as usize] {
                    backward[from as usize] = true;
                    queue.push_back(from);
                }
            }
        }
        let mut remap: Vec<Option<StateId>> = vec![None; n];
        let mut ranks = Vec::new();
        for q in 0..n {
            if forward[q] && backward[q] {
                remap[q] = Some(ranks.len() as StateId);
                ranks.push(self.ranks[q]);
            }
        }
        let initial = self
            .initial
            .iter()
            .filter_map(|&q| remap[q as usize])
            .collect();
        let finals = self
            .finals
            .iter()
            .filter_map(|&q| remap[q as usize])
            .collect();
        let transitions = self
            .transitions
            .iter()
            .filter_map(|&(from, sym, to)| {
                Some((remap[from as usize]?, sym, remap[to as usize]?))
            })
            .collect();
        RankedAutomaton {
            params: self.params,
            ranks,
            initial,
            finals,
            transitions,
        }
    }

    /// Subset construction. The result is deterministic, trim, accepts the
    /// same language and contains reachable subsets only.
    pub fn determinize(&self) -> Result<RankedAutomaton> {
        let trimmed = self.trim();
        if trimmed.ranks.is_empty() {
            return Ok(trimmed);
        }
        let start: BTreeSet<StateId> = trimmed.initial.clone();
        let start_rank = trimmed.ranks[*start.iter().next().unwrap() as usize];
        if start.iter().any(|&q| trimmed.ranks[q as usize] != start_rank) {
            return Err(Error::NotRanked);
        }
        let mut ids: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::new();
        let mut ranks = Vec::new();
        let mut finals = BTreeSet::new();
        let mut transitions = BTreeSet::new();
        let mut queue = VecDeque::new();
        ids.insert(start.clone(), 0);
        ranks.push(start_rank);
        if start.iter().any(|q| trimmed.finals.contains(q)) {
            finals.insert(0);
        }
        queue.push_back(start);
        while let Some(subset) = queue.pop_front() {
            let from_id = ids[&subset];
            for sym in 0..trimmed.params.k() {
                let mut succ = BTreeSet::new();
                for &q in &subset {
                    succ.extend(trimmed.successors(q, sym));
                }
                if succ.is_empty() {
                    continue;
                }
                let rank = trimmed.ranks[*succ.iter().next().unwrap() as usize];
                let to_id = match ids.get(&succ) {
                    Some(&id) => id,
                    None => {
                        let id = ranks.len() as StateId;
                        ids.insert(succ.clone(), id);
                        ranks.push(rank);
                        if succ.iter().any(|q| trimmed.finals.contains(q)) {
                            finals.insert(id);
                        }
                        queue.push_back(succ);
                        id
                    }
                };
                transitions.insert((from_id, sym, to_id));
            }
        }
        RankedAutomaton::new(
            trimmed.params,
            ranks,
            BTreeSet::from([0]),
            finals,
            transitions,
        )
    }

    /// Trim state counts per rank `0..=ell`, with the flag telling whether
    /// the deterministic counting convention (sink added) applies.
    pub fn width_profile(&self) -> WidthProfile {
        let trimmed = self.trim();
        let mut widths = vec![0u64; self.params.ell() as usize + 1];
        for &r in &trimmed.ranks {
            widths[r as usize] += 1;
        }
        WidthProfile {
            widths,
            has_sink: trimmed.is_deterministic(),
        }
    }

    /// Forgets ranks. Automata with several initial states get a fresh
    /// initial state carrying their combined out-transitions; an empty
    /// automaton becomes a single dead state.
    pub fn to_general(&self) -> GeneralAutomaton {
        let n = self.ranks.len() as u32;
        let mut transitions: BTreeSet<(StateId, Symbol, StateId)> = self.transitions.clone();
        let mut finals = self.finals.clone();
        let (initial, state_count) = if self.initial.len() == 1 {
            (*self.initial.iter().next().unwrap(), n.max(1))
        } else {
            let fresh = n;
            for &q in &self.initial {
                for &(_, sym, to) in self
                    .transitions
                    .range((q, 0, 0)..=(q, Symbol::MAX, StateId::MAX))
                {
                    transitions.insert((fresh, sym, to));
                }
                if self.finals.contains(&q) {
                    finals.insert(fresh);
                }
            }
            (fresh, n + 1)
        };
        GeneralAutomaton {
            k: self.params.k(),
            state_count,
            initial,
            finals,
            transitions,
        }
    }

    /// `AUT1` serialization.
    pub fn to_aut(&self) -> String {
        let mut out = format!("AUT1 {} {} ranked\n", self.params.k(), self.params.ell());
        for q in 0..self.ranks.len() as StateId {
            out.push_str(&format!("state {} rank={}", q, self.ranks[q as usize]));
            if self.initial.contains(&q) {
                out.push_str(" initial");
            }
            if self.finals.contains(&q) {
                out.push_str(" final");
            }
            out.push('\n');
        }
        for &(from, sym, to) in &self.transitions {
            out.push_str(&format!("trans {from} {sym} {to}\n"));
        }
        out
    }
}

/// Trim state count of the given NFA; an upper bound on `nsc` of its
/// language (exact when the NFA is minimal).
pub fn nsc_upper(a: &RankedAutomaton) -> u64 {
    a.trim().state_count()
}

/// Per-rank trim widths of a ranked automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthProfile {
    /// Entry `i` counts the trim states of rank `i`.
    pub widths: Vec<u64>,
    /// True when the automaton is deterministic, i.e. state counts follow
    /// the complete-DFA convention and a sink must be added.
    pub has_sink: bool,
}

impl WidthProfile {
    pub fn trim_states(&self) -> u64 {
        self.widths.iter().sum()
    }
}

/// Possibly-cyclic finite automaton with a single initial state; the output
/// type of star, plus, stencil and complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralAutomaton {
    k: u32,
    state_count: u32,
    initial: StateId,
    finals: BTreeSet<StateId>,
    transitions: BTreeSet<(StateId, Symbol, StateId)>,
}

impl GeneralAutomaton {
    pub fn new(
        k: u32,
        state_count: u32,
        initial: StateId,
        finals: BTreeSet<StateId>,
        transitions: BTreeSet<(StateId, Symbol, StateId)>,
    ) -> Result<Self> {
        if state_count == 0 || initial >= state_count {
            return Err(Error::IndexOutOfRange {
                index: initial as u64,
                limit: state_count as u64,
            });
        }
        for &q in &finals {
            if q >= state_count {
                return Err(Error::IndexOutOfRange {
                    index: q as u64,
                    limit: state_count as u64,
                });
            }
        }
        for &(from, sym, to) in &transitions {
            if from >= state_count || to >= state_count {
                return Err(Error::IndexOutOfRange {
                    index: from.max(to) as u64,
                    limit: state_count as u64,
                });
            }
            if sym >= k {
                return Err(Error::BadSymbol { symbol: sym, k });
            }
        }
        Ok(GeneralAutomaton {
            k,
            state_count,
            initial,
            finals,
            transitions,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn state_count(&self) -> u64 {
        self.state_count as u64
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn transitions(&self) -> &BTreeSet<(StateId, Symbol, StateId)> {
        &self.transitions
    }

    pub fn successors(&self, q: StateId, sym: Symbol) -> impl Iterator<Item = StateId> + '_ {
        self.transitions
            .range((q, sym, 0)..=(q, sym, StateId::MAX))
            .map(|&(_, _, to)| to)
    }

    pub fn is_deterministic(&self) -> bool {
        let mut last: Option<(StateId, Symbol)> = None;
        for &(from, sym, _) in &self.transitions {
            if last == Some((from, sym)) {
                return false;
            }
            last = Some((from, sym));
        }
        true
    }

    pub fn accepts(&self, symbols: &[u32]) -> bool {
        let mut current = BTreeSet::from([self.initial]);
        for &sym in symbols {
            let mut next = BTreeSet::new();
            for &q in &current {
                next.extend(self.successors(q, sym));
            }
            current = next;
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.finals.contains(q))
    }

    /// Subset construction; the result is a complete DFA over the same
    /// alphabet (the empty subset becomes the sink when reachable).
    pub fn determinize(&self) -> GeneralAutomaton {
        let mut ids: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::new();
        let mut finals = BTreeSet::new();
        let mut transitions = BTreeSet::new();
        let mut queue = VecDeque::new();
        let start = BTreeSet::from([self.initial]);
        ids.insert(start.clone(), 0);
        if self.finals.contains(&self.initial) {
            finals.insert(0);
        }
        queue.push_back(start);
        while let Some(subset) = queue.pop_front() {
            let from_id = ids[&subset];
            for sym in 0..self.k {
                let mut succ = BTreeSet::new();
                for &q in &subset {
                    succ.extend(self.successors(q, sym));
                }
                let to_id = match ids.get(&succ) {
                    Some(&id) => id,
                    None => {
                        let id = ids.len() as StateId;
                        if succ.iter().any(|q| self.finals.contains(q)) {
                            finals.insert(id);
                        }
                        ids.insert(succ.clone(), id);
                        queue.push_back(succ);
                        id
                    }
                };
                transitions.insert((from_id, sym, to_id));
            }
        }
        GeneralAutomaton {
            k: self.k,
            state_count: ids.len() as u32,
            initial: 0,
            finals,
            transitions,
        }
    }

    /// Adds an explicit sink and the missing transitions, if any.
    pub fn completed(&self) -> GeneralAutomaton {
        let mut missing = Vec::new();
        for q in 0..self.state_count {
            for sym in 0..self.k {
                if self.successors(q, sym).next().is_none() {
                    missing.push((q, sym));
                }
            }
        }
        if missing.is_empty() {
            return self.clone();
        }
        let sink = self.state_count;
        let mut transitions = self.transitions.clone();
        for (q, sym) in missing {
            transitions.insert((q, sym, sink));
        }
        for sym in 0..self.k {
            transitions.insert((sink, sym, sink));
        }
        GeneralAutomaton {
            k: self.k,
            state_count: self.state_count + 1,
            initial: self.initial,
            finals: self.finals.clone(),
            transitions,
        }
    }

    /// Minimal complete DFA in canonical form (states numbered in
    /// breadth-first discovery order, symbols explored in order), so two
    /// minimizations of equivalent automata compare equal structurally.
    pub fn minimize(&self) -> Result<GeneralAutomaton> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        let complete = self.completed();
        // reachable states only
        let n = complete.state_count as usize;
        let mut reachable = vec![false; n];
        reachable[complete.initial as usize] = true;
        let mut queue = VecDeque::from([complete.initial]);
        while let Some(q) = queue.pop_front() {
            for sym in 0..complete.k {
                let to = complete.successors(q, sym).next().expect("complete");
                if !reachable[to as usize] {
                    reachable[to as usize] = true;
                    queue.push_back(to);
                }
            }
        }
        let states: Vec<StateId> = (0..complete.state_count)
            .filter(|&q| reachable[q as usize])
            .collect();
        // Moore partition refinement from the final/non-final split
        let mut class: BTreeMap<StateId, usize> = states
            .iter()
            .map(|&q| (q, usize::from(complete.finals.contains(&q))))
            .collect();
        loop {
            let mut signatures: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next: BTreeMap<StateId, usize> = BTreeMap::new();
            for &q in &states {
                let sig: Vec<usize> = (0..complete.k)
                    .map(|sym| class[&complete.successors(q, sym).next().expect("complete")])
                    .collect();
                let key = (class[&q], sig);
                let fresh = signatures.len();
                let id = *signatures.entry(key).or_insert(fresh);
                next.insert(q, id);
            }
            let stable = signatures.len() == class.values().collect::<BTreeSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // quotient automaton, then canonical breadth-first renumbering
        let class_of = |q: StateId| class[&q];
        let mut canon: BTreeMap<usize, StateId> = BTreeMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([class_of(complete.initial)]);
        canon.insert(class_of(complete.initial), 0);
        order.push(class_of(complete.initial));
        // representative per class for successor lookup
        let mut rep: BTreeMap<usize, StateId> = BTreeMap::new();
        for &q in &states {
            rep.entry(class_of(q)).or_insert(q);
        }
        let mut transitions = BTreeSet::new();
        while let Some(c) = queue.pop_front() {
            let q = rep[&c];
            for sym in 0..complete.k {
                let to_class = class_of(complete.successors(q, sym).next().expect("complete"));
                let next_id = canon.len() as StateId;
                let to_id = *canon.entry(to_class).or_insert_with(|| {
                    order.push(to_class);
                    queue.push_back(to_class);
                    next_id
                });
                transitions.insert((canon[&c], sym, to_id));
            }
        }
        let finals = states
            .iter()
            .filter(|&&q| complete.finals.contains(&q))
            .map(|&q| canon[&class_of(q)])
            .collect();
        Ok(GeneralAutomaton {
            k: complete.k,
            state_count: canon.len() as u32,
            initial: 0,
            finals,
            transitions,
        })
    }

    /// `AUT1` serialization (`ell` is `-` for general automata).
    pub fn to_aut(&self) -> String {
        let mut out = format!("AUT1 {} - general\n", self.k);
        for q in 0..self.state_count {
            out.push_str(&format!("state {q}"));
            if q == self.initial {
                out.push_str(" initial");
            }
            if self.finals.contains(&q) {
                out.push_str(" final");
            }
            out.push('\n');
        }
        for &(from, sym, to) in &self.transitions {
            out.push_str(&format!("trans {from} {sym} {to}\n"));
        }
        out
    }
}

/// Number of states of the minimal complete DFA for the automaton's
/// language; determinizes nondeterministic inputs first.
pub fn dsc(a: &GeneralAutomaton) -> u64 {
    let det = if a.is_deterministic() {
        a.clone()
    } else {
        a.determinize()
    };
    det.minimize().expect("determinized").state_count()
}

/// Language equality, decided by comparing canonical minimal DFAs.
pub fn equivalent(a: &GeneralAutomaton, b: &GeneralAutomaton) -> Result<bool> {
    if a.k() != b.k() {
        return Err(Error::ParamsMismatch);
    }
    let ma = if a.is_deterministic() {
        a.minimize()?
    } else {
        a.determinize().minimize()?
    };
    let mb = if b.is_deterministic() {
        b.minimize()?
    } else {
        b.determinize().minimize()?
    };
    Ok(ma == mb)
}

/// Deterministic partial DFA minimization as a standalone operation;
/// completes the input with a sink first. Fails on nondeterministic input.
pub fn minimize_dfa(a: &GeneralAutomaton) -> Result<GeneralAutomaton> {
    a.minimize()
}

/// An automaton read back from the `AUT1` format.
pub enum ParsedAutomaton {
    Ranked(RankedAutomaton),
    General(GeneralAutomaton),
}

/// Parses the `AUT1` text format.
pub fn parse_aut(text: &str) -> Result<ParsedAutomaton> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "AUT1" {
        return Err(Error::Parse(
            "expected header `AUT1 <k> <ell|-> <ranked|general>`".into(),
        ));
    }
    let k: u32 = fields[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad k `{}`", fields[1])))?;
    let kind = fields[3];
    let mut ranks: Vec<Option<u32>> = Vec::new();
    let mut initial = BTreeSet::new();
    let mut finals = BTreeSet::new();
    let mut transitions = BTreeSet::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts[0] {
            "state" => {
                if parts.len() < 2 {
                    return Err(Error::Parse(format!("bad state line `{line}`")));
                }
                let id: u32 = parts[1]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad state id `{}`", parts[1])))?;
                if id as usize != ranks.len() {
                    return Err(Error::Parse("state ids must be dense and sorted".into()));
                }
                let mut rank = None;
                for attr in &parts[2..] {
                    if let Some(r) = attr.strip_prefix("rank=") {
                        rank = Some(
                            r.parse::<u32>()
                                .map_err(|_| Error::Parse(format!("bad rank `{r}`")))?,
                        );
                    } else if *attr == "initial" {
                        initial.insert(id);
                    } else if *attr == "final" {
                        finals.insert(id);
                    } else {
                        return Err(Error::Parse(format!("bad state attribute `{attr}`")));
                    }
                }
                ranks.push(rank);
            }
            "trans" => {
                if parts.len() != 4 {
                    return Err(Error::Parse(format!("bad transition line `{line}`")));
                }
                let from: u32 = parts[1]
                    .parse()
                    .map_err(|_| Error::Parse("bad transition".into()))?;
                let sym: u32 = parts[2]
                    .parse()
                    .map_err(|_| Error::Parse("bad transition".into()))?;
                let to: u32 = parts[3]
                    .parse()
                    .map_err(|_| Error::Parse("bad transition".into()))?;
                transitions.insert((from, sym, to));
            }
            other => return Err(Error::Parse(format!("unexpected line kind `{other}`"))),
        }
    }
    match kind {
        "ranked" => {
            let ell: u32 = fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad ell `{}`", fields[2])))?;
            let params = BlockParams::new(k, ell)?;
            let ranks: Vec<u32> = ranks
                .into_iter()
                .map(|r| r.ok_or_else(|| Error::Parse("ranked state without rank".into())))
                .collect::<Result<_>>()?;
            Ok(ParsedAutomaton::Ranked(RankedAutomaton::new(
                params,
                ranks,
                initial,
                finals,
                transitions,
            )?))
        }
        "general" => {
            if fields[2] != "-" {
                return Err(Error::Parse("general automata use `-` for ell".into()));
            }
            if ranks.iter().any(|r| r.is_some()) {
                return Err(Error::Parse("general state must not carry a rank".into()));
            }
            if initial.len() != 1 {
                return Err(Error::Parse(
                    "general automata need exactly one initial state".into(),
                ));
            }
            Ok(ParsedAutomaton::General(GeneralAutomaton::new(
                k,
                ranks.len() as u32,
                *initial.iter().next().unwrap(),
                finals,
                transitions,
            )?))
        }
        other => Err(Error::Parse(format!("unknown automaton kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: u32, ell: u32) -> BlockParams {
        BlockParams::new(k, ell).unwrap()
    }

    /// {a,b} over k=2, ell=1 as a 2-state NFA with both transitions from
    /// the initial to the final state.
    fn tiny_nfa() -> RankedAutomaton {
        RankedAutomaton::new(
            params(2, 1),
            vec![1, 0],
            BTreeSet::from([0]),
            BTreeSet::from([1]),
            BTreeSet::from([(0, 0, 1), (0, 1, 1)]),
        )
        .unwrap()
    }

    /// Deterministic prefix-tree (trie) automaton for a word list, as a
    /// GeneralAutomaton: one state per distinct prefix.
    fn trie(words: &[&str], k: u32) -> GeneralAutomaton {
        let mut next_id: StateId = 1;
        let mut transitions: BTreeSet<(StateId, Symbol, StateId)> = BTreeSet::new();
        let mut finals = BTreeSet::new();
        for w in words {
            let mut q: StateId = 0;
            for c in w.chars() {
                let sym = c as u32 - 'a' as u32;
                match transitions
                    .range((q, sym, 0)..=(q, sym, StateId::MAX))
                    .next()
                {
                    Some(&(_, _, to)) => q = to,
                    None => {
                        transitions.insert((q, sym, next_id));
                        q = next_id;
                        next_id += 1;
                    }
                }
            }
            finals.insert(q);
        }
        GeneralAutomaton::new(k, next_id, 0, finals, transitions).unwrap()
    }

    const EXAMPLE_WORDS: [&str; 10] = [
        "aaaa", "aaba", "aabb", "abab", "abba", "abbb", "babb", "bbaa", "bbab", "bbba",
    ];

    #[test]
    fn ranked_constructor_validates() {
        // rank must drop by exactly one
        let err = RankedAutomaton::new(
            params(2, 2),
            vec![2, 0],
            BTreeSet::from([0]),
            BTreeSet::from([1]),
            BTreeSet::from([(0, 0, 1)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotRanked));
        let err = RankedAutomaton::new(
            params(2, 1),
            vec![1, 0],
            BTreeSet::from([0]),
            BTreeSet::from([1]),
            BTreeSet::from([(0, 5, 1)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadSymbol { .. }));
    }

    #[test]
    fn determinize_tiny_nfa() {
        let nfa = tiny_nfa();
        assert!(nfa.is_deterministic(), "one successor per symbol");
        let dfa = nfa.determinize().unwrap();
        assert_eq!(dfa.state_count(), 2);
        assert!(dfa.accepts(&[0]));
        assert!(dfa.accepts(&[1]));
        assert!(!dfa.accepts(&[]));
        assert!(!dfa.accepts(&[0, 0]));
    }

    #[test]
    fn determinize_merges_parallel_paths() {
        // two distinct rank-1 states reached on the same symbol
        let nfa = RankedAutomaton::new(
            params(2, 2),
            vec![2, 1, 1, 0],
            BTreeSet::from([0]),
            BTreeSet::from([3]),
            BTreeSet::from([(0, 0, 1), (0, 0, 2), (1, 0, 3), (2, 1, 3)]),
        )
        .unwrap();
        assert!(!nfa.is_deterministic());
        let dfa = nfa.determinize().unwrap();
        assert!(dfa.is_deterministic());
        for word in [&[0u32, 0][..], &[0, 1], &[1, 0], &[1, 1], &[0], &[]] {
            assert_eq!(dfa.accepts(word), nfa.accepts(word), "word {word:?}");
        }
    }

    #[test]
    fn trim_drops_dead_and_unreachable_states() {
        // state 2 unreachable, state 3 dead (no path to a final state)
        let a = RankedAutomaton::new(
            params(2, 2),
            vec![2, 1, 1, 1, 0],
            BTreeSet::from([0]),
            BTreeSet::from([4]),
            BTreeSet::from([(0, 0, 1), (1, 0, 4), (0, 1, 3), (2, 0, 4)]),
        )
        .unwrap();
        let t = a.trim();
        assert_eq!(t.state_count(), 3);
        assert_eq!(t.transitions().len(), 2);

        let no_final = RankedAutomaton::new(
            params(2, 1),
            vec![1, 0],
            BTreeSet::from([0]),
            BTreeSet::new(),
            BTreeSet::from([(0, 0, 1)]),
        )
        .unwrap();
        assert_eq!(no_final.trim().state_count(), 0);
    }

    #[test]
    fn minimize_trie_of_example_words() {
        // independent route to the minimal DFA: prefix tree, then merge
        let t = trie(&EXAMPLE_WORDS, 2);
        assert_eq!(t.state_count(), 24, "1+2+4+7+10 distinct prefixes");
        let m = t.minimize().unwrap();
        assert_eq!(m.state_count(), 12, "11 trim states plus the sink");
        for w in EXAMPLE_WORDS {
            let syms: Vec<u32> = w.chars().map(|c| c as u32 - 'a' as u32).collect();
            assert!(m.accepts(&syms));
        }
        assert!(!m.accepts(&[0, 0, 0, 1]));
        // already-minimal input is a fixed point up to isomorphism
        assert_eq!(m.minimize().unwrap().state_count(), 12);
    }

    #[test]
    fn minimize_rejects_nondeterministic() {
        let g = tiny_nfa().to_general();
        assert!(g.minimize().is_ok());
        let nd = GeneralAutomaton::new(
            2,
            3,
            0,
            BTreeSet::from([2]),
            BTreeSet::from([(0, 0, 1), (0, 0, 2)]),
        )
        .unwrap();
        assert!(matches!(nd.minimize(), Err(Error::NotDeterministic)));
    }

    #[test]
    fn minimize_empty_language() {
        let dead = GeneralAutomaton::new(2, 1, 0, BTreeSet::new(), BTreeSet::new()).unwrap();
        assert_eq!(dsc(&dead), 1, "sink only");
    }

    #[test]
    fn equivalence_examples() {
        let a3 = trie(&["aaa"], 2);
        let b3 = trie(&["bbb"], 2);
        assert!(!equivalent(&a3, &b3).unwrap());
        assert!(equivalent(&a3, &a3).unwrap());
        // determinized NFA vs trie for the same two words
        let nfa = tiny_nfa();
        let d = nfa.determinize().unwrap().to_general();
        assert!(equivalent(&d, &trie(&["a", "b"], 2)).unwrap());
        let k3 = trie(&["aaa"], 3);
        assert!(matches!(equivalent(&a3, &k3), Err(Error::ParamsMismatch)));
    }

    #[test]
    fn width_profile_counts_trim_ranks() {
        let a = RankedAutomaton::new(
            params(2, 2),
            vec![2, 1, 1, 0],
            BTreeSet::from([0]),
            BTreeSet::from([3]),
            BTreeSet::from([(0, 0, 1), (0, 1, 2), (1, 0, 3), (2, 0, 3), (2, 1, 3)]),
        )
        .unwrap();
        let p = a.width_profile();
        assert_eq!(p.widths, vec![1, 2, 1]);
        assert!(p.has_sink, "deterministic counting convention");
        assert_eq!(p.trim_states(), 4);

        let empty = RankedAutomaton::new(
            params(2, 2),
            vec![],
            BTreeSet::new(),
            BTreeSet::new(),
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(empty.width_profile().widths, vec![0, 0, 0]);
    }

    #[test]
    fn nsc_upper_counts_trim_states() {
        assert_eq!(nsc_upper(&tiny_nfa()), 2);
    }

    #[test]
    fn aut_round_trip_ranked() {
        let a = tiny_nfa();
        let text = a.to_aut();
        match parse_aut(&text).unwrap() {
            ParsedAutomaton::Ranked(b) => assert_eq!(a, b),
            _ => panic!("expected ranked"),
        }
    }

    #[test]
    fn aut_round_trip_general() {
        let g = trie(&["ab", "ba"], 2).completed();
        let text = g.to_aut();
        match parse_aut(&text).unwrap() {
            ParsedAutomaton::General(h) => assert_eq!(g, h),
            _ => panic!("expected general"),
        }
    }

    #[test]
    fn aut_parse_rejects_garbage() {
        assert!(parse_aut("").is_err());
        assert!(parse_aut("AUT1 2 4\n").is_err());
        assert!(parse_aut("AUT1 2 4 ranked\nstate 1 rank=4\n").is_err());
        assert!(parse_aut("AUT1 2 - general\nstate 0 rank=1 initial\n").is_err());
        assert!(parse_aut("AUT1 2 - general\nstate 0\n").is_err());
    }

    #[test]
    fn completed_adds_sink_once() {
        let g = trie(&["ab"], 2);
        let c = g.completed();
        assert_eq!(c.state_count(), g.state_count() + 1);
        for q in 0..c.state_count() as StateId {
            for sym in 0..2 {
                assert_eq!(c.successors(q, sym).count(), 1);
            }
        }
        assert_eq!(c.completed(), c);
    }
}
