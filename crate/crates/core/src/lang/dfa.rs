//! Deterministic automata and the closure constructions for ordered ones.
//!
//! An automaton is *ordered* when no two distinct states can reach each
//! other; self-loops are allowed. Reachability then partially orders the
//! states, and every construction here preserves that property.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

pub type State = usize;

/// A complete deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    /// `delta[state][letter index]`
    delta: Vec<Vec<State>>,
    initial: State,
    finals: Vec<bool>,
}

impl Dfa {
    /// Builds an automaton from a transition list; every `(state, letter)`
    /// pair must appear exactly once.
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        transitions: &[(Letter, State, State)],
        initial: State,
        finals: &[State],
    ) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::MalformedDfa("an automaton needs at least one state".into()));
        }
        let k = alphabet.len();
        let mut delta: Vec<Vec<Option<State>>> = vec![vec![None; k]; num_states];
        for &(c, from, to) in transitions {
            let li = alphabet.index_of(c).ok_or(Error::UnknownLetter(c as char))?;
            if from >= num_states || to >= num_states {
                return Err(Error::MalformedDfa(format!(
                    "transition ({}, {from}, {to}) names a state outside 0..{num_states}",
                    c as char
                )));
            }
            if delta[from][li].replace(to).is_some() {
                return Err(Error::MalformedDfa(format!(
                    "duplicate transition on {:?} from state {from}",
                    c as char
                )));
            }
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(s, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(li, t)| {
                        t.ok_or_else(|| {
                            Error::MalformedDfa(format!(
                                "no transition on {:?} from state {s}",
                                alphabet.letters()[li] as char
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if initial >= num_states {
            return Err(Error::MalformedDfa(format!("initial state {initial} out of range")));
        }
        let mut fin = vec![false; num_states];
        for &f in finals {
            if f >= num_states {
                return Err(Error::MalformedDfa(format!("final state {f} out of range")));
            }
            fin[f] = true;
        }
        Ok(Dfa {
            alphabet,
            delta,
            initial,
            finals: fin,
        })
    }

    /// Builds from a dense table `table[state][letter index]`.
    pub fn from_table(
        alphabet: Alphabet,
        table: Vec<Vec<State>>,
        initial: State,
        finals: Vec<bool>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 || finals.len() != n || initial >= n {
            return Err(Error::MalformedDfa("inconsistent table dimensions".into()));
        }
        for row in &table {
            if row.len() != alphabet.len() || row.iter().any(|&t| t >= n) {
                return Err(Error::MalformedDfa("transition table is not total".into()));
            }
        }
        Ok(Dfa {
            alphabet,
            delta: table,
            initial,
            finals,
        })
    }

    /// Accepts only the empty word: an accepting start state, every letter
    /// leading to a dead sink.
    pub fn epsilon(alphabet: &Alphabet) -> Dfa {
        let k = alphabet.len();
        Dfa {
            alphabet: alphabet.clone(),
            delta: vec![vec![1; k], vec![1; k]],
            initial: 0,
            finals: vec![true, false],
        }
    }

    pub fn empty_language(alphabet: &Alphabet) -> Dfa {
        Dfa {
            alphabet: alphabet.clone(),
            delta: vec![vec![0; alphabet.len()]],
            initial: 0,
            finals: vec![false],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_final(&self, s: State) -> bool {
        self.finals[s]
    }

    pub fn finals(&self) -> Vec<State> {
        (0..self.num_states()).filter(|&s| self.finals[s]).collect()
    }

    /// Target of the transition out of `s` on the letter with index `li`.
    pub fn step_index(&self, s: State, li: usize) -> State {
        self.delta[s][li]
    }

    pub fn step(&self, s: State, c: Letter) -> Result<State> {
        let li = self.alphabet.index_of(c).ok_or(Error::UnknownLetter(c as char))?;
        Ok(self.delta[s][li])
    }

    pub fn table(&self) -> &[Vec<State>] {
        &self.delta
    }

    pub fn run(&self, w: &Word) -> Result<State> {
        w.letters()
            .iter()
            .try_fold(self.initial, |s, &c| self.step(s, c))
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.finals[self.run(w)?])
    }

    /// Letters inducing a self-loop at `s`.
    pub fn loop_letters(&self, s: State) -> BTreeSet<Letter> {
        self.alphabet
            .letters()
            .iter()
            .enumerate()
            .filter(|(li, _)| self.delta[s][*li] == s)
            .map(|(_, &c)| c)
            .collect()
    }

    /// Topological order of the states ignoring self-loops, or `None` when a
    /// cycle through two distinct states exists. Among available states the
    /// smallest index is emitted first, so the order is deterministic.
    pub fn topological_order(&self) -> Option<Vec<State>> {
        let n = self.num_states();
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<BTreeSet<State>> = vec![BTreeSet::new(); n];
        for (s, row) in self.delta.iter().enumerate() {
            for &t in row {
                if t != s && succ[s].insert(t) {
                    indeg[t] += 1;
                }
            }
        }
        let mut ready: BTreeSet<State> = (0..n).filter(|&s| indeg[s] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(s) = ready.pop_first() {
            order.push(s);
            for &t in &succ[s] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_ordered(&self) -> bool {
        self.topological_order().is_some()
    }

    pub(crate) fn require_ordered(&self) -> Result<()> {
        if self.is_ordered() {
            Ok(())
        } else {
            Err(Error::Unordered)
        }
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// States from which some final state can be reached.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut pred: Vec<Vec<State>> = vec![Vec::new(); n];
        for s in 0..n {
            for &t in &self.delta[s] {
                pred[t].push(s);
            }
        }
        let mut seen = self.finals.clone();
        let mut queue: VecDeque<State> = (0..n).filter(|&s| seen[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &pred[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Drops unreachable states and merges every state that cannot reach a
    /// final state into one sink. Recognizes the same language; keeps an
    /// ordered automaton ordered (the sink only loops to itself). Kept states
    /// are renumbered in breadth-first order from the initial state.
    pub fn trim(&self) -> Dfa {
        let reach = self.reachable();
        let co = self.coreachable();
        if !co[self.initial] {
            return Dfa::empty_language(&self.alphabet);
        }
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut new_id: Vec<Option<State>> = vec![None; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        new_id[self.initial] = Some(0);
        order.push(self.initial);
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                if reach[t] && co[t] && new_id[t].is_none() {
                    new_id[t] = Some(order.len());
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let needs_sink = order
            .iter()
            .any(|&s| self.delta[s].iter().any(|&t| new_id[t].is_none()));
        let sink = order.len();
        let mut delta: Vec<Vec<State>> = order
            .iter()
            .map(|&s| {
                self.delta[s]
                    .iter()
                    .map(|&t| new_id[t].unwrap_or(sink))
                    .collect()
            })
            .collect();
        let mut finals: Vec<bool> = order.iter().map(|&s| self.finals[s]).collect();
        if needs_sink {
            delta.push(vec![sink; k]);
            finals.push(false);
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            initial: 0,
            finals,
        }
    }

    /// The minimal complete automaton for the same language, states numbered
    /// in breadth-first order from the initial state.
    pub fn minimize(&self) -> Dfa {
        let d = self.trim();
        let n = d.num_states();
        // Moore refinement: split classes by finality, then by successor classes
        let mut class: Vec<usize> = d.finals.iter().map(|&f| usize::from(f)).collect();
        loop {
            let mut ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let next: Vec<usize> = (0..n)
                .map(|s| {
                    let key = (class[s], d.delta[s].iter().map(|&t| class[t]).collect());
                    let fresh = ids.len();
                    *ids.entry(key).or_insert(fresh)
                })
                .collect();
            let before = class.iter().collect::<BTreeSet<_>>().len();
            class = next;
            if ids.len() == before {
                break;
            }
        }
        let classes = class.iter().collect::<BTreeSet<_>>().len();
        let mut delta = vec![Vec::new(); classes];
        let mut finals = vec![false; classes];
        for s in 0..n {
            delta[class[s]] = d.delta[s].iter().map(|&t| class[t]).collect();
            finals[class[s]] = d.finals[s];
        }
        Dfa {
            alphabet: d.alphabet.clone(),
            delta,
            initial: class[d.initial],
            finals,
        }
        .trim()
    }

    /// The same automaton with a different set of final states.
    pub fn with_finals(&self, finals: &[State]) -> Dfa {
        let mut f = vec![false; self.num_states()];
        for &s in finals {
            f[s] = true;
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta: self.delta.clone(),
            initial: self.initial,
            finals: f,
        }
    }

    pub fn is_empty_language(&self) -> bool {
        let co = self.coreachable();
        !co[self.initial]
    }
}

/// Product automaton whose final states are the pairs with at least one
/// final component. Both inputs must be ordered; the result has exactly
/// `|Q| * |Q'|` states and is ordered.
pub fn ordered_union(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch(format!(
            "union of automata over {} and {}",
            a.alphabet, b.alphabet
        )));
    }
    a.require_ordered()?;
    b.require_ordered()?;
    let nb = b.num_states();
    let k = a.alphabet.len();
    let pair = |x: State, y: State| x * nb + y;
    let mut delta = Vec::with_capacity(a.num_states() * nb);
    let mut finals = Vec::with_capacity(a.num_states() * nb);
    for x in 0..a.num_states() {
        for y in 0..nb {
            delta.push((0..k).map(|li| pair(a.delta[x][li], b.delta[y][li])).collect());
            finals.push(a.finals[x] || b.finals[y]);
        }
    }
    Ok(Dfa {
        alphabet: a.alphabet.clone(),
        delta,
        initial: pair(a.initial, b.initial),
        finals,
    })
}

/// One automaton per final state, each keeping only that state final.
pub fn split_by_final(dfa: &Dfa) -> Result<Vec<Dfa>> {
    dfa.require_ordered()?;
    Ok(dfa.finals().into_iter().map(|f| dfa.with_finals(&[f])).collect())
}

/// Trimmed union of a family of ordered automata.
pub(crate) fn union_all(alphabet: &Alphabet, parts: Vec<Dfa>) -> Result<Dfa> {
    let mut it = parts.into_iter();
    let Some(first) = it.next() else {
        return Ok(Dfa::empty_language(alphabet));
    };
    let mut acc = first.trim();
    for d in it {
        acc = ordered_union(&acc, &d.trim())?.trim();
    }
    Ok(acc)
}

/// Splits into single-final pieces, applies `f` to each non-empty piece and
/// unions the results.
fn per_final_piece(dfa: &Dfa, f: impl Fn(&Dfa, State) -> Result<Dfa>) -> Result<Dfa> {
    let pieces = split_by_final(dfa)?;
    let mut built = Vec::new();
    for piece in pieces {
        let piece = piece.trim();
        let finals = piece.finals();
        // a trimmed non-empty piece has exactly one final state
        if let [tau] = finals[..] {
            built.push(f(&piece, tau)?);
        }
    }
    union_all(&dfa.alphabet, built)
}

/// Recognizes `L(dfa) . {c}`.
///
/// Works piece by piece on the single-final pieces. When `c` does not loop
/// at the final state `tau`, a fresh final state is hung off `tau`. When the
/// only loop at `tau` is `c` itself, the piece is `A c*` and becomes `A c+`.
/// Any other loop set containing `c` can make the result non-ordered (as in
/// `{a,b}* a`); those pieces are built with the direct product automaton and
/// minimized, and [`Error::NotOrderedLanguage`] is returned if the minimal
/// automaton still has a cycle.
pub fn concat_singleton(dfa: &Dfa, c: Letter) -> Result<Dfa> {
    dfa.require_ordered()?;
    let ci = dfa
        .alphabet
        .index_of(c)
        .ok_or(Error::UnknownLetter(c as char))?;
    per_final_piece(dfa, |d, tau| {
        let rho = d.delta[tau][ci];
        let k = d.alphabet.len();
        let tau2 = d.num_states();
        let mut delta = d.delta.clone();
        let mut finals = vec![false; tau2 + 1];
        finals[tau2] = true;
        if rho != tau {
            delta[tau][ci] = tau2;
            delta.push(vec![rho; k]);
        } else if d.loop_letters(tau) == BTreeSet::from([c]) {
            let sink = tau2 + 1;
            delta[tau][ci] = tau2;
            let mut row = vec![sink; k];
            row[ci] = tau2;
            delta.push(row);
            delta.push(vec![sink; k]);
            finals.push(false);
        } else {
            return concat_letter_general(d, ci);
        }
        Ok(Dfa {
            alphabet: d.alphabet.clone(),
            delta,
            initial: d.initial,
            finals,
        })
    })
}

/// `L(d) . c` through the pair automaton `(state, last step was c from a
/// final state)`, minimized.
fn concat_letter_general(d: &Dfa, ci: usize) -> Result<Dfa> {
    let n = d.num_states();
    let k = d.alphabet.len();
    let pair = |s: State, b: bool| 2 * s + usize::from(b);
    let mut delta = Vec::with_capacity(2 * n);
    let mut finals = Vec::with_capacity(2 * n);
    for s in 0..n {
        for b in [false, true] {
            delta.push((0..k).map(|li| pair(d.delta[s][li], d.finals[s] && li == ci)).collect());
            finals.push(b);
        }
    }
    let out = Dfa {
        alphabet: d.alphabet.clone(),
        delta,
        initial: pair(d.initial, false),
        finals,
    }
    .minimize();
    if out.is_ordered() {
        Ok(out)
    } else {
        Err(Error::NotOrderedLanguage(format!(
            "a language followed by the letter {:?}",
            d.alphabet.letters()[ci] as char
        )))
    }
}

/// Recognizes `L(dfa) . P*` for a letter set `P`.
pub fn concat_star(dfa: &Dfa, letters: &BTreeSet<Letter>) -> Result<Dfa> {
    dfa.require_ordered()?;
    if let Some(&c) = letters.iter().find(|c| !dfa.alphabet.contains(**c)) {
        return Err(Error::UnknownLetter(c as char));
    }
    per_final_piece(dfa, |d, tau| {
        // In a trimmed piece every non-loop edge out of the final state is
        // dead, so when its loop letters lie inside P the star can be
        // absorbed into the final state itself.
        let loops = d.loop_letters(tau);
        if loops.is_subset(letters) {
            let mut delta = d.delta.clone();
            for (li, c) in d.alphabet.letters().iter().enumerate() {
                if letters.contains(c) {
                    delta[tau][li] = tau;
                }
            }
            return Ok(Dfa {
                delta,
                ..d.clone()
            });
        }
        let k = d.alphabet.len();
        let tau2 = d.num_states();
        let rho = tau2 + 1;
        let mut delta = d.delta.clone();
        let mut tau_row = Vec::with_capacity(k);
        let mut tau2_row = Vec::with_capacity(k);
        for (li, c) in d.alphabet.letters().iter().enumerate() {
            let in_pi = letters.contains(c);
            let in_delta = d.delta[tau][li] == tau;
            tau_row.push(if in_delta {
                tau
            } else if in_pi {
                tau2
            } else {
                rho
            });
            tau2_row.push(if in_pi { tau2 } else { rho });
        }
        delta[tau] = tau_row;
        delta.push(tau2_row);
        delta.push(vec![rho; k]);
        let mut finals = vec![false; tau2 + 2];
        finals[tau] = true;
        finals[tau2] = true;
        Ok(Dfa {
            alphabet: d.alphabet.clone(),
            delta,
            initial: d.initial,
            finals,
        })
    })
}

/// Self-loop letter sets of the prefinal states (reachable states from
/// which a final state is reachable), in topological order, deduplicated.
pub fn repeatable_subsets(dfa: &Dfa) -> Result<Vec<BTreeSet<Letter>>> {
    let order = dfa.topological_order().ok_or(Error::Unordered)?;
    let reach = dfa.reachable();
    let co = dfa.coreachable();
    let mut out: Vec<BTreeSet<Letter>> = Vec::new();
    for s in order {
        if reach[s] && co[s] {
            let l = dfa.loop_letters(s);
            if !out.contains(&l) {
                out.push(l);
            }
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct DfaRecord {
    alphabet: Alphabet,
    states: usize,
    transitions: Vec<(String, State, State)>,
    initial: State,
    finals: Vec<State>,
}

impl Serialize for Dfa {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut transitions = Vec::new();
        for (from, row) in self.delta.iter().enumerate() {
            for (li, &to) in row.iter().enumerate() {
                transitions.push(((self.alphabet.letters()[li] as char).to_string(), from, to));
            }
        }
        DfaRecord {
            alphabet: self.alphabet.clone(),
            states: self.num_states(),
            transitions,
            initial: self.initial,
            finals: self.finals(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dfa {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = DfaRecord::deserialize(d)?;
        let mut trans = Vec::with_capacity(rec.transitions.len());
        for (c, from, to) in rec.transitions {
            let bytes = c.as_bytes();
            if bytes.len() != 1 {
                return Err(D::Error::custom(format!("letter {c:?} is not a single character")));
            }
            trans.push((bytes[0], from, to));
        }
        Dfa::new(rec.alphabet, rec.states, &trans, rec.initial, &rec.finals)
            .map_err(D::Error::custom)
    }
}
