//! Ordered expressions: unions and concatenations of single letters and
//! starred letter sets, with their compilation to ordered automata and back.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lang::dfa::{concat_singleton, concat_star, union_all, Dfa};
use crate::limits::Limits;
use crate::poset::{OrderKind, PosetIdeal, ZERO};
use crate::word::{Alphabet, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderedExpr {
    Epsilon,
    Singleton(Letter),
    /// `P*` for a letter set `P`; `Star({})` is the empty word.
    Star(BTreeSet<Letter>),
    Concat(Vec<OrderedExpr>),
    /// An empty union is the empty language.
    Union(Vec<OrderedExpr>),
}

/// A concatenation atom of the normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Atom {
    Letter(Letter),
    Star(BTreeSet<Letter>),
}

impl OrderedExpr {
    pub fn empty() -> Self {
        OrderedExpr::Union(Vec::new())
    }

    pub fn star(letters: impl IntoIterator<Item = Letter>) -> Self {
        OrderedExpr::Star(letters.into_iter().collect())
    }

    pub fn is_empty_language(&self) -> bool {
        match self {
            OrderedExpr::Union(v) => v.iter().all(|e| e.is_empty_language()),
            OrderedExpr::Concat(v) => v.iter().any(|e| e.is_empty_language()),
            _ => false,
        }
    }

    /// All letters mentioned anywhere in the expression.
    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<Letter>) {
        match self {
            OrderedExpr::Epsilon => {}
            OrderedExpr::Singleton(c) => {
                out.insert(*c);
            }
            OrderedExpr::Star(p) => out.extend(p.iter().copied()),
            OrderedExpr::Concat(v) | OrderedExpr::Union(v) => {
                v.iter().for_each(|e| e.collect_letters(out))
            }
        }
    }

    /// Concatenation with the identities `e.eps = e` and `e.empty = empty`.
    pub fn then(self, other: OrderedExpr) -> OrderedExpr {
        if self.is_empty_language() || other.is_empty_language() {
            return OrderedExpr::empty();
        }
        match (self, other) {
            (OrderedExpr::Epsilon, e) | (e, OrderedExpr::Epsilon) => e,
            (OrderedExpr::Concat(mut a), OrderedExpr::Concat(b)) => {
                a.extend(b);
                OrderedExpr::Concat(a)
            }
            (OrderedExpr::Concat(mut a), e) => {
                a.push(e);
                OrderedExpr::Concat(a)
            }
            (e, OrderedExpr::Concat(mut b)) => {
                b.insert(0, e);
                OrderedExpr::Concat(b)
            }
            (a, b) => OrderedExpr::Concat(vec![a, b]),
        }
    }

    /// Union, flattening nested unions and dropping duplicate branches.
    pub fn or(self, other: OrderedExpr) -> OrderedExpr {
        let mut branches = Vec::new();
        for e in [self, other] {
            match e {
                OrderedExpr::Union(v) => branches.extend(v),
                e => branches.push(e),
            }
        }
        let mut out: Vec<OrderedExpr> = Vec::new();
        for b in branches {
            if !b.is_empty_language() && !out.contains(&b) {
                out.push(b);
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            OrderedExpr::Union(out)
        }
    }

    /// Expands into a union of concatenations of atoms.
    fn normal_form(&self, limits: &Limits) -> Result<Vec<Vec<Atom>>> {
        Ok(match self {
            OrderedExpr::Epsilon => vec![vec![]],
            OrderedExpr::Singleton(c) => vec![vec![Atom::Letter(*c)]],
            OrderedExpr::Star(p) if p.is_empty() => vec![vec![]],
            OrderedExpr::Star(p) => vec![vec![Atom::Star(p.clone())]],
            OrderedExpr::Union(v) => {
                let mut out = Vec::new();
                for e in v {
                    out.extend(e.normal_form(limits)?);
                    limits.check_work("expression normal form", out.len() as u64)?;
                }
                out
            }
            OrderedExpr::Concat(v) => {
                let mut acc: Vec<Vec<Atom>> = vec![vec![]];
                for e in v {
                    let nf = e.normal_form(limits)?;
                    limits.check_work(
                        "expression normal form",
                        (acc.len() as u64).saturating_mul(nf.len() as u64),
                    )?;
                    let mut next = Vec::with_capacity(acc.len() * nf.len());
                    for prefix in &acc {
                        for suffix in &nf {
                            let mut seq = prefix.clone();
                            seq.extend(suffix.iter().cloned());
                            next.push(seq);
                        }
                    }
                    acc = next;
                }
                acc
            }
        })
    }
}

/// Builds an ordered automaton recognizing `expr` over `alphabet`.
///
/// Each concatenation branch is folded left to right from the empty-word
/// automaton with [`concat_singleton`] and [`concat_star`]; the branches are
/// then combined with the product union. A prefix such as `{a,b}* a` has no
/// ordered automaton even when the whole expression does, so when the fold
/// leaves the ordered class the expression is instead determinized by subset
/// construction and minimized. The minimal automaton is ordered exactly when
/// some ordered automaton recognizes the language; otherwise the result is
/// [`Error::NotOrderedLanguage`].
pub fn compile_expr(expr: &OrderedExpr, alphabet: &Alphabet) -> Result<Dfa> {
    compile_expr_with(expr, alphabet, &Limits::default())
}

pub fn compile_expr_with(expr: &OrderedExpr, alphabet: &Alphabet, limits: &Limits) -> Result<Dfa> {
    if let Some(&c) = expr.letters().iter().find(|c| !alphabet.contains(**c)) {
        return Err(Error::UnknownLetter(c as char));
    }
    let branches = expr.normal_form(limits)?;
    match fold_branches(&branches, alphabet, limits) {
        Err(Error::NotOrderedLanguage(_)) => {
            let d = subset_automaton(&branches, alphabet, limits)?.minimize();
            if d.is_ordered() {
                Ok(d)
            } else {
                Err(Error::NotOrderedLanguage(expr.to_string()))
            }
        }
        other => other,
    }
}

fn fold_branches(branches: &[Vec<Atom>], alphabet: &Alphabet, limits: &Limits) -> Result<Dfa> {
    let mut built = Vec::with_capacity(branches.len());
    let mut work = 0u64;
    for seq in branches {
        let mut d = Dfa::epsilon(alphabet);
        for atom in seq {
            d = match atom {
                Atom::Letter(c) => concat_singleton(&d, *c)?,
                Atom::Star(p) => concat_star(&d, p)?,
            };
            work += d.num_states() as u64;
            limits.check_work("automaton construction", work)?;
        }
        built.push(d);
    }
    union_all(alphabet, built)
}

/// Any automaton (not necessarily ordered) for a union of atom sequences.
///
/// A position `(branch, i)` means the first `i` atoms of the branch have been
/// read; a star atom may be skipped, or consume a letter and stay put.
pub fn regular_automaton(expr: &OrderedExpr, alphabet: &Alphabet, limits: &Limits) -> Result<Dfa> {
    if let Some(&c) = expr.letters().iter().find(|c| !alphabet.contains(**c)) {
        return Err(Error::UnknownLetter(c as char));
    }
    subset_automaton(&expr.normal_form(limits)?, alphabet, limits)
}

fn subset_automaton(branches: &[Vec<Atom>], alphabet: &Alphabet, limits: &Limits) -> Result<Dfa> {
    type Positions = BTreeSet<(usize, usize)>;
    let close = |set: Positions| -> Positions {
        let mut out = Positions::new();
        for (b, mut i) in set {
            out.insert((b, i));
            while let Some(Atom::Star(_)) = branches[b].get(i) {
                i += 1;
                out.insert((b, i));
            }
        }
        out
    };
    let step = |set: &Positions, c: Letter| -> Positions {
        let mut next = Positions::new();
        for &(b, i) in set {
            match branches[b].get(i) {
                Some(Atom::Letter(x)) if *x == c => {
                    next.insert((b, i + 1));
                }
                Some(Atom::Star(p)) if p.contains(&c) => {
                    next.insert((b, i));
                }
                _ => {}
            }
        }
        close(next)
    };
    let start = close((0..branches.len()).map(|b| (b, 0)).collect());
    let mut ids: BTreeMap<Positions, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut queue = VecDeque::from([0]);
    let mut table: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(alphabet.len());
        for &c in alphabet.letters() {
            let t = step(&sets[s], c);
            let id = match ids.get(&t) {
                Some(&id) => id,
                None => {
                    let id = sets.len();
                    ids.insert(t.clone(), id);
                    sets.push(t);
                    table.push(Vec::new());
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        table[s] = row;
        limits.check_work("subset construction", sets.len() as u64)?;
    }
    let finals = sets
        .iter()
        .map(|set| set.iter().any(|&(b, i)| i == branches[b].len()))
        .collect();
    Dfa::from_table(alphabet.clone(), table, 0, finals)
}

/// Converts an ordered automaton into an ordered expression for the same
/// language by the path-decomposition recursion
/// `L(i,j,k) = L(i,k,k-1) L(k,k,k-1)* L(k,j,k-1) | L(i,j,k-1)`
/// over a topological numbering of the live states. In that numbering the
/// loop language at state `k` is a set of letters, so its star is an atom.
pub fn dfa_to_expr(dfa: &Dfa) -> Result<OrderedExpr> {
    dfa.require_ordered()?;
    let trimmed = dfa.trim();
    if trimmed.is_empty_language() {
        return Ok(OrderedExpr::empty());
    }
    let co = trimmed.coreachable();
    let order: Vec<usize> = trimmed
        .topological_order()
        .ok_or(Error::Unordered)?
        .into_iter()
        .filter(|&s| co[s])
        .collect();
    let s = order.len();
    let pos = |state: usize| order.iter().position(|&x| x == state);
    let letters = trimmed.alphabet().letters();

    // level 0: single letters between live states, plus the empty word on the diagonal
    let mut table: Vec<Vec<OrderedExpr>> = vec![vec![OrderedExpr::empty(); s]; s];
    let mut loops: Vec<BTreeSet<Letter>> = vec![BTreeSet::new(); s];
    for (i, &st) in order.iter().enumerate() {
        for (li, &c) in letters.iter().enumerate() {
            if let Some(j) = pos(trimmed.step_index(st, li)) {
                let cell = std::mem::replace(&mut table[i][j], OrderedExpr::Epsilon);
                table[i][j] = cell.or(OrderedExpr::Singleton(c));
                if i == j {
                    loops[i].insert(c);
                }
            }
        }
        let cell = std::mem::replace(&mut table[i][i], OrderedExpr::Epsilon);
        table[i][i] = cell.or(OrderedExpr::Epsilon);
    }

    for k in 0..s {
        let star = if loops[k].is_empty() {
            OrderedExpr::Epsilon
        } else {
            OrderedExpr::Star(loops[k].clone())
        };
        let mut next = table.clone();
        for i in 0..s {
            for j in 0..s {
                // the loop language at k is {eps} plus its loop letters, and
                // (eps | P) P* = P* (eps | P) = P*
                let left = if i == k { OrderedExpr::Epsilon } else { table[i][k].clone() };
                let right = if j == k { OrderedExpr::Epsilon } else { table[k][j].clone() };
                let through = left.then(star.clone()).then(right);
                next[i][j] = if i == k || j == k {
                    through
                } else {
                    through.or(table[i][j].clone())
                };
            }
        }
        table = next;
    }

    let start = pos(trimmed.initial()).expect("initial state is live");
    let mut out = OrderedExpr::empty();
    for f in trimmed.finals() {
        if let Some(j) = pos(f) {
            out = out.or(table[start][j].clone());
        }
    }
    Ok(out)
}

/// The ordered expression of the language of an ideal: the union over
/// generators `w = w_1 ... w_n` of
///
/// * OI_d: `P* w_1 P* w_2 ... P* w_n P*` with `P = {1, ..., d}`,
/// * OS: `w_1 P_1* w_2 P_2* ... w_n P_n*` with `P_i = {w_1, ..., w_i}`,
/// * Higman: `S* w_1 S* ... S* w_n S*` with `S` the whole alphabet.
pub fn ideal_to_expr(ideal: &PosetIdeal) -> Result<OrderedExpr> {
    let alphabet = ideal.order().alphabet();
    let mut out = OrderedExpr::empty();
    for g in ideal.generators() {
        let branch = match ideal.order().kind() {
            OrderKind::OiZeroAligned(_) => {
                let fill: BTreeSet<Letter> =
                    alphabet.letters().iter().copied().filter(|&c| c != ZERO).collect();
                interleave(g.letters(), &fill)
            }
            OrderKind::Higman => {
                let fill: BTreeSet<Letter> = alphabet.letters().iter().copied().collect();
                interleave(g.letters(), &fill)
            }
            OrderKind::OsPattern => {
                let mut seen = BTreeSet::new();
                let mut parts = Vec::new();
                for &c in g.letters() {
                    seen.insert(c);
                    parts.push(OrderedExpr::Singleton(c));
                    parts.push(OrderedExpr::Star(seen.clone()));
                }
                if parts.is_empty() {
                    OrderedExpr::Epsilon
                } else {
                    OrderedExpr::Concat(parts)
                }
            }
        };
        out = out.or(branch);
    }
    Ok(out)
}

fn interleave(word: &[Letter], fill: &BTreeSet<Letter>) -> OrderedExpr {
    let mut parts = vec![OrderedExpr::Star(fill.clone())];
    for &c in word {
        parts.push(OrderedExpr::Singleton(c));
        parts.push(OrderedExpr::Star(fill.clone()));
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        OrderedExpr::Concat(parts)
    }
}

impl fmt::Display for OrderedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderedExpr::Epsilon => write!(f, "ε"),
            OrderedExpr::Singleton(c) => write!(f, "'{}'", *c as char),
            OrderedExpr::Star(p) => {
                write!(f, "[")?;
                for &c in p {
                    write!(f, "{}", c as char)?;
                }
                write!(f, "]*")
            }
            OrderedExpr::Concat(v) => {
                if v.is_empty() {
                    return write!(f, "ε");
                }
                for e in v {
                    match e {
                        OrderedExpr::Union(u) if u.len() != 1 => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
            OrderedExpr::Union(v) => {
                if v.is_empty() {
                    return write!(f, "∅");
                }
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for OrderedExpr {
    type Err = Error;

    /// Grammar: `expr := seq ('|' seq)*`, `seq := atom*` (empty = ε),
    /// `atom := 'c' | c | c* | [chars]* | (expr) | ε | ∅`.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = ExprParser { chars, pos: 0 };
        let e = p.union()?;
        if p.pos != p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn err(&self, msg: &str) -> Error {
        Error::parse("expr", format!("{msg} at position {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<OrderedExpr> {
        let mut branches = vec![self.seq()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.seq()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            OrderedExpr::Union(branches)
        })
    }

    fn seq(&mut self) -> Result<OrderedExpr> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.atom()?);
        }
        Ok(match parts.len() {
            0 => OrderedExpr::Epsilon,
            1 => parts.pop().unwrap(),
            _ => OrderedExpr::Concat(parts),
        })
    }

    fn letter(&self, c: char) -> Result<Letter> {
        if c.is_ascii_graphic() && !"()[]|*'".contains(c) {
            Ok(c as u8)
        } else {
            Err(self.err(&format!("{c:?} cannot be a letter")))
        }
    }

    fn atom(&mut self) -> Result<OrderedExpr> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        let atom = match c {
            'ε' => OrderedExpr::Epsilon,
            '∅' => OrderedExpr::empty(),
            '(' => {
                let e = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            '[' => {
                let mut set = BTreeSet::new();
                loop {
                    match self.peek() {
                        Some(']') => break,
                        Some(x) => {
                            set.insert(self.letter(x)?);
                            self.pos += 1;
                        }
                        None => return Err(self.err("unterminated '['")),
                    }
                }
                self.pos += 1;
                if self.peek() != Some('*') {
                    return Err(self.err("expected '*' after letter set"));
                }
                self.pos += 1;
                return Ok(OrderedExpr::Star(set));
            }
            '\'' => {
                let x = self.peek().ok_or_else(|| self.err("unterminated quote"))?;
                let l = self.letter(x)?;
                self.pos += 1;
                if self.peek() != Some('\'') {
                    return Err(self.err("expected closing quote"));
                }
                self.pos += 1;
                OrderedExpr::Singleton(l)
            }
            x => OrderedExpr::Singleton(self.letter(x)?),
        };
        if self.peek() == Some('*') {
            self.pos += 1;
            return match atom {
                OrderedExpr::Singleton(l) => Ok(OrderedExpr::star([l])),
                _ => Err(self.err("only letters and letter sets may be starred")),
            };
        }
        Ok(atom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::enumerate::{enumerate_dfa, enumerate_expr};
    use crate::poset::WordOrder;
    use crate::word::Word;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn lang(d: &Dfa, n: usize) -> Vec<String> {
        enumerate_dfa(d, n, &Limits::default())
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect()
    }

    #[test]
    fn parse_and_display() {
        let e: OrderedExpr = "'1'[1]*'2'[12]*".parse().unwrap();
        assert_eq!(e.to_string(), "'1'[1]*'2'[12]*");
        let e2: OrderedExpr = "1 1* 2 [12]*".parse().unwrap();
        assert_eq!(e2, e);
        let u: OrderedExpr = "a|b(a|ε)".parse().unwrap();
        assert_eq!(u.to_string(), "'a'|'b'('a'|ε)");
        assert!("[ab]".parse::<OrderedExpr>().is_err());
        assert!("(a".parse::<OrderedExpr>().is_err());
        assert!("(ab)*".parse::<OrderedExpr>().is_err());
        assert_eq!("∅".parse::<OrderedExpr>().unwrap(), OrderedExpr::empty());
    }

    #[test]
    fn compile_examples() {
        let all = compile_expr(&OrderedExpr::star(*b"ab"), &ab()).unwrap();
        assert_eq!(all.num_states(), 1);
        assert!(all.is_final(0));
        let aa = compile_expr(&"a[a]*".parse().unwrap(), &ab()).unwrap();
        assert!(aa.is_ordered());
        assert_eq!(lang(&aa, 6), ["a", "aa", "aaa", "aaaa", "aaaaa", "aaaaaa"]);
        let u = compile_expr(&"a|b".parse().unwrap(), &ab()).unwrap();
        assert_eq!(lang(&u, 3), ["a", "b"]);
        let empty = compile_expr(&OrderedExpr::empty(), &ab()).unwrap();
        assert!(empty.is_empty_language());
        assert_eq!(
            compile_expr(&"c".parse().unwrap(), &ab()),
            Err(Error::UnknownLetter('c'))
        );
    }

    #[test]
    fn dfa_to_expr_examples() {
        let all = compile_expr(&OrderedExpr::star(*b"a"), &Alphabet::parse("a").unwrap()).unwrap();
        assert_eq!(dfa_to_expr(&all).unwrap(), OrderedExpr::star(*b"a"));

        let asb = compile_expr(&"a*b".parse().unwrap(), &ab()).unwrap();
        let back = compile_expr(&dfa_to_expr(&asb).unwrap(), &ab()).unwrap();
        assert_eq!(lang(&back, 8), lang(&asb, 8));

        let abb = compile_expr(&"a|bb".parse().unwrap(), &ab()).unwrap();
        let e = dfa_to_expr(&abb).unwrap();
        assert!(matches!(e, OrderedExpr::Union(_)));
        assert_eq!(lang(&compile_expr(&e, &ab()).unwrap(), 4), ["a", "bb"]);
    }

    #[test]
    fn ideal_expression_shapes() {
        let oi = PosetIdeal::new(WordOrder::oi(2).unwrap(), &[Word::from("0")]).unwrap();
        assert_eq!(ideal_to_expr(&oi).unwrap().to_string(), "[12]*'0'[12]*");
        let os = PosetIdeal::new(
            WordOrder::os(Alphabet::parse("12").unwrap()),
            &[Word::from("12")],
        )
        .unwrap();
        let e = ideal_to_expr(&os).unwrap();
        assert_eq!(e.to_string(), "'1'[1]*'2'[12]*");
        let words: Vec<String> = enumerate_expr(&e, 3, &Limits::default())
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["12", "112", "121", "122"]);
        let none = PosetIdeal::empty(WordOrder::oi(1).unwrap());
        assert_eq!(ideal_to_expr(&none).unwrap(), OrderedExpr::empty());
    }

    #[test]
    fn prefixes_outside_the_ordered_class() {
        let limits = Limits::default();
        // {a,b}* a on its own needs a cycle
        let e: OrderedExpr = "[ab]*'a'".parse().unwrap();
        assert!(matches!(compile_expr(&e, &ab()), Err(Error::NotOrderedLanguage(_))));
        let d = regular_automaton(&e, &ab(), &limits).unwrap();
        assert!(!d.minimize().is_ordered());
        assert_eq!(lang(&d, 2), ["a", "aa", "ba"]);
        // a trailing star restores orderedness
        let e: OrderedExpr = "[ab]*'a'[ab]*".parse().unwrap();
        let d = compile_expr(&e, &ab()).unwrap();
        assert!(d.is_ordered());
        assert_eq!(lang(&d, 2), ["a", "aa", "ab", "ba"]);
        // so does absorbing the bad branch into a larger one
        let e: OrderedExpr = "[ab]*'a' | [ab]*".parse().unwrap();
        let d = compile_expr(&e, &ab()).unwrap();
        assert_eq!(d.num_states(), 1);
    }

    #[test]
    fn oi2_ideal_compiles() {
        let oi = PosetIdeal::new(WordOrder::oi(2).unwrap(), &[Word::from("10")]).unwrap();
        let e = ideal_to_expr(&oi).unwrap();
        let d = compile_expr(&e, &Alphabet::parse("012").unwrap()).unwrap();
        assert!(d.is_ordered());
        let expected: Vec<String> = enumerate_expr(&e, 4, &Limits::default())
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(lang(&d, 4), expected);
    }
}
