//! Bounded enumeration of languages, used as an independent oracle.
//!
//! Results are deduplicated and listed shortest first, then lexicographically.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::lang::cfg::Cfg;
use crate::lang::dfa::Dfa;
use crate::lang::expr::OrderedExpr;
use crate::limits::Limits;
use crate::word::{words_up_to, Word};

fn shortlex(set: BTreeSet<Word>) -> Vec<Word> {
    let mut v: Vec<Word> = set.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

/// A source of words that can be enumerated.
pub enum LanguageSource<'a> {
    Dfa(&'a Dfa),
    Expr(&'a OrderedExpr),
    Cfg(&'a Cfg),
}

pub fn enumerate_language(src: LanguageSource<'_>, max_len: usize, limits: &Limits) -> Result<Vec<Word>> {
    match src {
        LanguageSource::Dfa(d) => enumerate_dfa(d, max_len, limits),
        LanguageSource::Expr(e) => enumerate_expr(e, max_len, limits),
        LanguageSource::Cfg(g) => enumerate_cfg(g, max_len, limits),
    }
}

/// Depth-first walk restricted to states that can still reach a final state.
pub fn enumerate_dfa(dfa: &Dfa, max_len: usize, limits: &Limits) -> Result<Vec<Word>> {
    limits.check_len(max_len)?;
    let live = dfa.coreachable();
    let mut out = BTreeSet::new();
    let mut work = 0u64;
    let mut stack = vec![(dfa.initial(), Word::empty())];
    while let Some((s, w)) = stack.pop() {
        if !live[s] {
            continue;
        }
        work += 1;
        limits.check_work("automaton enumeration", work)?;
        if dfa.is_final(s) {
            out.insert(w.clone());
        }
        if w.len() < max_len {
            for (li, &c) in dfa.alphabet().letters().iter().enumerate() {
                let mut next = w.clone();
                next.push(c);
                stack.push((dfa.step_index(s, li), next));
            }
        }
    }
    Ok(shortlex(out))
}

/// Direct expansion of the expression, independent of any automaton.
pub fn enumerate_expr(expr: &OrderedExpr, max_len: usize, limits: &Limits) -> Result<Vec<Word>> {
    limits.check_len(max_len)?;
    let mut work = 0u64;
    Ok(shortlex(expand(expr, max_len, limits, &mut work)?))
}

fn expand(e: &OrderedExpr, max_len: usize, limits: &Limits, work: &mut u64) -> Result<BTreeSet<Word>> {
    let out = match e {
        OrderedExpr::Epsilon => BTreeSet::from([Word::empty()]),
        OrderedExpr::Singleton(c) => {
            if max_len == 0 {
                BTreeSet::new()
            } else {
                BTreeSet::from([Word::new(vec![*c])])
            }
        }
        OrderedExpr::Star(p) => {
            let a = crate::word::Alphabet::new(p.iter().copied())?;
            words_up_to(&a, max_len).into_iter().collect()
        }
        OrderedExpr::Union(v) => {
            let mut s = BTreeSet::new();
            for x in v {
                s.extend(expand(x, max_len, limits, work)?);
            }
            s
        }
        OrderedExpr::Concat(v) => {
            let mut acc = BTreeSet::from([Word::empty()]);
            for x in v {
                let part = expand(x, max_len, limits, work)?;
                let mut next = BTreeSet::new();
                for a in &acc {
                    for b in &part {
                        if a.len() + b.len() <= max_len {
                            next.insert(a.concat(b));
                        }
                    }
                }
                *work += (acc.len() * part.len()) as u64;
                limits.check_work("expression enumeration", *work)?;
                acc = next;
            }
            acc
        }
    };
    *work += out.len() as u64;
    limits.check_work("expression enumeration", *work)?;
    Ok(out)
}

/// Filters all words up to `max_len` through the grammar's membership test.
pub fn enumerate_cfg(g: &Cfg, max_len: usize, limits: &Limits) -> Result<Vec<Word>> {
    limits.check_len(max_len)?;
    let k = g.terminals().len() as u64;
    let total: u64 = (0..=max_len as u32).map(|l| k.saturating_pow(l)).sum();
    limits.check_work("grammar enumeration", total)?;
    let mut out = BTreeSet::new();
    for w in words_up_to(g.terminals(), max_len) {
        if g.generates(&w)? {
            out.insert(w);
        }
    }
    Ok(shortlex(out))
}
