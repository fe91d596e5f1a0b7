//! Derivation counting for context-free grammars.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lang::cfg::{Cfg, Symbol};
use crate::limits::Limits;
use crate::poly::{q_int, Exponent};
use crate::series::rational::CoeffTable;
use crate::series::transfer::NormedAlphabet;

/// Truncated generating function of derivation counts, keyed by
/// `(length, norm)`.
type Counts = BTreeMap<(usize, Exponent), BigInt>;

fn convolve(a: &Counts, b: &Counts, order: usize) -> Counts {
    let mut out = Counts::new();
    for ((la, na), ca) in a {
        for ((lb, nb), cb) in b {
            if la + lb > order {
                continue;
            }
            let norm: Exponent = na.iter().zip(nb).map(|(x, y)| x + y).collect();
            *out.entry((la + lb, norm)).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out
}

/// For every norm vector, the number of derivation trees of the start symbol
/// yielding words of that norm, over words of length at most `order`.
///
/// For an unambiguous grammar this is the Hilbert series of its language,
/// truncated by length. The counts are the least fixpoint of
/// `F_N = sum_{N -> body} prod_{symbols} F`, iterated from zero. A fixpoint
/// that has not settled after `(order + 2)(|N| + 1)` rounds means some word
/// has infinitely many derivations, which is reported as non-terminating;
/// a unit rule `N -> N` is rejected up front.
pub fn cfg_count(g: &Cfg, norms: &NormedAlphabet, order: usize, limits: &Limits) -> Result<CoeffTable> {
    limits.check_order(order)?;
    if norms.alphabet() != g.terminals() {
        return Err(Error::AlphabetMismatch("norms and grammar terminals differ".into()));
    }
    for r in g.rules() {
        if r.body == [Symbol::NonTerminal(r.head)] {
            return Err(Error::NonTerminating(format!(
                "rule {} -> {}",
                g.nonterminal_name(r.head),
                g.nonterminal_name(r.head)
            )));
        }
    }
    let dim = norms.dim();
    let nn = g.num_nonterminals();
    let letter = |c: u8| -> Counts {
        let norm = norms.norm(c).expect("terminal is in the alphabet").clone();
        Counts::from([((1, norm), BigInt::one())])
    };
    let unit = Counts::from([((0, vec![0; dim]), BigInt::one())]);
    let bound = (order + 2) * (nn + 1) + 1;
    let mut table: Vec<Counts> = vec![Counts::new(); nn];
    let mut work = 0u64;
    let mut settled = false;
    for _ in 0..bound {
        let mut next: Vec<Counts> = vec![Counts::new(); nn];
        for r in g.rules() {
            let mut acc = unit.clone();
            for sym in &r.body {
                let part = match *sym {
                    Symbol::Terminal(c) => letter(c),
                    Symbol::NonTerminal(m) => table[m].clone(),
                };
                work += (acc.len() * part.len()) as u64 + 1;
                acc = convolve(&acc, &part, order);
                if acc.is_empty() {
                    break;
                }
            }
            for (k, v) in acc {
                *next[r.head].entry(k).or_insert_with(BigInt::zero) += v;
            }
        }
        limits.check_work("derivation counting", work)?;
        if next == table {
            settled = true;
            break;
        }
        table = next;
    }
    if !settled {
        return Err(Error::NonTerminating(
            "derivation counts keep growing; some word has infinitely many derivations".into(),
        ));
    }
    let mut out = CoeffTable::new(dim);
    for ((_, norm), c) in &table[g.start()] {
        out.add_to(norm.clone(), q_int(c.clone()));
    }
    Ok(out)
}

/// `sum_n (dn)! / n!^d t^{dn}` up to degree `order`: words using each of `d`
/// letters equally often.
pub fn multinomial_series(d: usize, order: usize) -> Result<CoeffTable> {
    if d == 0 {
        return Err(Error::Domain("multinomial series needs d >= 1".into()));
    }
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |a, i| a * i);
    let mut out = CoeffTable::new(1);
    for n in 0..=order / d {
        let c = fact(d * n) / fact(n).pow(d as u32);
        out.add_to(vec![(d * n) as u32], q_int(c));
    }
    Ok(out)
}
