//! Degree-truncated submodules of (sums of) principal projectives over `Q`.
//!
//! A module element at `[m]` is a finite `Q`-combination of basis vectors
//! `e_f`, one for each morphism word `f: [n_k] -> [m]` of each summand `k`.
//! Columns are ordered by summand first, then by the admissible order on
//! words; the initial term of an element is its largest column.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::category::{compose_words, divides, hom_words, principal_projective_series, CategoryId, MorphismWord};
use crate::error::{Error, Result};
use crate::lang::expr::{compile_expr_with, ideal_to_expr};
use crate::limits::Limits;
use crate::poly::{fmt_q, parse_q, Poly, Q};
use crate::poset::{PosetIdeal, WordOrder};
use crate::series::rational::RationalSeries;
use crate::series::transfer::{dfa_series, NormedAlphabet};
use crate::word::{Alphabet, Word};

/// A basis vector: summand index and morphism word.
pub type Column = (usize, MorphismWord);

fn check_category(cat: &CategoryId) -> Result<()> {
    match cat {
        CategoryId::Oi(_) | CategoryId::Os => Ok(()),
        _ => Err(Error::UnsupportedCategory(format!(
            "{cat}: module computations support oi:d and os"
        ))),
    }
}

/// An element of `P_{[n_0]} ⊕ P_{[n_1]} ⊕ ...` evaluated at `[m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    target: usize,
    terms: BTreeMap<Column, Q>,
}

impl ModuleElement {
    pub fn zero(target: usize) -> Self {
        ModuleElement {
            target,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(summand: usize, f: MorphismWord) -> Self {
        ModuleElement {
            target: f.target(),
            terms: BTreeMap::from([((summand, f), Q::one())]),
        }
    }

    /// Builds an element, dropping zero coefficients; all words must share
    /// one target size.
    pub fn from_terms(target: usize, terms: impl IntoIterator<Item = (Column, Q)>) -> Result<Self> {
        let mut out = ModuleElement::zero(target);
        for ((k, f), c) in terms {
            if f.target() != target {
                return Err(Error::SizeMismatch(format!(
                    "word {f} has target {} in an element at [{target}]",
                    f.target()
                )));
            }
            out.add_term((k, f), c);
        }
        Ok(out)
    }

    fn add_term(&mut self, col: Column, c: Q) {
        let entry = self.terms.entry(col.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&col);
        }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Column, &Q)> {
        self.terms.iter()
    }

    /// The largest column, i.e. the initial monomial.
    pub fn initial(&self) -> Option<&Column> {
        self.terms.keys().next_back()
    }

    /// `h_*(self)`: post-composes every word with `h`.
    pub fn apply(&self, cat: &CategoryId, h: &MorphismWord) -> Result<ModuleElement> {
        let mut out = ModuleElement::zero(h.target());
        for ((k, f), c) in &self.terms {
            out.add_term((*k, compose_words(cat, h, f)?), c.clone());
        }
        Ok(out)
    }

    /// Parses `c*[w] + c*[w] - ...`. A coefficient may be omitted (`[w]`),
    /// written as `p/q`, and a word may carry a summand prefix `[k:w]`.
    /// `0` is the zero element. `sources` gives the source size of each
    /// summand.
    pub fn parse(cat: &CategoryId, sources: &[usize], s: &str) -> Result<Self> {
        check_category(cat)?;
        let field = "module element";
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "0" {
            return Ok(ModuleElement::zero(0));
        }
        if text.is_empty() {
            return Err(Error::parse(field, "empty element"));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut depth = 0;
        let mut cur = String::new();
        let mut negative = false;
        for ch in text.chars() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ => {}
            }
            if (ch == '+' || ch == '-') && depth == 0 && !cur.is_empty() {
                pieces.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
                continue;
            }
            if (ch == '+' || ch == '-') && depth == 0 && cur.is_empty() {
                negative ^= ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if depth != 0 {
            return Err(Error::parse(field, format!("unbalanced brackets in {s:?}")));
        }
        if cur.is_empty() {
            return Err(Error::parse(field, format!("dangling sign in {s:?}")));
        }
        pieces.push((negative, cur));
        let mut terms = Vec::new();
        for (neg, piece) in pieces {
            let open = piece
                .find('[')
                .ok_or_else(|| Error::parse(field, format!("term {piece:?} has no [word]")))?;
            if !piece.ends_with(']') {
                return Err(Error::parse(field, format!("term {piece:?} must end with ]")));
            }
            let coeff_text = piece[..open].trim_end_matches('*');
            let mut c = if coeff_text.is_empty() {
                Q::one()
            } else {
                parse_q(coeff_text)
                    .ok_or_else(|| Error::parse(field, format!("bad coefficient {coeff_text:?}")))?
            };
            if neg {
                c = -c;
            }
            let inner = &piece[open + 1..piece.len() - 1];
            let (k, word) = match inner.split_once(':') {
                Some((k, w)) => (
                    k.parse::<usize>()
                        .map_err(|_| Error::parse(field, format!("bad summand index {k:?}")))?,
                    w,
                ),
                None => (0, inner),
            };
            let n = *sources.get(k).ok_or_else(|| {
                Error::parse(field, format!("summand {k} out of range (have {})", sources.len()))
            })?;
            let f = MorphismWord::with_source(cat, n, Word::parse(word)?)?;
            terms.push(((k, f), c));
        }
        let target = terms[0].0 .1.target();
        ModuleElement::from_terms(target, terms)
    }

    fn render(&self, tagged: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, ((k, f), c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, sign) {
                (0, "-") => out.push('-'),
                (0, _) => {}
                _ => out.push_str(&format!(" {sign} ")),
            }
            let w = if tagged { format!("{k}:{f}") } else { f.to_string() };
            out.push_str(&format!("{}*[{w}]", fmt_q(&c.abs())));
        }
        out
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tagged = self.terms.keys().any(|(k, _)| *k > 0);
        f.write_str(&self.render(tagged))
    }
}

/// Reduced row echelon basis of a subspace, keyed by pivot (largest) column.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Echelon {
    rows: BTreeMap<Column, BTreeMap<Column, Q>>,
}

impl Echelon {
    /// Reduces `row` against the basis; returns the remainder.
    fn reduce(&self, mut row: BTreeMap<Column, Q>, work: &mut u64) -> BTreeMap<Column, Q> {
        let mut bound: Option<Column> = None;
        loop {
            let next = match &bound {
                None => row.keys().next_back().cloned(),
                Some(b) => row.range(..b.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(col) = next else { break };
            if let Some(basis_row) = self.rows.get(&col) {
                let c = row[&col].clone();
                for (k, v) in basis_row {
                    let e = row.entry(k.clone()).or_insert_with(Q::zero);
                    *e -= &c * v;
                    if e.is_zero() {
                        row.remove(k);
                    }
                }
                *work += basis_row.len() as u64;
            }
            bound = Some(col);
        }
        row
    }

    /// Adds `row` to the span; returns whether the dimension grew.
    fn insert(&mut self, row: BTreeMap<Column, Q>, work: &mut u64) -> bool {
        let mut rem = self.reduce(row, work);
        let Some(pivot) = rem.keys().next_back().cloned() else {
            return false;
        };
        let inv = Q::one() / &rem[&pivot];
        for v in rem.values_mut() {
            *v *= &inv;
        }
        // keep the basis fully reduced: clear the new pivot from older rows
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                for (k, v) in &rem {
                    let e = other.entry(k.clone()).or_insert_with(Q::zero);
                    *e -= &c * v;
                    if e.is_zero() {
                        other.remove(k);
                    }
                }
                *work += rem.len() as u64;
            }
        }
        self.rows.insert(pivot, rem);
        true
    }
}

/// A submodule `M ⊆ ⊕_k P_{[n_k]}` known at every `[m]` with `m <= degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedModule {
    category: CategoryId,
    sources: Vec<usize>,
    degree: usize,
    levels: Vec<Echelon>,
}

/// Spans `h_*(g)` for every generator `g` and every morphism `h` out of its
/// target, at each `[m]` with `m <= degree`.
pub fn span_generators(
    cat: &CategoryId,
    sources: &[usize],
    gens: &[ModuleElement],
    degree: usize,
    limits: &Limits,
) -> Result<TruncatedModule> {
    check_category(cat)?;
    limits.check_order(degree)?;
    for g in gens {
        for ((k, f), _) in g.terms() {
            match sources.get(*k) {
                Some(&n) if n == f.source() => {}
                _ => {
                    return Err(Error::SizeMismatch(format!(
                        "generator {g} does not lie in the given projectives"
                    )))
                }
            }
        }
    }
    let mut work = 0u64;
    let mut levels = Vec::with_capacity(degree + 1);
    for m in 0..=degree {
        let mut ech = Echelon::default();
        for g in gens.iter().filter(|g| !g.is_zero() && g.target() <= m) {
            for h in hom_words(cat, g.target(), m, limits)? {
                let image = g.apply(cat, &h)?;
                work += 1;
                ech.insert(image.terms, &mut work);
                limits.check_work("module span", work)?;
            }
        }
        levels.push(ech);
    }
    Ok(TruncatedModule {
        category: cat.clone(),
        sources: sources.to_vec(),
        degree,
        levels,
    })
}

impl TruncatedModule {
    pub fn category(&self) -> &CategoryId {
        &self.category
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self, m: usize) -> usize {
        self.levels[m].rows.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.rows.len()).collect()
    }

    /// The reduced echelon basis at `[m]`, largest pivot first.
    pub fn basis(&self, m: usize) -> Vec<ModuleElement> {
        self.levels[m]
            .rows
            .values()
            .rev()
            .map(|r| ModuleElement {
                target: m,
                terms: r.clone(),
            })
            .collect()
    }

    /// Initial monomials of `M([m])`, i.e. the pivot columns, ascending.
    pub fn initial_monomials(&self, m: usize) -> Vec<Column> {
        self.levels[m].rows.keys().cloned().collect()
    }

    /// Membership of an element of target at most `degree`.
    pub fn contains(&self, e: &ModuleElement) -> Result<bool> {
        if e.is_zero() {
            return Ok(true);
        }
        if e.target > self.degree {
            return Err(Error::limit(
                format!("element at [{}] beyond truncation", e.target),
                self.degree as u64,
            ));
        }
        let mut work = 0;
        Ok(self.levels[e.target].reduce(e.terms.clone(), &mut work).is_empty())
    }
}

/// Minimal generators of a monomial submodule, per summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdealGens {
    category: CategoryId,
    sources: Vec<usize>,
    generators: Vec<Column>,
    /// `Some(D)` when the generators were read off a truncated module and
    /// are only known to be complete through degree `D`.
    complete_up_to: Option<usize>,
}

impl MonomialIdealGens {
    /// The ideal generated by the given words, minimized.
    pub fn new(cat: &CategoryId, sources: &[usize], gens: &[Column]) -> Result<Self> {
        check_category(cat)?;
        for (k, f) in gens {
            match sources.get(*k) {
                Some(&n) if n == f.source() => {}
                _ => {
                    return Err(Error::SizeMismatch(format!(
                        "generator {k}:{f} does not match the summand sources"
                    )))
                }
            }
        }
        let mut sorted = gens.to_vec();
        sorted.sort_by(|a, b| {
            a.1.target()
                .cmp(&b.1.target())
                .then_with(|| a.cmp(b))
        });
        sorted.dedup();
        let mut kept: Vec<Column> = Vec::new();
        for (k, f) in sorted {
            let mut covered = false;
            for (k2, g) in &kept {
                if *k2 == k && divides(cat, g, &f)? {
                    covered = true;
                    break;
                }
            }
            if !covered {
                kept.push((k, f));
            }
        }
        Ok(MonomialIdealGens {
            category: cat.clone(),
            sources: sources.to_vec(),
            generators: kept,
            complete_up_to: None,
        })
    }

    /// Parses comma-separated words, optionally `k:word`, for a single
    /// source or a list of summand sources.
    pub fn parse(cat: &CategoryId, sources: &[usize], text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, w) = match item.split_once(':') {
                Some((k, w)) => (
                    k.parse::<usize>()
                        .map_err(|_| Error::parse("generators", format!("bad summand index {k:?}")))?,
                    w,
                ),
                None => (0, item),
            };
            let n = *sources
                .get(k)
                .ok_or_else(|| Error::parse("generators", format!("summand {k} out of range")))?;
            gens.push((k, MorphismWord::with_source(cat, n, Word::parse(w)?)?));
        }
        MonomialIdealGens::new(cat, sources, &gens)
    }

    pub fn category(&self) -> &CategoryId {
        &self.category
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn generators(&self) -> &[Column] {
        &self.generators
    }

    pub fn complete_up_to(&self) -> Option<usize> {
        self.complete_up_to
    }

    /// The word order in which summand `k`'s ideal lives.
    pub fn word_order(&self, k: usize) -> Result<WordOrder> {
        match self.category {
            CategoryId::Oi(d) => WordOrder::oi(d),
            CategoryId::Os => Ok(WordOrder::os(Alphabet::digits_from_one(self.sources[k].max(1))?)),
            _ => Err(Error::UnsupportedCategory(self.category.to_string())),
        }
    }

    /// The poset ideal of summand `k`.
    pub fn ideal(&self, k: usize) -> Result<PosetIdeal> {
        let words: Vec<Word> = self
            .generators
            .iter()
            .filter(|(j, _)| *j == k)
            .map(|(_, f)| f.word().clone())
            .collect();
        PosetIdeal::new(self.word_order(k)?, &words)
    }

    pub fn contains(&self, col: &Column) -> Result<bool> {
        for (k, g) in &self.generators {
            if *k == col.0 && g.source() == col.1.source() && divides(&self.category, g, &col.1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn render_generators(&self) -> Vec<String> {
        let tagged = self.sources.len() > 1;
        self.generators
            .iter()
            .map(|(k, f)| if tagged { format!("{k}:{f}") } else { f.to_string() })
            .collect()
    }
}

/// Minimal generators of the initial terms of `M` through its truncation.
pub fn initial_module(m: &TruncatedModule) -> Result<MonomialIdealGens> {
    let mut all = Vec::new();
    for d in 0..=m.degree {
        all.extend(m.initial_monomials(d));
    }
    let mut out = MonomialIdealGens::new(&m.category, &m.sources, &all)?;
    out.complete_up_to = Some(m.degree);
    Ok(out)
}

/// Whether the initial terms of `candidate` generate every initial monomial
/// of `M` through `degree`. Every candidate must lie in `M`.
pub fn is_groebner_up_to(m: &TruncatedModule, candidate: &[ModuleElement], degree: usize) -> Result<bool> {
    if degree > m.degree {
        return Err(Error::limit(format!("check degree {degree}"), m.degree as u64));
    }
    for c in candidate {
        if !m.contains(c)? {
            return Err(Error::NotInModule(c.to_string()));
        }
    }
    let inits: Vec<Column> = candidate.iter().filter_map(|c| c.initial().cloned()).collect();
    let ideal = MonomialIdealGens::new(&m.category, &m.sources, &inits)?;
    for d in 0..=degree {
        for col in m.initial_monomials(d) {
            if !ideal.contains(&col)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Hilbert series of the monomial submodule: the length generating function
/// of the ideal's language, summed over summands.
pub fn module_series(ideal: &MonomialIdealGens) -> Result<RationalSeries> {
    module_series_with(ideal, &Limits::default())
}

pub fn module_series_with(ideal: &MonomialIdealGens, limits: &Limits) -> Result<RationalSeries> {
    let mut total = RationalSeries::zero(1);
    for (k, &n) in ideal.sources.iter().enumerate() {
        let part = match ideal.category {
            CategoryId::Os if n == 0 => {
                // only the empty word; Hom([0],[m]) is empty for m > 0
                let has_empty = ideal.generators.iter().any(|(j, _)| *j == k);
                RationalSeries::polynomial(if has_empty { Poly::one(1) } else { Poly::zero(1) })
            }
            _ => {
                let pi = ideal.ideal(k)?;
                let alphabet = ideal.word_order(k)?.alphabet().clone();
                let expr = ideal_to_expr(&pi)?;
                let dfa = compile_expr_with(&expr, &alphabet, limits)?;
                dfa_series(&dfa, &NormedAlphabet::by_length(&alphabet))?
            }
        };
        total = total.add(&part);
    }
    Ok(total.reduce())
}

/// Hilbert series of `⊕ P_{[n_k]} / M` for the monomial submodule `M`.
pub fn quotient_series(ideal: &MonomialIdealGens) -> Result<RationalSeries> {
    let mut proj = RationalSeries::zero(1);
    for &n in &ideal.sources {
        proj = proj.add(&principal_projective_series(&ideal.category, &[n])?);
    }
    Ok(proj.sub(&module_series(ideal)?).reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use crate::series::rational::expand;

    fn oi1() -> CategoryId {
        CategoryId::Oi(1)
    }

    fn el(cat: &CategoryId, n: usize, s: &str) -> ModuleElement {
        ModuleElement::parse(cat, &[n], s).unwrap()
    }

    #[test]
    fn element_syntax() {
        let e = el(&oi1(), 1, "1*[01] - 1*[10]");
        assert_eq!(e.to_string(), "-1*[10] + 1*[01]");
        assert_eq!(e.initial().unwrap().1.to_string(), "10");
        let f = el(&oi1(), 1, "-1/2*[01]+[01]");
        assert_eq!(f.to_string(), "1/2*[01]");
        let g = ModuleElement::parse(&oi1(), &[1, 2], "[0] + 3*[1:00]").unwrap_err();
        assert!(matches!(g, Error::SizeMismatch(_)));
        let h = ModuleElement::parse(&oi1(), &[1, 2], "[01] + 3*[1:00]").unwrap();
        assert_eq!(h.to_string(), "3*[1:00] + 1*[0:01]");
        assert!(ModuleElement::parse(&oi1(), &[1], "[0").is_err());
        assert!(ModuleElement::parse(&oi1(), &[1], "x*[0]").is_err());
        assert!(ModuleElement::parse(&oi1(), &[1], "[00]").is_err());
    }

    #[test]
    fn full_projective() {
        let m = span_generators(&oi1(), &[1], &[el(&oi1(), 1, "[0]")], 4, &Limits::default()).unwrap();
        assert_eq!(m.dims(), vec![0, 1, 2, 3, 4]);
        let init = initial_module(&m).unwrap();
        assert_eq!(init.render_generators(), vec!["0"]);
        assert!(is_groebner_up_to(&m, &[el(&oi1(), 1, "[0]")], 4).unwrap());
    }

    #[test]
    fn difference_module() {
        let g = el(&oi1(), 1, "1*[01] - 1*[10]");
        let m = span_generators(&oi1(), &[1], &[g.clone()], 5, &Limits::default()).unwrap();
        assert_eq!(m.dims(), vec![0, 0, 1, 2, 3, 4]);
        let init = initial_module(&m).unwrap();
        assert_eq!(init.render_generators(), vec!["10"]);
        assert!(is_groebner_up_to(&m, &[g], 5).unwrap());
        assert!(!is_groebner_up_to(&m, &[], 5).unwrap());
        assert!(matches!(
            is_groebner_up_to(&m, &[el(&oi1(), 1, "[01]")], 5),
            Err(Error::NotInModule(_))
        ));
    }

    #[test]
    fn zero_module() {
        let m = span_generators(&oi1(), &[1], &[], 3, &Limits::default()).unwrap();
        assert_eq!(m.dims(), vec![0; 4]);
        assert!(initial_module(&m).unwrap().generators().is_empty());
    }

    #[test]
    fn series_examples() {
        let all = MonomialIdealGens::parse(&oi1(), &[1], "0").unwrap();
        assert_eq!(module_series(&all).unwrap().to_string(), "t/(1-t)^2");
        assert!(quotient_series(&all).unwrap().is_zero());

        let i10 = MonomialIdealGens::parse(&oi1(), &[1], "10").unwrap();
        let s = expand(&module_series(&i10).unwrap(), 6).unwrap().to_vec(7);
        assert_eq!(s, [0, 0, 1, 2, 3, 4, 5].map(q).to_vec());
        let qs = expand(&quotient_series(&i10).unwrap(), 6).unwrap().to_vec(7);
        assert_eq!(qs, [0, 1, 1, 1, 1, 1, 1].map(q).to_vec());

        let os = CategoryId::Os;
        let id = MonomialIdealGens::parse(&os, &[2], "12").unwrap();
        assert!(quotient_series(&id).unwrap().is_zero());

        let empty = MonomialIdealGens::parse(&oi1(), &[1], "").unwrap();
        assert!(module_series(&empty).unwrap().is_zero());
    }

    #[test]
    fn minimization() {
        let i = MonomialIdealGens::parse(&oi1(), &[1], "101, 10, 0").unwrap();
        assert_eq!(i.render_generators(), vec!["0"]);
        let j = MonomialIdealGens::parse(&oi1(), &[1, 1], "0:10, 1:01, 0:110").unwrap();
        assert_eq!(j.render_generators(), vec!["0:10", "1:01"]);
    }

    #[test]
    fn direct_sum_series() {
        let j = MonomialIdealGens::parse(&oi1(), &[1, 0], "0:0, 1:").unwrap();
        let s = expand(&module_series(&j).unwrap(), 4).unwrap().to_vec(5);
        // m from P_[1] plus 1 from P_[0]
        assert_eq!(s, [1, 2, 3, 4, 5].map(q).to_vec());
    }
}
