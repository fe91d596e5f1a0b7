//! Hilbert series of regular languages by the transfer-matrix method.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::dfa::Dfa;
use crate::poly::{q, Exponent, Poly};
use crate::series::rational::RationalSeries;
use crate::word::{Alphabet, Letter, Word};

/// An alphabet whose letters carry norm vectors in `N^I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormedAlphabet {
    alphabet: Alphabet,
    norms: Vec<Exponent>,
}

impl NormedAlphabet {
    /// Every norm must have the same dimension and be nonzero, otherwise a
    /// looping letter would contribute infinitely to one coefficient.
    pub fn new(alphabet: Alphabet, norms: BTreeMap<Letter, Exponent>) -> Result<Self> {
        let mut out = Vec::with_capacity(alphabet.len());
        let mut dim = None;
        for &c in alphabet.letters() {
            let v = norms
                .get(&c)
                .ok_or_else(|| Error::Domain(format!("no norm for letter {:?}", c as char)))?;
            if *dim.get_or_insert(v.len()) != v.len() {
                return Err(Error::Domain("norm vectors of different dimensions".into()));
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::Domain(format!(
                    "letter {:?} has zero norm",
                    c as char
                )));
            }
            out.push(v.clone());
        }
        if norms.keys().any(|&c| !alphabet.contains(c)) {
            return Err(Error::AlphabetMismatch("norm given for a letter outside the alphabet".into()));
        }
        if dim == Some(0) {
            return Err(Error::Domain("norm vectors must have positive dimension".into()));
        }
        Ok(NormedAlphabet {
            alphabet,
            norms: out,
        })
    }

    /// Every letter has norm `1`, so the series counts words by length.
    pub fn by_length(alphabet: &Alphabet) -> Self {
        NormedAlphabet {
            alphabet: alphabet.clone(),
            norms: vec![vec![1]; alphabet.len()],
        }
    }

    /// Letter `c` is sent to the unit vector of its own variable.
    pub fn by_letter(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        NormedAlphabet {
            alphabet: alphabet.clone(),
            norms: (0..k)
                .map(|i| {
                    let mut v = vec![0; k];
                    v[i] = 1;
                    v
                })
                .collect(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.norms.first().map_or(1, Vec::len)
    }

    pub fn norm_of_index(&self, li: usize) -> &Exponent {
        &self.norms[li]
    }

    pub fn norm(&self, c: Letter) -> Result<&Exponent> {
        let li = self
            .alphabet
            .index_of(c)
            .ok_or(Error::UnknownLetter(c as char))?;
        Ok(&self.norms[li])
    }

    pub fn word_norm(&self, w: &Word) -> Result<Exponent> {
        let mut out = vec![0; self.dim()];
        for &c in w.letters() {
            for (o, x) in out.iter_mut().zip(self.norm(c)?) {
                *o += x;
            }
        }
        Ok(out)
    }

    /// The monomial `t^nu(c)` of the letter with index `li`.
    pub fn monomial(&self, li: usize) -> Poly {
        Poly::monomial(self.dim(), self.norms[li].clone(), q(1))
    }
}

/// `sum_{w in L} t^nu(w)` for the language of `dfa`.
///
/// For ordered automata the states are solved in reverse topological order,
/// `x_s = ([s final] + sum_{s -> r, r != s} t^nu(c) x_r) / (1 - l_s)` with
/// `l_s` the sum over the self-loop letters at `s`, so the result carries the
/// factored denominator. Other automata go through Cramer's rule on
/// `(1 - A) x = f` with a single expanded denominator `det(1 - A)`.
pub fn dfa_series(dfa: &Dfa, norms: &NormedAlphabet) -> Result<RationalSeries> {
    if dfa.alphabet() != norms.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "automaton over {:?}, norms over {:?}",
            dfa.alphabet().to_string(),
            norms.alphabet().to_string()
        )));
    }
    let trimmed = dfa.trim();
    let live = trimmed.coreachable();
    let nvars = norms.dim();
    if !live[trimmed.initial()] {
        return Ok(RationalSeries::zero(nvars));
    }
    match trimmed.topological_order() {
        Some(order) => Ok(ordered_series(&trimmed, &live, &order, norms)),
        None => general_series(&trimmed, &live, norms),
    }
}

fn ordered_series(dfa: &Dfa, live: &[bool], order: &[usize], norms: &NormedAlphabet) -> RationalSeries {
    let nvars = norms.dim();
    let mut sol: Vec<Option<RationalSeries>> = vec![None; dfa.num_states()];
    for &s in order.iter().rev() {
        if !live[s] {
            continue;
        }
        let start = if dfa.is_final(s) { Poly::one(nvars) } else { Poly::zero(nvars) };
        let mut acc = RationalSeries::polynomial(start);
        let mut loops = Poly::zero(nvars);
        for li in 0..dfa.alphabet().len() {
            let t = dfa.step_index(s, li);
            if t == s {
                loops = loops.add(&norms.monomial(li));
            } else if live[t] {
                let next = sol[t].as_ref().expect("successors come later in the order");
                acc = acc.add(&next.mul_poly(&norms.monomial(li)));
            }
        }
        let x = acc
            .mul(&RationalSeries::new(Poly::one(nvars), vec![(loops, 1)]).expect("loop forms have no constant term"));
        sol[s] = Some(x);
    }
    sol[dfa.initial()].take().expect("initial state is live")
}

fn general_series(dfa: &Dfa, live: &[bool], norms: &NormedAlphabet) -> Result<RationalSeries> {
    let nvars = norms.dim();
    let states: Vec<usize> = (0..dfa.num_states()).filter(|&s| live[s]).collect();
    let pos = |s: usize| states.iter().position(|&x| x == s);
    let n = states.len();
    let mut m = vec![vec![Poly::zero(nvars); n]; n];
    for (i, &s) in states.iter().enumerate() {
        m[i][i] = Poly::one(nvars);
        for li in 0..dfa.alphabet().len() {
            if let Some(j) = pos(dfa.step_index(s, li)) {
                m[i][j] = m[i][j].sub(&norms.monomial(li));
            }
        }
    }
    let f: Vec<Poly> = states
        .iter()
        .map(|&s| if dfa.is_final(s) { Poly::one(nvars) } else { Poly::zero(nvars) })
        .collect();
    let init = pos(dfa.initial()).expect("initial state is live");
    let det = determinant(m.clone());
    let mut replaced = m;
    for (row, fi) in replaced.iter_mut().zip(&f) {
        row[init] = fi.clone();
    }
    let num = determinant(replaced);
    // det(1 - A) has constant term 1 because every norm is nonzero
    let form = Poly::one(nvars).sub(&det);
    Ok(RationalSeries::new(num, vec![(form, 1)])?.reduce())
}

/// Fraction-free (Bareiss) determinant over polynomials.
pub(crate) fn determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(1);
    }
    let nvars = m[0][0].nvars();
    let mut sign = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::dfa::fixtures;
    use crate::lang::expr::{compile_expr, OrderedExpr};
    use crate::series::rational::{series_equal, univariate};

    fn length_series(d: &Dfa) -> RationalSeries {
        dfa_series(d, &NormedAlphabet::by_length(d.alphabet())).unwrap()
    }

    #[test]
    fn full_star() {
        let a = fixtures::ab();
        let e: OrderedExpr = "[ab]*".parse().unwrap();
        let s = length_series(&compile_expr(&e, &a).unwrap());
        assert_eq!(s, univariate(&[q(1)], &[(2, 1)]));
    }

    #[test]
    fn stirling_two() {
        let a = Alphabet::parse("12").unwrap();
        let e: OrderedExpr = "'1'[1]*'2'[12]*".parse().unwrap();
        let s = length_series(&compile_expr(&e, &a).unwrap());
        assert_eq!(s.to_string(), "t^2/((1-t)(1-2t))");
    }

    #[test]
    fn oi2_two_zeros() {
        let a = Alphabet::parse("012").unwrap();
        let e: OrderedExpr = "[12]*'0'[12]*'0'[12]*".parse().unwrap();
        let s = length_series(&compile_expr(&e, &a).unwrap());
        assert_eq!(s.to_string(), "t^2/(1-2t)^3");
    }

    #[test]
    fn unordered_cycle() {
        // (ab)*: states 0 -a-> 1 -b-> 0, everything else to a sink
        let a = fixtures::ab();
        let d = Dfa::new(
            a,
            3,
            &[(b'a', 0, 1), (b'b', 0, 2), (b'a', 1, 2), (b'b', 1, 0), (b'a', 2, 2), (b'b', 2, 2)],
            0,
            &[0],
        )
        .unwrap();
        assert!(!d.is_ordered());
        let s = length_series(&d);
        let expected = RationalSeries::new(Poly::one(1), vec![(Poly::monomial(1, vec![2], q(1)), 1)]).unwrap();
        assert!(series_equal(&s, &expected).unwrap());
    }

    #[test]
    fn multigraded() {
        let a = fixtures::ab();
        let s = dfa_series(&fixtures::a_star_b_star(), &NormedAlphabet::by_letter(&a)).unwrap();
        assert_eq!(s.to_string(), "1/((1-t1)(1-t2))");
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let x = Poly::var(1, 0);
        let one = Poly::one(1);
        let m = vec![
            vec![one.clone(), x.clone(), Poly::zero(1)],
            vec![x.clone(), one.clone(), x.clone()],
            vec![Poly::zero(1), x.clone(), one.clone()],
        ];
        // 1 - 2x^2
        assert_eq!(determinant(m), one.sub(&x.mul(&x).scale(&q(2))));
    }
}
