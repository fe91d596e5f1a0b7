//! Exponential generating functions `sum_j q_j(t) e^{jt}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{fmt_q, q_int, Poly, Q};
use crate::series::rational::RationalSeries;

/// `sum_j q_j(t) e^{jt}` with distinct `j`, stored in ascending order of `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgfForm {
    terms: BTreeMap<u64, Vec<Q>>,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

fn trim(v: &mut Vec<Q>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

impl EgfForm {
    pub fn new(terms: impl IntoIterator<Item = (u64, Vec<Q>)>) -> Self {
        let mut out = EgfForm {
            terms: BTreeMap::new(),
        };
        for (j, p) in terms {
            out.add(j, &p);
        }
        out
    }

    fn add(&mut self, j: u64, p: &[Q]) {
        let entry = self.terms.entry(j).or_default();
        if entry.len() < p.len() {
            entry.resize(p.len(), Q::zero());
        }
        for (e, c) in entry.iter_mut().zip(p) {
            *e += c;
        }
        trim(entry);
        if entry.is_empty() {
            self.terms.remove(&j);
        }
    }

    /// Pairs `(j, q_j)` in ascending `j`; `q_j` lists coefficients of `t^0, t^1, ...`.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &[Q])> {
        self.terms.iter().map(|(&j, p)| (j, p.as_slice()))
    }

    /// `a_n = n! [t^n] G(t)`, i.e. the ordinary coefficient this form encodes.
    pub fn coefficient(&self, n: usize) -> Q {
        let mut total = Q::zero();
        for (&j, p) in &self.terms {
            for (r, c) in p.iter().enumerate() {
                if r > n {
                    break;
                }
                // [t^n] t^r e^{jt} = j^{n-r} / (n-r)!
                let k = (n - r) as u64;
                let jp = BigInt::from(j).pow(k as u32);
                total += c * Q::new(jp, factorial(k));
            }
        }
        total * q_int(factorial(n as u64))
    }

    pub fn coefficients(&self, len: usize) -> Vec<Q> {
        (0..len).map(|n| self.coefficient(n)).collect()
    }
}

fn render_coeff_poly(p: &[Q]) -> String {
    Poly::from_coeffs(p).render(&["t".to_string()])
}

impl fmt::Display for EgfForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&j, p) in self.terms.iter().rev() {
            let exp = match j {
                0 => String::new(),
                1 => "e^t".to_string(),
                _ => format!("e^({j}t)"),
            };
            let nonzero: Vec<(usize, &Q)> = p.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            let (negative, body) = if nonzero.len() == 1 {
                let (r, c) = nonzero[0];
                let mag = c.abs();
                let mono = match r {
                    0 => String::new(),
                    1 => "t".to_string(),
                    _ => format!("t^{r}"),
                };
                let coeff = if mag.is_one() && !(mono.is_empty() && exp.is_empty()) {
                    String::new()
                } else if mag.is_integer() || (mono.is_empty() && exp.is_empty()) {
                    fmt_q(&mag)
                } else {
                    format!("({})", fmt_q(&mag))
                };
                (c.is_negative(), format!("{coeff}{mono}{exp}"))
            } else if exp.is_empty() {
                (false, render_coeff_poly(p))
            } else {
                (false, format!("({}){exp}", render_coeff_poly(p)))
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => f.write_str(&body)?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct EgfRecord {
    terms: Vec<(u64, Vec<String>)>,
}

impl Serialize for EgfForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EgfRecord {
            terms: self
                .terms
                .iter()
                .map(|(&j, p)| (j, p.iter().map(fmt_q).collect()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EgfForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = EgfRecord::deserialize(d)?;
        let mut terms = Vec::new();
        for (j, p) in rec.terms {
            let p = p
                .iter()
                .map(|c| crate::poly::parse_q(c).ok_or_else(|| D::Error::custom(format!("bad rational {c:?}"))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            terms.push((j, p));
        }
        Ok(EgfForm::new(terms))
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |a, i| a * (n - i) / (i + 1))
}

/// Quotient and remainder of univariate polynomials given as coefficient lists.
fn divrem(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = num.to_vec();
    trim(&mut r);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut quot = vec![Q::zero(); r.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &r[k + dd] / &lead;
        for (i, dc) in den.iter().enumerate() {
            r[k + i] -= &c * dc;
        }
        quot[k] = c;
    }
    r.truncate(dd);
    trim(&mut r);
    (quot, r)
}

/// Solves a square system over `Q` by Gauss-Jordan elimination.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some(b)
}

/// Rewrites a univariate series with denominator `prod (1 - j t)^e` as the
/// exponential generating function of its coefficients.
///
/// After dividing off the polynomial part, partial fractions give
/// `sum_{j,k} c_{j,k} / (1 - jt)^k`. The coefficient sequence of
/// `1/(1 - jt)^k` is `C(n+k-1, k-1) j^n = sum_r C(k-1, r)/r! n^(r) j^n` with
/// `n^(r)` the falling factorial, and `sum_n n^(r) j^n t^n / n! = (jt)^r e^{jt}`.
/// The polynomial part contributes `p_n t^n / n!` to `q_0`.
pub fn egf_convert(s: &RationalSeries) -> Result<EgfForm> {
    if s.nvars() != 1 {
        return Err(Error::Domain("exponential form needs a univariate series".into()));
    }
    let mut parts: Vec<(u64, u32)> = Vec::new();
    for f in s.factors() {
        let j = f
            .linear_multiple()
            .filter(|j| j.is_integer() && j.is_positive())
            .ok_or_else(|| Error::BadDenominator(format!("1-({})", f.form)))?;
        let j = j.to_integer().to_u64().ok_or_else(|| Error::BadDenominator(f.form.to_string()))?;
        parts.push((j, f.exponent));
    }
    let den = s.denominator_poly().to_coeffs();
    let (quot, rem) = divrem(&s.numerator().to_coeffs(), &den);
    let mut out = EgfForm::new([]);
    for (n, c) in quot.iter().enumerate() {
        out.add(0, &{
            let mut v = vec![Q::zero(); n + 1];
            v[n] = c / q_int(factorial(n as u64));
            v
        });
    }
    let size = den.len() - 1;
    if size == 0 {
        return Ok(out);
    }
    // columns (j, k); rows n = 0..size: [t^n] 1/(1-jt)^k = C(n+k-1, k-1) j^n
    let cols: Vec<(u64, u32)> = parts
        .iter()
        .flat_map(|&(j, e)| (1..=e).map(move |k| (j, k)))
        .collect();
    let matrix: Vec<Vec<Q>> = (0..size as u64)
        .map(|n| {
            cols.iter()
                .map(|&(j, k)| {
                    q_int(binomial(n + k as u64 - 1, k as u64 - 1) * BigInt::from(j).pow(n as u32))
                })
                .collect()
        })
        .collect();
    let rem_series = RationalSeries::new(Poly::from_coeffs(&rem), s.factors().iter().map(|f| (f.form.clone(), f.exponent)).collect())?;
    let rhs = rem_series
        .expand(size - 1, &crate::limits::Limits::default())?
        .to_vec(size);
    let c = solve(matrix, rhs).ok_or_else(|| Error::Domain("singular partial-fraction system".into()))?;
    for (&(j, k), cjk) in cols.iter().zip(&c) {
        let mut p = vec![Q::zero(); k as usize];
        for r in 0..k as u64 {
            let b = Q::new(binomial(k as u64 - 1, r), factorial(r));
            p[r as usize] = cjk * b * q_int(BigInt::from(j).pow(r as u32));
        }
        out.add(j, &p);
    }
    Ok(out)
}

/// Checks that `a_n` agrees with the expansion of `s` for `n <= order`.
pub fn egf_agrees(s: &RationalSeries, g: &EgfForm, order: usize) -> Result<bool> {
    let expected = s.expand(order, &crate::limits::Limits::default())?.to_vec(order + 1);
    Ok(g.coefficients(order + 1) == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, q_frac};
    use crate::series::rational::univariate;

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn stirling_two() {
        let s = univariate(&ints(&[0, 0, 1]), &[(1, 1), (2, 1)]);
        let g = egf_convert(&s).unwrap();
        assert_eq!(
            g,
            EgfForm::new([(0, vec![q_frac(1, 2)]), (1, vec![q(-1)]), (2, vec![q_frac(1, 2)])])
        );
        assert_eq!(g.to_string(), "(1/2)e^(2t) - e^t + 1/2");
        assert!(egf_agrees(&s, &g, 12).unwrap());
    }

    #[test]
    fn geometric_and_linear() {
        let g = egf_convert(&univariate(&ints(&[1]), &[(1, 1)])).unwrap();
        assert_eq!(g.to_string(), "e^t");
        let g = egf_convert(&univariate(&ints(&[0, 1]), &[(1, 2)])).unwrap();
        assert_eq!(g.to_string(), "te^t");
        assert_eq!(g.coefficients(5), ints(&[0, 1, 2, 3, 4]));
    }

    #[test]
    fn polynomial_part() {
        // (1 + t^3) / (1 - t): a_n = 1 for n < 3, 2 afterwards
        let s = univariate(&ints(&[1, 0, 0, 1]), &[(1, 1)]);
        let g = egf_convert(&s).unwrap();
        assert!(egf_agrees(&s, &g, 12).unwrap());
        let p = egf_convert(&univariate(&ints(&[2, 0, 3]), &[])).unwrap();
        assert_eq!(p.coefficients(4), ints(&[2, 0, 3, 0]));
    }

    #[test]
    fn bad_denominator() {
        let s = RationalSeries::new(Poly::one(1), vec![(Poly::monomial(1, vec![2], q(1)), 1)]).unwrap();
        assert!(matches!(egf_convert(&s), Err(Error::BadDenominator(_))));
    }
}
