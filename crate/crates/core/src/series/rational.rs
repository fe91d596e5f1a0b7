//! Rational generating functions `f / prod (1 - l_i)^e_i` where each `l_i`
//! is a polynomial without constant term, so every factor is invertible as a
//! power series.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::{fmt_q, parse_q, var_names, Exponent, Poly, Q};

/// Exact coefficients indexed by exponent vector, finitely supported up to
/// some truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    nvars: usize,
    coeffs: BTreeMap<Exponent, Q>,
}

impl CoeffTable {
    pub fn new(nvars: usize) -> Self {
        CoeffTable {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &Poly) -> Self {
        CoeffTable {
            nvars: p.nvars(),
            coeffs: p.terms().map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Univariate table from `c_0, c_1, ...`.
    pub fn from_sequence(seq: &[Q]) -> Self {
        CoeffTable::from_poly(&Poly::from_coeffs(seq))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, e: &[u32]) -> Q {
        self.coeffs.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_to(&mut self, e: Exponent, c: Q) {
        let entry = self.coeffs.entry(e).or_insert_with(Q::zero);
        *entry += c;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &Q)> {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero())
    }

    /// Univariate coefficients `c_0 .. c_{len-1}`.
    pub fn to_vec(&self, len: usize) -> Vec<Q> {
        assert_eq!(self.nvars, 1, "to_vec needs a univariate table");
        (0..len).map(|i| self.get(&[i as u32])).collect()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(self.nvars, self.coeffs.iter().map(|(e, c)| (e.clone(), c.clone())))
    }
}

/// One denominator factor `(1 - form)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub form: Poly,
    pub exponent: u32,
}

impl Factor {
    pub fn one_minus(&self) -> Poly {
        Poly::one(self.form.nvars()).sub(&self.form)
    }

    /// The `j` of a univariate factor `1 - j t`, if the factor has that shape.
    pub fn linear_multiple(&self) -> Option<Q> {
        if self.form.nvars() != 1 || self.form.num_terms() != 1 {
            return None;
        }
        let c = self.form.coeff(&[1]);
        (!c.is_zero()).then_some(c)
    }
}

fn form_key(p: &Poly) -> Vec<(std::cmp::Reverse<Exponent>, Q)> {
    let mut v: Vec<_> = p
        .terms()
        .map(|(e, c)| (std::cmp::Reverse(e.clone()), c.clone()))
        .collect();
    v.sort();
    v
}

fn cmp_forms(a: &Poly, b: &Poly) -> Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| form_key(a).cmp(&form_key(b)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    numerator: Poly,
    denominator: Vec<Factor>,
}

impl RationalSeries {
    /// Validates and canonicalizes: factors with a zero form are dropped,
    /// equal forms are merged, factors are sorted.
    pub fn new(numerator: Poly, factors: Vec<(Poly, u32)>) -> Result<Self> {
        let nvars = numerator.nvars();
        let mut merged: Vec<Factor> = Vec::new();
        for (form, e) in factors {
            if form.nvars() != nvars {
                return Err(Error::Domain("denominator variables differ from numerator".into()));
            }
            if !form.constant_term().is_zero() {
                return Err(Error::Domain(format!(
                    "denominator form {form} has a constant term"
                )));
            }
            if form.is_zero() || e == 0 {
                continue;
            }
            match merged.iter_mut().find(|f| f.form == form) {
                Some(f) => f.exponent += e,
                None => merged.push(Factor { form, exponent: e }),
            }
        }
        merged.sort_by(|a, b| cmp_forms(&a.form, &b.form));
        Ok(RationalSeries {
            numerator,
            denominator: merged,
        })
    }

    pub fn polynomial(p: Poly) -> Self {
        RationalSeries {
            numerator: p,
            denominator: Vec::new(),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        RationalSeries::polynomial(Poly::zero(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn factors(&self) -> &[Factor] {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The expanded denominator polynomial.
    pub fn denominator_poly(&self) -> Poly {
        self.denominator
            .iter()
            .fold(Poly::one(self.nvars()), |acc, f| acc.mul(&f.one_minus().pow(f.exponent)))
    }

    fn exponent_of(&self, form: &Poly) -> u32 {
        self.denominator
            .iter()
            .find(|f| &f.form == form)
            .map_or(0, |f| f.exponent)
    }

    /// Rewrites `self` over a denominator with at least its exponents.
    fn lift_to(&self, target: &[(Poly, u32)]) -> Poly {
        let mut num = self.numerator.clone();
        for (form, e) in target {
            let have = self.exponent_of(form);
            let one_minus = Poly::one(self.nvars()).sub(form);
            num = num.mul(&one_minus.pow(e - have));
        }
        num
    }

    fn common_denominator(&self, other: &RationalSeries) -> Vec<(Poly, u32)> {
        let mut target: Vec<(Poly, u32)> = Vec::new();
        for f in self.denominator.iter().chain(&other.denominator) {
            match target.iter_mut().find(|(p, _)| *p == f.form) {
                Some((_, e)) => *e = (*e).max(f.exponent),
                None => target.push((f.form.clone(), f.exponent)),
            }
        }
        target
    }

    pub fn add(&self, other: &RationalSeries) -> RationalSeries {
        assert_eq!(self.nvars(), other.nvars(), "variable count");
        let target = self.common_denominator(other);
        let num = self.lift_to(&target).add(&other.lift_to(&target));
        RationalSeries::new(num, target).expect("forms already validated")
    }

    pub fn sub(&self, other: &RationalSeries) -> RationalSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalSeries {
        RationalSeries {
            numerator: self.numerator.neg(),
            denominator: self.denominator.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> RationalSeries {
        RationalSeries {
            numerator: self.numerator.scale(c),
            denominator: self.denominator.clone(),
        }
    }

    pub fn mul(&self, other: &RationalSeries) -> RationalSeries {
        assert_eq!(self.nvars(), other.nvars(), "variable count");
        let factors = self
            .denominator
            .iter()
            .chain(&other.denominator)
            .map(|f| (f.form.clone(), f.exponent))
            .collect();
        RationalSeries::new(self.numerator.mul(&other.numerator), factors)
            .expect("forms already validated")
    }

    /// Multiplies the numerator by a polynomial.
    pub fn mul_poly(&self, p: &Poly) -> RationalSeries {
        RationalSeries {
            numerator: self.numerator.mul(p),
            denominator: self.denominator.clone(),
        }
    }

    /// Embeds into a larger variable set, sending variable `i` to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> RationalSeries {
        let lift = |p: &Poly| {
            Poly::from_terms(
                nvars,
                p.terms().map(|(e, c)| {
                    let mut out = vec![0; nvars];
                    for (i, &k) in e.iter().enumerate() {
                        out[map[i]] += k;
                    }
                    (out, c.clone())
                }),
            )
        };
        let factors = self
            .denominator
            .iter()
            .map(|f| (lift(&f.form), f.exponent))
            .collect();
        RationalSeries::new(lift(&self.numerator), factors).expect("embedding keeps forms valid")
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduce(&self) -> RationalSeries {
        if self.numerator.is_zero() {
            return RationalSeries::zero(self.nvars());
        }
        let mut num = self.numerator.clone();
        let mut factors = Vec::new();
        for f in &self.denominator {
            let one_minus = f.one_minus();
            let mut e = f.exponent;
            while e > 0 {
                match num.div_exact(&one_minus) {
                    Some(q) => {
                        num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            factors.push((f.form.clone(), e));
        }
        RationalSeries::new(num, factors).expect("forms already validated")
    }

    /// Power-series coefficients of total degree at most `order`.
    pub fn expand(&self, order: usize, limits: &Limits) -> Result<CoeffTable> {
        limits.check_order(order)?;
        let d = order as u32;
        let mut acc = self.numerator.truncate(d);
        for f in &self.denominator {
            // 1 / (1 - l) = sum_k l^k, and l^k has degree >= k
            let mut geom = Poly::one(self.nvars());
            let mut power = Poly::one(self.nvars());
            for _ in 0..order {
                power = power.mul_trunc(&f.form, d);
                if power.is_zero() {
                    break;
                }
                geom = geom.add(&power);
            }
            for _ in 0..f.exponent {
                acc = acc.mul_trunc(&geom, d);
            }
        }
        Ok(CoeffTable::from_poly(&acc))
    }

    fn render_denominator(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .denominator
            .iter()
            .map(|f| {
                let base = format!("({})", f.one_minus().render(names));
                if f.exponent == 1 {
                    base
                } else {
                    format!("{base}^{}", f.exponent)
                }
            })
            .collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.concat())
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let num = self.numerator.render(names);
        if self.denominator.is_empty() || self.numerator.is_zero() {
            return num;
        }
        let num = if self.numerator.num_terms() > 1 {
            format!("({num})")
        } else {
            num
        };
        format!("{num}/{}", self.render_denominator(names))
    }
}

/// Whether `a` and `b` are the same rational function (cross-multiplication).
pub fn series_equal(a: &RationalSeries, b: &RationalSeries) -> Result<bool> {
    if a.nvars() != b.nvars() {
        return Err(Error::Domain(format!(
            "series in {} and {} variables",
            a.nvars(),
            b.nvars()
        )));
    }
    Ok(a.numerator.mul(&b.denominator_poly()) == b.numerator.mul(&a.denominator_poly()))
}

/// Power-series coefficients of `s` up to total degree `order`.
pub fn expand(s: &RationalSeries, order: usize) -> Result<CoeffTable> {
    s.expand(order, &Limits::default())
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&var_names(self.nvars())))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord(Exponent, String);

#[derive(Serialize, Deserialize)]
struct FactorRecord {
    form: Vec<TermRecord>,
    exponent: u32,
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    vars: Vec<String>,
    numerator: Vec<TermRecord>,
    denominator: Vec<FactorRecord>,
}

fn poly_record(p: &Poly) -> Vec<TermRecord> {
    p.terms().map(|(e, c)| TermRecord(e.clone(), fmt_q(c))).collect()
}

fn poly_from_record(nvars: usize, terms: &[TermRecord]) -> std::result::Result<Poly, String> {
    let mut p = Poly::zero(nvars);
    for TermRecord(e, c) in terms {
        if e.len() != nvars {
            return Err(format!("exponent {e:?} has the wrong arity"));
        }
        let c = parse_q(c).ok_or_else(|| format!("bad rational {c:?}"))?;
        p.add_term(e.clone(), c);
    }
    Ok(p)
}

impl Serialize for RationalSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRecord {
            vars: var_names(self.nvars()),
            numerator: poly_record(&self.numerator),
            denominator: self
                .denominator
                .iter()
                .map(|f| FactorRecord {
                    form: poly_record(&f.form),
                    exponent: f.exponent,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = SeriesRecord::deserialize(d)?;
        let n = rec.vars.len();
        let num = poly_from_record(n, &rec.numerator).map_err(D::Error::custom)?;
        let mut factors = Vec::new();
        for f in &rec.denominator {
            factors.push((poly_from_record(n, &f.form).map_err(D::Error::custom)?, f.exponent));
        }
        RationalSeries::new(num, factors).map_err(D::Error::custom)
    }
}

/// `1 - j t` as a factor form `j t` in one variable.
pub fn linear_form(j: i64) -> Poly {
    Poly::var(1, 0).scale(&crate::poly::q(j))
}

/// Convenience: `num / prod (1 - j t)^e` in one variable.
pub fn univariate(num: &[Q], factors: &[(i64, u32)]) -> RationalSeries {
    RationalSeries::new(
        Poly::from_coeffs(num),
        factors.iter().map(|&(j, e)| (linear_form(j), e)).collect(),
    )
    .expect("linear forms have no constant term")
}

impl CoeffTable {
    /// Whether every stored coefficient is a nonnegative integer.
    pub fn is_natural(&self) -> bool {
        self.coeffs
            .values()
            .all(|c| c.is_integer() && *c >= Q::zero())
    }

    pub fn total(&self) -> Q {
        self.coeffs.values().fold(Q::zero(), |a, c| a + c)
    }

    pub fn is_one_at_origin(&self) -> bool {
        self.get(&vec![0; self.nvars]).is_one()
    }
}
