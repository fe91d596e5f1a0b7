//! Concrete combinatorial categories: hom counts, hom enumeration, word
//! encodings of morphisms, composition, divisibility, and the Hilbert series
//! of principal projectives.
//!
//! Direction conventions. `OS` stands for `OS^op`: a morphism `[n] -> [m]`
//! is an ordered surjection `[m] -> [n]`, written as the word of its values.
//! `FS` likewise stands for `FS^op`. For `OI(d)` a morphism `[n] -> [m]` is
//! an order-preserving injection together with a `d`-coloring of the
//! complement of its image, written as the length-`m` word with `0` at image
//! positions and the color elsewhere.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::{q, q_int, Poly, Q};
use crate::poset::{oi_leq, os_leq, ZERO};
use crate::series::fit::{fit_rational, FIT_MARGIN};
use crate::series::rational::{linear_form, RationalSeries};
use crate::word::{words_of_length, Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CategoryId {
    Oi(usize),
    Fi(usize),
    Os,
    Fs,
    Fa,
    /// The subcategory of `OI(d)` whose colorings use every color equally often.
    OiEq(usize),
    Product(Vec<CategoryId>),
}

/// Largest `d` (or `n` for `OS` alphabets) that single-digit letters allow.
pub const MAX_DIGIT: usize = 9;

impl CategoryId {
    pub fn arity(&self) -> usize {
        match self {
            CategoryId::Product(v) => v.iter().map(CategoryId::arity).sum(),
            _ => 1,
        }
    }

    /// Factors of a product, or the category itself.
    pub fn factors(&self) -> Vec<CategoryId> {
        match self {
            CategoryId::Product(v) => v.iter().flat_map(CategoryId::factors).collect(),
            c => vec![c.clone()],
        }
    }

    /// Whether morphisms carry canonical word encodings.
    pub fn has_words(&self) -> bool {
        matches!(self, CategoryId::Oi(_) | CategoryId::Os | CategoryId::OiEq(_))
    }

    /// Alphabet of morphism words into an object of source size `n`.
    pub fn word_alphabet(&self, n: usize) -> Result<Alphabet> {
        match *self {
            CategoryId::Oi(d) | CategoryId::OiEq(d) => Alphabet::digits_from_zero(d + 1),
            CategoryId::Os => Alphabet::digits_from_one(n),
            _ => Err(Error::UnsupportedCategory(format!("{self} has no word encoding"))),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CategoryId::Oi(d) | CategoryId::Fi(d) | CategoryId::OiEq(d) => {
                if *d == 0 || *d > MAX_DIGIT {
                    return Err(Error::parse("category", format!("d = {d} must lie in 1..={MAX_DIGIT}")));
                }
            }
            CategoryId::Product(v) => {
                if v.is_empty() {
                    return Err(Error::parse("category", "empty product"));
                }
                for c in v {
                    c.validate()?;
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryId::Oi(d) => write!(f, "oi:{d}"),
            CategoryId::Fi(d) => write!(f, "fi:{d}"),
            CategoryId::Os => f.write_str("os"),
            CategoryId::Fs => f.write_str("fs"),
            CategoryId::Fa => f.write_str("fa"),
            CategoryId::OiEq(d) => write!(f, "oieq:{d}"),
            CategoryId::Product(v) => {
                if v.len() > 1 && v.iter().all(|c| *c == v[0]) {
                    return write!(f, "{}^{}", v[0], v.len());
                }
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join("*"))
            }
        }
    }
}

impl FromStr for CategoryId {
    type Err = Error;

    /// `oi:2`, `fi:1`, `os`, `fs`, `fa`, `oieq:2`, powers `os^2`, and
    /// products `os*oi:1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('*') {
            let parts = s.split('*').map(str::parse).collect::<Result<Vec<CategoryId>>>()?;
            let cat = CategoryId::Product(parts.into_iter().flat_map(|c| c.factors()).collect());
            cat.validate()?;
            return Ok(cat);
        }
        if let Some((base, k)) = s.split_once('^') {
            let base: CategoryId = base.parse()?;
            let k: usize = k
                .parse()
                .map_err(|_| Error::parse("category", format!("bad power {k:?}")))?;
            if k == 0 {
                return Err(Error::parse("category", "power must be at least 1"));
            }
            if k == 1 {
                return Ok(base);
            }
            return Ok(CategoryId::Product(vec![base; k]));
        }
        let param = |p: &str| -> Result<usize> {
            p.parse()
                .map_err(|_| Error::parse("category", format!("bad parameter {p:?} in {s:?}")))
        };
        let cat = match s.split_once(':') {
            Some(("oi", p)) => CategoryId::Oi(param(p)?),
            Some(("fi", p)) => CategoryId::Fi(param(p)?),
            Some(("oieq", p)) => CategoryId::OiEq(param(p)?),
            None if s == "os" => CategoryId::Os,
            None if s == "fs" => CategoryId::Fs,
            None if s == "fa" => CategoryId::Fa,
            None if s == "oi" => CategoryId::Oi(1),
            None if s == "fi" => CategoryId::Fi(1),
            _ => return Err(Error::parse("category", format!("unknown category {s:?}"))),
        };
        cat.validate()?;
        Ok(cat)
    }
}

impl Serialize for CategoryId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CategoryId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |a, i| a * (n - i) / (i + 1))
}

/// Stirling numbers of the second kind by `S(m,n) = n S(m-1,n) + S(m-1,n-1)`.
pub fn stirling2(m: usize, n: usize) -> BigInt {
    let mut row = vec![BigInt::zero(); n + 1];
    row[0] = BigInt::one();
    for _ in 0..m {
        for k in (0..=n).rev() {
            row[k] = if k == 0 {
                BigInt::zero()
            } else {
                &row[k] * k + &row[k - 1]
            };
        }
    }
    row[n].clone()
}

/// `|Hom([n], [m])|` by closed form.
pub fn hom_count(cat: &CategoryId, n: usize, m: usize) -> Result<BigInt> {
    let d_pow = |d: usize, e: usize| BigInt::from(d).pow(e as u32);
    Ok(match *cat {
        CategoryId::Oi(d) => {
            if n > m {
                BigInt::zero()
            } else {
                binomial(m, n) * d_pow(d, m - n)
            }
        }
        CategoryId::Fi(d) => {
            if n > m {
                BigInt::zero()
            } else {
                factorial(m) / factorial(m - n) * d_pow(d, m - n)
            }
        }
        CategoryId::Os => stirling2(m, n),
        CategoryId::Fs => factorial(n) * stirling2(m, n),
        CategoryId::Fa => BigInt::from(m).pow(n as u32),
        CategoryId::OiEq(d) => {
            if n > m || !(m - n).is_multiple_of(d) {
                BigInt::zero()
            } else {
                let k = (m - n) / d;
                binomial(m, n) * factorial(d * k) / factorial(k).pow(d as u32)
            }
        }
        CategoryId::Product(_) => {
            return Err(Error::Domain(format!(
                "{cat} has tuple objects; use hom_count_multi"
            )))
        }
    })
}

/// Hom count between tuple objects of a product category (or a plain
/// category with one-element tuples).
pub fn hom_count_multi(cat: &CategoryId, ns: &[usize], ms: &[usize]) -> Result<BigInt> {
    let factors = cat.factors();
    if ns.len() != factors.len() || ms.len() != factors.len() {
        return Err(Error::SizeMismatch(format!(
            "{cat} needs objects with {} components",
            factors.len()
        )));
    }
    let mut total = BigInt::one();
    for ((c, &n), &m) in factors.iter().zip(ns).zip(ms) {
        total *= hom_count(c, n, m)?;
    }
    Ok(total)
}

/// A morphism `[source] -> [target]` given by its canonical word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphismWord {
    source: usize,
    word: Word,
}

impl MorphismWord {
    /// Validates `word` as a morphism of `cat`; the source size is read off
    /// the word (zero count for `OI`, largest letter for `OS`).
    pub fn new(cat: &CategoryId, word: Word) -> Result<Self> {
        let bad = |reason: String| Error::MalformedWord {
            word: word.to_string(),
            reason,
        };
        match *cat {
            CategoryId::Oi(d) | CategoryId::OiEq(d) => {
                if let Some(&c) = word.letters().iter().find(|&&c| !(ZERO..=ZERO + d as u8).contains(&c)) {
                    return Err(bad(format!("letter {:?} outside 0..={d}", c as char)));
                }
                if let CategoryId::OiEq(_) = cat {
                    let counts: Vec<usize> = (1..=d as u8).map(|c| word.count(ZERO + c)).collect();
                    if counts.iter().any(|&k| k != counts[0]) {
                        return Err(bad("colors are not used equally often".into()));
                    }
                }
                let source = word.count(ZERO);
                Ok(MorphismWord { source, word })
            }
            CategoryId::Os => {
                let mut next = b'1';
                for &c in word.letters() {
                    if !(b'1'..=b'9').contains(&c) {
                        return Err(bad(format!("letter {:?} is not in 1..=9", c as char)));
                    }
                    if c > next {
                        return Err(bad(format!(
                            "{:?} occurs before {:?}: first occurrences must increase",
                            c as char, next as char
                        )));
                    }
                    if c == next {
                        next += 1;
                    }
                }
                Ok(MorphismWord {
                    source: (next - b'1') as usize,
                    word,
                })
            }
            _ => Err(Error::UnsupportedCategory(format!("{cat} has no word encoding"))),
        }
    }

    /// Like [`MorphismWord::new`] but also checks the source size.
    pub fn with_source(cat: &CategoryId, source: usize, word: Word) -> Result<Self> {
        let m = MorphismWord::new(cat, word)?;
        if m.source != source {
            return Err(Error::MalformedWord {
                word: m.word.to_string(),
                reason: format!("has source size {}, expected {source}", m.source),
            });
        }
        Ok(m)
    }

    pub fn parse(cat: &CategoryId, s: &str) -> Result<Self> {
        MorphismWord::new(cat, Word::parse(s)?)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn identity(cat: &CategoryId, n: usize) -> Result<Self> {
        let w = match cat {
            CategoryId::Oi(_) | CategoryId::OiEq(_) => Word::new(vec![ZERO; n]),
            CategoryId::Os => Word::new((0..n).map(|i| b'1' + i as u8).collect()),
            _ => return Err(Error::UnsupportedCategory(format!("{cat} has no word encoding"))),
        };
        MorphismWord::new(cat, w)
    }
}

impl fmt::Display for MorphismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// The admissible order on morphisms with a common source: target size
/// first, then the words lexicographically with `0 < 1 < ... < 9`.
pub fn admissible_cmp(a: &MorphismWord, b: &MorphismWord) -> Ordering {
    a.target()
        .cmp(&b.target())
        .then_with(|| a.word.letters().cmp(b.word.letters()))
}

/// An `OI(d)` morphism as a function: increasing image positions (1-based)
/// and the colors of the remaining target positions in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OiMorphism {
    pub target: usize,
    pub image: Vec<usize>,
    pub colors: Vec<u8>,
}

impl OiMorphism {
    /// `self ∘ inner`: positions come from `self`, and positions hit by `self`
    /// but missed by `inner` take `inner`'s colors.
    pub fn compose(&self, inner: &OiMorphism) -> Result<OiMorphism> {
        if inner.target != self.image.len() {
            return Err(Error::SizeMismatch(format!(
                "inner target {} but outer source {}",
                inner.target,
                self.image.len()
            )));
        }
        let image: Vec<usize> = inner.image.iter().map(|&i| self.image[i - 1]).collect();
        let mut outer_colors = self.colors.iter();
        let mut inner_colors = inner.colors.iter();
        let mut colors = Vec::new();
        for p in 1..=self.target {
            match self.image.iter().position(|&x| x == p) {
                None => colors.push(*outer_colors.next().expect("one color per free position")),
                Some(q) => {
                    if !inner.image.contains(&(q + 1)) {
                        colors.push(*inner_colors.next().expect("one color per free position"));
                    }
                }
            }
        }
        Ok(OiMorphism {
            target: self.target,
            image,
            colors,
        })
    }
}

/// An ordered surjection `[m] -> [n]` (values 1-based, fiber minima increasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surjection {
    pub values: Vec<usize>,
}

impl Surjection {
    /// `(self ∘ inner)` in `OS^op`, i.e. the surjection `j -> inner(self(j))`.
    pub fn compose(&self, inner: &Surjection) -> Result<Surjection> {
        let n = self.values.iter().copied().max().unwrap_or(0);
        if n != inner.values.len() {
            return Err(Error::SizeMismatch(format!(
                "inner target {} but outer source {n}",
                inner.values.len()
            )));
        }
        Ok(Surjection {
            values: self.values.iter().map(|&j| inner.values[j - 1]).collect(),
        })
    }
}

/// The underlying function of a word-encoded morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Morphism {
    Oi(OiMorphism),
    Os(Surjection),
}

pub fn encode(cat: &CategoryId, f: &Morphism) -> Result<MorphismWord> {
    match (cat, f) {
        (CategoryId::Oi(_) | CategoryId::OiEq(_), Morphism::Oi(f)) => {
            if f.image.windows(2).any(|w| w[0] >= w[1]) || f.image.iter().any(|&p| p == 0 || p > f.target) {
                return Err(Error::Domain("image is not an increasing subset of the target".into()));
            }
            if f.colors.len() + f.image.len() != f.target {
                return Err(Error::Domain("wrong number of colors".into()));
            }
            let mut colors = f.colors.iter();
            let letters = (1..=f.target)
                .map(|p| {
                    if f.image.contains(&p) {
                        ZERO
                    } else {
                        ZERO + colors.next().copied().unwrap_or(0)
                    }
                })
                .collect();
            MorphismWord::new(cat, Word::new(letters))
        }
        (CategoryId::Os, Morphism::Os(s)) => {
            if s.values.iter().any(|&v| v == 0 || v > MAX_DIGIT) {
                return Err(Error::Domain("surjection values must lie in 1..=9".into()));
            }
            MorphismWord::new(cat, Word::new(s.values.iter().map(|&v| b'0' + v as u8).collect()))
        }
        _ => Err(Error::UnsupportedCategory(format!("cannot encode this morphism in {cat}"))),
    }
}

pub fn decode(cat: &CategoryId, w: &MorphismWord) -> Result<Morphism> {
    let w = MorphismWord::new(cat, w.word.clone())?;
    let letters = w.word.letters();
    match cat {
        CategoryId::Oi(_) | CategoryId::OiEq(_) => {
            let image = (1..=letters.len()).filter(|&p| letters[p - 1] == ZERO).collect();
            let colors = letters.iter().filter(|&&c| c != ZERO).map(|&c| c - ZERO).collect();
            Ok(Morphism::Oi(OiMorphism {
                target: letters.len(),
                image,
                colors,
            }))
        }
        CategoryId::Os => Ok(Morphism::Os(Surjection {
            values: letters.iter().map(|&c| (c - b'0') as usize).collect(),
        })),
        _ => Err(Error::UnsupportedCategory(format!("{cat} has no word encoding"))),
    }
}

/// The word of `outer ∘ inner`.
///
/// `OI`: `inner`'s letters replace `outer`'s zeros in order.
/// `OS`: `result[j] = inner[outer[j] - 1]`.
pub fn compose_words(cat: &CategoryId, outer: &MorphismWord, inner: &MorphismWord) -> Result<MorphismWord> {
    if outer.source != inner.target() {
        return Err(Error::SizeMismatch(format!(
            "{outer} has source {} but {inner} has target {}",
            outer.source,
            inner.target()
        )));
    }
    let letters: Vec<Letter> = match cat {
        CategoryId::Oi(_) | CategoryId::OiEq(_) => {
            let mut fill = inner.word.letters().iter();
            outer
                .word
                .letters()
                .iter()
                .map(|&c| if c == ZERO { *fill.next().expect("zero count matches") } else { c })
                .collect()
        }
        CategoryId::Os => outer
            .word
            .letters()
            .iter()
            .map(|&c| inner.word.letters()[(c - b'1') as usize])
            .collect(),
        _ => return Err(Error::UnsupportedCategory(format!("{cat} has no word encoding"))),
    };
    MorphismWord::new(cat, Word::new(letters))
}

/// Whether `g = h ∘ f` for some morphism `h`, decided by the word order.
pub fn divides(cat: &CategoryId, f: &MorphismWord, g: &MorphismWord) -> Result<bool> {
    if f.source != g.source {
        return Err(Error::SizeMismatch(format!(
            "sources {} and {} differ",
            f.source, g.source
        )));
    }
    match *cat {
        CategoryId::Oi(d) => oi_leq(&f.word, &g.word, d),
        CategoryId::Os => os_leq(&f.word, &g.word, &Alphabet::digits_from_one(f.source.max(1))?),
        _ => Err(Error::UnsupportedCategory(format!("divisibility in {cat}"))),
    }
}

/// Divisibility by exhaustive search for `h` with `h ∘ f = g`.
pub fn divides_brute(cat: &CategoryId, f: &MorphismWord, g: &MorphismWord, limits: &Limits) -> Result<bool> {
    if f.source != g.source {
        return Err(Error::SizeMismatch("sources differ".into()));
    }
    for h in hom_words(cat, f.target(), g.target(), limits)? {
        if compose_words(cat, &h, f)? == *g {
            return Ok(true);
        }
    }
    Ok(false)
}

fn restricted_growth(n: usize, m: usize, out: &mut Vec<Word>, cur: &mut Vec<Letter>, max: usize) {
    if cur.len() == m {
        if max == n {
            out.push(Word::new(cur.clone()));
        }
        return;
    }
    // remaining positions must still be able to introduce the missing letters
    if n - max > m - cur.len() {
        return;
    }
    for v in 1..=(max + 1).min(n) {
        cur.push(b'0' + v as u8);
        restricted_growth(n, m, out, cur, max.max(v));
        cur.pop();
    }
}

/// All morphism words `[n] -> [m]`, sorted by the admissible order.
pub fn hom_words(cat: &CategoryId, n: usize, m: usize, limits: &Limits) -> Result<Vec<MorphismWord>> {
    let count = hom_count(cat, n, m)?;
    limits.check_work(
        "hom-set enumeration",
        count.to_u64().unwrap_or(u64::MAX),
    )?;
    let mut out: Vec<MorphismWord> = match *cat {
        CategoryId::Oi(d) | CategoryId::OiEq(d) => {
            let a = Alphabet::digits_from_zero(d + 1)?;
            limits.check_work("hom-set enumeration", ((d + 1) as u64).saturating_pow(m as u32))?;
            words_of_length(&a, m)
                .into_iter()
                .filter(|w| w.count(ZERO) == n)
                .filter_map(|w| MorphismWord::new(cat, w).ok())
                .collect()
        }
        CategoryId::Os => {
            if n > MAX_DIGIT {
                return Err(Error::Domain(format!("OS words need n <= {MAX_DIGIT}")));
            }
            let mut words = Vec::new();
            restricted_growth(n, m, &mut words, &mut Vec::new(), 0);
            words
                .into_iter()
                .map(|w| MorphismWord { source: n, word: w })
                .collect()
        }
        _ => return Err(Error::UnsupportedCategory(format!("{cat} has no word encoding"))),
    };
    out.sort_by(admissible_cmp);
    Ok(out)
}

/// A morphism of `FI(d)`, `FS` or `FA` as a function table: `map[i]` is the
/// 1-based image of `i + 1` (for `FS` the surjection runs from the target
/// size down to the source size), `colors` colors the complement of the
/// image for `FI(d)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FunctionTable {
    pub map: Vec<usize>,
    pub colors: Vec<u8>,
}

fn all_maps(len: usize, range: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=range).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// All function tables `[n] -> [m]` for `FI(d)`, `FS`, `FA`.
pub fn hom_tables(cat: &CategoryId, n: usize, m: usize, limits: &Limits) -> Result<Vec<FunctionTable>> {
    let (len, range) = match cat {
        CategoryId::Fs => (m, n),
        CategoryId::Fi(_) | CategoryId::Fa => (n, m),
        _ => return Err(Error::UnsupportedCategory(format!("{cat} uses word encodings"))),
    };
    limits.check_work("hom-set enumeration", (range as u64).saturating_pow(len as u32))?;
    let maps = all_maps(len, range);
    let out = match *cat {
        CategoryId::Fa => maps
            .into_iter()
            .map(|map| FunctionTable { map, colors: vec![] })
            .collect(),
        CategoryId::Fs => maps
            .into_iter()
            .filter(|map| (1..=n).all(|v| map.contains(&v)))
            .map(|map| FunctionTable { map, colors: vec![] })
            .collect(),
        CategoryId::Fi(d) => {
            let mut out = Vec::new();
            for map in maps {
                let mut seen = map.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != map.len() {
                    continue;
                }
                for colors in all_maps(m - n, d) {
                    out.push(FunctionTable {
                        map: map.clone(),
                        colors: colors.into_iter().map(|c| c as u8).collect(),
                    });
                }
            }
            out
        }
        _ => unreachable!(),
    };
    Ok(out)
}

/// Hilbert series `sum_m |Hom([n], [m])| t^m` of the principal projective at
/// `[n]` (one size per factor for products, in separate variables).
pub fn principal_projective_series(cat: &CategoryId, ns: &[usize]) -> Result<RationalSeries> {
    let factors = cat.factors();
    if ns.len() != factors.len() {
        return Err(Error::SizeMismatch(format!(
            "{cat} needs {} object sizes, got {}",
            factors.len(),
            ns.len()
        )));
    }
    if factors.len() == 1 {
        return single_projective_series(&factors[0], ns[0]);
    }
    let k = factors.len();
    let mut acc = RationalSeries::polynomial(Poly::one(k));
    for (i, (c, &n)) in factors.iter().zip(ns).enumerate() {
        let s = single_projective_series(c, n)?;
        acc = acc.mul(&s.embed(k, &[i]));
    }
    Ok(acc)
}

fn single_projective_series(cat: &CategoryId, n: usize) -> Result<RationalSeries> {
    let tn = Poly::monomial(1, vec![n as u32], q(1));
    let n_fact = q_int(factorial(n));
    let series = match *cat {
        CategoryId::Oi(d) => RationalSeries::new(tn, vec![(linear_form(d as i64), n as u32 + 1)])?,
        CategoryId::Fi(d) => {
            RationalSeries::new(tn.scale(&n_fact), vec![(linear_form(d as i64), n as u32 + 1)])?
        }
        CategoryId::Os => RationalSeries::new(tn, (1..=n as i64).map(|j| (linear_form(j), 1)).collect())?,
        CategoryId::Fs => RationalSeries::new(
            tn.scale(&n_fact),
            (1..=n as i64).map(|j| (linear_form(j), 1)).collect(),
        )?,
        CategoryId::Fa => {
            // m^n has a rational series with denominator (1-t)^{n+1} and
            // numerator of degree at most n
            let len = 2 * n + 1 + FIT_MARGIN;
            let coeffs: Vec<Q> = (0..len)
                .map(|m| q_int(BigInt::from(m).pow(n as u32)))
                .collect();
            fit_rational(&coeffs, &[(linear_form(1), n as u32 + 1)], n)?
        }
        CategoryId::OiEq(_) => {
            return Err(Error::UnsupportedCategory(format!(
                "{cat}: projective series is algebraic, not rational; use cfg_count"
            )))
        }
        CategoryId::Product(_) => unreachable!("factors are not products"),
    };
    Ok(series)
}

/// A polynomial in `n` matching a sequence from some index on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialCertificate {
    pub degree: usize,
    /// Coefficients in the variable `n`.
    pub polynomial: Poly,
    pub from: usize,
    /// Last index at which the agreement was checked.
    pub verified_until: usize,
}

impl PolynomialCertificate {
    pub fn eval(&self, n: usize) -> Q {
        self.polynomial
            .terms()
            .map(|(e, c)| c * q_int(BigInt::from(n).pow(e[0])))
            .fold(Q::zero(), |a, b| a + b)
    }
}

impl fmt::Display for PolynomialCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (degree {}, n = {}..={})",
            self.polynomial.render(&["n".to_string()]),
            self.degree,
            self.from,
            self.verified_until
        )
    }
}

/// Minimum number of vanishing entries of the decisive difference sequence.
pub const MIN_ZERO_CHECKS: usize = 2;

/// Finds the least `k` whose `k`-th finite differences vanish on
/// `coeffs[from..]` (with at least [`MIN_ZERO_CHECKS`] entries checked) and
/// returns the interpolating polynomial of degree `k - 1`, built by Newton's
/// forward formula `h(from + x) = sum_r (Delta^r h)(from) C(x, r)`.
pub fn fa_polynomiality_certificate(coeffs: &[Q], from: usize) -> Result<PolynomialCertificate> {
    if coeffs.len() < from + MIN_ZERO_CHECKS + 1 {
        return Err(Error::InsufficientData(format!(
            "{} coefficients from index {from}; need at least {}",
            coeffs.len().saturating_sub(from),
            MIN_ZERO_CHECKS + 1
        )));
    }
    let window = &coeffs[from..];
    let mut diffs: Vec<Vec<Q>> = vec![window.to_vec()];
    let mut k = 0;
    loop {
        let cur = &diffs[k];
        if cur.len() < MIN_ZERO_CHECKS {
            return Err(Error::FitFailure(format!(
                "no finite difference of order below {k} vanishes on the window"
            )));
        }
        if cur.iter().all(Zero::is_zero) {
            break;
        }
        let next: Vec<Q> = cur.windows(2).map(|w| &w[1] - &w[0]).collect();
        diffs.push(next);
        k += 1;
    }
    let x = Poly::var(1, 0).sub(&Poly::constant(1, q(from as i64)));
    let mut poly = Poly::zero(1);
    let mut binom = Poly::one(1);
    for (r, d) in diffs.iter().take(k).enumerate() {
        poly = poly.add(&binom.scale(&d[0]));
        // C(x, r+1) = C(x, r) (x - r) / (r + 1)
        binom = binom
            .mul(&x.sub(&Poly::constant(1, q(r as i64))))
            .scale(&(Q::one() / q(r as i64 + 1)));
    }
    Ok(PolynomialCertificate {
        degree: k.saturating_sub(1),
        polynomial: poly,
        from,
        verified_until: coeffs.len() - 1,
    })
}

/// Exponents of the monomial `prod x_i^{f(i+1) - f(i) - 1}` of an `OI(1)`
/// morphism (with `f(0) = 0`, `f(n+1) = m+1`): the run lengths of `1`s
/// between consecutive zeros.
pub fn oi_monomial_bijection(cat: &CategoryId, f: &MorphismWord) -> Result<Vec<u32>> {
    if *cat != CategoryId::Oi(1) {
        return Err(Error::Domain(format!("monomial bijection needs oi:1, got {cat}")));
    }
    let mut out = vec![0u32; f.source + 1];
    let mut i = 0;
    for &c in f.word.letters() {
        if c == ZERO {
            i += 1;
        } else {
            out[i] += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::expand;

    fn mw(cat: &CategoryId, s: &str) -> MorphismWord {
        MorphismWord::parse(cat, s).unwrap()
    }

    #[test]
    fn category_syntax() {
        for s in ["oi:2", "fi:1", "os", "fs", "fa", "oieq:2", "os^2", "os*oi:1"] {
            let c: CategoryId = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert!("oi:0".parse::<CategoryId>().is_err());
        assert!("xy".parse::<CategoryId>().is_err());
        assert!("os^0".parse::<CategoryId>().is_err());
    }

    #[test]
    fn hom_count_examples() {
        assert_eq!(hom_count(&CategoryId::Oi(1), 1, 3).unwrap(), BigInt::from(3));
        assert_eq!(hom_count(&CategoryId::Os, 2, 3).unwrap(), BigInt::from(3));
        assert_eq!(hom_count(&CategoryId::Fa, 0, 5).unwrap(), BigInt::from(1));
        assert_eq!(hom_count(&CategoryId::Os, 2, 4).unwrap(), BigInt::from(7));
        assert_eq!(hom_count(&CategoryId::Fa, 2, 3).unwrap(), BigInt::from(9));
        assert_eq!(hom_count(&CategoryId::OiEq(2), 0, 4).unwrap(), BigInt::from(6));
        assert_eq!(
            hom_count_multi(&"os^2".parse().unwrap(), &[2, 1], &[3, 2]).unwrap(),
            BigInt::from(3)
        );
    }

    #[test]
    fn encode_examples() {
        let oi2 = CategoryId::Oi(2);
        let f = Morphism::Oi(OiMorphism {
            target: 3,
            image: vec![2],
            colors: vec![1, 2],
        });
        assert_eq!(encode(&oi2, &f).unwrap().to_string(), "102");
        let os = CategoryId::Os;
        assert_eq!(MorphismWord::identity(&os, 4).unwrap().to_string(), "1234");
        assert_eq!(
            decode(&os, &mw(&os, "121")).unwrap(),
            Morphism::Os(Surjection { values: vec![1, 2, 1] })
        );
        assert!(MorphismWord::parse(&os, "21").is_err());
        assert!(MorphismWord::parse(&oi2, "03").is_err());
    }

    #[test]
    fn composition_examples() {
        let oi2 = CategoryId::Oi(2);
        assert_eq!(compose_words(&oi2, &mw(&oi2, "100"), &mw(&oi2, "20")).unwrap().to_string(), "120");
        assert!(compose_words(&oi2, &mw(&oi2, "00"), &mw(&oi2, "0")).is_err());
        let os = CategoryId::Os;
        let id = MorphismWord::identity(&os, 2).unwrap();
        let f = mw(&os, "1221");
        assert_eq!(compose_words(&os, &f, &id).unwrap(), f);
    }

    #[test]
    fn divisibility_examples() {
        let oi1 = CategoryId::Oi(1);
        assert!(divides(&oi1, &mw(&oi1, "0"), &mw(&oi1, "10")).unwrap());
        let os = CategoryId::Os;
        // "212" is not an ordered surjection word, so it is no morphism at all
        assert!(MorphismWord::parse(&os, "212").is_err());
        assert!(!divides(&os, &mw(&os, "121"), &mw(&os, "1122")).unwrap());
        assert!(!divides_brute(&os, &mw(&os, "121"), &mw(&os, "1122"), &Limits::default()).unwrap());
        assert!(divides(&os, &mw(&os, "12"), &mw(&os, "12")).unwrap());
    }

    #[test]
    fn projective_series_examples() {
        let s = principal_projective_series(&CategoryId::Oi(1), &[1]).unwrap();
        assert_eq!(s.to_string(), "t/(1-t)^2");
        let s = principal_projective_series(&CategoryId::Os, &[2]).unwrap();
        assert_eq!(s.to_string(), "t^2/((1-t)(1-2t))");
        let s = principal_projective_series(&CategoryId::Fi(1), &[1]).unwrap();
        assert_eq!(s.to_string(), "t/(1-t)^2");
        let s = principal_projective_series(&CategoryId::Oi(2), &[0]).unwrap();
        assert_eq!(s.to_string(), "1/(1-2t)");
        let s = principal_projective_series(&CategoryId::Fa, &[2]).unwrap();
        assert_eq!(s.to_string(), "(t+t^2)/(1-t)^3");
        let s = principal_projective_series(&CategoryId::Fs, &[2]).unwrap();
        assert_eq!(expand(&s, 4).unwrap().to_vec(5), [0, 0, 2, 6, 14].map(q).to_vec());
    }

    #[test]
    fn product_series() {
        let c: CategoryId = "os^2".parse().unwrap();
        let s = principal_projective_series(&c, &[1, 2]).unwrap();
        let e = expand(&s, 6).unwrap();
        for m1 in 0..=3u32 {
            for m2 in 0..=3u32 {
                let want = hom_count_multi(&c, &[1, 2], &[m1 as usize, m2 as usize]).unwrap();
                assert_eq!(e.get(&[m1, m2]), q_int(want));
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let sq: Vec<Q> = (0..10).map(|n| q(n * n)).collect();
        let c = fa_polynomiality_certificate(&sq, 1).unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.polynomial, Poly::monomial(1, vec![2], q(1)));
        let pow2: Vec<Q> = (0..10).map(|n| q(1 << n)).collect();
        assert!(matches!(fa_polynomiality_certificate(&pow2, 0), Err(Error::FitFailure(_))));
        let c = fa_polynomiality_certificate(&vec![q(5); 6], 0).unwrap();
        assert_eq!(c.degree, 0);
        assert!(matches!(
            fa_polynomiality_certificate(&[q(1), q(2)], 0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn monomial_bijection_examples() {
        let oi1 = CategoryId::Oi(1);
        assert_eq!(oi_monomial_bijection(&oi1, &mw(&oi1, "101")).unwrap(), vec![1, 1]);
        assert_eq!(oi_monomial_bijection(&oi1, &mw(&oi1, "00")).unwrap(), vec![0, 0, 0]);
        assert!(oi_monomial_bijection(&CategoryId::Oi(2), &mw(&CategoryId::Oi(2), "0")).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let l = Limits::default();
        for (cat, n, m) in [(CategoryId::Oi(2), 2, 4), (CategoryId::Os, 2, 5), (CategoryId::OiEq(2), 1, 5)] {
            assert_eq!(
                BigInt::from(hom_words(&cat, n, m, &l).unwrap().len()),
                hom_count(&cat, n, m).unwrap()
            );
        }
        for (cat, n, m) in [(CategoryId::Fi(2), 2, 4), (CategoryId::Fs, 2, 4), (CategoryId::Fa, 3, 3)] {
            assert_eq!(
                BigInt::from(hom_tables(&cat, n, m, &l).unwrap().len()),
                hom_count(&cat, n, m).unwrap()
            );
        }
    }
}
