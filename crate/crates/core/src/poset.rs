//! Word orders and finitely generated ideals in them.
//!
//! Three orders are provided:
//!
//! * [`OrderKind::Higman`]: `u <= w` iff `u` is a subsequence of `w` (letters
//!   compared by equality).
//! * [`OrderKind::OsPattern`]: `u <= w` iff there is an order-preserving
//!   injection `phi` with `u_i = w_phi(i)` such that every letter of `w` also
//!   occurs at or before its position inside the image of `phi`. Equivalently
//!   `w` lies in `u_1 P_1* u_2 P_2* ... u_k P_k*` with `P_i = {u_1, ..., u_i}`.
//!   This is divisibility of ordered surjections read as words.
//! * [`OrderKind::OiZeroAligned`]: subsequence order on words over
//!   `{0, ..., d}` with equal numbers of zeros. This is divisibility in OI_d.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

pub const ZERO: Letter = b'0';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Higman,
    OsPattern,
    OiZeroAligned(usize),
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::Higman => write!(f, "higman"),
            OrderKind::OsPattern => write!(f, "os"),
            OrderKind::OiZeroAligned(d) => write!(f, "oi:{d}"),
        }
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "higman" => Ok(OrderKind::Higman),
            "os" => Ok(OrderKind::OsPattern),
            other => {
                let d = other
                    .strip_prefix("oi:")
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| {
                        Error::parse("order", format!("expected higman, os or oi:<d>, got {other:?}"))
                    })?;
                Ok(OrderKind::OiZeroAligned(d))
            }
        }
    }
}

/// A comparator on words over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordOrder {
    kind: OrderKind,
    alphabet: Alphabet,
}

impl WordOrder {
    pub fn new(kind: OrderKind, alphabet: Alphabet) -> Result<Self> {
        if let OrderKind::OiZeroAligned(d) = kind {
            let expected = Alphabet::digits_from_zero(d)?;
            if alphabet != expected {
                return Err(Error::AlphabetMismatch(format!(
                    "oi:{d} requires alphabet {expected}, got {alphabet}"
                )));
            }
        }
        Ok(WordOrder { kind, alphabet })
    }

    pub fn higman(alphabet: Alphabet) -> Self {
        WordOrder {
            kind: OrderKind::Higman,
            alphabet,
        }
    }

    pub fn os(alphabet: Alphabet) -> Self {
        WordOrder {
            kind: OrderKind::OsPattern,
            alphabet,
        }
    }

    pub fn oi(d: usize) -> Result<Self> {
        WordOrder::new(OrderKind::OiZeroAligned(d), Alphabet::digits_from_zero(d)?)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Compares two words; fails when a word leaves the alphabet or, for the
    /// OI order, when the zero counts differ.
    pub fn leq(&self, u: &Word, w: &Word) -> Result<bool> {
        self.alphabet.check_word(u)?;
        self.alphabet.check_word(w)?;
        Ok(match self.kind {
            OrderKind::Higman => is_subsequence(u, w),
            OrderKind::OsPattern => os_greedy(u, w),
            OrderKind::OiZeroAligned(_) => {
                if u.count(ZERO) != w.count(ZERO) {
                    return Err(zero_mismatch(u, w));
                }
                is_subsequence(u, w)
            }
        })
    }

    /// Like [`WordOrder::leq`] but treats words in different OI strata as
    /// incomparable instead of failing.
    pub fn related(&self, u: &Word, w: &Word) -> Result<bool> {
        match self.kind {
            OrderKind::OiZeroAligned(_) if u.count(ZERO) != w.count(ZERO) => {
                self.alphabet.check_word(u)?;
                self.alphabet.check_word(w)?;
                Ok(false)
            }
            _ => self.leq(u, w),
        }
    }
}

fn zero_mismatch(u: &Word, w: &Word) -> Error {
    Error::Domain(format!(
        "{u} and {w} have different zero counts ({} vs {}) and lie in different projectives",
        u.count(ZERO),
        w.count(ZERO)
    ))
}

fn check_same_alphabet(u: &Word, w: &Word, alphabet: Option<&Alphabet>) -> Result<()> {
    if let Some(a) = alphabet {
        for x in [u, w] {
            if let Some(&c) = x.letters().iter().find(|c| !a.contains(**c)) {
                return Err(Error::AlphabetMismatch(format!(
                    "letter {:?} of {x} is outside {a}",
                    c as char
                )));
            }
        }
    }
    Ok(())
}

fn is_subsequence(u: &Word, w: &Word) -> bool {
    let mut it = w.letters().iter();
    u.letters().iter().all(|c| it.any(|x| x == c))
}

/// Greedy leftmost matching against `u_1 P_1* u_2 P_2* ... u_k P_k*`.
///
/// Taking `u_{i+1}` at its first admissible position is never worse than a
/// later choice: the filler sets grow with `i`, so everything a later match
/// would have absorbed is still absorbable.
fn os_greedy(u: &Word, w: &Word) -> bool {
    let u = u.letters();
    let w = w.letters();
    if u.is_empty() {
        return w.is_empty();
    }
    let mut seen = [false; 256];
    let mut matched = 0;
    for &c in w {
        if matched < u.len() && c == u[matched] {
            seen[c as usize] = true;
            matched += 1;
        } else if !seen[c as usize] {
            return false;
        }
    }
    matched == u.len()
}

/// Subsequence order with equal letters.
pub fn higman_leq(u: &Word, w: &Word, alphabet: &Alphabet) -> Result<bool> {
    check_same_alphabet(u, w, Some(alphabet))?;
    Ok(is_subsequence(u, w))
}

/// The order on words under which ordered surjections divide one another.
pub fn os_leq(u: &Word, w: &Word, alphabet: &Alphabet) -> Result<bool> {
    check_same_alphabet(u, w, Some(alphabet))?;
    Ok(os_greedy(u, w))
}

/// Zero-aligned subsequence order on words over `{0, ..., d}`.
pub fn oi_leq(u: &Word, w: &Word, d: usize) -> Result<bool> {
    let alphabet = Alphabet::digits_from_zero(d)?;
    check_same_alphabet(u, w, Some(&alphabet))?;
    if u.count(ZERO) != w.count(ZERO) {
        return Err(zero_mismatch(u, w));
    }
    Ok(is_subsequence(u, w))
}

/// Keeps the elements of `words` not lying above a different element (or an
/// earlier copy of themselves). Survivors keep their input order.
pub fn minimal_generators(words: &[Word], order: &WordOrder) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    'outer: for (i, w) in words.iter().enumerate() {
        for (j, u) in words.iter().enumerate() {
            if i == j {
                continue;
            }
            if order.related(u, w)? && (u != w || j < i) {
                continue 'outer;
            }
        }
        out.push(w.clone());
    }
    Ok(out)
}

/// First `(i, j)` with `i < j` and `seq[i] <= seq[j]`, zero-based, ordered by
/// `i` then `j`.
pub fn find_comparable_pair(seq: &[Word], order: &WordOrder) -> Result<Option<(usize, usize)>> {
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if order.related(&seq[i], &seq[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// A finitely generated upward-closed set of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetIdeal {
    order: WordOrder,
    generators: Vec<Word>,
}

impl PosetIdeal {
    /// Builds the ideal generated by `generators`, minimizing them.
    pub fn new(order: WordOrder, generators: &[Word]) -> Result<Self> {
        for g in generators {
            order.alphabet().check_word(g)?;
        }
        let generators = minimal_generators(generators, &order)?;
        Ok(PosetIdeal { order, generators })
    }

    pub fn empty(order: WordOrder) -> Self {
        PosetIdeal {
            order,
            generators: Vec::new(),
        }
    }

    pub fn order(&self) -> &WordOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        self.order.alphabet().check_word(w)?;
        for g in &self.generators {
            if self.order.related(g, w)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Membership of `w` in the ideal.
pub fn ideal_member(ideal: &PosetIdeal, w: &Word) -> Result<bool> {
    ideal.contains(w)
}

#[derive(Serialize, Deserialize)]
struct IdealRecord {
    order: String,
    alphabet: Alphabet,
    generators: Vec<Word>,
}

impl Serialize for PosetIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealRecord {
            order: self.order.kind.to_string(),
            alphabet: self.order.alphabet.clone(),
            generators: self.generators.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PosetIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = IdealRecord::deserialize(d)?;
        let kind: OrderKind = rec.order.parse().map_err(D::Error::custom)?;
        let order = WordOrder::new(kind, rec.alphabet).map_err(D::Error::custom)?;
        PosetIdeal::new(order, &rec.generators).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    fn abc() -> Alphabet {
        Alphabet::parse("abc").unwrap()
    }

    #[test]
    fn higman_examples() {
        assert!(higman_leq(&w(""), &w("abc"), &abc()).unwrap());
        assert!(higman_leq(&w("ab"), &w("acb"), &abc()).unwrap());
        assert!(!higman_leq(&w("ba"), &w("aab"), &abc()).unwrap());
    }

    #[test]
    fn higman_rejects_foreign_letters() {
        assert!(matches!(
            higman_leq(&w("z"), &w("abc"), &abc()),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn os_examples() {
        let a = Alphabet::parse("12").unwrap();
        assert!(os_leq(&w("12"), &w("121"), &a).unwrap());
        assert!(!os_leq(&w("12"), &w("212"), &a).unwrap());
        assert!(os_leq(&w("121"), &w("121"), &a).unwrap());
        assert!(os_leq(&w(""), &w(""), &a).unwrap());
        assert!(!os_leq(&w(""), &w("1"), &a).unwrap());
    }

    #[test]
    fn oi_examples() {
        assert!(oi_leq(&w("00"), &w("0120"), 2).unwrap());
        assert!(oi_leq(&w("010"), &w("0110"), 1).unwrap());
        assert!(!oi_leq(&w("020"), &w("0110"), 2).unwrap());
        // different zero counts: never related, and `leq` refuses to compare
        let order = WordOrder::oi(2).unwrap();
        assert!(!order.related(&w("020"), &w("0100")).unwrap());
        assert!(order.leq(&w("020"), &w("0100")).is_err());
    }

    #[test]
    fn oi_zero_mismatch_is_domain_error() {
        assert!(matches!(oi_leq(&w("0"), &w("00"), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn oi_order_requires_matching_alphabet() {
        let bad = WordOrder::new(OrderKind::OiZeroAligned(2), Alphabet::parse("01").unwrap());
        assert!(matches!(bad, Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn ideal_membership_examples() {
        let os = WordOrder::os(Alphabet::parse("12").unwrap());
        let i = PosetIdeal::new(os.clone(), &[w("12")]).unwrap();
        assert!(ideal_member(&i, &w("121")).unwrap());
        assert!(!ideal_member(&PosetIdeal::empty(os), &w("121")).unwrap());
        let oi = PosetIdeal::new(WordOrder::oi(1).unwrap(), &[w("0")]).unwrap();
        assert!(ideal_member(&oi, &w("0")).unwrap());
        assert!(!ideal_member(&oi, &w("00")).unwrap());
    }

    #[test]
    fn minimal_generator_examples() {
        let h = WordOrder::higman(Alphabet::parse("ab").unwrap());
        assert_eq!(minimal_generators(&[w("a"), w("aba")], &h).unwrap(), vec![w("a")]);
        assert!(minimal_generators(&[], &h).unwrap().is_empty());
        let h12 = WordOrder::higman(Alphabet::parse("12").unwrap());
        assert_eq!(
            minimal_generators(&[w("12"), w("21")], &h12).unwrap(),
            vec![w("12"), w("21")]
        );
        assert_eq!(
            minimal_generators(&[w("12"), w("12")], &h12).unwrap(),
            vec![w("12")]
        );
    }

    #[test]
    fn comparable_pair_examples() {
        let h = WordOrder::higman(Alphabet::parse("ab").unwrap());
        assert_eq!(
            find_comparable_pair(&[w("ab"), w("ba"), w("aab")], &h).unwrap(),
            Some((0, 2))
        );
        assert_eq!(find_comparable_pair(&[w("a")], &h).unwrap(), None);
        assert_eq!(find_comparable_pair(&[w("b"), w("ab")], &h).unwrap(), Some((0, 1)));
    }

    #[test]
    fn ideal_record_round_trip() {
        let i = PosetIdeal::new(WordOrder::oi(2).unwrap(), &[w("01"), w("20")]).unwrap();
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"order":"oi:2","alphabet":"012","generators":["01","20"]}"#);
        let back: PosetIdeal = serde_json::from_str(&json).unwrap();
        assert_eq!(back, i);
    }
}
