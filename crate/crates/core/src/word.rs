//! Words over small finite alphabets.
//!
//! Letters are single printable ASCII characters and are stored as their
//! byte values, so the natural byte order `'0' < '1' < ... < '9' < 'a' < ...`
//! is the letter order used by every lexicographic comparison.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = u8;

/// A finite, sorted, duplicate-free set of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut letters: Vec<Letter> = letters.into_iter().collect();
        for &c in &letters {
            if !c.is_ascii_graphic() {
                return Err(Error::parse(
                    "alphabet",
                    format!("letter byte {c} is not a printable ASCII character"),
                ));
            }
        }
        letters.sort_unstable();
        letters.dedup();
        Ok(Alphabet { letters })
    }

    /// Parses an alphabet written as the concatenation of its symbols, e.g. `"012"`.
    pub fn parse(s: &str) -> Result<Self> {
        if !s.is_ascii() {
            return Err(Error::parse("alphabet", format!("{s:?} is not ASCII")));
        }
        Alphabet::new(s.bytes())
    }

    /// `{'0', '1', ..., digit(k)}`; used for the OI_d alphabets.
    pub fn digits_from_zero(k: usize) -> Result<Self> {
        if k > 9 {
            return Err(Error::Domain(format!(
                "alphabet {{0..{k}}} needs multi-character letters"
            )));
        }
        Alphabet::new((0..=k as u8).map(|i| b'0' + i))
    }

    /// `{'1', ..., digit(n)}`; the alphabet `[n]`.
    pub fn digits_from_one(n: usize) -> Result<Self> {
        if n > 9 {
            return Err(Error::Domain(format!(
                "alphabet [{n}] needs multi-character letters"
            )));
        }
        Alphabet::new((1..=n as u8).map(|i| b'0' + i))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, c: Letter) -> bool {
        self.letters.binary_search(&c).is_ok()
    }

    pub fn index_of(&self, c: Letter) -> Option<usize> {
        self.letters.binary_search(&c).ok()
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|c| !self.contains(**c)) {
            Some(&c) => Err(Error::UnknownLetter(c as char)),
            None => Ok(()),
        }
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.letters.iter().all(|c| other.contains(*c))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.letters {
            write!(f, "{}", c as char)?;
        }
        Ok(())
    }
}

impl Serialize for Alphabet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Alphabet::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A finite sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a word written as its symbols. `""`, `"ε"` and `"-"` denote the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" || s == "-" {
            return Ok(Word::empty());
        }
        if !s.bytes().all(|c| c.is_ascii_graphic()) {
            return Err(Error::parse("word", format!("{s:?} contains non-letter characters")));
        }
        Ok(Word(s.as_bytes().to_vec()))
    }

    pub fn parse_in(s: &str, alphabet: &Alphabet) -> Result<Self> {
        let w = Word::parse(s)?;
        alphabet.check_word(&w)?;
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, c: Letter) -> usize {
        self.0.iter().filter(|&&x| x == c).count()
    }

    pub fn push(&mut self, c: Letter) {
        self.0.push(c);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl From<&str> for Word {
    /// Convenience for literals; panics on non-printable input.
    fn from(s: &str) -> Self {
        Word::parse(s).expect("invalid word literal")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            write!(f, "{}", c as char)?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// All words over `alphabet` of length exactly `len`, in lexicographic order.
pub fn words_of_length(alphabet: &Alphabet, len: usize) -> Vec<Word> {
    let k = alphabet.len();
    if k == 0 {
        return if len == 0 { vec![Word::empty()] } else { vec![] };
    }
    let mut out = Vec::with_capacity(k.pow(len as u32));
    let mut idx = vec![0usize; len];
    loop {
        out.push(Word(idx.iter().map(|&i| alphabet.letters()[i]).collect()));
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|l| words_of_length(alphabet, l))
        .collect()
}
