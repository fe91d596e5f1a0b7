//! Context-free grammars over single-character symbols.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Terminal(Letter),
    NonTerminal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub head: usize,
    pub body: Vec<Symbol>,
}

/// A grammar `(terminals, non-terminals, rules, start)`. Non-terminals are
/// named by single characters distinct from the terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    terminals: Alphabet,
    nonterminals: Vec<char>,
    rules: Vec<Rule>,
    start: usize,
}

impl Cfg {
    /// `rules` pairs a head name with a body string; characters in the body
    /// are looked up first among the non-terminals, then the terminals.
    pub fn new(
        terminals: Alphabet,
        nonterminals: &[char],
        start: char,
        rules: &[(char, &str)],
    ) -> Result<Self> {
        let mut names = nonterminals.to_vec();
        names.sort_unstable();
        names.dedup();
        if names.len() != nonterminals.len() {
            return Err(Error::parse("grammar", "duplicate non-terminal"));
        }
        for &n in nonterminals {
            if n.is_ascii() && terminals.contains(n as u8) {
                return Err(Error::parse(
                    "grammar",
                    format!("{n:?} is both a terminal and a non-terminal"),
                ));
            }
        }
        let index = |c: char| nonterminals.iter().position(|&n| n == c);
        let start = index(start)
            .ok_or_else(|| Error::parse("grammar", format!("start symbol {start:?} undeclared")))?;
        let mut parsed = Vec::with_capacity(rules.len());
        for &(head, body) in rules {
            let head = index(head)
                .ok_or_else(|| Error::parse("grammar", format!("rule head {head:?} undeclared")))?;
            let body = body
                .chars()
                .filter(|c| !c.is_whitespace() && *c != 'ε')
                .map(|c| match index(c) {
                    Some(i) => Ok(Symbol::NonTerminal(i)),
                    None if c.is_ascii() && terminals.contains(c as u8) => {
                        Ok(Symbol::Terminal(c as u8))
                    }
                    None => Err(Error::parse("grammar", format!("symbol {c:?} undeclared"))),
                })
                .collect::<Result<Vec<_>>>()?;
            parsed.push(Rule { head, body });
        }
        Ok(Cfg {
            terminals,
            nonterminals: nonterminals.to_vec(),
            rules: parsed,
            start,
        })
    }

    /// Reads rules written as `S -> | 1U2S | 2D1S; U -> | 1U2U`. Heads are
    /// the non-terminals, in order of first appearance; the first is the
    /// start symbol. An empty alternative is the empty word.
    pub fn parse(terminals: Alphabet, text: &str) -> Result<Self> {
        let mut heads = Vec::new();
        let mut bodies: Vec<(char, String)> = Vec::new();
        for clause in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (head, alts) = clause
                .split_once("->")
                .ok_or_else(|| Error::parse("grammar", format!("missing '->' in {clause:?}")))?;
            let mut hc = head.trim().chars();
            let (Some(h), None) = (hc.next(), hc.next()) else {
                return Err(Error::parse("grammar", format!("rule head {:?} is not one character", head.trim())));
            };
            if !heads.contains(&h) {
                heads.push(h);
            }
            for alt in alts.split('|') {
                bodies.push((h, alt.trim().to_string()));
            }
        }
        let Some(&start) = heads.first() else {
            return Err(Error::parse("grammar", "no rules"));
        };
        let rules: Vec<(char, &str)> = bodies.iter().map(|(h, b)| (*h, b.as_str())).collect();
        Cfg::new(terminals, &heads, start, &rules)
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn num_nonterminals(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn nonterminal_name(&self, i: usize) -> char {
        self.nonterminals[i]
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Whether `w` is derivable from the start symbol.
    pub fn generates(&self, w: &Word) -> Result<bool> {
        self.terminals.check_word(w)?;
        let table = self.span_table(w.letters());
        Ok(table[0][w.len()][self.start])
    }

    /// `table[i][j][n]` holds when non-terminal `n` derives `w[i..j]`.
    /// Spans are filled by increasing length; within one length a fixpoint
    /// handles rules whose other symbols derive the empty word.
    fn span_table(&self, w: &[Letter]) -> Vec<Vec<Vec<bool>>> {
        let len = w.len();
        let nn = self.nonterminals.len();
        let mut table = vec![vec![vec![false; nn]; len + 1]; len + 1];
        for span in 0..=len {
            for i in 0..=len - span {
                let j = i + span;
                loop {
                    let mut changed = false;
                    for rule in &self.rules {
                        if !table[i][j][rule.head] && self.body_matches(&rule.body, w, i, j, &table) {
                            table[i][j][rule.head] = true;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
        }
        table
    }

    fn body_matches(
        &self,
        body: &[Symbol],
        w: &[Letter],
        i: usize,
        j: usize,
        table: &[Vec<Vec<bool>>],
    ) -> bool {
        // reachable[p] = body prefix can derive w[i..p]
        let mut reachable = vec![false; j - i + 1];
        reachable[0] = true;
        for sym in body {
            let mut next = vec![false; j - i + 1];
            for (off, _) in reachable.iter().enumerate().filter(|(_, &r)| r) {
                let p = i + off;
                match *sym {
                    Symbol::Terminal(c) => {
                        if p < j && w[p] == c {
                            next[off + 1] = true;
                        }
                    }
                    Symbol::NonTerminal(n) => {
                        for q in p..=j {
                            if table[p][q][n] {
                                next[q - i] = true;
                            }
                        }
                    }
                }
            }
            reachable = next;
        }
        reachable[j - i]
    }
}

#[derive(Serialize, Deserialize)]
struct CfgRecord {
    terminals: Alphabet,
    nonterminals: String,
    start: String,
    rules: Vec<(String, String)>,
}

impl Serialize for Cfg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rules = self
            .rules
            .iter()
            .map(|r| {
                let body: String = r
                    .body
                    .iter()
                    .map(|s| match *s {
                        Symbol::Terminal(c) => c as char,
                        Symbol::NonTerminal(n) => self.nonterminals[n],
                    })
                    .collect();
                (self.nonterminals[r.head].to_string(), body)
            })
            .collect();
        CfgRecord {
            terminals: self.terminals.clone(),
            nonterminals: self.nonterminals.iter().collect(),
            start: self.nonterminals[self.start].to_string(),
            rules,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cfg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = CfgRecord::deserialize(d)?;
        let single = |s: &str| {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(D::Error::custom(format!("{s:?} is not a single symbol"))),
            }
        };
        let nts: Vec<char> = rec.nonterminals.chars().collect();
        let start = single(&rec.start)?;
        let mut rules = Vec::new();
        for (h, b) in &rec.rules {
            rules.push((single(h)?, b.as_str()));
        }
        Cfg::new(rec.terminals, &nts, start, &rules).map_err(D::Error::custom)
    }
}

/// The grammar `S -> ε | 1S2S | 2S1S`. It generates the words over `{1, 2}`
/// with equally many 1s and 2s but is ambiguous: `1212` has two derivations.
pub fn naive_balanced_grammar() -> Cfg {
    Cfg::new(
        Alphabet::parse("12").expect("static alphabet"),
        &['S'],
        'S',
        &[('S', ""), ('S', "1S2S"), ('S', "2S1S")],
    )
    .expect("static grammar")
}

/// Unambiguous grammar for the words over `{1, 2}` with equally many 1s and
/// 2s, split at the first return to balance:
/// `S -> ε | 1U2S | 2D1S`, `U -> ε | 1U2U`, `D -> ε | 2D1D`.
pub fn balanced_grammar() -> Cfg {
    Cfg::new(
        Alphabet::parse("12").expect("static alphabet"),
        &['S', 'U', 'D'],
        'S',
        &[
            ('S', ""),
            ('S', "1U2S"),
            ('S', "2D1S"),
            ('U', ""),
            ('U', "1U2U"),
            ('D', ""),
            ('D', "2D1D"),
        ],
    )
    .expect("static grammar")
}

/// Largest zero count [`balanced_zero_grammar`] can name symbols for.
pub const MAX_GRAMMAR_ZEROS: usize = 7;

/// Unambiguous grammar for words over `{0, 1, 2}` with exactly `zeros`
/// zeros and equally many 1s and 2s (the basis words of the OI_2 subcategory
/// with balanced colorings, at source size `zeros`).
///
/// With `a + b = k`:
/// `Z_k -> ε (k = 0) | 0 Z_{k-1} | 1 U_a 2 Z_b | 2 D_a 1 Z_b`,
/// `U_k -> ε (k = 0) | 0 U_{k-1} | 1 U_a 2 U_b` and `D_k` symmetrically,
/// where `U_a` (`D_a`) never dips below (above) balance.
pub fn balanced_zero_grammar(zeros: usize) -> Result<Cfg> {
    if zeros > MAX_GRAMMAR_ZEROS {
        return Err(Error::Domain(format!(
            "{zeros} zeros exceed the grammar symbol supply ({MAX_GRAMMAR_ZEROS})"
        )));
    }
    let z = |k: usize| (b'A' + k as u8) as char;
    let u = |k: usize| (b'J' + k as u8) as char;
    let d = |k: usize| (b'S' + k as u8) as char;
    let mut nts = Vec::new();
    let mut rules: Vec<(char, String)> = Vec::new();
    for k in 0..=zeros {
        nts.extend([z(k), u(k), d(k)]);
        for (head, up, down, sub) in [(z(k), '1', '2', z as fn(usize) -> char), (u(k), '1', '2', u), (d(k), '2', '1', d)] {
            if k == 0 {
                rules.push((head, String::new()));
            } else {
                rules.push((head, format!("0{}", sub(k - 1))));
            }
            for a in 0..=k {
                let b = k - a;
                if head == z(k) {
                    rules.push((head, format!("1{}2{}", u(a), z(b))));
                    rules.push((head, format!("2{}1{}", d(a), z(b))));
                } else {
                    rules.push((head, format!("{up}{}{down}{}", sub(a), sub(b))));
                }
            }
        }
    }
    let refs: Vec<(char, &str)> = rules.iter().map(|(h, b)| (*h, b.as_str())).collect();
    Cfg::new(Alphabet::parse("012")?, &nts, z(zeros), &refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let g = balanced_grammar();
        assert!(g.generates(&Word::from("1221")).unwrap());
        assert!(g.generates(&Word::empty()).unwrap());
        assert!(!g.generates(&Word::from("112")).unwrap());
        let z = balanced_zero_grammar(2).unwrap();
        assert!(z.generates(&Word::from("0102")).unwrap());
        assert!(z.generates(&Word::from("2001")).unwrap());
        assert!(!z.generates(&Word::from("01020")).unwrap());
        assert!(!z.generates(&Word::from("0110")).unwrap());
        assert!(!z.generates(&Word::from("000")).unwrap());
    }

    #[test]
    fn undeclared_symbols_rejected() {
        let a = Alphabet::parse("a").unwrap();
        assert!(Cfg::new(a.clone(), &['S'], 'S', &[('S', "aT")]).is_err());
        assert!(Cfg::new(a.clone(), &['S'], 'T', &[]).is_err());
        assert!(Cfg::new(a, &['a'], 'a', &[]).is_err());
    }

    #[test]
    fn record_round_trip() {
        let g = balanced_grammar();
        let json = serde_json::to_string(&g).unwrap();
        let back: Cfg = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn text_rules() {
        let g = Cfg::parse(Alphabet::parse("12").unwrap(), "S -> | 1U2S | 2D1S; U -> | 1U2U; D -> | 2D1D").unwrap();
        assert_eq!(g, balanced_grammar());
        assert!(Cfg::parse(Alphabet::parse("12").unwrap(), "S 1S2").is_err());
        assert!(Cfg::parse(Alphabet::parse("12").unwrap(), "S -> 1T").is_err());
    }
}
