use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {relator} uses generator index {gen} but only {count} generators exist")]
    GeneratorOutOfRange { relator: usize, gen: usize, count: usize },
    #[error("names list has {names} entries for {count} generators")]
    NameCount { names: usize, count: usize },
    #[error("invalid presentation JSON: {0}")]
    Json(String),
}

/// Finitely presented group. Generators are `0..generator_count`; `names`
/// only affect text rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
    pub names: Vec<String>,
}

/// `a, b, …, z`, then `g26, g27, …`.
pub fn default_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

impl Presentation {
    /// Presentation with default generator names. Relators are stored as given.
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        Self::with_names(default_names(generator_count), relators)
    }

    pub fn with_names(names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let p = Presentation { generator_count: names.len(), relators, names };
        p.check()?;
        Ok(p)
    }

    pub fn free(rank: usize) -> Self {
        Presentation { generator_count: rank, relators: Vec::new(), names: default_names(rank) }
    }

    pub fn check(&self) -> Result<(), PresentationError> {
        if self.names.len() != self.generator_count {
            return Err(PresentationError::NameCount { names: self.names.len(), count: self.generator_count });
        }
        let mut seen = HashSet::new();
        for n in &self.names {
            if !seen.insert(n) {
                return Err(PresentationError::DuplicateGenerator(n.clone()));
            }
        }
        for (i, r) in self.relators.iter().enumerate() {
            if let Some(g) = r.max_gen().filter(|&g| g >= self.generator_count) {
                return Err(PresentationError::GeneratorOutOfRange { relator: i, gen: g, count: self.generator_count });
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Relators freely and cyclically reduced; empty relators and
    /// duplicates up to rotation and inversion removed. First occurrence
    /// order is kept.
    pub fn normalized(&self) -> Presentation {
        let mut seen = HashSet::new();
        let mut relators = Vec::new();
        for r in &self.relators {
            let r = r.cyclically_reduced();
            if r.is_empty() {
                continue;
            }
            if seen.insert(r.cyclic_canonical()) {
                relators.push(r);
            }
        }
        Presentation { generator_count: self.generator_count, relators, names: self.names.clone() }
    }

    /// Generators reindexed so that `map[g]` is the new index of `g`.
    pub fn permuted(&self, map: &[usize]) -> Presentation {
        let mut names = vec![String::new(); self.generator_count];
        for (g, &t) in map.iter().enumerate() {
            names[t] = self.names[g].clone();
        }
        Presentation {
            generator_count: self.generator_count,
            relators: self.relators.iter().map(|r| r.renumbered(map)).collect(),
            names,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PresentationError> {
        let p: Presentation = serde_json::from_str(text).map_err(|e| PresentationError::Json(e.to_string()))?;
        p.check()?;
        Ok(p)
    }
}

/// `< a, b | a b a^-1 b^-1 >`.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        if !self.names.is_empty() {
            write!(f, " {}", self.names.join(", "))?;
        }
        f.write_str(" |")?;
        for (i, r) in self.relators.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{}", r.display(&self.names))?;
        }
        f.write_str(" >")
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    /// Words are products of names separated by whitespace, `*` or `.`;
    /// powers are written `^n`, `^-n` or `^{n}`. A relation `u = v` is
    /// stored as the relator `u v^-1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { src: s, pos: 0 }.presentation()
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let t = text.trim_start();
    if t.starts_with('{') {
        Presentation::from_json(t)
    } else {
        text.parse()
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PresentationError> {
        Err(PresentationError::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PresentationError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        let mut chars = self.src[start..].char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let mut end = self.src.len();
        for (i, c) in chars {
            if !(c.is_alphanumeric() || c == '_') {
                end = start + i;
                break;
            }
        }
        self.pos = end;
        Some(self.src[start..end].to_string())
    }

    fn integer(&mut self) -> Result<i32, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse().map_err(|_| PresentationError::Syntax { pos: start, msg: "expected an integer exponent".into() })
    }

    fn presentation(mut self) -> Result<Presentation, PresentationError> {
        self.expect('<')?;
        let mut names = Vec::new();
        if let Some(n) = self.ident() {
            names.push(n);
            while self.eat(',') {
                match self.ident() {
                    Some(n) => names.push(n),
                    None => return self.err("expected a generator name"),
                }
            }
        }
        let mut relators = Vec::new();
        if self.eat('|') {
            self.skip_ws();
            if self.peek() != Some('>') {
                relators.push(self.relation(&names)?);
                while self.eat(',') {
                    relators.push(self.relation(&names)?);
                }
            }
        }
        self.expect('>')?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Presentation::with_names(names, relators)
    }

    fn relation(&mut self, names: &[String]) -> Result<Word, PresentationError> {
        let lhs = self.word(names)?;
        if self.eat('=') {
            let rhs = self.word(names)?;
            Ok(Word([lhs.0, rhs.inverse().0].concat()))
        } else {
            Ok(lhs)
        }
    }

    fn word(&mut self, names: &[String]) -> Result<Word, PresentationError> {
        let mut letters = Vec::new();
        let mut any = false;
        loop {
            self.skip_ws();
            if self.eat('*') || self.eat('.') {
                continue;
            }
            self.skip_ws();
            let gen = if self.peek() == Some('1') {
                self.pos += 1;
                None
            } else {
                let save = self.pos;
                match self.ident() {
                    Some(n) => match names.iter().position(|x| *x == n) {
                        Some(g) => Some(g),
                        None => {
                            self.pos = save;
                            return Err(PresentationError::UnknownGenerator(n));
                        }
                    },
                    None => break,
                }
            };
            any = true;
            let mut exp = 1;
            if self.eat('^') {
                exp = if self.eat('{') {
                    let e = self.integer()?;
                    self.expect('}')?;
                    e
                } else {
                    self.integer()?
                };
            }
            if let Some(g) = gen {
                let l = Letter::new(g, exp.signum());
                letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
            }
        }
        if !any {
            return self.err("expected a word");
        }
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_text() {
        let p: Presentation = "< a, d | d a d^-1 a d^{-1} a^-1 >".parse().unwrap();
        assert_eq!(p.generator_count, 2);
        assert_eq!(p.relators[0].len(), 6);
        assert_eq!(p.to_string(), "< a, d | d a d^-1 a d^-1 a^-1 >");
        assert_eq!(p.to_string().parse::<Presentation>().unwrap(), p);
    }

    #[test]
    fn relations_powers_and_identity() {
        let p: Presentation = "<x,y | x^3 = y^{2}, x*y.x = 1>".parse().unwrap();
        assert_eq!(p.relators[0], Word::from_powers(&[(0, 3), (1, -2)]));
        assert_eq!(p.relators[1], Word::from_powers(&[(0, 1), (1, 1), (0, 1)]));
        let free: Presentation = "< a, b | >".parse().unwrap();
        assert!(free.relators.is_empty());
        let free2: Presentation = "< a, b >".parse().unwrap();
        assert_eq!(free, free2);
    }

    #[test]
    fn capitals_are_distinct_generators() {
        let p: Presentation = "< a, B, b | a B b >".parse().unwrap();
        assert_eq!(p.generator_count, 3);
        assert_eq!(p.relators[0].letters().iter().map(|l| l.gen).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn errors() {
        assert!(matches!("< a | b >".parse::<Presentation>(), Err(PresentationError::UnknownGenerator(_))));
        assert!(matches!("< a, a | >".parse::<Presentation>(), Err(PresentationError::DuplicateGenerator(_))));
        assert!(matches!("< a | a^ >".parse::<Presentation>(), Err(PresentationError::Syntax { .. })));
        assert!(matches!("a | a".parse::<Presentation>(), Err(PresentationError::Syntax { .. })));
    }

    #[test]
    fn json_mirror() {
        let p: Presentation = "< a, b | a b a^-1 b^-1 >".parse().unwrap();
        let j = p.to_json();
        assert_eq!(j, r#"{"generator_count":2,"relators":[[[0,1],[1,1],[0,-1],[1,-1]]],"names":["a","b"]}"#);
        assert_eq!(parse_presentation(&j).unwrap(), p);
        assert!(Presentation::from_json(r#"{"generator_count":1,"relators":[[[3,1]]],"names":["a"]}"#).is_err());
    }

    #[test]
    fn normalization() {
        let p: Presentation = "< a, b | b a b^-1, a a^-1, a^-1, b a b^-1 a^-1 , a b a^-1 b^-1 >".parse().unwrap();
        let n = p.normalized();
        assert_eq!(n.to_string(), "< a, b | a, b a b^-1 a^-1 >");
    }
}
