use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse. Serialized as `[generator, ±1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, exp: i32) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter { gen, inv: exp < 0 }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    pub fn exp(self) -> i32 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.gen, self.exp()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (gen, exp): (usize, i32) = Deserialize::deserialize(d)?;
        if exp != 1 && exp != -1 {
            return Err(serde::de::Error::custom("letter exponent must be 1 or -1"));
        }
        Ok(Letter::new(gen, exp))
    }
}

/// A word in the free group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::new(g, 1)])
    }

    /// Word from `(generator, exponent)` pairs; exponents may be any integer.
    pub fn from_powers(powers: &[(usize, i32)]) -> Self {
        let mut w = Vec::new();
        for &(g, e) in powers.iter().filter(|p| p.1 != 0) {
            let l = Letter::new(g, e.signum());
            w.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
        }
        Word(w).reduced()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last().is_some_and(|&p| p.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced().0;
        let mut i = 0;
        let mut j = w.len();
        while j - i >= 2 && w[i].cancels(w[j - 1]) {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn occurrences(&self, gen: usize) -> usize {
        self.0.iter().filter(|l| l.gen == gen).count()
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.exp() as i64).sum()
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Replaces every occurrence of `gen` by `image` (and its inverse by
    /// `image⁻¹`), then freely reduces.
    pub fn substitute(&self, gen: usize, image: &Word) -> Word {
        let inv = image.inverse();
        let mut v = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if l.gen == gen {
                v.extend_from_slice(if l.inv { &inv.0 } else { &image.0 });
            } else {
                v.push(l);
            }
        }
        Word(v).reduced()
    }

    /// Renumbers generators; `map[g]` is the new index of `g`.
    pub fn renumbered(&self, map: &[usize]) -> Word {
        Word(self.0.iter().map(|l| Letter { gen: map[l.gen], inv: l.inv }).collect())
    }

    /// Canonical representative of the relator's class under cyclic
    /// rotation and inversion. Assumes a cyclically reduced word.
    pub fn cyclic_canonical(&self) -> Word {
        let inv = self.inverse();
        let mut best = self.clone();
        for w in [self, &inv] {
            for k in 0..w.len().max(1) {
                let r = w.rotated(k);
                if r.0 < best.0 {
                    best = r;
                }
            }
        }
        best
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    /// Runs of equal letters collapse into powers: `a^2 c^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let w = &self.word.0;
        let mut i = 0;
        let mut first = true;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let n = (j - i) as i32 * w[i].exp();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = self.names.get(w[i].gen).map(String::as_str).unwrap_or("?");
            if n == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{n}")?;
            }
            i = j;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: &[(usize, i32)]) -> Word {
        Word::from_powers(p)
    }

    #[test]
    fn reduction() {
        let x = Word(vec![Letter::new(0, 1), Letter::new(1, 1), Letter::new(1, -1), Letter::new(0, -1)]);
        assert!(x.reduced().is_empty());
        // b a c a^-1 b^-1 → c
        let y = w(&[(1, 1), (0, 1), (2, 1), (0, -1), (1, -1)]);
        assert_eq!(y.cyclically_reduced(), w(&[(2, 1)]));
        // a a^-1 cancels even across a power boundary
        assert_eq!(w(&[(0, 2), (0, -3)]), w(&[(0, -1)]));
        assert_eq!(w(&[(0, 1), (1, 0), (0, 1)]), w(&[(0, 2)]));
    }

    #[test]
    fn substitution() {
        // a b a^-1 with a := b c → b c b c^-1 b^-1
        let r = w(&[(0, 1), (1, 1), (0, -1)]);
        let img = w(&[(1, 1), (2, 1)]);
        assert_eq!(r.substitute(0, &img), w(&[(1, 1), (2, 1), (1, 1), (2, -1), (1, -1)]));
    }

    #[test]
    fn canonical_is_rotation_and_inverse_invariant() {
        let r = w(&[(0, 1), (1, 2), (0, -1), (2, 1)]);
        let c = r.cyclic_canonical();
        for k in 0..r.len() {
            assert_eq!(r.rotated(k).cyclic_canonical(), c);
            assert_eq!(r.rotated(k).inverse().cyclic_canonical(), c);
        }
    }

    #[test]
    fn display_powers() {
        let names: Vec<String> = ["a", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(w(&[(0, 2), (1, -1), (0, -2)]).display(&names).to_string(), "a^2 c^-1 a^-2");
        assert_eq!(Word::empty().display(&names).to_string(), "1");
    }
}
