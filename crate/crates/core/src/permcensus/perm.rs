use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grouppres::Word;

pub const MAX_DEGREE: usize = 7;

/// Permutation of `{0..n-1}`; `images[i]` is the image of `i`.
///
/// Products compose left then right: `(p * q)(i) = q(p(i))`, so a word is
/// evaluated by applying its letters in reading order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    pub images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u8).collect() }
    }

    /// `None` unless `images` is a bijection on `0..len`.
    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return None;
            }
        }
        Some(Perm { images })
    }

    /// Product of disjoint or overlapping cycles in degree `n`; cycles are
    /// applied left to right.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Self {
        let mut p = Perm::identity(n);
        for cyc in cycles {
            let mut c = Perm::identity(n);
            for k in 0..cyc.len() {
                c.images[cyc[k] as usize] = cyc[(k + 1) % cyc.len()];
            }
            p = p.then(&c);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Cycle lengths in descending order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// Cycle notation, fixed points omitted: `(0 1 2)(3 4)`, `()` for identity.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for s in 0..n {
            if seen[s] || self.images[s] as usize == s {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut i = s;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{i}")?;
                i = self.images[i] as usize;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Product of the word's letters under `assignment`, in reading order.
pub fn evaluate_word(w: &Word, assignment: &[Perm]) -> Perm {
    let n = assignment.first().map_or(0, Perm::degree);
    let mut acc = Perm::identity(n);
    for l in w.letters() {
        let g = &assignment[l.gen];
        acc = if l.inv { acc.then(&g.inverse()) } else { acc.then(g) };
    }
    acc
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// `S_n` with elements numbered by lexicographic rank of their image lists.
pub struct SymmetricGroup {
    n: usize,
    order: usize,
    elements: Vec<Perm>,
    /// `mul[a * order + b]` is `a` then `b`.
    mul: Vec<u16>,
    inv: Vec<u16>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_DEGREE, "degree {n} exceeds {MAX_DEGREE}");
        let order = factorial(n);
        let elements: Vec<Perm> = (0..order).map(|r| unrank(n, r)).collect();
        let mut mul = vec![0u16; order * order];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul[a * order + b] = rank(&pa.then(pb)) as u16;
            }
        }
        let inv = elements.iter().map(|p| rank(&p.inverse()) as u16).collect();
        SymmetricGroup { n, order, elements, mul, inv }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> usize {
        rank(p)
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub const IDENTITY: u16 = 0;

    /// Elements of the subgroup generated by `gens`, as a membership mask.
    /// Stops early once more than half the group is reached, returning
    /// `None` to mean the whole group.
    pub fn closure(&self, gens: &[u16]) -> Option<Vec<bool>> {
        let mut member = vec![false; self.order];
        member[Self::IDENTITY as usize] = true;
        let mut stack = vec![Self::IDENTITY];
        let mut count = 1;
        if 2 * count > self.order {
            return None;
        }
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y as usize] {
                    member[y as usize] = true;
                    count += 1;
                    if 2 * count > self.order {
                        return None;
                    }
                    stack.push(y);
                }
            }
        }
        Some(member)
    }
}

fn rank(p: &Perm) -> usize {
    let n = p.images.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = p.images[i + 1..].iter().filter(|&&x| x < p.images[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

fn unrank(n: usize, mut r: usize) -> Perm {
    let mut digits = vec![0; n];
    for i in (0..n).rev() {
        digits[i] = r % (n - i);
        r /= n - i;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    Perm { images: digits.into_iter().map(|d| pool.remove(d)).collect() }
}

/// Whether `gens` generate all of `S_n`.
pub fn generates_full(gens: &[Perm], n: usize) -> bool {
    if n <= 1 {
        return true;
    }
    let order = factorial(n);
    let mut member = std::collections::HashSet::new();
    let id = Perm::identity(n);
    member.insert(id.clone());
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.then(g);
            if member.insert(y.clone()) {
                if 2 * member.len() > order {
                    return true;
                }
                stack.push(y);
            }
        }
    }
    false
}

/// Partitions of `n` in descending lexicographic order.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(rest)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One representative per conjugacy class of `S_n` (cycles on consecutive
/// points, one class per partition) with the class size.
pub fn conjugacy_class_reps(n: usize) -> Vec<(Perm, usize)> {
    partitions(n)
        .into_iter()
        .map(|parts| {
            let mut images: Vec<u8> = Vec::with_capacity(n);
            let mut start = 0u8;
            let mut centralizer = 1;
            let mut mult = std::collections::BTreeMap::new();
            for &k in &parts {
                for j in 0..k as u8 {
                    images.push(start + (j + 1) % k as u8);
                }
                start += k as u8;
                *mult.entry(k).or_insert(0usize) += 1;
            }
            for (&k, &m) in &mult {
                centralizer *= k.pow(m as u32) * factorial(m);
            }
            (Perm { images }, factorial(n) / centralizer)
        })
        .collect()
}
