//! Kauffman bracket state sum and the writhe-normalized Jones polynomial.
//!
//! Smoothing convention: at a classical crossing with ends `[a, b, c, d]`
//! (a = incoming under-end, counterclockwise) the A-smoothing joins a–b
//! and c–d, the B-smoothing joins a–d and b–c. With it the positive kink
//! `X[1,1,2,2]` has bracket `-A^3`. Strands pass straight through virtual
//! crossings.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, Dir, VirtualDiagram};
use crate::poly::Laurent;

pub const DEFAULT_STATE_CAP: usize = 24;

#[derive(Debug, Error)]
pub enum BracketError {
    #[error("{crossings} classical crossings exceed the state-sum cap of {cap}")]
    CapExceeded { crossings: usize, cap: usize },
    #[error("the empty diagram has no bracket")]
    Empty,
    #[error("normalized bracket has odd A-exponent {0}")]
    Parity(i32),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Kauffman bracket, exponents in units of A.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentA(pub Laurent);

/// Jones polynomial, exponents in units of q = t^{1/2}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JonesPoly(pub Laurent);

impl JonesPoly {
    pub fn one() -> Self {
        JonesPoly(Laurent::one())
    }

    /// From `(exponent of t^{1/2}, coefficient)` pairs.
    pub fn from_q_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        JonesPoly(Laurent::from_terms(terms))
    }

    /// Value at t = 1.
    pub fn at_one(&self) -> i64 {
        self.0.eval_one()
    }

    /// `t ↦ t^{-1}`.
    pub fn mirror(&self) -> JonesPoly {
        JonesPoly(self.0.invert_variable())
    }

    /// `(-t^{1/2} - t^{-1/2})^k`, the polynomial of the (k+1)-component unlink.
    pub fn unlink(components: usize) -> JonesPoly {
        let d = Laurent::from_terms([(1, -1), (-1, -1)]);
        JonesPoly(d.pow(components.saturating_sub(1) as u32))
    }
}

impl fmt::Display for JonesPoly {
    /// Ascending powers of t with half-integer exponents written `t^{k/2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        for (i, (q, c)) in self.0.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let power = match q {
                0 => String::new(),
                2 => "t".to_string(),
                q if q % 2 == 0 => format!("t^{{{}}}", q / 2),
                q => format!("t^{{{q}/2}}"),
            };
            if power.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                f.write_str(&power)?;
            } else {
                write!(f, "{mag}{power}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for LaurentA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.0.terms().enumerate() {
            let mag = c.unsigned_abs();
            let sep = match (i, c < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            f.write_str(sep)?;
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (e, 1) => write!(f, "A^{{{e}}}")?,
                (e, m) => write!(f, "{m}A^{{{e}}}")?,
            }
        }
        Ok(())
    }
}

/// Precomputed loop structure: segments are maximal strand runs through
/// virtual crossings; classical crossings glue their four segments.
struct StateSpace {
    segments: usize,
    /// Per classical crossing the segment of each ccw position.
    crossings: Vec<[u16; 4]>,
    free_loops: usize,
}

impl StateSpace {
    fn new(d: &VirtualDiagram) -> Self {
        let mut edges: Vec<u32> = d.edges().into_iter().collect();
        edges.sort_unstable();
        let idx = |e: u32| edges.binary_search(&e).unwrap();
        let mut uf = UnionFind::new(edges.len());
        for c in d.crossings.iter().filter(|c| !c.is_classical()) {
            uf.union(idx(c.ccw[0].0), idx(c.ccw[2].0));
            uf.union(idx(c.ccw[1].0), idx(c.ccw[3].0));
        }
        let mut seg_of = vec![usize::MAX; edges.len()];
        let mut segments = 0;
        for i in 0..edges.len() {
            let r = uf.find(i);
            if seg_of[r] == usize::MAX {
                seg_of[r] = segments;
                segments += 1;
            }
            seg_of[i] = seg_of[r];
        }
        let crossings = d
            .crossings
            .iter()
            .filter(|c| c.is_classical())
            .map(|c| {
                let mut s = [0u16; 4];
                for (p, slot) in s.iter_mut().enumerate() {
                    debug_assert!(p != 0 || c.ccw[0].1 == Dir::In);
                    *slot = seg_of[idx(c.ccw[p].0)] as u16;
                }
                s
            })
            .collect();
        StateSpace { segments, crossings, free_loops: d.free_loops }
    }

    /// Loop count of one state; bit k set = B-smoothing at crossing k.
    fn loops(&self, state: u64, uf: &mut UnionFind) -> usize {
        uf.reset();
        let mut comps = self.segments;
        for (k, s) in self.crossings.iter().enumerate() {
            let (p, q) = if state >> k & 1 == 0 {
                ((s[0], s[1]), (s[2], s[3]))
            } else {
                ((s[0], s[3]), (s[1], s[2]))
            };
            if uf.union(p.0 as usize, p.1 as usize) {
                comps -= 1;
            }
            if uf.union(q.0 as usize, q.1 as usize) {
                comps -= 1;
            }
        }
        comps + self.free_loops
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// `hist[b][l]` = number of states with `b` B-smoothings and `l` loops.
fn state_histogram(space: &StateSpace) -> Vec<Vec<u64>> {
    let c = space.crossings.len();
    let max_loops = space.segments + space.free_loops + 1;
    let total: u64 = 1 << c;
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let empty = || vec![vec![0u64; max_loops + 1]; c + 1];
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut hist = empty();
            let mut uf = UnionFind::new(space.segments);
            let end = ((k + 1) * CHUNK).min(total);
            for state in k * CHUNK..end {
                let l = space.loops(state, &mut uf);
                hist[state.count_ones() as usize][l] += 1;
            }
            hist
        })
        .reduce(empty, |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
            a
        })
}

pub fn kauffman_bracket(d: &VirtualDiagram) -> Result<LaurentA, BracketError> {
    kauffman_bracket_capped(d, DEFAULT_STATE_CAP)
}

/// `Σ_states A^{#A - #B} δ^{loops - 1}` with `δ = -A^2 - A^{-2}`.
pub fn kauffman_bracket_capped(d: &VirtualDiagram, cap: usize) -> Result<LaurentA, BracketError> {
    d.check()?;
    let c = d.classical_count();
    if c > cap || c > 62 {
        return Err(BracketError::CapExceeded { crossings: c, cap });
    }
    if d.crossings.is_empty() && d.free_loops == 0 {
        return Err(BracketError::Empty);
    }
    let space = StateSpace::new(d);
    let hist = state_histogram(&space);
    let delta = Laurent::from_terms([(2, -1), (-2, -1)]);
    let max_loops = hist[0].len();
    let delta_pow: Vec<Laurent> = (0..max_loops as u32).map(|k| delta.pow(k)).collect();
    let mut out = Laurent::zero();
    for (b, row) in hist.iter().enumerate() {
        let a_exp = c as i32 - 2 * b as i32;
        for (loops, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            debug_assert!(loops >= 1);
            let term = delta_pow[loops - 1].shift(a_exp);
            out += &(&term * count as i64);
        }
    }
    Ok(LaurentA(out))
}

pub fn jones(d: &VirtualDiagram) -> Result<JonesPoly, BracketError> {
    jones_capped(d, DEFAULT_STATE_CAP)
}

/// `(-A^3)^{-w} ⟨d⟩` under `A = t^{-1/4}`, i.e. `A^k ↦ q^{-k/2}`.
pub fn jones_capped(d: &VirtualDiagram, cap: usize) -> Result<JonesPoly, BracketError> {
    let br = kauffman_bracket_capped(d, cap)?;
    normalize(&br, d.writhe())
}

pub fn normalize(br: &LaurentA, writhe: i32) -> Result<JonesPoly, BracketError> {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let f = &br.0.shift(-3 * writhe) * sign;
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        if e % 2 != 0 {
            return Err(BracketError::Parity(e));
        }
        terms.push((-e / 2, c));
    }
    Ok(JonesPoly(Laurent::from_terms(terms)))
}
