use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::perm::{conjugacy_class_reps, SymmetricGroup, MAX_DEGREE};
use crate::grouppres::Presentation;

pub const DEFAULT_MAX_GENERATORS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("{count} generators exceeds the census cap of {cap}; simplify the presentation further")]
    TooManyGenerators { count: usize, cap: usize },
    #[error("degree {0} outside 1..={MAX_DEGREE}")]
    Degree(usize),
    #[error("epimorphism total {total_epis} is not divisible by {order}")]
    NotDivisible { total_epis: u64, order: u64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CensusStats {
    /// Partial assignments extended (class-representative first generator).
    pub nodes: u64,
    /// Partial assignments cut by a relator.
    pub pruned: u64,
    /// Subtrees counted in closed form after the image was already all of S_n.
    pub shortcuts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub degree: usize,
    pub generator_count: usize,
    /// Relator-satisfying assignments.
    pub total_homs: u64,
    /// Surjective ones among them.
    pub total_epis: u64,
    /// Epimorphisms up to conjugation in S_n: `total_epis / n!`.
    pub orbit_count: u64,
    pub elapsed_ms: u64,
    pub stats: CensusStats,
}

const FULL: u32 = u32::MAX;
const UNKNOWN: u32 = u32::MAX - 1;

/// Subgroups of S_n met during the search, with memoized joins `<H, x>`.
struct Lattice<'g> {
    g: &'g SymmetricGroup,
    words: usize,
    masks: Vec<Vec<u64>>,
    gens: Vec<Vec<u16>>,
    joins: Vec<Vec<u32>>,
    index: HashMap<Vec<u64>, u32>,
}

impl<'g> Lattice<'g> {
    fn new(g: &'g SymmetricGroup) -> Self {
        let words = g.order().div_ceil(64);
        let mut l = Lattice { g, words, masks: Vec::new(), gens: Vec::new(), joins: Vec::new(), index: HashMap::new() };
        let trivial = l.intern(&[]);
        debug_assert_eq!(trivial, 0);
        l
    }

    fn intern(&mut self, gens: &[u16]) -> u32 {
        let Some(member) = self.g.closure(gens) else {
            return FULL;
        };
        let mut mask = vec![0u64; self.words];
        for (i, &m) in member.iter().enumerate() {
            if m {
                mask[i / 64] |= 1 << (i % 64);
            }
        }
        if let Some(&id) = self.index.get(&mask) {
            return id;
        }
        let id = self.masks.len() as u32;
        self.index.insert(mask.clone(), id);
        self.masks.push(mask);
        self.gens.push(gens.to_vec());
        self.joins.push(vec![UNKNOWN; self.g.order()]);
        id
    }

    fn join(&mut self, h: u32, x: u16) -> u32 {
        if h == FULL {
            return FULL;
        }
        let cached = self.joins[h as usize][x as usize];
        if cached != UNKNOWN {
            return cached;
        }
        let hu = h as usize;
        let id = if self.masks[hu][x as usize / 64] >> (x % 64) & 1 == 1 {
            h
        } else {
            let mut gens = self.gens[hu].clone();
            gens.push(x);
            self.intern(&gens)
        };
        self.joins[hu][x as usize] = id;
        id
    }
}

struct Search<'a> {
    g: &'a SymmetricGroup,
    k: usize,
    /// Relators (as `(generator, inverse)` letters) checked once generator
    /// `level` is assigned, shortest first.
    at_level: Vec<Vec<Vec<(usize, bool)>>>,
    /// Whether any relator is checked strictly after `level`.
    later: Vec<bool>,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    homs: u64,
    epis: u64,
    nodes: u64,
    pruned: u64,
    shortcuts: u64,
}

impl Tally {
    fn add(mut self, o: Tally) -> Tally {
        self.homs += o.homs;
        self.epis += o.epis;
        self.nodes += o.nodes;
        self.pruned += o.pruned;
        self.shortcuts += o.shortcuts;
        self
    }
}

impl Search<'_> {
    fn holds(&self, level: usize, assign: &[u16]) -> bool {
        self.at_level[level].iter().all(|r| {
            let mut acc = SymmetricGroup::IDENTITY;
            for &(gen, inv) in r {
                let e = if inv { self.g.inv(assign[gen]) } else { assign[gen] };
                acc = self.g.mul(acc, e);
            }
            acc == SymmetricGroup::IDENTITY
        })
    }

    /// Visits assignment `x` to generator `level` on top of `assign[..level]`
    /// whose image generates `h`.
    fn visit(&self, lat: &mut Lattice, level: usize, assign: &mut [u16], h: u32, x: u16, t: &mut Tally) {
        assign[level] = x;
        t.nodes += 1;
        if !self.holds(level, assign) {
            t.pruned += 1;
            return;
        }
        let h2 = lat.join(h, x);
        let rest = (self.k - level - 1) as u32;
        if rest == 0 {
            t.homs += 1;
            t.epis += (h2 == FULL) as u64;
            return;
        }
        if h2 == FULL && !self.later[level] {
            let n = (self.g.order() as u64).pow(rest);
            t.homs += n;
            t.epis += n;
            t.shortcuts += 1;
            return;
        }
        for y in 0..self.g.order() as u16 {
            self.visit(lat, level + 1, assign, h2, y, t);
        }
    }
}

/// Counts homomorphisms and epimorphisms from the presented group onto
/// `S_degree`. The first generator runs over conjugacy class
/// representatives, weighted by class size.
pub fn census(p: &Presentation, degree: usize, max_generators: usize) -> Result<CensusReport, CensusError> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(CensusError::Degree(degree));
    }
    let k = p.generator_count;
    if k > max_generators {
        return Err(CensusError::TooManyGenerators { count: k, cap: max_generators });
    }
    let start = Instant::now();
    let g = SymmetricGroup::new(degree);
    let order = g.order() as u64;

    let mut at_level: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); k];
    let mut relators: Vec<_> = p.relators.iter().map(|r| r.cyclically_reduced()).filter(|r| !r.is_empty()).collect();
    relators.sort_by_key(|r| r.len());
    for r in &relators {
        let top = r.max_gen().expect("nonempty relator");
        at_level[top].push(r.letters().iter().map(|l| (l.gen, l.inv)).collect());
    }
    let later: Vec<bool> = (0..k).map(|lv| at_level[lv + 1..].iter().any(|v| !v.is_empty())).collect();
    let search = Search { g: &g, k, at_level, later };

    let tally = if k == 0 || order == 1 {
        Tally { homs: 1, epis: (order == 1) as u64, ..Tally::default() }
    } else {
        let reps: Vec<(u16, u64)> =
            conjugacy_class_reps(degree).into_iter().map(|(p, size)| (g.index_of(&p) as u16, size as u64)).collect();
        // split on the first two generators so every task is small
        let second: Vec<Option<u16>> = if k >= 2 { (0..order as u16).map(Some).collect() } else { vec![None] };
        let jobs: Vec<((u16, u64), Option<u16>)> =
            reps.iter().flat_map(|&r| second.iter().map(move |&s| (r, s))).collect();
        jobs.par_iter()
            .map_init(
                || Lattice::new(&g),
                |lat, &((x0, weight), x1)| {
                    let mut assign = vec![0u16; k];
                    let mut t = Tally::default();
                    match x1 {
                        None => search.visit(lat, 0, &mut assign, 0, x0, &mut t),
                        Some(x1) => {
                            assign[0] = x0;
                            if search.holds(0, &assign) {
                                let h = lat.join(0, x0);
                                search.visit(lat, 1, &mut assign, h, x1, &mut t);
                            } else {
                                t.pruned += 1;
                            }
                        }
                    }
                    t.homs *= weight;
                    t.epis *= weight;
                    t
                },
            )
            .reduce(Tally::default, Tally::add)
    };

    if tally.epis % order != 0 {
        return Err(CensusError::NotDivisible { total_epis: tally.epis, order });
    }
    Ok(CensusReport {
        degree,
        generator_count: k,
        total_homs: tally.homs,
        total_epis: tally.epis,
        orbit_count: tally.epis / order,
        elapsed_ms: start.elapsed().as_millis() as u64,
        stats: CensusStats { nodes: tally.nodes, pruned: tally.pruned, shortcuts: tally.shortcuts },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> CensusReport {
        census(&s.parse().unwrap(), 5, DEFAULT_MAX_GENERATORS).unwrap()
    }

    #[test]
    fn cyclic_groups_never_surject() {
        for k in 1..=3 {
            let r = run(&format!("< a | a^{k} >"));
            assert_eq!(r.total_epis, 0);
        }
        // elements of order dividing 2 in S5: 1 + 10 + 15
        assert_eq!(run("< a | a^2 >").total_homs, 26);
    }

    #[test]
    fn trivial_and_infinite_cyclic() {
        assert_eq!(run("< | >").total_homs, 1);
        assert_eq!(run("< a | >").total_homs, 120);
        assert_eq!(run("< a | >").total_epis, 0);
    }

    #[test]
    fn refuses_too_many_generators() {
        let p = Presentation::free(5);
        assert_eq!(census(&p, 5, 4), Err(CensusError::TooManyGenerators { count: 5, cap: 4 }));
        assert!(matches!(census(&p, 8, 9), Err(CensusError::Degree(8))));
    }

    #[test]
    fn small_degree() {
        // S3 is generated by pairs in 18 ordered ways; 3 classes up to conjugation
        let r = census(&Presentation::free(2), 3, 4).unwrap();
        assert_eq!(r.total_epis, 18);
        assert_eq!(r.orbit_count, 3);
    }
}
