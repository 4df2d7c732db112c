#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use stacklab::diagram::{Crossing, Dir, EdgeId, End, VirtualDiagram};
use stacklab::grouppres::Presentation;
use stacklab::kishino::KishinoLabel;
use stacklab::parse_diagram;
use stacklab::permcensus::{factorial, generates_full, Perm, SymmetricGroup};

pub fn fixture(label: KishinoLabel) -> VirtualDiagram {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{}.json", label.name()));
    parse_diagram(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Epimorphism orbits of the free group of rank 2 onto S_n, by testing
/// every ordered pair of permutations for generation.
pub fn free2_oracle(n: usize) -> u64 {
    let g = SymmetricGroup::new(n);
    let elems: Vec<Perm> = (0..g.order()).map(|i| g.element(i).clone()).collect();
    let mut epis = 0u64;
    for a in &elems {
        for b in &elems {
            if generates_full(&[a.clone(), b.clone()], n) {
                epis += 1;
            }
        }
    }
    assert_eq!(epis % factorial(n) as u64, 0);
    epis / factorial(n) as u64
}

/// `(homs, epis)` from a presentation to S_n, assigning generators one at
/// a time and solving any relator left with a single unknown occurrence.
/// Shares nothing with the census search beyond the group table.
pub fn raw_hom_count(p: &Presentation, n: usize) -> (u64, u64) {
    let g = SymmetricGroup::new(n);
    let rels: Vec<Vec<(usize, bool)>> =
        p.relators.iter().map(|r| r.letters().iter().map(|l| (l.gen, l.inv)).collect()).collect();
    let mut a: Vec<Option<u16>> = vec![None; p.generator_count];
    let (mut homs, mut epis) = (0, 0);
    go(&g, &rels, &mut a, &mut homs, &mut epis);
    (homs, epis)
}

fn letter(g: &SymmetricGroup, a: &[Option<u16>], (x, inv): (usize, bool)) -> u16 {
    let e = a[x].unwrap();
    if inv {
        g.inv(e)
    } else {
        e
    }
}

fn product(g: &SymmetricGroup, a: &[Option<u16>], r: &[(usize, bool)]) -> u16 {
    r.iter().fold(SymmetricGroup::IDENTITY, |acc, &l| g.mul(acc, letter(g, a, l)))
}

fn go(g: &SymmetricGroup, rels: &[Vec<(usize, bool)>], a: &mut Vec<Option<u16>>, homs: &mut u64, epis: &mut u64) {
    let mut forced = Vec::new();
    let consistent = 'prop: loop {
        let mut changed = false;
        for r in rels {
            let unknown: Vec<usize> = r.iter().filter(|l| a[l.0].is_none()).map(|l| l.0).collect();
            if unknown.is_empty() {
                if product(g, a, r) != SymmetricGroup::IDENTITY {
                    break 'prop false;
                }
            } else if unknown.len() == 1 {
                // pre · x^e · post = 1  ⇒  x^e = pre⁻¹ post⁻¹
                let i = r.iter().position(|l| a[l.0].is_none()).unwrap();
                let pre = product(g, a, &r[..i]);
                let post = product(g, a, &r[i + 1..]);
                let xe = g.mul(g.inv(pre), g.inv(post));
                a[r[i].0] = Some(if r[i].1 { g.inv(xe) } else { xe });
                forced.push(r[i].0);
                changed = true;
            }
        }
        if !changed {
            break true;
        }
    };
    if consistent {
        // branch on the unknown generator occurring in the most relators
        // that have exactly two unknown occurrences
        let unknown: Vec<usize> = (0..a.len()).filter(|&x| a[x].is_none()).collect();
        let pick = unknown.iter().copied().max_by_key(|&x| {
            rels.iter()
                .filter(|r| {
                    let u: Vec<usize> = r.iter().filter(|l| a[l.0].is_none()).map(|l| l.0).collect();
                    u.len() == 2 && u.contains(&x)
                })
                .count()
        });
        match pick {
            None => {
                *homs += 1;
                let gens: Vec<Perm> = a.iter().map(|v| g.element(v.unwrap() as usize).clone()).collect();
                if generates_full(&gens, g.degree()) {
                    *epis += 1;
                }
            }
            Some(x) => {
                for v in 0..g.order() as u16 {
                    a[x] = Some(v);
                    go(g, rels, a, homs, epis);
                }
                a[x] = None;
            }
        }
    }
    for f in forced {
        a[f] = None;
    }
}

/// Closure of a random word in classical and virtual braid generators on
/// `strands` strands.
pub fn random_braid_closure<R: Rng>(rng: &mut R, strands: usize, letters: usize) -> VirtualDiagram {
    let mut next: EdgeId = 1;
    let start: Vec<EdgeId> = (0..strands as EdgeId).map(|i| i + 1).collect();
    next += strands as EdgeId;
    let mut pos = start.clone();
    let mut crossings = Vec::new();
    for _ in 0..letters {
        let i = rng.gen_range(0..strands - 1);
        let (a, b) = (pos[i], pos[i + 1]);
        let (c, d) = (next, next + 1);
        next += 2;
        // ccw from the lower left: a in, b in, c out (upper right), d out
        let ends = [End(a, Dir::In), End(b, Dir::In), End(c, Dir::Out), End(d, Dir::Out)];
        crossings.push(match rng.gen_range(0..3) {
            0 => Crossing::classical(ends),
            1 => Crossing::classical([ends[1], ends[2], ends[3], ends[0]]),
            _ => Crossing::virtual_(ends),
        });
        pos[i] = d;
        pos[i + 1] = c;
    }
    // identify each final edge with the starting edge of its position
    let mut free_loops = 0;
    for (p, &last) in pos.iter().enumerate() {
        if last == start[p] {
            free_loops += 1;
            continue;
        }
        for x in &mut crossings {
            for e in &mut x.ccw {
                if e.0 == last {
                    e.0 = start[p];
                }
            }
        }
    }
    VirtualDiagram::new(crossings, free_loops).expect("braid closures are valid diagrams")
}

/// Inserts a Reidemeister I curl on `edge`, under-strand first.
pub fn insert_kink(d: &VirtualDiagram, edge: EdgeId, positive: bool) -> VirtualDiagram {
    let mut out = d.clone();
    let fresh = out.edges().into_iter().max().unwrap_or(0) + 1;
    let (x, y) = (fresh, fresh + 1);
    let head = out
        .crossings
        .iter_mut()
        .flat_map(|c| c.ccw.iter_mut())
        .find(|e| e.0 == edge && e.1 == Dir::In)
        .expect("edge has a head");
    head.0 = y;
    let ccw = if positive {
        [End(edge, Dir::In), End(y, Dir::Out), End(x, Dir::Out), End(x, Dir::In)]
    } else {
        [End(edge, Dir::In), End(x, Dir::In), End(x, Dir::Out), End(y, Dir::Out)]
    };
    out.crossings.push(Crossing::classical(ccw));
    out.check().expect("kink insertion keeps the diagram valid");
    out
}
