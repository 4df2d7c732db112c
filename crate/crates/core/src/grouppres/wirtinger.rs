use std::collections::BTreeMap;

use crate::diagram::{Dir, EdgeId, VirtualDiagram};

use super::presentation::{default_names, Presentation};
use super::word::{Letter, Word};

/// Arc index of every edge. Arcs continue through virtual crossings and
/// over-passages; they are numbered by their smallest edge.
pub fn arcs(d: &VirtualDiagram) -> BTreeMap<EdgeId, usize> {
    let mut parent: BTreeMap<EdgeId, EdgeId> = d.edges().into_iter().map(|e| (e, e)).collect();
    fn find(p: &mut BTreeMap<EdgeId, EdgeId>, mut e: EdgeId) -> EdgeId {
        while p[&e] != e {
            let up = p[&p[&e]];
            p.insert(e, up);
            e = up;
        }
        e
    }
    for c in &d.crossings {
        let through: &[usize] = if c.is_classical() { &[c.second_in()] } else { &[0, 1] };
        for &p in through {
            let (a, b) = (find(&mut parent, c.ccw[p].0), find(&mut parent, c.ccw[(p + 2) % 4].0));
            // keep the smaller root so numbering by smallest edge is direct
            if a < b {
                parent.insert(b, a);
            } else if b < a {
                parent.insert(a, b);
            }
        }
    }
    let edges: Vec<EdgeId> = parent.keys().copied().collect();
    let mut index: BTreeMap<EdgeId, usize> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for e in edges {
        let r = find(&mut parent, e);
        let n = index.len();
        let a = *index.entry(r).or_insert(n);
        out.insert(e, a);
    }
    out
}

/// Wirtinger presentation: one generator per arc, then one per free loop;
/// one relator per classical crossing in crossing order. With over-arc `o`
/// and under-arcs `u` (incoming), `v` (outgoing) the relator is
/// `v^-1 o u o^-1` at positive and `v^-1 o^-1 u o` at negative crossings.
/// Relators are not reduced, so kinks give trivial relators.
pub fn wirtinger(d: &VirtualDiagram) -> Presentation {
    let arc = arcs(d);
    let n_arcs = arc.values().copied().max().map_or(0, |m| m + 1);
    let mut relators = Vec::new();
    for c in d.crossings.iter().filter(|c| c.is_classical()) {
        debug_assert_eq!(c.ccw[0].1, Dir::In);
        let u = arc[&c.ccw[0].0];
        let v = arc[&c.ccw[2].0];
        let o = arc[&c.ccw[1].0];
        let e = if c.sign() == Some(1) { 1 } else { -1 };
        relators.push(Word(vec![Letter::new(v, -1), Letter::new(o, e), Letter::new(u, 1), Letter::new(o, -e)]));
    }
    let count = n_arcs + d.free_loops;
    Presentation { generator_count: count, relators, names: default_names(count) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn unknot_and_loops() {
        let p = wirtinger(&parse_pd("PD[O]").unwrap());
        assert_eq!((p.generator_count, p.relators.len()), (1, 0));
        let p = wirtinger(&parse_pd("PD[O, O]").unwrap());
        assert_eq!(p.generator_count, 2);
    }

    #[test]
    fn kink_relator_is_trivial() {
        let p = wirtinger(&parse_pd("PD[X[1,1,2,2]]").unwrap());
        assert_eq!(p.generator_count, 1);
        assert_eq!(p.relators.len(), 1);
        assert!(p.relators[0].cyclically_reduced().is_empty());
    }

    #[test]
    fn trefoil_arcs() {
        let d = parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]").unwrap();
        let a = arcs(&d);
        assert_eq!(a.values().max(), Some(&2));
        let p = wirtinger(&d);
        assert_eq!(p.relators.len(), 3);
        assert!(p.relators.iter().all(|r| r.len() == 4));
    }

    #[test]
    fn virtual_crossings_do_not_cut_arcs() {
        // virtual trefoil: two classical crossings, two arcs
        let d = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], V[5,2,6,3]]").unwrap();
        assert_eq!(wirtinger(&d).generator_count, 2);
    }
}
