//! Layered stacks of a diagram.
//!
//! Every edge is replaced by `m` parallel cables, layer 1 offset furthest
//! to the left of the strand direction, and every crossing by an `m × m`
//! grid. Between different layers the lower-numbered layer passes over;
//! within a layer the base crossing is copied, switched when that layer
//! carries a `-`. Virtual crossings become all-virtual grids.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Crossing, CrossingKind, DiagramError, Dir, EdgeId, End, VirtualDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LayerSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl LayerSign {
    pub fn value(self) -> i32 {
        match self {
            LayerSign::Plus => 1,
            LayerSign::Minus => -1,
        }
    }
}

/// Layer signs, top layer first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StackSequence(Vec<LayerSign>);

#[derive(Debug, Error)]
pub enum StackError {
    #[error("empty stack sequence")]
    Empty,
    #[error("illegal character {0:?} in stack sequence (only '+' and '-')")]
    IllegalChar(char),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl StackSequence {
    pub fn new(signs: Vec<LayerSign>) -> Result<Self, StackError> {
        if signs.is_empty() {
            return Err(StackError::Empty);
        }
        Ok(StackSequence(signs))
    }

    pub fn layers(&self) -> usize {
        self.0.len()
    }

    pub fn signs(&self) -> &[LayerSign] {
        &self.0
    }

    /// Sign of layer `i` (1-based).
    pub fn sign(&self, i: usize) -> LayerSign {
        self.0[i - 1]
    }

    /// Sum of layer signs; the stack's writhe is this times the base writhe.
    pub fn signed_sum(&self) -> i32 {
        self.0.iter().map(|s| s.value()).sum()
    }
}

impl FromStr for StackSequence {
    type Err = StackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let signs = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(LayerSign::Plus),
                '-' | '−' => Ok(LayerSign::Minus),
                other => Err(StackError::IllegalChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        StackSequence::new(signs)
    }
}

pub fn parse_stack_sequence(text: &str) -> Result<StackSequence, StackError> {
    text.parse()
}

impl fmt::Display for StackSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                LayerSign::Plus => "+",
                LayerSign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

/// Provenance of one crossing of a stack diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridCell {
    pub base: usize,
    /// Layer of the cable along the base crossing's position-0 strand.
    pub first: usize,
    /// Layer of the cable along the other strand.
    pub second: usize,
    /// `ccw[q]` of the grid crossing sits at geometric slot `(q + rot) % 4`,
    /// slots being the base crossing's positions.
    pub rot: usize,
}

#[derive(Debug, Clone)]
pub struct Stack {
    pub diagram: VirtualDiagram,
    pub cells: Vec<GridCell>,
    pub layers: usize,
}

/// The stack diagram of `d` for the given layer sequence.
pub fn build_stack(d: &VirtualDiagram, s: &StackSequence) -> Result<VirtualDiagram, StackError> {
    Ok(build_stack_detailed(d, s)?.diagram)
}

pub fn build_stack_detailed(d: &VirtualDiagram, s: &StackSequence) -> Result<Stack, StackError> {
    d.check()?;
    let m = s.layers();
    let mut base_edges: Vec<EdgeId> = d.edges().into_iter().collect();
    base_edges.sort_unstable();
    let rank = |e: EdgeId| base_edges.binary_search(&e).expect("edge of diagram");
    // Cable `layer` (1-based) of base edge `e`: segment 0 is the external
    // run up to the next grid, segments 1.. are the runs inside that grid.
    let id = |e: EdgeId, layer: usize, seg: usize| -> EdgeId {
        ((rank(e) * m + (layer - 1)) * m + seg + 1) as EdgeId
    };

    let mut crossings = Vec::with_capacity(d.crossings.len() * m * m);
    let mut cells = Vec::with_capacity(d.crossings.len() * m * m);
    for (ci, c) in d.crossings.iter().enumerate() {
        // Geometry: position 0 at the bottom, the first strand heading up;
        // slots S, E, N, W are base positions 0, 1, 2, 3.
        let e_in0 = c.ccw[0].0;
        let e_out0 = c.ccw[2].0;
        let p_in = c.second_in();
        let e_in1 = c.ccw[p_in].0;
        let e_out1 = c.ccw[(p_in + 2) % 4].0;
        let heading_east = p_in == 3;

        // Order in which each cable meets the other strand's cables.
        // First strand cable i heads north: layer 1 is furthest west.
        // Second strand heading east has layer 1 furthest north, heading
        // west it has layer 1 furthest south.
        let north_rank = |j: usize| if heading_east { m + 1 - j } else { j };
        // k-th crossing (0-based) met by first-strand cable i: second-strand
        // cables sorted by north rank ascending.
        let first_step = |j: usize| north_rank(j) - 1;
        // Second-strand cable j meets first-strand cables west→east if
        // heading east, east→west otherwise.
        let second_step = |i: usize| if heading_east { i - 1 } else { m - i };

        for i in 1..=m {
            for j in 1..=m {
                let t0 = first_step(j);
                let t1 = second_step(i);
                let s_in = End(id(e_in0, i, t0), Dir::In);
                let s_out = if t0 + 1 < m {
                    End(id(e_in0, i, t0 + 1), Dir::Out)
                } else {
                    End(id(e_out0, i, 0), Dir::Out)
                };
                let q_in = End(id(e_in1, j, t1), Dir::In);
                let q_out = if t1 + 1 < m {
                    End(id(e_in1, j, t1 + 1), Dir::Out)
                } else {
                    End(id(e_out1, j, 0), Dir::Out)
                };
                // slots S, E, N, W
                let slots = if heading_east {
                    [s_in, q_out, s_out, q_in]
                } else {
                    [s_in, q_in, s_out, q_out]
                };
                let (kind, rot) = match c.kind {
                    CrossingKind::Virtual => (CrossingKind::Virtual, 0),
                    CrossingKind::Classical => {
                        let first_over = if i != j {
                            i < j
                        } else {
                            s.sign(i) == LayerSign::Minus
                        };
                        let rot = if first_over { p_in } else { 0 };
                        (CrossingKind::Classical, rot)
                    }
                };
                let ccw = [slots[rot], slots[(rot + 1) % 4], slots[(rot + 2) % 4], slots[(rot + 3) % 4]];
                crossings.push(Crossing { kind, ccw });
                cells.push(GridCell { base: ci, first: i, second: j, rot });
            }
        }
    }
    let diagram = VirtualDiagram::new(crossings, d.free_loops * m)?;
    Ok(Stack { diagram, cells, layers: m })
}

impl Stack {
    /// The crossings of one layer with base edge labels restored. Equals
    /// the base diagram for a `+` layer and its vertical reflection for `-`.
    pub fn layer_crossings(&self, base: &VirtualDiagram, layer: usize) -> Vec<Crossing> {
        self.cells
            .iter()
            .zip(&self.diagram.crossings)
            .filter(|(cell, _)| cell.first == layer && cell.second == layer)
            .map(|(cell, x)| {
                let b = &base.crossings[cell.base];
                let mut ccw = b.ccw;
                for (q, slot) in ccw.iter_mut().enumerate() {
                    *slot = b.ccw[(q + cell.rot) % 4];
                }
                Crossing { kind: x.kind, ccw }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const TREFOIL: &str = "PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]";
    const VIRTUAL_TREFOIL: &str = "PD[X[1,4,2,5], X[3,6,4,1], V[5,2,6,3]]";

    #[test]
    fn sequences() {
        let vd: StackSequence = "+-".parse().unwrap();
        assert_eq!(vd.signs(), &[LayerSign::Plus, LayerSign::Minus]);
        let dd: StackSequence = "++".parse().unwrap();
        assert_eq!(dd.signs(), &[LayerSign::Plus, LayerSign::Plus]);
        assert!(matches!("+*".parse::<StackSequence>(), Err(StackError::IllegalChar('*'))));
        assert!(matches!("".parse::<StackSequence>(), Err(StackError::Empty)));
        assert_eq!(vd.to_string(), "+-");
    }

    #[test]
    fn unknot_stack_is_unlink() {
        let d = parse_pd("PD[O]").unwrap();
        let s = build_stack(&d, &"++".parse().unwrap()).unwrap();
        assert_eq!(s.free_loops, 2);
        assert!(s.crossings.is_empty());
        assert_eq!(s.components(), 2);
    }

    #[test]
    fn counts_and_writhe() {
        for pd in [TREFOIL, VIRTUAL_TREFOIL, "PD[X[1,1,2,2]]"] {
            let d = parse_pd(pd).unwrap();
            for seq in ["+", "-", "+-", "-+", "++", "--", "+-+", "---", "++-"] {
                let s: StackSequence = seq.parse().unwrap();
                let m = s.layers();
                let st = build_stack(&d, &s).unwrap();
                assert_eq!(st.classical_count(), m * m * d.classical_count());
                assert_eq!(st.virtual_count(), m * m * d.virtual_count());
                assert_eq!(st.components(), m * d.components(), "{pd} {seq}");
                assert_eq!(st.writhe(), s.signed_sum() * d.writhe(), "{pd} {seq}");
            }
        }
    }

    #[test]
    fn layers_are_copies_or_reflections() {
        let d = parse_pd(VIRTUAL_TREFOIL).unwrap();
        let s: StackSequence = "+-+".parse().unwrap();
        let st = build_stack_detailed(&d, &s).unwrap();
        let v = d.vertical_reflect();
        for layer in 1..=3 {
            let want = if s.sign(layer) == LayerSign::Plus { &d } else { &v };
            assert_eq!(&st.layer_crossings(&d, layer), &want.crossings);
        }
    }

    #[test]
    fn inter_layer_pairs_cancel() {
        let d = parse_pd(TREFOIL).unwrap();
        let st = build_stack_detailed(&d, &"+++".parse().unwrap()).unwrap();
        for (a, ca) in st.cells.iter().zip(&st.diagram.crossings) {
            if a.first == a.second {
                continue;
            }
            let (b, cb) = st
                .cells
                .iter()
                .zip(&st.diagram.crossings)
                .find(|(b, _)| b.base == a.base && b.first == a.second && b.second == a.first)
                .unwrap();
            assert_eq!(b.base, a.base);
            assert_eq!(ca.sign().unwrap(), -cb.sign().unwrap());
        }
    }

    #[test]
    fn stack_of_reflection_matches_reversed_signs() {
        let d = parse_pd(VIRTUAL_TREFOIL).unwrap();
        let a = build_stack(&d, &"-+".parse().unwrap()).unwrap();
        let b = build_stack(&d.vertical_reflect(), &"+-".parse().unwrap()).unwrap();
        assert!(a.isomorphic(&b));
    }

    #[test]
    fn planar_shadow_stays_planar() {
        let d = parse_pd(TREFOIL).unwrap();
        let st = build_stack(&d, &"++".parse().unwrap()).unwrap();
        let v = st.crossings.len() as i64;
        let e = 2 * v;
        assert_eq!(v - e + st.face_count() as i64, 2);
    }

    #[test]
    fn deterministic_labels() {
        let d = parse_pd(TREFOIL).unwrap();
        let s: StackSequence = "+-".parse().unwrap();
        assert_eq!(build_stack(&d, &s).unwrap(), build_stack(&d, &s).unwrap());
    }
}
