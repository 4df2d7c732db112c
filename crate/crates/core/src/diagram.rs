//! Oriented virtual link diagrams in planar-diagram form.
//!
//! A diagram is a list of 4-valent crossings. Each crossing lists its four
//! edge ends counterclockwise, starting at the incoming end of its
//! distinguished strand: for a classical crossing that is the incoming
//! under-strand end, so the quadruple alone fixes over/under. Virtual
//! crossings carry no over/under data and strands pass straight through
//! them for every invariant computed in this crate.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type EdgeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    In,
    Out,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::In => Dir::Out,
            Dir::Out => Dir::In,
        }
    }
}

/// One edge end at a crossing. Serialized as `[id, "in"|"out"]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct End(pub EdgeId, pub Dir);

impl End {
    pub fn edge(&self) -> EdgeId {
        self.0
    }

    pub fn dir(&self) -> Dir {
        self.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossingKind {
    #[serde(rename = "X")]
    Classical,
    #[serde(rename = "V")]
    Virtual,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub ccw: [End; 4],
}

impl Crossing {
    pub fn classical(ccw: [End; 4]) -> Self {
        Crossing { kind: CrossingKind::Classical, ccw }
    }

    pub fn virtual_(ccw: [End; 4]) -> Self {
        Crossing { kind: CrossingKind::Virtual, ccw }
    }

    pub fn is_classical(&self) -> bool {
        self.kind == CrossingKind::Classical
    }

    /// Position (1 or 3) at which the second strand enters.
    pub fn second_in(&self) -> usize {
        if self.ccw[1].1 == Dir::In {
            1
        } else {
            3
        }
    }

    /// Crossing sign: +1 iff the over-strand enters at position 3.
    /// `None` for virtual crossings.
    pub fn sign(&self) -> Option<i32> {
        match self.kind {
            CrossingKind::Virtual => None,
            CrossingKind::Classical => Some(if self.second_in() == 3 { 1 } else { -1 }),
        }
    }

    /// Sign of the rotation from the position-0 strand's direction to the
    /// other strand's direction (+1 iff the other strand enters at position 1).
    pub fn parity(&self) -> i32 {
        if self.second_in() == 1 {
            1
        } else {
            -1
        }
    }

    /// Over/under interchanged; the quadruple is re-anchored at the new
    /// incoming under-end. Virtual crossings are returned unchanged.
    pub fn switched(&self) -> Crossing {
        if !self.is_classical() {
            return self.clone();
        }
        let s = self.second_in();
        let c = &self.ccw;
        Crossing::classical([c[s], c[(s + 1) % 4], c[(s + 2) % 4], c[(s + 3) % 4]])
    }

    /// Planar mirror image: counterclockwise order reversed, position 0 kept.
    pub fn mirrored(&self) -> Crossing {
        let c = &self.ccw;
        Crossing { kind: self.kind, ccw: [c[0], c[3], c[2], c[1]] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct VirtualDiagram {
    pub crossings: Vec<Crossing>,
    pub free_loops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The edge does not appear exactly twice among crossing ends.
    EdgeCount { edge: EdgeId, count: usize },
    /// The edge appears twice with the same direction.
    EdgeDirection { edge: EdgeId, dir: Dir },
    /// Position 0 must be incoming and position 2 outgoing.
    AnchorDirection { crossing: usize },
    /// Positions 1 and 3 must be one incoming, one outgoing.
    StrandDirection { crossing: usize },
    ZeroEdgeId { crossing: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeCount { edge, count } => {
                write!(f, "edge {edge} appears {count} time(s) among crossing ends, expected 2")
            }
            Violation::EdgeDirection { edge, dir } => {
                let d = if *dir == Dir::In { "incoming" } else { "outgoing" };
                write!(f, "edge {edge} is {d} at both of its ends")
            }
            Violation::AnchorDirection { crossing } => write!(
                f,
                "crossing {crossing}: position 0 must be incoming and position 2 outgoing"
            ),
            Violation::StrandDirection { crossing } => write!(
                f,
                "crossing {crossing}: positions 1 and 3 must be one incoming and one outgoing"
            ),
            Violation::ZeroEdgeId { crossing } => {
                write!(f, "crossing {crossing}: edge ids must be positive")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("PD syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("edge-matching violation: {0}")]
    EdgeMatching(String),
    #[error("ambiguous orientation: {0}")]
    AmbiguousOrientation(String),
    #[error("no consistent orientation: {0}")]
    InconsistentOrientation(String),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("gauss code needs a one-component diagram, got {0} components")]
    NotAKnot(usize),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Where the two ends of an edge sit: `(crossing index, position)`.
#[derive(Debug, Clone, Copy)]
pub struct EdgeEnds {
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

impl VirtualDiagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self, DiagramError> {
        let d = VirtualDiagram { crossings, free_loops };
        d.check()?;
        Ok(d)
    }

    pub fn unknot() -> Self {
        VirtualDiagram { crossings: Vec::new(), free_loops: 1 }
    }

    pub fn check(&self) -> Result<(), DiagramError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(DiagramError::Invalid(v))
        }
    }

    /// All invariant violations; empty iff the diagram is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen: BTreeMap<EdgeId, Vec<Dir>> = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            if c.ccw.iter().any(|e| e.0 == 0) {
                out.push(Violation::ZeroEdgeId { crossing: i });
            }
            if c.ccw[0].1 != Dir::In || c.ccw[2].1 != Dir::Out {
                out.push(Violation::AnchorDirection { crossing: i });
            }
            if c.ccw[1].1 == c.ccw[3].1 {
                out.push(Violation::StrandDirection { crossing: i });
            }
            for e in &c.ccw {
                seen.entry(e.0).or_default().push(e.1);
            }
        }
        for (edge, dirs) in seen {
            if dirs.len() != 2 {
                out.push(Violation::EdgeCount { edge, count: dirs.len() });
            } else if dirs[0] == dirs[1] {
                out.push(Violation::EdgeDirection { edge, dir: dirs[0] });
            }
        }
        out
    }

    pub fn classical_count(&self) -> usize {
        self.crossings.iter().filter(|c| c.is_classical()).count()
    }

    pub fn virtual_count(&self) -> usize {
        self.crossings.len() - self.classical_count()
    }

    pub fn edges(&self) -> BTreeSet<EdgeId> {
        self.crossings.iter().flat_map(|c| c.ccw.iter().map(|e| e.0)).collect()
    }

    /// Tail (outgoing end) and head (incoming end) of every edge.
    /// Assumes a valid diagram.
    pub fn edge_ends(&self) -> HashMap<EdgeId, EdgeEnds> {
        let mut tails = HashMap::new();
        let mut heads = HashMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            for (p, e) in c.ccw.iter().enumerate() {
                match e.1 {
                    Dir::Out => tails.insert(e.0, (i, p)),
                    Dir::In => heads.insert(e.0, (i, p)),
                };
            }
        }
        tails
            .into_iter()
            .map(|(e, tail)| (e, EdgeEnds { tail, head: heads[&e] }))
            .collect()
    }

    /// Strand passages `(crossing, incoming position)` grouped into closed
    /// components, each listed in traversal order. Free loops are not
    /// included. Deterministic: components start at their smallest edge.
    pub fn traversals(&self) -> Vec<Vec<(usize, usize)>> {
        let ends = self.edge_ends();
        let mut edges: Vec<EdgeId> = ends.keys().copied().collect();
        edges.sort_unstable();
        let mut done: BTreeSet<EdgeId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in edges {
            if done.contains(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = start;
            loop {
                done.insert(e);
                let (c, p) = ends[&e].head;
                comp.push((c, p));
                e = self.crossings[c].ccw[(p + 2) % 4].0;
                if e == start {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }

    /// Number of closed components, free loops included.
    pub fn components(&self) -> usize {
        self.traversals().len() + self.free_loops
    }

    /// Sum of classical crossing signs.
    pub fn writhe(&self) -> i32 {
        self.crossings.iter().filter_map(|c| c.sign()).sum()
    }

    /// Every classical crossing switched; same shadow.
    pub fn vertical_reflect(&self) -> VirtualDiagram {
        VirtualDiagram {
            crossings: self.crossings.iter().map(Crossing::switched).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Planar mirror image; over/under assignment kept.
    pub fn horizontal_reflect(&self) -> VirtualDiagram {
        VirtualDiagram {
            crossings: self.crossings.iter().map(Crossing::mirrored).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Same diagram with the given classical crossings switched
    /// (indices into `crossings`).
    pub fn with_switched(&self, which: &[usize]) -> VirtualDiagram {
        let mut d = self.clone();
        for &i in which {
            d.crossings[i] = d.crossings[i].switched();
        }
        d
    }

    /// Signed over/under Gauss code of the classical crossings, e.g.
    /// `O1+U1+` for a positive kink. Traversal starts at the passage the
    /// smallest edge leaves from; labels follow first appearance.
    pub fn gauss_code(&self) -> Result<String, DiagramError> {
        let comps = self.components();
        if comps != 1 {
            return Err(DiagramError::NotAKnot(comps));
        }
        let Some(trav) = self.traversals().into_iter().next() else {
            return Ok(String::new());
        };
        // traversals() starts at the head of the smallest edge; rotate so we
        // start at its tail passage instead.
        let n = trav.len();
        let mut labels: HashMap<usize, usize> = HashMap::new();
        let mut out = String::new();
        for k in 0..n {
            let (c, p) = trav[(k + n - 1) % n];
            let x = &self.crossings[c];
            let Some(sign) = x.sign() else { continue };
            let next = labels.len() + 1;
            let label = *labels.entry(c).or_insert(next);
            let ou = if p == 0 { 'U' } else { 'O' };
            let s = if sign > 0 { '+' } else { '-' };
            out.push_str(&format!("{ou}{label}{s}"));
        }
        Ok(out)
    }

    /// PD text. Orientation is not encoded; use JSON for lossless output.
    pub fn to_pd(&self) -> String {
        let mut items: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                let k = if c.is_classical() { 'X' } else { 'V' };
                let e = &c.ccw;
                format!("{k}[{},{},{},{}]", e[0].0, e[1].0, e[2].0, e[3].0)
            })
            .collect();
        items.extend(std::iter::repeat_n("O".to_string(), self.free_loops));
        format!("PD[{}]", items.join(", "))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        let d: VirtualDiagram = serde_json::from_str(text)?;
        d.check()?;
        Ok(d)
    }

    /// Faces of the ribbon graph given by the crossings' rotation system,
    /// virtual crossings counted as vertices. A connected diagram is
    /// planar iff `V - E + F == 2`.
    pub fn face_count(&self) -> usize {
        let ends = self.edge_ends();
        // Darts: (crossing, position). Leaving a crossing along the edge at
        // position p we arrive at the other end of that edge, then turn to
        // the next position clockwise to keep the face on our left.
        let mut visited = BTreeSet::new();
        let mut faces = 0;
        for c in 0..self.crossings.len() {
            for p in 0..4 {
                if visited.contains(&(c, p)) {
                    continue;
                }
                faces += 1;
                let (mut cc, mut pp) = (c, p);
                while visited.insert((cc, pp)) {
                    let e = self.crossings[cc].ccw[pp];
                    let ee = ends[&e.0];
                    let (oc, op) = if e.1 == Dir::Out { ee.head } else { ee.tail };
                    cc = oc;
                    pp = (op + 3) % 4;
                }
            }
        }
        faces
    }

    /// Abstract isomorphism of diagrams up to edge relabeling and crossing
    /// reordering (rotation of each quadruple must respect the anchor).
    pub fn isomorphic(&self, other: &VirtualDiagram) -> bool {
        if self.free_loops != other.free_loops
            || self.crossings.len() != other.crossings.len()
            || self.classical_count() != other.classical_count()
        {
            return false;
        }
        let ea = self.edge_ends();
        let eb = other.edge_ends();
        let mut cmap: Vec<Option<(usize, usize)>> = vec![None; self.crossings.len()];
        let mut used = vec![false; other.crossings.len()];
        for seed in 0..self.crossings.len() {
            if cmap[seed].is_some() {
                continue;
            }
            let mut matched = false;
            'cand: for cand in 0..other.crossings.len() {
                if used[cand] {
                    continue;
                }
                for rot in 0..4 {
                    let mut trial = cmap.clone();
                    let mut trial_used = used.clone();
                    if grow_iso(self, other, &ea, &eb, seed, cand, rot, &mut trial, &mut trial_used)
                    {
                        cmap = trial;
                        used = trial_used;
                        matched = true;
                        break 'cand;
                    }
                }
            }
            if !matched {
                return false;
            }
        }
        true
    }
}

/// Maps crossing `a0` of `a` to `b0` of `b` with position offset `rot`
/// (`a` position p ↔ `b` position (p + rot) % 4) and propagates along
/// edges. Returns false on any conflict.
#[allow(clippy::too_many_arguments)]
fn grow_iso(
    a: &VirtualDiagram,
    b: &VirtualDiagram,
    ea: &HashMap<EdgeId, EdgeEnds>,
    eb: &HashMap<EdgeId, EdgeEnds>,
    a0: usize,
    b0: usize,
    rot: usize,
    cmap: &mut [Option<(usize, usize)>],
    used: &mut [bool],
) -> bool {
    let mut stack = vec![(a0, b0, rot)];
    while let Some((ca, cb, r)) = stack.pop() {
        match cmap[ca] {
            Some(prev) if prev == (cb, r) => continue,
            Some(_) => return false,
            None => {}
        }
        if used[cb] {
            return false;
        }
        let xa = &a.crossings[ca];
        let xb = &b.crossings[cb];
        if xa.kind != xb.kind {
            return false;
        }
        // Classical anchors are fixed. A virtual crossing has no preferred
        // strand, so an odd rotation (strand swap) is allowed there.
        if xa.is_classical() && r != 0 {
            return false;
        }
        for p in 0..4 {
            if xa.ccw[p].1 != xb.ccw[(p + r) % 4].1 {
                return false;
            }
        }
        cmap[ca] = Some((cb, r));
        used[cb] = true;
        for p in 0..4 {
            let e_a = xa.ccw[p];
            let e_b = xb.ccw[(p + r) % 4];
            let (na, nb) = if e_a.1 == Dir::Out {
                (ea[&e_a.0].head, eb[&e_b.0].head)
            } else {
                (ea[&e_a.0].tail, eb[&e_b.0].tail)
            };
            let r2 = (nb.1 + 4 - na.1) % 4;
            stack.push((na.0, nb.0, r2));
        }
    }
    true
}

/// Parses PD text: `PD[` item (`,` item)* `]` with items `X[a,b,c,d]`,
/// `V[a,b,c,d]` or `O`. For both crossing kinds `a` is the incoming end of
/// the distinguished strand and `c` the outgoing one; the direction of the
/// other strand is inferred from edge matching, falling back to
/// consecutive edge numbering when matching leaves it open.
pub fn parse_pd(text: &str) -> Result<VirtualDiagram, DiagramError> {
    let items = PdParser::new(text).parse()?;
    let mut raw: Vec<(CrossingKind, [EdgeId; 4])> = Vec::new();
    let mut free_loops = 0;
    for it in items {
        match it {
            PdItem::Loop => free_loops += 1,
            PdItem::Cross(kind, e) => raw.push((kind, e)),
        }
    }
    let crossings = orient(&raw)?;
    VirtualDiagram::new(crossings, free_loops)
}

enum PdItem {
    Cross(CrossingKind, [EdgeId; 4]),
    Loop,
}

struct PdParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> PdParser<'a> {
    fn new(text: &'a str) -> Self {
        PdParser { s: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DiagramError> {
        Err(DiagramError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), DiagramError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn number(&mut self) -> Result<EdgeId, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a positive integer");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        match txt.parse::<EdgeId>() {
            Ok(0) => {
                self.pos = start;
                self.err("edge labels must be positive")
            }
            Ok(n) => Ok(n),
            Err(_) => self.err("edge label out of range"),
        }
    }

    fn parse(mut self) -> Result<Vec<PdItem>, DiagramError> {
        self.expect(b'P')?;
        if self.s.get(self.pos) != Some(&b'D') {
            return self.err("expected 'PD['");
        }
        self.pos += 1;
        self.expect(b'[')?;
        let mut items = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
        } else {
            loop {
                items.push(self.item()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b']') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ']'"),
                }
            }
        }
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(items)
    }

    fn item(&mut self) -> Result<PdItem, DiagramError> {
        let kind = match self.peek() {
            Some(b'O') => {
                self.pos += 1;
                return Ok(PdItem::Loop);
            }
            Some(b'X') => CrossingKind::Classical,
            Some(b'V') => CrossingKind::Virtual,
            _ => return self.err("expected X[..], V[..] or O"),
        };
        self.pos += 1;
        self.expect(b'[')?;
        let mut e = [0; 4];
        for (i, slot) in e.iter_mut().enumerate() {
            if i > 0 {
                self.expect(b',')?;
            }
            *slot = self.number()?;
        }
        self.expect(b']')?;
        Ok(PdItem::Cross(kind, e))
    }
}

/// Assigns in/out flags. Positions 0/2 are fixed in/out; per crossing one
/// bit decides whether the second strand enters at position 1 (`false`) or
/// position 3 (`true`). Edge matching yields xor constraints between bits.
fn orient(raw: &[(CrossingKind, [EdgeId; 4])]) -> Result<Vec<Crossing>, DiagramError> {
    let mut occ: BTreeMap<EdgeId, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, (_, e)) in raw.iter().enumerate() {
        for (p, &id) in e.iter().enumerate() {
            occ.entry(id).or_default().push((i, p));
        }
    }
    let bad: Vec<String> = occ
        .iter()
        .filter(|(_, v)| v.len() != 2)
        .map(|(id, v)| format!("edge {id} appears {} time(s)", v.len()))
        .collect();
    if !bad.is_empty() {
        return Err(DiagramError::EdgeMatching(bad.join(", ")));
    }

    // Incoming-ness of an end as (constant, optional variable): In iff
    // const ^ var.
    let is_in = |c: usize, p: usize| -> (bool, Option<usize>) {
        match p {
            0 => (true, None),
            2 => (false, None),
            1 => (true, Some(c)),
            _ => (false, Some(c)),
        }
    };

    let n = raw.len();
    // adjacency: (other crossing, parity k) meaning x_c ^ x_other = k
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut forced: Vec<Option<bool>> = vec![None; n];
    for (id, v) in &occ {
        let (k1, v1) = is_in(v[0].0, v[0].1);
        let (k2, v2) = is_in(v[1].0, v[1].1);
        // need in1 ^ in2 = 1: k1 ^ x1 ^ k2 ^ x2 = 1
        let rhs = !(k1 ^ k2);
        match (v1, v2) {
            (None, None) => {
                if rhs {
                    return Err(DiagramError::EdgeMatching(format!(
                        "edge {id} joins two ends with the same fixed direction"
                    )));
                }
            }
            (Some(c), None) | (None, Some(c)) => {
                if let Some(prev) = forced[c] {
                    if prev != rhs {
                        return Err(DiagramError::InconsistentOrientation(format!(
                            "crossing {c} (edge {id})"
                        )));
                    }
                }
                forced[c] = Some(rhs);
            }
            (Some(a), Some(b)) => {
                if a == b {
                    // positions 1 and 3 of one crossing are always opposite
                    if !rhs {
                        continue;
                    }
                    return Err(DiagramError::InconsistentOrientation(format!(
                        "edge {id} at crossing {a}"
                    )));
                }
                adj[a].push((b, rhs));
                adj[b].push((a, rhs));
            }
        }
    }

    let mut value: Vec<Option<bool>> = vec![None; n];
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<(usize, bool)>> = Vec::new();
    for s in 0..n {
        if class_of[s] != usize::MAX {
            continue;
        }
        // relative values within the class: x_c = x_s ^ rel
        let cid = classes.len();
        let mut members = vec![(s, false)];
        class_of[s] = cid;
        let mut i = 0;
        while i < members.len() {
            let (c, rel) = members[i];
            for &(o, k) in &adj[c] {
                let r = rel ^ k;
                if class_of[o] == cid {
                    let have = members.iter().find(|m| m.0 == o).unwrap().1;
                    if have != r {
                        return Err(DiagramError::InconsistentOrientation(format!(
                            "crossings {c} and {o}"
                        )));
                    }
                } else {
                    class_of[o] = cid;
                    members.push((o, r));
                }
            }
            i += 1;
        }
        classes.push(members);
    }

    for members in &classes {
        let mut base: Option<bool> = None;
        for &(c, rel) in members {
            if let Some(f) = forced[c] {
                let b = f ^ rel;
                if base.is_some_and(|x| x != b) {
                    return Err(DiagramError::InconsistentOrientation(format!("crossing {c}")));
                }
                base = Some(b);
            }
        }
        if base.is_none() {
            base = numbering_vote(raw, members)?;
        }
        let b = base.expect("resolved above");
        for &(c, rel) in members {
            value[c] = Some(b ^ rel);
        }
    }

    Ok(raw
        .iter()
        .zip(value)
        .map(|((kind, e), x)| {
            let x = x.unwrap();
            // x == true: second strand enters at 3
            let (d1, d3) = if x { (Dir::Out, Dir::In) } else { (Dir::In, Dir::Out) };
            Crossing {
                kind: *kind,
                ccw: [End(e[0], Dir::In), End(e[1], d1), End(e[2], Dir::Out), End(e[3], d3)],
            }
        })
        .collect())
}

/// Resolves a class left open by edge matching from consecutive edge
/// numbering: a strand `b`,`d` with `d == b + 1` runs from `b` to `d`.
fn numbering_vote(
    raw: &[(CrossingKind, [EdgeId; 4])],
    members: &[(usize, bool)],
) -> Result<Option<bool>, DiagramError> {
    let mut votes = BTreeSet::new();
    for &(c, rel) in members {
        let e = raw[c].1;
        let (b, d) = (e[1], e[3]);
        // x = true means entering at position 3 (edge d is incoming)
        if d + 1 == b {
            votes.insert(true ^ rel);
        } else if b + 1 == d {
            votes.insert(false ^ rel);
        }
    }
    if votes.len() == 1 {
        return Ok(votes.into_iter().next());
    }
    if votes.is_empty() {
        // wraparound only: the larger label is the incoming one
        for &(c, rel) in members {
            let e = raw[c].1;
            let (b, d) = (e[1], e[3]);
            if b != d {
                votes.insert((d > b) ^ rel);
            }
        }
        if votes.len() == 1 {
            return Ok(votes.into_iter().next());
        }
    }
    let list: Vec<usize> = members.iter().map(|m| m.0).collect();
    Err(DiagramError::AmbiguousOrientation(format!(
        "cannot orient the second strand at crossings {list:?}"
    )))
}

/// Reads either JSON (leading `{`) or PD text.
pub fn parse_diagram(text: &str) -> Result<VirtualDiagram, DiagramError> {
    if text.trim_start().starts_with('{') {
        VirtualDiagram::from_json(text)
    } else {
        parse_pd(text)
    }
}
