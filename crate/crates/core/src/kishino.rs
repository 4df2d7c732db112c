//! The seven Kishino knots, recovered by enumerating over/under choices on
//! one shadow and matching invariant signatures against reference values.
//!
//! The shadow is the connected sum of two virtual trefoil diagrams
//! (4 classical, 2 virtual crossings). Variant masks are written as four
//! characters, the k-th one `1` when the k-th classical crossing (in
//! crossing-list order) of [`base_shadow`] is switched.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::{jones_capped, JonesPoly};
use crate::diagram::{parse_pd, VirtualDiagram};
use crate::expected::ExpectedValues;
use crate::pipeline::{stack_group_census, stack_jones, CensusValue, PipelineError, PipelineOptions};
use crate::stack::StackSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KishinoLabel {
    K,
    #[serde(rename = "K_switch")]
    KSwitch,
    #[serde(rename = "K_alt")]
    KAlt,
    #[serde(rename = "K_v")]
    KV,
    K5,
    K6,
    K7,
}

impl KishinoLabel {
    pub const ALL: [KishinoLabel; 7] = [
        KishinoLabel::K,
        KishinoLabel::KSwitch,
        KishinoLabel::KAlt,
        KishinoLabel::KV,
        KishinoLabel::K5,
        KishinoLabel::K6,
        KishinoLabel::K7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KishinoLabel::K => "K",
            KishinoLabel::KSwitch => "K_switch",
            KishinoLabel::KAlt => "K_alt",
            KishinoLabel::KV => "K_v",
            KishinoLabel::K5 => "K5",
            KishinoLabel::K6 => "K6",
            KishinoLabel::K7 => "K7",
        }
    }
}

impl fmt::Display for KishinoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KishinoLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KishinoLabel::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}

/// Base diagram; writhe 0. It is itself the variant bound to `K`.
pub const BASE_PD: &str = "PD[X[1,4,2,5], X[6,4,7,3], V[5,2,6,3], X[7,10,8,11], X[12,10,1,9], V[11,8,12,9]]";

pub fn base_shadow() -> VirtualDiagram {
    parse_pd(BASE_PD).expect("base diagram is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask(pub u8);

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..4 {
            f.write_str(if self.0 >> k & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Mask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone)]
pub struct Variant {
    pub mask: Mask,
    pub diagram: VirtualDiagram,
}

/// All 16 over/under assignments on the base shadow, by mask value.
pub fn enumerate_variants() -> Vec<Variant> {
    let base = base_shadow();
    let classical: Vec<usize> = (0..base.crossings.len()).filter(|&i| base.crossings[i].is_classical()).collect();
    (0..16u8)
        .map(|m| {
            let which: Vec<usize> = (0..4).filter(|k| m >> k & 1 == 1).map(|k| classical[k]).collect();
            Variant { mask: Mask(m), diagram: base.with_switched(&which) }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantSignature {
    pub jones_self: JonesPoly,
    pub census_vd: CensusValue,
    pub census_dd: CensusValue,
    pub jones_vd: JonesPoly,
    pub jones_dd: JonesPoly,
}

pub const FIELDS: [&str; 5] = ["jones_self", "census_vd", "census_dd", "jones_vd", "jones_dd"];

pub fn signature(d: &VirtualDiagram, opts: &PipelineOptions) -> Result<InvariantSignature, PipelineError> {
    let vd: StackSequence = "+-".parse().expect("literal");
    let dd: StackSequence = "++".parse().expect("literal");
    Ok(InvariantSignature {
        jones_self: jones_capped(d, opts.state_cap)?,
        census_vd: stack_group_census(d, &vd, opts)?.value,
        census_dd: stack_group_census(d, &dd, opts)?.value,
        jones_vd: stack_jones(d, &vd, opts)?,
        jones_dd: stack_jones(d, &dd, opts)?,
    })
}

/// Fields of `sig` that disagree with the reference values for `label`.
/// A reference value that is absent counts as a mismatch.
pub fn mismatches(sig: &InvariantSignature, label: KishinoLabel, exp: &ExpectedValues) -> Vec<&'static str> {
    let mut out = Vec::new();
    if exp.jones_self(label).map(|e| e.poly()) != Some(sig.jones_self.clone()) {
        out.push(FIELDS[0]);
    }
    if exp.census_for(label, "+-") != Some(sig.census_vd) {
        out.push(FIELDS[1]);
    }
    if exp.census_for(label, "++") != Some(sig.census_dd) {
        out.push(FIELDS[2]);
    }
    if exp.jones_stack(label, "+-").map(|e| e.poly()) != Some(sig.jones_vd.clone()) {
        out.push(FIELDS[3]);
    }
    if exp.jones_stack(label, "++").map(|e| e.poly()) != Some(sig.jones_dd.clone()) {
        out.push(FIELDS[4]);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantRecord {
    pub mask: Mask,
    pub writhe: i32,
    pub pd: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<InvariantSignature>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Binding {
    pub label: KishinoLabel,
    pub mask: Mask,
    /// Every reference value matched.
    pub exact: bool,
    pub mismatches: Vec<&'static str>,
    /// Other variants with the same signature.
    pub equivalent_masks: Vec<Mask>,
    pub pd: String,
    #[serde(skip)]
    pub diagram: VirtualDiagram,
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub masks: Vec<Mask>,
    pub mismatches: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelFailure {
    pub label: KishinoLabel,
    pub reason: String,
    pub nearest: Vec<Candidate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Identification {
    pub base_pd: &'static str,
    pub bindings: Vec<Binding>,
    pub failures: Vec<LabelFailure>,
    pub variants: Vec<VariantRecord>,
}

impl Identification {
    pub fn get(&self, label: KishinoLabel) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.label == label)
    }

    pub fn fixtures(&self) -> BTreeMap<KishinoLabel, VirtualDiagram> {
        self.bindings.iter().map(|b| (b.label, b.diagram.clone())).collect()
    }
}

/// Binds each label to the signature class with the fewest mismatching
/// reference values. A unique class with zero mismatches is an exact
/// binding; a unique nearest class is bound and flagged inexact; a tie
/// leaves the label unbound and reported.
pub fn identify(variants: &[Variant], exp: &ExpectedValues, opts: &PipelineOptions) -> Identification {
    let sigs: Vec<Result<InvariantSignature, String>> =
        variants.par_iter().map(|v| signature(&v.diagram, opts).map_err(|e| e.to_string())).collect();

    // signature classes in order of first appearance
    let mut classes: Vec<(InvariantSignature, Vec<usize>)> = Vec::new();
    for (i, s) in sigs.iter().enumerate() {
        if let Ok(s) = s {
            match classes.iter_mut().find(|c| &c.0 == s) {
                Some(c) => c.1.push(i),
                None => classes.push((s.clone(), vec![i])),
            }
        }
    }

    let mut bindings = Vec::new();
    let mut failures = Vec::new();
    for label in KishinoLabel::ALL {
        let mut scored: Vec<(Vec<&'static str>, &Vec<usize>)> =
            classes.iter().map(|(s, members)| (mismatches(s, label, exp), members)).collect();
        scored.sort_by_key(|(m, members)| (m.len(), members[0]));
        let nearest = |n: usize| {
            scored
                .iter()
                .take(n)
                .map(|(m, members)| Candidate {
                    masks: members.iter().map(|&i| variants[i].mask).collect(),
                    mismatches: m.clone(),
                })
                .collect::<Vec<_>>()
        };
        match scored.as_slice() {
            [] => failures.push(LabelFailure { label, reason: "no variant signature computed".into(), nearest: vec![] }),
            [(m0, _), (m1, _), ..] if m0.len() == m1.len() => failures.push(LabelFailure {
                label,
                reason: format!("{} signature classes tie at {} mismatching values", scored.iter().filter(|s| s.0.len() == m0.len()).count(), m0.len()),
                nearest: nearest(3),
            }),
            [(m0, members), ..] if m0.len() == FIELDS.len() => {
                let _ = members;
                failures.push(LabelFailure { label, reason: "no reference value matched".into(), nearest: nearest(3) })
            }
            [(m0, members), ..] => {
                let v = &variants[members[0]];
                bindings.push(Binding {
                    label,
                    mask: v.mask,
                    exact: m0.is_empty(),
                    mismatches: m0.clone(),
                    equivalent_masks: members[1..].iter().map(|&i| variants[i].mask).collect(),
                    pd: v.diagram.to_pd(),
                    diagram: v.diagram.clone(),
                });
            }
        }
    }

    let records = variants
        .iter()
        .zip(sigs)
        .map(|(v, s)| {
            let (signature, error) = match s {
                Ok(s) => (Some(s), None),
                Err(e) => (None, Some(e)),
            };
            VariantRecord { mask: v.mask, writhe: v.diagram.writhe(), pd: v.diagram.to_pd(), signature, error }
        })
        .collect();
    Identification { base_pd: BASE_PD, bindings, failures, variants: records }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_shape() {
        let d = base_shadow();
        assert_eq!((d.classical_count(), d.virtual_count(), d.components()), (4, 2, 1));
        assert_eq!(d.writhe(), 0);
        let g = d.gauss_code().unwrap();
        assert_eq!(g.matches(['O', 'U']).count(), 8);
        assert_eq!(d.face_count(), 8);
    }

    #[test]
    fn variants() {
        let vs = enumerate_variants();
        assert_eq!(vs.len(), 16);
        assert_eq!(vs[0].diagram, base_shadow());
        assert_eq!(vs[15].diagram, base_shadow().vertical_reflect());
        for v in &vs {
            assert!(v.diagram.validate().is_empty());
            assert_eq!(v.diagram.components(), 1);
            assert!([-4, -2, 0, 2, 4].contains(&v.diagram.writhe()));
        }
        assert_eq!(Mask(0b0101).to_string(), "1010");
    }

    #[test]
    fn labels_round_trip() {
        for l in KishinoLabel::ALL {
            assert_eq!(l.name().parse::<KishinoLabel>().unwrap(), l);
            let j = serde_json::to_string(&l).unwrap();
            assert_eq!(j, format!("\"{}\"", l.name()));
        }
    }
}
