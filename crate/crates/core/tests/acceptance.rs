//! Acceptance criteria 1 to 6. Prints one PASS/FAIL line per criterion.
//!
//! A few reference cells cannot be reproduced (see `KNOWN_DIVERGENT`); the
//! criteria containing them print FAIL. The run itself fails when any
//! other cell misses, or when a listed cell starts to match.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use stacklab::bracket::{jones, kauffman_bracket, JonesPoly};
use stacklab::expected::expected;
use stacklab::grouppres::{tietze_simplify, wirtinger, DEFAULT_BUDGET};
use stacklab::kishino::{enumerate_variants, identify, KishinoLabel};
use stacklab::permcensus::census;
use stacklab::pipeline::{stack_group_census, stack_jones, CensusValue, PipelineOptions};
use stacklab::stack::build_stack;
use stacklab::{parse_pd, StackSequence, VirtualDiagram};

use KishinoLabel::*;

/// Cells whose computed value differs from the reference value.
const KNOWN_DIVERGENT: [&str; 4] = ["census S_++(K_v)", "census S_+++(K_switch)", "census S_+++(K5)", "jones S_++(K5)"];

struct Outcome {
    pass: bool,
    notes: Vec<String>,
    divergent: Vec<String>,
    broken: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, notes: Vec::new(), divergent: Vec::new(), broken: Vec::new() }
    }

    /// A reference-value comparison.
    fn cell(&mut self, name: String, ok: bool, detail: String) {
        if !ok {
            self.pass = false;
            self.notes.push(format!("{name}: {detail}"));
            if KNOWN_DIVERGENT.contains(&name.as_str()) {
                self.divergent.push(name);
            } else {
                self.broken.push(name);
            }
        }
    }

    /// A check that must hold regardless of reference values.
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        if !ok {
            let name = name.into();
            self.pass = false;
            self.notes.push(format!("{name} failed"));
            self.broken.push(name);
        }
    }
}

fn seq(s: &str) -> StackSequence {
    s.parse().unwrap()
}

fn fixtures() -> Vec<(KishinoLabel, VirtualDiagram)> {
    KishinoLabel::ALL.iter().map(|&l| (l, common::fixture(l))).collect()
}

fn criterion_1(opts: &PipelineOptions, f2: u64) -> Outcome {
    let mut o = Outcome::new();
    for e in &expected().census {
        let d = common::fixture(e.label);
        let t = Instant::now();
        let out = stack_group_census(&d, &seq(&e.stack), opts).unwrap();
        let elapsed = t.elapsed();
        let name = format!("census S_{}({})", e.stack, e.label);
        o.cell(name.clone(), out.value == e.census, format!("computed {}, expected {}", out.value, e.census));
        o.check(format!("{name} divisible"), out.census.total_epis.is_multiple_of(120));
        let limit = if out.presentation.generator_count <= 2 { Duration::from_secs(1) } else { Duration::from_secs(180) };
        o.check(format!("{name} within {limit:?}"), elapsed <= limit);
        if let CensusValue::Free { .. } = e.census {
            let p = &out.presentation;
            o.check(format!("{name} simplifies to F2"), p.generator_count == 2 && p.relators.is_empty());
            o.check(format!("{name} equals the F2 oracle"), out.census.orbit_count == f2);
        }
    }
    o
}

fn criterion_2(opts: &PipelineOptions) -> Outcome {
    let mut o = Outcome::new();
    for e in &expected().census_three_layer {
        let d = common::fixture(e.label);
        let t = Instant::now();
        let out = stack_group_census(&d, &seq(&e.stack), opts).unwrap();
        let name = format!("census S_{}({})", e.stack, e.label);
        o.cell(name.clone(), out.value == e.census, format!("computed {}, expected {}", out.value, e.census));
        o.check(format!("{name} divisible"), out.census.total_epis.is_multiple_of(120));
        o.check(format!("{name} within 10 min"), t.elapsed() <= Duration::from_secs(600));
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let mut computed = Vec::new();
    for e in &expected().jones_self {
        let j = jones(&common::fixture(e.label)).unwrap();
        let name = format!("jones {}", e.label);
        o.cell(name, j == e.poly(), format!("computed {j}, expected {}", e.printed));
        o.check(format!("jones {} at t=1", e.label), j.at_one() == 1);
        computed.push((e.label, j));
    }
    let get = |l| computed.iter().find(|c| c.0 == l).map(|c| c.1.clone()).unwrap();
    for l in [K, KSwitch, KV] {
        o.check(format!("jones {l} trivial"), get(l) == JonesPoly::one());
    }
    o.check("K6 and K7 share a Jones polynomial", get(K6) == get(K7));
    o
}

fn criterion_4(opts: &PipelineOptions) -> Outcome {
    let mut o = Outcome::new();
    let mut computed = Vec::new();
    for e in &expected().jones_stack {
        let s = e.stack.as_deref().unwrap();
        let t = Instant::now();
        let j = stack_jones(&common::fixture(e.label), &seq(s), opts).unwrap();
        let name = format!("jones S_{s}({})", e.label);
        o.check(format!("{name} within 10 s"), t.elapsed() <= Duration::from_secs(10));
        o.check(format!("{name} at t=1"), j.at_one() == -2);
        o.cell(name, j == e.poly(), format!("computed {j}, expected {}", e.printed));
        computed.push(((e.label, s), j));
    }
    let get = |l, s: &str| computed.iter().find(|c| c.0 == (l, s)).map(|c| c.1.clone()).unwrap();
    o.check("S_+-(K_switch) is the two-component unlink value", get(KSwitch, "+-") == JonesPoly::unlink(2));
    o.check("S_++(K) = S_++(K_v)", get(K, "++") == get(KV, "++"));
    o.check("S_++(K6) = S_++(K7)", get(K6, "++") == get(K7, "++"));
    o
}

fn criterion_5(opts: &PipelineOptions) -> Outcome {
    let mut o = Outcome::new();
    let kink = kauffman_bracket(&parse_pd("PD[X[1,1,2,2]]").unwrap()).unwrap();
    o.check("positive kink bracket is -A^3", kink.to_string() == "-A^{3}");

    // R1 invariance: a curl of either sign on every edge of every fixture
    for (l, d) in fixtures() {
        let j = jones(&d).unwrap();
        for e in d.edges() {
            for positive in [true, false] {
                let k = common::insert_kink(&d, e, positive);
                o.check(format!("R1 on {l} edge {e}"), jones(&k).unwrap() == j);
            }
        }
    }

    // evaluation at t = 1 on every fixture and stack
    for (l, d) in fixtures() {
        for s in ["+", "+-", "++", "-+", "--"] {
            let st = build_stack(&d, &seq(s)).unwrap();
            let j = jones(&st).unwrap();
            o.check(format!("S_{s}({l}) at t=1"), j.at_one() == (-2i64).pow(st.components() as u32 - 1));
        }
    }

    // Tietze keeps the census: single-knot groups fit the generator cap
    // unsimplified; three stacks are checked against an independent S4 count
    for (l, d) in fixtures() {
        let w = wirtinger(&d);
        let s = tietze_simplify(&w, DEFAULT_BUDGET).presentation;
        let a = census(&w, 5, 4).unwrap();
        let b = census(&s, 5, 4).unwrap();
        o.check(format!("tietze census invariance on {l}"), (a.total_homs, a.total_epis) == (b.total_homs, b.total_epis));
        o.check(format!("{l} census divisible"), a.total_epis.is_multiple_of(120));
    }
    for (l, st) in [(K, "+-"), (K6, "++"), (K7, "+-")] {
        let w = wirtinger(&build_stack(&common::fixture(l), &seq(st)).unwrap());
        let s = tietze_simplify(&w, DEFAULT_BUDGET).presentation;
        let c = census(&s, 4, 4).unwrap();
        o.check(format!("tietze S4 invariance on S_{st}({l})"), common::raw_hom_count(&w, 4) == (c.total_homs, c.total_epis));
    }

    // stack count formulas on random virtual braid closures
    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(7);
    for _ in 0..40 {
        let strands = rand::Rng::gen_range(&mut rng, 2..5);
        let letters = rand::Rng::gen_range(&mut rng, 0..8);
        let d = common::random_braid_closure(&mut rng, strands, letters);
        for s in ["+", "-", "+-", "-+", "++", "--", "+-+", "-++", "---"] {
            let q = seq(s);
            let m = q.layers();
            let st = build_stack(&d, &q).unwrap();
            o.check(
                format!("stack formulas S_{s} of {}", d.to_pd()),
                st.classical_count() == m * m * d.classical_count()
                    && st.virtual_count() == m * m * d.virtual_count()
                    && st.components() == m * d.components()
                    && st.writhe() == q.signed_sum() * d.writhe(),
            );
        }
    }

    // S_{-+}(L) and S_{+-}(L_v) share every invariant
    for (l, d) in fixtures() {
        let a = build_stack(&d, &seq("-+")).unwrap();
        let b = build_stack(&d.vertical_reflect(), &seq("+-")).unwrap();
        let ca = stack_group_census(&d, &seq("-+"), opts).unwrap();
        let cb = stack_group_census(&d.vertical_reflect(), &seq("+-"), opts).unwrap();
        o.check(
            format!("S_-+({l}) vs S_+-({l}_v)"),
            jones(&a).unwrap() == jones(&b).unwrap()
                && (ca.value, ca.census.total_epis) == (cb.value, cb.census.total_epis)
                && ca.abelianization == cb.abelianization,
        );
    }
    o
}

fn criterion_6(opts: &PipelineOptions) -> Outcome {
    let mut o = Outcome::new();
    let first = identify(&enumerate_variants(), expected(), opts);
    let second = identify(&enumerate_variants(), expected(), opts);
    o.check("all seven labels bound", first.bindings.len() == 7 && first.failures.is_empty());
    let masks: BTreeSet<_> = first.bindings.iter().map(|b| b.mask).collect();
    o.check("bindings pairwise distinct", masks.len() == first.bindings.len());
    let same = first.bindings.iter().zip(&second.bindings).all(|(a, b)| (a.label, a.mask) == (b.label, b.mask));
    o.check("identification stable", same);
    if let (Some(k), Some(kv)) = (first.get(K), first.get(KV)) {
        o.check("K_v is the vertical reflection of K", kv.diagram == k.diagram.vertical_reflect());
    }
    for b in &first.bindings {
        o.check(format!("shipped fixture for {}", b.label), common::fixture(b.label) == b.diagram);
        if !b.exact {
            o.notes.push(format!("{} bound to nearest class {} (differs in {})", b.label, b.mask, b.mismatches.join(", ")));
        }
    }
    o
}

fn main() {
    let opts = PipelineOptions::default();
    let f2 = common::free2_oracle(5);
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("two-layer census table", Box::new(|| criterion_1(&opts, f2))),
        ("three-layer censuses", Box::new(|| criterion_2(&opts))),
        ("self Jones polynomials", Box::new(criterion_3)),
        ("stack Jones polynomials", Box::new(|| criterion_4(&opts))),
        ("calibration and properties", Box::new(|| criterion_5(&opts))),
        ("fixture identification", Box::new(|| criterion_6(&opts))),
    ];
    let mut divergent = BTreeSet::new();
    let mut broken = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {title} ({:.1?})", i + 1, t.elapsed());
        for n in &o.notes {
            println!("    {n}");
        }
        divergent.extend(o.divergent);
        broken.extend(o.broken);
    }
    let stale: Vec<_> = KNOWN_DIVERGENT.iter().filter(|k| !divergent.contains(**k)).collect();
    if !broken.is_empty() || !stale.is_empty() {
        eprintln!("unexpected failures: {broken:?}");
        eprintln!("listed as divergent but matching: {stale:?}");
        std::process::exit(1);
    }
}
