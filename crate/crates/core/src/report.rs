//! Reproduction of the reference tables: every stack census and Jones value
//! for the seven Kishino labels, each cell compared with the embedded
//! expected value.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::{jones_capped, BracketError, JonesPoly};
use crate::diagram::VirtualDiagram;
use crate::expected::{ExpectedValues, JonesEntry};
use crate::kishino::{Identification, KishinoLabel};
use crate::pipeline::{stack_group_census, stack_jones, CensusValue, PipelineError, PipelineOptions};
use crate::stack::StackSequence;

/// Computed cells keyed by a canonical description of the computation.
/// Values are JSON text of [`CellValue`].
pub trait Cache: Sync {
    fn get(&self, key: &str) -> Option<String>;
    fn put(&self, key: &str, value: &str);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Census,
    CensusThreeLayer,
    JonesSelf,
    JonesStack,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellValue {
    Census(CensusValue),
    Jones { display: String, q_terms: Vec<(i32, i64)> },
}

impl CellValue {
    pub fn jones(p: &JonesPoly) -> Self {
        CellValue::Jones { display: p.to_string(), q_terms: p.0.terms().collect() }
    }
}

impl std::fmt::Display for CellValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellValue::Census(c) => write!(f, "{c}"),
            CellValue::Jones { display, .. } => f.write_str(display),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    Mismatch,
    /// State sum over the cap; no value computed.
    Skipped,
    Error,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub section: Section,
    pub label: KishinoLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stack: Option<String>,
    pub expected: CellValue,
    /// Expected Jones value as originally typeset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_printed: Option<String>,
    pub computed: Option<CellValue>,
    pub status: Status,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureSummary {
    pub label: KishinoLabel,
    pub mask: String,
    pub exact: bool,
    pub pd: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Summary {
    pub matched: usize,
    pub mismatched: usize,
    pub skipped: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub expected_version: u32,
    pub options: PipelineOptions,
    pub fixtures: Vec<FixtureSummary>,
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub pipeline: PipelineOptions,
    /// Zero every timing so output is byte-stable.
    pub deterministic: bool,
}

enum Task<'a> {
    Census { stack: &'a str, expected: CensusValue, three_layer: bool },
    Jones { stack: Option<&'a str>, entry: &'a JonesEntry },
}

fn census_key(d: &VirtualDiagram, seq: &StackSequence, o: &PipelineOptions) -> String {
    format!(
        "census|degree={}|budget={}|max_generators={}|stack={seq}|{}",
        o.degree,
        o.budget,
        o.max_generators,
        d.to_json()
    )
}

fn jones_key(d: &VirtualDiagram, seq: Option<&StackSequence>, o: &PipelineOptions) -> String {
    let s = seq.map_or(String::new(), |s| s.to_string());
    format!("jones|state_cap={}|stack={s}|{}", o.state_cap, d.to_json())
}

fn cached<F>(cache: Option<&dyn Cache>, key: String, compute: F) -> Result<CellValue, PipelineError>
where
    F: FnOnce() -> Result<CellValue, PipelineError>,
{
    if let Some(c) = cache {
        if let Some(hit) = c.get(&key).and_then(|s| serde_json::from_str(&s).ok()) {
            return Ok(hit);
        }
    }
    let v = compute()?;
    if let Some(c) = cache {
        c.put(&key, &serde_json::to_string(&v).expect("cell serializes"));
    }
    Ok(v)
}

fn run_task(
    task: &Task,
    label: KishinoLabel,
    diagram: Option<&VirtualDiagram>,
    opts: &ReportOptions,
    cache: Option<&dyn Cache>,
) -> ReportRow {
    let o = &opts.pipeline;
    let (section, stack, expected, expected_printed) = match task {
        Task::Census { stack, expected, three_layer } => (
            if *three_layer { Section::CensusThreeLayer } else { Section::Census },
            Some(stack.to_string()),
            CellValue::Census(*expected),
            None,
        ),
        Task::Jones { stack, entry } => (
            if stack.is_some() { Section::JonesStack } else { Section::JonesSelf },
            stack.map(str::to_string),
            CellValue::jones(&entry.poly()),
            Some(entry.printed.clone()),
        ),
    };
    let mut row = ReportRow {
        section,
        label,
        stack,
        expected,
        expected_printed,
        computed: None,
        status: Status::Error,
        elapsed_ms: 0,
        error: None,
    };
    let Some(d) = diagram else {
        row.error = Some(format!("no fixture identified for {label}"));
        return row;
    };
    let start = Instant::now();
    let result = match task {
        Task::Census { stack, .. } => {
            let seq: StackSequence = stack.parse().expect("stack sequences in expected values are valid");
            cached(cache, census_key(d, &seq, o), || {
                Ok(CellValue::Census(stack_group_census(d, &seq, o)?.value))
            })
        }
        Task::Jones { stack: Some(stack), .. } => {
            let seq: StackSequence = stack.parse().expect("stack sequences in expected values are valid");
            cached(cache, jones_key(d, Some(&seq), o), || Ok(CellValue::jones(&stack_jones(d, &seq, o)?)))
        }
        Task::Jones { stack: None, .. } => cached(cache, jones_key(d, None, o), || {
            Ok(CellValue::jones(&jones_capped(d, o.state_cap).map_err(PipelineError::from)?))
        }),
    };
    if !opts.deterministic {
        row.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    match result {
        Ok(v) => {
            row.status = if v == row.expected { Status::Match } else { Status::Mismatch };
            row.computed = Some(v);
        }
        Err(PipelineError::Bracket(e @ BracketError::CapExceeded { .. })) => {
            row.status = Status::Skipped;
            row.error = Some(e.to_string());
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Computes every row. Rows are independent and run in parallel; their
/// order is fixed by the expected-values file.
pub fn build_report(
    fixtures: &Identification,
    exp: &ExpectedValues,
    opts: &ReportOptions,
    cache: Option<&dyn Cache>,
) -> Report {
    let mut tasks: Vec<(KishinoLabel, Task)> = Vec::new();
    for e in &exp.census {
        tasks.push((e.label, Task::Census { stack: &e.stack, expected: e.census, three_layer: false }));
    }
    for e in &exp.census_three_layer {
        tasks.push((e.label, Task::Census { stack: &e.stack, expected: e.census, three_layer: true }));
    }
    for e in &exp.jones_self {
        tasks.push((e.label, Task::Jones { stack: None, entry: e }));
    }
    for e in &exp.jones_stack {
        tasks.push((e.label, Task::Jones { stack: e.stack.as_deref(), entry: e }));
    }

    let rows: Vec<ReportRow> = tasks
        .par_iter()
        .map(|(label, task)| run_task(task, *label, fixtures.get(*label).map(|b| &b.diagram), opts, cache))
        .collect();

    let mut summary = Summary::default();
    for r in &rows {
        match r.status {
            Status::Match => summary.matched += 1,
            Status::Mismatch => summary.mismatched += 1,
            Status::Skipped => summary.skipped += 1,
            Status::Error => summary.errors += 1,
        }
    }
    Report {
        expected_version: exp.version,
        options: opts.pipeline.clone(),
        fixtures: fixtures
            .bindings
            .iter()
            .map(|b| FixtureSummary { label: b.label, mask: b.mask.to_string(), exact: b.exact, pd: b.pd.clone() })
            .collect(),
        rows,
        summary,
    }
}

impl Report {
    pub fn row(&self, section: Section, label: KishinoLabel, stack: Option<&str>) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.section == section && r.label == label && r.stack.as_deref() == stack)
    }

    /// Plain-text tables.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("fixtures\n");
        for f in &self.fixtures {
            let note = if f.exact { "" } else { "  (nearest match)" };
            out.push_str(&format!("  {:<9} {}  {}{note}\n", f.label.to_string(), f.mask, f.pd));
        }
        let mut section = None;
        for r in &self.rows {
            if section.as_ref() != Some(&r.section) {
                let title = match r.section {
                    Section::Census => "S5 epimorphism census, two layers",
                    Section::CensusThreeLayer => "S5 epimorphism census, three layers",
                    Section::JonesSelf => "Jones polynomial",
                    Section::JonesStack => "Jones polynomial of stacks",
                };
                out.push_str(&format!("\n{title}\n"));
                section = Some(r.section.clone());
            }
            let name = match &r.stack {
                Some(s) => format!("S_{s}({})", r.label),
                None => r.label.to_string(),
            };
            let computed = match (&r.computed, &r.error) {
                (Some(v), _) => v.to_string(),
                (None, Some(e)) => e.clone(),
                (None, None) => String::new(),
            };
            let status = match r.status {
                Status::Match => "match",
                Status::Mismatch => "MISMATCH",
                Status::Skipped => "skipped",
                Status::Error => "ERROR",
            };
            out.push_str(&format!("  {name:<14} {status:<9} computed {computed}\n"));
            if r.status != Status::Match {
                out.push_str(&format!("  {:<14} {:<9} expected {}\n", "", "", r.expected));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "\n{} match, {} mismatch, {} skipped, {} error\n",
            s.matched, s.mismatched, s.skipped, s.errors
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;
    use std::sync::Mutex;

    use crate::expected::expected;
    use crate::kishino::{enumerate_variants, identify};

    #[derive(Default)]
    struct MemCache(Mutex<HashMap<String, String>>);

    impl Cache for MemCache {
        fn get(&self, key: &str) -> Option<String> {
            self.0.lock().unwrap().get(key).cloned()
        }
        fn put(&self, key: &str, value: &str) {
            self.0.lock().unwrap().insert(key.to_string(), value.to_string());
        }
    }

    #[test]
    fn cached_and_uncached_agree() {
        let opts = ReportOptions { deterministic: true, ..Default::default() };
        let id = identify(&enumerate_variants(), expected(), &opts.pipeline);
        let cache = MemCache::default();
        let a = serde_json::to_string(&build_report(&id, expected(), &opts, None)).unwrap();
        let b = serde_json::to_string(&build_report(&id, expected(), &opts, Some(&cache))).unwrap();
        let c = serde_json::to_string(&build_report(&id, expected(), &opts, Some(&cache))).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(cache.0.lock().unwrap().len(), 37);
        let r: Report = serde_json::from_str(&a).unwrap();
        assert_eq!(r.rows.len(), 37);
        assert!(r.rows.iter().all(|row| row.status != Status::Error));
    }

    #[test]
    fn unbound_label_is_an_error_row() {
        let mut id = identify(&enumerate_variants(), expected(), &PipelineOptions::default());
        id.bindings.retain(|b| b.label != KishinoLabel::K6);
        let r = build_report(&id, expected(), &ReportOptions::default(), None);
        let row = r.row(Section::JonesSelf, KishinoLabel::K6, None).unwrap();
        assert_eq!(row.status, Status::Error);
        assert!(row.error.as_ref().unwrap().contains("K6"));
    }
}
