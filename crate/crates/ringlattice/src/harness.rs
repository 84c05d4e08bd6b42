//! Runs the check registry over catalog and random instances and assembles
//! the report.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ringlattice_core::extension::DEFAULT_NODE_LIMIT;
use ringlattice_core::verify::{self, procedures_disagree, Analysis, Outcome, Status};
use ringlattice_core::DEFAULT_CAP;

use crate::build::{build, BuiltInstance};
use crate::catalog::{CatalogInstance, Expectation, Provenance, Value};
use crate::dsl::parse_spec;
use crate::summary::Summary;

/// Seed of the random sub-interval sample.
pub const SUBINTERVAL_SEED: u64 = 0xD15717B;
/// Number of sub-intervals sampled across all instances of a run.
pub const SUBINTERVAL_SAMPLES: usize = 1000;

pub const EXPECTATIONS_CHECK: &str = "catalog_expectations";
pub const ROUND_TRIP_CHECK: &str = "spec_round_trip";
pub const SUBINTERVAL_CHECK: &str = "subinterval_procedures_agree";

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Ring size cap from the command line or environment. When unset, a
    /// spec's own `option cap` applies, then the library default.
    pub cap: Option<usize>,
    pub node_limit: usize,
    /// Record wall-clock times in the report. Off by default so that reports
    /// are byte-identical across runs.
    pub timings: bool,
    pub subinterval_samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { cap: None, node_limit: DEFAULT_NODE_LIMIT, timings: false, subinterval_samples: SUBINTERVAL_SAMPLES }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessRecord {
    pub nodes: Vec<usize>,
    /// Labels of the witness nodes.
    pub labels: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRecord {
    pub instance: String,
    pub check: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    pub detail: String,
    /// Truth value of the left-hand side, for equivalences.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<bool>,
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckCoverage {
    pub check: String,
    pub statement: String,
    pub equivalence: bool,
    pub applicable: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    /// Instances on which the left-hand side held / failed.
    pub lhs_true: usize,
    pub lhs_false: usize,
    /// `both`, `true-only`, `false-only` or `none`; empty for implications.
    pub sides_realized: String,
    pub zero_applicable: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InstanceRecord {
    pub name: String,
    pub description: String,
    pub spec: String,
    /// Set when the instance could not be built or enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub nodes: usize,
    pub length: usize,
    pub distributive: bool,
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Totals {
    pub instances: usize,
    pub results: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub subintervals_sampled: usize,
    pub zero_applicable_checks: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub format_version: u32,
    pub filter: Option<String>,
    pub random_count: usize,
    pub seed: u64,
    pub instances: Vec<InstanceRecord>,
    pub results: Vec<CheckRecord>,
    pub checks: Vec<CheckCoverage>,
    pub totals: Totals,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.results.iter().filter(|r| r.status == Status::Fail.as_str())
    }

    pub fn is_green(&self) -> bool {
        self.totals.failed == 0
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text table: one line per check with its coverage, then failures.
    pub fn text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.check.len()).max().unwrap_or(5).max(5);
        out.push_str(&format!(
            "{:<width$}  {:>5} {:>5} {:>5} {:>5}  sides\n",
            "check", "appl", "pass", "fail", "n/a"
        ));
        for c in &self.checks {
            let flag = if c.zero_applicable { "  [no applicable instance]" } else { "" };
            out.push_str(&format!(
                "{:<width$}  {:>5} {:>5} {:>5} {:>5}  {}{}\n",
                c.check,
                c.applicable,
                c.passed,
                c.failed,
                c.not_applicable,
                if c.sides_realized.is_empty() { "-" } else { &c.sides_realized },
                flag
            ));
        }
        for f in self.failures() {
            out.push_str(&format!("FAIL {} / {}: {}", f.instance, f.check, f.detail));
            if let Some(w) = &f.witness {
                out.push_str(&format!(" [witness {}: {}]", w.note, w.labels.join(", ")));
            }
            out.push('\n');
        }
        let t = &self.totals;
        out.push_str(&format!(
            "{} instances, {} results: {} passed, {} failed, {} not applicable; {} sub-intervals sampled\n",
            t.instances, t.results, t.passed, t.failed, t.not_applicable, t.subintervals_sampled
        ));
        if !t.zero_applicable_checks.is_empty() {
            out.push_str(&format!("checks with no applicable instance: {}\n", t.zero_applicable_checks.join(", ")));
        }
        out
    }
}

/// A built and analysed instance.
pub struct Prepared {
    pub built: BuiltInstance,
    pub analysis: Analysis,
    pub summary: Summary,
}

pub fn prepare(name: &str, spec_text: &str, opts: &RunOptions) -> Result<Prepared, String> {
    let spec = parse_spec(spec_text).map_err(|e| e.to_string())?;
    let cap = opts.cap.unwrap_or_else(|| spec.option("cap").map_or(DEFAULT_CAP, |c| c as usize));
    let node_limit = spec.option("node_limit").map_or(opts.node_limit, |c| c as usize);
    let built = build(&spec, cap).map_err(|e| e.to_string())?;
    let analysis = Analysis::new(built.extension.clone(), node_limit).map_err(|e| e.to_string())?;
    let summary = Summary::new(name, &built, &analysis);
    Ok(Prepared { built, analysis, summary })
}

/// Value of an expectation key on an analysed instance.
pub fn observed(summary: &Summary, key: &str) -> Option<Value> {
    let v = &summary.verdicts;
    let d = &summary.decomposition;
    Some(match key {
        "nodes" => Value::Int(summary.node_count as u64),
        "length" => Value::Int(summary.length as u64),
        "distributive" => Value::Bool(v.distributive),
        "modular" => Value::Bool(v.modular),
        "boolean" => Value::Bool(v.boolean),
        "catenarian" => Value::Bool(v.catenarian),
        "chained" => Value::Bool(v.chained),
        "witness" => Value::Text(v.witness.as_ref().map_or("none".into(), |w| w.kind.clone())),
        "seminormalization" => Value::Text(d.seminormalization.label.clone()),
        "t_closure" => Value::Text(d.t_closure.label.clone()),
        "u_closure" => Value::Text(d.u_closure.label.clone()),
        "fiber_sizes" => Value::Text(format!("{:?}", summary.fiber_sizes)),
        _ => {
            if let Some(edge) = key.strip_prefix("edge:") {
                let (from, to) = edge.split_once(" -> ")?;
                return summary.edge_type(from, to).map(|c| Value::Text(c.to_string()));
            }
            return summary.flags.get(key).map(|b| Value::Bool(*b));
        }
    })
}

fn expectations_outcome(summary: &Summary, expectations: &[Expectation]) -> Outcome {
    if expectations.is_empty() {
        return Outcome::not_applicable("no recorded expectations");
    }
    let mut bad = Vec::new();
    for e in expectations {
        match observed(summary, &e.key) {
            Some(v) if v == e.value => {}
            Some(v) => bad.push(format!("{} [{}]: expected {}, observed {}", e.key, e.provenance, e.value, v)),
            None => bad.push(format!("{} [{}]: not observable on this instance", e.key, e.provenance)),
        }
    }
    if bad.is_empty() {
        let count = |p: Provenance| expectations.iter().filter(|e| e.provenance == p).count();
        Outcome::pass(format!(
            "{} expectations hold ({} stated, {} trivial, {} derived)",
            expectations.len(),
            count(Provenance::Stated),
            count(Provenance::Trivial),
            count(Provenance::Derived)
        ))
    } else {
        Outcome::fail(bad.join("; "), verify::Witness::new(Vec::new(), "expectation mismatch"))
    }
}

fn round_trip_outcome(text: &str) -> Outcome {
    let Ok(spec) = parse_spec(text) else { return Outcome::not_applicable("spec does not parse") };
    let printed = spec.to_string();
    match parse_spec(&printed) {
        Ok(again) if again == spec => Outcome::pass("pretty-printed spec reparses to the same spec"),
        Ok(_) => Outcome::fail("reparsed spec differs", verify::Witness::new(Vec::new(), printed)),
        Err(e) => Outcome::fail(format!("pretty-printed spec fails to parse: {e}"), verify::Witness::new(Vec::new(), printed)),
    }
}

fn millis(start: Instant, on: bool) -> Option<u64> {
    on.then(|| start.elapsed().as_millis() as u64)
}

fn record(instance: &str, check: &str, o: Outcome, summary: Option<&Summary>, elapsed_ms: Option<u64>) -> CheckRecord {
    let witness = o.witness.map(|w| WitnessRecord {
        labels: w
            .nodes
            .iter()
            .map(|&i| summary.and_then(|s| s.nodes.get(i)).map_or_else(|| format!("#{i}"), |n| n.label.clone()))
            .collect(),
        nodes: w.nodes,
        note: w.note,
    });
    CheckRecord {
        instance: instance.to_string(),
        check: check.to_string(),
        status: o.status.as_str(),
        witness,
        detail: o.detail,
        lhs: o.lhs,
        elapsed_ms,
    }
}

/// Every check on one instance, in registry order.
pub fn run_instance(inst: &CatalogInstance, opts: &RunOptions) -> (InstanceRecord, Vec<CheckRecord>, Option<Prepared>) {
    let start = Instant::now();
    let mut results = vec![record(&inst.name, ROUND_TRIP_CHECK, round_trip_outcome(&inst.spec), None, None)];
    let prepared = match prepare(&inst.name, &inst.spec, opts) {
        Ok(p) => p,
        Err(e) => {
            results.push(record(
                &inst.name,
                "instance_builds",
                Outcome::fail(e.clone(), verify::Witness::new(Vec::new(), "construction")),
                None,
                None,
            ));
            let rec = InstanceRecord {
                name: inst.name.clone(),
                description: inst.description.clone(),
                spec: inst.spec.clone(),
                error: Some(e),
                nodes: 0,
                length: 0,
                distributive: false,
                elapsed_ms: millis(start, opts.timings),
            };
            return (rec, results, None);
        }
    };
    for check in verify::checks() {
        let t = Instant::now();
        let o = verify::evaluate(check, &prepared.analysis);
        results.push(record(&inst.name, check.name, o, Some(&prepared.summary), millis(t, opts.timings)));
    }
    let o = expectations_outcome(&prepared.summary, &inst.expectations);
    results.push(record(&inst.name, EXPECTATIONS_CHECK, o, Some(&prepared.summary), None));
    let s = &prepared.summary;
    let rec = InstanceRecord {
        name: inst.name.clone(),
        description: inst.description.clone(),
        spec: inst.spec.clone(),
        error: None,
        nodes: s.node_count,
        length: s.length,
        distributive: s.verdicts.distributive,
        elapsed_ms: millis(start, opts.timings),
    };
    (rec, results, Some(prepared))
}

/// Uniform sample of distinct comparable pairs `(instance, lo, hi)` with
/// `lo < hi`, across all given lattices.
pub fn sample_subintervals(lattices: &[&Analysis], count: usize, seed: u64) -> Vec<(usize, usize, usize)> {
    let mut all = Vec::new();
    for (k, a) in lattices.iter().enumerate() {
        let o = a.order();
        for lo in 0..o.len() {
            for hi in 0..o.len() {
                if lo != hi && o.leq(lo, hi) {
                    all.push((k, lo, hi));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    all.shuffle(&mut rng);
    all.truncate(count);
    all.sort();
    all
}

/// The three distributivity procedures on each sampled sub-interval.
pub fn subinterval_outcomes(lattices: &[&Analysis], samples: &[(usize, usize, usize)]) -> Vec<Outcome> {
    lattices
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let mine: Vec<(usize, usize)> = samples.iter().filter(|s| s.0 == k).map(|s| (s.1, s.2)).collect();
            if mine.is_empty() {
                return Outcome::not_applicable("no sub-interval sampled from this instance");
            }
            for &(lo, hi) in &mine {
                let sub = match a.order().interval(lo, hi) {
                    Ok(s) => s,
                    Err(e) => return Outcome::fail(e.to_string(), verify::Witness::new(vec![lo, hi], "interval")),
                };
                if let Some(v) = procedures_disagree(&sub.lattice) {
                    return Outcome::fail(
                        format!("law scan / forbidden sublattice / covering criterion = {v:?}"),
                        verify::Witness::new(vec![lo, hi], "interval bounds"),
                    );
                }
            }
            Outcome::pass(format!("{} sampled sub-intervals agree", mine.len()))
        })
        .collect()
}

/// Runs everything on `instances` and assembles a sorted report.
pub fn run_catalog(
    instances: &[CatalogInstance],
    filter: Option<&str>,
    random_count: usize,
    seed: u64,
    opts: &RunOptions,
) -> Report {
    let mut records = Vec::new();
    let mut results = Vec::new();
    let mut prepared: Vec<(String, Prepared)> = Vec::new();
    for inst in instances {
        let (rec, res, p) = run_instance(inst, opts);
        records.push(rec);
        results.extend(res);
        if let Some(p) = p {
            prepared.push((inst.name.clone(), p));
        }
    }
    let analyses: Vec<&Analysis> = prepared.iter().map(|p| &p.1.analysis).collect();
    let samples = sample_subintervals(&analyses, opts.subinterval_samples, SUBINTERVAL_SEED);
    for ((name, p), o) in prepared.iter().zip(subinterval_outcomes(&analyses, &samples)) {
        results.push(record(name, SUBINTERVAL_CHECK, o, Some(&p.summary), None));
    }
    records.sort_by(|a, b| a.name.cmp(&b.name));
    results.sort_by(|a, b| (&a.instance, &a.check).cmp(&(&b.instance, &b.check)));
    let checks = coverage(&results);
    let count = |s: Status| results.iter().filter(|r| r.status == s.as_str()).count();
    let totals = Totals {
        instances: records.len(),
        results: results.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        not_applicable: count(Status::NotApplicable),
        subintervals_sampled: samples.len(),
        zero_applicable_checks: checks.iter().filter(|c| c.zero_applicable).map(|c| c.check.clone()).collect(),
    };
    Report {
        format_version: 1,
        filter: filter.map(str::to_string),
        random_count,
        seed,
        instances: records,
        results,
        checks,
        totals,
    }
}

fn statement_of(check: &str) -> (String, bool) {
    if let Some(c) = verify::find_check(check) {
        return (c.statement.to_string(), c.equivalence);
    }
    let s = match check {
        EXPECTATIONS_CHECK => "recorded expected values of a catalog instance hold",
        ROUND_TRIP_CHECK => "pretty-printing a spec and parsing it again gives the same spec",
        SUBINTERVAL_CHECK => "law scan, forbidden-sublattice search and covering criterion agree on sampled sub-intervals",
        "instance_builds" => "the instance spec parses, builds and enumerates within the caps",
        _ => "",
    };
    (s.to_string(), false)
}

/// Per-check counts, in name order.
fn coverage(results: &[CheckRecord]) -> Vec<CheckCoverage> {
    let mut by_check: BTreeMap<&str, Vec<&CheckRecord>> = BTreeMap::new();
    for c in verify::checks() {
        by_check.entry(c.name).or_default();
    }
    for r in results {
        by_check.entry(&r.check).or_default().push(r);
    }
    by_check
        .into_iter()
        .map(|(name, rs)| {
            let (statement, equivalence) = statement_of(name);
            let n = |s: Status| rs.iter().filter(|r| r.status == s.as_str()).count();
            let lhs_true = rs.iter().filter(|r| r.lhs == Some(true)).count();
            let lhs_false = rs.iter().filter(|r| r.lhs == Some(false)).count();
            let applicable = n(Status::Pass) + n(Status::Fail);
            let sides_realized = if !equivalence {
                String::new()
            } else {
                match (lhs_true > 0, lhs_false > 0) {
                    (true, true) => "both",
                    (true, false) => "true-only",
                    (false, true) => "false-only",
                    (false, false) => "none",
                }
                .to_string()
            };
            CheckCoverage {
                check: name.to_string(),
                statement,
                equivalence,
                applicable,
                passed: n(Status::Pass),
                failed: n(Status::Fail),
                not_applicable: n(Status::NotApplicable),
                lhs_true,
                lhs_false,
                sides_realized,
                zero_applicable: applicable == 0,
            }
        })
        .collect()
}

/// Oracle facts for every catalog instance small enough, as the JSON text of
/// the committed expectations file.
pub fn regenerate_expectations(instances: &[CatalogInstance], opts: &RunOptions) -> Result<String, String> {
    let mut table = crate::catalog::DerivedTable::new();
    for inst in instances {
        let spec = parse_spec(&inst.spec).map_err(|e| format!("{}: {e}", inst.name))?;
        let cap = opts.cap.unwrap_or_else(|| spec.option("cap").map_or(DEFAULT_CAP, |c| c as usize));
        let built = build(&spec, cap).map_err(|e| format!("{}: {e}", inst.name))?;
        let ring = &built.ambient().ring;
        if ring.size() > crate::oracle::ORACLE_RING_LIMIT {
            continue;
        }
        table.insert(inst.name.clone(), crate::oracle::facts(ring, &built.base_generators));
    }
    let mut s = serde_json::to_string_pretty(&table).map_err(|e| e.to_string())?;
    s.push('\n');
    Ok(s)
}
