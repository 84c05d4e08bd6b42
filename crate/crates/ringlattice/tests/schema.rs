use ringlattice::catalog::{self, CatalogInstance, Expectation, Provenance, Value};
use ringlattice::harness::{self, RunOptions};

fn validator(text: &str) -> jsonschema::JSONSchema {
    let schema: serde_json::Value = serde_json::from_str(text).expect("schema is JSON");
    jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::JSONSchema, doc: &serde_json::Value, what: &str) {
    if let Err(errors) = v.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what}: {}", msgs.join("; "));
    }
}

#[test]
fn every_catalog_analysis_matches_its_schema() {
    let v = validator(include_str!("../schema/analysis.schema.json"));
    for inst in catalog::catalog() {
        let p = harness::prepare(&inst.name, &inst.spec, &RunOptions::default()).unwrap();
        let doc = serde_json::to_value(&p.summary).unwrap();
        assert_valid(&v, &doc, &inst.name);
    }
}

#[test]
fn reports_match_their_schema() {
    let v = validator(include_str!("../schema/report.schema.json"));
    let mut instances = catalog::matching(Some("E"));
    instances.extend(catalog::random_instances(11, 10));
    let opts = RunOptions { timings: true, ..RunOptions::default() };
    let report = harness::run_catalog(&instances, Some("E"), 10, 11, &opts);
    let doc: serde_json::Value = serde_json::from_str(&report.json()).unwrap();
    assert_valid(&v, &doc, "report");
    assert!(report.results.iter().all(|r| r.elapsed_ms.is_some() || r.check == harness::ROUND_TRIP_CHECK
        || r.check == harness::EXPECTATIONS_CHECK || r.check == harness::SUBINTERVAL_CHECK));
}

#[test]
fn a_failing_expectation_is_reported_with_a_witness() {
    let mut inst: CatalogInstance = catalog::find("E4").unwrap();
    inst.expectations.push(Expectation { key: "nodes".into(), value: Value::Int(6), provenance: Provenance::Stated });
    let report = harness::run_catalog(&[inst], Some("E4"), 0, 0, &RunOptions::default());
    assert!(!report.is_green());
    let fail: Vec<_> = report.failures().collect();
    assert_eq!(fail.len(), 1);
    assert_eq!(fail[0].check, harness::EXPECTATIONS_CHECK);
    assert!(fail[0].witness.is_some());
    assert!(fail[0].detail.contains("nodes [STATED]: expected 6, observed 5"), "{}", fail[0].detail);
    let v = validator(include_str!("../schema/report.schema.json"));
    assert_valid(&v, &serde_json::from_str(&report.json()).unwrap(), "failing report");
}

#[test]
fn schema_rejects_a_failure_without_witness() {
    let v = validator(include_str!("../schema/report.schema.json"));
    let report = harness::run_catalog(&catalog::matching(Some("E1")), Some("E1"), 0, 0, &RunOptions::default());
    let mut doc: serde_json::Value = serde_json::from_str(&report.json()).unwrap();
    doc["results"][0]["status"] = "fail".into();
    doc["results"][0].as_object_mut().unwrap().remove("witness");
    assert!(!v.is_valid(&doc));
}

#[test]
fn report_is_sorted_by_instance_then_check() {
    let mut instances = catalog::matching(Some("F2"));
    instances.reverse();
    let report = harness::run_catalog(&instances, Some("F2"), 0, 0, &RunOptions::default());
    let keys: Vec<(&str, &str)> = report.results.iter().map(|r| (r.instance.as_str(), r.check.as_str())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
