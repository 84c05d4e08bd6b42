//! The analysis compared with the saturation oracle, which shares no code
//! with the core enumeration.

use ringlattice::catalog::{self, CatalogInstance, Value};
use ringlattice::harness::{self, observed, RunOptions};
use ringlattice::oracle::{self, ORACLE_RING_LIMIT};

fn compare(inst: &CatalogInstance) -> usize {
    let opts = RunOptions::default();
    let p = harness::prepare(&inst.name, &inst.spec, &opts).unwrap_or_else(|e| panic!("{}: {e}", inst.name));
    let ring = &p.built.ambient().ring;
    if ring.size() > ORACLE_RING_LIMIT {
        return 0;
    }
    let facts = oracle::facts(ring, &p.built.base_generators);
    for (key, want) in &facts {
        let got = observed(&p.summary, key).unwrap_or_else(|| panic!("{}: no value for {key}", inst.name));
        assert_eq!(&got, want, "{}: {key}", inst.name);
    }
    1
}

#[test]
fn catalog_matches_oracle() {
    let compared: usize = catalog::catalog().iter().map(compare).sum();
    assert!(compared >= 40, "only {compared} instances compared");
}

#[test]
fn random_instances_match_oracle() {
    for seed in [1u64, 2, 3] {
        for inst in catalog::random_instances(seed, 40) {
            compare(&inst);
        }
    }
}

#[test]
fn committed_expectations_are_current() {
    let fresh = harness::regenerate_expectations(&catalog::catalog(), &RunOptions::default()).unwrap();
    assert_eq!(fresh, catalog::DERIVED_EXPECTATIONS, "run `ringlattice verify --all --regen-expectations`");
}

#[test]
fn oracle_sees_the_textbook_examples() {
    let get = |name: &str, key: &str| {
        let inst = catalog::find(name).unwrap();
        let spec = ringlattice::dsl::parse_spec(&inst.spec).unwrap();
        let built = ringlattice::build::build(&spec, 4096).unwrap();
        oracle::facts(&built.ambient().ring, &built.base_generators)[key].clone()
    };
    assert_eq!(get("E4", "nodes"), Value::Int(5));
    assert_eq!(get("E4", "distributive"), Value::Bool(false));
    assert_eq!(get("E5", "nodes"), Value::Int(6));
    assert_eq!(get("E5", "length"), Value::Int(3));
    assert_eq!(get("E10", "catenarian"), Value::Bool(false));
    assert_eq!(get("boolean_F2_5", "nodes"), Value::Int(52));
}
