use std::collections::BTreeSet;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ringlattice"));
    c.env_remove("RINGLATTICE_CAP").env_remove("RINGLATTICE_SEED");
    c
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_list_names_the_worked_examples() {
    let o = run(bin().args(["catalog", "list"]));
    assert!(o.status.success());
    let text = stdout(&o);
    let names: BTreeSet<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    for n in ["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10", "E11"] {
        assert!(names.contains(n), "{n} missing from\n{text}");
    }
}

/// Minimal structural DOT check: a single digraph whose edges connect
/// declared nodes and carry a minimal-type label.
fn check_dot(dot: &str) -> (usize, usize) {
    assert!(dot.starts_with("digraph lattice {\n"), "{dot}");
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    let mut nodes = BTreeSet::new();
    let mut edges = 0;
    for line in dot.lines().skip(1) {
        let line = line.trim();
        if line == "}" || line.starts_with("rankdir") || line.starts_with("node ") {
            continue;
        }
        assert!(line.ends_with("];"), "{line}");
        let (head, attrs) = line.split_once(" [").unwrap();
        assert!(attrs.starts_with("label=\""));
        assert_eq!(attrs.matches('"').count() - attrs.matches("\\\"").count(), 2, "{line}");
        if let Some((a, b)) = head.split_once(" -> ") {
            assert!(nodes.contains(a) && nodes.contains(b), "{line}");
            assert!(["label=\"i\"];", "label=\"d\"];", "label=\"r\"];"].contains(&attrs), "{line}");
            edges += 1;
        } else {
            assert!(head.starts_with('n') && head[1..].parse::<usize>().is_ok(), "{line}");
            nodes.insert(head);
        }
    }
    (nodes.len(), edges)
}

#[test]
fn analyze_writes_dot_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("e5.dot");
    let json = dir.path().join("e5.json");
    let o = run(bin().args(["analyze", "E5", "--dot"]).arg(&dot).arg("--json").arg(&json));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("6 intermediate rings, length 3"), "{text}");
    assert!(text.contains("distributive: yes"));
    let (n, e) = check_dot(&std::fs::read_to_string(&dot).unwrap());
    assert_eq!((n, e), (6, 7));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["node_count"], 6);
    assert_eq!(v["decomposition"]["u_closure"]["label"], "R[(0, 1)]");
}

#[test]
fn every_catalog_dot_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["E4", "E6", "E10", "boolean_F2_5", "GF3^6", "idealization_F4_F4"] {
        let dot = dir.path().join("out.dot");
        let o = run(bin().args(["analyze", name, "--dot"]).arg(&dot));
        assert!(o.status.success(), "{name}");
        check_dot(&std::fs::read_to_string(&dot).unwrap());
    }
}

#[test]
fn analyze_reads_spec_files_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("dual.rl");
    std::fs::write(&good, "# dual numbers over F3\nring k = zmod(3)\nring A = quotient(k, [x^2])\next E = extension(A, base=[])\n").unwrap();
    let o = run(bin().arg("analyze").arg(&good));
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("instance dual: |S| = 9, |R| = 3"));
    let bad = dir.path().join("bad.rl");
    std::fs::write(&bad, "ring k = zmod(3)\next E = extension(k, base=[x +])\n").unwrap();
    let o = run(bin().arg("analyze").arg(&bad));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column"));
    let o = run(bin().args(["analyze", "no_such_instance_or_file"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cap_precedence_is_flag_then_env_then_spec() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.rl");
    std::fs::write(&f, "option cap = 16\nring F = gf(2, 5)\next E = extension(F, base=[])\n").unwrap();
    // The spec's own cap rejects F32.
    assert_eq!(run(bin().arg("analyze").arg(&f)).status.code(), Some(2));
    // Environment beats the spec.
    assert!(run(bin().arg("analyze").arg(&f).env("RINGLATTICE_CAP", "64")).status.success());
    // The flag beats the environment.
    let o = run(bin().arg("analyze").arg(&f).args(["--cap", "8"]).env("RINGLATTICE_CAP", "64"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn random_verification_is_byte_identical_and_seed_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for (i, env) in [(0, false), (1, false), (2, true)] {
        let json = dir.path().join(format!("r{i}.json"));
        let mut cmd = bin();
        cmd.args(["verify", "E5", "--random", "25"]).arg("--json").arg(&json);
        if env {
            cmd.env("RINGLATTICE_SEED", "7");
        } else {
            cmd.args(["--seed", "7"]);
        }
        let o = run(&mut cmd);
        assert!(o.status.success(), "{}", stdout(&o));
        outs.push((o.stdout, std::fs::read(&json).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);
    let other = run(bin().args(["verify", "E5", "--random", "25", "--seed", "8"]));
    assert_ne!(other.stdout, outs[0].0);
}

#[test]
fn verify_exit_codes() {
    let o = run(bin().args(["verify", "E4"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
    let o = run(bin().args(["verify", "no_such_pattern"]));
    assert_eq!(o.status.code(), Some(2));
    let o = run(bin().args(["verify", "--all", "E4"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn regen_writes_the_committed_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("expectations.json");
    let o = run(bin().args(["verify", "--all", "--regen-expectations", "--expectations-out"]).arg(&out));
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), ringlattice::catalog::DERIVED_EXPECTATIONS);
}
