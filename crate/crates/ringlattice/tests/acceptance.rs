//! Acceptance criteria. Runs without the libtest harness so each criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ringlattice::catalog;
use ringlattice::harness::{self, Prepared, RunOptions};
use ringlattice_core::verify::{self, procedures_disagree, Analysis, Status};
use ringlattice_core::FiniteLattice;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn prepared(name: &str) -> Result<Prepared, String> {
    let inst = catalog::find(name).ok_or(format!("{name} is not in the catalog"))?;
    harness::prepare(name, &inst.spec, &RunOptions::default())
}

fn check_passes(a: &Analysis, name: &str) -> Result<String, String> {
    let c = verify::find_check(name).ok_or(format!("no check {name}"))?;
    let o = verify::evaluate(c, a);
    ensure!(o.status == Status::Pass, "{name}: {} {}", o.status.as_str(), o.detail);
    Ok(o.detail)
}

fn example_with_six_rings() -> Outcome {
    let p = prepared("E5")?;
    let s = &p.summary;
    ensure!(s.node_count == 6, "{} intermediate rings", s.node_count);
    let d = &s.decomposition;
    // +k = k + (kx × 0), tk = F2[x]/(x²) × F2, uk = F2 × F2.
    for (what, node, label, size) in [
        ("seminormalization", &d.seminormalization, "R[(x, 0)]", 4),
        ("t-closure", &d.t_closure, "R[(0, 1), (x, 0)]", 8),
        ("u-closure", &d.u_closure, "R[(0, 1)]", 4),
    ] {
        ensure!(node.label == label, "{what} is {}", node.label);
        ensure!(s.nodes[node.id].size == size, "{what} has {} elements", s.nodes[node.id].size);
    }
    ensure!(s.verdicts.distributive, "not distributive");
    let expected = [
        ("R", "R[(x, 0)]", 'r'),
        ("R[(x, 0)]", "R[(0, 1), (x, 0)]", 'd'),
        ("R", "R[(0, 1)]", 'd'),
        ("R[(0, 1)]", "R[(0, 1), (x, 0)]", 'r'),
        ("R[(0, 1)]", "R[(0, 1), (0, a)]", 'i'),
        ("R[(0, 1), (x, 0)]", "R[(0, 1), (0, a), (x, 0)]", 'i'),
        ("R[(0, 1), (0, a)]", "R[(0, 1), (0, a), (x, 0)]", 'r'),
    ];
    ensure!(s.edges.len() == expected.len(), "{} covering pairs", s.edges.len());
    for (from, to, t) in expected {
        ensure!(s.edge_type(from, to) == Some(t), "{from} -> {to} is {:?}", s.edge_type(from, to));
    }
    Ok("6 rings, +k/tk/uk as stated, distributive, 7 typed edges".into())
}

fn length_and_size_formulas() -> Outcome {
    let p = prepared("E5")?;
    let a = &p.analysis;
    let o = a.order();
    let d = a.decomposition;
    let l_r_plus = o.length_between(0, d.plus);
    let l_t_s = o.length_between(d.t, a.top());
    let max_s = a.max_count(a.top());
    let length = o.length();
    ensure!(length == 3 && l_r_plus + l_t_s + max_s - 1 == 3, "ℓ = {length}, terms {l_r_plus} + {l_t_s} + {max_s} - 1");
    ensure!((l_r_plus, l_t_s, max_s) == (1, 1, 2), "terms {l_r_plus}, {l_t_s}, {max_s}");
    let supp = a.lattice.msupp(d.u, d.t);
    ensure!(supp.len() == 1 && a.max_count(d.u) == 2, "uR ⊆ tR support {supp:?}");
    let other = 1 - supp[0];
    let v = a.lattice.splitter(d.u, a.top(), &[other]).map_err(|e| e.to_string())?.ok_or("no splitter")?;
    let n_t_s = o.interval_size(d.t, a.top());
    let l_u_t = o.length_between(d.u, d.t);
    let n_u_v = o.interval_size(d.u, v);
    let rhs = l_r_plus + n_t_s + l_u_t * n_u_v + 1;
    ensure!(a.lattice.len() == 6 && rhs == 6, "|[k,S]| = {}, formula {rhs}", a.lattice.len());
    ensure!((n_t_s, l_u_t, n_u_v) == (2, 1, 2), "terms {n_t_s}, {l_u_t}, {n_u_v}");
    check_passes(a, "length_formula")?;
    check_passes(a, "cardinality_formula_two_point_support")?;
    Ok(format!("ℓ = 3 = {l_r_plus}+{l_t_s}+{max_s}-1, |[k,S]| = 6 = {l_r_plus}+{n_t_s}+{l_u_t}·{n_u_v}+1"))
}

fn remark_chain_types() -> Outcome {
    let p = prepared("E6")?;
    let a = &p.analysis;
    let d = a.decomposition;
    let base = a.node(0).len();
    let u = a.node(d.u);
    ensure!(u.len() == base * base && u.locals.len() == 2, "uR has {} elements, {} maximal ideals", u.len(), u.locals.len());
    ensure!(p.summary.nodes[d.u].label == "R[(0, 1)]", "uR is {}", p.summary.nodes[d.u].label);
    let plus_in_u = a.lattice.decomposition(0, d.u).map_err(|e| e.to_string())?.plus;
    let step = |x: usize, y: usize| a.edge_type(x, y).map(|t| t.letter());
    ensure!(step(0, plus_in_u) == Some('r'), "R ⊂ +(R²) is {:?}", step(0, plus_in_u));
    ensure!(step(plus_in_u, d.u) == Some('d'), "+(R²) ⊂ uR is {:?}", step(plus_in_u, d.u));
    ensure!(step(d.u, a.top()) == Some('r'), "uR ⊂ S is {:?}", step(d.u, a.top()));
    ensure!(a.fiber_sizes() == vec![2], "fibers {:?}", a.fiber_sizes());
    Ok("uR = R², chain r/d/r, fiber of size 2".into())
}

fn diamond_detection() -> Outcome {
    let p = prepared("E4")?;
    let s = &p.summary;
    ensure!(s.node_count == 5 && s.length == 2, "{} rings, length {}", s.node_count, s.length);
    let w = s.verdicts.witness.as_ref().ok_or("no witness")?;
    ensure!(w.kind == "M3" && w.nodes.len() == 5, "witness {} {:?}", w.kind, w.nodes);
    ensure!(!s.verdicts.distributive, "distributive");
    ensure!(s.flags.get("subintegral") == Some(&true), "not subintegral");
    ensure!(s.flags.get("arithmetic") == Some(&false), "arithmetic");
    Ok(format!("5 rings, length 2, M3 on {:?}", w.nodes))
}

fn non_catenarian_example() -> Outcome {
    let p = prepared("E10")?;
    let v = &p.summary.verdicts;
    ensure!(!v.catenarian, "catenarian");
    ensure!(!v.distributive, "distributive");
    let (_, pair) = p.analysis.order().catenarian();
    let (lo, hi) = pair.ok_or("no chain-length witness")?;
    Ok(format!("chains of different length between {} and {}", p.summary.label(lo), p.summary.label(hi)))
}

fn birkhoff_agreement() -> Outcome {
    let opts = RunOptions::default();
    let mut prepared = Vec::new();
    for inst in catalog::catalog() {
        let p = harness::prepare(&inst.name, &inst.spec, &opts)?;
        ensure!(procedures_disagree(p.analysis.order()).is_none(), "{}: procedures disagree", inst.name);
        check_passes(&p.analysis, "distributivity_procedures_agree").map_err(|e| format!("{}: {e}", inst.name))?;
        prepared.push(p);
    }
    let analyses: Vec<&Analysis> = prepared.iter().map(|p| &p.analysis).collect();
    let samples = harness::sample_subintervals(&analyses, harness::SUBINTERVAL_SAMPLES, harness::SUBINTERVAL_SEED);
    ensure!(samples.len() >= 1000, "only {} sub-intervals", samples.len());
    for (p, o) in prepared.iter().zip(harness::subinterval_outcomes(&analyses, &samples)) {
        ensure!(o.status != Status::Fail, "{}: {}", p.summary.instance, o.detail);
    }
    Ok(format!("{} catalog lattices and {} sampled sub-intervals agree", prepared.len(), samples.len()))
}

fn finite_field_galois() -> Outcome {
    let mut done = 0;
    for p in [2u64, 3] {
        for n in 1u32..=6 {
            let text = format!("ring F = gf({p}, {n})\next E = extension(F, base=[])\n");
            let prep = harness::prepare(&format!("F{p}^{n}"), &text, &RunOptions::default())?;
            let a = &prep.analysis;
            let degree = |i: usize| {
                let mut q = 1usize;
                let mut d = 0u64;
                while q < a.node(i).len() {
                    q *= p as usize;
                    d += 1;
                }
                d
            };
            let (div, values) = FiniteLattice::divisors(u64::from(n));
            ensure!(a.lattice.len() == div.len(), "F{p}^{n}: {} subfields, {} divisors", a.lattice.len(), div.len());
            // Node i maps to the divisor with the same degree; inclusion must be divisibility.
            for x in 0..a.lattice.len() {
                ensure!(values.contains(&degree(x)), "F{p}^{n}: degree {}", degree(x));
                for y in 0..a.lattice.len() {
                    ensure!(a.order().leq(x, y) == (degree(y) % degree(x) == 0), "F{p}^{n}: order differs at {x},{y}");
                }
            }
            ensure!(a.distributive(), "F{p}^{n}: not distributive");
            let squarefree = (2..=n).all(|d| n % (d * d) != 0);
            ensure!(a.verdict.boolean_lattice == squarefree, "F{p}^{n}: boolean = {}", a.verdict.boolean_lattice);
            if n > 1 {
                check_passes(a, "finite_field_subfields_form_divisor_lattice")?;
            }
            done += 1;
        }
    }
    Ok(format!("{done} fields, divisor lattices, Boolean exactly for squarefree degree"))
}

fn localization_products() -> Outcome {
    let mut n = 0;
    for inst in catalog::catalog() {
        let p = harness::prepare(&inst.name, &inst.spec, &RunOptions::default())?;
        if p.analysis.msupp.len() < 2 {
            continue;
        }
        check_passes(&p.analysis, "local_product_formulas").map_err(|e| format!("{}: {e}", inst.name))?;
        n += 1;
    }
    ensure!(n >= 3, "only {n} multi-factor instances");
    Ok(format!("{n} instances with support of two or more points factor exactly"))
}

fn full_suite() -> Outcome {
    let report = harness::run_catalog(&catalog::catalog(), None, 0, 0, &RunOptions::default());
    ensure!(report.is_green(), "{} failures, first: {:?}", report.totals.failed, report.failures().next());
    for c in verify::checks() {
        ensure!(report.checks.iter().any(|k| k.check == c.name), "{} missing from coverage", c.name);
    }
    let flagged = &report.totals.zero_applicable_checks;
    ensure!(
        report.checks.iter().all(|c| c.zero_applicable == (c.applicable == 0)),
        "zero-applicability flags inconsistent"
    );
    Ok(format!(
        "{} checks on {} instances, 0 failures, {} checks with no applicable instance{}",
        report.checks.len(),
        report.totals.instances,
        flagged.len(),
        if flagged.is_empty() { String::new() } else { format!(" ({})", flagged.join(", ")) }
    ))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("six-ring example: nodes, canonical decomposition, edge types", example_with_six_rings, Duration::from_secs(1)),
        ("length and cardinality formulas on the six-ring example", length_and_size_formulas, Duration::from_secs(1)),
        ("u-closure R² and r/d/r chain over F2[t]/(t²)", remark_chain_types, Duration::from_secs(5)),
        ("diamond detection on F2[x,y]/(x,y)²", diamond_detection, Duration::from_secs(1)),
        ("non-catenarian F2 ⊂ F4[x]/(x²)", non_catenarian_example, Duration::from_secs(1)),
        ("distributivity procedures agree on catalog and sampled sub-intervals", birkhoff_agreement, Duration::from_secs(60)),
        ("finite-field subfield lattices", finite_field_galois, Duration::from_secs(10)),
        ("localization product formulas", localization_products, Duration::from_secs(30)),
        ("full check suite over the catalog", full_suite, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:?}, budget {budget:?}")),
            r => r,
        };
        match result {
            Ok(msg) => println!("PASS {} {name}: {msg} [{} ms]", i + 1, took.as_millis()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} [{} ms]", i + 1, took.as_millis());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
