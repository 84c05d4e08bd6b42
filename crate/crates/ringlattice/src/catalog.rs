//! The curated instance catalog and the random instance generator.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// Worked out by hand for this instance.
    Stated,
    /// Immediate from the construction.
    Trivial,
    /// Produced by the brute-force oracle during `--regen-expectations`.
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Stated => "STATED",
            Provenance::Trivial => "TRIVIAL",
            Provenance::Derived => "DERIVED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(u64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub key: String,
    pub value: Value,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct CatalogInstance {
    pub name: String,
    pub spec: String,
    pub description: String,
    pub expectations: Vec<Expectation>,
}

const K2: &str = "ring k = zmod(2)\n";

/// Spec text of every curated instance, in catalog order.
fn curated() -> Vec<(&'static str, &'static str, String)> {
    let gf = |p: u32, n: u32| format!("ring F = gf({p}, {n})\next E = extension(F, base=[])\n");
    let mut v = vec![
        ("E1", "F2 ⊂ F2[x]/(x²)", format!("{K2}ring A = quotient(k, [x^2])\next E = extension(A, base=[])\n")),
        ("E2", "F2 ⊂ F2 × F2", format!("{K2}ring S = product(k, k)\next E = extension(S, base=[])\n")),
        ("E3", "F2 ⊂ F4", gf(2, 2)),
        (
            "E4",
            "F2 ⊂ F2[x,y]/(x,y)²",
            format!("{K2}ring A = quotient(k, [x^2, x*y, y^2])\next E = extension(A, base=[])\n"),
        ),
        (
            "E5",
            "F2 ⊂ F2[x]/(x²) × F4",
            format!("{K2}ring A = quotient(k, [x^2])\nring K = gf(2, 2)\nring S = product(A, K)\next E = extension(S, base=[])\n"),
        ),
        (
            "E6",
            "R ⊂ R × R[X]/(X², tX) with R = F2[t]/(t²)",
            format!(
                "{K2}ring R = quotient(k, [t^2])\nring B = quotient(R, [X^2, t*X])\nring S = product(R, B)\next E = extension(S, base=[(t, t)])\n"
            ),
        ),
        ("E7", "F2 ⊂ F16", gf(2, 4)),
        ("E8", "F2 ⊂ F64", gf(2, 6)),
        (
            "E9",
            "Z/4 ⊂ Z/4[x]/(x² + x + 1)",
            "ring z = zmod(4)\nring A = quotient(z, [x^2 + x + 1])\next E = extension(A, base=[])\n".into(),
        ),
        (
            "E10",
            "F2 ⊂ F4[x]/(x²)",
            "ring F = gf(2, 2)\nring A = quotient(F, [x^2])\next E = extension(A, base=[])\n".into(),
        ),
        ("E11", "Z/4 ⊂ Z/4[x]/(x²)", "ring z = zmod(4)\nring A = quotient(z, [x^2])\next E = extension(A, base=[])\n".into()),
        (
            "E_split",
            "F2 × F2 ⊂ F4 × F2[x]/(x²)",
            format!("{K2}ring K = gf(2, 2)\nring A = quotient(k, [x^2])\nring S = product(K, A)\next E = extension(S, base=[(1, 0)])\n"),
        ),
        ("boolean_F2_cubed", "F2 ⊂ F2³", format!("{K2}ring S = product(k, k, k)\next E = extension(S, base=[])\n")),
        ("F2_x_F4", "F2 ⊂ F2 × F4", format!("{K2}ring K = gf(2, 2)\nring S = product(k, K)\next E = extension(S, base=[])\n")),
        (
            "diagonal_R_in_RxR",
            "R ⊂ R × R with R = F2[t]/(t²)",
            format!("{K2}ring R = quotient(k, [t^2])\nring S = product(R, R)\next E = extension(S, base=[(t, t)])\n"),
        ),
        (
            "branched_ramified_chain",
            "F2[t]/(t²) + F4·t ⊂ F2[t]/(t²) × F4[t]/(t²)",
            format!(
                "{K2}ring R = quotient(k, [t^2])\nring F = gf(2, 2)\nring B = quotient(F, [t^2])\nring S = product(R, B)\next E = extension(S, base=[(t, t), (0, a*t)])\n"
            ),
        ),
        ("boolean_F2_4", "F2 ⊂ F2⁴", format!("{K2}ring S = product(k, k, k, k)\next E = extension(S, base=[])\n")),
        ("boolean_F2_5", "F2 ⊂ F2⁵", format!("{K2}ring S = product(k, k, k, k, k)\next E = extension(S, base=[])\n")),
        ("boolean_F2_6", "F2 ⊂ F2⁶", format!("{K2}ring S = product(k, k, k, k, k, k)\next E = extension(S, base=[])\n")),
        ("F2_x_cubed", "F2 ⊂ F2[x]/(x³)", format!("{K2}ring A = quotient(k, [x^3])\next E = extension(A, base=[])\n")),
        (
            "F3_dual_numbers",
            "F3 ⊂ F3[x]/(x²)",
            "ring k = zmod(3)\nring A = quotient(k, [x^2])\next E = extension(A, base=[])\n".into(),
        ),
        ("F3_x_F3", "F3 ⊂ F3 × F3", "ring k = zmod(3)\nring S = product(k, k)\next E = extension(S, base=[])\n".into()),
        (
            "F3_x_cubed",
            "F3 ⊂ F3[x]/(x³)",
            "ring k = zmod(3)\nring A = quotient(k, [x^3])\next E = extension(A, base=[])\n".into(),
        ),
        (
            "idealization_F2_F2",
            "F2 ⊂ F2 (+) F2",
            format!("{K2}ring I = idealization(k, module([2], {{1: [[1]]}}))\next E = extension(I, base=[])\n"),
        ),
        (
            "idealization_F2_F2sq",
            "F2 ⊂ F2 (+) F2²",
            format!("{K2}ring I = idealization(k, module([2, 2], {{1: [[1, 0], [0, 1]]}}))\next E = extension(I, base=[])\n"),
        ),
        (
            "idealization_F4_F4",
            "F2 ⊂ F4 (+) F4",
            "ring K = gf(2, 2)\nring I = idealization(K, module([2, 2], {a: [[0, 1], [1, 1]]}))\next E = extension(I, base=[])\n"
                .into(),
        ),
        (
            "Z4_x2_minus_2",
            "Z/4 ⊂ Z/4[x]/(x² − 2)",
            "ring z = zmod(4)\nring A = quotient(z, [x^2 - 2])\next E = extension(A, base=[])\n".into(),
        ),
        (
            "Z6_dual_numbers",
            "Z/6 ⊂ Z/6[x]/(x²)",
            "ring z = zmod(6)\nring A = quotient(z, [x^2])\next E = extension(A, base=[])\n".into(),
        ),
        (
            "F2sq_in_F4sq",
            "F2 × F2 ⊂ F4 × F4",
            "ring K = gf(2, 2)\nring S = product(K, K)\next E = extension(S, base=[(1, 0)])\n".into(),
        ),
        (
            "dual_x_F2",
            "F2 ⊂ F2[x]/(x²) × F2",
            format!("{K2}ring A = quotient(k, [x^2])\nring S = product(A, k)\next E = extension(S, base=[])\n"),
        ),
        (
            "dual_x_dual",
            "F2 ⊂ F2[x]/(x²) × F2[x]/(x²)",
            format!("{K2}ring A = quotient(k, [x^2])\nring S = product(A, A)\next E = extension(S, base=[])\n"),
        ),
        (
            "F2_x_F4_over_diagonal",
            "F2 × F2 ⊂ F2 × F4",
            format!("{K2}ring K = gf(2, 2)\nring S = product(k, K)\next E = extension(S, base=[(1, 0)])\n"),
        ),
        ("F4_x_F4", "F2 ⊂ F4 × F4", "ring K = gf(2, 2)\nring S = product(K, K)\next E = extension(S, base=[])\n".into()),
        (
            "F4_dual_over_F4",
            "F4 ⊂ F4[x]/(x²)",
            "ring F = gf(2, 2)\nring A = quotient(F, [x^2])\next E = extension(A, base=[a])\n".into(),
        ),
        (
            "Z9_x2_minus_3",
            "Z/9 ⊂ Z/9[x]/(x² − 3)",
            "ring z = zmod(9)\nring A = quotient(z, [x^2 - 3])\next E = extension(A, base=[])\n".into(),
        ),
        (
            "Z8_x2_minus_2",
            "Z/8 ⊂ Z/8[x]/(x² − 2)",
            "ring z = zmod(8)\nring A = quotient(z, [x^2 - 2])\next E = extension(A, base=[])\n".into(),
        ),
    ];
    for (p, n) in [(2u32, 1u32), (2, 3), (2, 5), (3, 1), (3, 2), (3, 3), (3, 4), (3, 5), (3, 6)] {
        let name: &'static str = Box::leak(format!("GF{p}^{n}").into_boxed_str());
        let desc: &'static str = Box::leak(format!("F{p} ⊂ F{}", (p as u64).pow(n)).into_boxed_str());
        v.push((name, desc, gf(p, n)));
    }
    v
}

fn expect(key: &str, value: Value, provenance: Provenance) -> Expectation {
    Expectation { key: key.to_string(), value, provenance }
}

/// Hand-entered expectations: values worked out by hand for the textbook
/// examples, and values immediate from the construction.
fn stated(name: &str) -> Vec<Expectation> {
    use Provenance::{Stated, Trivial};
    use Value::{Bool, Int, Text};
    let t = |s: &str| Text(s.to_string());
    match name {
        "E2" => vec![expect("nodes", Int(2), Trivial), expect("edge:R -> R[(0, 1)]", t("d"), Trivial)],
        "E3" => vec![expect("nodes", Int(2), Trivial), expect("edge:R -> R[a]", t("i"), Trivial)],
        "E1" => vec![expect("nodes", Int(2), Trivial), expect("edge:R -> R[x]", t("r"), Trivial)],
        "E4" => vec![
            expect("nodes", Int(5), Stated),
            expect("length", Int(2), Stated),
            expect("witness", t("M3"), Stated),
            expect("distributive", Bool(false), Stated),
            expect("subintegral", Bool(true), Stated),
            expect("arithmetic", Bool(false), Stated),
        ],
        "E5" => vec![
            expect("nodes", Int(6), Stated),
            expect("length", Int(3), Stated),
            expect("distributive", Bool(true), Stated),
            expect("seminormalization", t("R[(x, 0)]"), Stated),
            expect("t_closure", t("R[(0, 1), (x, 0)]"), Stated),
            expect("u_closure", t("R[(0, 1)]"), Stated),
            expect("edge:R -> R[(x, 0)]", t("r"), Stated),
            expect("edge:R[(x, 0)] -> R[(0, 1), (x, 0)]", t("d"), Stated),
            expect("edge:R -> R[(0, 1)]", t("d"), Stated),
            expect("edge:R[(0, 1)] -> R[(0, 1), (x, 0)]", t("r"), Stated),
            expect("edge:R[(0, 1)] -> R[(0, 1), (0, a)]", t("i"), Stated),
            expect("edge:R[(0, 1), (x, 0)] -> R[(0, 1), (0, a), (x, 0)]", t("i"), Stated),
            expect("edge:R[(0, 1), (0, a)] -> R[(0, 1), (0, a), (x, 0)]", t("r"), Stated),
        ],
        "E6" => vec![
            expect("seminormalization", t("R[(0, X), (0, t)]"), Stated),
            expect("u_closure", t("R[(0, 1)]"), Stated),
            expect("edge:R -> R[(0, t)]", t("r"), Stated),
            expect("edge:R[(0, t)] -> R[(0, 1)]", t("d"), Stated),
            expect("edge:R[(0, 1)] -> R[(0, 1), (0, X)]", t("r"), Stated),
            expect("fiber_sizes", t("[2]"), Stated),
        ],
        "E10" => vec![expect("catenarian", Bool(false), Stated), expect("distributive", Bool(false), Stated)],
        _ => Vec::new(),
    }
}

/// Expectations produced by the brute-force oracle, as committed.
pub const DERIVED_EXPECTATIONS: &str = include_str!("../catalog/expectations.json");

pub type DerivedTable = BTreeMap<String, BTreeMap<String, Value>>;

pub fn derived_table() -> DerivedTable {
    serde_json::from_str(DERIVED_EXPECTATIONS).expect("committed expectations file is valid JSON")
}

pub fn catalog() -> Vec<CatalogInstance> {
    let derived = derived_table();
    curated()
        .into_iter()
        .map(|(name, desc, spec)| {
            let mut expectations = stated(name);
            if let Some(d) = derived.get(name) {
                for (k, v) in d {
                    expectations.push(expect(k, v.clone(), Provenance::Derived));
                }
            }
            CatalogInstance { name: name.to_string(), spec, description: desc.to_string(), expectations }
        })
        .collect()
}

pub fn find(name: &str) -> Option<CatalogInstance> {
    catalog().into_iter().find(|c| c.name == name)
}

/// Instances whose name contains `pattern` (all of them for `None`).
pub fn matching(pattern: Option<&str>) -> Vec<CatalogInstance> {
    catalog().into_iter().filter(|c| pattern.is_none_or(|p| c.name.contains(p))).collect()
}

// ---------------------------------------------------------------------------
// Random instances

/// Upper bound on the ambient ring size of generated instances.
pub const RANDOM_SIZE_BUDGET: usize = 64;

/// Local building blocks: (spec lines defining ring `B{i}`, size).
fn block(rng: &mut ChaCha8Rng, i: usize) -> (String, usize) {
    let name = format!("B{i}");
    match rng.gen_range(0..6) {
        0 => {
            let (n, size) = *[(2u32, 2usize), (3, 3), (4, 4), (8, 8), (9, 9)].choose(rng).expect("nonempty");
            (format!("ring {name} = zmod({n})\n"), size)
        }
        1 => {
            let (p, k, size) = *[(2u32, 2u32, 4usize), (2, 3, 8), (3, 2, 9)].choose(rng).expect("nonempty");
            (format!("ring {name} = gf({p}, {k})\n"), size)
        }
        2 => {
            let p = *[2u32, 3].choose(rng).expect("nonempty");
            (format!("ring {name}k = zmod({p})\nring {name} = quotient({name}k, [x^2])\n"), (p * p) as usize)
        }
        3 => (format!("ring {name}k = gf(2, 2)\nring {name} = quotient({name}k, [x^2])\n"), 16),
        4 => (format!("ring {name}k = zmod(2)\nring {name} = quotient({name}k, [x^3])\n"), 8),
        _ => {
            let (p, size) = *[(2u32, 4usize), (3, 9)].choose(rng).expect("nonempty");
            (format!("ring {name}k = zmod({p})\nring {name} = idealization({name}k, module([{p}], {{1: [[1]]}}))\n"), size)
        }
    }
}

/// Deterministic random instances built from products of local blocks with
/// a random generated base ring.
pub fn random_instances(seed: u64, count: usize) -> Vec<CatalogInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let factors = rng.gen_range(1..=3);
        let mut spec = String::new();
        let mut size = 1usize;
        let mut names = Vec::new();
        for i in 0..factors {
            let (text, s) = block(&mut rng, i);
            if size * s > RANDOM_SIZE_BUDGET {
                break;
            }
            size *= s;
            spec.push_str(&text);
            names.push(format!("B{i}"));
        }
        if names.is_empty() {
            continue;
        }
        let ambient = if names.len() == 1 {
            names[0].clone()
        } else {
            spec.push_str(&format!("ring S = product({})\n", names.join(", ")));
            "S".to_string()
        };
        // Base generators: random small elements of the ambient ring.
        let gens = rng.gen_range(0..=2);
        let mut base = Vec::new();
        for _ in 0..gens {
            base.push(random_element(&mut rng, &spec, names.len()));
        }
        spec.push_str(&format!("ext E = extension({ambient}, base=[{}])\n", base.join(", ")));
        let idx = out.len();
        out.push(CatalogInstance {
            name: format!("random_{seed}_{idx:03}"),
            spec,
            description: format!("random instance {idx} for seed {seed}"),
            expectations: Vec::new(),
        });
    }
    out
}

/// An element expression: a tuple over the factors or a single component.
fn random_element(rng: &mut ChaCha8Rng, spec: &str, factors: usize) -> String {
    let mut component = |i: usize| -> String {
        let name = format!("ring B{i} = ");
        let line = spec.lines().find(|l| l.starts_with(&name)).unwrap_or("");
        let generator = if line.contains("gf(") {
            Some("a")
        } else if line.contains("quotient(") {
            Some("x")
        } else if line.contains("idealization(") {
            Some("m1")
        } else {
            None
        };
        let c: u32 = rng.gen_range(0..3);
        match generator {
            Some(g) if rng.gen_bool(0.7) => {
                if c == 0 {
                    g.to_string()
                } else {
                    format!("{g} + {c}")
                }
            }
            _ => c.to_string(),
        }
    };
    if factors == 1 {
        component(0)
    } else {
        let parts: Vec<String> = (0..factors).map(&mut component).collect();
        format!("({})", parts.join(", "))
    }
}
