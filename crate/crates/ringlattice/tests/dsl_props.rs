use proptest::prelude::*;

use ringlattice::build::build;
use ringlattice::catalog;
use ringlattice::dsl::{parse_spec, Expr, InstanceSpec, Located, Pos, RingExpr, Statement};
use ringlattice_core::DEFAULT_CAP;

fn located<T>(value: T) -> Located<T> {
    Located { pos: Pos::default(), value }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u64..50).prop_map(Expr::Int),
        prop::sample::select(vec!["x", "y", "a"]).prop_map(|s| Expr::Name(s.to_string())),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..5).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            prop::collection::vec(inner, 2..4).prop_map(Expr::Tuple),
        ]
    })
}

fn spec_with(exprs: Vec<Expr>) -> InstanceSpec {
    let statements = vec![
        located(Statement::Option { name: "cap".into(), value: 4096 }),
        located(Statement::Ring { name: "k".into(), expr: RingExpr::Zmod(3) }),
        located(Statement::Ring {
            name: "A".into(),
            expr: RingExpr::Quotient {
                ring: located("k".into()),
                relations: vec![located(Expr::Pow(Box::new(Expr::Name("x".into())), 2))],
            },
        }),
        located(Statement::Ext { name: "E".into(), ring: located("A".into()), base: exprs.into_iter().map(located).collect() }),
    ];
    InstanceSpec { statements }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn printed_specs_parse_back_to_the_same_tree(exprs in prop::collection::vec(expr(), 0..4)) {
        let spec = spec_with(exprs);
        let text = spec.to_string();
        let parsed = parse_spec(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&parsed, &spec, "{}", text);
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,200}") {
        if let Ok(spec) = parse_spec(&text) {
            let _ = build(&spec, 256);
        }
    }

    #[test]
    fn token_soup_never_panics(tokens in prop::collection::vec(prop::sample::select(vec![
        "ring", "ext", "option", "=", "zmod", "gf", "quotient", "product", "idealization", "module",
        "extension", "base", "(", ")", "[", "]", "{", "}", ",", ":", ";", "\n", "^", "+", "-", "*",
        "k", "A", "x", "a", "m1", "2", "3", "0", "65537", "99999999999999999999", "#", "cap",
    ]), 0..60)) {
        let text = tokens.join(" ");
        if let Ok(spec) = parse_spec(&text) {
            let _ = build(&spec, 256);
        }
    }

    #[test]
    fn damaged_catalog_specs_report_positions_inside_the_text(which in 0usize..64, cut in any::<prop::sample::Index>(), len in 1usize..6) {
        let all = catalog::catalog();
        let inst = &all[which % all.len()];
        let chars: Vec<char> = inst.spec.chars().collect();
        let start = cut.index(chars.len());
        let damaged: String = chars[..start].iter().chain(chars[(start + len).min(chars.len())..].iter()).collect();
        match parse_spec(&damaged) {
            Err(e) => {
                let lines = damaged.split('\n').count().max(1);
                prop_assert!(e.pos.line >= 1 && e.pos.line <= lines + 1, "{} in\n{}", e, damaged);
                prop_assert!(e.pos.col >= 1);
            }
            Ok(spec) => {
                let _ = build(&spec, DEFAULT_CAP);
            }
        }
    }
}

#[test]
fn catalog_specs_round_trip() {
    for inst in catalog::catalog() {
        let spec = parse_spec(&inst.spec).unwrap();
        let printed = spec.to_string();
        assert_eq!(parse_spec(&printed).unwrap(), spec, "{}", inst.name);
    }
}

#[test]
fn errors_name_line_and_column() {
    let cases = [
        ("ring k = zmod(1)\n", 1, "modulus"),
        ("ring k = zmod(2)\nring F = gf(4, 2)\n", 2, "prime"),
        ("ring k = zmod(2)\next E = extension(B, base=[])\n", 2, "B"),
        ("ring k = zmod(2)\nring k = zmod(3)\next E = extension(k, base=[])\n", 2, "k"),
        ("ring k = zmod(2)\next E = extension(k, base=[x +])\n", 2, ""),
        ("ring k = zmod(2)\n", 2, "ext"),
    ];
    for (text, line, needle) in cases {
        let err = parse_spec(text).expect_err(text);
        assert_eq!(err.pos.line, line, "{text}: {err}");
        assert!(err.message.contains(needle), "{text}: {err}");
        assert!(err.to_string().starts_with(&format!("line {line}, column ")));
    }
}

#[test]
fn unknown_generator_is_a_build_error() {
    let spec = parse_spec("ring k = zmod(2)\nring A = quotient(k, [x^2])\next E = extension(A, base=[y])\n").unwrap();
    let err = build(&spec, DEFAULT_CAP).expect_err("y is not a generator");
    assert_eq!(err.pos.line, 3);
    assert!(err.message.contains('y'), "{err}");
}

#[test]
fn cap_is_enforced_during_construction() {
    let spec = parse_spec("ring F = gf(2, 10)\next E = extension(F, base=[])\n").unwrap();
    assert!(build(&spec, 512).is_err());
    assert!(build(&spec, 1024).is_ok());
}
