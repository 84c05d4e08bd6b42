//! Core results compared with definitional brute force: subrings found by
//! scanning every subset, minimal types read off from conductors, and
//! lattice procedures run on random closure systems.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use ringlattice_core::extension::is_minimal_bruteforce;
use ringlattice_core::finring::Poly;
use ringlattice_core::{Elem, Extension, FiniteLattice, FiniteRing, MinimalType, DEFAULT_CAP};

fn mono(exps: &[u32]) -> Poly {
    Poly { terms: vec![(exps.to_vec(), 1)] }
}

fn quotient(base: &FiniteRing, vars: usize, rels: Vec<Poly>) -> FiniteRing {
    base.polynomial_quotient(vars, &rels, DEFAULT_CAP).unwrap().ring
}

/// Rings of at most 16 elements, small enough to scan every subset.
fn small_rings() -> Vec<(&'static str, FiniteRing)> {
    let f2 = FiniteRing::zmod(2, DEFAULT_CAP).unwrap();
    let f3 = FiniteRing::zmod(3, DEFAULT_CAP).unwrap();
    let z4 = FiniteRing::zmod(4, DEFAULT_CAP).unwrap();
    let gf4 = FiniteRing::gf(2, 2, DEFAULT_CAP).unwrap();
    let dual = quotient(&f2, 1, vec![mono(&[2])]);
    let mut v = vec![
        ("Z/12", FiniteRing::zmod(12, DEFAULT_CAP).unwrap()),
        ("F2^2", FiniteRing::product(&[&f2, &f2], DEFAULT_CAP).unwrap()),
        ("F2^3", FiniteRing::product(&[&f2, &f2, &f2], DEFAULT_CAP).unwrap()),
        ("F2^4", FiniteRing::product(&[&f2, &f2, &f2, &f2], DEFAULT_CAP).unwrap()),
        ("F3^2", FiniteRing::product(&[&f3, &f3], DEFAULT_CAP).unwrap()),
        ("F8", FiniteRing::gf(2, 3, DEFAULT_CAP).unwrap()),
        ("F16", FiniteRing::gf(2, 4, DEFAULT_CAP).unwrap()),
        ("F9", FiniteRing::gf(3, 2, DEFAULT_CAP).unwrap()),
        ("F2[x]/(x^3)", quotient(&f2, 1, vec![mono(&[3])])),
        ("F2[x]/(x^4)", quotient(&f2, 1, vec![mono(&[4])])),
        ("F2[x,y]/(x,y)^2", quotient(&f2, 2, vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])])),
        ("Z/4[x]/(x^2)", quotient(&z4, 1, vec![mono(&[2])])),
        ("F4[x]/(x^2)", quotient(&gf4, 1, vec![mono(&[2])])),
        ("F2 x F4", FiniteRing::product(&[&f2, &gf4], DEFAULT_CAP).unwrap()),
    ];
    v.push(("F2[x]/(x^2) x F4", FiniteRing::product(&[&dual, &gf4], DEFAULT_CAP).unwrap()));
    v.push(("F2[x]/(x^2)^2", FiniteRing::product(&[&dual, &dual], DEFAULT_CAP).unwrap()));
    v
}

fn closed(ring: &FiniteRing, mask: u64) -> bool {
    let n = ring.size();
    let has = |x: Elem| mask >> x & 1 == 1;
    (0..n as Elem).filter(|&x| has(x)).all(|x| (0..n as Elem).filter(|&y| has(y)).all(|y| has(ring.add(x, y)) && has(ring.mul(x, y))))
}

/// Every subring (containing 1) as a bit mask, by scanning all subsets.
fn subrings_by_scan(ring: &FiniteRing) -> BTreeSet<u64> {
    let n = ring.size();
    assert!(n <= 16);
    let must = 1u64 | 1u64 << ring.one();
    (0u64..1 << n).filter(|m| m & must == must && closed(ring, *m)).collect()
}

fn mask_of(members: impl Iterator<Item = Elem>) -> u64 {
    members.fold(0, |m, x| m | 1 << x)
}

#[test]
fn enumeration_matches_subset_scan() {
    for (name, ring) in small_rings() {
        if ring.size() > 16 {
            continue;
        }
        let expected = subrings_by_scan(&ring);
        let ext = Extension::new(Arc::new(ring), &[]);
        let l = ext.enumerate_interval(10_000).unwrap();
        let got: BTreeSet<u64> = l.nodes.iter().map(|s| mask_of(s.members.iter())).collect();
        assert_eq!(got, expected, "{name}");
    }
}

/// Minimal type from the definitions: with conductor `C = (lo : hi)`, the
/// step is decomposed when `hi/C` has a nontrivial idempotent, ramified when
/// it has a nonzero nilpotent, inert otherwise.
fn type_by_definition(ring: &FiniteRing, lo: &[Elem], hi: &[Elem]) -> MinimalType {
    let in_lo = |x: Elem| lo.contains(&x);
    let conductor: Vec<Elem> = lo.iter().copied().filter(|&r| hi.iter().all(|&s| in_lo(ring.mul(r, s)))).collect();
    let in_c = |x: Elem| conductor.contains(&x);
    let idempotent = hi.iter().any(|&e| !in_c(e) && !in_c(ring.sub(e, ring.one())) && in_c(ring.sub(ring.mul(e, e), e)));
    let nilpotent = hi.iter().any(|&x| !in_c(x) && in_c(ring.mul(x, x)));
    match (idempotent, nilpotent) {
        (true, _) => MinimalType::Decomposed,
        (false, true) => MinimalType::Ramified,
        (false, false) => MinimalType::Inert,
    }
}

#[test]
fn covers_are_minimal_with_definitional_types() {
    for (name, ring) in small_rings() {
        let ext = Extension::new(Arc::new(ring), &[]);
        let l = ext.enumerate_interval(10_000).unwrap();
        let ring = l.ring();
        let types = l.cover_types().unwrap();
        assert_eq!(types.len(), l.order.covers().len(), "{name}");
        for (a, b, t) in types {
            assert!(is_minimal_bruteforce(ring, &l.nodes[a], &l.nodes[b]), "{name}: {a} -> {b} not minimal");
            let lo: Vec<Elem> = l.nodes[a].members.iter().collect();
            let hi: Vec<Elem> = l.nodes[b].members.iter().collect();
            assert_eq!(t, type_by_definition(ring, &lo, &hi), "{name}: {a} -> {b}");
        }
        // Non-covers are not minimal.
        for a in 0..l.len() {
            for b in 0..l.len() {
                if a != b && l.order.leq(a, b) && !l.order.is_cover(a, b) {
                    assert!(!is_minimal_bruteforce(ring, &l.nodes[a], &l.nodes[b]), "{name}: {a} -> {b}");
                }
            }
        }
    }
}

#[test]
fn finite_field_lattices_are_divisor_lattices() {
    for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 4), (5, 2)] {
        let ext = Extension::new(Arc::new(FiniteRing::gf(p, n, DEFAULT_CAP).unwrap()), &[]);
        let l = ext.enumerate_interval(10_000).unwrap();
        let (div, values) = FiniteLattice::divisors(n as u64);
        assert_eq!(l.len(), div.len(), "F{p}^{n}");
        let sizes: Vec<u64> = values.iter().map(|d| p.pow(*d as u32)).collect();
        let mut got: Vec<u64> = l.nodes.iter().map(|s| s.len() as u64).collect();
        got.sort_unstable();
        let mut want = sizes.clone();
        want.sort_unstable();
        assert_eq!(got, want);
        let squarefree = (2..=n).all(|d| n % (d * d) != 0);
        assert_eq!(l.order.is_boolean().unwrap(), squarefree, "F{p}^{n}");
        assert!(l.order.check_distributive().unwrap().0);
    }
}

/// Lattice of a random closure system on `{0..k}`: the given sets, the full
/// set and all intersections, ordered by inclusion.
fn closure_lattice(k: u32, sets: &[u32]) -> (FiniteLattice, Vec<u32>) {
    let full = (1u32 << k) - 1;
    let mut family: BTreeSet<u32> = sets.iter().map(|s| s & full).collect();
    family.insert(full);
    loop {
        let v: Vec<u32> = family.iter().copied().collect();
        let before = family.len();
        for &a in &v {
            for &b in &v {
                family.insert(a & b);
            }
        }
        if family.len() == before {
            break;
        }
    }
    let mut v: Vec<u32> = family.into_iter().collect();
    v.sort_by_key(|s| (s.count_ones(), *s));
    let l = FiniteLattice::from_order(v.len(), |a, b| v[a] & !v[b] == 0).unwrap();
    (l, v)
}

fn brute_distributive(l: &FiniteLattice) -> bool {
    let n = l.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| l.meet(x, l.join(y, z)) == l.join(l.meet(x, y), l.meet(x, z)))))
}

fn brute_modular(l: &FiniteLattice) -> bool {
    let n = l.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !l.leq(x, z) || l.join(x, l.meet(y, z)) == l.meet(l.join(x, y), z))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lattice_procedures_agree_on_closure_systems(k in 1u32..6, sets in proptest::collection::vec(any::<u32>(), 0..8)) {
        let (l, v) = closure_lattice(k, &sets);
        l.verify_axioms().unwrap();
        // Meets are intersections in a closure system.
        for a in 0..l.len() {
            for b in 0..l.len() {
                prop_assert_eq!(v[l.meet(a, b)], v[a] & v[b]);
            }
        }
        let d = brute_distributive(&l);
        prop_assert_eq!(l.law_scan().is_none(), d);
        prop_assert_eq!(l.forbidden_sublattice().is_none(), d);
        prop_assert_eq!(l.covering_criterion().is_none(), d);
        prop_assert_eq!(l.modular_scan().is_none(), brute_modular(&l));
        let (ok, witness) = l.check_distributive().unwrap();
        prop_assert_eq!(ok, d);
        if let Some(w) = witness {
            let nodes = w.nodes();
            prop_assert!(!nodes.is_empty());
        }
        if d {
            prop_assert!(l.catenarian().0);
        }
        let chain = (0..l.len()).all(|a| (0..l.len()).all(|b| l.comparable(a, b)));
        prop_assert_eq!(l.is_chain(), chain);
    }

    #[test]
    fn ring_axioms_hold_on_random_elements(which in 0usize..16, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let rings = small_rings();
        let (_, ring) = &rings[which % rings.len()];
        let n = ring.size() as u32;
        let (a, b, c) = ((a % n) as Elem, (b % n) as Elem, (c % n) as Elem);
        prop_assert_eq!(ring.add(a, ring.add(b, c)), ring.add(ring.add(a, b), c));
        prop_assert_eq!(ring.mul(a, ring.mul(b, c)), ring.mul(ring.mul(a, b), c));
        prop_assert_eq!(ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c)));
        prop_assert_eq!(ring.mul(a, b), ring.mul(b, a));
        prop_assert_eq!(ring.mul(a, ring.one()), a);
        prop_assert_eq!(ring.add(a, ring.neg(a)), 0);
    }
}
