//! Turning a parsed spec into rings and an extension, and printing elements
//! back in terms of the names the spec introduced.

use std::collections::{BTreeMap, VecDeque};
use std::sync::{Arc, OnceLock};

use ringlattice_core::finring::{AdditiveSpan, Poly};
use ringlattice_core::{Elem, ElemSet, Extension, FiniteRing, RingError};

use crate::dsl::{DslError, Expr, InstanceSpec, Located, Pos, RingExpr, Statement};

/// Bound on the number of terms while expanding a relation.
const MAX_POLY_TERMS: usize = 4096;

#[derive(Debug)]
enum Shape {
    Plain,
    /// Built on top of another ring through `map`.
    Over { base: usize, map: Vec<Elem> },
    Product { factors: Vec<usize> },
}

/// A ring from the spec together with its generator names.
#[derive(Debug)]
pub struct NamedRing {
    pub name: String,
    pub ring: Arc<FiniteRing>,
    shape: Shape,
    /// Every name usable in element expressions of this ring.
    names: Vec<(String, Elem)>,
    printer: OnceLock<Printer>,
}

/// All rings declared by a spec plus the extension.
#[derive(Debug)]
pub struct BuiltInstance {
    pub rings: Vec<NamedRing>,
    pub ambient: usize,
    pub extension_name: String,
    pub extension: Extension,
    pub base_generators: Vec<Elem>,
}

pub fn ring_error(pos: Pos, e: RingError) -> DslError {
    DslError::new(pos, e.to_string())
}

impl BuiltInstance {
    pub fn ambient(&self) -> &NamedRing {
        &self.rings[self.ambient]
    }

    pub fn describe(&self, x: Elem) -> String {
        describe(&self.rings, self.ambient, x)
    }
}

pub fn build(spec: &InstanceSpec, cap: usize) -> Result<BuiltInstance, DslError> {
    let mut rings: Vec<NamedRing> = Vec::new();
    let lookup = |rings: &[NamedRing], name: &Located<String>| -> Result<usize, DslError> {
        rings
            .iter()
            .position(|r| r.name == name.value)
            .ok_or_else(|| DslError::new(name.pos, format!("unknown ring `{}`", name.value)))
    };
    for stmt in &spec.statements {
        match &stmt.value {
            Statement::Option { .. } => {}
            Statement::Ring { name, expr } => {
                let r = build_ring(&rings, name, expr, stmt.pos, cap, lookup)?;
                rings.push(r);
            }
            Statement::Ext { name, ring, base } => {
                let idx = lookup(&rings, ring)?;
                let gens = base
                    .iter()
                    .map(|b| eval(&rings, idx, &b.value, b.pos))
                    .collect::<Result<Vec<_>, _>>()?;
                let extension = Extension::new(rings[idx].ring.clone(), &gens);
                return Ok(BuiltInstance {
                    rings,
                    ambient: idx,
                    extension_name: name.clone(),
                    extension,
                    base_generators: gens,
                });
            }
        }
    }
    Err(DslError::new(Pos::default(), "missing extension declaration"))
}

fn build_ring(
    rings: &[NamedRing],
    name: &str,
    expr: &RingExpr,
    pos: Pos,
    cap: usize,
    lookup: impl Fn(&[NamedRing], &Located<String>) -> Result<usize, DslError>,
) -> Result<NamedRing, DslError> {
    let named = |ring: FiniteRing, shape: Shape, names: Vec<(String, Elem)>| NamedRing {
        name: name.to_string(),
        ring: Arc::new(ring),
        shape,
        names,
        printer: OnceLock::new(),
    };
    Ok(match expr {
        RingExpr::Zmod(n) => named(FiniteRing::zmod(*n, cap).map_err(|e| ring_error(pos, e))?, Shape::Plain, Vec::new()),
        RingExpr::Gf { p, k, generator } => {
            let ring = FiniteRing::gf(*p, *k, cap).map_err(|e| ring_error(pos, e))?;
            // The class of X is the second basis vector, or 0 over the prime field.
            let x = if *k > 1 { ring.additive_generators()[1] } else { 0 };
            let g = generator.clone().unwrap_or_else(|| "a".to_string());
            named(ring, Shape::Plain, vec![(g, x)])
        }
        RingExpr::Product(factors) => {
            let idx = factors.iter().map(|f| lookup(rings, f)).collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&FiniteRing> = idx.iter().map(|&i| &*rings[i].ring).collect();
            let ring = FiniteRing::product(&refs, cap).map_err(|e| ring_error(pos, e))?;
            // Tuple-shaped names, so rings built on top of this one can still
            // print their elements.
            let mut names = Vec::new();
            for (i, &f) in idx.iter().enumerate() {
                let slot = |label: &str| {
                    let parts: Vec<&str> = (0..idx.len()).map(|j| if j == i { label } else { "0" }).collect();
                    format!("({})", parts.join(", "))
                };
                let one = rings[f].ring.one();
                names.push((slot("1"), FiniteRing::product_injection(&refs, &ring, i, one)));
                for (n, x) in &rings[f].names {
                    names.push((slot(n), FiniteRing::product_injection(&refs, &ring, i, *x)));
                }
            }
            named(ring, Shape::Product { factors: idx }, names)
        }
        RingExpr::Quotient { ring: base_name, relations } => {
            let base = lookup(rings, base_name)?;
            let mut vars: Vec<String> = Vec::new();
            let polys = relations
                .iter()
                .map(|r| {
                    let p = expand(rings, base, &r.value, r.pos, &mut vars)?;
                    Ok((r.pos, p))
                })
                .collect::<Result<Vec<_>, DslError>>()?;
            let polys: Vec<(Pos, Poly)> = polys
                .into_iter()
                .map(|(p, terms)| {
                    let k = vars.len();
                    let terms = terms
                        .into_iter()
                        .map(|(mut e, c)| {
                            e.resize(k, 0);
                            (e, c)
                        })
                        .collect();
                    (p, Poly { terms })
                })
                .collect();
            let plain: Vec<Poly> = polys.iter().map(|p| p.1.clone()).collect();
            let q = rings[base].ring.polynomial_quotient(vars.len(), &plain, cap).map_err(|e| match e {
                RingError::Unbounded(i) => DslError::new(
                    pos,
                    format!("variable `{}` has no monic relation in that variable alone", vars[i]),
                ),
                e => ring_error(pos, e),
            })?;
            let mut names: Vec<(String, Elem)> =
                rings[base].names.iter().map(|(n, x)| (n.clone(), q.base_map[*x as usize])).collect();
            names.extend(vars.into_iter().zip(q.variables.iter().copied()));
            named(q.ring, Shape::Over { base, map: q.base_map }, names)
        }
        RingExpr::Idealization { ring: base_name, orders, action } => {
            let base = lookup(rings, base_name)?;
            let r = &rings[base].ring;
            let keys = action
                .iter()
                .map(|(k, _)| eval(rings, base, &k.value, k.pos))
                .collect::<Result<Vec<_>, _>>()?;
            let mats: Vec<Vec<Vec<u32>>> = action.iter().map(|(_, m)| m.clone()).collect();
            let full = r.action_from_generators(&keys, &mats, orders).map_err(|e| ring_error(pos, e))?;
            let ring = FiniteRing::idealization(r, orders, &full, cap).map_err(|e| ring_error(pos, e))?;
            let kr = r.rank();
            let width = kr + orders.len();
            let map: Vec<Elem> = (0..r.size() as Elem)
                .map(|s| {
                    let mut v = r.coeffs(s);
                    v.resize(width, 0);
                    ring.index_of(&v)
                })
                .collect();
            let mut names: Vec<(String, Elem)> =
                rings[base].names.iter().map(|(n, x)| (n.clone(), map[*x as usize])).collect();
            for j in 0..orders.len() {
                let label = format!("m{}", j + 1);
                if names.iter().any(|(n, _)| *n == label) {
                    return Err(DslError::new(pos, format!("`{label}` is already a generator of `{}`", base_name.value)));
                }
                let mut v = vec![0u32; width];
                v[kr + j] = 1;
                names.push((label, ring.index_of(&v)));
            }
            named(ring, Shape::Over { base, map }, names)
        }
    })
}

/// Value of an element expression in ring `idx`.
pub fn eval(rings: &[NamedRing], idx: usize, e: &Expr, pos: Pos) -> Result<Elem, DslError> {
    let nr = &rings[idx];
    let r = &*nr.ring;
    Ok(match e {
        Expr::Int(n) => r.from_int(*n as i128),
        Expr::Name(s) => match nr.names.iter().find(|(n, _)| n == s) {
            Some((_, x)) => *x,
            None => return Err(DslError::new(pos, format!("`{s}` is not a generator of ring `{}`", nr.name))),
        },
        Expr::Tuple(items) => match &nr.shape {
            Shape::Product { factors } => {
                if items.len() != factors.len() {
                    return Err(DslError::new(
                        pos,
                        format!("ring `{}` has {} factors but the tuple has {} entries", nr.name, factors.len(), items.len()),
                    ));
                }
                let refs: Vec<&FiniteRing> = factors.iter().map(|&i| &*rings[i].ring).collect();
                let mut acc = 0;
                for (i, (item, &f)) in items.iter().zip(factors).enumerate() {
                    let y = eval(rings, f, item, pos)?;
                    acc = r.add(acc, FiniteRing::product_injection(&refs, r, i, y));
                }
                acc
            }
            Shape::Over { base, map } => map[eval(rings, *base, e, pos)? as usize],
            Shape::Plain => {
                return Err(DslError::new(pos, format!("ring `{}` is not a product, so tuples are meaningless", nr.name)));
            }
        },
        Expr::Neg(a) => r.neg(eval(rings, idx, a, pos)?),
        Expr::Add(a, b) => r.add(eval(rings, idx, a, pos)?, eval(rings, idx, b, pos)?),
        Expr::Sub(a, b) => r.sub(eval(rings, idx, a, pos)?, eval(rings, idx, b, pos)?),
        Expr::Mul(a, b) => r.mul(eval(rings, idx, a, pos)?, eval(rings, idx, b, pos)?),
        Expr::Pow(a, n) => r.pow(eval(rings, idx, a, pos)?, *n),
    })
}

type Terms = BTreeMap<Vec<u32>, Elem>;

/// Expands a relation into a polynomial over ring `base`. Names that are not
/// generators of `base` become new variables, in order of first use.
fn expand(rings: &[NamedRing], base: usize, e: &Expr, pos: Pos, vars: &mut Vec<String>) -> Result<Terms, DslError> {
    let r = &*rings[base].ring;
    let constant = |c: Elem| -> Terms {
        let mut t = Terms::new();
        if c != 0 {
            t.insert(Vec::new(), c);
        }
        t
    };
    Ok(match e {
        Expr::Int(_) | Expr::Tuple(_) => constant(eval(rings, base, e, pos)?),
        Expr::Name(s) => {
            if let Some((_, x)) = rings[base].names.iter().find(|(n, _)| n == s) {
                constant(*x)
            } else {
                let i = vars.iter().position(|v| v == s).unwrap_or_else(|| {
                    vars.push(s.clone());
                    vars.len() - 1
                });
                let mut exps = vec![0u32; i + 1];
                exps[i] = 1;
                let mut t = Terms::new();
                t.insert(exps, r.one());
                t
            }
        }
        Expr::Neg(a) => expand(rings, base, a, pos, vars)?.into_iter().map(|(k, c)| (k, r.neg(c))).collect(),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let mut acc = expand(rings, base, a, pos, vars)?;
            let rhs = expand(rings, base, b, pos, vars)?;
            let negate = matches!(e, Expr::Sub(..));
            for (k, c) in rhs {
                add_term(r, &mut acc, k, if negate { r.neg(c) } else { c });
            }
            acc
        }
        Expr::Mul(a, b) => {
            let x = expand(rings, base, a, pos, vars)?;
            let y = expand(rings, base, b, pos, vars)?;
            poly_mul(r, &x, &y, pos)?
        }
        Expr::Pow(a, n) => {
            let x = expand(rings, base, a, pos, vars)?;
            let mut acc = constant(r.one());
            let mut sq = x;
            let mut n = *n;
            while n > 0 {
                if n & 1 == 1 {
                    acc = poly_mul(r, &acc, &sq, pos)?;
                }
                n >>= 1;
                if n > 0 {
                    sq = poly_mul(r, &sq, &sq, pos)?;
                }
            }
            acc
        }
    })
}

fn normalize(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_term(r: &FiniteRing, acc: &mut Terms, k: Vec<u32>, c: Elem) {
    let k = normalize(k);
    let v = r.add(acc.get(&k).copied().unwrap_or(0), c);
    if v == 0 {
        acc.remove(&k);
    } else {
        acc.insert(k, v);
    }
}

fn poly_mul(r: &FiniteRing, x: &Terms, y: &Terms, pos: Pos) -> Result<Terms, DslError> {
    let mut out = Terms::new();
    for (ka, ca) in x {
        for (kb, cb) in y {
            let len = ka.len().max(kb.len());
            let mut k = vec![0u32; len];
            for (i, v) in k.iter_mut().enumerate() {
                let s = ka.get(i).copied().unwrap_or(0) as u64 + kb.get(i).copied().unwrap_or(0) as u64;
                *v = u32::try_from(s).map_err(|_| DslError::new(pos, "exponent overflow"))?;
            }
            add_term(r, &mut out, k, r.mul(*ca, *cb));
            if out.len() > MAX_POLY_TERMS {
                return Err(DslError::new(pos, "polynomial expansion is too large"));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Element descriptions

/// Shortest representation of every element as an integer combination of
/// monomials in the ring's names, found by breadth-first search over the
/// additive group.
#[derive(Debug)]
struct Printer {
    monomials: Vec<String>,
    /// For each element: the predecessor, the monomial used and its sign.
    parent: Vec<Option<(Elem, usize, bool)>>,
}

impl Printer {
    fn new(nr: &NamedRing) -> Printer {
        let r = &*nr.ring;
        let mut span = AdditiveSpan::new(r);
        let mut mons: Vec<(String, Elem)> = Vec::new();
        let mut frontier: Vec<(String, Elem)> = vec![("1".into(), r.one())];
        // Degree by degree, keep monomials that enlarge the additive span.
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (label, x) in frontier {
                if span.absorb(x) {
                    for (n, g) in &nr.names {
                        let l = if label == "1" { n.clone() } else { format!("{label}*{n}") };
                        next.push((l, r.mul(x, *g)));
                    }
                    mons.push((label, x));
                }
            }
            frontier = next;
        }
        let n = r.size();
        let mut parent: Vec<Option<(Elem, usize, bool)>> = vec![None; n];
        let mut seen = ElemSet::empty(n);
        seen.insert(0);
        let mut queue = VecDeque::from([0 as Elem]);
        while let Some(x) = queue.pop_front() {
            for (i, (_, m)) in mons.iter().enumerate() {
                for (neg, y) in [(false, r.add(x, *m)), (true, r.sub(x, *m))] {
                    if seen.insert(y) {
                        parent[y as usize] = Some((x, i, neg));
                        queue.push_back(y);
                    }
                }
            }
        }
        Printer { monomials: mons.into_iter().map(|m| collapse_powers(&m.0)).collect(), parent }
    }

    fn describe(&self, x: Elem) -> String {
        let mut coeff = vec![0i64; self.monomials.len()];
        let mut cur = x;
        while let Some((prev, i, neg)) = self.parent[cur as usize] {
            coeff[i] += if neg { -1 } else { 1 };
            cur = prev;
        }
        let mut out = String::new();
        for (c, m) in coeff.iter().zip(&self.monomials) {
            if *c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            let body = match (mag, m.as_str()) {
                (_, "1") => mag.to_string(),
                (1, _) => m.clone(),
                _ => format!("{mag}*{m}"),
            };
            if out.is_empty() {
                out = if *c < 0 { format!("-{body}") } else { body };
            } else {
                out.push_str(if *c < 0 { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// `x*x*y` becomes `x^2*y`.
fn collapse_powers(label: &str) -> String {
    if label == "1" {
        return label.into();
    }
    let mut parts: Vec<(String, u32)> = Vec::new();
    for f in label.split('*') {
        match parts.last_mut() {
            Some((n, e)) if n == f => *e += 1,
            _ => parts.push((f.to_string(), 1)),
        }
    }
    parts
        .into_iter()
        .map(|(n, e)| if e == 1 { n } else { format!("{n}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Human-readable form of element `x` of ring `idx`.
pub fn describe(rings: &[NamedRing], idx: usize, x: Elem) -> String {
    let nr = &rings[idx];
    if let Shape::Product { factors } = &nr.shape {
        let coeffs = nr.ring.coeffs(x);
        let mut off = 0;
        let parts: Vec<String> = factors
            .iter()
            .map(|&f| {
                let k = rings[f].ring.rank();
                let y = rings[f].ring.index_of(&coeffs[off..off + k]);
                off += k;
                describe(rings, f, y)
            })
            .collect();
        return format!("({})", parts.join(", "));
    }
    nr.printer.get_or_init(|| Printer::new(nr)).describe(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    fn built(text: &str) -> BuiltInstance {
        build(&parse_spec(text).unwrap(), 4096).unwrap()
    }

    #[test]
    fn product_elements_are_tuples() {
        let b = built("ring k = zmod(2)\nring A = quotient(k, [x^2])\nring F = gf(2, 2)\nring S = product(A, F)\next E = extension(S, base=[(x, a)])");
        assert_eq!(b.ambient().ring.size(), 16);
        assert_eq!(b.describe(b.base_generators[0]), "(x, a)");
        // (x, a)² = (0, a + 1) and (x, a)³ = (0, 1), so the pair generates everything.
        assert_eq!(b.extension.base().members.len(), 16);
    }

    #[test]
    fn quotient_over_a_quotient_keeps_inherited_names() {
        let b = built("ring k = zmod(2)\nring R = quotient(k, [t^2])\nring B = quotient(R, [X^2, t*X])\next E = extension(B, base=[t])");
        assert_eq!(b.ambient().ring.size(), 8);
        let x = eval(&b.rings, b.ambient, &Expr::Name("X".into()), Pos::default()).unwrap();
        assert_eq!(b.describe(x), "X");
        let t = b.base_generators[0];
        assert_eq!(b.ambient().ring.mul(t, x), 0);
        assert_eq!(b.describe(b.ambient().ring.add(t, x)), "t + X");
    }

    #[test]
    fn every_element_round_trips_through_its_description() {
        let b = built("ring z = zmod(4)\nring A = quotient(z, [x^2 - 2])\next E = extension(A, base=[])");
        let r = &b.ambient().ring;
        for x in 0..r.size() as Elem {
            let text = b.describe(x);
            let spec = parse_spec(&format!("ring z = zmod(4)\nring A = quotient(z, [x^2 - 2])\next E = extension(A, base=[{text}])")).unwrap();
            let (_, _, base) = spec.extension().unwrap();
            assert_eq!(eval(&b.rings, b.ambient, &base[0].value, Pos::default()).unwrap(), x, "{text}");
        }
    }

    #[test]
    fn idealization_names_module_generators() {
        let b = built("ring k = zmod(2)\nring A = quotient(k, [x^2])\nring I = idealization(A, module([2], {x: [[0]]}))\next E = extension(I, base=[])");
        let r = &b.ambient().ring;
        assert_eq!(r.size(), 8);
        let m = eval(&b.rings, b.ambient, &Expr::Name("m1".into()), Pos::default()).unwrap();
        assert_eq!(r.mul(m, m), 0);
    }

    #[test]
    fn unbounded_variable_is_reported() {
        let err = build(&parse_spec("ring k = zmod(2)\nring A = quotient(k, [x*y])\next E = extension(A, base=[])").unwrap(), 4096)
            .unwrap_err();
        assert!(err.message.contains("no monic relation"), "{err}");
    }
}
