//! Finite commutative unital rings.
//!
//! A ring is an additive group `Z/c₁ ⊕ … ⊕ Z/c_k` together with the products
//! of its additive generators. Elements are coefficient vectors, and every
//! element also has a dense index (mixed radix, first coordinate least
//! significant) so that sets of elements can be bit sets.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::ElemSet;
use crate::diag::diagonalize;

/// Dense index of a ring element.
pub type Elem = u32;

pub const DEFAULT_CAP: usize = 4096;

/// Rings up to this size get precomputed addition and multiplication tables.
const TABLE_LIMIT: usize = 1024;

/// Rings up to this size are additionally checked axiom by axiom over all
/// element triples. Larger rings rely on the generator-level check, which is
/// complete for bilinear structure constants.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 64;

/// Bound on additive generators of the intermediate ring built while
/// quotienting a polynomial ring.
/// Element indices are `u32`, so at most 32 nontrivial cyclic summands.
const MAX_RANK: usize = 32;

const MAX_INTERMEDIATE_GENERATORS: usize = 96;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("modulus must be ≥ 2 (got {0})")]
    Modulus(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be ≥ 1")]
    Degree,
    #[error("ring would have {size} elements, above the size cap {cap}")]
    CapExceeded { size: u128, cap: usize },
    #[error("relations are inconsistent: they collapse the ring to 1 = 0")]
    Collapse,
    #[error("malformed structure constants: {0}")]
    Malformed(String),
    #[error("multiplication is not associative on additive generators {0:?}")]
    NotAssociative([usize; 3]),
    #[error("multiplication is not commutative on additive generators {0} and {1}")]
    NotCommutative(usize, usize),
    #[error("the identity does not act as a unit on additive generator {0}")]
    BadUnit(usize),
    #[error("module action data is not a valid module structure: {0}")]
    Action(String),
    #[error("variable #{0} has no monic relation in that variable alone, so the quotient is not known to be finite")]
    Unbounded(usize),
    #[error("intermediate polynomial ring too large ({0} additive generators)")]
    TooManyGenerators(usize),
    #[error("the given set is not an ideal")]
    NotIdeal,
    #[error("the ideal is the whole ring")]
    UnitIdeal,
    #[error("the ideal is not maximal")]
    NotMaximal,
    #[error("exhaustive axiom check failed: {0}")]
    Axiom(String),
}

/// Structure constants of a ring, without element indexing.
///
/// Used directly for intermediate rings too large to enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub orders: Vec<u32>,
    /// `consts[(i*k + j)*k + l]` is coordinate `l` of `g_i·g_j`.
    pub consts: Vec<u32>,
    pub one: Vec<u32>,
}

impl Algebra {
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn product_of_generators(&self, i: usize, j: usize) -> &[u32] {
        let k = self.rank();
        &self.consts[(i * k + j) * k..(i * k + j + 1) * k]
    }

    pub fn zero_vec(&self) -> Vec<u32> {
        vec![0; self.rank()]
    }

    pub fn unit_vec(&self, i: usize) -> Vec<u32> {
        let mut v = self.zero_vec();
        v[i] = 1 % self.orders[i];
        v
    }

    pub fn add_vec(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), o)| ((*x as u64 + *y as u64) % *o as u64) as u32)
            .collect()
    }

    pub fn neg_vec(&self, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.orders).map(|(x, o)| (o - x) % o).collect()
    }

    pub fn scale_vec(&self, s: i128, a: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(&self.orders)
            .map(|(x, o)| (s * *x as i128).rem_euclid(*o as i128) as u32)
            .collect()
    }

    pub fn mul_vec(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let k = self.rank();
        let mut acc = vec![0u64; k];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = self.product_of_generators(i, j);
                for l in 0..k {
                    if c[l] != 0 {
                        let o = self.orders[l] as u64;
                        acc[l] = (acc[l] + (ai as u64 * bj as u64 % o) * c[l] as u64) % o;
                    }
                }
            }
        }
        acc.into_iter().map(|x| x as u32).collect()
    }

    /// Checks well-definedness, commutativity, associativity and the unit on
    /// additive generators. By bilinearity this proves the ring axioms.
    pub fn validate(&self) -> Result<(), RingError> {
        let k = self.rank();
        if k == 0 {
            return Err(RingError::Collapse);
        }
        if self.consts.len() != k * k * k || self.one.len() != k {
            return Err(RingError::Malformed("dimension mismatch".into()));
        }
        if let Some(o) = self.orders.iter().find(|&&o| o < 2) {
            return Err(RingError::Modulus(*o as u64));
        }
        for i in 0..k {
            for j in 0..k {
                let c = self.product_of_generators(i, j);
                for l in 0..k {
                    let o = self.orders[l] as u64;
                    if c[l] as u64 >= o {
                        return Err(RingError::Malformed("coefficient out of range".into()));
                    }
                    if !(self.orders[i] as u64 * c[l] as u64).is_multiple_of(o)
                        || !(self.orders[j] as u64 * c[l] as u64).is_multiple_of(o)
                    {
                        return Err(RingError::Malformed(alloc::format!(
                            "product of generators {i} and {j} is not killed by their orders"
                        )));
                    }
                }
                if c != self.product_of_generators(j, i) {
                    return Err(RingError::NotCommutative(i, j));
                }
            }
        }
        if self.one.iter().zip(&self.orders).any(|(x, o)| x >= o) {
            return Err(RingError::Malformed("identity out of range".into()));
        }
        for i in 0..k {
            let e = self.unit_vec(i);
            if self.mul_vec(&self.one, &e) != e {
                return Err(RingError::BadUnit(i));
            }
        }
        for i in 0..k {
            for j in 0..k {
                let ij = self.product_of_generators(i, j).to_vec();
                for l in 0..k {
                    let left = self.mul_vec(&ij, &self.unit_vec(l));
                    let jl = self.product_of_generators(j, l).to_vec();
                    let right = self.mul_vec(&self.unit_vec(i), &jl);
                    if left != right {
                        return Err(RingError::NotAssociative([i, j, l]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Quotient by the subgroup spanned by `relations`, which the caller
    /// guarantees to be an ideal.
    pub fn quotient(&self, relations: &[Vec<u32>]) -> Result<(Algebra, Projector), RingError> {
        let k = self.rank();
        let mut rows: Vec<Vec<i128>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { self.orders[i] as i128 } else { 0 }).collect())
            .collect();
        rows.extend(relations.iter().map(|r| r.iter().map(|&x| x as i128).collect()));
        let d = diagonalize(rows, k);
        let kept: Vec<usize> = (0..k).filter(|&i| d.diag[i] != 1).collect();
        if kept.is_empty() {
            return Err(RingError::Collapse);
        }
        let projector = Projector {
            columns: kept
                .iter()
                .map(|&i| {
                    let o = d.diag[i];
                    (o as u32, (0..k).map(|j| d.q[j][i].rem_euclid(o)).collect())
                })
                .collect(),
        };
        let lifts: Vec<Vec<u32>> = kept
            .iter()
            .map(|&i| {
                (0..k)
                    .map(|j| d.q_inv[i][j].rem_euclid(self.orders[j] as i128) as u32)
                    .collect()
            })
            .collect();
        let m = kept.len();
        let mut consts = Vec::with_capacity(m * m * m);
        for a in 0..m {
            for b in 0..m {
                consts.extend(projector.project(&self.mul_vec(&lifts[a], &lifts[b])));
            }
        }
        let alg = Algebra {
            orders: projector.columns.iter().map(|c| c.0).collect(),
            consts,
            one: projector.project(&self.one),
        };
        Ok((alg, projector))
    }
}

/// Linear map from old coordinates to the coordinates of a quotient.
#[derive(Clone, Debug)]
pub struct Projector {
    columns: Vec<(u32, Vec<i128>)>,
}

impl Projector {
    pub fn project(&self, x: &[u32]) -> Vec<u32> {
        self.columns
            .iter()
            .map(|(o, col)| {
                let s: i128 = x.iter().zip(col).map(|(a, c)| *a as i128 * c).sum();
                s.rem_euclid(*o as i128) as u32
            })
            .collect()
    }
}

/// A finite commutative unital ring with indexed elements.
///
/// Immutable after construction, so it can be shared freely between threads.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    alg: Algebra,
    strides: Vec<u32>,
    size: usize,
    one: Elem,
    mul_tab: Option<Vec<Elem>>,
    add_tab: Option<Vec<Elem>>,
    neg_tab: Vec<Elem>,
    /// Without full tables: coordinate digits of every element (`size × k`)
    /// and `gen_mul[i·size + x] = e_i·x` for each additive generator `e_i`.
    digits: Vec<u32>,
    gen_mul: Vec<Elem>,
    nilpotent: ElemSet,
    idempotents: Vec<Elem>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg
    }
}

impl Eq for FiniteRing {}

/// An ideal, as an explicit set of elements of the ring it was computed in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal {
    pub members: ElemSet,
}

/// Splitting of a ring into local factors `eR`.
#[derive(Clone, Debug)]
pub struct LocalFactorDecomposition {
    pub idempotents: Vec<Elem>,
    /// Each factor as a ring, with the embedding of its elements into `R`.
    pub factors: Vec<(FiniteRing, Vec<Elem>)>,
    /// The maximal ideal of each factor, in the factor's own indexing.
    pub maximal_ideal_of_factor: Vec<Ideal>,
}

/// Polynomial with coefficients in a base ring: terms are
/// (exponent vector over the new variables, coefficient).
#[derive(Clone, Debug, Default)]
pub struct Poly {
    pub terms: Vec<(Vec<u32>, Elem)>,
}

/// Result of adjoining variables to a ring and imposing relations.
#[derive(Clone, Debug)]
pub struct PolynomialQuotient {
    pub ring: FiniteRing,
    /// Image of every base element.
    pub base_map: Vec<Elem>,
    /// Image of each variable.
    pub variables: Vec<Elem>,
}

fn checked_size(orders: &[u32], cap: usize) -> Result<usize, RingError> {
    let mut size: u128 = 1;
    for &o in orders {
        size *= o as u128;
        if size > cap as u128 {
            return Err(RingError::CapExceeded { size: orders.iter().map(|&o| o as u128).product(), cap });
        }
    }
    Ok(size as usize)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl FiniteRing {
    /// Validates the structure constants and indexes the elements.
    pub fn from_algebra(alg: Algebra, cap: usize) -> Result<Self, RingError> {
        alg.validate()?;
        let size = checked_size(&alg.orders, cap)?;
        let mut strides = Vec::with_capacity(alg.rank());
        let mut s = 1u32;
        for &o in &alg.orders {
            strides.push(s);
            s = s.saturating_mul(o);
        }
        let mut ring = FiniteRing {
            one: 0,
            alg,
            strides,
            size,
            mul_tab: None,
            add_tab: None,
            neg_tab: Vec::new(),
            digits: Vec::new(),
            gen_mul: Vec::new(),
            nilpotent: ElemSet::empty(size),
            idempotents: Vec::new(),
        };
        ring.one = ring.index_of(&ring.alg.one);
        ring.neg_tab = (0..size as Elem).map(|x| ring.index_of(&ring.alg.neg_vec(&ring.coeffs(x)))).collect();
        if size <= TABLE_LIMIT {
            let coeffs: Vec<Vec<u32>> = (0..size as Elem).map(|x| ring.coeffs(x)).collect();
            let mut mul = vec![0; size * size];
            let mut add = vec![0; size * size];
            for a in 0..size {
                for b in a..size {
                    let m = ring.index_of(&ring.alg.mul_vec(&coeffs[a], &coeffs[b]));
                    let s = ring.index_of(&ring.alg.add_vec(&coeffs[a], &coeffs[b]));
                    mul[a * size + b] = m;
                    mul[b * size + a] = m;
                    add[a * size + b] = s;
                    add[b * size + a] = s;
                }
            }
            ring.mul_tab = Some(mul);
            ring.add_tab = Some(add);
        } else {
            let k = ring.rank();
            if k > MAX_RANK {
                return Err(RingError::Malformed(alloc::format!("additive rank {k} exceeds {MAX_RANK}")));
            }
            ring.digits = (0..size as Elem).flat_map(|x| ring.coeffs(x)).collect();
            let mut gen_mul = Vec::with_capacity(k * size);
            for i in 0..k {
                let e = ring.alg.unit_vec(i);
                for x in 0..size {
                    gen_mul.push(ring.index_of(&ring.alg.mul_vec(&e, &ring.digits[x * k..(x + 1) * k])));
                }
            }
            ring.gen_mul = gen_mul;
        }
        if size <= EXHAUSTIVE_AXIOM_LIMIT {
            ring.verify_axioms_exhaustive()?;
        }
        let rounds = usize::BITS - size.leading_zeros();
        let mut nil = ElemSet::empty(size);
        for x in 0..size as Elem {
            let mut y = x;
            let mut reach = 1u32;
            while reach <= rounds {
                y = ring.mul(y, y);
                reach *= 2;
            }
            if y == 0 {
                nil.insert(x);
            }
            if ring.mul(x, x) == x {
                ring.idempotents.push(x);
            }
        }
        ring.nilpotent = nil;
        Ok(ring)
    }

    /// `Z/n`.
    pub fn zmod(n: u64, cap: usize) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::Modulus(n));
        }
        if n > cap as u64 || n > u32::MAX as u64 {
            return Err(RingError::CapExceeded { size: n as u128, cap });
        }
        let n = n as u32;
        Self::from_algebra(Algebra { orders: vec![n], consts: vec![1 % n], one: vec![1 % n] }, cap)
    }

    /// `F_p[X]/(f)` for the lexicographically least monic irreducible `f` of
    /// degree `k` (coefficients compared from the highest degree down).
    /// The class of `X` is additive generator 1 when `k > 1`.
    pub fn gf(p: u64, k: u32, cap: usize) -> Result<Self, RingError> {
        if p < 2 {
            return Err(RingError::Modulus(p));
        }
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if k == 0 {
            return Err(RingError::Degree);
        }
        let size = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(RingError::CapExceeded { size, cap });
        }
        let p32 = p as u32;
        let f = least_irreducible(p32, k as usize);
        let k = k as usize;
        // Reduction of X^e for e < 2k-1 into the basis 1, X, …, X^{k-1}.
        let mut powers: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; k];
        cur[0] = 1 % p32;
        for _ in 0..2 * k - 1 {
            powers.push(cur.clone());
            // multiply by X and reduce with X^k = -Σ f_j X^j
            let top = cur[k - 1];
            let mut next = vec![0u32; k];
            for j in (1..k).rev() {
                next[j] = cur[j - 1];
            }
            for j in 0..k {
                next[j] = (next[j] + (p32 - f[j] % p32) % p32 * top) % p32;
            }
            cur = next;
        }
        let mut consts = Vec::with_capacity(k * k * k);
        for i in 0..k {
            for j in 0..k {
                consts.extend_from_slice(&powers[i + j]);
            }
        }
        let mut one = vec![0u32; k];
        one[0] = 1;
        Self::from_algebra(Algebra { orders: vec![p32; k], consts, one }, cap)
    }

    /// Direct product, in the given order.
    pub fn product(rings: &[&FiniteRing], cap: usize) -> Result<Self, RingError> {
        if rings.is_empty() {
            return Err(RingError::Collapse);
        }
        let orders: Vec<u32> = rings.iter().flat_map(|r| r.alg.orders.iter().copied()).collect();
        checked_size(&orders, cap)?;
        let k = orders.len();
        let mut consts = vec![0u32; k * k * k];
        let mut one = Vec::with_capacity(k);
        let mut off = 0;
        for r in rings {
            let kr = r.alg.rank();
            for i in 0..kr {
                for j in 0..kr {
                    let c = r.alg.product_of_generators(i, j);
                    let base = ((off + i) * k + off + j) * k + off;
                    consts[base..base + kr].copy_from_slice(c);
                }
            }
            one.extend_from_slice(&r.alg.one);
            off += kr;
        }
        Self::from_algebra(Algebra { orders, consts, one }, cap)
    }

    /// Offsets of each factor's coordinates inside a product built by
    /// [`FiniteRing::product`].
    pub fn product_injection(rings: &[&FiniteRing], product: &FiniteRing, factor: usize, x: Elem) -> Elem {
        let mut v = product.alg.zero_vec();
        let off: usize = rings[..factor].iter().map(|r| r.rank()).sum();
        for (i, c) in rings[factor].coeffs(x).into_iter().enumerate() {
            v[off + i] = c;
        }
        product.index_of(&v)
    }

    /// Idealization `R(+)M` for a module with additive invariants
    /// `module_orders`, where `action[i][j]` is the image of module generator
    /// `j` under additive generator `i` of `R`.
    pub fn idealization(
        ring: &FiniteRing,
        module_orders: &[u32],
        action: &[Vec<Vec<u32>>],
        cap: usize,
    ) -> Result<Self, RingError> {
        let kr = ring.rank();
        let km = module_orders.len();
        if action.len() != kr || action.iter().any(|m| m.len() != km || m.iter().any(|v| v.len() != km)) {
            return Err(RingError::Action("action matrices have the wrong shape".into()));
        }
        if let Some(o) = module_orders.iter().find(|&&o| o < 2) {
            return Err(RingError::Modulus(*o as u64));
        }
        let mut orders = ring.alg.orders.clone();
        orders.extend_from_slice(module_orders);
        checked_size(&orders, cap)?;
        let k = kr + km;
        let mut consts = vec![0u32; k * k * k];
        for i in 0..kr {
            for j in 0..kr {
                let base = (i * k + j) * k;
                consts[base..base + kr].copy_from_slice(ring.alg.product_of_generators(i, j));
            }
            for j in 0..km {
                let img: Vec<u32> = action[i][j].iter().zip(module_orders).map(|(x, o)| x % o).collect();
                for (a, b) in [(i, kr + j), (kr + j, i)] {
                    let base = (a * k + b) * k + kr;
                    consts[base..base + km].copy_from_slice(&img);
                }
            }
        }
        let mut one = ring.alg.one.clone();
        one.extend(core::iter::repeat_n(0, km));
        Self::from_algebra(Algebra { orders, consts, one }, cap).map_err(|e| match e {
            RingError::NotAssociative(_) | RingError::BadUnit(_) | RingError::Malformed(_) => {
                RingError::Action(e.to_string())
            }
            other => other,
        })
    }

    /// Module action of every additive generator, derived from the action of
    /// a set of ring generators. Fails if the data does not respect the
    /// relations of the ring or the generators do not generate it.
    pub fn action_from_generators(
        &self,
        generators: &[Elem],
        matrices: &[Vec<Vec<u32>>],
        module_orders: &[u32],
    ) -> Result<Vec<Vec<Vec<u32>>>, RingError> {
        let km = module_orders.len();
        if generators.len() != matrices.len()
            || matrices.iter().any(|m| m.len() != km || m.iter().any(|v| v.len() != km))
        {
            return Err(RingError::Action("one km×km matrix per ring generator is required".into()));
        }
        let reduce = |m: &Vec<Vec<u32>>| -> Vec<Vec<u32>> {
            m.iter().map(|v| v.iter().zip(module_orders).map(|(x, o)| x % o).collect()).collect()
        };
        let mats: Vec<Vec<Vec<u32>>> = matrices.iter().map(reduce).collect();
        for m in &mats {
            for (j, img) in m.iter().enumerate() {
                if img.iter().zip(module_orders).any(|(x, o)| !(module_orders[j] as u64 * *x as u64).is_multiple_of(*o as u64)) {
                    return Err(RingError::Action(alloc::format!(
                        "image of module generator {j} has order not dividing {}",
                        module_orders[j]
                    )));
                }
            }
        }
        let apply = |m: &Vec<Vec<u32>>, v: &[u32]| -> Vec<u32> {
            let mut out = vec![0u64; km];
            for (j, &c) in v.iter().enumerate() {
                for l in 0..km {
                    out[l] = (out[l] + c as u64 * m[j][l] as u64) % module_orders[l] as u64;
                }
            }
            out.into_iter().map(|x| x as u32).collect()
        };
        let compose = |g: &Vec<Vec<u32>>, x: &Vec<Vec<u32>>| -> Vec<Vec<u32>> { x.iter().map(|v| apply(g, v)).collect() };
        let add = |a: &Vec<Vec<u32>>, b: &Vec<Vec<u32>>| -> Vec<Vec<u32>> {
            a.iter()
                .zip(b)
                .map(|(u, v)| u.iter().zip(v).zip(module_orders).map(|((x, y), o)| (x + y) % o).collect())
                .collect()
        };
        let identity: Vec<Vec<u32>> =
            (0..km).map(|j| (0..km).map(|l| u32::from(j == l) % module_orders[l]).collect()).collect();
        let zero: Vec<Vec<u32>> = vec![vec![0; km]; km];
        let mut known: BTreeMap<Elem, Vec<Vec<u32>>> = BTreeMap::new();
        let mut order: Vec<Elem> = Vec::new();
        let mut queue: Vec<(Elem, Vec<Vec<u32>>)> = vec![(0, zero), (self.one, identity)];
        while let Some((x, m)) = queue.pop() {
            if let Some(prev) = known.get(&x) {
                if *prev != m {
                    return Err(RingError::Action(alloc::format!(
                        "element {x} receives two different actions"
                    )));
                }
                continue;
            }
            for (g, gm) in generators.iter().zip(&mats) {
                queue.push((self.mul(*g, x), compose(gm, &m)));
            }
            for &y in &order {
                queue.push((self.add(x, y), add(&m, &known[&y])));
            }
            queue.push((self.add(x, x), add(&m, &m)));
            known.insert(x, m);
            order.push(x);
        }
        if known.len() != self.size {
            return Err(RingError::Action("ring generators do not generate the ring".into()));
        }
        Ok((0..self.rank()).map(|i| known[&self.index_of(&self.alg.unit_vec(i))].clone()).collect())
    }

    /// Adjoins `var_count` variables to `self` and imposes `relations`.
    ///
    /// Every variable needs a relation involving only that variable whose
    /// leading coefficient is 1; the lowest-degree such relation bounds the
    /// variable. The other relations are then imposed by an exact quotient.
    pub fn polynomial_quotient(
        &self,
        var_count: usize,
        relations: &[Poly],
        cap: usize,
    ) -> Result<PolynomialQuotient, RingError> {
        // Monic bounding relation per variable: coefficients c_0..c_{d-1}
        // with x^d = -Σ c_j x^j.
        let mut bounds: Vec<Vec<Elem>> = Vec::with_capacity(var_count);
        for v in 0..var_count {
            let mut best: Option<Vec<Elem>> = None;
            for rel in relations {
                let mut coeff: BTreeMap<u32, Elem> = BTreeMap::new();
                let mut univariate = true;
                for (exps, c) in &rel.terms {
                    if exps.iter().enumerate().any(|(w, &e)| w != v && e != 0) {
                        univariate = false;
                        break;
                    }
                    let slot = coeff.entry(exps[v]).or_insert(0);
                    *slot = self.add(*slot, *c);
                }
                if !univariate {
                    continue;
                }
                let Some((&deg, &lead)) = coeff.iter().rev().find(|(_, c)| **c != 0) else {
                    continue;
                };
                if deg == 0 || lead != self.one {
                    continue;
                }
                if best.as_ref().is_none_or(|b| (deg as usize) < b.len()) {
                    best = Some((0..deg).map(|j| coeff.get(&j).copied().unwrap_or(0)).collect());
                }
            }
            bounds.push(best.ok_or(RingError::Unbounded(v))?);
        }
        let degs: Vec<usize> = bounds.iter().map(|b| b.len()).collect();
        let monos: usize = degs.iter().product();
        let kb = self.rank() * monos;
        if kb > MAX_INTERMEDIATE_GENERATORS {
            return Err(RingError::TooManyGenerators(kb));
        }
        let mono_exps = |mut idx: usize| -> Vec<usize> {
            degs.iter()
                .map(|&d| {
                    let e = idx % d;
                    idx /= d;
                    e
                })
                .collect()
        };
        let mono_index = |exps: &[usize]| -> usize {
            let mut idx = 0;
            for (e, d) in exps.iter().zip(&degs).rev() {
                idx = idx * d + e;
            }
            idx
        };
        // Univariate reductions of x_v^e for e < 2d-1.
        let univariate: Vec<Vec<Vec<Elem>>> = bounds
            .iter()
            .map(|b| {
                let d = b.len();
                let mut out = Vec::new();
                let mut cur = vec![0; d];
                cur[0] = self.one;
                for _ in 0..2 * d - 1 {
                    out.push(cur.clone());
                    let top = cur[d - 1];
                    let mut next = vec![0; d];
                    for j in (1..d).rev() {
                        next[j] = cur[j - 1];
                    }
                    for j in 0..d {
                        next[j] = self.sub(next[j], self.mul(b[j], top));
                    }
                    cur = next;
                }
                out
            })
            .collect();
        // mono_prod[a][b] = reduced x^{a+b} as coefficients over monomials.
        let mut mono_prod: Vec<Vec<Elem>> = Vec::with_capacity(monos * monos);
        for a in 0..monos {
            let ea = mono_exps(a);
            for b in 0..monos {
                let eb = mono_exps(b);
                let mut out = vec![0; monos];
                for (g, slot) in out.iter_mut().enumerate() {
                    let eg = mono_exps(g);
                    let mut c = self.one;
                    for v in 0..var_count {
                        c = self.mul(c, univariate[v][ea[v] + eb[v]][eg[v]]);
                        if c == 0 {
                            break;
                        }
                    }
                    *slot = c;
                }
                mono_prod.push(out);
            }
        }
        let ka = self.rank();
        // Element of B: one base element per monomial.
        let to_vec = |el: &[Elem]| -> Vec<u32> { el.iter().flat_map(|&c| self.coeffs(c)).collect() };
        let b_mul = |x: &[Elem], y: &[Elem]| -> Vec<Elem> {
            let mut out = vec![0; monos];
            for (a, &xa) in x.iter().enumerate() {
                if xa == 0 {
                    continue;
                }
                for (b, &yb) in y.iter().enumerate() {
                    if yb == 0 {
                        continue;
                    }
                    let c = self.mul(xa, yb);
                    if c == 0 {
                        continue;
                    }
                    for (g, &m) in mono_prod[a * monos + b].iter().enumerate() {
                        if m != 0 {
                            out[g] = self.add(out[g], self.mul(c, m));
                        }
                    }
                }
            }
            out
        };
        let basis = |g: usize| -> Vec<Elem> {
            let mono = g / ka;
            let mut el = vec![0; monos];
            el[mono] = self.index_of(&self.alg.unit_vec(g % ka));
            el
        };
        let mut consts = Vec::with_capacity(kb * kb * kb);
        for i in 0..kb {
            for j in 0..kb {
                consts.extend(to_vec(&b_mul(&basis(i), &basis(j))));
            }
        }
        let mut one_el = vec![0; monos];
        one_el[0] = self.one;
        let b_alg = Algebra {
            orders: (0..kb).map(|g| self.alg.orders[g % ka]).collect(),
            consts,
            one: to_vec(&one_el),
        };
        b_alg.validate()?;
        let var_el = |v: usize| -> Vec<Elem> {
            let mut exps = vec![0; var_count];
            let mut el = vec![0; monos];
            if degs[v] == 1 {
                // x_v is a base element: x = -c_0
                el[0] = self.neg(bounds[v][0]);
            } else {
                exps[v] = 1;
                el[mono_index(&exps)] = self.one;
            }
            el
        };
        let vars: Vec<Vec<Elem>> = (0..var_count).map(var_el).collect();
        let mut ideal_rows: Vec<Vec<u32>> = Vec::new();
        for rel in relations {
            let mut value = vec![0; monos];
            for (exps, c) in &rel.terms {
                let mut term = vec![0; monos];
                term[0] = *c;
                for (v, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        term = b_mul(&term, &vars[v]);
                    }
                }
                for (slot, t) in value.iter_mut().zip(term) {
                    *slot = self.add(*slot, t);
                }
            }
            for g in 0..kb {
                ideal_rows.push(to_vec(&b_mul(&basis(g), &value)));
            }
        }
        let (q_alg, proj) = b_alg.quotient(&ideal_rows)?;
        let ring = FiniteRing::from_algebra(q_alg, cap)?;
        let embed = |el: &[Elem]| ring.index_of(&proj.project(&to_vec(el)));
        let base_map = (0..self.size as Elem)
            .map(|x| {
                let mut el = vec![0; monos];
                el[0] = x;
                embed(&el)
            })
            .collect();
        let variables = vars.iter().map(|v| embed(v)).collect();
        Ok(PolynomialQuotient { ring, base_map, variables })
    }

    /// Turns a subset closed under `+` and `×`, on which `unit` acts as the
    /// identity, into a ring of its own. Returns the ring and the embedding of
    /// its elements into `self`.
    pub fn from_closed_subset(&self, set: &ElemSet, unit: Elem) -> Result<(FiniteRing, Vec<Elem>), RingError> {
        // Greedy additive generators with triangular relations.
        let mut coeff: BTreeMap<Elem, Vec<i128>> = BTreeMap::new();
        coeff.insert(0, Vec::new());
        let mut gens: Vec<Elem> = Vec::new();
        let mut rels: Vec<Vec<i128>> = Vec::new();
        for x in set.iter() {
            if coeff.contains_key(&x) {
                continue;
            }
            let j = gens.len();
            gens.push(x);
            for v in coeff.values_mut() {
                v.push(0);
            }
            let span: Vec<(Elem, Vec<i128>)> = coeff.iter().map(|(a, b)| (*a, b.clone())).collect();
            let mut kx = x;
            let mut n = 1i128;
            while !coeff.contains_key(&kx) {
                for (s, v) in &span {
                    let mut w = v.clone();
                    w[j] = n;
                    coeff.insert(self.add(*s, kx), w);
                }
                kx = self.add(kx, x);
                n += 1;
            }
            let mut rel: Vec<i128> = coeff[&kx].iter().map(|c| -c).collect();
            rel[j] += n;
            rels.push(rel);
        }
        let m = gens.len();
        for r in rels.iter_mut() {
            r.resize(m, 0);
        }
        if coeff.len() != set.len() {
            return Err(RingError::Malformed("subset is not an additive subgroup".into()));
        }
        let d = diagonalize(rels, m);
        let kept: Vec<usize> = (0..m).filter(|&i| d.diag[i] != 1).collect();
        if kept.is_empty() {
            return Err(RingError::Collapse);
        }
        let coords = |x: Elem| -> Vec<u32> {
            let c = &coeff[&x];
            kept.iter()
                .map(|&i| {
                    let s: i128 = (0..m).map(|j| c.get(j).copied().unwrap_or(0) * d.q[j][i]).sum();
                    s.rem_euclid(d.diag[i]) as u32
                })
                .collect()
        };
        let lifts: Vec<Elem> = kept
            .iter()
            .map(|&i| {
                let mut acc = 0;
                for (j, &g) in gens.iter().enumerate() {
                    acc = self.add(acc, self.scalar(d.q_inv[i][j], g));
                }
                acc
            })
            .collect();
        let km = kept.len();
        let mut consts = Vec::with_capacity(km * km * km);
        for a in 0..km {
            for b in 0..km {
                let p = self.mul(lifts[a], lifts[b]);
                if !set.contains(p) {
                    return Err(RingError::Malformed("subset is not closed under multiplication".into()));
                }
                consts.extend(coords(p));
            }
        }
        if !set.contains(unit) {
            return Err(RingError::Malformed("unit outside the subset".into()));
        }
        let alg = Algebra { orders: kept.iter().map(|&i| d.diag[i] as u32).collect(), consts, one: coords(unit) };
        let ring = FiniteRing::from_algebra(alg, usize::MAX)?;
        let mut embedding = vec![0; ring.size];
        for x in set.iter() {
            embedding[ring.index_of(&coords(x)) as usize] = x;
        }
        Ok((ring, embedding))
    }

    /// `R/I` with the projection of every element.
    pub fn quotient_ring(&self, ideal: &Ideal) -> Result<(FiniteRing, Vec<Elem>), RingError> {
        if !self.is_ideal(&ideal.members) {
            return Err(RingError::NotIdeal);
        }
        if ideal.members.contains(self.one) {
            return Err(RingError::UnitIdeal);
        }
        let rels: Vec<Vec<u32>> = self.spanning_set(&ideal.members).iter().map(|&x| self.coeffs(x)).collect();
        let (alg, proj) = self.alg.quotient(&rels)?;
        let q = FiniteRing::from_algebra(alg, usize::MAX)?;
        let map = (0..self.size as Elem).map(|x| q.index_of(&proj.project(&self.coeffs(x)))).collect();
        Ok((q, map))
    }

    /// `R/M` for a maximal ideal `M`.
    pub fn residue_field(&self, m: &Ideal) -> Result<(FiniteRing, Vec<Elem>), RingError> {
        if !self.maximal_ideals().contains(m) {
            return Err(RingError::NotMaximal);
        }
        self.quotient_ring(m)
    }

    pub fn is_ideal(&self, set: &ElemSet) -> bool {
        if set.universe() != self.size || !set.contains(0) {
            return false;
        }
        let span = self.spanning_set(set);
        let ring_span = self.additive_generators();
        for &a in &span {
            for &b in &span {
                if !set.contains(self.add(a, b)) {
                    return false;
                }
            }
            if !set.contains(self.neg(a)) {
                return false;
            }
            for &g in &ring_span {
                if !set.contains(self.mul(a, g)) {
                    return false;
                }
            }
        }
        // The span must actually reach the whole set.
        self.additive_closure(&span).len() == set.len()
    }

    pub fn is_field(&self) -> bool {
        (1..self.size as Elem).all(|x| (1..self.size as Elem).any(|y| self.mul(x, y) == self.one))
    }

    pub fn is_local(&self) -> bool {
        self.primitive_idempotent_list().len() == 1
    }

    /// Primitive idempotents, ascending by index.
    pub fn primitive_idempotent_list(&self) -> Vec<Elem> {
        self.primitive_idempotents_in(&ElemSet::full(self.size))
    }

    /// Primitive idempotents of a subring given as a set.
    pub fn primitive_idempotents_in(&self, set: &ElemSet) -> Vec<Elem> {
        let ids: Vec<Elem> = self.idempotents.iter().copied().filter(|&e| e != 0 && set.contains(e)).collect();
        ids.iter()
            .copied()
            .filter(|&e| !ids.iter().any(|&f| f != e && self.mul(e, f) == f))
            .collect()
    }

    /// Maximal ideal of the subring `set` attached to its primitive idempotent `e`.
    pub fn local_maximal_in(&self, set: &ElemSet, e: Elem) -> ElemSet {
        ElemSet::from_elems(self.size, set.iter().filter(|&x| self.nilpotent.contains(self.mul(e, x))))
    }

    pub fn primitive_idempotents(&self) -> LocalFactorDecomposition {
        let idempotents = self.primitive_idempotent_list();
        let mut factors = Vec::new();
        let mut maxes = Vec::new();
        for &e in &idempotents {
            let set = ElemSet::from_elems(self.size, (0..self.size as Elem).map(|x| self.mul(e, x)));
            let (f, emb) = self
                .from_closed_subset(&set, e)
                .expect("eR is a ring with unit e");
            maxes.push(Ideal { members: f.nilpotent.clone() });
            factors.push((f, emb));
        }
        LocalFactorDecomposition { idempotents, factors, maximal_ideal_of_factor: maxes }
    }

    /// All maximal ideals, one per primitive idempotent, in idempotent order.
    pub fn maximal_ideals(&self) -> Vec<Ideal> {
        let all = ElemSet::full(self.size);
        self.primitive_idempotent_list()
            .into_iter()
            .map(|e| Ideal { members: self.local_maximal_in(&all, e) })
            .collect()
    }

    // ---- element arithmetic ----

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn additive_orders(&self) -> &[u32] {
        &self.alg.orders
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn nilpotents(&self) -> &ElemSet {
        &self.nilpotent
    }

    pub fn idempotents(&self) -> &[Elem] {
        &self.idempotents
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        self.alg
            .orders
            .iter()
            .zip(&self.strides)
            .map(|(o, s)| (x / s) % o)
            .collect()
    }

    pub fn index_of(&self, v: &[u32]) -> Elem {
        v.iter().zip(&self.strides).zip(&self.alg.orders).map(|((c, s), o)| (c % o) * s).sum()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_tab {
            Some(t) => t[a as usize * self.size + b as usize],
            None => {
                let k = self.rank();
                let (da, db) = (&self.digits[a as usize * k..][..k], &self.digits[b as usize * k..][..k]);
                let mut out = 0;
                for l in 0..k {
                    out += (da[l] + db[l]) % self.alg.orders[l] * self.strides[l];
                }
                out
            }
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul_tab {
            Some(t) => t[a as usize * self.size + b as usize],
            None => self.mul_by_generators(a, b),
        }
    }

    fn mul_by_generators(&self, a: Elem, b: Elem) -> Elem {
        let k = self.rank();
        let mut acc = [0u64; MAX_RANK];
        for (i, &ai) in self.digits[a as usize * k..][..k].iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let y = self.gen_mul[i * self.size + b as usize] as usize;
            for (l, &dy) in self.digits[y * k..][..k].iter().enumerate() {
                acc[l] = (acc[l] + ai as u64 * dy as u64) % self.alg.orders[l] as u64;
            }
        }
        (0..k).map(|l| acc[l] as u32 * self.strides[l]).sum()
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg_tab[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Elem, e: u32) -> Elem {
        let mut out = self.one;
        for _ in 0..e {
            out = self.mul(out, a);
        }
        out
    }

    /// `s·a` for an integer `s`.
    pub fn scalar(&self, s: i128, a: Elem) -> Elem {
        self.index_of(&self.alg.scale_vec(s, &self.coeffs(a)))
    }

    /// Element for an integer `n`, i.e. `n·1`.
    pub fn from_int(&self, n: i128) -> Elem {
        self.scalar(n, self.one)
    }

    /// Additive generators of the ring as elements.
    pub fn additive_generators(&self) -> Vec<Elem> {
        (0..self.rank()).map(|i| self.index_of(&self.alg.unit_vec(i))).collect()
    }

    /// A small set whose additive span is the additive subgroup generated by `set`.
    pub fn spanning_set(&self, set: &ElemSet) -> Vec<Elem> {
        let mut span = AdditiveSpan::new(self);
        let mut out = Vec::new();
        for x in set.iter() {
            if span.absorb(x) {
                out.push(x);
            }
        }
        out
    }

    pub fn additive_closure(&self, elems: &[Elem]) -> ElemSet {
        let mut span = AdditiveSpan::new(self);
        for &x in elems {
            span.absorb(x);
        }
        span.set
    }

    /// Smallest additive subgroup containing `seeds` (and 1 if `with_one`)
    /// that is closed under multiplication by every element of `gens`.
    ///
    /// With `gens` spanning the generated ring this is the generated subring
    /// (or ideal, or submodule).
    pub fn closure(&self, seeds: &[Elem], gens: &[Elem], with_one: bool) -> ElemSet {
        let mut span = AdditiveSpan::new(self);
        let mut work: Vec<Elem> = seeds.iter().rev().copied().collect();
        if with_one {
            work.push(self.one);
        }
        while let Some(x) = work.pop() {
            if span.absorb(x) {
                for &g in gens {
                    let y = self.mul(g, x);
                    if !span.set.contains(y) {
                        work.push(y);
                    }
                }
            }
        }
        span.set
    }

    /// Checks every ring axiom over all elements. Quadratic memory is not
    /// needed, but time is cubic in the ring size.
    pub fn verify_axioms_exhaustive(&self) -> Result<(), RingError> {
        let n = self.size as Elem;
        for x in 0..n {
            if self.mul(self.one, x) != x {
                return Err(RingError::Axiom(alloc::format!("1·{x} ≠ {x}")));
            }
            if self.add(x, self.neg(x)) != 0 {
                return Err(RingError::Axiom(alloc::format!("{x} has no negative")));
            }
            for y in 0..n {
                if self.mul(x, y) != self.mul(y, x) || self.add(x, y) != self.add(y, x) {
                    return Err(RingError::Axiom(alloc::format!("{x}, {y} do not commute")));
                }
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(RingError::Axiom(alloc::format!("associativity fails on {x}, {y}, {z}")));
                    }
                    if self.mul(x, self.add(y, z)) != self.add(xy, self.mul(x, z)) {
                        return Err(RingError::Axiom(alloc::format!("distributivity fails on {x}, {y}, {z}")));
                    }
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        return Err(RingError::Axiom(alloc::format!("addition not associative on {x}, {y}, {z}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Incrementally grown additive subgroup.
pub struct AdditiveSpan<'a> {
    ring: &'a FiniteRing,
    pub set: ElemSet,
    list: Vec<Elem>,
}

impl<'a> AdditiveSpan<'a> {
    pub fn new(ring: &'a FiniteRing) -> Self {
        let mut set = ElemSet::empty(ring.size);
        set.insert(0);
        AdditiveSpan { ring, set, list: vec![0] }
    }

    /// Replaces the span `C` by `C + <x>`; returns whether it grew.
    pub fn absorb(&mut self, x: Elem) -> bool {
        if self.set.contains(x) {
            return false;
        }
        let base_len = self.list.len();
        let mut y = x;
        while !self.set.contains(y) {
            for i in 0..base_len {
                let z = self.ring.add(self.list[i], y);
                if self.set.insert(z) {
                    self.list.push(z);
                }
            }
            y = self.ring.add(y, x);
        }
        true
    }
}

/// Lexicographically least monic irreducible of degree `k` over `F_p`, as
/// coefficients `f_0..f_{k-1}` (the leading 1 is implicit).
fn least_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = (p as usize).pow(k as u32);
    let decode = |mut n: usize, deg: usize| -> Vec<u32> {
        // Most significant digit is the coefficient of X^{deg-1}.
        let mut c = vec![0u32; deg];
        for slot in c.iter_mut() {
            *slot = (n % p as usize) as u32;
            n /= p as usize;
        }
        c
    };
    let encode = |c: &[u32]| -> usize { c.iter().rev().fold(0, |acc, &d| acc * p as usize + d as usize) };
    let mut reducible = vec![false; count];
    for d in 1..=k / 2 {
        let e = k - d;
        for a in 0..(p as usize).pow(d as u32) {
            let mut g = decode(a, d);
            g.push(1);
            for b in 0..(p as usize).pow(e as u32) {
                let mut h = decode(b, e);
                h.push(1);
                let mut prod = vec![0u32; k + 1];
                for (i, &gi) in g.iter().enumerate() {
                    for (j, &hj) in h.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + gi * hj) % p;
                    }
                }
                reducible[encode(&prod[..k])] = true;
            }
        }
    }
    let n = (0..count).find(|&n| !reducible[n]).expect("irreducibles exist in every degree");
    decode(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_rejects_small_modulus() {
        assert_eq!(FiniteRing::zmod(0, DEFAULT_CAP), Err(RingError::Modulus(0)));
        assert_eq!(FiniteRing::zmod(1, DEFAULT_CAP), Err(RingError::Modulus(1)));
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2), [1, 1]); // X²+X+1
        assert_eq!(least_irreducible(2, 3), [1, 1, 0]); // X³+X+1
        assert_eq!(least_irreducible(3, 2), [1, 0]); // X²+1
        assert_eq!(least_irreducible(2, 1), [0]); // X
    }

    #[test]
    fn zmod6_idempotents() {
        let r = FiniteRing::zmod(6, DEFAULT_CAP).unwrap();
        let d = r.primitive_idempotents();
        assert_eq!(d.idempotents, [3, 4]);
        let sizes: Vec<usize> = d.factors.iter().map(|(f, _)| f.size()).collect();
        assert_eq!(sizes, [2, 3]);
        assert_eq!(r.maximal_ideals().len(), 2);
    }

    #[test]
    fn gf_fields_are_fields() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1)] {
            let f = FiniteRing::gf(p, k, DEFAULT_CAP).unwrap();
            assert!(f.is_field(), "GF({p}^{k})");
            assert_eq!(f.size(), (p as usize).pow(k));
        }
    }

    #[test]
    fn non_associative_data_rejected() {
        // Basis 1, a, b over F_2 with a² = b, ab = 0, b² = a: then
        // (a·a)·b = a but a·(a·b) = 0.
        let alg = Algebra {
            orders: vec![2, 2, 2],
            consts: vec![
                1, 0, 0, 0, 1, 0, 0, 0, 1, //
                0, 1, 0, 0, 0, 1, 0, 0, 0, //
                0, 0, 1, 0, 0, 0, 0, 1, 0,
            ],
            one: vec![1, 0, 0],
        };
        assert!(matches!(FiniteRing::from_algebra(alg, 16), Err(RingError::NotAssociative(_))));
    }
}
