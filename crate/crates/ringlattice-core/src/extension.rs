//! Ring extensions `R ⊆ S` inside a fixed finite ambient ring `S`.
//!
//! Subrings are explicit element sets. Every intermediate ring `T` of an
//! enumerated lattice carries its primitive idempotents and the maximal
//! ideal attached to each, which is all the prime spectrum there is for a
//! finite ring. Predicates about a pair `T ⊆ U` of intermediate rings are
//! computed either by scanning elements or from these local data.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::ElemSet;
use crate::finring::{Elem, FiniteRing, Ideal, RingError};
use crate::lattice::{FiniteLattice, LatticeError};

pub const DEFAULT_NODE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("interval enumeration exceeded the node limit of {0}")]
    NodeLimit(usize),
    #[error("minimal-type classification disagrees with the minimality search (minimal: {minimal}, matching types: {types})")]
    InconsistentClassification { minimal: bool, types: usize },
    #[error("the ideal is not a maximal ideal of the base ring")]
    NotMaximal,
    #[error("the given set is not a subring")]
    NotSubring,
    #[error("theorem violation: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The three kinds of integral minimal extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MinimalType {
    Inert,
    Decomposed,
    Ramified,
}

impl MinimalType {
    pub fn letter(self) -> char {
        match self {
            MinimalType::Inert => 'i',
            MinimalType::Decomposed => 'd',
            MinimalType::Ramified => 'r',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MinimalType::Inert => "inert",
            MinimalType::Decomposed => "decomposed",
            MinimalType::Ramified => "ramified",
        }
    }
}

/// One local factor of a subring: its primitive idempotent `e`, the maximal
/// ideal `{t : et nilpotent}` and the size of the residue field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Local {
    pub idempotent: Elem,
    pub maximal: ElemSet,
    pub residue_size: usize,
}

/// A subring of the ambient ring with its local structure.
#[derive(Debug, Clone)]
pub struct Subring {
    pub members: ElemSet,
    /// Additive generators of `members`.
    pub span: Vec<Elem>,
    /// Local factors in ascending idempotent order; one per maximal ideal.
    pub locals: Vec<Local>,
}

impl PartialEq for Subring {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subring {}

impl Subring {
    /// Wraps a set the caller knows to be a subring.
    pub fn new(ring: &FiniteRing, members: ElemSet) -> Subring {
        let span = ring.spanning_set(&members);
        let locals = ring
            .primitive_idempotents_in(&members)
            .into_iter()
            .map(|e| {
                let maximal = ring.local_maximal_in(&members, e);
                let residue_size = members.len() / maximal.len();
                Local { idempotent: e, maximal, residue_size }
            })
            .collect();
        Subring { members, span, locals }
    }

    /// Checks closure before wrapping.
    pub fn checked(ring: &FiniteRing, members: ElemSet) -> Result<Subring, ExtensionError> {
        if members.universe() != ring.size() || !members.contains(0) || !members.contains(ring.one()) {
            return Err(ExtensionError::NotSubring);
        }
        let span = ring.spanning_set(&members);
        if ring.closure(&span, &span, true) != members {
            return Err(ExtensionError::NotSubring);
        }
        Ok(Subring::new(ring, members))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn is_subset(&self, other: &Subring) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_local(&self) -> bool {
        self.locals.len() == 1
    }

    pub fn maximal_ideals(&self) -> Vec<Ideal> {
        self.locals.iter().map(|l| Ideal { members: l.maximal.clone() }).collect()
    }
}

/// `e·X` for an element `e` and a set `X`.
pub fn scaled_set(ring: &FiniteRing, e: Elem, set: &ElemSet) -> ElemSet {
    ElemSet::from_elems(ring.size(), set.iter().map(|x| ring.mul(e, x)))
}

/// For each maximal ideal of `hi`, the index of its contraction in `lo`.
pub fn contraction(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> Vec<usize> {
    hi.locals
        .iter()
        .map(|q| {
            lo.locals
                .iter()
                .position(|p| ring.mul(p.idempotent, q.idempotent) == q.idempotent)
                .expect("idempotents of the smaller ring refine into those of the larger")
        })
        .collect()
}

/// For each maximal ideal of `lo`, the maximal ideals of `hi` lying over it.
pub fn fibers_of(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> Vec<Vec<usize>> {
    let c = contraction(ring, lo, hi);
    (0..lo.locals.len()).map(|p| (0..c.len()).filter(|&q| c[q] == p).collect()).collect()
}

/// All residual field extensions are isomorphisms.
pub fn is_infra_integral(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> bool {
    let c = contraction(ring, lo, hi);
    hi.locals.iter().zip(&c).all(|(q, &p)| q.residue_size == lo.locals[p].residue_size)
}

/// The spectral map `Max(hi) → Max(lo)` is injective.
pub fn is_i_extension(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> bool {
    let mut c = contraction(ring, lo, hi);
    c.sort_unstable();
    c.windows(2).all(|w| w[0] != w[1])
}

pub fn is_subintegral(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> bool {
    is_infra_integral(ring, lo, hi) && is_i_extension(ring, lo, hi)
}

/// Some `b ∈ hi∖lo` with `b², b³ ∈ lo`.
pub fn seminormal_violation(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> Option<Elem> {
    hi.members.iter().filter(|&b| !lo.contains(b)).find(|&b| {
        let b2 = ring.mul(b, b);
        lo.contains(b2) && lo.contains(ring.mul(b2, b))
    })
}

/// Some `b ∈ hi∖lo` and `r ∈ lo` with `b² − rb, b³ − rb² ∈ lo`.
pub fn t_closed_violation(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> Option<(Elem, Elem)> {
    for b in hi.members.iter().filter(|&b| !lo.contains(b)) {
        let b2 = ring.mul(b, b);
        for r in lo.members.iter() {
            let x = ring.sub(b2, ring.mul(r, b));
            if lo.contains(x) && lo.contains(ring.mul(b, x)) {
                return Some((b, r));
            }
        }
    }
    None
}

/// Some `b ∈ hi∖lo` with `b² − b, b³ − b² ∈ lo`.
pub fn u_closed_violation(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> Option<Elem> {
    hi.members.iter().filter(|&b| !lo.contains(b)).find(|&b| {
        let x = ring.sub(ring.mul(b, b), b);
        lo.contains(x) && lo.contains(ring.mul(b, x))
    })
}

/// `(lo : hi) = {x ∈ hi : x·hi ⊆ lo}`.
pub fn conductor_of(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> ElemSet {
    ElemSet::from_elems(
        ring.size(),
        lo.members.iter().filter(|&x| hi.span.iter().all(|&g| lo.contains(ring.mul(x, g)))),
    )
}

/// Indices (into `lo.locals`) of the maximal ideals `M` of `lo` with
/// `lo_M ≠ hi_M`, i.e. `e·lo ≠ e·hi`.
pub fn msupp_of(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> Vec<usize> {
    (0..lo.locals.len())
        .filter(|&i| {
            let e = lo.locals[i].idempotent;
            scaled_set(ring, e, &lo.members).len() != scaled_set(ring, e, &hi.members).len()
        })
        .collect()
}

/// `{u ∈ hi : f·u ∈ lo}` where `f` sums the idempotents of `lo` outside
/// `keep`. This is the intermediate ring agreeing with `hi` at the kept
/// maximal ideals and with `lo` elsewhere.
pub fn splitter_set(ring: &FiniteRing, lo: &Subring, hi: &Subring, keep: &[usize]) -> ElemSet {
    let mut f = 0;
    for (i, l) in lo.locals.iter().enumerate() {
        if !keep.contains(&i) {
            f = ring.add(f, l.idempotent);
        }
    }
    ElemSet::from_elems(ring.size(), hi.members.iter().filter(|&u| lo.contains(ring.mul(f, u))))
}

/// Definitional minimality: `lo ≠ hi` and `lo[s] = hi` for every `s ∈ hi∖lo`.
pub fn is_minimal_bruteforce(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> bool {
    if lo.len() == hi.len() {
        return false;
    }
    let mut seeds = lo.span.clone();
    seeds.push(0);
    hi.members.iter().filter(|&s| !lo.contains(s)).all(|s| {
        *seeds.last_mut().expect("nonempty") = s;
        ring.closure(&seeds, &seeds, true).len() == hi.len()
    })
}

pub(crate) fn log_exact(base: usize, x: usize) -> Option<u32> {
    if base < 2 {
        return None;
    }
    let mut v = 1usize;
    let mut d = 0;
    while v < x {
        v = v.checked_mul(base)?;
        d += 1;
    }
    (v == x).then_some(d)
}

fn is_prime_u32(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Decides the minimal type of `lo ⊂ hi` from the conductor and checks the
/// answer against the definitional minimality test.
pub fn classify_minimal_pair(
    ring: &FiniteRing,
    lo: &Subring,
    hi: &Subring,
) -> Result<Option<MinimalType>, ExtensionError> {
    let minimal = is_minimal_bruteforce(ring, lo, hi);
    let types = minimal_type_candidates(ring, lo, hi);
    match (minimal, types.as_slice()) {
        (true, [t]) => Ok(Some(*t)),
        (false, []) => Ok(None),
        _ => Err(ExtensionError::InconsistentClassification { minimal, types: types.len() }),
    }
}

/// Which of the three conductor conditions hold for `lo ⊆ hi`.
pub fn minimal_type_candidates(ring: &FiniteRing, lo: &Subring, hi: &Subring) -> Vec<MinimalType> {
    let mut out = Vec::new();
    if lo.len() == hi.len() {
        return out;
    }
    let m = conductor_of(ring, lo, hi);
    let Some(p) = lo.locals.iter().find(|l| l.maximal == m) else {
        return out;
    };
    let q = p.residue_size;
    let quotient = hi.len() / m.len();
    if hi.locals.iter().any(|l| l.maximal == m) {
        if let Some(d) = log_exact(q, quotient) {
            if is_prime_u32(d) {
                out.push(MinimalType::Inert);
            }
        }
    }
    let trivial: Vec<&Local> = hi.locals.iter().filter(|l| l.residue_size == q).collect();
    'pairs: for (i, a) in trivial.iter().enumerate() {
        for b in &trivial[i + 1..] {
            if a.maximal.intersection(&b.maximal) == m {
                out.push(MinimalType::Decomposed);
                break 'pairs;
            }
        }
    }
    if quotient == q * q {
        let ramified = trivial.iter().any(|l| {
            if !(m.is_subset(&l.maximal) && m.len() < l.maximal.len()) {
                return false;
            }
            let span = ring.spanning_set(&l.maximal);
            span.iter().all(|&x| span.iter().all(|&y| m.contains(ring.mul(x, y))))
        });
        if ramified {
            out.push(MinimalType::Ramified);
        }
    }
    out
}

/// Predicate flags of a proper extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PropertyFlags {
    pub subintegral: bool,
    pub seminormal: bool,
    pub infra_integral: bool,
    pub t_closed: bool,
    pub u_closed: bool,
    pub i_extension: bool,
    pub simple: bool,
    pub chained: bool,
    pub branched: bool,
    pub arithmetic: bool,
    pub locally_minimal: bool,
    pub delta: bool,
}

impl PropertyFlags {
    pub fn named(&self) -> [(&'static str, bool); 12] {
        [
            ("subintegral", self.subintegral),
            ("seminormal", self.seminormal),
            ("infra_integral", self.infra_integral),
            ("t_closed", self.t_closed),
            ("u_closed", self.u_closed),
            ("i_extension", self.i_extension),
            ("simple", self.simple),
            ("chained", self.chained),
            ("branched", self.branched),
            ("arithmetic", self.arithmetic),
            ("locally_minimal", self.locally_minimal),
            ("delta", self.delta),
        ]
    }
}

/// Predicates are only meaningful for proper extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredicateReport {
    Trivial,
    Proper(PropertyFlags),
}

impl PredicateReport {
    pub fn flags(&self) -> Option<&PropertyFlags> {
        match self {
            PredicateReport::Trivial => None,
            PredicateReport::Proper(f) => Some(f),
        }
    }
}

/// Canonical intermediate rings of `lo ⊆ hi`, as node indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    /// Seminormalization: greatest `T` with `lo ⊆ T` subintegral.
    pub plus: usize,
    /// t-closure: greatest `T` with `lo ⊆ T` infra-integral.
    pub t: usize,
    /// u-closure: least `T` with `T ⊆ hi` u-closed.
    pub u: usize,
    /// Least `T` with `T ⊆ hi` subintegral, when a least one exists.
    pub cosub: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SupportProfile {
    pub msupp: Vec<Ideal>,
    pub crucial: Option<Ideal>,
    pub conductor: Ideal,
}

/// A residual field extension `κ_R(Q ∩ R) → κ_S(Q)`.
#[derive(Debug, Clone)]
pub struct ResidualExtension {
    pub small: FiniteRing,
    pub large: FiniteRing,
    /// Image in `large` of each element of `small`.
    pub embedding: Vec<Elem>,
    pub degree: u32,
}

/// An extension `R ⊆ S`, with `S` the ambient ring.
#[derive(Debug, Clone)]
pub struct Extension {
    ambient: Arc<FiniteRing>,
    base: Subring,
    top: Subring,
}

impl Extension {
    /// `R` = subring generated by `generators` (and 1).
    pub fn new(ambient: Arc<FiniteRing>, generators: &[Elem]) -> Extension {
        let mut seeds = generators.to_vec();
        seeds.push(ambient.one());
        let set = ambient.closure(&seeds, &seeds, true);
        let base = Subring::new(&ambient, set);
        let top = Subring::new(&ambient, ElemSet::full(ambient.size()));
        Extension { ambient, base, top }
    }

    pub fn from_base_set(ambient: Arc<FiniteRing>, set: ElemSet) -> Result<Extension, ExtensionError> {
        let base = Subring::checked(&ambient, set)?;
        let top = Subring::new(&ambient, ElemSet::full(ambient.size()));
        Ok(Extension { ambient, base, top })
    }

    pub fn ambient(&self) -> &Arc<FiniteRing> {
        &self.ambient
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ambient
    }

    pub fn base(&self) -> &Subring {
        &self.base
    }

    pub fn top(&self) -> &Subring {
        &self.top
    }

    pub fn is_trivial(&self) -> bool {
        self.base.len() == self.ambient.size()
    }

    /// Smallest subring containing `base` and `elems`.
    pub fn generated_subring(&self, base: &Subring, elems: &[Elem]) -> Subring {
        let mut seeds = base.span.clone();
        seeds.extend_from_slice(elems);
        Subring::new(&self.ambient, self.ambient.closure(&seeds, &seeds, true))
    }

    /// All intermediate rings, by closing `{R}` under joins with the
    /// monogenic extensions `R[s]`.
    pub fn enumerate_interval(&self, node_limit: usize) -> Result<ExtensionLattice, ExtensionError> {
        let ring = &*self.ambient;
        let mut mono_seen: BTreeMap<Vec<u64>, ()> = BTreeMap::new();
        let mut mono: Vec<(Elem, ElemSet)> = Vec::new();
        let mut seeds = self.base.span.clone();
        seeds.push(0);
        for s in 0..ring.size() as Elem {
            if self.base.contains(s) {
                continue;
            }
            *seeds.last_mut().expect("nonempty") = s;
            let set = ring.closure(&seeds, &seeds, true);
            if mono_seen.insert(set.words().to_vec(), ()).is_none() {
                mono.push((s, set));
            }
        }
        let mut index: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        let mut sets: Vec<ElemSet> = vec![self.base.members.clone()];
        let mut spans: Vec<Vec<Elem>> = vec![self.base.span.clone()];
        index.insert(self.base.members.words().to_vec(), 0);
        let mut next = 0;
        while next < sets.len() {
            let (set, span) = (sets[next].clone(), spans[next].clone());
            next += 1;
            let mut seeds = span.clone();
            seeds.push(0);
            for (s, m) in &mono {
                if m.is_subset(&set) {
                    continue;
                }
                *seeds.last_mut().expect("nonempty") = *s;
                let joined = ring.closure(&seeds, &seeds, true);
                let key = joined.words().to_vec();
                if index.contains_key(&key) {
                    continue;
                }
                if sets.len() >= node_limit {
                    return Err(ExtensionError::NodeLimit(node_limit));
                }
                index.insert(key, sets.len());
                spans.push(ring.spanning_set(&joined));
                sets.push(joined);
            }
        }
        sets.sort();
        let nodes: Vec<Subring> = sets.into_iter().map(|s| Subring::new(ring, s)).collect();
        ExtensionLattice::from_nodes(self.ambient.clone(), nodes)
    }

    pub fn conductor(&self) -> Ideal {
        Ideal { members: conductor_of(&self.ambient, &self.base, &self.top) }
    }

    pub fn support_profile(&self) -> SupportProfile {
        let msupp: Vec<Ideal> = msupp_of(&self.ambient, &self.base, &self.top)
            .into_iter()
            .map(|i| Ideal { members: self.base.locals[i].maximal.clone() })
            .collect();
        let crucial = (msupp.len() == 1).then(|| msupp[0].clone());
        SupportProfile { msupp, crucial, conductor: self.conductor() }
    }

    /// `eR ⊆ eS` as an extension in its own right, where `e` is the
    /// primitive idempotent of `R` attached to `m`.
    pub fn localize_at(&self, m: &Ideal) -> Result<Extension, ExtensionError> {
        let ring = &*self.ambient;
        let local = self.base.locals.iter().find(|l| l.maximal == m.members).ok_or(ExtensionError::NotMaximal)?;
        let e = local.idempotent;
        let es = scaled_set(ring, e, &ElemSet::full(ring.size()));
        let (sm, emb) = ring.from_closed_subset(&es, e)?;
        let mut back = vec![u32::MAX; ring.size()];
        for (i, &x) in emb.iter().enumerate() {
            back[x as usize] = i as Elem;
        }
        let rm = ElemSet::from_elems(sm.size(), self.base.members.iter().map(|r| back[ring.mul(e, r) as usize]));
        Extension::from_base_set(Arc::new(sm), rm)
    }

    /// For each maximal ideal of `R`, the maximal ideals of `S` over it.
    pub fn fibers(&self) -> Vec<(Ideal, Vec<Ideal>)> {
        fibers_of(&self.ambient, &self.base, &self.top)
            .into_iter()
            .enumerate()
            .map(|(p, qs)| {
                (
                    Ideal { members: self.base.locals[p].maximal.clone() },
                    qs.into_iter().map(|q| Ideal { members: self.top.locals[q].maximal.clone() }).collect(),
                )
            })
            .collect()
    }

    pub fn residual_extension(&self, q: &Ideal) -> Result<ResidualExtension, ExtensionError> {
        let ring = &*self.ambient;
        let (large, proj) = ring.residue_field(q)?;
        let image = ElemSet::from_elems(large.size(), self.base.members.iter().map(|r| proj[r as usize]));
        let (small, embedding) = large.from_closed_subset(&image, large.one())?;
        let degree = log_exact(small.size(), large.size()).expect("finite field degree");
        Ok(ResidualExtension { small, large, embedding, degree })
    }

    pub fn classify_minimal(&self) -> Result<Option<MinimalType>, ExtensionError> {
        classify_minimal_pair(&self.ambient, &self.base, &self.top)
    }

    /// The maximal ideals of `R`, as sets of ambient elements.
    pub fn base_maximal_ideals(&self) -> Vec<Ideal> {
        self.base.maximal_ideals()
    }
}

/// The lattice `[R,S]` with the subrings at its nodes.
#[derive(Debug, Clone)]
pub struct ExtensionLattice {
    ring: Arc<FiniteRing>,
    pub nodes: Vec<Subring>,
    pub order: FiniteLattice,
    index: BTreeMap<Vec<u64>, usize>,
}

impl ExtensionLattice {
    fn from_nodes(ring: Arc<FiniteRing>, nodes: Vec<Subring>) -> Result<Self, ExtensionError> {
        let order = FiniteLattice::from_order(nodes.len(), |a, b| nodes[a].is_subset(&nodes[b]))?;
        let index = nodes.iter().enumerate().map(|(i, n)| (n.members.words().to_vec(), i)).collect();
        Ok(ExtensionLattice { ring, nodes, order, index })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ambient(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn find(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(set.words()).copied()
    }

    /// Extension `nodes[lo] ⊆ nodes[hi]` as a standalone value.
    pub fn extension(&self, lo: usize) -> Extension {
        Extension {
            ambient: self.ring.clone(),
            base: self.nodes[lo].clone(),
            top: self.nodes[self.top()].clone(),
        }
    }

    /// Minimal generators of node `i` over node 0, chosen greedily in
    /// ascending element order.
    pub fn generators(&self, i: usize) -> Vec<Elem> {
        self.generators_over(0, i)
    }

    pub fn generators_over(&self, lo: usize, i: usize) -> Vec<Elem> {
        let ring = &*self.ring;
        let mut cur = self.nodes[lo].members.clone();
        let mut seeds = self.nodes[lo].span.clone();
        let mut gens = Vec::new();
        for x in self.nodes[i].members.iter() {
            if !cur.contains(x) {
                gens.push(x);
                seeds.push(x);
                cur = ring.closure(&seeds, &seeds, true);
            }
        }
        gens
    }

    /// The minimal type of every Hasse edge.
    pub fn cover_types(&self) -> Result<Vec<(usize, usize, MinimalType)>, ExtensionError> {
        self.order
            .covers()
            .into_iter()
            .map(|(a, b)| {
                classify_minimal_pair(&self.ring, &self.nodes[a], &self.nodes[b])?
                    .map(|t| (a, b, t))
                    .ok_or(ExtensionError::InconsistentClassification { minimal: false, types: 0 })
            })
            .collect()
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.order.is_cover(a, b)
    }

    pub fn msupp(&self, lo: usize, hi: usize) -> Vec<usize> {
        msupp_of(&self.ring, &self.nodes[lo], &self.nodes[hi])
    }

    /// The node agreeing with `hi` at the maximal ideals `keep` of `lo` and
    /// with `lo` elsewhere.
    pub fn split_node(&self, lo: usize, hi: usize, keep: &[usize]) -> Result<usize, ExtensionError> {
        let set = splitter_set(&self.ring, &self.nodes[lo], &self.nodes[hi], keep);
        self.find(&set)
            .ok_or_else(|| ExtensionError::InvariantViolation("a local splitter is not an intermediate ring".into()))
    }

    /// Splitter of `lo ⊆ hi` at `x ⊆ msupp(lo, hi)`: the unique node `T` with
    /// `MSupp(T/lo) = x` and `MSupp(hi/T) = msupp ∖ x`. The search over the
    /// interval is cross-checked against the local construction.
    pub fn splitter(&self, lo: usize, hi: usize, x: &[usize]) -> Result<Option<usize>, ExtensionError> {
        let ring = &*self.ring;
        let supp = self.msupp(lo, hi);
        let mut want_lo: Vec<usize> = x.to_vec();
        want_lo.sort_unstable();
        let want_hi: Vec<usize> = supp.iter().copied().filter(|m| !x.contains(m)).collect();
        let lo_node = &self.nodes[lo];
        let found: Vec<usize> = self
            .order
            .interval_nodes(lo, hi)
            .into_iter()
            .filter(|&t| {
                let node = &self.nodes[t];
                let up: Vec<usize> = (0..lo_node.locals.len())
                    .filter(|&i| {
                        let e = lo_node.locals[i].idempotent;
                        scaled_set(ring, e, &lo_node.members).len() != scaled_set(ring, e, &node.members).len()
                    })
                    .collect();
                let down: Vec<usize> = (0..lo_node.locals.len())
                    .filter(|&i| {
                        let e = lo_node.locals[i].idempotent;
                        scaled_set(ring, e, &node.members).len() != scaled_set(ring, e, &self.nodes[hi].members).len()
                    })
                    .collect();
                up == want_lo && down == want_hi
            })
            .collect();
        match found.as_slice() {
            [] => Ok(None),
            [t] => {
                let direct = self.split_node(lo, hi, x)?;
                if direct != *t {
                    return Err(ExtensionError::InvariantViolation(
                        "splitter search disagrees with the local construction".into(),
                    ));
                }
                Ok(Some(*t))
            }
            _ => Err(ExtensionError::InvariantViolation("splitter is not unique".into())),
        }
    }

    /// Nodes `V` in `[lo, hi]` with `T ∧ V = lo` and `T ∨ V = hi`.
    pub fn complements_within(&self, lo: usize, hi: usize, t: usize) -> Vec<usize> {
        self.order
            .interval_nodes(lo, hi)
            .into_iter()
            .filter(|&v| self.order.meet(t, v) == lo && self.order.join(t, v) == hi)
            .collect()
    }

    pub fn complements(&self, t: usize) -> Vec<usize> {
        self.complements_within(0, self.top(), t)
    }

    /// Every node of `[lo, hi]` is comparable to every member of `chain`.
    pub fn is_pinched_within(&self, lo: usize, hi: usize, chain: &[usize]) -> Result<bool, ExtensionError> {
        for (i, &a) in chain.iter().enumerate() {
            for &b in &chain[i + 1..] {
                if !self.order.comparable(a, b) {
                    return Err(LatticeError::ChainNotTotal(a, b).into());
                }
            }
        }
        let nodes = self.order.interval_nodes(lo, hi);
        Ok(chain.iter().all(|&c| nodes.iter().all(|&x| self.order.comparable(x, c))))
    }

    pub fn is_pinched_at(&self, chain: &[usize]) -> Result<bool, ExtensionError> {
        self.is_pinched_within(0, self.top(), chain)
    }

    pub fn is_chained(&self, lo: usize, hi: usize) -> bool {
        self.order
            .interval_nodes(lo, hi)
            .iter()
            .all(|&v| self.order.upper_covers(v).iter().filter(|&&w| self.order.leq(w, hi)).count() <= 1)
    }

    /// Each localization at the support is a chain.
    pub fn is_arithmetic(&self, lo: usize, hi: usize) -> Result<bool, ExtensionError> {
        for m in self.msupp(lo, hi) {
            let s = self.split_node(lo, hi, &[m])?;
            if !self.is_chained(lo, s) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Each localization at the support is a minimal extension.
    pub fn is_locally_minimal(&self, lo: usize, hi: usize) -> Result<bool, ExtensionError> {
        for m in self.msupp(lo, hi) {
            let s = self.split_node(lo, hi, &[m])?;
            if !self.order.is_cover(lo, s) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `T + U` is a ring for all `T, U ∈ [lo, hi]`; returns a violating pair.
    pub fn delta_violation(&self, lo: usize, hi: usize) -> Option<(usize, usize)> {
        let nodes = self.order.interval_nodes(lo, hi);
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                if self.order.comparable(a, b) {
                    continue;
                }
                let mut seeds = self.nodes[a].span.clone();
                seeds.extend_from_slice(&self.nodes[b].span);
                let sum = self.ring.additive_closure(&seeds);
                if self.find(&sum).is_none() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_simple(&self, lo: usize, hi: usize) -> bool {
        let ring = &*self.ring;
        let (l, h) = (&self.nodes[lo], &self.nodes[hi]);
        if l.len() == h.len() {
            return true;
        }
        let mut seeds = l.span.clone();
        seeds.push(0);
        h.members.iter().filter(|&s| !l.contains(s)).any(|s| {
            *seeds.last_mut().expect("nonempty") = s;
            ring.closure(&seeds, &seeds, true).len() == h.len()
        })
    }

    /// All predicate flags for `nodes[lo] ⊆ nodes[hi]`.
    pub fn flags(&self, lo: usize, hi: usize) -> Result<PredicateReport, ExtensionError> {
        if lo == hi {
            return Ok(PredicateReport::Trivial);
        }
        let ring = &*self.ring;
        let (l, h) = (&self.nodes[lo], &self.nodes[hi]);
        let infra_integral = is_infra_integral(ring, l, h);
        let i_extension = is_i_extension(ring, l, h);
        Ok(PredicateReport::Proper(PropertyFlags {
            subintegral: infra_integral && i_extension,
            seminormal: seminormal_violation(ring, l, h).is_none(),
            infra_integral,
            t_closed: t_closed_violation(ring, l, h).is_none(),
            u_closed: u_closed_violation(ring, l, h).is_none(),
            i_extension,
            simple: self.is_simple(lo, hi),
            chained: self.is_chained(lo, hi),
            branched: l.is_local() && h.locals.len() > 1,
            arithmetic: self.is_arithmetic(lo, hi)?,
            locally_minimal: self.is_locally_minimal(lo, hi)?,
            delta: self.delta_violation(lo, hi).is_none(),
        }))
    }

    fn extremum(
        &self,
        cands: &[usize],
        greatest: bool,
        what: &str,
    ) -> Result<usize, ExtensionError> {
        let pick = if greatest { cands.iter().max() } else { cands.iter().min() };
        let &p = pick.ok_or_else(|| ExtensionError::InvariantViolation(alloc::format!("no candidate for the {what}")))?;
        let ok = cands.iter().all(|&c| if greatest { self.order.leq(c, p) } else { self.order.leq(p, c) });
        if ok {
            Ok(p)
        } else {
            Err(ExtensionError::InvariantViolation(alloc::format!("the {what} is not unique")))
        }
    }

    /// Canonical decomposition of `nodes[lo] ⊆ nodes[hi]`, each extremum
    /// found by filtering the interval with the definitional predicate.
    pub fn decomposition(&self, lo: usize, hi: usize) -> Result<CanonicalDecomposition, ExtensionError> {
        let ring = &*self.ring;
        let nodes = self.order.interval_nodes(lo, hi);
        let l = &self.nodes[lo];
        let h = &self.nodes[hi];
        let sub: Vec<usize> = nodes.iter().copied().filter(|&v| is_subintegral(ring, l, &self.nodes[v])).collect();
        let plus = self.extremum(&sub, true, "seminormalization")?;
        let infra: Vec<usize> =
            nodes.iter().copied().filter(|&v| is_infra_integral(ring, l, &self.nodes[v])).collect();
        let t = self.extremum(&infra, true, "t-closure")?;
        let tc: Vec<usize> =
            nodes.iter().copied().filter(|&v| t_closed_violation(ring, &self.nodes[v], h).is_none()).collect();
        if self.extremum(&tc, false, "least t-closed subextension")? != t {
            return Err(ExtensionError::InvariantViolation(
                "the t-closure is not the least ring below which the extension is t-closed".into(),
            ));
        }
        let uc: Vec<usize> =
            nodes.iter().copied().filter(|&v| u_closed_violation(ring, &self.nodes[v], h).is_none()).collect();
        let u = self.extremum(&uc, false, "u-closure")?;
        let ic: Vec<usize> = nodes.iter().copied().filter(|&v| is_i_extension(ring, &self.nodes[v], h)).collect();
        if self.extremum(&ic, false, "least i-subextension")? != u {
            return Err(ExtensionError::InvariantViolation(
                "the u-closure is not the least ring below which the extension is an i-extension".into(),
            ));
        }
        let cs: Vec<usize> = nodes.iter().copied().filter(|&v| is_subintegral(ring, &self.nodes[v], h)).collect();
        let cosub = self.extremum(&cs, false, "co-subintegral closure").ok();
        if !self.order.leq(plus, t) || !self.order.leq(u, t) || self.order.join(u, plus) != t {
            return Err(ExtensionError::InvariantViolation(
                "the u-closure and the seminormalization do not generate the t-closure".into(),
            ));
        }
        if is_infra_integral(ring, l, h) && cosub != Some(u) {
            return Err(ExtensionError::InvariantViolation(
                "infra-integral extension whose u-closure is not the co-subintegral closure".into(),
            ));
        }
        Ok(CanonicalDecomposition { plus, t, u, cosub })
    }

    pub fn verify_meets_are_intersections(&self) -> Result<(), ExtensionError> {
        for a in 0..self.len() {
            for b in a..self.len() {
                let i = self.nodes[a].members.intersection(&self.nodes[b].members);
                if self.find(&i) != Some(self.order.meet(a, b)) {
                    return Err(ExtensionError::InvariantViolation("meet is not the intersection".into()));
                }
                let mut seeds = self.nodes[a].span.clone();
                seeds.extend_from_slice(&self.nodes[b].span);
                let j = self.ring.closure(&seeds, &seeds, true);
                if self.find(&j) != Some(self.order.join(a, b)) {
                    return Err(ExtensionError::InvariantViolation("join is not the generated subring".into()));
                }
            }
        }
        Ok(())
    }
}
