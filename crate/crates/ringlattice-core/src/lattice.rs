//! Finite lattices given by an order relation whose node indices form a
//! linear extension (`a ≤ b` implies `a` has the smaller index).
//!
//! That indexing convention makes meets and joins cheap: the meet of `a` and
//! `b` is the common lower bound with the largest index, the join the common
//! upper bound with the smallest.

use alloc::vec;
use alloc::vec::Vec;

/// Meet and join tables are materialized up to this many nodes.
const TABLE_LIMIT: usize = 1024;
/// Axiom verification is exhaustive up to this many nodes.
pub const EXHAUSTIVE_AXIOM_NODES: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("empty order")]
    Empty,
    #[error("node order is not a linear extension: {0} ≤ {1} but {0} > {1}")]
    NotLinearExtension(usize, usize),
    #[error("relation is not a partial order at nodes {0}, {1}")]
    NotPartialOrder(usize, usize),
    #[error("nodes {0} and {1} have no {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("node {0} is not below node {1}")]
    NotComparable(usize, usize),
    #[error("distributivity procedures disagree (law scan {law}, forbidden sublattice {forbidden}, covering criterion {covering})")]
    Disagreement { law: bool, forbidden: bool, covering: bool },
    #[error("lattice axiom {0} fails at {1:?}")]
    Axiom(&'static str, [usize; 3]),
    #[error("chain is not totally ordered at nodes {0}, {1}")]
    ChainNotTotal(usize, usize),
}

/// Certificate that a lattice is not distributive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeWitness {
    /// `[bottom, a, b, c, top]` with `a, b, c` pairwise incomparable.
    Diamond([usize; 5]),
    /// `[bottom, a, c, b, top]` with `a < c` and `b` incomparable to both.
    Pentagon([usize; 5]),
    /// `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`.
    LawFailure([usize; 3]),
}

impl LatticeWitness {
    pub fn kind(&self) -> &'static str {
        match self {
            LatticeWitness::Diamond(_) => "M3",
            LatticeWitness::Pentagon(_) => "N5",
            LatticeWitness::LawFailure(_) => "law",
        }
    }

    pub fn nodes(&self) -> Vec<usize> {
        match self {
            LatticeWitness::Diamond(n) | LatticeWitness::Pentagon(n) => n.to_vec(),
            LatticeWitness::LawFailure(n) => n.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVerdict {
    pub distributive: bool,
    pub modular: bool,
    pub boolean_lattice: bool,
    pub catenarian: bool,
    pub chained: bool,
    pub length: usize,
    pub size: usize,
    pub is_b2: bool,
    pub witness: Option<LatticeWitness>,
}

#[derive(Clone, Debug)]
pub struct FiniteLattice {
    n: usize,
    words: usize,
    /// Row `a`: bit `b` set iff `a ≤ b`.
    up: Vec<u64>,
    /// Row `b`: bit `a` set iff `a ≤ b`.
    down: Vec<u64>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
    meet_tab: Option<Vec<u32>>,
    join_tab: Option<Vec<u32>>,
}

/// An interval of a larger lattice, re-indexed.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub lattice: FiniteLattice,
    /// `nodes[i]` is the original index of new node `i`.
    pub nodes: Vec<usize>,
}

fn bit(row: &[u64], i: usize) -> bool {
    (row[i >> 6] >> (i & 63)) & 1 == 1
}

fn highest_bit(row: &[u64]) -> Option<usize> {
    row.iter().enumerate().rev().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

impl FiniteLattice {
    /// Builds a lattice from `leq`, which must be a partial order for which
    /// the index order is a linear extension, with bottom `0` and top `n-1`.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let words = n.div_ceil(64);
        let mut up = vec![0u64; n * words];
        let mut down = vec![0u64; n * words];
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    if a > b {
                        return Err(if leq(b, a) {
                            LatticeError::NotPartialOrder(a, b)
                        } else {
                            LatticeError::NotLinearExtension(a, b)
                        });
                    }
                    up[a * words + (b >> 6)] |= 1 << (b & 63);
                    down[b * words + (a >> 6)] |= 1 << (a & 63);
                } else if a == b {
                    return Err(LatticeError::NotPartialOrder(a, a));
                }
            }
        }
        let mut lat = FiniteLattice {
            n,
            words,
            up,
            down,
            upper_covers: vec![Vec::new(); n],
            lower_covers: vec![Vec::new(); n],
            meet_tab: None,
            join_tab: None,
        };
        // Transitivity: the up-set of every element of up(a) lies in up(a).
        for a in 0..n {
            for b in lat.up_set(a) {
                let (ra, rb) = (lat.up_row(a), lat.up_row(b));
                if ra.iter().zip(rb).any(|(x, y)| y & !x != 0) {
                    return Err(LatticeError::NotPartialOrder(a, b));
                }
            }
        }
        for a in 0..n {
            if !lat.leq(0, a) || !lat.leq(a, n - 1) {
                return Err(LatticeError::NotALattice(0, a, "bounds"));
            }
        }
        for a in 0..n {
            for b in lat.up_set(a) {
                if a != b && lat.between_count(a, b) == 2 {
                    lat.upper_covers[a].push(b);
                    lat.lower_covers[b].push(a);
                }
            }
        }
        // Meets and joins exist iff the extremal common bound dominates all.
        let tables = n <= TABLE_LIMIT;
        let mut meet = if tables { vec![0u32; n * n] } else { Vec::new() };
        let mut join = if tables { vec![0u32; n * n] } else { Vec::new() };
        let mut common = vec![0u64; words];
        for a in 0..n {
            for b in a..n {
                for w in 0..words {
                    common[w] = lat.down[a * words + w] & lat.down[b * words + w];
                }
                let m = highest_bit(&common).expect("bottom is common");
                if common.iter().zip(lat.down_row(m)).any(|(c, d)| c & !d != 0) {
                    return Err(LatticeError::NotALattice(a, b, "meet"));
                }
                for w in 0..words {
                    common[w] = lat.up[a * words + w] & lat.up[b * words + w];
                }
                let j = lowest_bit(&common).expect("top is common");
                if common.iter().zip(lat.up_row(j)).any(|(c, u)| c & !u != 0) {
                    return Err(LatticeError::NotALattice(a, b, "join"));
                }
                if tables {
                    meet[a * n + b] = m as u32;
                    meet[b * n + a] = m as u32;
                    join[a * n + b] = j as u32;
                    join[b * n + a] = j as u32;
                }
            }
        }
        if tables {
            lat.meet_tab = Some(meet);
            lat.join_tab = Some(join);
        }
        Ok(lat)
    }

    /// The divisor lattice of `n`, nodes ordered by (value) which is a linear
    /// extension of divisibility. Returns the lattice and the divisors.
    pub fn divisors(n: u64) -> (FiniteLattice, Vec<u64>) {
        let ds: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        let lat = FiniteLattice::from_order(ds.len(), |a, b| ds[b].is_multiple_of(ds[a])).expect("divisibility is a lattice");
        (lat, ds)
    }

    /// A chain with `n` elements.
    pub fn chain(n: usize) -> FiniteLattice {
        FiniteLattice::from_order(n, |a, b| a <= b).expect("chains are lattices")
    }

    fn up_row(&self, a: usize) -> &[u64] {
        &self.up[a * self.words..(a + 1) * self.words]
    }

    fn down_row(&self, a: usize) -> &[u64] {
        &self.down[a * self.words..(a + 1) * self.words]
    }

    fn between_count(&self, a: usize, b: usize) -> usize {
        self.up_row(a).iter().zip(self.down_row(b)).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.n - 1
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        bit(self.up_row(a), b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (a..self.n).filter(|&b| self.leq(a, b)).collect()
    }

    pub fn down_set(&self, b: usize) -> Vec<usize> {
        (0..=b).filter(|&a| self.leq(a, b)).collect()
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper_covers[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower_covers[a]
    }

    pub fn atoms(&self) -> &[usize] {
        &self.upper_covers[0]
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b) && self.between_count(a, b) == 2
    }

    /// All Hasse edges `(a, b)` with `a ⋖ b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| self.upper_covers[a].iter().map(move |&b| (a, b))).collect()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        match &self.meet_tab {
            Some(t) => t[a * self.n + b] as usize,
            None => {
                let common: Vec<u64> =
                    self.down_row(a).iter().zip(self.down_row(b)).map(|(x, y)| x & y).collect();
                highest_bit(&common).expect("bottom is common")
            }
        }
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        match &self.join_tab {
            Some(t) => t[a * self.n + b] as usize,
            None => {
                let common: Vec<u64> = self.up_row(a).iter().zip(self.up_row(b)).map(|(x, y)| x & y).collect();
                lowest_bit(&common).expect("top is common")
            }
        }
    }

    pub fn join_all(&self, nodes: &[usize]) -> usize {
        nodes.iter().fold(self.bottom(), |acc, &x| self.join(acc, x))
    }

    /// Nodes `x` with `a ≤ x ≤ b`, ascending.
    pub fn interval_nodes(&self, a: usize, b: usize) -> Vec<usize> {
        if !self.leq(a, b) {
            return Vec::new();
        }
        (a..=b).filter(|&x| self.leq(a, x) && self.leq(x, b)).collect()
    }

    pub fn interval_size(&self, a: usize, b: usize) -> usize {
        if self.leq(a, b) {
            self.between_count(a, b)
        } else {
            0
        }
    }

    pub fn interval(&self, a: usize, b: usize) -> Result<Sublattice, LatticeError> {
        if !self.leq(a, b) {
            return Err(LatticeError::NotComparable(a, b));
        }
        let nodes = self.interval_nodes(a, b);
        let lattice = FiniteLattice::from_order(nodes.len(), |i, j| self.leq(nodes[i], nodes[j]))?;
        Ok(Sublattice { lattice, nodes })
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|a| self.upper_covers[a].len() <= 1)
    }

    /// A triple violating `x∧(y∨z) = (x∧y)∨(x∧z)`, if any.
    pub fn law_scan(&self) -> Option<[usize; 3]> {
        for x in 0..self.n {
            for y in 0..self.n {
                let xy = self.meet(x, y);
                for z in y + 1..self.n {
                    if self.meet(x, self.join(y, z)) != self.join(xy, self.meet(x, z)) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    /// A triple violating the modular law `x ≤ z ⇒ x∨(y∧z) = (x∨y)∧z`.
    pub fn modular_scan(&self) -> Option<[usize; 3]> {
        for x in 0..self.n {
            for z in self.up_set(x) {
                for y in 0..self.n {
                    if self.join(x, self.meet(y, z)) != self.meet(self.join(x, y), z) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    /// A diamond sublattice, searched among pairwise incomparable triples.
    pub fn find_diamond(&self) -> Option<[usize; 5]> {
        let n = self.n;
        for a in 1..n {
            for b in a + 1..n {
                if self.comparable(a, b) {
                    continue;
                }
                let (m, j) = (self.meet(a, b), self.join(a, b));
                for c in b + 1..n {
                    if !self.comparable(a, c)
                        && !self.comparable(b, c)
                        && self.meet(a, c) == m
                        && self.meet(b, c) == m
                        && self.join(a, c) == j
                        && self.join(b, c) == j
                    {
                        return Some([m, a, b, c, j]);
                    }
                }
            }
        }
        None
    }

    /// A pentagon sublattice: `a < c`, `b` with `a∨b = c∨b` and `a∧b = c∧b`.
    pub fn find_pentagon(&self) -> Option<[usize; 5]> {
        for a in 0..self.n {
            for c in self.up_set(a) {
                if c == a {
                    continue;
                }
                for b in 0..self.n {
                    if self.comparable(a, b) || self.comparable(c, b) {
                        continue;
                    }
                    if self.join(a, b) == self.join(c, b) && self.meet(a, b) == self.meet(c, b) {
                        return Some([self.meet(a, b), a, c, b, self.join(a, b)]);
                    }
                }
            }
        }
        None
    }

    /// Diamond first, then pentagon.
    pub fn forbidden_sublattice(&self) -> Option<LatticeWitness> {
        self.find_diamond()
            .map(LatticeWitness::Diamond)
            .or_else(|| self.find_pentagon().map(LatticeWitness::Pentagon))
    }

    /// Covering-pair criterion: whenever `T∧U` is covered by both `T` and
    /// `U`, or both are covered by `T∨U`, the interval `[T∧U, T∨U]` has
    /// exactly four elements. Returns a violating pair.
    pub fn covering_criterion(&self) -> Option<(usize, usize)> {
        for t in 0..self.n {
            for u in t + 1..self.n {
                if self.comparable(t, u) {
                    continue;
                }
                let (m, j) = (self.meet(t, u), self.join(t, u));
                let below = self.is_cover(m, t) && self.is_cover(m, u);
                let above = self.is_cover(t, j) && self.is_cover(u, j);
                if (below || above) && self.interval_size(m, j) != 4 {
                    return Some((t, u));
                }
            }
        }
        None
    }

    /// Runs the three distributivity procedures and insists they agree.
    /// Returns the verdict with a forbidden-sublattice witness when false.
    pub fn check_distributive(&self) -> Result<(bool, Option<LatticeWitness>), LatticeError> {
        let law = self.law_scan();
        let forbidden = self.forbidden_sublattice();
        let covering = self.covering_criterion();
        let (l, f, c) = (law.is_none(), forbidden.is_none(), covering.is_none());
        if l != f || l != c {
            return Err(LatticeError::Disagreement { law: l, forbidden: f, covering: c });
        }
        Ok((l, forbidden.or(law.map(LatticeWitness::LawFailure))))
    }

    /// Shortest and longest maximal-chain lengths from `a` to every node.
    fn chain_lengths_from(&self, a: usize) -> (Vec<usize>, Vec<usize>) {
        let mut lo = vec![usize::MAX; self.n];
        let mut hi = vec![0usize; self.n];
        lo[a] = 0;
        for b in a + 1..self.n {
            if !self.leq(a, b) {
                continue;
            }
            for &c in &self.lower_covers[b] {
                if self.leq(a, c) {
                    lo[b] = lo[b].min(lo[c] + 1);
                    hi[b] = hi[b].max(hi[c] + 1);
                }
            }
        }
        (lo, hi)
    }

    /// Longest chain length of `[a, b]`.
    pub fn length_between(&self, a: usize, b: usize) -> usize {
        self.chain_lengths_from(a).1[b]
    }

    /// Length of the whole lattice (longest path in the Hasse diagram).
    pub fn length(&self) -> usize {
        self.length_between(0, self.top())
    }

    /// Whether all maximal chains between comparable pairs have equal length,
    /// with a violating pair when not.
    pub fn catenarian(&self) -> (bool, Option<(usize, usize)>) {
        for a in 0..self.n {
            let (lo, hi) = self.chain_lengths_from(a);
            for b in a..self.n {
                if self.leq(a, b) && lo[b] != hi[b] {
                    return (false, Some((a, b)));
                }
            }
        }
        (true, None)
    }

    pub fn complements(&self, t: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| self.meet(t, v) == self.bottom() && self.join(t, v) == self.top())
            .collect()
    }

    /// Distributive and complemented.
    pub fn is_boolean(&self) -> Result<bool, LatticeError> {
        Ok(self.check_distributive()?.0 && (0..self.n).all(|t| !self.complements(t).is_empty()))
    }

    pub fn is_b2(&self) -> bool {
        self.n == 4 && self.length() == 2
    }

    /// `S₀ = bottom`, `S_{i+1}` = join of the atoms of `[S_i, top]`.
    pub fn loewy_series(&self) -> Vec<usize> {
        let mut series = vec![self.bottom()];
        let mut cur = self.bottom();
        while cur != self.top() {
            cur = self.join_all(&self.upper_covers[cur].clone());
            series.push(cur);
        }
        series
    }

    /// Every length-2 interval has at most four elements; returns a violation.
    pub fn length2_violation(&self) -> Option<(usize, usize)> {
        for a in 0..self.n {
            let (_, hi) = self.chain_lengths_from(a);
            for b in a..self.n {
                if self.leq(a, b) && hi[b] == 2 && self.interval_size(a, b) > 4 {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Every node is comparable to every member of `chain`.
    pub fn is_pinched_at(&self, chain: &[usize]) -> Result<bool, LatticeError> {
        for (i, &a) in chain.iter().enumerate() {
            for &b in &chain[i + 1..] {
                if !self.comparable(a, b) {
                    return Err(LatticeError::ChainNotTotal(a, b));
                }
            }
        }
        Ok(chain.iter().all(|&c| (0..self.n).all(|x| self.comparable(x, c))))
    }

    /// Nodes comparable to everything, ascending. They always form a chain.
    pub fn pinch_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&c| (0..self.n).all(|x| self.comparable(x, c))).collect()
    }

    pub fn verdict(&self) -> Result<LatticeVerdict, LatticeError> {
        let (distributive, witness) = self.check_distributive()?;
        let modular = self.modular_scan().is_none();
        if modular == self.find_pentagon().is_some() {
            return Err(LatticeError::Disagreement { law: modular, forbidden: !modular, covering: modular });
        }
        let (catenarian, _) = self.catenarian();
        let boolean_lattice = distributive && (0..self.n).all(|t| !self.complements(t).is_empty());
        Ok(LatticeVerdict {
            distributive,
            modular,
            boolean_lattice,
            catenarian,
            chained: self.is_chain(),
            length: self.length(),
            size: self.n,
            is_b2: self.is_b2(),
            witness,
        })
    }

    /// Absorption, idempotence, commutativity and associativity of meet and
    /// join, and agreement with the order. Exhaustive up to
    /// [`EXHAUSTIVE_AXIOM_NODES`]; above that, a fixed pseudo-random sample.
    pub fn verify_axioms(&self) -> Result<(), LatticeError> {
        let n = self.n;
        let check = |a: usize, b: usize, c: usize| -> Result<(), LatticeError> {
            let (m, j) = (self.meet(a, b), self.join(a, b));
            if self.meet(a, j) != a || self.join(a, m) != a {
                return Err(LatticeError::Axiom("absorption", [a, b, c]));
            }
            if m != self.meet(b, a) || j != self.join(b, a) {
                return Err(LatticeError::Axiom("commutativity", [a, b, c]));
            }
            if self.leq(a, b) != (m == a) || self.leq(a, b) != (j == b) {
                return Err(LatticeError::Axiom("order agreement", [a, b, c]));
            }
            if self.meet(m, c) != self.meet(a, self.meet(b, c)) || self.join(j, c) != self.join(a, self.join(b, c)) {
                return Err(LatticeError::Axiom("associativity", [a, b, c]));
            }
            Ok(())
        };
        for a in 0..n {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return Err(LatticeError::Axiom("idempotence", [a, a, a]));
            }
        }
        if n <= EXHAUSTIVE_AXIOM_NODES {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut state: u64 = 0xD15717B;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % n as u64) as usize
            };
            for _ in 0..1_000_000 {
                let (a, b, c) = (next(), next(), next());
                check(a, b, c)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> FiniteLattice {
        FiniteLattice::from_order(5, |a, b| a == b || a == 0 || b == 4).unwrap()
    }

    fn n5() -> FiniteLattice {
        // 0 < 1 < 2 < 4, 0 < 3 < 4
        let rel = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (2, 4), (1, 4), (0, 4)];
        FiniteLattice::from_order(5, |a, b| a == b || rel.contains(&(a, b))).unwrap()
    }

    #[test]
    fn diamond_and_pentagon_are_not_distributive() {
        let (d, w) = m3().check_distributive().unwrap();
        assert!(!d);
        assert_eq!(w, Some(LatticeWitness::Diamond([0, 1, 2, 3, 4])));
        let (d, w) = n5().check_distributive().unwrap();
        assert!(!d);
        assert!(matches!(w, Some(LatticeWitness::Pentagon(_))));
        assert!(!n5().catenarian().0);
        assert!(m3().catenarian().0);
        assert!(m3().modular_scan().is_none());
        assert!(n5().modular_scan().is_some());
    }

    #[test]
    fn divisor_lattices() {
        let (l, ds) = FiniteLattice::divisors(12);
        assert_eq!(ds, [1, 2, 3, 4, 6, 12]);
        let v = l.verdict().unwrap();
        assert!(v.distributive && !v.boolean_lattice && v.catenarian);
        assert_eq!(v.length, 3);
        let (l, _) = FiniteLattice::divisors(30);
        assert!(l.is_boolean().unwrap());
        assert_eq!(l.loewy_series(), [0, l.top()]);
        l.verify_axioms().unwrap();
    }

    #[test]
    fn non_lattice_rejected() {
        // two incomparable maximal elements below a top, two minimal: bowtie
        let rel = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)];
        let leq = |a: usize, b: usize| {
            a == b || rel.contains(&(a, b)) || (a == 0) || (b == 5)
        };
        assert!(matches!(FiniteLattice::from_order(6, leq), Err(LatticeError::NotALattice(..))));
    }

    #[test]
    fn chain_is_pinched_everywhere() {
        let c = FiniteLattice::chain(4);
        assert!(c.is_pinched_at(&[1, 2]).unwrap());
        assert_eq!(c.loewy_series(), [0, 1, 2, 3]);
        assert!(!m3().is_pinched_at(&[1]).unwrap());
        assert!(m3().is_pinched_at(&[1, 2]).is_err());
    }
}
