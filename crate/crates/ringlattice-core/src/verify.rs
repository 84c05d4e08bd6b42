//! Named consistency checks over an analysed extension.
//!
//! Every check computes the two sides of a structural statement by
//! independent routes (element scans, lattice searches, separate enumeration
//! of localized or transformed extensions) and compares them. Checks with
//! hypotheses report `NotApplicable` when those fail, so coverage stays
//! visible.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::ElemSet;
use crate::extension::{
    conductor_of, contraction, is_i_extension, is_infra_integral, is_subintegral, scaled_set, seminormal_violation,
    t_closed_violation, CanonicalDecomposition, Extension, ExtensionError, ExtensionLattice, MinimalType,
    PredicateReport, PropertyFlags, Subring,
};
use crate::finring::{Elem, FiniteRing, Ideal, RingError};
use crate::lattice::{FiniteLattice, LatticeVerdict};

/// Pairs of nodes examined by the pairwise checks: all comparable pairs up
/// to this many nodes, otherwise pairs touching the bottom or the top plus
/// every Hasse edge.
pub const ALL_PAIRS_LIMIT: usize = 48;
/// Submodule lattices larger than this are not enumerated.
pub const MODULE_NODE_LIMIT: usize = 256;
/// Upper bound on the number of shared ideals tried by the quotient checks.
const SHARED_IDEAL_SAMPLES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        }
    }
}

/// Counterexample: lattice nodes of the analysed instance (unless `note`
/// says otherwise) plus a description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub nodes: Vec<usize>,
    pub note: String,
}

impl Witness {
    pub fn new(nodes: Vec<usize>, note: impl Into<String>) -> Witness {
        Witness { nodes, note: note.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    /// Pass: what was compared. Fail: what went wrong. Not applicable: the
    /// unmet hypothesis.
    pub detail: String,
    pub witness: Option<Witness>,
    /// For equivalences, the truth value of the left-hand side on this
    /// instance.
    pub lhs: Option<bool>,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Outcome {
        Outcome { status: Status::Pass, detail: detail.into(), witness: None, lhs: None }
    }

    pub fn fail(detail: impl Into<String>, witness: Witness) -> Outcome {
        Outcome { status: Status::Fail, detail: detail.into(), witness: Some(witness), lhs: None }
    }

    pub fn not_applicable(reason: impl Into<String>) -> Outcome {
        Outcome { status: Status::NotApplicable, detail: reason.into(), witness: None, lhs: None }
    }

    pub fn with_lhs(mut self, lhs: bool) -> Outcome {
        self.lhs = Some(lhs);
        self
    }

    fn iff(lhs: bool, rhs: bool, lhs_name: &str, rhs_name: &str, witness: impl FnOnce() -> Vec<usize>) -> Outcome {
        if lhs == rhs {
            Outcome::pass(format!("{lhs_name}={lhs}, {rhs_name}={rhs}")).with_lhs(lhs)
        } else {
            Outcome::fail(
                format!("{lhs_name}={lhs} but {rhs_name}={rhs}"),
                Witness::new(witness(), format!("{lhs_name} and {rhs_name} disagree")),
            )
            .with_lhs(lhs)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

/// Drops nodes one at a time while `still_fails` keeps holding.
pub fn minimize_witness(mut nodes: Vec<usize>, still_fails: impl Fn(&[usize]) -> bool) -> Vec<usize> {
    let mut i = 0;
    while i < nodes.len() {
        let mut trial = nodes.clone();
        trial.remove(i);
        if !trial.is_empty() && still_fails(&trial) {
            nodes = trial;
        } else {
            i += 1;
        }
    }
    nodes
}

/// Everything the checks share about one extension.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub extension: Extension,
    pub lattice: ExtensionLattice,
    pub verdict: LatticeVerdict,
    pub edges: BTreeMap<(usize, usize), MinimalType>,
    pub decomposition: CanonicalDecomposition,
    pub flags: PredicateReport,
    pub loewy: Vec<usize>,
    /// Indices into the base ring's local factors.
    pub msupp: Vec<usize>,
    pub node_limit: usize,
}

/// One localization `R_M ⊆ S_M`, enumerated on its own.
#[derive(Debug, Clone)]
pub struct LocalPiece {
    /// Index of `M` among the base ring's local factors.
    pub maximal: usize,
    pub lattice: ExtensionLattice,
}

struct Piece<'a> {
    label: String,
    lattice: Cow<'a, ExtensionLattice>,
}

impl Analysis {
    pub fn new(extension: Extension, node_limit: usize) -> Result<Analysis, ExtensionError> {
        let lattice = extension.enumerate_interval(node_limit)?;
        let verdict = lattice.order.verdict()?;
        let edges = lattice.cover_types()?.into_iter().map(|(a, b, t)| ((a, b), t)).collect();
        let top = lattice.top();
        let decomposition = lattice.decomposition(0, top)?;
        let flags = lattice.flags(0, top)?;
        let loewy = lattice.order.loewy_series();
        let msupp = lattice.msupp(0, top);
        Ok(Analysis { extension, lattice, verdict, edges, decomposition, flags, loewy, msupp, node_limit })
    }

    pub fn ring(&self) -> &FiniteRing {
        self.lattice.ring()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn node(&self, i: usize) -> &Subring {
        &self.lattice.nodes[i]
    }

    pub fn order(&self) -> &FiniteLattice {
        &self.lattice.order
    }

    pub fn proper(&self) -> Option<&PropertyFlags> {
        self.flags.flags()
    }

    pub fn distributive(&self) -> bool {
        self.verdict.distributive
    }

    pub fn base_is_local(&self) -> bool {
        self.node(0).is_local()
    }

    /// Local base and more than one maximal ideal upstairs.
    pub fn branched(&self) -> bool {
        self.base_is_local() && self.node(self.top()).locals.len() > 1
    }

    pub fn max_count(&self, i: usize) -> usize {
        self.node(i).locals.len()
    }

    pub fn edge_type(&self, a: usize, b: usize) -> Option<MinimalType> {
        self.edges.get(&(a, b)).copied()
    }

    /// Distributivity of the interval `[lo, hi]` via its own lattice.
    pub fn distributive_between(&self, lo: usize, hi: usize) -> Result<bool, ExtensionError> {
        if lo == hi {
            return Ok(true);
        }
        Ok(self.order().interval(lo, hi)?.lattice.check_distributive()?.0)
    }

    pub fn chained(&self, lo: usize, hi: usize) -> bool {
        self.lattice.is_chained(lo, hi)
    }

    pub fn pinched(&self, lo: usize, hi: usize, chain: &[usize]) -> Result<bool, ExtensionError> {
        self.lattice.is_pinched_within(lo, hi, chain)
    }

    /// Fibers of `R ⊆ S` over every maximal ideal have at most two points.
    pub fn fibers_at_most_two(&self) -> bool {
        self.fiber_sizes().iter().all(|&n| n <= 2)
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        crate::extension::fibers_of(self.ring(), self.node(0), self.node(self.top())).iter().map(Vec::len).collect()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.lattice.len();
        let o = self.order();
        if n <= ALL_PAIRS_LIMIT {
            let mut out = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if o.leq(a, b) {
                        out.push((a, b));
                    }
                }
            }
            return out;
        }
        let mut set: BTreeSet<(usize, usize)> = o.covers().into_iter().collect();
        for v in 1..n {
            set.insert((0, v));
        }
        for v in 0..n - 1 {
            set.insert((v, n - 1));
        }
        set.into_iter().collect()
    }

    /// Maximal chain from `lo` to `hi`, taking the least (or greatest)
    /// index upper cover at each step.
    pub fn greedy_chain(&self, lo: usize, hi: usize, highest: bool) -> Vec<usize> {
        let o = self.order();
        let mut chain = vec![lo];
        let mut cur = lo;
        while cur != hi {
            let next = o.upper_covers(cur).iter().copied().filter(|&w| o.leq(w, hi));
            cur = if highest { next.max() } else { next.min() }.expect("a cover below hi exists");
            chain.push(cur);
        }
        chain
    }

    /// `R_M ⊆ S_M` for every `M` in the support, each enumerated on its own.
    pub fn localizations(&self) -> Result<Vec<LocalPiece>, ExtensionError> {
        let base = self.node(0);
        self.msupp
            .iter()
            .map(|&m| {
                let ideal = Ideal { members: base.locals[m].maximal.clone() };
                let lattice = self.extension.localize_at(&ideal)?.enumerate_interval(self.node_limit)?;
                Ok(LocalPiece { maximal: m, lattice })
            })
            .collect()
    }

    /// The instance itself when the base is local, its localizations otherwise.
    fn local_pieces(&self) -> Result<Vec<Piece<'_>>, ExtensionError> {
        if self.base_is_local() {
            return Ok(vec![Piece { label: String::new(), lattice: Cow::Borrowed(&self.lattice) }]);
        }
        Ok(self
            .localizations()?
            .into_iter()
            .map(|p| Piece { label: format!("localization at maximal ideal #{}: ", p.maximal), lattice: Cow::Owned(p.lattice) })
            .collect())
    }
}

fn lattice_distributive(l: &ExtensionLattice) -> Result<bool, ExtensionError> {
    Ok(l.order.check_distributive()?.0)
}

/// Enumerates `R ⊆ S` given by an ambient ring and a base set.
fn distributivity_of(ring: FiniteRing, base: ElemSet, limit: usize) -> Result<(bool, usize, usize), ExtensionError> {
    let ext = Extension::from_base_set(Arc::new(ring), base)?;
    let l = ext.enumerate_interval(limit)?;
    Ok((lattice_distributive(&l)?, l.len(), l.order.length()))
}

pub type CheckFn = fn(&Analysis) -> Result<Outcome, ExtensionError>;

/// A named check with a one-line statement of what it confirms.
pub struct Check {
    pub name: &'static str,
    pub statement: &'static str,
    /// Whether the check compares two sides of an equivalence.
    pub equivalence: bool,
    pub run: CheckFn,
}

impl core::fmt::Debug for Check {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Check").field("name", &self.name).finish()
    }
}

macro_rules! check {
    ($name:literal, $eq:expr, $statement:literal, $f:path) => {
        Check { name: $name, statement: $statement, equivalence: $eq, run: $f }
    };
}

static CHECKS: &[Check] = &[
    check!("arithmetic_or_locally_minimal_implies_distributive", false,
        "arithmetic extensions and locally minimal extensions are distributive", arithmetic_implies_distributive),
    check!("atoms_join_is_monogenic", false,
        "in a distributive extension the join of distinct atoms R[x_i] is R[sum x_i]", atoms_join_is_monogenic),
    check!("b2_characterization", true,
        "a length-2 extension is B2 iff its support has two points, or it is infra-integral crucial with a proper seminormalization and maximal conductor, or it is t-closed crucial with four residual subfields", b2_characterization),
    check!("branched_distributive_criterion", true,
        "a branched extension is distributive iff |Max(S)|=|Max(uR)|=2, both halves around tR are distributive, and it is pinched at tR or has the two-point support shape", branched_distributive_criterion),
    check!("branched_infra_integral_criterion", true,
        "a branched infra-integral extension with proper seminormalization is distributive iff [R,+R] is a chain, |Max(S)|=2 and T -> uR·T is an order isomorphism", branched_infra_integral_criterion),
    check!("branched_infra_integral_pinching", false,
        "a branched infra-integral extension with [R,+R] a chain and |Max(S)|=2 is pinched at uR∩+R and splits as [R,+R] ⊔ [uR,S]", branched_infra_integral_pinching),
    check!("branched_non_chained_structure", false,
        "a distributive branched infra-integral extension that is not chained splits as [R,+R] ⊔ uR·[R,+R] and its Loewy series follows that chain", branched_non_chained_structure),
    check!("branched_pinched_at_plus_implies_pinched_at_t", false,
        "a distributive branched extension whose [R,tR] is pinched at +R is pinched at tR", branched_pinched_at_plus),
    check!("branched_with_chained_t_closure", true,
        "a branched extension with +R, tR proper and [R,tR] a chain is distributive iff [tR,S] is distributive and it is pinched at tR", branched_with_chained_t_closure),
    check!("canonical_diamond_steps", false,
        "R ⊆ uR∩+R and uR ⊆ tR are subintegral, uR∩+R ⊆ uR is seminormal infra-integral, tR ⊆ S is t-closed and uR·+R = tR", canonical_diamond_steps),
    check!("cardinality_formula_local_u_closure", false,
        "distributive over a local base with one-point t-support and local uR: |[R,S]| = l[R,+R] + |[tR,S]|", cardinality_local_u),
    check!("cardinality_formula_one_point_support", false,
        "distributive over a local base, uR with two maximal ideals and one-point support of S: |[R,S]| = l[R,+R] + |[tR,S]| + l[uR,tR] + 1", cardinality_one_point),
    check!("cardinality_formula_two_point_support", false,
        "distributive over a local base, uR with two maximal ideals and two-point support of S: |[R,S]| = l[R,+R] + |[tR,S]| + l[uR,tR]·|[uR,V]| + 1", cardinality_two_point),
    check!("cardinality_formula_without_t_support", false,
        "distributive over a local base with uR = tR: |[R,S]| = l[R,+R] + |[tR,S]| + (0 if +R = tR else 1)", cardinality_no_support),
    check!("chain_types_match_closures", true,
        "along any maximal chain: subintegral iff all ramified, seminormal infra-integral iff all decomposed, infra-integral iff no inert step, t-closed iff all inert", chain_types_match_closures),
    check!("chained_implies_simple", false,
        "a chained extension is generated by one element", chained_implies_simple),
    check!("conductor_is_largest_common_ideal", false,
        "(R:S) is exactly the set of r whose S-ideal lies in R", conductor_is_largest_common_ideal),
    check!("distributive_delta_iff_top_arithmetic", true,
        "a distributive extension is a Δ-extension iff tR ⊆ S is arithmetic", distributive_delta_iff_top_arithmetic),
    check!("distributive_fibers_have_at_most_two_points", false,
        "in a distributive extension every fiber has at most two points", distributive_fibers),
    check!("distributive_implies_catenarian", false,
        "distributive lattices of finite length are catenarian", distributive_implies_catenarian),
    check!("distributive_infra_integral_is_delta", false,
        "a distributive infra-integral extension is a Δ-extension", distributive_infra_integral_is_delta),
    check!("distributive_local_infra_integral_atoms_have_distinct_types", false,
        "over a local base, distinct atoms of a distributive infra-integral extension have distinct types", atoms_have_distinct_types),
    check!("distributive_local_u_closure_bounds", false,
        "distributive over a local base: |Max(uR)| ≤ 2 and uR ⊆ tR has support of size ≤ 1", u_closure_bounds),
    check!("distributivity_procedures_agree", false,
        "law scan, M3/N5 search and the covering-pair criterion agree on the lattice and its intervals", distributivity_procedures_agree),
    check!("finite_field_subfields_form_divisor_lattice", false,
        "for fields F_q ⊆ F_{q^d} the lattice is the divisor lattice of d, distributive, Boolean iff d is squarefree", finite_field_galois),
    check!("fibers_two_imply_locally_minimal_steps", false,
        "with fibers of size ≤ 2, +R' ⊆ uR (seminormalization of R in uR) and +R ⊆ tR are locally minimal", fibers_two_locally_minimal),
    check!("i_extension_iff_seminormalization_is_t_closure", true,
        "an extension is an i-extension iff +R = tR", i_extension_iff_plus_is_t),
    check!("idealization_transfer", true,
        "R ⊆ S is distributive iff R(+)M ⊆ S(+)M is, for M a residue field of S", idealization_transfer),
    check!("isotopic_chain_iff_uniform_edge_types", true,
        "all minimal steps share one type iff some maximal chain has constant type", isotopic_chain),
    check!("lattice_axioms", false,
        "meets are intersections, joins are generated subrings, and the tables satisfy the lattice laws", lattice_axioms),
    check!("length_formula", false,
        "distributive over a local base: l[R,S] = l[R,+R] + l[tR,S] + |Max(S)| - 1", length_formula),
    check!("length_two_intervals_rule", true,
        "a catenarian extension is distributive iff every length-2 interval has at most four elements", length_two_intervals_rule),
    check!("local_product_formulas", false,
        "|[R,S]| and l[R,S] are the product and sum over the support of the localized intervals", local_product_formulas),
    check!("local_seminormal_delta_criterion", true,
        "a seminormal Δ-extension over a local base is distributive iff [R,S] = {R} ∪ [tR,S]", local_seminormal_delta),
    check!("localization_equivalence", true,
        "distributivity equals distributivity of every localization at the support and of R/I ⊆ S/I for shared ideals I", localization_equivalence),
    check!("minimal_classification_matches_search", false,
        "the conductor criterion for minimal types agrees with the definitional minimality search on every pair", minimal_classification),
    check!("module_lattice_chain_criterion", true,
        "the R-submodule lattice of S is distributive iff each localized submodule lattice is a chain", module_lattice_chain),
    check!("no_decomposed_pair_over_single_support", false,
        "with fibers of size ≤ 2 there is no T ⊂ U ⊂ V of two decomposed steps with one-point support", no_decomposed_pair),
    check!("non_pinched_branched_structure", false,
        "a distributive branched extension not pinched at tR has |Max(tR)|=2 and uR = V ∩ tR for the co-subintegral closure V of R ⊆ W'", non_pinched_branched_structure),
    check!("pinched_at_t_iff_single_support_over_u", true,
        "a distributive branched extension with uR ≠ tR is pinched at tR iff S has one-point support over uR", pinched_at_t_iff_single_support),
    check!("pinched_chain_distributivity", true,
        "an extension pinched at a chain is distributive iff each step of the chain is", pinched_chain_distributivity),
    check!("pinched_loewy_boolean_steps", true,
        "an extension pinched at its Loewy series is distributive iff each Loewy step is Boolean", pinched_loewy_boolean_steps),
    check!("product_transfer", true,
        "a product of extensions is distributive iff each factor is", product_transfer),
    check!("quotient_transfer", false,
        "if R ⊆ S is distributive so is R/(J∩R) ⊆ S/J for ideals J of S", quotient_transfer),
    check!("seminormal_branched_criterion", true,
        "a seminormal branched extension is distributive iff [tR,S] is distributive and [R,S] = {R} ∪ [tR,S]", seminormal_branched_criterion),
    check!("seminormal_infra_integral_distributive_iff_locally_minimal", true,
        "a seminormal infra-integral extension is distributive iff it is locally minimal", seminormal_infra_integral_criterion),
    check!("seminormal_infra_integral_small_fibers_are_locally_minimal_decomposed", false,
        "seminormal infra-integral with locally maximal conductor and fibers ≤ 2 implies distributive and locally minimal decomposed", locally_minimal_decomposed),
    check!("seminormalization_dual_characterization", false,
        "+R is also the least T with T ⊆ S seminormal", seminormalization_dual),
    check!("spir_quadratic_extensions_are_distributive", false,
        "R ⊆ R[t] with R a principal local ring and t quadratic is distributive", spir_quadratic),
    check!("split_t_closure_cosubintegral", false,
        "an i-extension with two-point support split at a proper tR has a co-subintegral closure C with R ⊆ C t-closed, distributive when [tR,S] is", split_t_closure),
    check!("splitters_and_complements", true,
        "every splitter exists, its unique complement is the complementary splitter, and R ⊆ S is distributive iff R ⊆ σ(X) and R ⊆ σ(X)° are", splitters_and_complements),
    check!("subintegral_distributive_iff_arithmetic", true,
        "a subintegral extension is distributive iff it is arithmetic", subintegral_criterion),
    check!("support_from_chain_contractions", false,
        "the support of S/R is the set of contractions of the crucial ideals along a maximal chain", support_from_chain),
    check!("distinct_atom_pairs", false,
        "two distinct minimal extensions of a node: distinct crucial ideals give a square, inert with non-inert is not catenarian, two non-inert give length 2 or 3 by the product of maximal ideals", distinct_atom_pairs),
    check!("t_closed_distributive_iff_residual_distributive", true,
        "a t-closed extension is distributive iff its residual field extensions are", t_closed_criterion),
    check!("u_closed_delta_arithmetic_equivalences", true,
        "for u-closed extensions: distributive Δ iff arithmetic Δ iff distributive arithmetic", u_closed_delta_equivalences),
    check!("u_closure_is_cosubintegral_closure_of_t", false,
        "uR is the co-subintegral closure of R ⊆ tR, and of R ⊆ S when infra-integral", u_closure_is_cosubintegral),
    check!("u_elementary_fibers", false,
        "a u-elementary extension has fibers of size at most two", u_elementary_fibers),
    check!("unbranched_distributive_criterion", true,
        "an i-extension is distributive iff R ⊆ tR is arithmetic, [tR,S] is distributive and every localization is pinched at its t-closure", unbranched_criterion),
    check!("unbranched_locally_minimal_top_implies_arithmetic", false,
        "a distributive i-extension with tR ⊆ S locally minimal is arithmetic", unbranched_locally_minimal_top),
];

pub fn checks() -> &'static [Check] {
    CHECKS
}

pub fn find_check(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

/// Runs one check. Internal errors (including disagreements detected while
/// computing a side) become failures.
pub fn run_check(name: &str, analysis: &Analysis) -> Result<Outcome, VerifyError> {
    let check = find_check(name).ok_or_else(|| VerifyError::UnknownCheck(name.to_string()))?;
    Ok(evaluate(check, analysis))
}

pub fn evaluate(check: &Check, analysis: &Analysis) -> Outcome {
    match (check.run)(analysis) {
        Ok(o) => o,
        Err(e) => Outcome::fail(format!("{e}"), Witness::new(Vec::new(), "computation failed")),
    }
}

fn na_trivial() -> Outcome {
    Outcome::not_applicable("R = S")
}

macro_rules! need {
    ($cond:expr, $reason:expr) => {
        if !$cond {
            return Ok(Outcome::not_applicable($reason));
        }
    };
}

fn need_proper(a: &Analysis) -> Option<PropertyFlags> {
    a.proper().copied()
}

// ---------------------------------------------------------------------------
// Minimal steps, chains and closures

fn chain_types_match_closures(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(top_flags) = need_proper(a) else { return Ok(na_trivial()) };
    let ring = a.ring();
    let mut checked = 0;
    for (lo, hi) in a.pairs() {
        let (l, h) = (a.node(lo), a.node(hi));
        let infra = is_infra_integral(ring, l, h);
        let iext = is_i_extension(ring, l, h);
        let sub = infra && iext;
        let semi = seminormal_violation(ring, l, h).is_none();
        let tc = t_closed_violation(ring, l, h).is_none();
        for highest in [false, true] {
            let chain = a.greedy_chain(lo, hi, highest);
            let types: Vec<MinimalType> =
                chain.windows(2).map(|w| a.edge_type(w[0], w[1]).expect("chain steps are edges")).collect();
            let all = |t: MinimalType| types.iter().all(|&x| x == t);
            let claims = [
                ("subintegral", sub, all(MinimalType::Ramified), "every step ramified"),
                ("seminormal infra-integral", semi && infra, all(MinimalType::Decomposed), "every step decomposed"),
                ("infra-integral", infra, !types.contains(&MinimalType::Inert), "no inert step"),
                ("t-closed", tc, all(MinimalType::Inert), "every step inert"),
            ];
            for (name, lhs, rhs, rhs_name) in claims {
                if lhs != rhs {
                    return Ok(Outcome::fail(
                        format!("[{lo},{hi}]: {name}={lhs} but {rhs_name}={rhs}"),
                        Witness::new(chain, "maximal chain"),
                    )
                    .with_lhs(top_flags.subintegral));
                }
            }
            if (all(MinimalType::Ramified) || all(MinimalType::Inert)) && !iext {
                return Ok(Outcome::fail(
                    format!("[{lo},{hi}]: isotopic ramified or inert chain but not an i-extension"),
                    Witness::new(chain, "maximal chain"),
                ));
            }
        }
        checked += 1;
    }
    Ok(Outcome::pass(format!("{checked} intervals, two maximal chains each")).with_lhs(top_flags.subintegral))
}

fn isotopic_chain(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let kinds: BTreeSet<MinimalType> = a.edges.values().copied().collect();
    let uniform = kinds.len() == 1;
    let o = a.order();
    let mut isotopic = false;
    for t in [MinimalType::Inert, MinimalType::Decomposed, MinimalType::Ramified] {
        let mut reach = vec![false; a.lattice.len()];
        reach[0] = true;
        for v in 1..a.lattice.len() {
            reach[v] = o.lower_covers(v).iter().any(|&u| reach[u] && a.edge_type(u, v) == Some(t));
        }
        isotopic |= reach[a.top()];
    }
    Ok(Outcome::iff(uniform, isotopic, "uniform_edge_types", "isotopic_maximal_chain", || vec![0, a.top()]))
}

fn i_extension_iff_plus_is_t(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    let d = a.decomposition;
    Ok(Outcome::iff(f.i_extension, d.plus == d.t, "i_extension", "seminormalization_equals_t_closure", || vec![d.plus, d.t]))
}

fn support_from_chain(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let ring = a.ring();
    let base = a.node(0);
    for highest in [false, true] {
        let chain = a.greedy_chain(0, a.top(), highest);
        let mut contracted = BTreeSet::new();
        for w in chain.windows(2) {
            let c = conductor_of(ring, a.node(w[0]), a.node(w[1]));
            let meet = c.intersection(&base.members);
            let idx = base.locals.iter().position(|l| l.maximal == meet);
            match idx {
                Some(i) => {
                    contracted.insert(i);
                }
                None => {
                    return Ok(Outcome::fail(
                        "a crucial ideal contracts to a non-maximal ideal",
                        Witness::new(vec![w[0], w[1]], "minimal step"),
                    ))
                }
            }
        }
        let supp: BTreeSet<usize> = a.msupp.iter().copied().collect();
        if supp != contracted {
            return Ok(Outcome::fail(
                format!("support {:?} but chain contractions {:?}", supp, contracted),
                Witness::new(chain, "maximal chain"),
            ));
        }
    }
    Ok(Outcome::pass(format!("support of size {}", a.msupp.len())))
}

fn conductor_is_largest_common_ideal(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let ring = a.ring();
    let (base, top) = (a.node(0), a.node(a.top()));
    let conductor = conductor_of(ring, base, top);
    if !ring.is_ideal(&conductor) {
        return Ok(Outcome::fail("the conductor is not an ideal of S", Witness::new(vec![0], "conductor")));
    }
    let all: Vec<Elem> = ring.additive_generators();
    for r in base.members.iter() {
        let ideal = ring.closure(&[r], &all, false);
        if ideal.is_subset(&base.members) != conductor.contains(r) {
            return Ok(Outcome::fail(
                format!("element {r}: generated S-ideal inside R is {}", ideal.is_subset(&base.members)),
                Witness::new(vec![0], format!("element {r}")),
            ));
        }
    }
    Ok(Outcome::pass(format!("conductor has {} elements", conductor.len())))
}

fn minimal_classification(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let ring = a.ring();
    let mut n = 0;
    for (lo, hi) in a.pairs() {
        let t = match crate::extension::classify_minimal_pair(ring, a.node(lo), a.node(hi)) {
            Ok(t) => t,
            Err(e) => return Ok(Outcome::fail(format!("{e}"), Witness::new(vec![lo, hi], "pair"))),
        };
        let cover = a.lattice.is_cover(lo, hi);
        if t.is_some() != cover {
            return Ok(Outcome::fail(
                format!("classified minimal={} but Hasse edge={cover}", t.is_some()),
                Witness::new(vec![lo, hi], "pair"),
            ));
        }
        n += 1;
    }
    Ok(Outcome::pass(format!("{n} pairs")))
}

fn canonical_diamond_steps(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let ring = a.ring();
    let d = a.decomposition;
    let o = a.order();
    let m = o.meet(d.u, d.plus);
    let n = |i| a.node(i);
    let steps = [
        ("R ⊆ uR∩+R subintegral", is_subintegral(ring, n(0), n(m)), vec![0, m]),
        (
            "uR∩+R ⊆ uR seminormal infra-integral",
            seminormal_violation(ring, n(m), n(d.u)).is_none() && is_infra_integral(ring, n(m), n(d.u)),
            vec![m, d.u],
        ),
        ("uR ⊆ tR subintegral", is_subintegral(ring, n(d.u), n(d.t)), vec![d.u, d.t]),
        ("tR ⊆ S t-closed", t_closed_violation(ring, n(d.t), n(a.top())).is_none(), vec![d.t, a.top()]),
        ("uR·+R = tR", o.join(d.u, d.plus) == d.t, vec![d.u, d.plus, d.t]),
    ];
    for (what, ok, nodes) in steps {
        if !ok {
            return Ok(Outcome::fail(format!("{what} fails"), Witness::new(nodes, what)));
        }
    }
    Ok(Outcome::pass(format!("uR∩+R = node {m}")))
}

fn u_closure_is_cosubintegral(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    let d = a.decomposition;
    let lower = a.lattice.decomposition(0, d.t)?;
    if lower.cosub != Some(d.u) {
        return Ok(Outcome::fail(
            format!("co-subintegral closure of R ⊆ tR is {:?}, uR is {}", lower.cosub, d.u),
            Witness::new(vec![d.u, d.t], "uR and tR"),
        ));
    }
    if f.infra_integral && d.cosub != Some(d.u) {
        return Ok(Outcome::fail(
            format!("infra-integral but co-subintegral closure {:?} differs from uR {}", d.cosub, d.u),
            Witness::new(vec![d.u], "uR"),
        ));
    }
    Ok(Outcome::pass(format!("uR = node {}", d.u)))
}

fn seminormalization_dual(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let ring = a.ring();
    let top = a.node(a.top());
    let nodes: Vec<usize> = (0..a.lattice.len()).filter(|&v| seminormal_violation(ring, a.node(v), top).is_none()).collect();
    let least = nodes.iter().copied().find(|&v| nodes.iter().all(|&w| a.order().leq(v, w)));
    if least != Some(a.decomposition.plus) {
        return Ok(Outcome::fail(
            format!("least seminormal-below node {least:?}, seminormalization {}", a.decomposition.plus),
            Witness::new(vec![a.decomposition.plus], "seminormalization"),
        ));
    }
    Ok(Outcome::pass(format!("+R = node {}", a.decomposition.plus)))
}

// ---------------------------------------------------------------------------
// Lattice-level facts

fn lattice_axioms(a: &Analysis) -> Result<Outcome, ExtensionError> {
    if let Err(e) = a.order().verify_axioms() {
        return Ok(Outcome::fail(format!("{e}"), Witness::new(Vec::new(), "lattice law")));
    }
    if let Err(e) = a.lattice.verify_meets_are_intersections() {
        return Ok(Outcome::fail(format!("{e}"), Witness::new(Vec::new(), "meet or join")));
    }
    Ok(Outcome::pass(format!("{} nodes", a.lattice.len())))
}

/// Runs the three distributivity procedures on `l`, returning a mismatch.
pub fn procedures_disagree(l: &FiniteLattice) -> Option<(bool, bool, bool)> {
    let law = l.law_scan().is_none();
    let forbidden = l.forbidden_sublattice().is_none();
    let covering = l.covering_criterion().is_none();
    (law != forbidden || law != covering).then_some((law, forbidden, covering))
}

fn distributivity_procedures_agree(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let o = a.order();
    if let Some(v) = procedures_disagree(o) {
        return Ok(Outcome::fail(
            format!("law/forbidden/covering = {v:?}"),
            Witness::new(vec![0, a.top()], "whole lattice"),
        ));
    }
    let mut n = 1;
    for (lo, hi) in a.pairs() {
        if o.interval_size(lo, hi) < 5 {
            continue;
        }
        let sub = o.interval(lo, hi)?;
        if let Some(v) = procedures_disagree(&sub.lattice) {
            return Ok(Outcome::fail(format!("law/forbidden/covering = {v:?}"), Witness::new(vec![lo, hi], "interval")));
        }
        n += 1;
    }
    Ok(Outcome::pass(format!("{n} lattices with at least five elements agree")).with_lhs(a.distributive()))
}

fn distributive_implies_catenarian(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.distributive(), "not distributive");
    let (cat, pair) = a.order().catenarian();
    if !cat {
        let (x, y) = pair.expect("witness");
        return Ok(Outcome::fail("distributive but not catenarian", Witness::new(vec![x, y], "interval")));
    }
    Ok(Outcome::pass("catenarian"))
}

fn length_two_intervals_rule(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let o = a.order();
    for (lo, hi) in a.pairs() {
        if o.length_between(lo, hi) == 2 {
            let small = o.interval_size(lo, hi) <= 4;
            if small != a.distributive_between(lo, hi)? {
                return Ok(Outcome::fail(
                    "length-2 interval whose size bound and distributivity disagree",
                    Witness::new(vec![lo, hi], "interval"),
                ));
            }
        }
    }
    need!(a.verdict.catenarian, "not catenarian");
    let rule = o.length2_violation();
    Ok(Outcome::iff(a.distributive(), rule.is_none(), "distributive", "length_two_intervals_small", || {
        rule.map(|(x, y)| vec![x, y]).unwrap_or_default()
    }))
}

fn b2_characterization(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let ring = a.ring();
    let o = a.order();
    let mut seen = 0;
    let mut last = None;
    for (lo, hi) in a.pairs() {
        if o.length_between(lo, hi) != 2 {
            continue;
        }
        seen += 1;
        let sub = o.interval(lo, hi)?;
        let b2 = sub.lattice.is_boolean()? && sub.lattice.len() == 4;
        if b2 != (sub.lattice.len() == 4) {
            return Ok(Outcome::fail("Boolean length-2 disagrees with four elements", Witness::new(vec![lo, hi], "interval")));
        }
        let (l, h) = (a.node(lo), a.node(hi));
        let supp = a.lattice.msupp(lo, hi);
        let cond = conductor_of(ring, l, h);
        let crucial_max = supp.len() == 1 && l.locals[supp[0]].maximal == cond;
        let c1 = supp.len() == 2;
        let c2 = crucial_max && is_infra_integral(ring, l, h) && {
            let d = a.lattice.decomposition(lo, hi)?;
            d.plus != lo && d.plus != hi
        };
        let c3 = crucial_max && t_closed_violation(ring, l, h).is_none() && {
            match h.locals.iter().find(|q| q.maximal == cond) {
                Some(_) => {
                    let q = l.locals[supp[0]].residue_size;
                    let d = crate::extension::log_exact(q, h.len() / cond.len());
                    d.is_some_and(|d| (1..=d).filter(|k| d % k == 0).count() == 4)
                }
                None => false,
            }
        };
        let rhs = c1 || c2 || c3;
        if b2 != rhs {
            return Ok(Outcome::fail(
                format!("B2={b2} but conditions (two-point support {c1}, infra-integral crucial {c2}, t-closed crucial {c3})"),
                Witness::new(vec![lo, hi], "interval"),
            )
            .with_lhs(b2));
        }
        last = Some(b2);
    }
    need!(seen > 0, "no interval of length 2");
    let whole = a.verdict.is_b2;
    Ok(Outcome::pass(format!("{seen} length-2 intervals")).with_lhs(if a.verdict.length == 2 { whole } else { last.unwrap_or(false) }))
}

fn distinct_atom_pairs(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let ring = a.ring();
    let o = a.order();
    let mut counts = [0usize; 4];
    for v in 0..a.lattice.len() {
        let ups = o.upper_covers(v).to_vec();
        for (i, &t) in ups.iter().enumerate() {
            for &u in &ups[i + 1..] {
                let j = o.join(t, u);
                let (tv, uv) = (a.edge_type(v, t).expect("edge"), a.edge_type(v, u).expect("edge"));
                let m = conductor_of(ring, a.node(v), a.node(t));
                let n = conductor_of(ring, a.node(v), a.node(u));
                let w = || vec![v, t, u, j];
                if m != n {
                    counts[0] += 1;
                    if o.interval_size(v, j) != 4 {
                        return Ok(Outcome::fail("distinct crucial ideals but the compositum interval is not a square", Witness::new(w(), "node, two covers, join")));
                    }
                } else if (tv == MinimalType::Inert) != (uv == MinimalType::Inert) {
                    counts[1] += 1;
                    if o.interval(v, j)?.lattice.catenarian().0 {
                        return Ok(Outcome::fail("inert and non-inert over one crucial ideal but catenarian", Witness::new(w(), "node, two covers, join")));
                    }
                } else if tv != MinimalType::Inert {
                    let (tn, un) = (a.node(t), a.node(u));
                    let above = |s: &Subring| -> Vec<ElemSet> {
                        s.locals.iter().map(|l| l.maximal.clone()).filter(|p| p.intersection(&a.node(v).members) == m).collect()
                    };
                    let pq_inside = above(tn).iter().any(|p| {
                        above(un).iter().any(|q| {
                            let (sp, sq) = (ring.spanning_set(p), ring.spanning_set(q));
                            sp.iter().all(|&x| sq.iter().all(|&y| m.contains(ring.mul(x, y))))
                        })
                    });
                    let sub = o.interval(v, j)?;
                    let want = if pq_inside { 2 } else { 3 };
                    counts[if pq_inside { 2 } else { 3 }] += 1;
                    if !sub.lattice.catenarian().0 || !is_infra_integral(ring, a.node(v), a.node(j)) || sub.lattice.length() != want {
                        return Ok(Outcome::fail(
                            format!("two non-inert covers over one crucial ideal: expected catenarian infra-integral of length {want}, got length {}", sub.lattice.length()),
                            Witness::new(w(), "node, two covers, join"),
                        ));
                    }
                }
            }
        }
    }
    need!(counts.iter().sum::<usize>() > 0, "no node has two covers outside the inert-inert case");
    Ok(Outcome::pass(format!(
        "distinct crucial {}, inert/non-inert {}, non-inert length 2: {}, length 3: {}",
        counts[0], counts[1], counts[2], counts[3]
    )))
}

fn atoms_join_is_monogenic(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.distributive(), "not distributive");
    let atoms = a.order().atoms().to_vec();
    need!(atoms.len() >= 2, "fewer than two atoms");
    let ring = a.ring();
    let k = atoms.len().min(8);
    let xs: Vec<Elem> = atoms[..k].iter().map(|&t| a.lattice.generators(t)[0]).collect();
    for mask in 1u32..(1 << k) {
        let chosen: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        if chosen.len() < 2 {
            continue;
        }
        let join = a.order().join_all(&chosen.iter().map(|&i| atoms[i]).collect::<Vec<_>>());
        let sum = chosen.iter().fold(0, |acc, &i| ring.add(acc, xs[i]));
        let gen = a.extension.generated_subring(a.node(0), &[sum]);
        if a.lattice.find(&gen.members) != Some(join) {
            return Ok(Outcome::fail(
                "join of atoms is not generated by the sum of their generators",
                Witness::new(chosen.iter().map(|&i| atoms[i]).collect(), "atoms"),
            ));
        }
    }
    Ok(Outcome::pass(format!("{} subsets of {k} atoms", (1usize << k) - k - 1)))
}

fn chained_implies_simple(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let mut n = 0;
    for (lo, hi) in a.pairs() {
        if a.chained(lo, hi) {
            n += 1;
            if !a.lattice.is_simple(lo, hi) {
                return Ok(Outcome::fail("chained but not simple", Witness::new(vec![lo, hi], "interval")));
            }
        }
    }
    need!(n > 0, "no chained interval");
    Ok(Outcome::pass(format!("{n} chained intervals are simple")))
}

fn pinched_chain_distributivity(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let top = a.top();
    let inner: Vec<usize> = a.order().pinch_points().into_iter().filter(|&c| c != 0 && c != top).collect();
    need!(!inner.is_empty(), "no pinch point strictly between R and S");
    let mut chain = vec![0];
    chain.extend_from_slice(&inner);
    chain.push(top);
    let mut steps = true;
    let mut bad = Vec::new();
    for w in chain.windows(2) {
        if !a.distributive_between(w[0], w[1])? {
            steps = false;
            bad = vec![w[0], w[1]];
            break;
        }
    }
    Ok(Outcome::iff(a.distributive(), steps, "distributive", "pinched_steps_distributive", || bad))
}

fn pinched_loewy_boolean_steps(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let inner: Vec<usize> = a.loewy.iter().copied().filter(|&c| c != 0 && c != a.top()).collect();
    need!(a.pinched(0, a.top(), &inner)?, "not pinched at the Loewy series");
    let mut bool_steps = true;
    let mut bad = Vec::new();
    for w in a.loewy.windows(2) {
        if !a.order().interval(w[0], w[1])?.lattice.is_boolean()? {
            bool_steps = false;
            bad = vec![w[0], w[1]];
            break;
        }
    }
    Ok(Outcome::iff(a.distributive(), bool_steps, "distributive", "loewy_steps_boolean", || bad))
}

fn arithmetic_implies_distributive(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.arithmetic || f.locally_minimal, "neither arithmetic nor locally minimal");
    if !a.distributive() {
        return Ok(Outcome::fail(
            format!("arithmetic={} locally_minimal={} but not distributive", f.arithmetic, f.locally_minimal),
            Witness::new(a.verdict.witness.as_ref().map(|w| w.nodes()).unwrap_or_default(), "forbidden sublattice"),
        ));
    }
    Ok(Outcome::pass(format!("arithmetic={}, locally_minimal={}", f.arithmetic, f.locally_minimal)))
}

// ---------------------------------------------------------------------------
// Localization, splitting and transfers

fn localization_equivalence(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let lhs = a.distributive();
    let pieces = a.localizations()?;
    let mut local_all = true;
    let mut bad = Vec::new();
    for p in &pieces {
        if !lattice_distributive(&p.lattice)? {
            local_all = false;
            bad.push(p.maximal);
        }
    }
    if lhs != local_all {
        return Ok(Outcome::fail(
            format!("distributive={lhs} but all localizations distributive={local_all}"),
            Witness::new(Vec::new(), format!("localizations at maximal ideals {bad:?}")),
        )
        .with_lhs(lhs));
    }
    let ring = a.ring();
    let (base, top) = (a.node(0), a.node(a.top()));
    let conductor = conductor_of(ring, base, top);
    let all = ring.additive_generators();
    let mut shared: BTreeSet<ElemSet> = BTreeSet::new();
    shared.insert(conductor.clone());
    shared.insert(ElemSet::from_elems(ring.size(), [0]));
    for x in conductor.iter() {
        if shared.len() >= SHARED_IDEAL_SAMPLES {
            break;
        }
        shared.insert(ring.closure(&[x], &all, false));
    }
    let mut tried = 0;
    for ideal in shared {
        let (q, proj) = ring.quotient_ring(&Ideal { members: ideal.clone() })?;
        let image = ElemSet::from_elems(q.size(), base.members.iter().map(|r| proj[r as usize]));
        let (d, _, _) = distributivity_of(q, image, a.node_limit)?;
        tried += 1;
        if d != lhs {
            return Ok(Outcome::fail(
                format!("distributive={lhs} but the quotient by a shared ideal of size {} gives {d}", ideal.len()),
                Witness::new(Vec::new(), format!("shared ideal {:?}", ideal.to_vec())),
            )
            .with_lhs(lhs));
        }
    }
    Ok(Outcome::pass(format!("{} localizations and {tried} shared-ideal quotients agree (distributive={lhs})", pieces.len()))
        .with_lhs(lhs))
}

fn local_product_formulas(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.msupp.len() >= 2, "support has fewer than two points");
    let pieces = a.localizations()?;
    let size: usize = pieces.iter().map(|p| p.lattice.len()).product();
    let length: usize = pieces.iter().map(|p| p.lattice.order.length()).sum();
    let sizes: Vec<usize> = pieces.iter().map(|p| p.lattice.len()).collect();
    let lengths: Vec<usize> = pieces.iter().map(|p| p.lattice.order.length()).collect();
    if size != a.lattice.len() || length != a.verdict.length {
        return Ok(Outcome::fail(
            format!("|[R,S]|={} l={} but local sizes {sizes:?} lengths {lengths:?}", a.lattice.len(), a.verdict.length),
            Witness::new(vec![0, a.top()], "whole interval"),
        ));
    }
    Ok(Outcome::pass(format!("{} = product {sizes:?}, {} = sum {lengths:?}", size, length)))
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << n)).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

/// Maximal ideals of R (as indices) at which nodes `lo ⊆ hi` differ,
/// measured through the idempotents of R.
fn support_over_base(a: &Analysis, lo: usize, hi: usize) -> Vec<usize> {
    let ring = a.ring();
    let base = a.node(0);
    (0..base.locals.len())
        .filter(|&i| {
            let e = base.locals[i].idempotent;
            crate::extension::scaled_set(ring, e, &a.node(lo).members).len()
                != crate::extension::scaled_set(ring, e, &a.node(hi).members).len()
        })
        .collect()
}

fn splitters_and_complements(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.msupp.len() >= 2, "support has fewer than two points");
    need!(a.msupp.len() <= 8, "support too large to enumerate all subsets");
    let top = a.top();
    let mut rhs = true;
    let mut witness = Vec::new();
    for xi in subsets(a.msupp.len()) {
        let x: Vec<usize> = xi.iter().map(|&i| a.msupp[i]).collect();
        let rest: Vec<usize> = a.msupp.iter().copied().filter(|m| !x.contains(m)).collect();
        let (Some(t), Some(c)) = (a.lattice.splitter(0, top, &x)?, a.lattice.splitter(0, top, &rest)?) else {
            return Ok(Outcome::fail("a splitter does not exist", Witness::new(Vec::new(), format!("support subset {x:?}"))));
        };
        let comps = a.lattice.complements(t);
        if comps != [c] {
            return Ok(Outcome::fail(
                format!("complements of the splitter are {comps:?}, expected only {c}"),
                Witness::new(vec![t, c], "splitter and expected complement"),
            ));
        }
        if support_over_base(a, 0, t) != x || support_over_base(a, t, top) != rest {
            return Ok(Outcome::fail("splitter supports are wrong", Witness::new(vec![t], "splitter")));
        }
        let pair = a.distributive_between(0, t)? && a.distributive_between(0, c)?;
        if !pair && rhs {
            rhs = false;
            witness = vec![t, c];
        }
    }
    Ok(Outcome::iff(a.distributive(), rhs, "distributive", "both_split_halves_distributive", || witness))
}

fn quotient_transfer(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    need!(a.distributive(), "not distributive");
    let ring = a.ring();
    let base = a.node(0);
    let mut ideals: BTreeSet<ElemSet> = ring.maximal_ideals().into_iter().map(|i| i.members).collect();
    ideals.insert(ring.nilpotents().clone());
    ideals.insert(conductor_of(ring, base, a.node(a.top())));
    ideals.remove(&ElemSet::full(ring.size()));
    let mut n = 0;
    for j in ideals {
        let (q, proj) = ring.quotient_ring(&Ideal { members: j.clone() })?;
        let image = ElemSet::from_elems(q.size(), base.members.iter().map(|r| proj[r as usize]));
        let (d, _, _) = distributivity_of(q, image, a.node_limit)?;
        if !d {
            return Ok(Outcome::fail(
                "distributive but a quotient extension is not",
                Witness::new(Vec::new(), format!("ideal {:?}", j.to_vec())),
            ));
        }
        n += 1;
    }
    Ok(Outcome::pass(format!("{n} quotients are distributive")))
}

/// Second factor used by the product transfer: `F_2 ⊂ F_2[x]/(x²)`.
fn reference_factor() -> Result<(FiniteRing, ElemSet), RingError> {
    let f2 = FiniteRing::zmod(2, 4)?;
    let q = f2.polynomial_quotient(1, &[crate::finring::Poly { terms: vec![(vec![2], 1)] }], 4)?;
    let base = ElemSet::from_elems(q.ring.size(), q.base_map.iter().copied());
    Ok((q.ring, base))
}

fn product_transfer(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let ring = a.ring();
    let (other, other_base) = reference_factor()?;
    let Ok(prod) = FiniteRing::product(&[ring, &other], crate::finring::DEFAULT_CAP) else {
        return Ok(Outcome::not_applicable("product with the reference factor exceeds the size cap"));
    };
    let factors = [ring, &other];
    let mut base = ElemSet::empty(prod.size());
    for r in a.node(0).members.iter() {
        for s in other_base.iter() {
            let x = FiniteRing::product_injection(&factors, &prod, 0, r);
            let y = FiniteRing::product_injection(&factors, &prod, 1, s);
            base.insert(prod.add(x, y));
        }
    }
    let (other_distributive, other_size, _) = distributivity_of(other, other_base, a.node_limit)?;
    let (d, size, _) = distributivity_of(prod, base, a.node_limit.saturating_mul(2))?;
    let rhs = a.distributive() && other_distributive;
    if size != other_size * a.lattice.len() {
        return Ok(Outcome::fail(
            format!("product lattice has {size} nodes, expected {}", other_size * a.lattice.len()),
            Witness::new(Vec::new(), "product with the reference factor"),
        ));
    }
    Ok(Outcome::iff(d, rhs, "product_distributive", "factors_distributive", Vec::new))
}

fn idealization_transfer(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let ring = a.ring();
    let q = ring.maximal_ideals().into_iter().next().expect("a finite ring has a maximal ideal");
    let (k, proj) = ring.quotient_ring(&q)?;
    let kgens = k.additive_generators();
    let action: Vec<Vec<Vec<u32>>> = ring
        .additive_generators()
        .iter()
        .map(|&g| kgens.iter().map(|&m| k.coeffs(k.mul(proj[g as usize], m))).collect())
        .collect();
    let Ok(ideal) = FiniteRing::idealization(ring, k.additive_orders(), &action, crate::finring::DEFAULT_CAP) else {
        return Ok(Outcome::not_applicable("idealization exceeds the size cap"));
    };
    let n = ring.size() as Elem;
    let base = ElemSet::from_elems(
        ideal.size(),
        a.node(0).members.iter().flat_map(|r| (0..k.size() as Elem).map(move |m| r + n * m)),
    );
    let (d, _, _) = distributivity_of(ideal, base, a.node_limit)?;
    Ok(Outcome::iff(a.distributive(), d, "distributive", "idealization_distributive", Vec::new))
}

/// `R`-submodules of the ambient ring contained in `within`, as a lattice.
fn submodule_lattice(ring: &FiniteRing, scalars: &[Elem], within: &ElemSet) -> Option<FiniteLattice> {
    let mut cyclic: BTreeSet<ElemSet> = BTreeSet::new();
    for x in within.iter() {
        cyclic.insert(ring.closure(&[x], scalars, false));
    }
    let cyclic: Vec<ElemSet> = cyclic.into_iter().collect();
    let zero = ElemSet::from_elems(ring.size(), [0]);
    let mut all: BTreeSet<ElemSet> = BTreeSet::new();
    all.insert(zero.clone());
    let mut queue = vec![zero];
    while let Some(m) = queue.pop() {
        let span = ring.spanning_set(&m);
        for c in &cyclic {
            if c.is_subset(&m) {
                continue;
            }
            let mut seeds = span.clone();
            seeds.extend(ring.spanning_set(c));
            let j = ring.additive_closure(&seeds);
            if all.insert(j.clone()) {
                if all.len() > MODULE_NODE_LIMIT {
                    return None;
                }
                queue.push(j);
            }
        }
    }
    let nodes: Vec<ElemSet> = all.into_iter().collect();
    FiniteLattice::from_order(nodes.len(), |a, b| nodes[a].is_subset(&nodes[b])).ok()
}

fn module_lattice_chain(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let ring = a.ring();
    let base = a.node(0);
    let full = ElemSet::full(ring.size());
    let Some(whole) = submodule_lattice(ring, &base.span, &full) else {
        return Ok(Outcome::not_applicable(format!("more than {MODULE_NODE_LIMIT} submodules")));
    };
    let lhs = whole.check_distributive()?.0;
    let mut rhs = true;
    let mut bad = None;
    for (i, l) in base.locals.iter().enumerate() {
        let part = scaled_set(ring, l.idempotent, &full);
        let Some(local) = submodule_lattice(ring, &base.span, &part) else {
            return Ok(Outcome::not_applicable(format!("more than {MODULE_NODE_LIMIT} submodules locally")));
        };
        if !local.is_chain() {
            rhs = false;
            bad.get_or_insert(i);
        }
    }
    let mut o = Outcome::iff(lhs, rhs, "module_distributive", "local_submodules_chained", Vec::new);
    if let (Some(w), Some(i)) = (o.witness.as_mut(), bad) {
        w.note = format!("localization at maximal ideal #{i}");
    }
    o.detail = format!("{} ({} submodules)", o.detail, whole.len());
    Ok(o)
}

// ---------------------------------------------------------------------------
// Distributivity criteria

fn subintegral_criterion(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.subintegral, "not subintegral");
    Ok(Outcome::iff(a.distributive(), f.arithmetic, "distributive", "arithmetic", || vec![0, a.top()]))
}

fn seminormal_infra_integral_criterion(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.seminormal && f.infra_integral, "not seminormal infra-integral");
    Ok(Outcome::iff(a.distributive(), f.locally_minimal, "distributive", "locally_minimal", || vec![0, a.top()]))
}

fn t_closed_criterion(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.t_closed, "not t-closed");
    let mut rhs = true;
    let mut bad = String::new();
    for (i, q) in a.node(a.top()).maximal_ideals().iter().enumerate() {
        let r = a.extension.residual_extension(q)?;
        let base = ElemSet::from_elems(r.large.size(), r.embedding.iter().copied());
        let (d, _, _) = distributivity_of(r.large, base, a.node_limit)?;
        if !d {
            rhs = false;
            bad = format!("residual extension at maximal ideal #{i} of S");
        }
    }
    let mut o = Outcome::iff(a.distributive(), rhs, "distributive", "residual_extensions_distributive", Vec::new);
    if let Some(w) = o.witness.as_mut() {
        w.note = bad;
    }
    Ok(o)
}

fn unbranched_criterion(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.i_extension, "not locally unbranched");
    let t = a.decomposition.t;
    let parts = [
        ("R ⊆ tR arithmetic", a.lattice.is_arithmetic(0, t)?),
        ("[tR,S] distributive", a.distributive_between(t, a.top())?),
        ("locally pinched at tR", locally_pinched_at_t(a)?),
    ];
    let rhs = parts.iter().all(|p| p.1);
    let failed: Vec<&str> = parts.iter().filter(|p| !p.1).map(|p| p.0).collect();
    let mut o = Outcome::iff(a.distributive(), rhs, "distributive", "three_conditions", || vec![0, t, a.top()]);
    if !failed.is_empty() {
        o.detail = format!("{} (failing: {})", o.detail, failed.join(", "));
    }
    if !a.pinched(0, a.top(), &[t])? {
        o.detail.push_str("; not pinched at tR globally");
    }
    Ok(o)
}

/// Pinching at the t-closure, read in each localization at a supporting maximal ideal.
/// Globally the condition is too strong: `F_2² ⊂ F_4 × F_2[x]/(x²)` is a distributive square.
fn locally_pinched_at_t(a: &Analysis) -> Result<bool, ExtensionError> {
    for piece in a.local_pieces()? {
        let l = &piece.lattice;
        let t = l.decomposition(0, l.top())?.t;
        if !l.is_pinched_within(0, l.top(), &[t])? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn unbranched_locally_minimal_top(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    let t = a.decomposition.t;
    need!(a.distributive() && f.i_extension, "not a distributive i-extension");
    need!(a.lattice.is_locally_minimal(t, a.top())?, "tR ⊆ S is not locally minimal");
    if !f.arithmetic {
        return Ok(Outcome::fail("hypotheses hold but the extension is not arithmetic", Witness::new(vec![t], "tR")));
    }
    Ok(Outcome::pass("arithmetic"))
}

fn branched_infra_integral_pinching(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    let d = a.decomposition;
    need!(f.infra_integral && a.branched(), "not branched infra-integral");
    need!(a.chained(0, d.plus) && a.max_count(a.top()) == 2, "[R,+R] is not a chain or |Max(S)| ≠ 2");
    let m = a.order().meet(d.u, d.plus);
    let inner: Vec<usize> = [m].into_iter().filter(|&c| c != 0 && c != a.top()).collect();
    if !a.pinched(0, a.top(), &inner)? {
        return Ok(Outcome::fail("not pinched at uR∩+R", Witness::new(vec![m], "uR∩+R")));
    }
    split_check(a, d)
}

/// `[R,S] = [R,+R] ⊔ [uR,S]`.
fn split_check(a: &Analysis, d: CanonicalDecomposition) -> Result<Outcome, ExtensionError> {
    let o = a.order();
    let outside: Vec<usize> =
        (0..a.lattice.len()).filter(|&x| o.leq(x, d.plus) == o.leq(d.u, x)).collect();
    if !outside.is_empty() {
        let nodes = minimize_witness(outside, |ns| ns.iter().any(|&x| o.leq(x, d.plus) == o.leq(d.u, x)));
        return Ok(Outcome::fail(
            "[R,S] is not the disjoint union of [R,+R] and [uR,S]",
            Witness::new(nodes, "node in neither or both parts"),
        ));
    }
    Ok(Outcome::pass(format!("[R,S] = [0,{}] ⊔ [{},{}]", d.plus, d.u, a.top())))
}

fn branched_infra_integral_criterion(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    let d = a.decomposition;
    need!(f.infra_integral && a.branched() && d.plus != 0, "not branched infra-integral with a proper seminormalization");
    let o = a.order();
    let c1 = a.chained(0, d.plus);
    let c2 = a.max_count(a.top()) == 2;
    let m = o.meet(d.u, d.plus);
    let dom = o.interval_nodes(m, d.plus);
    let cod = o.interval_nodes(d.u, a.top());
    let img: Vec<usize> = dom.iter().map(|&x| o.join(d.u, x)).collect();
    let mut sorted = img.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let bijective = sorted == cod && sorted.len() == dom.len();
    let order_iso = bijective
        && dom.iter().enumerate().all(|(i, &x)| dom.iter().enumerate().all(|(j, &y)| o.leq(x, y) == o.leq(img[i], img[j])));
    let rhs = c1 && c2 && order_iso;
    let mut out = Outcome::iff(a.distributive(), rhs, "distributive", "chain_two_maxima_isomorphism", || vec![m, d.plus, d.u]);
    if out.status == Status::Pass && rhs {
        let single = a.lattice.msupp(d.u, a.top()).len() == 1 && a.chained(d.u, a.top());
        let whole_chain = a.chained(0, a.top()) && d.u == a.top();
        if !(single || whole_chain) {
            return Ok(Outcome::fail(
                "conditions hold but neither [uR,S] is a chain with one-point support nor [R,S] is a chain with uR = S",
                Witness::new(vec![d.u], "uR"),
            )
            .with_lhs(true));
        }
    }
    out.detail = format!("{} (chain {c1}, two maxima {c2}, isomorphism {order_iso})", out.detail);
    Ok(out)
}

fn branched_non_chained_structure(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    let d = a.decomposition;
    need!(a.distributive() && f.infra_integral && a.branched(), "not distributive branched infra-integral");
    need!(!f.chained, "chained");
    let o = a.order();
    let split = split_check(a, d)?;
    if split.status == Status::Fail {
        return Ok(split);
    }
    if !a.chained(0, d.plus) {
        return Ok(Outcome::fail("[R,+R] is not a chain", Witness::new(vec![0, d.plus], "interval")));
    }
    let chain = o.interval_nodes(0, d.plus);
    let images: BTreeSet<usize> = chain.iter().map(|&x| o.join(d.u, x)).collect();
    let cod: BTreeSet<usize> = o.interval_nodes(d.u, a.top()).into_iter().collect();
    if images != cod {
        return Ok(Outcome::fail("[uR,S] is not uR·[R,+R]", Witness::new(vec![d.u], "uR")));
    }
    let m = o.meet(d.u, d.plus);
    let Some(k) = chain.iter().position(|&x| x == m) else {
        return Ok(Outcome::fail("uR∩+R is not on the chain [R,+R]", Witness::new(vec![m], "uR∩+R")));
    };
    if !a.chained(d.u, a.top()) {
        return Ok(Outcome::fail("[uR,S] is not a chain", Witness::new(vec![d.u, a.top()], "interval")));
    }
    // Above uR∩+R both uR and the next chain step are atoms, so the series
    // jumps straight to their join.
    let mut expected: Vec<usize> = chain[..=k].to_vec();
    if k + 1 == chain.len() {
        expected.push(d.u);
    }
    for &x in &chain[k + 1..] {
        expected.push(o.join(d.u, x));
    }
    expected.dedup();
    if expected != a.loewy {
        return Ok(Outcome::fail(
            format!("Loewy series {:?}, expected {:?}", a.loewy, expected),
            Witness::new(a.loewy.clone(), "Loewy series"),
        ));
    }
    Ok(Outcome::pass(format!("Loewy series {:?}", a.loewy)))
}

fn seminormal_branched_criterion(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.seminormal && a.branched(), "not seminormal branched");
    let t = a.decomposition.t;
    let o = a.order();
    let shape = (1..a.lattice.len()).all(|x| o.leq(t, x));
    let rhs = a.distributive_between(t, a.top())? && shape;
    Ok(Outcome::iff(a.distributive(), rhs, "distributive", "top_distributive_and_R_plus_top_interval", || vec![0, t]))
}

fn branched_with_chained_t_closure(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.branched(), "not branched");
    let d = a.decomposition;
    let top = a.top();
    need!(d.plus != 0 && d.plus != top && d.t != 0 && d.t != top, "+R or tR is R or S");
    need!(a.chained(0, d.t), "[R,tR] is not a chain");
    let rhs = a.distributive_between(d.t, top)? && a.pinched(0, top, &[d.t])?;
    Ok(Outcome::iff(a.distributive(), rhs, "distributive", "top_distributive_and_pinched_at_t", || vec![d.t]))
}

fn branched_pinched_at_plus(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.distributive() && a.branched(), "not distributive branched");
    let d = a.decomposition;
    let inner: Vec<usize> = [d.plus].into_iter().filter(|&c| c != 0 && c != d.t).collect();
    need!(a.pinched(0, d.t, &inner)?, "[R,tR] is not pinched at +R");
    if !a.pinched(0, a.top(), &[d.t])? {
        let o = a.order();
        let bad: Vec<usize> = (0..a.lattice.len()).filter(|&x| !o.comparable(x, d.t)).collect();
        return Ok(Outcome::fail("not pinched at tR", Witness::new(vec![d.t, bad[0]], "tR and an incomparable node")));
    }
    Ok(Outcome::pass("pinched at tR"))
}

/// Local index in `nodes[u]` of the maximal ideal other than `m`, when `u`
/// has exactly two.
fn other_maximal(a: &Analysis, u: usize, m: usize) -> Option<usize> {
    (a.max_count(u) == 2).then_some(1 - m)
}

fn branched_distributive_criterion(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1 && a.branched(), "not branched");
    let d = a.decomposition;
    let top = a.top();
    let base_ok = a.max_count(top) == 2
        && a.max_count(d.u) == 2
        && a.distributive_between(0, d.t)?
        && a.distributive_between(d.t, top)?;
    let case1 = a.pinched(0, top, &[d.t])?;
    let supp_ut = a.lattice.msupp(d.u, d.t);
    let case2 = !case1 && supp_ut.len() == 1 && a.lattice.msupp(d.u, top).len() == 2;
    // The second alternative also carries the splitter structure.
    let structure = if base_ok && case2 { non_pinched_structure(a, supp_ut[0])? } else { Err(("not applicable".into(), Witness::new(vec![], ""))) };
    let rhs = base_ok && (case1 || structure.is_ok());
    let lhs = a.distributive();
    let mut out = Outcome::iff(lhs, rhs, "distributive", "criterion", || vec![d.u, d.t]);
    if out.status != Status::Pass {
        if let (true, Err((why, w))) = (case2 && base_ok, &structure) {
            out.detail = format!("{}; {why}", out.detail);
            if !lhs {
                out.witness = Some(w.clone());
            }
        }
        return Ok(out);
    }
    if lhs {
        out.detail = match structure {
            Ok(n) => format!("{} (not pinched at tR; chains of length {n})", out.detail),
            Err(_) => format!("{} (pinched at tR)", out.detail),
        };
    }
    Ok(out)
}

/// Splitter conditions when the lattice is not pinched at tR and uR ⊆ tR is
/// supported at the single maximal ideal `m` of uR. Returns the common length
/// of the chains [V,W] and [uR,tR].
fn non_pinched_structure(a: &Analysis, m: usize) -> Result<Result<usize, (String, Witness)>, ExtensionError> {
    let d = a.decomposition;
    let top = a.top();
    let o = a.order();
    let mp = other_maximal(a, d.u, m).expect("uR has two maximal ideals");
    let Some(v) = a.lattice.splitter(d.u, top, &[mp])? else {
        return Ok(Err(("the splitter V does not exist".into(), Witness::new(vec![d.u], "uR"))));
    };
    let w = o.join(v, d.t);
    if a.lattice.decomposition(d.u, w)?.cosub != Some(v) {
        return Ok(Err(("V is not the co-subintegral closure of uR ⊆ W".into(), Witness::new(vec![d.u, v, w], "uR, V, W"))));
    }
    if !a.chained(v, w) || !a.chained(d.u, d.t) {
        return Ok(Err(("[V,W] or [uR,tR] is not a chain".into(), Witness::new(vec![v, w, d.u, d.t], "V, W, uR, tR"))));
    }
    let vs = o.interval_nodes(v, w);
    let us = o.interval_nodes(d.u, d.t);
    let meets: Vec<usize> = vs.iter().map(|&x| o.meet(x, d.t)).collect();
    if vs.len() != us.len() || meets != us {
        return Ok(Err((
            format!("chains [V,W] {vs:?} and [uR,tR] {us:?} do not match via ∩tR ({meets:?})"),
            Witness::new(vec![v, w, d.u, d.t], "V, W, uR, tR"),
        )));
    }
    let covered = |x: usize| {
        o.leq(x, d.plus) || o.leq(d.t, x) || vs[..vs.len() - 1].iter().any(|&vi| o.leq(o.meet(vi, d.t), x) && o.leq(x, vi))
    };
    let missing: Vec<usize> = (0..a.lattice.len()).filter(|&x| !covered(x)).collect();
    if !missing.is_empty() {
        let missing = minimize_witness(missing, |ns| ns.iter().any(|&x| !covered(x)));
        return Ok(Err(("the three-part cover of [R,S] misses nodes".into(), Witness::new(missing, "uncovered nodes"))));
    }
    Ok(Ok(vs.len() - 1))
}

fn non_pinched_branched_structure(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.distributive() && a.branched(), "not distributive branched");
    let d = a.decomposition;
    let top = a.top();
    need!(!a.pinched(0, top, &[d.t])?, "pinched at tR");
    if a.max_count(d.t) != 2 {
        return Ok(Outcome::fail("tR does not have two maximal ideals", Witness::new(vec![d.t], "tR")));
    }
    let supp = a.lattice.msupp(d.u, d.t);
    if supp.len() != 1 {
        return Ok(Outcome::fail("uR ⊆ tR does not have one-point support", Witness::new(vec![d.u, d.t], "uR, tR")));
    }
    if a.lattice.msupp(d.t, top).len() != 2 {
        return Ok(Outcome::pass("|Max(tR)| = 2; S has one-point support over tR"));
    }
    let over = contraction(a.ring(), a.node(d.u), a.node(d.t));
    let Some(np) = over.iter().position(|&p| p != supp[0]) else {
        return Ok(Outcome::fail("no maximal ideal of tR avoids M", Witness::new(vec![d.t], "tR")));
    };
    let Some(wp) = a.lattice.splitter(d.t, top, &[np])? else {
        return Ok(Outcome::fail("splitter W' does not exist", Witness::new(vec![d.t], "tR")));
    };
    let Some(v) = a.lattice.decomposition(0, wp)?.cosub else {
        return Ok(Outcome::fail("R ⊆ W' has no co-subintegral closure", Witness::new(vec![wp], "W'")));
    };
    if a.order().meet(v, d.t) != d.u {
        return Ok(Outcome::fail("V ∩ tR ≠ uR", Witness::new(vec![v, d.t, d.u], "V, tR, uR")));
    }
    Ok(Outcome::pass("|Max(tR)| = 2 and uR = V ∩ tR"))
}

fn pinched_at_t_iff_single_support(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let d = a.decomposition;
    need!(a.distributive() && a.branched(), "not distributive branched");
    need!(d.u != d.t, "uR = tR");
    let lhs = a.pinched(0, a.top(), &[d.t])?;
    let rhs = a.lattice.msupp(d.u, a.top()).len() == 1;
    Ok(Outcome::iff(lhs, rhs, "pinched_at_t", "single_support_over_u", || vec![d.u, d.t]))
}

fn split_t_closure(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    let d = a.decomposition;
    let top = a.top();
    need!(f.i_extension && d.t != 0 && d.t != top && a.msupp.len() == 2, "not an i-extension with proper tR and two-point support");
    let x = a.lattice.msupp(0, d.t);
    need!(a.lattice.splitter(0, top, &x)? == Some(d.t), "not split at tR");
    let Some(c) = d.cosub else {
        return Ok(Outcome::fail("no co-subintegral closure", Witness::new(vec![d.t], "tR")));
    };
    let ring = a.ring();
    if t_closed_violation(ring, a.node(0), a.node(c)).is_some() {
        return Ok(Outcome::fail("R ⊆ C is not t-closed", Witness::new(vec![c], "co-subintegral closure")));
    }
    if a.distributive_between(d.t, top)? && !a.distributive_between(0, c)? {
        return Ok(Outcome::fail("[tR,S] distributive but R ⊆ C is not", Witness::new(vec![c], "co-subintegral closure")));
    }
    Ok(Outcome::pass(format!("co-subintegral closure node {c}")))
}

fn distributive_delta_iff_top_arithmetic(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(a.distributive(), "not distributive");
    let t = a.decomposition.t;
    let rhs = a.lattice.is_arithmetic(t, a.top())?;
    let pair = a.lattice.delta_violation(0, a.top());
    Ok(Outcome::iff(f.delta, rhs, "delta", "top_arithmetic", || pair.map(|(x, y)| vec![x, y]).unwrap_or_default()))
}

fn distributive_infra_integral_is_delta(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(a.distributive() && f.infra_integral, "not distributive infra-integral");
    if let Some((x, y)) = a.lattice.delta_violation(0, a.top()) {
        return Ok(Outcome::fail("T + U is not a ring", Witness::new(vec![x, y], "T, U")));
    }
    Ok(Outcome::pass("closed under sums"))
}

fn u_closed_delta_equivalences(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.u_closed, "not u-closed");
    let dist = a.distributive();
    let v = [dist && f.delta, f.arithmetic && f.delta, dist && f.arithmetic];
    if v[0] != v[1] || v[1] != v[2] {
        return Ok(Outcome::fail(
            format!("distributive Δ {}, arithmetic Δ {}, distributive arithmetic {}", v[0], v[1], v[2]),
            Witness::new(vec![0, a.top()], "whole interval"),
        )
        .with_lhs(v[0]));
    }
    Ok(Outcome::pass(format!("all three {}", v[0])).with_lhs(v[0]))
}

fn local_seminormal_delta(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.seminormal && f.delta && a.base_is_local(), "not a seminormal Δ-extension over a local base");
    let t = a.decomposition.t;
    let o = a.order();
    let shape = (1..a.lattice.len()).all(|x| o.leq(t, x));
    Ok(Outcome::iff(a.distributive(), shape, "distributive", "R_plus_top_interval", || vec![0, t]))
}

// ---------------------------------------------------------------------------
// Fibers and counting

fn distributive_fibers(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.distributive(), "not distributive");
    let sizes = a.fiber_sizes();
    if let Some(i) = sizes.iter().position(|&n| n > 2) {
        return Ok(Outcome::fail(
            format!("fiber sizes {sizes:?}"),
            Witness::new(vec![0, a.top()], format!("fiber over maximal ideal #{i}")),
        ));
    }
    Ok(Outcome::pass(format!("fiber sizes {sizes:?}")))
}

fn no_decomposed_pair(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.fibers_at_most_two(), "some fiber has more than two points");
    let o = a.order();
    let mut seen = 0;
    for (&(t, u), &ty) in &a.edges {
        if ty != MinimalType::Decomposed {
            continue;
        }
        for &v in o.upper_covers(u) {
            if a.edge_type(u, v) == Some(MinimalType::Decomposed) {
                seen += 1;
                if a.lattice.msupp(t, v).len() == 1 {
                    return Ok(Outcome::fail("two decomposed steps with one-point support", Witness::new(vec![t, u, v], "T, U, V")));
                }
            }
        }
    }
    Ok(Outcome::pass(format!("{seen} decomposed two-step chains")))
}

fn fibers_two_locally_minimal(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    need!(a.fibers_at_most_two(), "some fiber has more than two points");
    let d = a.decomposition;
    let v = a.lattice.decomposition(0, d.u)?.plus;
    if !a.lattice.is_locally_minimal(v, d.u)? {
        return Ok(Outcome::fail("+R' ⊆ uR is not locally minimal", Witness::new(vec![v, d.u], "+R', uR")));
    }
    if !a.lattice.is_locally_minimal(d.plus, d.t)? {
        return Ok(Outcome::fail("+R ⊆ tR is not locally minimal", Witness::new(vec![d.plus, d.t], "+R, tR")));
    }
    Ok(Outcome::pass("both steps locally minimal"))
}

fn locally_minimal_decomposed(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(f.seminormal && f.infra_integral && a.fibers_at_most_two(), "not seminormal infra-integral with fibers ≤ 2");
    let ring = a.ring();
    let base = a.node(0);
    let conductor = conductor_of(ring, base, a.node(a.top()));
    let locally_maximal = a
        .msupp
        .iter()
        .all(|&m| scaled_set(ring, base.locals[m].idempotent, &conductor) == scaled_set(ring, base.locals[m].idempotent, &base.locals[m].maximal));
    need!(locally_maximal, "conductor is not locally maximal");
    if !a.distributive() || !f.locally_minimal {
        return Ok(Outcome::fail(
            format!("distributive={} locally_minimal={}", a.distributive(), f.locally_minimal),
            Witness::new(vec![0, a.top()], "whole interval"),
        ));
    }
    for &m in &a.msupp {
        let s = a.lattice.split_node(0, a.top(), &[m])?;
        if a.edge_type(0, s) != Some(MinimalType::Decomposed) {
            return Ok(Outcome::fail("a local step is not decomposed", Witness::new(vec![0, s], "local step")));
        }
    }
    Ok(Outcome::pass("distributive, locally minimal decomposed"))
}

fn u_elementary_fibers(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let ring = a.ring();
    let (base, top) = (a.node(0), a.node(a.top()));
    let witness = top.members.iter().filter(|&s| !base.contains(s)).find(|&s| {
        let x = ring.sub(ring.mul(s, s), s);
        base.contains(x) && base.contains(ring.mul(s, x)) && a.extension.generated_subring(base, &[s]).len() == top.len()
    });
    need!(witness.is_some(), "not u-elementary");
    let sizes = a.fiber_sizes();
    if sizes.iter().any(|&n| n > 2) {
        return Ok(Outcome::fail(format!("fiber sizes {sizes:?}"), Witness::new(vec![0, a.top()], "whole interval")));
    }
    Ok(Outcome::pass(format!("u-elementary via element {}, fiber sizes {sizes:?}", witness.expect("found"))))
}

fn atoms_have_distinct_types(a: &Analysis) -> Result<Outcome, ExtensionError> {
    let Some(f) = need_proper(a) else { return Ok(na_trivial()) };
    need!(a.distributive() && f.infra_integral && a.base_is_local(), "not distributive infra-integral over a local base");
    let atoms = a.order().atoms();
    let types: Vec<MinimalType> = atoms.iter().map(|&t| a.edge_type(0, t).expect("edge")).collect();
    for i in 0..types.len() {
        for j in i + 1..types.len() {
            if types[i] == types[j] {
                return Ok(Outcome::fail("two atoms share a type", Witness::new(vec![atoms[i], atoms[j]], "atoms")));
            }
        }
    }
    Ok(Outcome::pass(format!("{} atoms with distinct types", atoms.len())))
}

/// Formula data for a distributive extension over a local base, stored as
/// node 0 to the top of `l`.
struct LocalFormulaData {
    d: CanonicalDecomposition,
    size: usize,
    length: usize,
    max_s: usize,
    max_u: usize,
    supp_ut: Vec<usize>,
    supp_us: usize,
    l_r_plus: usize,
    l_t_s: usize,
    n_t_s: usize,
    l_u_t: usize,
}

fn formula_data(l: &ExtensionLattice) -> Result<LocalFormulaData, ExtensionError> {
    let top = l.top();
    let d = l.decomposition(0, top)?;
    let o = &l.order;
    Ok(LocalFormulaData {
        d,
        size: l.len(),
        length: o.length(),
        max_s: l.nodes[top].locals.len(),
        max_u: l.nodes[d.u].locals.len(),
        supp_ut: l.msupp(d.u, d.t),
        supp_us: l.msupp(d.u, top).len(),
        l_r_plus: o.length_between(0, d.plus),
        l_t_s: o.length_between(d.t, top),
        n_t_s: o.interval_size(d.t, top),
        l_u_t: o.length_between(d.u, d.t),
    })
}

/// Applies `f` to the instance (local base) or each localization, when
/// distributive; collects per-piece outcomes.
fn over_local_pieces(
    a: &Analysis,
    f: impl Fn(&ExtensionLattice, &LocalFormulaData) -> Result<Option<Result<String, String>>, ExtensionError>,
) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    need!(a.distributive(), "not distributive");
    let mut passes = Vec::new();
    for p in a.local_pieces()? {
        let data = formula_data(&p.lattice)?;
        match f(&p.lattice, &data)? {
            None => {}
            Some(Ok(s)) => passes.push(format!("{}{s}", p.label)),
            Some(Err(s)) => {
                return Ok(Outcome::fail(format!("{}{s}", p.label), Witness::new(vec![data.d.plus, data.d.t, data.d.u], "+R, tR, uR of the local piece")));
            }
        }
    }
    need!(!passes.is_empty(), "case hypotheses unmet on every local piece");
    Ok(Outcome::pass(passes.join("; ")))
}

fn compare(what: &str, lhs: usize, rhs: usize, expr: String) -> Option<Result<String, String>> {
    Some(if lhs == rhs { Ok(format!("{what} {lhs} = {expr}")) } else { Err(format!("{what} {lhs} ≠ {expr} = {rhs}")) })
}

fn length_formula(a: &Analysis) -> Result<Outcome, ExtensionError> {
    over_local_pieces(a, |_, x| {
        let rhs = x.l_r_plus + x.l_t_s + x.max_s - 1;
        Ok(compare("length", x.length, rhs, format!("{} + {} + {} - 1", x.l_r_plus, x.l_t_s, x.max_s)))
    })
}

fn u_closure_bounds(a: &Analysis) -> Result<Outcome, ExtensionError> {
    over_local_pieces(a, |_, x| {
        Ok(Some(if x.max_u <= 2 && x.supp_ut.len() <= 1 {
            Ok(format!("|Max(uR)| = {}, support of tR over uR has {} point(s)", x.max_u, x.supp_ut.len()))
        } else {
            Err(format!("|Max(uR)| = {}, support of tR over uR has {} points", x.max_u, x.supp_ut.len()))
        }))
    })
}

fn cardinality_no_support(a: &Analysis) -> Result<Outcome, ExtensionError> {
    over_local_pieces(a, |_, x| {
        if !x.supp_ut.is_empty() {
            return Ok(None);
        }
        let lambda = usize::from(x.d.plus != x.d.t);
        let rhs = x.l_r_plus + x.n_t_s + lambda;
        Ok(compare("size", x.size, rhs, format!("{} + {} + {lambda}", x.l_r_plus, x.n_t_s)))
    })
}

fn cardinality_two_maxima(a: &Analysis, two_point: bool) -> Result<Outcome, ExtensionError> {
    over_local_pieces(a, |l, x| {
        if x.supp_ut.len() != 1 || x.max_u != 2 || (x.supp_us == 2) != two_point {
            return Ok(None);
        }
        if two_point {
            let mp = 1 - x.supp_ut[0];
            let Some(v) = l.splitter(x.d.u, l.top(), &[mp])? else {
                return Ok(Some(Err("the splitter of uR ⊆ S at M' does not exist".into())));
            };
            let n_u_v = l.order.interval_size(x.d.u, v);
            let rhs = x.l_r_plus + x.n_t_s + x.l_u_t * n_u_v + 1;
            Ok(compare("size", x.size, rhs, format!("{} + {} + {}·{} + 1", x.l_r_plus, x.n_t_s, x.l_u_t, n_u_v)))
        } else {
            let rhs = x.l_r_plus + x.n_t_s + x.l_u_t + 1;
            Ok(compare("size", x.size, rhs, format!("{} + {} + {} + 1", x.l_r_plus, x.n_t_s, x.l_u_t)))
        }
    })
}

fn cardinality_two_point(a: &Analysis) -> Result<Outcome, ExtensionError> {
    cardinality_two_maxima(a, true)
}

fn cardinality_one_point(a: &Analysis) -> Result<Outcome, ExtensionError> {
    cardinality_two_maxima(a, false)
}

fn cardinality_local_u(a: &Analysis) -> Result<Outcome, ExtensionError> {
    over_local_pieces(a, |_, x| {
        if x.supp_ut.len() != 1 || x.max_u != 1 {
            return Ok(None);
        }
        let rhs = x.l_r_plus + x.n_t_s;
        Ok(compare("size", x.size, rhs, format!("{} + {}", x.l_r_plus, x.n_t_s)))
    })
}

// ---------------------------------------------------------------------------
// Fields and principal rings

fn finite_field_galois(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let (base, top) = (a.node(0), a.node(a.top()));
    let is_field = |s: &Subring| s.is_local() && s.locals[0].maximal.len() == 1;
    need!(is_field(base) && is_field(top), "R and S are not both fields");
    let q = base.len();
    let deg = |s: &Subring| crate::extension::log_exact(q, s.len());
    let Some(d) = deg(top) else {
        return Ok(Outcome::fail("|S| is not a power of |R|", Witness::new(vec![a.top()], "S")));
    };
    let (div, divisors) = FiniteLattice::divisors(d as u64);
    let degrees: Vec<Option<u32>> = a.lattice.nodes.iter().map(deg).collect();
    let mut image: Vec<u64> = degrees.iter().map(|x| x.map_or(0, u64::from)).collect();
    image.sort_unstable();
    if image != divisors {
        return Ok(Outcome::fail(format!("node degrees {image:?}, divisors {divisors:?}"), Witness::new(Vec::new(), "degrees")));
    }
    let o = a.order();
    let n = a.lattice.len();
    for x in 0..n {
        for y in 0..n {
            let (dx, dy) = (degrees[x].expect("degree"), degrees[y].expect("degree"));
            if o.leq(x, y) != (dy % dx == 0) {
                return Ok(Outcome::fail("inclusion differs from divisibility", Witness::new(vec![x, y], "subfields")));
            }
        }
    }
    let squarefree = (2..=d).all(|p| d % (p * p) != 0);
    let boolean = o.is_boolean()?;
    if !a.distributive() || boolean != squarefree || div.len() != n {
        return Ok(Outcome::fail(
            format!("distributive={} boolean={boolean} squarefree={squarefree}", a.distributive()),
            Witness::new(vec![0, a.top()], "whole interval"),
        ));
    }
    Ok(Outcome::pass(format!("degree {d}: divisor lattice, boolean={boolean}")).with_lhs(squarefree))
}

fn spir_quadratic(a: &Analysis) -> Result<Outcome, ExtensionError> {
    need!(a.lattice.len() > 1, "R = S");
    let ring = a.ring();
    let (base, top) = (a.node(0), a.node(a.top()));
    need!(base.is_local(), "R is not local");
    let m = &base.locals[0].maximal;
    let principal = m.iter().any(|x| ring.closure(&[x], &base.span, false) == *m);
    need!(principal, "the maximal ideal of R is not principal");
    let quadratic = top.members.iter().filter(|&t| !base.contains(t)).find(|&t| {
        let mut seeds = base.span.clone();
        seeds.extend(base.span.iter().map(|&g| ring.mul(g, t)));
        ring.additive_closure(&seeds).contains(ring.mul(t, t)) && a.extension.generated_subring(base, &[t]).len() == top.len()
    });
    need!(quadratic.is_some(), "S is not generated by a quadratic element");
    if !a.distributive() {
        return Ok(Outcome::fail("SPIR quadratic extension is not distributive", Witness::new(vec![0, a.top()], "whole interval")));
    }
    Ok(Outcome::pass(format!("S = R[{}] distributive", quadratic.expect("found"))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_are_unique_and_sorted() {
        let names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(names.len(), sorted.len());
    }

    #[test]
    fn witness_minimization_keeps_a_failing_core() {
        let w = minimize_witness(vec![1, 2, 3, 4], |ns| ns.contains(&3));
        assert_eq!(w, [3]);
    }
}
