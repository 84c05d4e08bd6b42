//! Structured description of an analysed extension, shared by the text
//! output, the JSON export and the DOT export.

use std::collections::BTreeMap;

use serde::Serialize;

use ringlattice_core::verify::Analysis;
use ringlattice_core::{Elem, PredicateReport};

use crate::build::BuiltInstance;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NodeInfo {
    pub id: usize,
    pub label: String,
    pub size: usize,
    /// Generators over the base ring.
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EdgeInfo {
    pub from: usize,
    pub to: usize,
    /// `i`, `d` or `r`.
    #[serde(rename = "type")]
    pub kind: char,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NodeRef {
    pub id: usize,
    pub label: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Decomposition {
    pub seminormalization: NodeRef,
    pub t_closure: NodeRef,
    pub u_closure: NodeRef,
    pub co_subintegral_closure: Option<NodeRef>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessInfo {
    pub kind: String,
    pub nodes: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Verdicts {
    pub distributive: bool,
    pub modular: bool,
    pub boolean: bool,
    pub catenarian: bool,
    pub chained: bool,
    pub b2: bool,
    pub witness: Option<WitnessInfo>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub instance: String,
    pub ring_size: usize,
    pub base_size: usize,
    pub node_count: usize,
    pub length: usize,
    pub nodes: Vec<NodeInfo>,
    pub edges: Vec<EdgeInfo>,
    pub atoms: Vec<usize>,
    pub decomposition: Decomposition,
    /// Empty when `R = S`.
    pub flags: BTreeMap<String, bool>,
    pub loewy_series: Vec<usize>,
    pub verdicts: Verdicts,
    /// Number of maximal ideals of `S` over each maximal ideal of `R`.
    pub fiber_sizes: Vec<usize>,
    pub support_size: usize,
}

impl Summary {
    pub fn new(name: &str, built: &BuiltInstance, a: &Analysis) -> Summary {
        let l = &a.lattice;
        let ring = a.ring();
        let describe = |x: Elem| built.describe(x);
        // Generators are picked greedily from the simplest descriptions up.
        let mut by_text: Vec<(usize, String, Elem)> = (0..ring.size() as Elem)
            .filter(|&x| !l.nodes[0].contains(x))
            .map(|x| {
                let d = describe(x);
                (d.len(), d, x)
            })
            .collect();
        by_text.sort();
        let nodes: Vec<NodeInfo> = (0..l.len())
            .map(|i| {
                let node = &l.nodes[i];
                let mut seeds = l.nodes[0].span.clone();
                let mut cur = l.nodes[0].members.clone();
                let mut gens = Vec::new();
                for (_, d, x) in &by_text {
                    if cur.len() == node.len() {
                        break;
                    }
                    if node.contains(*x) && !cur.contains(*x) {
                        seeds.push(*x);
                        cur = ring.closure(&seeds, &seeds, true);
                        gens.push(d.clone());
                    }
                }
                let label = if gens.is_empty() { "R".to_string() } else { format!("R[{}]", gens.join(", ")) };
                NodeInfo { id: i, label, size: node.len(), generators: gens }
            })
            .collect();
        let node_ref = |i: usize| NodeRef { id: i, label: nodes[i].label.clone() };
        let d = a.decomposition;
        let flags = match &a.flags {
            PredicateReport::Trivial => BTreeMap::new(),
            PredicateReport::Proper(f) => f.named().iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        };
        let v = &a.verdict;
        Summary {
            instance: name.to_string(),
            ring_size: ring.size(),
            base_size: l.nodes[0].len(),
            node_count: l.len(),
            length: v.length,
            edges: a.edges.iter().map(|(&(from, to), t)| EdgeInfo { from, to, kind: t.letter() }).collect(),
            atoms: l.order.atoms().to_vec(),
            decomposition: Decomposition {
                seminormalization: node_ref(d.plus),
                t_closure: node_ref(d.t),
                u_closure: node_ref(d.u),
                co_subintegral_closure: d.cosub.map(node_ref),
            },
            flags,
            loewy_series: a.loewy.clone(),
            verdicts: Verdicts {
                distributive: v.distributive,
                modular: v.modular,
                boolean: v.boolean_lattice,
                catenarian: v.catenarian,
                chained: v.chained,
                b2: v.is_b2,
                witness: v.witness.as_ref().map(|w| WitnessInfo { kind: w.kind().to_string(), nodes: w.nodes().to_vec() }),
            },
            fiber_sizes: a.fiber_sizes(),
            support_size: a.msupp.len(),
            nodes,
        }
    }

    pub fn label(&self, i: usize) -> &str {
        &self.nodes[i].label
    }

    /// Type letter of the edge between the nodes with these labels.
    pub fn edge_type(&self, from: &str, to: &str) -> Option<char> {
        let f = self.nodes.iter().find(|n| n.label == from)?.id;
        let t = self.nodes.iter().find(|n| n.label == to)?.id;
        self.edges.iter().find(|e| e.from == f && e.to == t).map(|e| e.kind)
    }

    /// Plain-text report printed by `analyze`.
    pub fn text(&self) -> String {
        let mut out = String::new();
        let yes = |b: bool| if b { "yes" } else { "no" };
        out.push_str(&format!("instance {}: |S| = {}, |R| = {}\n", self.instance, self.ring_size, self.base_size));
        out.push_str(&format!("{} intermediate rings, length {}\n", self.node_count, self.length));
        out.push_str("nodes:\n");
        for n in &self.nodes {
            out.push_str(&format!("  {:>3}  {} ({} elements)\n", n.id, n.label, n.size));
        }
        out.push_str("minimal steps:\n");
        for e in &self.edges {
            out.push_str(&format!("  {} -> {}  {}\n", self.label(e.from), self.label(e.to), e.kind));
        }
        let names = |ids: &[usize]| ids.iter().map(|&i| self.label(i).to_string()).collect::<Vec<_>>().join(", ");
        out.push_str(&format!("atoms: {}\n", names(&self.atoms)));
        let d = &self.decomposition;
        out.push_str(&format!("seminormalization: {}\n", d.seminormalization.label));
        out.push_str(&format!("t-closure: {}\n", d.t_closure.label));
        out.push_str(&format!("u-closure: {}\n", d.u_closure.label));
        out.push_str(&format!(
            "co-subintegral closure: {}\n",
            d.co_subintegral_closure.as_ref().map_or("none", |n| n.label.as_str())
        ));
        if self.flags.is_empty() {
            out.push_str("properties: R = S\n");
        } else {
            out.push_str("properties:\n");
            for (k, v) in &self.flags {
                out.push_str(&format!("  {k}: {}\n", yes(*v)));
            }
        }
        out.push_str(&format!("Loewy series: {}\n", names(&self.loewy_series)));
        let v = &self.verdicts;
        out.push_str(&format!(
            "distributive: {}\nmodular: {}\nboolean: {}\ncatenarian: {}\nchained: {}\nB2: {}\n",
            yes(v.distributive),
            yes(v.modular),
            yes(v.boolean),
            yes(v.catenarian),
            yes(v.chained),
            yes(v.b2)
        ));
        if let Some(w) = &v.witness {
            out.push_str(&format!("witness: {}{{{}}}\n", w.kind, names(&w.nodes)));
        }
        out.push_str(&format!("fiber sizes: {:?}\n", self.fiber_sizes));
        out
    }

    /// Hasse diagram in DOT. Nodes are listed in canonical order.
    pub fn dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for n in &self.nodes {
            out.push_str(&format!("  n{} [label=\"{}\"];\n", n.id, dot_escape(&n.label)));
        }
        for e in &self.edges {
            out.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", e.from, e.to, e.kind));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
