//! Brute-force reference computations used to produce `[DERIVED]`
//! expectations. Nothing here reuses the enumeration or lattice code of the
//! core crate: subrings are found by naive saturation under `+` and `·`,
//! and lattice facts come from scanning the inclusion order directly.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use ringlattice_core::{Elem, FiniteRing};

use crate::catalog::Value;

/// Largest ambient ring the oracle is run on.
pub const ORACLE_RING_LIMIT: usize = 256;

/// Smallest subset containing `seed` and 1, closed under `+` and `·`.
fn saturate(ring: &FiniteRing, seed: &[Elem]) -> Vec<bool> {
    let n = ring.size();
    let mut inside = vec![false; n];
    let mut members: Vec<Elem> = Vec::new();
    let mut work: Vec<Elem> = seed.to_vec();
    work.push(ring.one());
    work.push(0);
    while let Some(x) = work.pop() {
        if inside[x as usize] {
            continue;
        }
        inside[x as usize] = true;
        members.push(x);
        for &y in &members {
            for z in [ring.add(x, y), ring.mul(x, y)] {
                if !inside[z as usize] {
                    work.push(z);
                }
            }
        }
    }
    inside
}

fn to_elems(set: &[bool]) -> Vec<Elem> {
    set.iter().enumerate().filter(|p| *p.1).map(|p| p.0 as Elem).collect()
}

/// All subrings of `ring` containing `base`, found by adjoining one element
/// at a time until nothing new appears.
pub fn subrings_containing(ring: &FiniteRing, base: &[Elem]) -> Vec<Vec<bool>> {
    let start = saturate(ring, base);
    let mut found: BTreeMap<Vec<bool>, ()> = BTreeMap::new();
    found.insert(start.clone(), ());
    let mut queue = vec![start];
    while let Some(t) = queue.pop() {
        let members = to_elems(&t);
        for s in 0..ring.size() {
            if t[s] {
                continue;
            }
            let mut seed = members.clone();
            seed.push(s as Elem);
            let u = saturate(ring, &seed);
            if found.insert(u.clone(), ()).is_none() {
                queue.push(u);
            }
        }
    }
    found.into_keys().collect()
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !*x || *y)
}

/// Lattice facts computed from the raw family of subrings.
pub fn facts(ring: &FiniteRing, base: &[Elem]) -> BTreeMap<String, Value> {
    let sets = subrings_containing(ring, base);
    let n = sets.len();
    let le: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| subset(&sets[i], &sets[j])).collect()).collect();
    let index: BTreeMap<&Vec<bool>, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let meet = |i: usize, j: usize| -> usize {
        let s: Vec<bool> = sets[i].iter().zip(&sets[j]).map(|(a, b)| *a && *b).collect();
        index[&s]
    };
    let mut join_table = vec![vec![usize::MAX; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut seed = to_elems(&sets[i]);
            seed.extend(to_elems(&sets[j]));
            join_table[i][j] = index[&saturate(ring, &seed)];
        }
    }
    let join = |i: usize, j: usize| join_table[i][j];
    let mut distributive = true;
    let mut modular = true;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if meet(x, join(y, z)) != join(meet(x, y), meet(x, z)) {
                    distributive = false;
                }
                if le[x][z] && join(x, meet(y, z)) != meet(join(x, y), z) {
                    modular = false;
                }
            }
        }
    }
    // Shortest and longest chain between every comparable pair.
    let covers = |i: usize, j: usize| i != j && le[i][j] && (0..n).all(|k| k == i || k == j || !(le[i][k] && le[k][j]));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| sets[i].iter().filter(|b| **b).count());
    let mut shortest = vec![vec![usize::MAX; n]; n];
    let mut longest = vec![vec![0usize; n]; n];
    for &i in &order {
        shortest[i][i] = 0;
        for &j in &order {
            if i == j || !le[i][j] {
                continue;
            }
            for k in 0..n {
                if covers(k, j) && le[i][k] && shortest[i][k] != usize::MAX {
                    shortest[i][j] = shortest[i][j].min(shortest[i][k] + 1);
                    longest[i][j] = longest[i][j].max(longest[i][k] + 1);
                }
            }
        }
    }
    let bottom = order[0];
    let top = order[n - 1];
    let catenarian = (0..n).all(|i| (0..n).all(|j| !le[i][j] || shortest[i][j] == longest[i][j]));
    let chained = (0..n).all(|i| (0..n).all(|j| le[i][j] || le[j][i]));
    let mut out = BTreeMap::new();
    out.insert("nodes".to_string(), Value::Int(n as u64));
    out.insert("length".to_string(), Value::Int(longest[bottom][top] as u64));
    out.insert("distributive".to_string(), Value::Bool(distributive));
    out.insert("modular".to_string(), Value::Bool(modular));
    out.insert("catenarian".to_string(), Value::Bool(catenarian));
    out.insert("chained".to_string(), Value::Bool(chained));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_algebra_of_rank_three_has_five_subrings() {
        let f2 = FiniteRing::zmod(2, 64).unwrap();
        let s = FiniteRing::product(&[&f2, &f2, &f2], 64).unwrap();
        let f = facts(&s, &[]);
        assert_eq!(f["nodes"], Value::Int(5));
        assert_eq!(f["length"], Value::Int(2));
        assert_eq!(f["distributive"], Value::Bool(false));
        assert_eq!(f["modular"], Value::Bool(true));
    }

    #[test]
    fn subfields_of_f64() {
        let f = facts(&FiniteRing::gf(2, 6, 64).unwrap(), &[]);
        assert_eq!(f["nodes"], Value::Int(4));
        assert_eq!(f["chained"], Value::Bool(false));
        assert_eq!(f["distributive"], Value::Bool(true));
    }
}
