use super::{Bits, CiStructure, GaussoidError};
use crate::graph::{Node, NodeSet};

/// All permutations of `1..=n` as images `p[v - 1]`, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<Node>> {
    let mut out = Vec::new();
    let mut current: Vec<Node> = (1..=n).collect();
    loop {
        out.push(current.clone());
        // Next permutation in lexicographic order.
        let Some(k) = (1..n).rev().find(|&k| current[k - 1] < current[k]) else {
            return out;
        };
        let l = (k..n).rev().find(|&l| current[k - 1] < current[l]).unwrap();
        current.swap(k - 1, l);
        current[k..].reverse();
    }
}

/// Applies `v -> perm[v - 1]` to every statement.
pub fn relabel(s: &CiStructure, perm: &[Node]) -> Result<CiStructure, GaussoidError> {
    let n = s.n();
    let valid = perm.len() == n && perm.iter().copied().collect::<NodeSet>() == NodeSet::full(n);
    if !valid {
        return Err(GaussoidError::Graph(crate::graph::GraphError::InvalidArgument(format!(
            "{perm:?} is not a permutation of 1..={n}"
        ))));
    }
    let u = s.universe();
    let mut bits = Bits::default();
    for k in s.bits().iter() {
        let (i, j, l) = u.statement(k);
        let image: NodeSet = l.iter().map(|v| perm[v - 1]).collect();
        bits.insert(u.index(perm[i - 1], perm[j - 1], image));
    }
    Ok(CiStructure::from_bits(n, bits))
}

/// The relabeling whose sorted statement list is lexicographically least.
/// Two structures are equal up to relabeling iff their canonical forms agree.
pub fn canonical_form(s: &CiStructure) -> CiStructure {
    let key = |c: &CiStructure| c.bits().iter().collect::<Vec<usize>>();
    permutations(s.n())
        .iter()
        .map(|p| relabel(s, p).expect("generated permutations are valid"))
        .min_by_key(key)
        .expect("at least the identity")
}
