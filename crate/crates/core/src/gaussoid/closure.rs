use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use super::{Bits, CiStructure, GaussoidError, Universe, MAX_GAUSSOID_NODES};
use crate::graph::{Node, NodeSet};

/// The four gaussoid rules, for distinct `i, j, k` and `L` avoiding them:
///
/// 1. `ij|L` and `ik|jL` give `ik|L` and `ij|kL`
/// 2. `ij|kL` and `ik|jL` give `ij|L` and `ik|L`
/// 3. `ij|L` and `ik|L` give `ij|kL` and `ik|jL`
/// 4. `ij|L` and `ij|kL` give `ik|L` or `jk|L`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    Semigraphoid,
    Intersection,
    Composition,
    WeakTransitivity,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::Semigraphoid, Axiom::Intersection, Axiom::Composition, Axiom::WeakTransitivity];

    pub fn is_disjunctive(self) -> bool {
        self == Axiom::WeakTransitivity
    }
}

/// One instantiation of an axiom, as positions in the statement universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomInstance {
    pub axiom: Axiom,
    pub premises: [usize; 2],
    pub conclusions: [usize; 2],
}

struct Instances {
    all: Vec<AxiomInstance>,
    horn: Vec<(Bits, Bits)>,
    disjunctive: Vec<(Bits, [usize; 2])>,
}

fn instances(n: usize) -> Result<&'static Instances, GaussoidError> {
    static CACHE: [OnceLock<Instances>; MAX_GAUSSOID_NODES + 1] = [const { OnceLock::new() }; MAX_GAUSSOID_NODES + 1];
    let u = Universe::get(n)?;
    Ok(CACHE[n].get_or_init(|| build_instances(u)))
}

fn build_instances(u: &Universe) -> Instances {
    let n = u.n;
    let mut all = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let rest = NodeSet::full(n).without(i).without(j).without(k);
                for l in rest.subsets() {
                    let s = |a: Node, b: Node, c: NodeSet| u.index(a, b, c);
                    let (jl, kl) = (l.with(j), l.with(k));
                    let rules = [
                        (Axiom::Semigraphoid, [s(i, j, l), s(i, k, jl)], [s(i, k, l), s(i, j, kl)]),
                        (Axiom::Intersection, [s(i, j, kl), s(i, k, jl)], [s(i, j, l), s(i, k, l)]),
                        (Axiom::Composition, [s(i, j, l), s(i, k, l)], [s(i, j, kl), s(i, k, jl)]),
                        (Axiom::WeakTransitivity, [s(i, j, l), s(i, j, kl)], [s(i, k, l), s(j, k, l)]),
                    ];
                    for (axiom, premises, conclusions) in rules {
                        all.push(AxiomInstance { axiom, premises, conclusions });
                    }
                }
            }
        }
    }
    let pair = |[a, b]: [usize; 2]| Bits::default().with(a).with(b);
    let horn = all
        .iter()
        .filter(|x| !x.axiom.is_disjunctive())
        .map(|x| (pair(x.premises), pair(x.conclusions)))
        .collect();
    let disjunctive = all
        .iter()
        .filter(|x| x.axiom.is_disjunctive())
        .map(|x| (pair(x.premises), x.conclusions))
        .collect();
    Instances { all, horn, disjunctive }
}

/// All instantiations on `1..=n`, over ordered triples `(i, j, k)`.
pub fn axiom_instances(n: usize) -> Result<Vec<AxiomInstance>, GaussoidError> {
    Ok(instances(n)?.all.clone())
}

/// The gaussoids reachable from a structure by resolving every firing
/// disjunction both ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureResult {
    /// Minimal closed structures containing the input, sorted. Every gaussoid
    /// containing the input contains one of them.
    pub branches: Vec<CiStructure>,
    /// Statements present in every branch.
    pub common: CiStructure,
}

impl ClosureResult {
    pub fn is_single_branch(&self) -> bool {
        self.branches.len() == 1
    }
}

pub fn close(s: &CiStructure) -> Result<ClosureResult, GaussoidError> {
    let inst = instances(s.n())?;
    let mut memo = HashMap::new();
    let leaves = expand(inst, s.bits(), &mut memo);
    let common = leaves.iter().fold(leaves[0], |acc, &b| acc.intersection(b));
    Ok(ClosureResult {
        branches: leaves.into_iter().map(|b| CiStructure::from_bits(s.n(), b)).collect(),
        common: CiStructure::from_bits(s.n(), common),
    })
}

fn horn_closure(inst: &Instances, mut bits: Bits) -> Bits {
    loop {
        let before = bits;
        for &(premises, conclusions) in &inst.horn {
            if premises.is_subset(bits) {
                bits = bits.union(conclusions);
            }
        }
        if bits == before {
            return bits;
        }
    }
}

fn expand(inst: &Instances, bits: Bits, memo: &mut HashMap<Bits, Vec<Bits>>) -> Vec<Bits> {
    let closed = horn_closure(inst, bits);
    if let Some(done) = memo.get(&closed) {
        return done.clone();
    }
    let open = inst
        .disjunctive
        .iter()
        .find(|&&(p, [a, b])| p.is_subset(closed) && !closed.contains(a) && !closed.contains(b));
    let leaves = match open {
        None => vec![closed],
        Some(&(_, [a, b])) => {
            let mut out = expand(inst, closed.with(a), memo);
            out.extend(expand(inst, closed.with(b), memo));
            minimal(out)
        }
    };
    memo.insert(closed, leaves.clone());
    leaves
}

fn minimal(mut sets: Vec<Bits>) -> Vec<Bits> {
    sets.sort_by_key(|b| (b.count(), *b));
    sets.dedup();
    let mut out: Vec<Bits> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|o| o.is_subset(s)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::super::structure;
    use super::*;

    fn is_gaussoid(s: &CiStructure) -> bool {
        axiom_instances(s.n()).unwrap().iter().all(|x| {
            let fires = x.premises.iter().all(|&p| s.bits().contains(p));
            let [a, b] = x.conclusions;
            !fires
                || if x.axiom.is_disjunctive() {
                    s.bits().contains(a) || s.bits().contains(b)
                } else {
                    s.bits().contains(a) && s.bits().contains(b)
                }
        })
    }

    #[test]
    fn instance_counts_at_four_nodes() {
        let all = axiom_instances(4).unwrap();
        for axiom in Axiom::ALL {
            assert_eq!(all.iter().filter(|x| x.axiom == axiom).count(), 48);
        }
    }

    #[test]
    fn semigraphoid_example_on_five_nodes() {
        let s = structure(5, &["2 _||_ 4 | 5", "1 _||_ 4 | {2,5}"]);
        let r = close(&s).unwrap();
        for derived in ["1 _||_ 4 | 5", "2 _||_ 4 | {1,5}"] {
            assert!(r.common.contains(&derived.parse().unwrap()), "{derived}");
        }
        assert_eq!(r.common.len(), 4);
    }

    #[test]
    fn empty_input_is_closed() {
        let r = close(&CiStructure::empty(4).unwrap()).unwrap();
        assert!(r.is_single_branch());
        assert!(r.common.is_empty());
    }

    #[test]
    fn weak_transitivity_branches() {
        let s = structure(3, &["1 _||_ 2", "1 _||_ 2 | 3"]);
        let r = close(&s).unwrap();
        assert_eq!(r.branches.len(), 2);
        for b in &r.branches {
            assert!(is_gaussoid(b));
            assert!(s.is_subset(b));
        }
        assert_eq!(r.common, s);
    }

    #[test]
    fn branches_are_gaussoids_containing_input() {
        let s = structure(4, &["1 _||_ 2 | 3", "1 _||_ 2 | {3,4}", "3 _||_ 4"]);
        let r = close(&s).unwrap();
        for b in &r.branches {
            assert!(is_gaussoid(b));
            assert!(s.is_subset(b));
            assert!(r.common.is_subset(b));
        }
    }
}
