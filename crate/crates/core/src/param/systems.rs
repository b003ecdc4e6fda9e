use super::{trek_monomial, ParamError};
use crate::graph::{Dag, NodeSet, Trek};
use crate::poly::Monomial;

/// A family of treks whose leftmost nodes exhaust one set and whose
/// rightmost nodes exhaust another. Treks are kept sorted by leftmost node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrekSystem {
    pub treks: Vec<Trek>,
}

impl TrekSystem {
    pub fn left_targets(&self) -> NodeSet {
        self.treks.iter().map(Trek::leftmost).collect()
    }

    pub fn right_targets(&self) -> NodeSet {
        self.treks.iter().map(Trek::rightmost).collect()
    }

    pub fn monomial(&self) -> Monomial {
        self.treks
            .iter()
            .fold(Monomial::one(), |acc, t| acc.mul(&trek_monomial(t)))
    }

    /// Left sides pairwise node-disjoint and right sides pairwise node-disjoint.
    pub fn has_no_sided_intersection(&self) -> bool {
        let mut left = NodeSet::EMPTY;
        let mut right = NodeSet::EMPTY;
        for t in &self.treks {
            let (l, r) = (t.left_nodes(), t.right_nodes());
            if !l.is_disjoint(left) || !r.is_disjoint(right) {
                return false;
            }
            left = left.union(l);
            right = right.union(r);
        }
        true
    }
}

impl std::fmt::Display for TrekSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, t) in self.treks.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// Every trek system from `a` to `b` with no sided intersection.
pub fn trek_systems_nsi(g: &Dag, a: NodeSet, b: NodeSet) -> Result<Vec<TrekSystem>, ParamError> {
    g.check_set(a)?;
    g.check_set(b)?;
    if a.len() != b.len() {
        return Err(ParamError::SizeMismatch(a.len(), b.len()));
    }
    // treks[s][t]: treks from the s-th source to node t.
    let treks: Vec<Vec<Vec<Trek>>> = a
        .iter()
        .map(|s| (0..=g.n()).map(|t| if b.contains(t) { g.enumerate_treks(s, t) } else { Vec::new() }).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(treks.len());
    extend(&treks, b, NodeSet::EMPTY, NodeSet::EMPTY, &mut chosen, &mut out);
    Ok(out)
}

fn extend(
    treks: &[Vec<Vec<Trek>>],
    free_targets: NodeSet,
    used_left: NodeSet,
    used_right: NodeSet,
    chosen: &mut Vec<Trek>,
    out: &mut Vec<TrekSystem>,
) {
    let Some((from_s, rest)) = treks.split_first() else {
        out.push(TrekSystem { treks: chosen.clone() });
        return;
    };
    for t in free_targets {
        for trek in &from_s[t] {
            let (l, r) = (trek.left_nodes(), trek.right_nodes());
            if !l.is_disjoint(used_left) || !r.is_disjoint(used_right) {
                continue;
            }
            chosen.push(trek.clone());
            extend(rest, free_targets.without(t), used_left.union(l), used_right.union(r), chosen, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::running_example;
    use crate::graph::Node;

    fn set(v: &[Node]) -> NodeSet {
        v.iter().collect()
    }

    fn up_down_graph() -> Dag {
        Dag::new(
            9,
            [(1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (3, 7), (6, 7), (6, 8), (4, 8), (4, 9)],
        )
        .unwrap()
    }

    #[test]
    fn up_down_cycle_systems() {
        let g = up_down_graph();
        let systems = trek_systems_nsi(&g, set(&[5, 7, 8]), set(&[7, 8, 9])).unwrap();
        let rendered: Vec<String> = systems.iter().map(|s| s.to_string()).collect();
        let rendered_expected = |k: usize| {
            [
                "{5 <- 3 -> 7, 7 <- 6 -> 8, 8 <- 4 -> 9}",
                "{5 <- 3 <- 1 -> 4 -> 9, 7 <- 6 -> 8, 8 <- 4 <- 2 -> 3 -> 7}",
                "{5 <- 3 <- 2 -> 4 -> 9, 7 <- 6 -> 8, 8 <- 4 <- 1 -> 3 -> 7}",
            ][k]
            .to_string()
        };
        for k in 0..3 {
            assert!(rendered.contains(&rendered_expected(k)), "missing {}", rendered_expected(k));
        }
        let find = |k: usize| &systems[rendered.iter().position(|r| r == &rendered_expected(k)).unwrap()];
        assert_eq!(find(1).monomial(), find(2).monomial());
        assert_ne!(find(0).monomial(), find(1).monomial());
        assert!(systems.iter().all(TrekSystem::has_no_sided_intersection));
        assert!(systems.iter().all(|s| s.left_targets() == set(&[5, 7, 8]) && s.right_targets() == set(&[7, 8, 9])));
    }

    #[test]
    fn unique_system_for_monomial_minor() {
        let systems = trek_systems_nsi(&running_example(), set(&[1, 4]), set(&[4, 5])).unwrap();
        assert_eq!(systems.len(), 1);
        assert_eq!(systems[0].to_string(), "{1 -> 2 -> 4, 4 <- 3 -> 5}");
        let single = trek_systems_nsi(&Dag::empty(2).unwrap(), set(&[2]), set(&[2])).unwrap();
        assert_eq!(single, vec![TrekSystem { treks: vec![Trek::empty_at(2)] }]);
        assert!(trek_systems_nsi(&running_example(), set(&[1]), set(&[1, 2])).is_err());
    }
}
