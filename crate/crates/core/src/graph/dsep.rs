use super::{Dag, Edge, GraphError, Node, NodeSet, Path};

/// Answer to "does every d-connecting path between i and j use this edge?".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeCoverage {
    Every,
    NotEvery,
    /// `i` and `j` are d-separated, so there is no d-connecting path to inspect.
    Vacuous,
}

impl Dag {
    /// Nodes reachable from `a` along trails that are active given `c`
    /// (Bayes-ball), excluding members of `c`.
    pub fn d_reachable(&self, a: NodeSet, c: NodeSet) -> NodeSet {
        let an_c = self.ancestors_of_set(c);
        let mut seen_up = NodeSet::EMPTY;
        let mut seen_down = NodeSet::EMPTY;
        let mut reachable = NodeSet::EMPTY;
        // `true` = ball arrived from a child and travels upward.
        let mut stack: Vec<(Node, bool)> = a.iter().map(|v| (v, true)).collect();
        while let Some((v, up)) = stack.pop() {
            let seen = if up { &mut seen_up } else { &mut seen_down };
            if seen.contains(v) {
                continue;
            }
            seen.insert(v);
            let blocked = c.contains(v);
            if !blocked {
                reachable.insert(v);
            }
            if up {
                if !blocked {
                    stack.extend(self.parents(v).iter().map(|p| (p, true)));
                    stack.extend(self.children(v).iter().map(|ch| (ch, false)));
                }
            } else {
                if !blocked {
                    stack.extend(self.children(v).iter().map(|ch| (ch, false)));
                }
                if an_c.contains(v) {
                    stack.extend(self.parents(v).iter().map(|p| (p, true)));
                }
            }
        }
        reachable
    }

    /// Whether `c` d-separates `a` from `b`. Linear in the size of the graph.
    pub fn d_separated(&self, a: NodeSet, b: NodeSet, c: NodeSet) -> Result<bool, GraphError> {
        for s in [a, b, c] {
            self.check_set(s)?;
        }
        if a.is_empty() || b.is_empty() {
            return Err(GraphError::InvalidArgument(
                "d-separation needs nonempty end sets".into(),
            ));
        }
        if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
            return Err(GraphError::OverlappingSets);
        }
        Ok(self.d_reachable(a, c).is_disjoint(b))
    }

    /// Shorthand for the elementary statement `i ⊥ j | k`.
    pub fn d_separated_pair(&self, i: Node, j: Node, k: NodeSet) -> Result<bool, GraphError> {
        self.d_separated(NodeSet::singleton(i), NodeSet::singleton(j), k)
    }

    fn check_endpoints(&self, i: Node, j: Node, k: NodeSet) -> Result<(), GraphError> {
        self.check_node(i)?;
        self.check_node(j)?;
        self.check_set(k)?;
        if i == j || k.contains(i) || k.contains(j) {
            return Err(GraphError::OverlappingSets);
        }
        Ok(())
    }

    /// All simple paths from `i` to `j` that are d-connecting given `k`:
    /// colliders lie in `k` or have a descendant there, non-colliders avoid `k`.
    /// Returned in lexicographic order of their node sequences.
    pub fn d_connecting_paths(&self, i: Node, j: Node, k: NodeSet) -> Result<Vec<Path>, GraphError> {
        self.check_endpoints(i, j, k)?;
        let an_k = self.ancestors_of_set(k);
        let mut out = Vec::new();
        let mut path = vec![i];
        self.extend_connecting(&mut path, NodeSet::singleton(i), j, k, an_k, &mut out);
        Ok(out)
    }

    fn extend_connecting(
        &self,
        path: &mut Vec<Node>,
        on_path: NodeSet,
        target: Node,
        k: NodeSet,
        an_k: NodeSet,
        out: &mut Vec<Path>,
    ) {
        let u = *path.last().unwrap();
        let prev = (path.len() >= 2).then(|| path[path.len() - 2]);
        for w in self.neighbors(u).difference(on_path) {
            if let Some(p) = prev {
                let collider = self.has_edge(p, u) && self.has_edge(w, u);
                let open = if collider { an_k.contains(u) } else { !k.contains(u) };
                if !open {
                    continue;
                }
            }
            path.push(w);
            if w == target {
                out.push(Path(path.clone()));
            } else {
                self.extend_connecting(path, on_path.with(w), target, k, an_k, out);
            }
            path.pop();
        }
    }

    /// Whether every d-connecting path between `i` and `j` given `k` steps
    /// across the edge `a -> b`.
    pub fn edge_on_all_connecting_paths(
        &self,
        i: Node,
        j: Node,
        k: NodeSet,
        (a, b): Edge,
    ) -> Result<EdgeCoverage, GraphError> {
        if !self.has_edge(a, b) {
            return Err(GraphError::MissingEdge(a, b));
        }
        let paths = self.d_connecting_paths(i, j, k)?;
        Ok(if paths.is_empty() {
            EdgeCoverage::Vacuous
        } else if paths.iter().all(|p| p.traverses(a, b)) {
            EdgeCoverage::Every
        } else {
            EdgeCoverage::NotEvery
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn set(v: &[Node]) -> NodeSet {
        v.iter().collect()
    }

    #[test]
    fn running_example_separations() {
        let g = running_example();
        assert!(g.d_separated(set(&[1]), set(&[3]), set(&[])).unwrap());
        assert!(!g.d_separated(set(&[1]), set(&[5]), set(&[4])).unwrap());
        assert!(g.d_separated(set(&[1]), set(&[4]), set(&[2])).unwrap());
        assert!(g.d_separated(set(&[1, 2]), set(&[5]), set(&[3, 4])).unwrap());
        assert!(!g.d_separated(set(&[1]), set(&[3]), set(&[4])).unwrap());
    }

    #[test]
    fn isolated_nodes_always_separated() {
        let g = Dag::empty(3).unwrap();
        for c in [set(&[]), set(&[3])] {
            assert!(g.d_separated(set(&[1]), set(&[2]), c).unwrap());
        }
    }

    #[test]
    fn overlapping_sets_rejected() {
        let g = running_example();
        assert_eq!(
            g.d_separated(set(&[1]), set(&[1, 2]), set(&[])),
            Err(GraphError::OverlappingSets)
        );
        assert_eq!(
            g.d_separated(set(&[1]), set(&[2]), set(&[1])),
            Err(GraphError::OverlappingSets)
        );
    }

    #[test]
    fn connecting_paths_examples() {
        let g = running_example();
        let paths = g.d_connecting_paths(1, 5, set(&[4])).unwrap();
        assert_eq!(paths, vec![Path(vec![1, 2, 4, 3, 5])]);
        assert!(g.d_connecting_paths(1, 3, set(&[])).unwrap().is_empty());
        assert!(chain3().d_connecting_paths(1, 3, set(&[2])).unwrap().is_empty());
        assert_eq!(
            diamond().d_connecting_paths(1, 4, set(&[])).unwrap(),
            vec![Path(vec![1, 2, 4]), Path(vec![1, 3, 4])]
        );
    }

    #[test]
    fn collider_with_descendant_in_conditioning_set_opens() {
        // 1 -> 3 <- 2, 3 -> 4; conditioning on 4 opens the collider at 3.
        let g = Dag::new(4, [(1, 3), (2, 3), (3, 4)]).unwrap();
        assert_eq!(
            g.d_connecting_paths(1, 2, set(&[4])).unwrap(),
            vec![Path(vec![1, 3, 2])]
        );
        assert!(!g.d_separated_pair(1, 2, set(&[4])).unwrap());
        assert!(g.d_separated_pair(1, 2, set(&[])).unwrap());
    }

    #[test]
    fn edge_coverage() {
        let g = running_example();
        assert_eq!(
            g.edge_on_all_connecting_paths(1, 2, set(&[5]), (1, 2)).unwrap(),
            EdgeCoverage::Every
        );
        assert_eq!(
            g.edge_on_all_connecting_paths(1, 5, set(&[4]), (3, 4)).unwrap(),
            EdgeCoverage::Every
        );
        assert_eq!(
            diamond().edge_on_all_connecting_paths(1, 4, set(&[]), (2, 4)).unwrap(),
            EdgeCoverage::NotEvery
        );
        assert_eq!(
            g.edge_on_all_connecting_paths(1, 3, set(&[]), (1, 2)).unwrap(),
            EdgeCoverage::Vacuous
        );
        assert_eq!(
            g.edge_on_all_connecting_paths(1, 3, set(&[]), (2, 1)),
            Err(GraphError::MissingEdge(2, 1))
        );
    }
}
