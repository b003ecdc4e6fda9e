use super::{Dag, Edge, EdgeCoverage, GraphError, Node, NodeSet, Trek};

/// A d-connecting route from `i` to `j` given `K`: treks
/// `i <- .. -> k1, k1 <- .. -> k2, ..., ks <- .. -> j` through distinct
/// conditioning nodes, so that every collider lies in `K` and no other node
/// of `K` is touched. The left sides are pairwise disjoint, as are the right
/// sides. Unlike a [`super::Path`], a route may revisit nodes, e.g.
/// `1 -> 3 -> 4 <- 3 <- 2` given `{4}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Route {
    pub treks: Vec<Trek>,
}

impl Route {
    /// Every node touched by some trek of the route.
    pub fn nodes(&self) -> NodeSet {
        self.treks
            .iter()
            .fold(NodeSet::EMPTY, |acc, t| acc.union(t.left_nodes()).union(t.right_nodes()))
    }

    /// The conditioning nodes the route passes through, in order.
    pub fn colliders(&self) -> Vec<Node> {
        self.treks[1..].iter().map(Trek::leftmost).collect()
    }

    /// The node sequence of the underlying walk.
    pub fn walk(&self) -> Vec<Node> {
        let mut out = vec![self.treks[0].leftmost()];
        for t in &self.treks {
            out.extend(t.left.iter().rev().skip(1));
            out.extend(t.right.iter().skip(1));
        }
        out
    }

    pub fn uses_edge(&self, (a, b): Edge) -> bool {
        self.treks
            .iter()
            .any(|t| t.left_edges().chain(t.right_edges()).any(|e| e == (a, b)))
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let walk = self.walk();
        write!(f, "{}", walk[0])?;
        for t in &self.treks {
            for v in t.left.iter().rev().skip(1) {
                write!(f, " <- {v}")?;
            }
            for v in t.right.iter().skip(1) {
                write!(f, " -> {v}")?;
            }
        }
        Ok(())
    }
}

impl Dag {
    /// All d-connecting routes from `i` to `j` given `k`, ordered by their
    /// sequence of conditioning nodes and then by trek order.
    pub fn d_connecting_routes(&self, i: Node, j: Node, k: NodeSet) -> Result<Vec<Route>, GraphError> {
        self.check_node(i)?;
        self.check_node(j)?;
        self.check_set(k)?;
        if i == j || k.contains(i) || k.contains(j) {
            return Err(GraphError::OverlappingSets);
        }
        let mut out = Vec::new();
        let mut chain = Vec::new();
        self.extend_route(i, j, k, k, NodeSet::EMPTY, NodeSet::EMPTY, &mut chain, &mut out);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_route(
        &self,
        from: Node,
        j: Node,
        k: NodeSet,
        unused: NodeSet,
        used_left: NodeSet,
        used_right: NodeSet,
        chain: &mut Vec<Trek>,
        out: &mut Vec<Route>,
    ) {
        for to in unused.with(j) {
            for t in self.enumerate_treks(from, to) {
                let (l, r) = (t.left_nodes(), t.right_nodes());
                let k_ok = l.intersection(k).is_subset(NodeSet::singleton(from))
                    && r.intersection(k).is_subset(NodeSet::singleton(to));
                if !k_ok || !l.is_disjoint(used_left) || !r.is_disjoint(used_right) {
                    continue;
                }
                chain.push(t);
                if to == j {
                    out.push(Route { treks: chain.clone() });
                } else {
                    self.extend_route(to, j, k, unused.without(to), used_left.union(l), used_right.union(r), chain, out);
                }
                chain.pop();
            }
        }
    }

    /// Route analogue of [`Dag::edge_on_all_connecting_paths`].
    pub fn edge_on_all_connecting_routes(
        &self,
        i: Node,
        j: Node,
        k: NodeSet,
        (a, b): Edge,
    ) -> Result<EdgeCoverage, GraphError> {
        if !self.has_edge(a, b) {
            return Err(GraphError::MissingEdge(a, b));
        }
        let routes = self.d_connecting_routes(i, j, k)?;
        Ok(if routes.is_empty() {
            EdgeCoverage::Vacuous
        } else if routes.iter().all(|r| r.uses_edge((a, b))) {
            EdgeCoverage::Every
        } else {
            EdgeCoverage::NotEvery
        })
    }
}
