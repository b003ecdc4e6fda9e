//! Directed acyclic graphs over nodes `1..=n`, with reachability,
//! d-separation, d-connecting path enumeration and trek enumeration.

mod dsep;
mod enumerate;
mod format;
mod nodeset;
mod routes;
mod trek;

use thiserror::Error;

pub use dsep::EdgeCoverage;
pub use enumerate::{all_dags, random_dag};
pub use nodeset::{NodeSet, NodeSetIter, MAX_NODES};
pub use routes::Route;
pub use trek::Trek;

/// Node ids are 1-based, matching the usual `[n]` notation.
pub type Node = usize;

/// A directed edge `a -> b`.
pub type Edge = (Node, Node);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} is outside 1..={n}")]
    NodeOutOfRange { node: Node, n: usize },
    #[error("{0} nodes requested but at most {MAX_NODES} are supported")]
    TooManyNodes(usize),
    #[error("self-loop at node {0}")]
    SelfLoop(Node),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(Node, Node),
    #[error("edge set contains a directed cycle")]
    Cycle,
    #[error("edge {0} -> {1} is not in the graph")]
    MissingEdge(Node, Node),
    #[error("node sets must be pairwise disjoint")]
    OverlappingSets,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("exhaustive enumeration is limited to {limit} nodes, got {n}")]
    EnumerationTooLarge { n: usize, limit: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl GraphError {
    /// The input is well formed but exceeds a size guard.
    pub fn is_size_limit(&self) -> bool {
        matches!(self, GraphError::TooManyNodes(_) | GraphError::EnumerationTooLarge { .. })
    }
}

/// A simple path, stored as its node sequence; orientations come from the [`Dag`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Node>);

impl Path {
    pub fn nodes(&self) -> &[Node] {
        &self.0
    }

    pub fn node_set(&self) -> NodeSet {
        self.0.iter().collect()
    }

    /// True if the path steps between `a` and `b` in either direction.
    pub fn traverses(&self, a: Node, b: Node) -> bool {
        self.0
            .windows(2)
            .any(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dag {
    n: usize,
    edges: Vec<Edge>,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
}

impl Dag {
    /// Builds a DAG on `1..=n`. Edges may come in any order; they are stored sorted.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes(n));
        }
        let mut parents = vec![NodeSet::EMPTY; n];
        let mut children = vec![NodeSet::EMPTY; n];
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::NodeOutOfRange { node: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if children[a - 1].contains(b) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            children[a - 1].insert(b);
            parents[b - 1].insert(a);
            list.push((a, b));
        }
        list.sort_unstable();
        let dag = Dag {
            n,
            edges: list,
            parents,
            children,
        };
        dag.topological_order()?;
        Ok(dag)
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Dag::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        1..=self.n
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    /// Edges sorted lexicographically.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, a: Node, b: Node) -> bool {
        self.in_range(a) && self.children[a - 1].contains(b)
    }

    pub fn adjacent(&self, a: Node, b: Node) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    pub fn parents(&self, v: Node) -> NodeSet {
        self.parents[v - 1]
    }

    pub fn children(&self, v: Node) -> NodeSet {
        self.children[v - 1]
    }

    pub fn neighbors(&self, v: Node) -> NodeSet {
        self.parents[v - 1].union(self.children[v - 1])
    }

    fn in_range(&self, v: Node) -> bool {
        (1..=self.n).contains(&v)
    }

    pub(crate) fn check_node(&self, v: Node) -> Result<(), GraphError> {
        if self.in_range(v) {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node: v, n: self.n })
        }
    }

    pub(crate) fn check_set(&self, s: NodeSet) -> Result<(), GraphError> {
        match s.iter().find(|&v| !self.in_range(v)) {
            Some(v) => Err(GraphError::NodeOutOfRange { node: v, n: self.n }),
            None => Ok(()),
        }
    }

    /// Kahn's algorithm, always releasing the smallest ready node first.
    pub fn topological_order(&self) -> Result<Vec<Node>, GraphError> {
        let mut indegree: Vec<usize> = self.parents.iter().map(|p| p.len()).collect();
        let mut ready: NodeSet = self.nodes().filter(|&v| indegree[v - 1] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.min() {
            ready.remove(v);
            order.push(v);
            for c in self.children[v - 1] {
                indegree[c - 1] -= 1;
                if indegree[c - 1] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() == self.n {
            Ok(order)
        } else {
            Err(GraphError::Cycle)
        }
    }

    fn closure(&self, start: NodeSet, step: impl Fn(Node) -> NodeSet) -> NodeSet {
        let mut seen = start;
        let mut frontier = start;
        while !frontier.is_empty() {
            let mut next = NodeSet::EMPTY;
            for v in frontier {
                next = next.union(step(v));
            }
            frontier = next.difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    /// Strict ancestors: nodes with a directed path into `v`, excluding `v`.
    pub fn ancestors(&self, v: Node) -> NodeSet {
        self.ancestors_inclusive(v).without(v)
    }

    pub fn ancestors_inclusive(&self, v: Node) -> NodeSet {
        self.ancestors_of_set(NodeSet::singleton(v))
    }

    /// Every node with a directed path into some member of `s`, together with `s`.
    pub fn ancestors_of_set(&self, s: NodeSet) -> NodeSet {
        self.closure(s, |u| self.parents[u - 1])
    }

    /// Strict descendants of `v`.
    pub fn descendants(&self, v: Node) -> NodeSet {
        self.descendants_inclusive(v).without(v)
    }

    pub fn descendants_inclusive(&self, v: Node) -> NodeSet {
        self.closure(NodeSet::singleton(v), |u| self.children[u - 1])
    }

    pub fn delete_edge(&self, a: Node, b: Node) -> Result<Dag, GraphError> {
        if !self.has_edge(a, b) {
            return Err(GraphError::MissingEdge(a, b));
        }
        let mut g = self.clone();
        g.edges.retain(|&e| e != (a, b));
        g.children[a - 1].remove(b);
        g.parents[b - 1].remove(a);
        Ok(g)
    }

    /// Whether every edge of `self` is also an edge of `other` (same node count).
    pub fn is_subgraph_of(&self, other: &Dag) -> bool {
        self.n == other.n && self.edges.iter().all(|&(a, b)| other.has_edge(a, b))
    }

    /// Renders a path with arrows oriented as in the graph, e.g. `1 -> 2 -> 4 <- 3 -> 5`.
    pub fn format_path(&self, path: &Path) -> String {
        let nodes = path.nodes();
        let mut out = String::new();
        for (k, &v) in nodes.iter().enumerate() {
            if k > 0 {
                let u = nodes[k - 1];
                out.push_str(if self.has_edge(u, v) { " -> " } else { " <- " });
            }
            out.push_str(&v.to_string());
        }
        out
    }
}
