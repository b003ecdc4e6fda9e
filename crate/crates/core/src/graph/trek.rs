use super::{Dag, Edge, Node, NodeSet};

/// A pair of directed paths leaving a common top node. `left` runs from the
/// top to the leftmost node, `right` from the top to the rightmost node; both
/// start with `top`, and a side of length one is the empty path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trek {
    pub top: Node,
    pub left: Vec<Node>,
    pub right: Vec<Node>,
}

impl Trek {
    pub fn empty_at(v: Node) -> Self {
        Trek {
            top: v,
            left: vec![v],
            right: vec![v],
        }
    }

    pub fn leftmost(&self) -> Node {
        *self.left.last().unwrap()
    }

    pub fn rightmost(&self) -> Node {
        *self.right.last().unwrap()
    }

    /// Both sides empty: the trek from a node to itself with no edges.
    pub fn is_empty(&self) -> bool {
        self.left.len() == 1 && self.right.len() == 1
    }

    pub fn left_nodes(&self) -> NodeSet {
        self.left.iter().collect()
    }

    pub fn right_nodes(&self) -> NodeSet {
        self.right.iter().collect()
    }

    pub fn left_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.left.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn right_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.right.windows(2).map(|w| (w[0], w[1]))
    }

    /// The same trek read from the other end.
    pub fn reversed(&self) -> Trek {
        Trek {
            top: self.top,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

impl std::fmt::Display for Trek {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "{} <-> {}", self.top, self.top);
        }
        for v in self.left.iter().rev() {
            write!(f, "{v}")?;
            if *v != self.top {
                write!(f, " <- ")?;
            }
        }
        for v in &self.right[1..] {
            write!(f, " -> {v}")?;
        }
        Ok(())
    }
}

impl Dag {
    /// All directed paths `from -> ... -> to`, lexicographically ordered.
    /// A node reaches itself by the single-node path.
    pub fn directed_paths(&self, from: Node, to: Node) -> Vec<Vec<Node>> {
        let allowed = self.ancestors_inclusive(to);
        let mut out = Vec::new();
        if !allowed.contains(from) {
            return out;
        }
        let mut path = vec![from];
        self.extend_directed(&mut path, to, allowed, &mut out);
        out
    }

    fn extend_directed(&self, path: &mut Vec<Node>, to: Node, allowed: NodeSet, out: &mut Vec<Vec<Node>>) {
        let u = *path.last().unwrap();
        if u == to {
            out.push(path.clone());
            return;
        }
        for c in self.children(u).intersection(allowed) {
            path.push(c);
            self.extend_directed(path, to, allowed, out);
            path.pop();
        }
    }

    /// Every trek between `i` and `j` (leftmost `i`, rightmost `j`), each once,
    /// ordered by top node and then by the two sides.
    pub fn enumerate_treks(&self, i: Node, j: Node) -> Vec<Trek> {
        let tops = self.ancestors_inclusive(i).intersection(self.ancestors_inclusive(j));
        let mut out = Vec::new();
        for top in tops {
            let lefts = self.directed_paths(top, i);
            let rights = self.directed_paths(top, j);
            for l in &lefts {
                for r in &rights {
                    out.push(Trek {
                        top,
                        left: l.clone(),
                        right: r.clone(),
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn single_trek_between_1_and_4() {
        let treks = running_example().enumerate_treks(1, 4);
        assert_eq!(
            treks,
            vec![Trek {
                top: 1,
                left: vec![1],
                right: vec![1, 2, 4]
            }]
        );
        assert_eq!(treks[0].to_string(), "1 -> 2 -> 4");
    }

    #[test]
    fn source_has_only_the_empty_trek_to_itself() {
        let treks = running_example().enumerate_treks(3, 3);
        assert_eq!(treks, vec![Trek::empty_at(3)]);
        assert!(treks[0].is_empty());
    }

    #[test]
    fn treks_between_4_and_5() {
        let g = running_example();
        let treks = g.enumerate_treks(4, 5);
        let rendered: Vec<String> = treks.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            rendered,
            vec![
                "4 <- 2 <- 1 -> 2 -> 4 -> 5",
                "4 <- 2 -> 4 -> 5",
                "4 <- 3 -> 4 -> 5",
                "4 <- 3 -> 5",
                "4 -> 5",
            ]
        );
    }

    #[test]
    fn swapping_ends_reverses_treks() {
        let g = running_example();
        for i in g.nodes() {
            for j in g.nodes() {
                let mut swapped: Vec<Trek> = g.enumerate_treks(j, i).iter().map(Trek::reversed).collect();
                swapped.sort();
                let mut direct = g.enumerate_treks(i, j);
                direct.sort();
                assert_eq!(direct, swapped);
            }
        }
    }
}
