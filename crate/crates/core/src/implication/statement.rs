use std::fmt;
use std::str::FromStr;

use super::ImplicationError;
use crate::graph::{Dag, GraphError, Node, NodeSet};

/// A conditional independence statement `A _||_ B | C`, stored with the
/// smaller minimum on the left.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CiStatement {
    a: NodeSet,
    b: NodeSet,
    c: NodeSet,
}

impl CiStatement {
    pub fn new(a: NodeSet, b: NodeSet, c: NodeSet) -> Result<Self, ImplicationError> {
        if a.is_empty() || b.is_empty() {
            return Err(ImplicationError::InvalidStatement("both sides must be nonempty".into()));
        }
        if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
            return Err(ImplicationError::InvalidStatement("sets must be pairwise disjoint".into()));
        }
        let (a, b) = if a.min() <= b.min() { (a, b) } else { (b, a) };
        Ok(CiStatement { a, b, c })
    }

    /// `i _||_ j | k`.
    pub fn elementary(i: Node, j: Node, k: NodeSet) -> Result<Self, ImplicationError> {
        if i == 0 || j == 0 {
            return Err(ImplicationError::InvalidStatement("node ids start at 1".into()));
        }
        CiStatement::new(NodeSet::singleton(i), NodeSet::singleton(j), k)
    }

    pub fn a(&self) -> NodeSet {
        self.a
    }

    pub fn b(&self) -> NodeSet {
        self.b
    }

    pub fn c(&self) -> NodeSet {
        self.c
    }

    pub fn is_elementary(&self) -> bool {
        self.a.len() == 1 && self.b.len() == 1
    }

    /// `(i, j, K)` with `i < j` for an elementary statement.
    pub fn as_elementary(&self) -> Result<(Node, Node, NodeSet), ImplicationError> {
        if !self.is_elementary() {
            return Err(ImplicationError::NotElementary(*self));
        }
        Ok((self.a.min().unwrap(), self.b.min().unwrap(), self.c))
    }

    pub fn nodes(&self) -> NodeSet {
        self.a.union(self.b).union(self.c)
    }

    pub fn check_against(&self, g: &Dag) -> Result<(), GraphError> {
        g.check_set(self.nodes())
    }

    /// Whether the statement holds by d-separation in `g`.
    pub fn holds_in(&self, g: &Dag) -> Result<bool, GraphError> {
        g.d_separated(self.a, self.b, self.c)
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, s: NodeSet) -> fmt::Result {
    if s.len() == 1 {
        write!(f, "{}", s.min().unwrap())
    } else {
        write!(f, "{s}")
    }
}

/// `1 _||_ 5 | 4`, `{1,2} _||_ 5 | {3,4}`; an empty conditioning set is omitted.
impl fmt::Display for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_set(f, self.a)?;
        write!(f, " _||_ ")?;
        write_set(f, self.b)?;
        if !self.c.is_empty() {
            write!(f, " | ")?;
            write_set(f, self.c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_set(token: &str) -> Result<NodeSet, ImplicationError> {
    token.parse().map_err(|e: crate::graph::GraphError| ImplicationError::Parse(e.to_string()))
}

impl FromStr for CiStatement {
    type Err = ImplicationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, rest) = s
            .split_once("_||_")
            .ok_or_else(|| ImplicationError::Parse(format!("missing `_||_` in `{s}`")))?;
        let (b, cond) = match rest.split_once('|') {
            Some((b, c)) => (b, Some(c)),
            None => (rest, None),
        };
        let c = match cond {
            Some(c) if !c.trim().is_empty() => parse_set(c)?,
            Some(_) => return Err(ImplicationError::Parse(format!("empty conditioning set after `|` in `{s}`"))),
            None => NodeSet::EMPTY,
        };
        CiStatement::new(parse_set(a)?, parse_set(b)?, c)
    }
}
