use std::fmt;
use std::str::FromStr;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use super::{GraphError, Node};

/// Largest node id a [`NodeSet`] (and therefore a [`super::Dag`]) can hold.
pub const MAX_NODES: usize = 64;

/// A set of 1-based node ids packed into a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: Node) -> Self {
        debug_assert!((1..=MAX_NODES).contains(&v));
        NodeSet(1u64 << (v - 1))
    }

    /// All nodes `1..=n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: Node) -> bool {
        v >= 1 && v <= MAX_NODES && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn insert(&mut self, v: Node) {
        self.0 |= 1u64 << (v - 1);
    }

    pub fn remove(&mut self, v: Node) {
        self.0 &= !(1u64 << (v - 1));
    }

    pub fn with(mut self, v: Node) -> Self {
        self.insert(v);
        self
    }

    pub fn without(mut self, v: Node) -> Self {
        self.remove(v);
        self
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<Node> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn iter(self) -> NodeSetIter {
        NodeSetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<Node> {
        self.iter().collect()
    }

    /// Every subset of `self`, in increasing order of the underlying mask.
    pub fn subsets(self) -> impl Iterator<Item = NodeSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(NodeSet(cur))
        })
    }
}

impl FromIterator<Node> for NodeSet {
    fn from_iter<I: IntoIterator<Item = Node>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a Node> for NodeSet {
    fn from_iter<I: IntoIterator<Item = &'a Node>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl IntoIterator for NodeSet {
    type Item = Node;
    type IntoIter = NodeSetIter;
    fn into_iter(self) -> NodeSetIter {
        self.iter()
    }
}

pub struct NodeSetIter(u64);

impl Iterator for NodeSetIter {
    type Item = Node;
    fn next(&mut self) -> Option<Node> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Prints `{1,2,3}`; the empty set prints as `{}`.
impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Accepts `{1,2,3}`, `{}` or a bare id such as `4`. Repeated ids are rejected.
impl FromStr for NodeSet {
    type Err = GraphError;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidArgument(format!("bad node set `{token}`"));
        let t = token.trim();
        let inner = match t.strip_prefix('{') {
            Some(rest) => rest.strip_suffix('}').ok_or_else(bad)?,
            None if t.is_empty() => return Err(bad()),
            None => t,
        };
        let mut s = NodeSet::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v: Node = part.parse().map_err(|_| bad())?;
            if v == 0 || v > MAX_NODES || s.contains(v) {
                return Err(bad());
            }
            s.insert(v);
        }
        Ok(s)
    }
}

/// A sorted list of node ids.
impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_power_set() {
        let s: NodeSet = [2, 4, 5].into_iter().collect();
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(NodeSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn parses_braced_and_bare_sets() {
        assert_eq!("{3, 1}".parse::<NodeSet>().unwrap().to_vec(), vec![1, 3]);
        assert_eq!("4".parse::<NodeSet>().unwrap(), NodeSet::singleton(4));
        assert_eq!("{}".parse::<NodeSet>().unwrap(), NodeSet::EMPTY);
        for bad in ["", "{1,1}", "{0}", "{1", "x", "65"] {
            assert!(bad.parse::<NodeSet>().is_err(), "{bad}");
        }
    }

    #[test]
    fn iteration_is_ascending() {
        let s: NodeSet = [7, 1, 3].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 3, 7]);
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.to_string(), "{1,3,7}");
    }
}
