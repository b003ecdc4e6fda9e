//! Inference with the gaussoid axioms over elementary statements
//! `i _||_ j | L`, symmetry reduction, and the four-node check against the
//! algebraic implication test.

mod closure;
mod conjecture;
mod symmetry;

use std::fmt;
use std::sync::OnceLock;

use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

use crate::graph::{Dag, GraphError, Node, NodeSet};
use crate::implication::{CiStatement, ImplicationError};

pub use closure::{axiom_instances, close, Axiom, AxiomInstance, ClosureResult};
pub use conjecture::{
    exceptional_structures_n4, glob, verify_conjecture_n4, verify_conjecture_on, CaseRecord, ConjectureReport,
    ConjectureSummary,
};
pub use symmetry::{canonical_form, permutations, relabel};

/// Largest ground set handled; 6 nodes give 240 elementary statements.
pub const MAX_GAUSSOID_NODES: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaussoidError {
    #[error("gaussoid inference is limited to {limit} nodes, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("structures over {0} and {1} nodes cannot be combined")]
    GroundSetMismatch(usize, usize),
    #[error("`{statement}` does not fit a ground set of {n} nodes")]
    OutOfRange { statement: CiStatement, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Implication(#[from] ImplicationError),
}

impl GaussoidError {
    pub fn is_size_limit(&self) -> bool {
        match self {
            GaussoidError::TooLarge { .. } => true,
            GaussoidError::Graph(e) => e.is_size_limit(),
            GaussoidError::Implication(e) => e.is_size_limit(),
            _ => false,
        }
    }
}

/// Fixed-width bit set indexed by statement position in the [`Universe`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Bits([u64; 4]);

impl Bits {
    pub(crate) fn contains(&self, k: usize) -> bool {
        self.0[k / 64] >> (k % 64) & 1 == 1
    }

    pub(crate) fn insert(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    pub(crate) fn with(mut self, k: usize) -> Bits {
        self.insert(k);
        self
    }

    pub(crate) fn union(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|w| self.0[w] | o.0[w]))
    }

    pub(crate) fn intersection(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|w| self.0[w] & o.0[w]))
    }

    pub(crate) fn is_subset(self, o: Bits) -> bool {
        (0..4).all(|w| self.0[w] & !o.0[w] == 0)
    }

    pub(crate) fn count(self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn iter(self) -> impl Iterator<Item = usize> {
        (0..256).filter(move |&k| self.contains(k))
    }
}

/// Every elementary statement on `1..=n`, ordered by conditioning set size,
/// then `i`, then `j`, then the conditioning set.
pub(crate) struct Universe {
    n: usize,
    statements: Vec<(Node, Node, NodeSet)>,
    // Indexed by (i - 1, j - 1, L bits).
    lookup: Vec<u16>,
}

const NO_INDEX: u16 = u16::MAX;

impl Universe {
    pub(crate) fn get(n: usize) -> Result<&'static Universe, GaussoidError> {
        static CACHE: [OnceLock<Universe>; MAX_GAUSSOID_NODES + 1] = [const { OnceLock::new() }; MAX_GAUSSOID_NODES + 1];
        if n > MAX_GAUSSOID_NODES {
            return Err(GaussoidError::TooLarge { n, limit: MAX_GAUSSOID_NODES });
        }
        Ok(CACHE[n].get_or_init(|| Universe::build(n)))
    }

    fn build(n: usize) -> Universe {
        let mut statements = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for l in NodeSet::full(n).without(i).without(j).subsets() {
                    statements.push((i, j, l));
                }
            }
        }
        statements.sort_by_key(|&(i, j, l)| (l.len(), i, j, l.bits()));
        let mut lookup = vec![NO_INDEX; MAX_GAUSSOID_NODES * MAX_GAUSSOID_NODES << MAX_GAUSSOID_NODES];
        for (k, &(i, j, l)) in statements.iter().enumerate() {
            lookup[Self::slot(i, j, l)] = k as u16;
            lookup[Self::slot(j, i, l)] = k as u16;
        }
        Universe { n, statements, lookup }
    }

    fn slot(i: Node, j: Node, l: NodeSet) -> usize {
        (((i - 1) * MAX_GAUSSOID_NODES + (j - 1)) << MAX_GAUSSOID_NODES) | l.bits() as usize
    }

    pub(crate) fn len(&self) -> usize {
        self.statements.len()
    }

    /// Position of `i _||_ j | l`; the pair may come in either order.
    pub(crate) fn index(&self, i: Node, j: Node, l: NodeSet) -> usize {
        let k = self.lookup[Self::slot(i, j, l)];
        debug_assert_ne!(k, NO_INDEX, "{i} {j} {l}");
        k as usize
    }

    pub(crate) fn statement(&self, k: usize) -> (Node, Node, NodeSet) {
        self.statements[k]
    }
}

/// A set of elementary statements over the ground set `1..=n`, `n <= 6`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CiStructure {
    n: usize,
    bits: Bits,
}

impl CiStructure {
    pub fn empty(n: usize) -> Result<Self, GaussoidError> {
        Universe::get(n)?;
        Ok(CiStructure { n, bits: Bits::default() })
    }

    pub fn from_statements<'a>(
        n: usize,
        statements: impl IntoIterator<Item = &'a CiStatement>,
    ) -> Result<Self, GaussoidError> {
        let mut s = CiStructure::empty(n)?;
        for st in statements {
            s.insert(st)?;
        }
        Ok(s)
    }

    pub(crate) fn from_bits(n: usize, bits: Bits) -> Self {
        CiStructure { n, bits }
    }

    pub(crate) fn bits(&self) -> Bits {
        self.bits
    }

    pub(crate) fn universe(&self) -> &'static Universe {
        Universe::get(self.n).expect("size checked at construction")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn index_of(&self, st: &CiStatement) -> Result<usize, GaussoidError> {
        let out_of_range = || GaussoidError::OutOfRange { statement: *st, n: self.n };
        let (i, j, l) = st.as_elementary()?;
        if !st.nodes().is_subset(NodeSet::full(self.n)) {
            return Err(out_of_range());
        }
        Ok(self.universe().index(i, j, l))
    }

    pub fn insert(&mut self, st: &CiStatement) -> Result<(), GaussoidError> {
        let k = self.index_of(st)?;
        self.bits.insert(k);
        Ok(())
    }

    pub fn with(mut self, st: &CiStatement) -> Result<Self, GaussoidError> {
        self.insert(st)?;
        Ok(self)
    }

    /// False for statements that are not elementary or do not fit the ground set.
    pub fn contains(&self, st: &CiStatement) -> bool {
        self.index_of(st).is_ok_and(|k| self.bits.contains(k))
    }

    pub fn is_subset(&self, other: &CiStructure) -> bool {
        self.n == other.n && self.bits.is_subset(other.bits)
    }

    pub fn union(&self, other: &CiStructure) -> Result<CiStructure, GaussoidError> {
        self.same_ground(other)?;
        Ok(CiStructure::from_bits(self.n, self.bits.union(other.bits)))
    }

    pub fn intersection(&self, other: &CiStructure) -> Result<CiStructure, GaussoidError> {
        self.same_ground(other)?;
        Ok(CiStructure::from_bits(self.n, self.bits.intersection(other.bits)))
    }

    /// Statements of `self` missing from `other`.
    pub fn difference(&self, other: &CiStructure) -> Result<CiStructure, GaussoidError> {
        self.same_ground(other)?;
        Ok(CiStructure::from_bits(self.n, Bits(std::array::from_fn(|w| self.bits.0[w] & !other.bits.0[w]))))
    }

    fn same_ground(&self, other: &CiStructure) -> Result<(), GaussoidError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(GaussoidError::GroundSetMismatch(self.n, other.n))
        }
    }

    /// Members in the fixed statement order.
    pub fn statements(&self) -> Vec<CiStatement> {
        let u = self.universe();
        self.bits
            .iter()
            .map(|k| {
                let (i, j, l) = u.statement(k);
                CiStatement::elementary(i, j, l).expect("universe statements are valid")
            })
            .collect()
    }

    /// Every elementary statement that holds by d-separation in `g`.
    pub fn global_markov(g: &Dag) -> Result<CiStructure, GaussoidError> {
        let u = Universe::get(g.n())?;
        let mut bits = Bits::default();
        for k in 0..u.len() {
            let (i, j, l) = u.statement(k);
            if g.d_separated_pair(i, j, l)? {
                bits.insert(k);
            }
        }
        Ok(CiStructure::from_bits(g.n(), bits))
    }
}

impl fmt::Display for CiStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.statements().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for CiStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CiStructure(n={}, {self})", self.n)
    }
}

/// A list of statement strings.
impl Serialize for CiStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let statements = self.statements();
        let mut seq = serializer.serialize_seq(Some(statements.len()))?;
        for s in &statements {
            seq.serialize_element(&s.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
pub(crate) fn structure(n: usize, statements: &[&str]) -> CiStructure {
    let parsed: Vec<CiStatement> = statements.iter().map(|s| s.parse().unwrap()).collect();
    CiStructure::from_statements(n, &parsed).unwrap()
}
