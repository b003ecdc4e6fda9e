//! Implication of conditional independence statements on a DAG model with one
//! added statement, and decomposition into unions of graphical models.

mod statement;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Dag, Edge, GraphError, Node, NodeSet};
use crate::param::{ParamError, Saturator, SymbolicCovariance, DEFAULT_PRINCIPAL_MINOR_LIMIT};
use crate::poly::{MvPoly, PolyError};

pub use statement::CiStatement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImplicationError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid statement: {0}")]
    InvalidStatement(String),
    #[error("{0}")]
    Parse(String),
    #[error("`{0}` is not elementary")]
    NotElementary(CiStatement),
    #[error("`{0}` already holds by d-separation")]
    AlreadyImplied(CiStatement),
    #[error("expected exactly one added statement, found {0}")]
    NeedsSingleExtra(usize),
    #[error("empty list of graphs")]
    EmptyGraphList,
}

impl ImplicationError {
    pub fn is_size_limit(&self) -> bool {
        match self {
            ImplicationError::Graph(e) => e.is_size_limit(),
            ImplicationError::Param(e) => e.is_size_limit(),
            _ => false,
        }
    }
}

/// Outcome of an exact implication query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Holds on every covariance matrix of the model.
    Implied,
    /// Fails somewhere on the Zariski closure; the positive definite part
    /// may still satisfy it.
    NotImpliedOnVariety,
    /// A numeric covariance matrix in the model violates the query.
    NotImplied,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Implied => "implied",
            Verdict::NotImpliedOnVariety => "not implied on the variety",
            Verdict::NotImplied => "not implied",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// The model is the union of these edge-deleted graphs' models.
    UnionOfGraphicalModels(Vec<Dag>),
    /// Some factor is not a single edge weight. `graphical_edges` are the
    /// edges whose weight still divides the generator, `residual` the rest.
    NonGraphical { graphical_edges: Vec<Edge>, residual: MvPoly },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IterativeOutcome {
    UnionOfGraphicalModels(Vec<Dag>),
    /// Statement `at` (0-based) met a candidate graph whose decomposition is
    /// not graphical; `partial` are the candidates before that statement.
    Stuck { at: usize, partial: Vec<Dag> },
}

/// A DAG together with added elementary statements, none of which already
/// holds by d-separation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedModel {
    dag: Dag,
    extra: Vec<CiStatement>,
}

impl AugmentedModel {
    pub fn new(dag: Dag, extra: Vec<CiStatement>) -> Result<Self, ImplicationError> {
        for s in &extra {
            s.as_elementary()?;
            s.check_against(&dag)?;
            if s.holds_in(&dag)? {
                return Err(ImplicationError::AlreadyImplied(*s));
            }
        }
        Ok(AugmentedModel { dag, extra })
    }

    pub fn single(dag: Dag, extra: CiStatement) -> Result<Self, ImplicationError> {
        AugmentedModel::new(dag, vec![extra])
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn extra(&self) -> &[CiStatement] {
        &self.extra
    }

    fn single_extra(&self) -> Result<(Node, Node, NodeSet), ImplicationError> {
        match self.extra.as_slice() {
            [s] => s.as_elementary(),
            other => Err(ImplicationError::NeedsSingleExtra(other.len())),
        }
    }
}

/// Symbolic covariance of one graph with a lazily built saturator, shared by
/// every query against that graph.
pub struct GraphAlgebra {
    cov: SymbolicCovariance,
    saturator: OnceLock<Result<Saturator, ParamError>>,
    saturated: Mutex<HashMap<(Node, Node, NodeSet), MvPoly>>,
}

impl GraphAlgebra {
    pub fn new(g: &Dag) -> Self {
        GraphAlgebra {
            cov: SymbolicCovariance::new(g),
            saturator: OnceLock::new(),
            saturated: Mutex::new(HashMap::new()),
        }
    }

    pub fn dag(&self) -> &Dag {
        self.cov.dag()
    }

    pub fn covariance(&self) -> &SymbolicCovariance {
        &self.cov
    }

    pub fn saturator(&self) -> Result<&Saturator, ImplicationError> {
        self.saturator
            .get_or_init(|| Saturator::from_covariance(&self.cov, DEFAULT_PRINCIPAL_MINOR_LIMIT))
            .as_ref()
            .map_err(|e| e.clone().into())
    }

    /// `|Σ_{iK, jK}|` under the trek rule.
    pub fn minor(&self, i: Node, j: Node, k: NodeSet) -> Result<MvPoly, ImplicationError> {
        Ok(self.cov.almost_principal_minor(i, j, k)?)
    }

    /// The saturated generator of the statement's ideal; zero when the
    /// statement holds by d-separation.
    /// Results are cached, keyed on the unordered pair and `K`.
    pub fn saturated_minor(&self, i: Node, j: Node, k: NodeSet) -> Result<MvPoly, ImplicationError> {
        let key = (i.min(j), i.max(j), k);
        if let Some(m) = self.saturated.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = self.minor(i, j, k)?;
        let sat = if m.is_zero() { m } else { self.saturator()?.saturate(&m)? };
        self.saturated.lock().unwrap().insert(key, sat.clone());
        Ok(sat)
    }

    /// Whether `query` holds on the model cut out by `extra = (i, j, K)`.
    pub fn implies_exact(&self, extra: (Node, Node, NodeSet), query: &CiStatement) -> Result<Verdict, ImplicationError> {
        let (a, b, c) = query.as_elementary()?;
        query.check_against(self.dag())?;
        if self.dag().d_separated_pair(a, b, c)? {
            return Ok(Verdict::Implied);
        }
        let (i, j, k) = extra;
        // Vanishing on the hypersurface only needs each distinct factor.
        let generator = self.saturated_minor(i, j, k)?.squarefree_part();
        let target = self.saturated_minor(a, b, c)?;
        Ok(if generator.divides(&target) {
            Verdict::Implied
        } else {
            Verdict::NotImpliedOnVariety
        })
    }

    pub fn is_graphical_algebraic(&self, i: Node, j: Node, k: NodeSet) -> Result<bool, ImplicationError> {
        Ok(self.minor(i, j, k)?.is_monomial())
    }

    /// Components read off the raw minor: each edge weight in its monomial
    /// part gives a component, ω factors give none.
    pub fn decompose(&self, i: Node, j: Node, k: NodeSet) -> Result<Decomposition, ImplicationError> {
        let m = self.minor(i, j, k)?;
        decomposition_of(self.dag(), &m)
    }

    /// As [`GraphAlgebra::decompose`], but on the saturated generator, so
    /// factors shared with principal minors no longer block a graphical answer.
    pub fn decompose_saturated(&self, i: Node, j: Node, k: NodeSet) -> Result<Decomposition, ImplicationError> {
        let m = self.saturated_minor(i, j, k)?;
        decomposition_of(self.dag(), &m)
    }
}

fn decomposition_of(g: &Dag, m: &MvPoly) -> Result<Decomposition, ImplicationError> {
    let (mono, residual) = m.monomial_factors()?;
    let edges: Vec<Edge> = mono.vars().filter_map(|v| v.as_edge()).collect();
    if residual.is_constant() {
        let dags = edges
            .iter()
            .map(|&(a, b)| g.delete_edge(a, b))
            .collect::<Result<_, _>>()?;
        Ok(Decomposition::UnionOfGraphicalModels(dags))
    } else {
        Ok(Decomposition::NonGraphical {
            graphical_edges: edges,
            residual: residual.primitive_part().with_positive_lead(),
        })
    }
}

/// `Implied` when the query holds by d-separation or its saturated minor is
/// divisible by the saturated minor of the added statement.
pub fn implies_exact(m: &AugmentedModel, query: &CiStatement) -> Result<Verdict, ImplicationError> {
    let extra = m.single_extra()?;
    GraphAlgebra::new(m.dag()).implies_exact(extra, query)
}

/// The minor of the added statement is a single term.
pub fn is_graphical_algebraic(m: &AugmentedModel) -> Result<bool, ImplicationError> {
    let (i, j, k) = m.single_extra()?;
    GraphAlgebra::new(m.dag()).is_graphical_algebraic(i, j, k)
}

/// Exactly one d-connecting route, and every conditioning node off that
/// route has all its parents on the route or in the conditioning set.
pub fn is_graphical_graphical(m: &AugmentedModel) -> Result<bool, ImplicationError> {
    let (i, j, k) = m.single_extra()?;
    graphical_by_routes(m.dag(), i, j, k)
}

pub fn graphical_by_routes(g: &Dag, i: Node, j: Node, k: NodeSet) -> Result<bool, ImplicationError> {
    let routes = g.d_connecting_routes(i, j, k)?;
    Ok(match routes.as_slice() {
        [only] => parents_covered(g, k, only.nodes()),
        _ => false,
    })
}

/// The same test phrased with simple d-connecting paths, whose colliders
/// may be opened by descendants. Kept for comparison: it disagrees with the
/// algebraic test once a collider is opened only through a descendant.
pub fn graphical_by_simple_paths(g: &Dag, i: Node, j: Node, k: NodeSet) -> Result<bool, ImplicationError> {
    let paths = g.d_connecting_paths(i, j, k)?;
    Ok(match paths.as_slice() {
        [only] => parents_covered(g, k, only.node_set()),
        _ => false,
    })
}

fn parents_covered(g: &Dag, k: NodeSet, on_route: NodeSet) -> bool {
    let allowed = on_route.union(k);
    k.difference(on_route).iter().all(|v| g.parents(v).is_subset(allowed))
}

pub fn decompose(m: &AugmentedModel) -> Result<Decomposition, ImplicationError> {
    let (i, j, k) = m.single_extra()?;
    GraphAlgebra::new(m.dag()).decompose(i, j, k)
}

pub fn decompose_saturated(m: &AugmentedModel) -> Result<Decomposition, ImplicationError> {
    let (i, j, k) = m.single_extra()?;
    GraphAlgebra::new(m.dag()).decompose_saturated(i, j, k)
}

/// A statement holds on a union of graphical models iff it holds by
/// d-separation in each of them.
pub fn implies_via_union(dags: &[Dag], query: &CiStatement) -> Result<bool, ImplicationError> {
    if dags.is_empty() {
        return Err(ImplicationError::EmptyGraphList);
    }
    for g in dags {
        query.check_against(g)?;
        if !query.holds_in(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Applies the statements one at a time to a list of candidate graphs.
/// Candidates that already satisfy a statement are kept; the others are
/// replaced by their saturated decomposition. Duplicates and candidates
/// contained in another candidate are dropped after each step.
pub fn iterative_decompose(g: &Dag, extras: &[CiStatement]) -> Result<IterativeOutcome, ImplicationError> {
    let mut candidates = vec![g.clone()];
    for (at, s) in extras.iter().enumerate() {
        let (i, j, k) = s.as_elementary()?;
        s.check_against(g)?;
        let mut next = Vec::new();
        for h in &candidates {
            if h.d_separated_pair(i, j, k)? {
                next.push(h.clone());
                continue;
            }
            match GraphAlgebra::new(h).decompose_saturated(i, j, k)? {
                Decomposition::UnionOfGraphicalModels(parts) => next.extend(parts),
                Decomposition::NonGraphical { .. } => {
                    return Ok(IterativeOutcome::Stuck { at, partial: candidates });
                }
            }
        }
        candidates = prune(next);
    }
    Ok(IterativeOutcome::UnionOfGraphicalModels(candidates))
}

fn prune(mut dags: Vec<Dag>) -> Vec<Dag> {
    dags.sort_by(|a, b| a.edges().cmp(b.edges()));
    dags.dedup();
    let keep: Vec<bool> = dags
        .iter()
        .map(|d| !dags.iter().any(|e| e != d && d.is_subgraph_of(e)))
        .collect();
    dags.into_iter().zip(keep).filter_map(|(d, k)| k.then_some(d)).collect()
}
