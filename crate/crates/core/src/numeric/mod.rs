//! Numeric linear structural equation models: covariance construction,
//! partial correlations, approximate implication and witness search.

mod approx;
mod refute;
mod sampler;
mod search;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};
use thiserror::Error;

use crate::graph::{Dag, Edge, GraphError, Node, NodeSet};
use crate::implication::ImplicationError;
use crate::poly::{Var, VarKind};

pub use approx::{approx_implies, check_rho_factorization, mi_gap, mi_gap_from_rhos, mutual_information, ApproxQuery};
pub use refute::{sample_component, upgrade_verdict, Component};
pub use sampler::{draw_rng, ParamSampler};
pub use search::{search_counterexample, SearchOutcome, Witness, EPSILON_GRID};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Implication(#[from] ImplicationError),
    #[error("expected {expected} error variances, got {got}")]
    OmegaLength { expected: usize, got: usize },
    #[error("error variance of node {node} must be positive and finite, got {value}")]
    BadOmega { node: Node, value: f64 },
    #[error("edge weight {value} on {}->{} is not finite", .edge.0, .edge.1)]
    BadLambda { edge: Edge, value: f64 },
    #[error("no weight given for edge {}->{}", .0.0, .0.1)]
    MissingWeight(Edge),
    #[error("weight given for {}->{}, which is not an edge", .0.0, .0.1)]
    UnknownEdge(Edge),
    #[error("covariance matrix is not numerically positive definite")]
    NotPositiveDefinite,
    #[error("conditional variance is not positive")]
    Singular,
    #[error("{0}")]
    Precondition(String),
    #[error("correlation {0} has absolute value 1; the information gap is infinite")]
    Degenerate(f64),
}

impl NumericError {
    pub fn is_size_limit(&self) -> bool {
        match self {
            NumericError::Graph(e) => e.is_size_limit(),
            NumericError::Implication(e) => e.is_size_limit(),
            _ => false,
        }
    }
}

/// A linear SEM on a DAG with its covariance `(I - Λ)^{-T} Ω (I - Λ)^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSem {
    dag: Dag,
    lambda: BTreeMap<Edge, f64>,
    omega: Vec<f64>,
    sigma: DMatrix<f64>,
}

/// Builds the covariance. `lambda` must name exactly the edges of `dag`,
/// `omega[v - 1]` is the error variance of node `v`.
pub fn build_sigma(dag: &Dag, lambda: BTreeMap<Edge, f64>, omega: Vec<f64>) -> Result<NumericSem, NumericError> {
    let n = dag.n();
    if omega.len() != n {
        return Err(NumericError::OmegaLength { expected: n, got: omega.len() });
    }
    for (v, &w) in omega.iter().enumerate() {
        if !(w.is_finite() && w > 0.0) {
            return Err(NumericError::BadOmega { node: v + 1, value: w });
        }
    }
    for (&e, &x) in &lambda {
        if !dag.has_edge(e.0, e.1) {
            return Err(NumericError::UnknownEdge(e));
        }
        if !x.is_finite() {
            return Err(NumericError::BadLambda { edge: e, value: x });
        }
    }
    if let Some(&e) = dag.edges().iter().find(|e| !lambda.contains_key(e)) {
        return Err(NumericError::MissingWeight(e));
    }
    let mut i_minus = DMatrix::<f64>::identity(n, n);
    for (&(a, b), &x) in &lambda {
        i_minus[(a - 1, b - 1)] = -x;
    }
    let s = i_minus.try_inverse().ok_or(NumericError::NotPositiveDefinite)?;
    let sigma = s.transpose() * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(omega.clone())) * &s;
    let sigma = (&sigma + sigma.transpose()) * 0.5;
    if sigma.clone().cholesky().is_none() {
        return Err(NumericError::NotPositiveDefinite);
    }
    Ok(NumericSem { dag: dag.clone(), lambda, omega, sigma })
}

impl NumericSem {
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn lambda(&self) -> &BTreeMap<Edge, f64> {
        &self.lambda
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Value of a parameter symbol; edge weights of missing edges are zero.
    pub fn value(&self, v: Var) -> f64 {
        match v.kind() {
            VarKind::Omega(k) => self.omega.get(k - 1).copied().unwrap_or(0.0),
            VarKind::Lambda(a, b) => self.lambda.get(&(a, b)).copied().unwrap_or(0.0),
        }
    }

    pub fn partial_correlation(&self, i: Node, j: Node, k: NodeSet) -> Result<f64, NumericError> {
        partial_correlation(&self.sigma, i, j, k)
    }
}

/// `{"lambda": {"1->2": x, ..}, "omega": {"1": w, ..}}`.
impl Serialize for NumericSem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("NumericSem", 2)?;
        st.serialize_field("lambda", &EdgeMap(&self.lambda))?;
        st.serialize_field("omega", &NodeMap(&self.omega))?;
        st.end()
    }
}

struct EdgeMap<'a>(&'a BTreeMap<Edge, f64>);

impl Serialize for EdgeMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(self.0.len()))?;
        for ((a, b), x) in self.0 {
            m.serialize_entry(&format!("{a}->{b}"), x)?;
        }
        m.end()
    }
}

struct NodeMap<'a>(&'a [f64]);

impl Serialize for NodeMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(self.0.len()))?;
        for (v, w) in self.0.iter().enumerate() {
            m.serialize_entry(&(v + 1).to_string(), w)?;
        }
        m.end()
    }
}

fn check_triple(n: usize, i: Node, j: Node, k: NodeSet) -> Result<(), NumericError> {
    for v in [i, j].into_iter().chain(k.iter()) {
        if v == 0 || v > n {
            return Err(GraphError::NodeOutOfRange { node: v, n }.into());
        }
    }
    if i == j || k.contains(i) || k.contains(j) {
        return Err(GraphError::OverlappingSets.into());
    }
    Ok(())
}

fn submatrix(sigma: &DMatrix<f64>, rows: &[Node], cols: &[Node]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| sigma[(rows[r] - 1, cols[c] - 1)])
}

/// `ρ_{i,j·K}` from the Schur complement `Σ_AA - Σ_AK Σ_KK^{-1} Σ_KA`, `A = {i, j}`.
pub fn partial_correlation(sigma: &DMatrix<f64>, i: Node, j: Node, k: NodeSet) -> Result<f64, NumericError> {
    check_triple(sigma.nrows(), i, j, k)?;
    let a = [i, j];
    let kv = k.to_vec();
    let mut cond = submatrix(sigma, &a, &a);
    if !kv.is_empty() {
        let chol = submatrix(sigma, &kv, &kv).cholesky().ok_or(NumericError::Singular)?;
        let ka = submatrix(sigma, &kv, &a);
        cond -= ka.transpose() * chol.solve(&ka);
    }
    correlation_of(cond[(0, 1)], cond[(0, 0)], cond[(1, 1)])
}

/// The same quantity from the inverse of the `{i, j} ∪ K` principal submatrix.
pub fn partial_correlation_via_inverse(sigma: &DMatrix<f64>, i: Node, j: Node, k: NodeSet) -> Result<f64, NumericError> {
    check_triple(sigma.nrows(), i, j, k)?;
    let idx: Vec<Node> = [i, j].into_iter().chain(k.iter()).collect();
    let p = submatrix(sigma, &idx, &idx).try_inverse().ok_or(NumericError::Singular)?;
    correlation_of(-p[(0, 1)], p[(0, 0)], p[(1, 1)])
}

fn correlation_of(cov: f64, var_a: f64, var_b: f64) -> Result<f64, NumericError> {
    if !(var_a > 0.0 && var_b > 0.0) {
        return Err(NumericError::Singular);
    }
    Ok((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}
