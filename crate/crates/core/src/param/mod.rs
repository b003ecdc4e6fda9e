//! The trek-rule parameterization: symbolic covariance matrices, minors,
//! principal-minor saturation and trek systems without sided intersection.

mod saturate;
mod systems;

use thiserror::Error;

use crate::graph::{Dag, GraphError, Node, NodeSet, Trek};
use crate::poly::{Monomial, MvPoly, PolyError, PolyMatrix, Var};

pub use saturate::{principal_minor_images, saturate, Saturator, DEFAULT_PRINCIPAL_MINOR_LIMIT};
pub use systems::{trek_systems_nsi, TrekSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("row and column sets have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("{n} nodes exceed the limit of {limit} for this computation")]
    TooLarge { n: usize, limit: usize },
}

impl ParamError {
    pub fn is_size_limit(&self) -> bool {
        match self {
            ParamError::Graph(e) => e.is_size_limit(),
            ParamError::TooLarge { .. } => true,
            _ => false,
        }
    }
}

/// The image of the covariance matrix under the trek-rule map.
#[derive(Clone, Debug)]
pub struct SymbolicCovariance {
    dag: Dag,
    sigma: PolyMatrix,
}

fn lambda_matrix(g: &Dag) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(g.n());
    for &(a, b) in g.edges() {
        m.set(a - 1, b - 1, MvPoly::var(Var::lambda(a, b)));
    }
    m
}

fn mul_sparse(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let n = x.dim();
    let mut out = PolyMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let a = x.get(i, k);
            if a.is_zero() {
                continue;
            }
            for j in 0..n {
                let b = y.get(k, j);
                if !b.is_zero() {
                    let sum = out.get(i, j) + &(a * b);
                    out.set(i, j, sum);
                }
            }
        }
    }
    out
}

impl SymbolicCovariance {
    /// `(I - Λ)^{-T} Ω (I - Λ)^{-1}` with the inverse expanded as the finite
    /// series `I + Λ + ... + Λ^{n-1}`.
    pub fn new(g: &Dag) -> Self {
        let n = g.n();
        let lambda = lambda_matrix(g);
        let mut series = PolyMatrix::zeros(n);
        let mut power = PolyMatrix::zeros(n);
        for v in 0..n {
            series.set(v, v, MvPoly::one());
            power.set(v, v, MvPoly::one());
        }
        for _ in 1..n {
            power = mul_sparse(&power, &lambda);
            if (0..n).all(|i| (0..n).all(|j| power.get(i, j).is_zero())) {
                break;
            }
            for i in 0..n {
                for j in 0..n {
                    if !power.get(i, j).is_zero() {
                        let s = series.get(i, j) + power.get(i, j);
                        series.set(i, j, s);
                    }
                }
            }
        }
        // sigma[i][j] = sum_k ω_k * series[k][i] * series[k][j]
        let mut sigma = PolyMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = MvPoly::zero();
                for k in 0..n {
                    let (a, b) = (series.get(k, i), series.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let w = Monomial::var(Var::omega(k + 1));
                    acc = &acc + &(a * b).mul_term(&w, &crate::poly::Integer::ONE);
                }
                sigma.set(j, i, acc.clone());
                sigma.set(i, j, acc);
            }
        }
        SymbolicCovariance { dag: g.clone(), sigma }
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.sigma
    }

    /// Entry `σ_ij` (1-based).
    pub fn sigma(&self, i: Node, j: Node) -> &MvPoly {
        self.sigma.get(i - 1, j - 1)
    }

    /// Determinant of the submatrix with rows `a` and columns `b`, in the given orders.
    pub fn minor(&self, a: &[Node], b: &[Node]) -> Result<MvPoly, ParamError> {
        if a.len() != b.len() {
            return Err(ParamError::SizeMismatch(a.len(), b.len()));
        }
        for &v in a.iter().chain(b) {
            self.dag.check_node(v)?;
        }
        let rows: Vec<usize> = a.iter().map(|v| v - 1).collect();
        let cols: Vec<usize> = b.iter().map(|v| v - 1).collect();
        Ok(self.sigma.submatrix(&rows, &cols)?.determinant())
    }

    /// `|Σ_{iK, jK}|` with rows `i, K...` and columns `j, K...`, `K` ascending.
    pub fn almost_principal_minor(&self, i: Node, j: Node, k: NodeSet) -> Result<MvPoly, ParamError> {
        let mut a = vec![i];
        let mut b = vec![j];
        a.extend(k.iter());
        b.extend(k.iter());
        self.minor(&a, &b)
    }

    pub fn principal_minor(&self, s: NodeSet) -> Result<MvPoly, ParamError> {
        let v = s.to_vec();
        self.minor(&v, &v)
    }
}

pub fn phi_sigma(g: &Dag) -> SymbolicCovariance {
    SymbolicCovariance::new(g)
}

/// The monomial `ω_top` times the weights of every edge on both sides.
pub fn trek_monomial(t: &Trek) -> Monomial {
    Monomial::from_factors(
        std::iter::once((Var::omega(t.top), 1))
            .chain(t.left_edges().chain(t.right_edges()).map(|e| (Var::edge(e), 1))),
    )
}

/// `σ_ij` as the sum of trek monomials over every trek between `i` and `j`.
pub fn trek_rule_sigma(g: &Dag, i: Node, j: Node) -> Result<MvPoly, ParamError> {
    g.check_node(i)?;
    g.check_node(j)?;
    Ok(MvPoly::from_terms(
        g.enumerate_treks(i, j)
            .iter()
            .map(|t| (trek_monomial(t), crate::poly::Integer::ONE)),
    ))
}

pub fn phi_minor(g: &Dag, a: &[Node], b: &[Node]) -> Result<MvPoly, ParamError> {
    SymbolicCovariance::new(g).minor(a, b)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::fixtures::running_example;

    pub fn p(s: &str) -> MvPoly {
        s.parse().unwrap()
    }

    #[test]
    fn running_example_covariances() {
        let s = phi_sigma(&running_example());
        assert!(s.sigma(1, 3).is_zero());
        assert_eq!(s.sigma(1, 4).to_string(), "w1*l1_2*l2_4");
        assert_eq!(
            s.sigma(5, 5).to_string(),
            "w1*l1_2^2*l2_4^2*l4_5^2 + w2*l2_4^2*l4_5^2 + w3*l3_4^2*l4_5^2 + 2*w3*l3_4*l3_5*l4_5 + w3*l3_5^2 + w4*l4_5^2 + w5"
        );
        assert!(s.matrix().is_symmetric());
    }

    #[test]
    fn trek_rule_agrees_on_running_example() {
        let g = running_example();
        let s = phi_sigma(&g);
        for i in g.nodes() {
            for j in g.nodes() {
                assert_eq!(&trek_rule_sigma(&g, i, j).unwrap(), s.sigma(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn small_cases() {
        let single = Dag::empty(1).unwrap();
        assert_eq!(trek_rule_sigma(&single, 1, 1).unwrap(), p("w1"));
        let edge = Dag::new(2, [(1, 2)]).unwrap();
        assert_eq!(trek_rule_sigma(&edge, 2, 2).unwrap(), p("w1*l1_2^2 + w2"));
        let empty = Dag::empty(3).unwrap();
        assert_eq!(phi_minor(&empty, &[2], &[2]).unwrap(), p("w2"));
    }

    #[test]
    fn running_example_minors() {
        let g = running_example();
        let s = phi_sigma(&g);
        assert_eq!(s.minor(&[1, 4], &[4, 5]).unwrap().to_string(), "w1*w3*l1_2*l2_4*l3_4*l3_5");
        let m15_25 = s.minor(&[1, 5], &[2, 5]).unwrap();
        assert_eq!(
            m15_25,
            &p("w1*l1_2") * &p("w3*l3_4^2*l4_5^2 + 2*w3*l3_4*l3_5*l4_5 + w3*l3_5^2 + w4*l4_5^2 + w5")
        );
        let m25_45 = s.almost_principal_minor(2, 4, NodeSet::singleton(5)).unwrap();
        let expected = &(&p("l2_4") * &p("w1*l1_2^2 + w2")) * &p("w3*l3_4*l3_5*l4_5 + w3*l3_5^2 + w5");
        assert_eq!(m25_45, expected);
        assert_eq!(s.minor(&[1], &[1, 2]), Err(ParamError::SizeMismatch(1, 2)));
    }
}
