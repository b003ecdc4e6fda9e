//! Exact sparse polynomials over the integers in the edge weights `l<a>_<b>`
//! and error variances `w<v>` of a linear structural equation model.

mod gcd;
mod integer;
mod matrix;
mod monomial;
mod mvpoly;
mod text;

use thiserror::Error;

use crate::graph::{Edge, Node};

pub use gcd::{gcd, gcd_all};
pub use integer::Integer;
pub use matrix::PolyMatrix;
pub use monomial::Monomial;
pub use mvpoly::MvPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix index out of range")]
    IndexOutOfRange,
    #[error("{0}")]
    Parse(String),
}

/// A ring variable: an error variance `ω_v` or an edge weight `λ_ab`.
/// Ordered with every `ω` before every `λ`, each group by node ids.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Omega(Node),
    Lambda(Node, Node),
}

const LAMBDA_BASE: u16 = 128;

impl Var {
    pub fn omega(v: Node) -> Var {
        assert!((1..=64).contains(&v), "node {v} out of range");
        Var(v as u16)
    }

    pub fn lambda(a: Node, b: Node) -> Var {
        assert!((1..=64).contains(&a) && (1..=64).contains(&b), "edge {a}->{b} out of range");
        Var(LAMBDA_BASE + ((a - 1) * 64 + (b - 1)) as u16)
    }

    pub fn edge((a, b): Edge) -> Var {
        Var::lambda(a, b)
    }

    pub fn kind(self) -> VarKind {
        if self.0 < LAMBDA_BASE {
            VarKind::Omega(self.0 as Node)
        } else {
            let k = (self.0 - LAMBDA_BASE) as Node;
            VarKind::Lambda(k / 64 + 1, k % 64 + 1)
        }
    }

    pub fn is_lambda(self) -> bool {
        self.0 >= LAMBDA_BASE
    }

    pub fn as_edge(self) -> Option<Edge> {
        match self.kind() {
            VarKind::Lambda(a, b) => Some((a, b)),
            VarKind::Omega(_) => None,
        }
    }
}
