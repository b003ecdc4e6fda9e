use serde::Serialize;

use super::{check_triple, NumericError, NumericSem};
use crate::graph::{Dag, Node, NodeSet};

/// Does `|ρ_{i,j·K}| <= delta` force `|ρ_{i,l·K}| <= delta`?
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxQuery {
    pub i: Node,
    pub j: Node,
    pub l: Node,
    pub k: NodeSet,
    pub delta: f64,
}

impl ApproxQuery {
    pub fn new(i: Node, j: Node, l: Node, k: NodeSet, delta: f64) -> Self {
        ApproxQuery { i, j, l, k, delta }
    }

    /// Checks ranges, distinctness and that `K` does not separate `i` from `j`.
    pub fn validate(&self, g: &Dag) -> Result<(), NumericError> {
        check_triple(g.n(), self.i, self.j, self.k)?;
        check_triple(g.n(), self.i, self.l, self.k)?;
        if self.j == self.l {
            return Err(NumericError::Precondition("j and l must differ".into()));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(NumericError::Precondition(format!("delta {} is outside [0, 1]", self.delta)));
        }
        if g.d_separated_pair(self.i, self.j, self.k)? {
            return Err(NumericError::Precondition(format!(
                "{} and {} are d-separated given {}",
                self.i, self.j, self.k
            )));
        }
        Ok(())
    }
}

/// True iff `i` and `l` are d-separated given `{j} ∪ K`. When `K` alone
/// already separates `i` from `l` the implication holds trivially and the
/// answer is true as well.
pub fn approx_implies(g: &Dag, q: &ApproxQuery) -> Result<bool, NumericError> {
    q.validate(g)?;
    if g.d_separated_pair(q.i, q.l, q.k)? {
        return Ok(true);
    }
    Ok(g.d_separated_pair(q.i, q.l, q.k.with(q.j))?)
}

/// `|ρ_{x,c·B} - ρ_{x,a·B} ρ_{a,c·B}|`, which vanishes when `c` and `x` are
/// d-separated given `{a} ∪ B`.
pub fn check_rho_factorization(sem: &NumericSem, x: Node, a: Node, c: Node, b: NodeSet) -> Result<f64, NumericError> {
    let g = sem.dag();
    check_triple(g.n(), x, a, b)?;
    check_triple(g.n(), x, c, b)?;
    check_triple(g.n(), a, c, b)?;
    if !g.d_separated_pair(x, c, b.with(a))? {
        return Err(NumericError::Precondition(format!(
            "{x} and {c} are not d-separated given {}",
            b.with(a)
        )));
    }
    let xc = sem.partial_correlation(x, c, b)?;
    let xa = sem.partial_correlation(x, a, b)?;
    let ac = sem.partial_correlation(a, c, b)?;
    Ok((xc - xa * ac).abs())
}

/// Gaussian conditional mutual information `-½ log(1 - ρ²)` in nats.
pub fn mutual_information(rho: f64) -> Result<f64, NumericError> {
    if rho.abs() >= 1.0 {
        return Err(NumericError::Degenerate(rho));
    }
    Ok(-0.5 * (1.0 - rho * rho).ln())
}

/// `I(i,j|K) - I(i,l|K) = ½ log((1 - ρ²_{i,l·K}) / (1 - ρ²_{i,j·K}))`.
pub fn mi_gap_from_rhos(rho_ij: f64, rho_il: f64) -> Result<f64, NumericError> {
    Ok(mutual_information(rho_ij)? - mutual_information(rho_il)?)
}

pub fn mi_gap(sem: &NumericSem, i: Node, j: Node, l: Node, k: NodeSet) -> Result<f64, NumericError> {
    let rho_ij = sem.partial_correlation(i, j, k)?;
    let rho_il = sem.partial_correlation(i, l, k)?;
    mi_gap_from_rhos(rho_ij, rho_il)
}

#[cfg(test)]
mod tests {
    use super::super::{draw_rng, ParamSampler};
    use super::*;
    use crate::graph::fixtures::{chain3, running_example};

    fn none() -> NodeSet {
        NodeSet::EMPTY
    }

    #[test]
    fn decision_examples() {
        assert!(!approx_implies(&running_example(), &ApproxQuery::new(1, 4, 5, none(), 0.1)).unwrap());
        assert!(approx_implies(&chain3(), &ApproxQuery::new(1, 2, 3, none(), 0.1)).unwrap());
        // 1 -> 3 <- 2 with 4 isolated from 1 given nothing: vacuous.
        let g = Dag::new(4, [(1, 3), (2, 3), (2, 4)]).unwrap();
        assert!(approx_implies(&g, &ApproxQuery::new(1, 3, 4, none(), 0.1)).unwrap());
    }

    #[test]
    fn invalid_queries_rejected() {
        let g = running_example();
        assert!(approx_implies(&g, &ApproxQuery::new(1, 3, 5, none(), 0.1)).is_err());
        assert!(approx_implies(&g, &ApproxQuery::new(1, 4, 4, none(), 0.1)).is_err());
        assert!(approx_implies(&g, &ApproxQuery::new(1, 4, 5, none(), 1.5)).is_err());
        assert!(approx_implies(&g, &ApproxQuery::new(1, 4, 5, NodeSet::singleton(1), 0.1)).is_err());
    }

    #[test]
    fn chain_factorization() {
        let g = chain3();
        for draw in 0..50 {
            let sem = ParamSampler::default().sem(&g, &mut draw_rng(5, draw)).unwrap();
            assert!(check_rho_factorization(&sem, 1, 2, 3, none()).unwrap() < 1e-9);
        }
        let sem = ParamSampler::default().sem(&running_example(), &mut draw_rng(5, 0)).unwrap();
        assert!(check_rho_factorization(&sem, 1, 4, 5, none()).is_err());
    }

    #[test]
    fn information_gap_closed_forms() {
        assert_eq!(mi_gap_from_rhos(0.3, -0.3).unwrap(), 0.0);
        let gap = mi_gap_from_rhos(0.0, 0.6).unwrap();
        assert!((gap + 0.5 * (1.0f64 / 0.64).ln()).abs() < 1e-15);
        assert!((gap + 0.22314).abs() < 1e-5);
        assert_eq!(mi_gap_from_rhos(1.0, 0.2), Err(NumericError::Degenerate(1.0)));
    }
}
