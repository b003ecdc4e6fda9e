use std::collections::BTreeMap;

use rand::Rng;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{approx_implies, build_sigma, draw_rng, ApproxQuery, NumericError, NumericSem, ParamSampler};
use crate::graph::{Dag, Edge};

/// Scale factors applied to selected error variances, `10^-6 ..= 10^6`.
pub const EPSILON_GRID: [f64; 13] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6];

/// A model with `|ρ_{i,j·K}| <= delta < |ρ_{i,l·K}|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub sem: NumericSem,
    pub rho_ij: f64,
    pub rho_il: f64,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Witness", 4)?;
        st.serialize_field("lambda", &super::EdgeMap(self.sem.lambda()))?;
        st.serialize_field("omega", &super::NodeMap(self.sem.omega()))?;
        st.serialize_field("rho_ij", &self.rho_ij)?;
        st.serialize_field("rho_il", &self.rho_il)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Witness(Box<Witness>),
    /// Budget spent without success. This does not show that none exists.
    NotFound { restarts: usize },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchOutcome::Witness(w) => Some(w),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Randomized search for a model refuting the approximate implication.
/// Each of `budget` restarts draws parameters (odd restarts also zero about
/// half of the edge weights), then scales the error variance of every node
/// and every pair of nodes through [`EPSILON_GRID`].
pub fn search_counterexample(g: &Dag, q: &ApproxQuery, budget: usize, seed: u64) -> Result<SearchOutcome, NumericError> {
    if approx_implies(g, q)? {
        return Err(NumericError::Precondition(
            "the approximate implication holds, so no witness exists".into(),
        ));
    }
    let sampler = ParamSampler::default();
    let n = g.n();
    let mut groups: Vec<Vec<usize>> = vec![vec![]];
    groups.extend((0..n).map(|v| vec![v]));
    for v in 0..n {
        for w in v + 1..n {
            groups.push(vec![v, w]);
        }
    }
    for restart in 0..budget {
        let mut rng = draw_rng(seed, restart as u64);
        let mut lambda = sampler.lambda(g, &mut rng);
        if restart % 2 == 1 {
            for x in lambda.values_mut() {
                if rng.random_bool(0.5) {
                    *x = 0.0;
                }
            }
        }
        let omega = sampler.omega(n, &mut rng);
        for group in &groups {
            let grid: &[f64] = if group.is_empty() { &[1.0] } else { &EPSILON_GRID };
            for &eps in grid {
                let mut scaled = omega.clone();
                for &v in group {
                    scaled[v] *= eps;
                }
                if let Some(w) = try_witness(g, q, lambda.clone(), scaled) {
                    return Ok(SearchOutcome::Witness(Box::new(w)));
                }
            }
        }
    }
    Ok(SearchOutcome::NotFound { restarts: budget })
}

fn try_witness(g: &Dag, q: &ApproxQuery, lambda: BTreeMap<Edge, f64>, omega: Vec<f64>) -> Option<Witness> {
    let sem = build_sigma(g, lambda, omega).ok()?;
    let rho_ij = sem.partial_correlation(q.i, q.j, q.k).ok()?;
    let rho_il = sem.partial_correlation(q.i, q.l, q.k).ok()?;
    (rho_ij.abs() <= q.delta && rho_il.abs() > q.delta).then_some(Witness { sem, rho_ij, rho_il })
}
