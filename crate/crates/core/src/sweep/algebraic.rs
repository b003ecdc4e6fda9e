use std::ops::AddAssign;

use serde::Serialize;

use super::elementary_triples;
use crate::exec::Execution;
use crate::graph::Dag;
use crate::implication::{graphical_by_routes, graphical_by_simple_paths, ImplicationError};
use crate::param::{trek_rule_sigma, trek_systems_nsi, ParamError, SymbolicCovariance};
use crate::poly::Var;

/// Counts over every elementary statement of every graph. Except for the
/// separation counts, only non-separated statements are compared.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub dags: usize,
    /// Separated triples; their minor must be the zero polynomial.
    pub separated: usize,
    pub separation_mismatches: usize,
    pub statements: usize,
    /// Monomial minor vs. a single route with covered parents.
    pub graphical_mismatches: usize,
    /// The same criterion phrased with simple d-connecting paths.
    pub graphical_mismatches_simple_paths: usize,
    /// Monomial minor vs. exactly one trek system without sided intersection.
    pub trek_system_mismatches: usize,
    pub edge_checks: usize,
    /// Edge weight divides the minor vs. the edge lies on every route.
    pub edge_mismatches: usize,
    pub edge_mismatches_simple_paths: usize,
}

impl AddAssign for EquivalenceReport {
    fn add_assign(&mut self, o: Self) {
        self.dags += o.dags;
        self.separated += o.separated;
        self.separation_mismatches += o.separation_mismatches;
        self.statements += o.statements;
        self.graphical_mismatches += o.graphical_mismatches;
        self.graphical_mismatches_simple_paths += o.graphical_mismatches_simple_paths;
        self.trek_system_mismatches += o.trek_system_mismatches;
        self.edge_checks += o.edge_checks;
        self.edge_mismatches += o.edge_mismatches;
        self.edge_mismatches_simple_paths += o.edge_mismatches_simple_paths;
    }
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.separation_mismatches == 0
            && self.graphical_mismatches == 0
            && self.trek_system_mismatches == 0
            && self.edge_mismatches == 0
    }
}

/// One pass over `dags` comparing the algebraic minor with the graphical
/// criteria: vanishing, graphicality, trek-system uniqueness and edge
/// divisibility.
pub fn equivalence_sweep(dags: &[Dag], exec: Execution) -> Result<EquivalenceReport, ImplicationError> {
    let parts = exec.map(dags, equivalence_for);
    let mut total = EquivalenceReport::default();
    for p in parts {
        total += p?;
    }
    Ok(total)
}

fn equivalence_for(g: &Dag) -> Result<EquivalenceReport, ImplicationError> {
    let cov = SymbolicCovariance::new(g);
    let mut r = EquivalenceReport { dags: 1, ..Default::default() };
    for (i, j, k) in elementary_triples(g.n()) {
        let minor = cov.almost_principal_minor(i, j, k)?;
        if g.d_separated_pair(i, j, k)? {
            r.separated += 1;
            r.separation_mismatches += !minor.is_zero() as usize;
            continue;
        }
        r.statements += 1;
        r.separation_mismatches += minor.is_zero() as usize;
        let monomial = minor.is_monomial();
        r.graphical_mismatches += (graphical_by_routes(g, i, j, k)? != monomial) as usize;
        r.graphical_mismatches_simple_paths += (graphical_by_simple_paths(g, i, j, k)? != monomial) as usize;
        let systems = trek_systems_nsi(g, k.with(i), k.with(j))?;
        r.trek_system_mismatches += ((systems.len() == 1) != monomial) as usize;
        let (mono, _) = minor.monomial_factors()?;
        // Enumerate once; the per-edge coverage queries would redo this for every edge.
        let routes = g.d_connecting_routes(i, j, k)?;
        let paths = g.d_connecting_paths(i, j, k)?;
        for &e in g.edges() {
            r.edge_checks += 1;
            let divides = mono.exponent(Var::edge(e)) > 0;
            let on_routes = routes.iter().all(|rt| rt.uses_edge(e));
            let on_paths = paths.iter().all(|p| p.traverses(e.0, e.1));
            r.edge_mismatches += (on_routes != divides) as usize;
            r.edge_mismatches_simple_paths += (on_paths != divides) as usize;
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TrekRuleReport {
    pub dags: usize,
    pub entries: usize,
    pub mismatches: usize,
}

/// Compares each covariance entry of the series parameterization with the
/// sum over enumerated treks.
pub fn trek_rule_sweep(dags: &[Dag], exec: Execution) -> Result<TrekRuleReport, ParamError> {
    let parts = exec.map(dags, |g| -> Result<(usize, usize), ParamError> {
        let cov = SymbolicCovariance::new(g);
        let mut entries = 0;
        let mut bad = 0;
        for i in 1..=g.n() {
            for j in i..=g.n() {
                entries += 1;
                bad += (trek_rule_sigma(g, i, j)? != *cov.sigma(i, j)) as usize;
            }
        }
        Ok((entries, bad))
    });
    let mut r = TrekRuleReport { dags: dags.len(), ..Default::default() };
    for p in parts {
        let (entries, bad) = p?;
        r.entries += entries;
        r.mismatches += bad;
    }
    Ok(r)
}
