use serde::Serialize;

use super::elementary_triples;
use crate::exec::Execution;
use crate::graph::{Dag, Node, NodeSet};
use crate::implication::{CiStatement, GraphAlgebra, Verdict};
use crate::numeric::{
    approx_implies, check_rho_factorization, draw_rng, mi_gap_from_rhos, sample_component, search_counterexample,
    ApproxQuery, Component, NumericError, ParamSampler, SearchOutcome,
};

/// Per-graph generator streams: graph `d` uses counters `d << 32 ..`.
fn stream(d: usize, local: usize) -> u64 {
    ((d as u64) << 32) | local as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessConfig {
    pub sems_per_case: usize,
    pub seed: u64,
    pub dsep_tolerance_exp: i32,
    pub implied_tolerance_exp: i32,
}

impl Default for SoundnessConfig {
    fn default() -> Self {
        SoundnessConfig { sems_per_case: 200, seed: 0x5eed, dsep_tolerance_exp: -9, implied_tolerance_exp: -8 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub dags: usize,
    /// d-separated elementary statements, each checked on every draw.
    pub dsep_cases: usize,
    pub dsep_checks: usize,
    pub dsep_failures: usize,
    pub dsep_max_abs_rho: f64,
    /// (added statement, implied query) pairs beyond d-separation.
    pub implied_cases: usize,
    pub implied_checks: usize,
    pub implied_failures: usize,
    pub implied_max_abs_rho: f64,
    pub components: usize,
    pub component_samples: usize,
    /// Components for which no model could be drawn.
    pub unsampled_components: usize,
}

impl SoundnessReport {
    fn merge(&mut self, o: SoundnessReport) {
        self.dags += o.dags;
        self.dsep_cases += o.dsep_cases;
        self.dsep_checks += o.dsep_checks;
        self.dsep_failures += o.dsep_failures;
        self.dsep_max_abs_rho = self.dsep_max_abs_rho.max(o.dsep_max_abs_rho);
        self.implied_cases += o.implied_cases;
        self.implied_checks += o.implied_checks;
        self.implied_failures += o.implied_failures;
        self.implied_max_abs_rho = self.implied_max_abs_rho.max(o.implied_max_abs_rho);
        self.components += o.components;
        self.component_samples += o.component_samples;
        self.unsampled_components += o.unsampled_components;
    }
}

/// d-separated statements must vanish on random models of each graph, and
/// every `Implied` query must vanish on random models drawn inside each
/// component of the model with the added statement.
pub fn soundness_sweep(dags: &[Dag], cfg: SoundnessConfig, exec: Execution) -> Result<SoundnessReport, NumericError> {
    let parts = exec.map_range(dags.len(), |d| soundness_for(d, &dags[d], &cfg));
    let mut total = SoundnessReport::default();
    for p in parts {
        total.merge(p?);
    }
    Ok(total)
}

fn soundness_for(d: usize, g: &Dag, cfg: &SoundnessConfig) -> Result<SoundnessReport, NumericError> {
    let sampler = ParamSampler::default();
    let dsep_tol = 10f64.powi(cfg.dsep_tolerance_exp);
    let implied_tol = 10f64.powi(cfg.implied_tolerance_exp);
    let triples = elementary_triples(g.n());
    let mut separated = Vec::new();
    let mut open = Vec::new();
    for &t in &triples {
        if g.d_separated_pair(t.0, t.1, t.2)? {
            separated.push(t);
        } else {
            open.push(t);
        }
    }
    let mut r = SoundnessReport { dags: 1, dsep_cases: separated.len(), ..Default::default() };
    let mut counter = 0;
    for _ in 0..cfg.sems_per_case {
        let sem = sampler.sem(g, &mut draw_rng(cfg.seed, stream(d, counter)))?;
        counter += 1;
        for &(i, j, k) in &separated {
            let rho = sem.partial_correlation(i, j, k)?.abs();
            r.dsep_checks += 1;
            r.dsep_failures += (rho >= dsep_tol) as usize;
            r.dsep_max_abs_rho = r.dsep_max_abs_rho.max(rho);
        }
    }

    let alg = GraphAlgebra::new(g);
    for &extra in &open {
        let mut implied = vec![extra];
        for &q in &open {
            let st = CiStatement::elementary(q.0, q.1, q.2)?;
            if q != extra && alg.implies_exact(extra, &st)? == Verdict::Implied {
                implied.push(q);
            }
        }
        if implied.len() == 1 {
            continue;
        }
        r.implied_cases += implied.len() - 1;
        for comp in Component::of(&alg, extra)? {
            r.components += 1;
            let mut drawn = 0;
            for _ in 0..cfg.sems_per_case * 10 {
                if drawn == cfg.sems_per_case {
                    break;
                }
                let mut rng = draw_rng(cfg.seed, stream(d, counter));
                counter += 1;
                let Some(sem) = sample_component(g, &comp, &sampler, &mut rng) else {
                    continue;
                };
                drawn += 1;
                for &(i, j, k) in &implied {
                    let rho = sem.partial_correlation(i, j, k)?.abs();
                    r.implied_checks += 1;
                    r.implied_failures += (rho >= implied_tol) as usize;
                    r.implied_max_abs_rho = r.implied_max_abs_rho.max(rho);
                }
            }
            r.component_samples += drawn;
            r.unsampled_components += (drawn == 0) as usize;
        }
    }
    Ok(r)
}

/// Every valid `(i, j, l, K)` on `g`, in a fixed order.
pub(crate) fn approx_queries(g: &Dag, delta: f64) -> Vec<ApproxQuery> {
    let n = g.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                if i == j || j == l || i == l {
                    continue;
                }
                for k in NodeSet::full(n).without(i).without(j).without(l).subsets() {
                    let q = ApproxQuery::new(i, j, l, k, delta);
                    if q.validate(g).is_ok() {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ApproxReport {
    pub dags: usize,
    pub queries: usize,
    pub implied: usize,
    pub implied_draws: usize,
    /// Largest `|ρ_il| - |ρ_ij|` seen on an implied query.
    pub max_excess: f64,
    pub max_factorization_residual: f64,
    pub refutable: usize,
    pub witnesses: usize,
    /// Queries where the search ran out of budget, as `graph edges | query`.
    pub not_found: Vec<String>,
}

/// For every valid query on every graph: implied queries are checked on
/// `draws` random models, the others must yield a witness within `budget`.
pub fn approx_sweep(
    dags: &[Dag],
    delta: f64,
    draws: usize,
    budget: usize,
    seed: u64,
    exec: Execution,
) -> Result<ApproxReport, NumericError> {
    let parts = exec.map_range(dags.len(), |d| approx_for(d, &dags[d], delta, draws, budget, seed));
    let mut total = ApproxReport::default();
    for p in parts {
        let p = p?;
        total.dags += p.dags;
        total.queries += p.queries;
        total.implied += p.implied;
        total.implied_draws += p.implied_draws;
        total.max_excess = total.max_excess.max(p.max_excess);
        total.max_factorization_residual = total.max_factorization_residual.max(p.max_factorization_residual);
        total.refutable += p.refutable;
        total.witnesses += p.witnesses;
        total.not_found.extend(p.not_found);
    }
    Ok(total)
}

fn approx_for(d: usize, g: &Dag, delta: f64, draws: usize, budget: usize, seed: u64) -> Result<ApproxReport, NumericError> {
    let sampler = ParamSampler::default();
    let queries = approx_queries(g, delta);
    let mut r = ApproxReport { dags: 1, queries: queries.len(), max_excess: f64::NEG_INFINITY, ..Default::default() };
    let mut implied = Vec::new();
    for q in &queries {
        if approx_implies(g, q)? {
            implied.push(q);
            continue;
        }
        r.refutable += 1;
        match search_counterexample(g, q, budget, seed)? {
            SearchOutcome::Witness(_) => r.witnesses += 1,
            SearchOutcome::NotFound { .. } => r.not_found.push(format!(
                "{:?} | i={} j={} l={} K={}",
                g.edges(),
                q.i,
                q.j,
                q.l,
                q.k
            )),
        }
    }
    r.implied = implied.len();
    if implied.is_empty() {
        return Ok(r);
    }
    // Which implied queries meet the factorization precondition.
    let factorizable: Vec<bool> = implied
        .iter()
        .map(|q| g.d_separated_pair(q.i, q.l, q.k.with(q.j)))
        .collect::<Result<_, _>>()?;
    for s in 0..draws {
        let sem = sampler.sem(g, &mut draw_rng(seed, stream(d, s)))?;
        for (q, &fact) in implied.iter().zip(&factorizable) {
            let rho_ij = sem.partial_correlation(q.i, q.j, q.k)?;
            let rho_il = sem.partial_correlation(q.i, q.l, q.k)?;
            r.implied_draws += 1;
            r.max_excess = r.max_excess.max(rho_il.abs() - rho_ij.abs());
            if fact {
                let res = check_rho_factorization(&sem, q.i, q.j, q.l, q.k)?;
                r.max_factorization_residual = r.max_factorization_residual.max(res);
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MiGapReport {
    pub dags: usize,
    pub draws: usize,
    pub checks: usize,
    pub min_gap: f64,
    /// Gaps below `-1e-12`.
    pub negative: usize,
}

/// Random graphs on 3 to `max_n` nodes; on each random model every implied
/// approximate query must have a nonnegative information gap.
pub fn mi_gap_sweep(
    dag_count: usize,
    draws_per_dag: usize,
    max_n: usize,
    seed: u64,
    exec: Execution,
) -> Result<MiGapReport, NumericError> {
    let sizes: Vec<Node> = (0..dag_count).map(|d| 3 + d % (max_n.max(3) - 2)).collect();
    let parts = exec.map_range(dag_count, |d| -> Result<MiGapReport, NumericError> {
        let g = &super::random_dags(sizes[d], 1, seed ^ stream(d, 0))[0];
        let implied: Vec<ApproxQuery> = approx_queries(g, 0.0)
            .into_iter()
            .filter(|q| approx_implies(g, q).unwrap_or(false))
            .collect();
        let mut r = MiGapReport { dags: 1, min_gap: f64::INFINITY, ..Default::default() };
        for s in 0..draws_per_dag {
            let sem = ParamSampler::default().sem(g, &mut draw_rng(seed, stream(d, s)))?;
            r.draws += 1;
            for q in &implied {
                let rho_ij = sem.partial_correlation(q.i, q.j, q.k)?;
                let rho_il = sem.partial_correlation(q.i, q.l, q.k)?;
                let gap = mi_gap_from_rhos(rho_ij, rho_il)?;
                r.checks += 1;
                r.min_gap = r.min_gap.min(gap);
                r.negative += (gap < -1e-12) as usize;
            }
        }
        Ok(r)
    });
    let mut total = MiGapReport { min_gap: f64::INFINITY, ..Default::default() };
    for p in parts {
        let p = p?;
        total.dags += p.dags;
        total.draws += p.draws;
        total.checks += p.checks;
        total.min_gap = total.min_gap.min(p.min_gap);
        total.negative += p.negative;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::super::dags_between;
    use super::*;

    #[test]
    fn small_numeric_sweeps() {
        let dags = dags_between(3, 3).unwrap();
        let cfg = SoundnessConfig { sems_per_case: 20, ..Default::default() };
        let s = soundness_sweep(&dags, cfg, Execution::Sequential).unwrap();
        assert_eq!((s.dsep_failures, s.implied_failures), (0, 0));
        assert!(s.dsep_cases > 0 && s.implied_cases > 0);
        let a = approx_sweep(&dags, 0.05, 20, 100, 3, Execution::Sequential).unwrap();
        assert!(a.not_found.is_empty());
        assert!(a.max_excess <= 1e-9 && a.max_factorization_residual < 1e-9);
        let m = mi_gap_sweep(4, 5, 4, 3, Execution::Sequential).unwrap();
        assert_eq!(m.negative, 0);
    }
}
