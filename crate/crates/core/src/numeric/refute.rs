use rand::Rng;

use super::{build_sigma, draw_rng, NumericError, NumericSem, ParamSampler};
use crate::graph::{Dag, Edge, Node, NodeSet};
use crate::implication::{CiStatement, GraphAlgebra, Verdict};
use crate::poly::{MvPoly, VarKind};

/// A piece of the model cut out by one added statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// The graph with this edge removed.
    EdgeDeleted(Edge),
    /// The zero set of a factor that is not a single edge weight.
    Residual(MvPoly),
}

impl Component {
    /// Components read off the saturated generator of `i _||_ j | K`.
    pub fn of(alg: &GraphAlgebra, (i, j, k): (Node, Node, NodeSet)) -> Result<Vec<Component>, NumericError> {
        let sat = alg.saturated_minor(i, j, k)?;
        if sat.is_zero() {
            return Err(NumericError::Precondition(format!("{i} and {j} are d-separated given {k}")));
        }
        let (mono, residual) = sat.monomial_factors().map_err(|e| NumericError::Implication(e.into()))?;
        let mut out: Vec<Component> = mono.vars().filter_map(|v| v.as_edge()).map(Component::EdgeDeleted).collect();
        if !residual.is_constant() {
            out.push(Component::Residual(residual));
        }
        Ok(out)
    }
}

const ROOT_BOUND: f64 = 10.0;

/// A random model on `g` lying in the component, or `None` when this draw
/// cannot be completed: a residual would need a nonpositive variance or a
/// parameter more than ten times the sampling range.
pub fn sample_component<R: Rng + ?Sized>(
    g: &Dag,
    c: &Component,
    sampler: &ParamSampler,
    rng: &mut R,
) -> Option<NumericSem> {
    let mut lambda = sampler.lambda(g, rng);
    let mut omega = sampler.omega(g.n(), rng);
    match c {
        Component::EdgeDeleted(e) => {
            lambda.insert(*e, 0.0);
        }
        Component::Residual(r) => {
            // Solve for a variable the residual is linear in, edge weights first.
            let mut linear: Vec<_> = r.variables().into_iter().filter(|&v| r.degree_in(v) == 1).collect();
            linear.sort_by_key(|v| !v.is_lambda());
            let v = *linear.first()?;
            let coeffs = r.coefficients_in(v);
            let value = |x| match x {
                VarKind::Omega(k) => omega[k - 1],
                VarKind::Lambda(a, b) => lambda.get(&(a, b)).copied().unwrap_or(0.0),
            };
            let a = coeffs[1].eval_f64(&|x| value(x.kind()));
            let b = coeffs[0].eval_f64(&|x| value(x.kind()));
            if a.abs() < 1e-9 {
                return None;
            }
            let root = -b / a;
            // Far-out roots make the covariance too ill-conditioned to test.
            match v.kind() {
                VarKind::Lambda(p, q) if root.abs() <= ROOT_BOUND * sampler.lambda_hi => {
                    lambda.insert((p, q), root);
                }
                VarKind::Omega(k) if root > 0.0 && root <= ROOT_BOUND * sampler.omega_hi => omega[k - 1] = root,
                _ => return None,
            }
        }
    }
    build_sigma(g, lambda, omega).ok()
}

/// Tries to turn `NotImpliedOnVariety` into `NotImplied` by sampling models
/// inside each component and looking for one where the query fails. Returns
/// the refuting model when one is found; other verdicts pass through.
pub fn upgrade_verdict(
    alg: &GraphAlgebra,
    extra: (Node, Node, NodeSet),
    query: &CiStatement,
    verdict: Verdict,
    draws: usize,
    seed: u64,
) -> Result<(Verdict, Option<NumericSem>), NumericError> {
    if verdict != Verdict::NotImpliedOnVariety {
        return Ok((verdict, None));
    }
    let (a, b, c) = query.as_elementary()?;
    let (i, j, k) = extra;
    let sampler = ParamSampler::default();
    let mut counter = 0u64;
    for comp in Component::of(alg, extra)? {
        for _ in 0..draws {
            let mut rng = draw_rng(seed, counter);
            counter += 1;
            let Some(sem) = sample_component(alg.dag(), &comp, &sampler, &mut rng) else {
                continue;
            };
            let on_model = sem.partial_correlation(i, j, k)?.abs() < 1e-8;
            if on_model && sem.partial_correlation(a, b, c)?.abs() > 1e-6 {
                return Ok((Verdict::NotImplied, Some(sem)));
            }
        }
    }
    Ok((verdict, None))
}
