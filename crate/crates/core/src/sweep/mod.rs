//! Exhaustive and sampled cross-checks between the graphical, algebraic and
//! numeric sides. Each sweep returns counts; zero mismatches is the
//! expected outcome.

mod algebraic;
mod numeric;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{all_dags, random_dag, Dag, GraphError, Node, NodeSet};

pub use algebraic::{equivalence_sweep, trek_rule_sweep, EquivalenceReport, TrekRuleReport};
pub use numeric::{
    approx_sweep, mi_gap_sweep, soundness_sweep, ApproxReport, MiGapReport, SoundnessConfig, SoundnessReport,
};

/// All labeled DAGs on `min_n..=max_n` nodes.
pub fn dags_between(min_n: usize, max_n: usize) -> Result<Vec<Dag>, GraphError> {
    let mut out = Vec::new();
    for n in min_n..=max_n {
        out.extend(all_dags(n)?);
    }
    Ok(out)
}

/// `count` random DAGs on `n` nodes, edge probability one half.
pub fn random_dags(n: usize, count: usize, seed: u64) -> Vec<Dag> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_dag(n, 0.5, &mut rng)).collect()
}

/// Elementary triples `(i, j, K)` with `i < j`.
pub fn elementary_triples(n: usize) -> Vec<(Node, Node, NodeSet)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in NodeSet::full(n).without(i).without(j).subsets() {
                out.push((i, j, k));
            }
        }
    }
    out
}
