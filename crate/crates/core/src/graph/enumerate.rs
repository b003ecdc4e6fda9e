use rand::seq::SliceRandom;
use rand::Rng;

use super::{Dag, GraphError, Node};

/// Largest node count for which [`all_dags`] will enumerate.
pub const MAX_ENUMERATION_NODES: usize = 5;

/// Every labeled DAG on `1..=n`, in a fixed deterministic order.
///
/// Each unordered pair is absent, forward or backward; candidates with a
/// directed cycle are dropped. Sizes: 1, 1, 3, 25, 543, 29281.
pub fn all_dags(n: usize) -> Result<Vec<Dag>, GraphError> {
    if n > MAX_ENUMERATION_NODES {
        return Err(GraphError::EnumerationTooLarge { n, limit: MAX_ENUMERATION_NODES });
    }
    let pairs: Vec<(Node, Node)> = (1..=n)
        .flat_map(|a| ((a + 1)..=n).map(move |b| (a, b)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    let mut edges = Vec::with_capacity(pairs.len());
    for mut code in 0..total {
        edges.clear();
        for &(a, b) in &pairs {
            match code % 3 {
                1 => edges.push((a, b)),
                2 => edges.push((b, a)),
                _ => {}
            }
            code /= 3;
        }
        if let Ok(g) = Dag::new(n, edges.iter().copied()) {
            out.push(g);
        }
    }
    Ok(out)
}

/// A random DAG: nodes are shuffled into a causal order and each forward
/// pair receives an edge with probability `edge_prob`.
pub fn random_dag<R: Rng + ?Sized>(n: usize, edge_prob: f64, rng: &mut R) -> Dag {
    let mut order: Vec<Node> = (1..=n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random_bool(edge_prob) {
                edges.push((order[a], order[b]));
            }
        }
    }
    Dag::new(n, edges).expect("edges follow a topological order")
}
