use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_sigma, NumericError, NumericSem};
use crate::graph::{Dag, Edge};

/// Generator for draw number `counter` under `master`: the stream depends
/// only on the pair, never on which thread runs the draw.
pub fn draw_rng(master: u64, counter: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(counter);
    rng
}

/// Edge weights uniform on `[-hi, -lo] ∪ [lo, hi]`, error variances uniform
/// on `[omega_lo, omega_hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamSampler {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub omega_lo: f64,
    pub omega_hi: f64,
}

impl Default for ParamSampler {
    fn default() -> Self {
        ParamSampler { lambda_lo: 0.2, lambda_hi: 2.0, omega_lo: 0.2, omega_hi: 2.0 }
    }
}

impl ParamSampler {
    pub fn lambda<R: Rng + ?Sized>(&self, g: &Dag, rng: &mut R) -> BTreeMap<Edge, f64> {
        g.edges()
            .iter()
            .map(|&e| {
                let magnitude = rng.random_range(self.lambda_lo..=self.lambda_hi);
                (e, if rng.random_bool(0.5) { magnitude } else { -magnitude })
            })
            .collect()
    }

    pub fn omega<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(self.omega_lo..=self.omega_hi)).collect()
    }

    pub fn sem<R: Rng + ?Sized>(&self, g: &Dag, rng: &mut R) -> Result<NumericSem, NumericError> {
        let lambda = self.lambda(g, rng);
        let omega = self.omega(g.n(), rng);
        build_sigma(g, lambda, omega)
    }
}
