use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::objective::PairProducts;
use super::{optimizer, restart_rng, SolverConfig};
use crate::error::Result;
use crate::linalg::ComplexVector;
use crate::state::StateSet;
use crate::tol;

/// Weight of the overlap penalty `μ Σ_q |⟨q|φ⟩|²` against previously found
/// witnesses.
pub const PENALTY_WEIGHT: f64 = 10.0;

/// Restarts are launched in batches of this size; the search for one vector
/// stops after the first batch that contains a success.
const BATCH: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessBasisReport {
    /// Orthonormal witnesses, in the order found.
    pub vectors: Vec<ComplexVector>,
    pub completeness: usize,
    /// `⟨v_a|v_b⟩` for the returned vectors.
    pub pairwise_gram: DMatrix<Complex64>,
}

impl WitnessBasisReport {
    pub fn is_complete(&self, dim: usize) -> bool {
        self.completeness == dim
    }
}

/// Greedily collects up to `dim` mutually orthogonal witnesses.
///
/// Each new vector is found by multistart descent on
/// `f(φ) + μ Σ_q |⟨q|φ⟩|²` over the vectors `q` already accepted; the result
/// is then projected off the earlier vectors, renormalized and re-verified
/// against the plain witness condition. The search stops at the first vector
/// that cannot be found.
pub fn find_witness_basis(ss: &StateSet, restarts: usize, seed: u64) -> Result<WitnessBasisReport> {
    let config = SolverConfig {
        restarts,
        seed,
        ..SolverConfig::default()
    };
    find_witness_basis_with(ss, &config)
}

pub(crate) fn find_witness_basis_with(
    ss: &StateSet,
    config: &SolverConfig,
) -> Result<WitnessBasisReport> {
    config.validate()?;
    let pp = PairProducts::new(ss);
    let dim = pp.dim();
    let mut found: Vec<ComplexVector> = Vec::new();

    for slot in 0..dim {
        let previous: Vec<Vec<Complex64>> = found.iter().map(|v| v.as_slice().to_vec()).collect();
        let eval = |phi: &[Complex64], grad: &mut [Complex64]| -> f64 {
            let mut f = pp.value_and_grad(phi, grad);
            for q in &previous {
                let s: Complex64 = q.iter().zip(phi).map(|(a, b)| a.conj() * b).sum();
                f += PENALTY_WEIGHT * s.norm_sqr();
                for j in 0..phi.len() {
                    grad[j] += q[j] * s * PENALTY_WEIGHT;
                }
            }
            f
        };

        let mut candidate = None;
        let mut next = 0;
        while next < config.restarts && candidate.is_none() {
            let end = (next + BATCH).min(config.restarts);
            let batch: Vec<(Vec<Complex64>, f64)> = (next..end)
                .into_par_iter()
                .map(|r| {
                    let stream = (slot * config.restarts + r) as u64;
                    let mut rng = restart_rng(config.seed, stream);
                    let start = ComplexVector::random_unit(dim, &mut rng);
                    let out = optimizer::descend(
                        eval,
                        start.as_slice().to_vec(),
                        config.max_iters,
                        false,
                    );
                    (out.phi, out.f)
                })
                .collect();
            candidate = batch
                .into_iter()
                .find(|(_, f)| *f <= tol::FEAS)
                .map(|(p, _)| p);
            next = end;
        }
        let Some(raw) = candidate else { break };

        let mut v = ComplexVector::new(raw);
        for q in &found {
            let overlap = q.dot(&v);
            v = ComplexVector::new(
                v.as_slice()
                    .iter()
                    .zip(q.as_slice())
                    .map(|(x, y)| x - y * overlap)
                    .collect(),
            );
        }
        let Ok(v) = v.normalized() else { break };
        let v = v.gauge_fixed();
        let f = pp.value(v.as_slice());
        let orthogonal = found.iter().all(|q| q.dot(&v).norm() <= tol::ORTH);
        if f > tol::FEAS || !orthogonal {
            break;
        }
        found.push(v);
    }

    let n = found.len();
    let gram = DMatrix::from_fn(n, n, |a, b| found[a].dot(&found[b]));
    Ok(WitnessBasisReport {
        completeness: n,
        vectors: found,
        pairwise_gram: gram,
    })
}
