//! Numerical search for distinguishing witnesses.
//!
//! A witness for a [`StateSet`] is a unit vector `φ` on the receiving
//! party's space with `⟨φ|U_k†U_l|φ⟩ = δ_kl`, i.e. the vectors `U_k φ` are
//! orthonormal. Its existence is necessary for one-way distinguishability
//! in the set's direction. The search minimizes
//! `f(φ) = Σ_{k<l} |⟨φ|U_k†U_l|φ⟩|²` over the unit sphere; the diagonal
//! terms vanish identically there and are omitted.
//!
//! A failed search is evidence, not proof. Certificates of absence come from
//! [`crate::prover`].

mod basis;
pub(crate) mod objective;
pub(crate) mod optimizer;

pub use basis::{find_witness_basis, WitnessBasisReport, PENALTY_WEIGHT};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::ComplexVector;
use crate::state::StateSet;
use crate::tol;
use objective::PairProducts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    WitnessFound,
    NoWitnessFound,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::WitnessFound => "WITNESS_FOUND",
            Verdict::NoWitnessFound => "NO_WITNESS_FOUND",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `f(φ)` together with the off-diagonal residuals `⟨φ|U_k†U_l|φ⟩`, `k < l`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessObjectiveValue {
    pub f: f64,
    pub residuals: Vec<((usize, usize), Complex64)>,
}

impl WitnessObjectiveValue {
    pub fn is_witness(&self) -> bool {
        self.f <= tol::FEAS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 200,
            seed: 0,
            max_iters: 2000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidArgument(
                "max_iters must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub verdict: Verdict,
    /// Normalized and gauge-fixed.
    pub best_phi: ComplexVector,
    pub best_f: f64,
    /// Restart that produced `best_phi` (lowest index on ties).
    pub best_restart: usize,
    pub restarts: usize,
    pub seed: u64,
    pub per_restart_best_f: Vec<f64>,
}

fn check_dim(phi: &ComplexVector, ss: &StateSet) -> Result<()> {
    if phi.dim() != ss.receiver_dim() {
        return Err(Error::DimensionMismatch {
            expected: ss.receiver_dim(),
            found: phi.dim(),
        });
    }
    Ok(())
}

/// Evaluates `f` and every off-diagonal residual at `phi` (assumed normalized).
pub fn objective(phi: &ComplexVector, ss: &StateSet) -> Result<WitnessObjectiveValue> {
    check_dim(phi, ss)?;
    let pp = PairProducts::new(ss);
    let res = pp.residuals(phi.as_slice());
    let f = res.iter().map(|r| r.norm_sqr()).sum();
    Ok(WitnessObjectiveValue {
        f,
        residuals: pp.pairs().iter().copied().zip(res).collect(),
    })
}

/// Wirtinger gradient `∂f/∂φ*`. The real gradient with respect to
/// `(Re φ, Im φ)` is twice its real and imaginary parts.
pub fn gradient(phi: &ComplexVector, ss: &StateSet) -> Result<ComplexVector> {
    check_dim(phi, ss)?;
    let pp = PairProducts::new(ss);
    let mut g = vec![Complex64::new(0.0, 0.0); phi.dim()];
    pp.value_and_grad(phi.as_slice(), &mut g);
    Ok(ComplexVector::new(g))
}

/// RNG for restart `index` under `seed`; each restart gets its own stream.
pub(crate) fn restart_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Multistart minimization of `f` over the unit sphere.
///
/// Restarts run concurrently; the best result is the minimum `f` with ties
/// broken by restart index, so reports depend only on the inputs.
pub fn solve_witness(ss: &StateSet, config: &SolverConfig) -> Result<WitnessReport> {
    config.validate()?;
    let pp = PairProducts::new(ss);
    let dim = pp.dim();
    let runs: Vec<(Vec<Complex64>, f64)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(config.seed, r as u64);
            let start = ComplexVector::random_unit(dim, &mut rng);
            let out = optimizer::descend(
                |p, g| pp.value_and_grad(p, g),
                start.into_inner().as_slice().to_vec(),
                config.max_iters,
                false,
            );
            (out.phi, out.f)
        })
        .collect();

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.1 < runs[best].1 {
            best = i;
        }
    }
    let best_phi = ComplexVector::new(runs[best].0.clone())
        .normalized()?
        .gauge_fixed();
    // re-evaluate on the reported vector so best_f matches best_phi exactly
    let best_f = pp.value(best_phi.as_slice());
    let verdict = if best_f <= tol::FEAS {
        Verdict::WitnessFound
    } else {
        Verdict::NoWitnessFound
    };
    Ok(WitnessReport {
        verdict,
        best_phi,
        best_f,
        best_restart: best,
        restarts: config.restarts,
        seed: config.seed,
        per_restart_best_f: runs.iter().map(|r| r.1).collect(),
    })
}

/// One descent run with every accepted objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentTrace {
    pub phi: ComplexVector,
    pub f: f64,
    pub iterations: usize,
    /// Objective at the start and after each accepted step.
    pub history: Vec<f64>,
}

/// A single descent from `start`, recording the objective after each step.
pub fn descend_from(
    ss: &StateSet,
    start: &ComplexVector,
    max_iters: usize,
) -> Result<DescentTrace> {
    check_dim(start, ss)?;
    let pp = PairProducts::new(ss);
    let out = optimizer::descend(
        |p, g| pp.value_and_grad(p, g),
        start.normalized()?.as_slice().to_vec(),
        max_iters,
        true,
    );
    Ok(DescentTrace {
        phi: ComplexVector::new(out.phi),
        f: out.f,
        iterations: out.iterations,
        history: out.history,
    })
}

/// True when `N > dim` of the receiving space: the states are then not
/// perfectly distinguishable by LOCC at all.
pub fn check_nd_bound(ss: &StateSet) -> bool {
    ss.len() > ss.receiver_dim()
}
