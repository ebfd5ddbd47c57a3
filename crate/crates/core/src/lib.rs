//! Decision toolkit for one-way LOCC distinguishability of bipartite
//! orthogonal states of the form `(I ⊗ U_i)|ψ⟩`.
//!
//! The crate is organised around four pieces:
//!
//! - [`state`] and [`weyl`]: dense complex linear algebra, Weyl operators,
//!   generalized Bell states and validated [`StateSet`]s.
//! - [`witness`]: numerical search for a vector `φ` with
//!   `⟨φ|U_k†U_l|φ⟩ = δ_kl`, and for an orthonormal basis of such vectors.
//! - [`prover`]: exact case analysis that certifies the absence of any such
//!   `φ` for subsets of Weyl operators, with a replayable trace.
//! - [`protocol`]: construction and exact evaluation of the projective
//!   one-way protocol obtained from a witness basis.

pub mod error;
pub mod linalg;
pub mod protocol;
pub mod prover;
pub mod state;
pub mod weyl;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::{ComplexOperator, ComplexVector};
pub use num_complex::Complex64;
pub use protocol::{
    build_protocol, conditional_state, evaluate_protocol, sample_protocol, BobOutcome,
    OneWayProtocol, ProtocolTranscript,
};
pub use prover::{
    build_condition_table, forced_proportionality, prove_infeasible, refute_lambda_nonzero,
    refute_lambda_zero, replay, Condition, ConditionTable, Outcome, ProofStep, ProofTrace,
    Proportionality, ReplayError, SupportPattern,
};
pub use state::{
    apply_local_unitary, commutation_defect, inner_product, is_maximally_entangled, transpose_set,
    BipartiteState, Direction, Side, StateSet,
};
pub use weyl::{make_generalized_bell, make_weyl, RootsOfUnity, WeylIndex};
pub use witness::{
    check_nd_bound, descend_from, find_witness_basis, gradient, objective, solve_witness,
    DescentTrace, SolverConfig, Verdict, WitnessBasisReport, WitnessObjectiveValue, WitnessReport,
};

/// Numerical tolerances shared by every module.
pub mod tol {
    /// Normalization tolerance for vectors and bipartite states.
    pub const NORM: f64 = 1e-9;
    /// Orthogonality and maximal-entanglement tolerance.
    pub const ORTH: f64 = 1e-9;
    /// Max-entry tolerance on `U†U - I`.
    pub const UNIT: f64 = 1e-9;
    /// Witness acceptance threshold on the objective (1e-9 per residual).
    pub const FEAS: f64 = 1e-18;
    /// Safety margin of the positive-combination test in the prover.
    pub const HULL: f64 = 1e-7;
}
