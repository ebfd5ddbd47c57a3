//! Projective one-way protocols built from a witness basis.
//!
//! The first party measures in an orthonormal basis `{a_m}` and announces
//! `m`; the second party then measures in a basis that depends on `m`.
//! For a maximally entangled base with coefficient matrix `M` (rows indexed
//! by the first party), outcome `m` leaves the second party with
//! `U_i Mᵀ conj(a_m)`. Choosing `a_m = √d · M conj(φ_m)` makes this
//! `U_i φ_m / √d`, so a witness basis `{φ_m}` yields the orthonormal
//! conditional bases `{U_i φ_m}_i`. For `|Φ+⟩` this is `a_m = conj(φ_m)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::ComplexVector;
use crate::state::{is_maximally_entangled, Direction, StateSet};
use crate::tol;
use crate::witness::WitnessBasisReport;

/// Result of the second party's measurement under a given announcement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BobOutcome {
    /// Projection onto the listed vector with this position.
    Vector(usize),
    /// Projection onto the orthogonal complement of the listed vectors.
    Rest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneWayProtocol {
    /// First party's measurement basis.
    pub alice_basis: Vec<ComplexVector>,
    /// Per announcement `m`, the second party's listed vectors.
    pub bob_bases: Vec<Vec<ComplexVector>>,
    /// Per announcement `m` and listed vector, the state index guessed.
    pub labeling: Vec<Vec<usize>>,
}

impl OneWayProtocol {
    /// Checks orthonormality of every basis and the shape of the labeling.
    pub fn validate(&self) -> Result<()> {
        orthonormal(&self.alice_basis)?;
        if self.bob_bases.len() != self.alice_basis.len()
            || self.labeling.len() != self.alice_basis.len()
        {
            return Err(Error::InvalidArgument(
                "one conditional basis and labeling per outcome".into(),
            ));
        }
        for (vs, labels) in self.bob_bases.iter().zip(&self.labeling) {
            orthonormal(vs)?;
            if vs.len() != labels.len() {
                return Err(Error::InvalidArgument(
                    "one label per conditional vector".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn outcomes(&self, m: usize) -> impl Iterator<Item = BobOutcome> {
        (0..self.bob_bases[m].len())
            .map(BobOutcome::Vector)
            .chain(std::iter::once(BobOutcome::Rest))
    }
}

fn orthonormal(vs: &[ComplexVector]) -> Result<()> {
    for (i, v) in vs.iter().enumerate() {
        if !v.is_normalized(tol::NORM) {
            return Err(Error::NotNormalized { norm: v.norm() });
        }
        for (j, w) in vs.iter().enumerate().skip(i + 1) {
            let overlap = v.dot(w).norm();
            if overlap > tol::ORTH {
                return Err(Error::NotOrthogonal {
                    first: i,
                    second: j,
                    overlap,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTranscript {
    /// `joint[i][m][o]`: probability of announcement `m` and outcome `o`
    /// given true state `i`; the last `o` is [`BobOutcome::Rest`].
    pub joint: Vec<Vec<Vec<f64>>>,
    /// Probability of a correct guess for each true state.
    pub per_state_success: Vec<f64>,
    /// Mean of `per_state_success` (uniform prior).
    pub success_probability: f64,
    pub worst_case_success: f64,
}

impl ProtocolTranscript {
    pub fn probability(&self, state: usize, m: usize, outcome: BobOutcome) -> f64 {
        let row = &self.joint[state][m];
        match outcome {
            BobOutcome::Vector(o) => row[o],
            BobOutcome::Rest => row[row.len() - 1],
        }
    }
}

/// Coefficient matrix with rows indexed by the party that measures first.
fn sender_rows(ss: &StateSet) -> DMatrix<Complex64> {
    match ss.direction() {
        Direction::AtoB => ss.base().amplitudes().clone(),
        Direction::BtoA => ss.base().amplitudes().transpose(),
    }
}

/// Unnormalized state of the second party after announcement `m` under
/// true state `i`; its squared norm is the probability of `m`.
pub fn conditional_state(ss: &StateSet, p: &OneWayProtocol, i: usize, m: usize) -> ComplexVector {
    let rows = sender_rows(ss);
    let a = p.alice_basis[m].conj().into_inner();
    let collapsed = rows.transpose() * a;
    ComplexVector::from(ss.unitaries()[i].inner() * collapsed)
}

/// The protocol of a complete witness basis: `a_m = √d · M conj(φ_m)`,
/// conditional vectors `U_i φ_m` labeled `i`.
pub fn build_protocol(ss: &StateSet, basis: &WitnessBasisReport) -> Result<OneWayProtocol> {
    let d = ss.receiver_dim();
    if ss.sender_dim() != d || !is_maximally_entangled(ss.base()) {
        return Err(Error::NotMaximallyEntangled);
    }
    if basis.completeness < d || basis.vectors.len() < d {
        return Err(Error::IncompleteBasis {
            found: basis.completeness,
            needed: d,
        });
    }
    for v in &basis.vectors {
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
    }
    let rows = sender_rows(ss);
    let scale = Complex64::from((d as f64).sqrt());
    let alice_basis = basis
        .vectors
        .iter()
        .map(|phi| ComplexVector::from(&rows * phi.conj().into_inner() * scale))
        .collect();
    let bob_bases = basis
        .vectors
        .iter()
        .map(|phi| ss.unitaries().iter().map(|u| u.apply(phi)).collect())
        .collect();
    let labeling = vec![(0..ss.len()).collect(); d];
    let p = OneWayProtocol {
        alice_basis,
        bob_bases,
        labeling,
    };
    p.validate()?;
    Ok(p)
}

/// Exact joint outcome table and success probabilities.
pub fn evaluate_protocol(ss: &StateSet, p: &OneWayProtocol) -> Result<ProtocolTranscript> {
    p.validate()?;
    let (d_send, d_recv) = (ss.sender_dim(), ss.receiver_dim());
    for a in &p.alice_basis {
        if a.dim() != d_send {
            return Err(Error::DimensionMismatch {
                expected: d_send,
                found: a.dim(),
            });
        }
    }
    for b in p.bob_bases.iter().flatten() {
        if b.dim() != d_recv {
            return Err(Error::DimensionMismatch {
                expected: d_recv,
                found: b.dim(),
            });
        }
    }

    let mut joint = Vec::with_capacity(ss.len());
    let mut per_state_success = Vec::with_capacity(ss.len());
    for i in 0..ss.len() {
        let mut by_m = Vec::with_capacity(p.alice_basis.len());
        let mut correct = 0.0;
        for m in 0..p.alice_basis.len() {
            let v = conditional_state(ss, p, i, m);
            let mut row: Vec<f64> = Vec::with_capacity(p.bob_bases[m].len() + 1);
            let mut rest: Vec<Complex64> = v.as_slice().to_vec();
            for (o, b) in p.bob_bases[m].iter().enumerate() {
                let amp = b.dot(&v);
                row.push(amp.norm_sqr());
                for (r, x) in rest.iter_mut().zip(b.as_slice()) {
                    *r -= x * amp;
                }
                if p.labeling[m][o] == i {
                    correct += amp.norm_sqr();
                }
            }
            row.push(rest.iter().map(|z| z.norm_sqr()).sum());
            by_m.push(row);
        }
        joint.push(by_m);
        per_state_success.push(correct);
    }
    let success_probability = per_state_success.iter().sum::<f64>() / ss.len() as f64;
    let worst_case_success = per_state_success
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(ProtocolTranscript {
        joint,
        per_state_success,
        success_probability,
        worst_case_success,
    })
}

/// Monte Carlo run of the protocol: a uniformly random true state, then the
/// announcement, then the second outcome, each drawn from its conditional
/// distribution. Returns the fraction of correct guesses.
pub fn sample_protocol(ss: &StateSet, p: &OneWayProtocol, trials: usize, seed: u64) -> Result<f64> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let t = evaluate_protocol(ss, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = |w: &[f64]| {
        WeightedIndex::new(w.iter().map(|x| x.max(0.0)))
            .map_err(|e| Error::InvalidArgument(format!("degenerate distribution: {e}")))
    };
    let mut alice = Vec::with_capacity(ss.len());
    let mut bob = Vec::with_capacity(ss.len());
    for by_m in &t.joint {
        let marginal: Vec<f64> = by_m.iter().map(|row| row.iter().sum()).collect();
        alice.push(weights(&marginal)?);
        bob.push(by_m.iter().map(|row| weights(row).ok()).collect::<Vec<_>>());
    }
    let mut hits = 0usize;
    for _ in 0..trials {
        let i = rand::Rng::gen_range(&mut rng, 0..ss.len());
        let m = alice[i].sample(&mut rng);
        let Some(dist) = &bob[i][m] else { continue };
        let o = dist.sample(&mut rng);
        if o < p.labeling[m].len() && p.labeling[m][o] == i {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}
