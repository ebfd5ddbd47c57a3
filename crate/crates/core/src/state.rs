//! Bipartite pure states and unilaterally transformable state sets.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexOperator;
use crate::tol;
use crate::weyl::{make_weyl, WeylIndex};

/// Which party a local operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Direction of a one-way protocol. The first party measures and
/// broadcasts; the unitaries of a [`StateSet`] act on the second party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    AtoB,
    BtoA,
}

impl Direction {
    /// The party the set's unitaries act on.
    pub fn receiver(self) -> Side {
        match self {
            Direction::AtoB => Side::B,
            Direction::BtoA => Side::A,
        }
    }

    pub fn flipped(self) -> Direction {
        match self {
            Direction::AtoB => Direction::BtoA,
            Direction::BtoA => Direction::AtoB,
        }
    }
}

/// A bipartite pure state stored as its `dA × dB` coefficient matrix:
/// `|s⟩ = Σ_{a,b} amp[a][b] |a⟩ ⊗ |b⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    amp: DMatrix<Complex64>,
}

impl BipartiteState {
    /// Wraps a coefficient matrix, requiring unit Frobenius norm.
    pub fn from_matrix(amp: DMatrix<Complex64>) -> Result<Self> {
        if amp.nrows() == 0 || amp.ncols() == 0 {
            return Err(Error::ZeroDimension);
        }
        let s = BipartiteState { amp };
        let norm = s.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s)
    }

    /// Coefficient matrix given row by row (rows indexed by A); every row
    /// must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d_a = rows.len();
        let d_b = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != d_b {
                return Err(Error::DimensionMismatch {
                    expected: d_b,
                    found: row.len(),
                });
            }
        }
        Self::from_matrix(DMatrix::from_fn(d_a, d_b, |r, c| rows[r][c]))
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.d_a())
            .map(|r| (0..self.d_b()).map(|c| self.amp[(r, c)]).collect())
            .collect()
    }

    pub(crate) fn from_matrix_unchecked(amp: DMatrix<Complex64>) -> Self {
        BipartiteState { amp }
    }

    /// `|Φ+⟩ = (1/√d) Σ_j |j⟩|j⟩`.
    pub fn phi_plus(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        BipartiteState {
            amp: DMatrix::from_fn(d, d, |r, c| {
                if r == c {
                    Complex64::new(s, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// `|a⟩ ⊗ |b⟩`.
    pub fn product(d_a: usize, d_b: usize, a: usize, b: usize) -> Self {
        let mut amp = DMatrix::from_element(d_a, d_b, Complex64::new(0.0, 0.0));
        amp[(a, b)] = Complex64::new(1.0, 0.0);
        BipartiteState { amp }
    }

    pub fn d_a(&self) -> usize {
        self.amp.nrows()
    }

    pub fn d_b(&self) -> usize {
        self.amp.ncols()
    }

    pub fn dim(&self, side: Side) -> usize {
        match side {
            Side::A => self.d_a(),
            Side::B => self.d_b(),
        }
    }

    pub fn amp(&self, a: usize, b: usize) -> Complex64 {
        self.amp[(a, b)]
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Same state with the parties exchanged.
    pub fn swapped(&self) -> Self {
        BipartiteState {
            amp: self.amp.transpose(),
        }
    }

    pub fn max_abs_diff(&self, other: &BipartiteState) -> f64 {
        if self.amp.shape() != other.amp.shape() {
            return f64::INFINITY;
        }
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// `(U ⊗ I)|s⟩` or `(I ⊗ U)|s⟩`.
///
/// On side B the coefficient of `|a⟩|b⟩` becomes `Σ_{b'} U[b][b'] amp[a][b']`,
/// i.e. `amp · Uᵀ`; on side A it is `U · amp`.
pub fn apply_local_unitary(
    u: &ComplexOperator,
    s: &BipartiteState,
    side: Side,
) -> Result<BipartiteState> {
    let want = s.dim(side);
    if u.dim() != want {
        return Err(Error::DimensionMismatch {
            expected: want,
            found: u.dim(),
        });
    }
    let amp = match side {
        Side::A => u.inner() * &s.amp,
        Side::B => &s.amp * u.inner().transpose(),
    };
    Ok(BipartiteState { amp })
}

/// `⟨s1|s2⟩ = Σ conj(amp1) · amp2`.
pub fn inner_product(s1: &BipartiteState, s2: &BipartiteState) -> Result<Complex64> {
    if s1.amp.shape() != s2.amp.shape() {
        let (a, b) = s1.amp.shape();
        let (c, d) = s2.amp.shape();
        return Err(Error::DimensionMismatch {
            expected: a * b,
            found: c * d,
        });
    }
    Ok(s1
        .amp
        .iter()
        .zip(s2.amp.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// True iff `dA = dB = d` and the reduced matrix `amp · amp†` equals `I/d`
/// within the orthogonality tolerance.
pub fn is_maximally_entangled(s: &BipartiteState) -> bool {
    let d = s.d_a();
    if d != s.d_b() {
        return false;
    }
    let reduced = &s.amp * s.amp.adjoint();
    let target = 1.0 / d as f64;
    reduced.iter().enumerate().all(|(i, z)| {
        let (r, c) = (i % d, i / d);
        let want = if r == c { target } else { 0.0 };
        (z - Complex64::new(want, 0.0)).norm() <= tol::ORTH
    })
}

/// A validated set of states `{(I ⊗ U_i)|ψ⟩}` (direction `AtoB`) or
/// `{(U_i ⊗ I)|ψ⟩}` (direction `BtoA`). The unitaries always act on the
/// party that measures second.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    base: BipartiteState,
    unitaries: Vec<ComplexOperator>,
    direction: Direction,
}

impl StateSet {
    /// Validates unitarity of every operator and pairwise orthogonality of
    /// the derived states.
    pub fn new(
        base: BipartiteState,
        unitaries: Vec<ComplexOperator>,
        direction: Direction,
    ) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::EmptySet);
        }
        let norm = base.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        let dim = base.dim(direction.receiver());
        for (index, u) in unitaries.iter().enumerate() {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.dim(),
                });
            }
            let defect = u.unitarity_defect();
            if defect > tol::UNIT {
                return Err(Error::NotUnitary { index, defect });
            }
        }
        let set = StateSet {
            base,
            unitaries,
            direction,
        };
        let states = set.derived_states();
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                let overlap = inner_product(&states[i], &states[j])?.norm();
                if overlap > tol::ORTH {
                    return Err(Error::NotOrthogonal {
                        first: i,
                        second: j,
                        overlap,
                    });
                }
            }
        }
        Ok(set)
    }

    /// Generalized Bell states `{|Ψ_{n_i m_i}⟩}` written as `(I ⊗ U_{n_i m_i})|Φ+⟩`.
    pub fn weyl(indices: &[WeylIndex]) -> Result<Self> {
        let d = indices.first().ok_or(Error::EmptySet)?.d();
        for idx in indices {
            if idx.d() != d {
                return Err(Error::MixedDimension {
                    first: d,
                    second: idx.d(),
                });
            }
        }
        Self::new(
            BipartiteState::phi_plus(d),
            indices.iter().map(|&i| make_weyl(i)).collect(),
            Direction::AtoB,
        )
    }

    pub fn base(&self) -> &BipartiteState {
        &self.base
    }

    pub fn unitaries(&self) -> &[ComplexOperator] {
        &self.unitaries
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn d_a(&self) -> usize {
        self.base.d_a()
    }

    pub fn d_b(&self) -> usize {
        self.base.d_b()
    }

    /// Dimension of the space the unitaries act on.
    pub fn receiver_dim(&self) -> usize {
        self.base.dim(self.direction.receiver())
    }

    /// Dimension of the party that measures first.
    pub fn sender_dim(&self) -> usize {
        self.base.dim(self.direction.receiver().other())
    }

    pub fn derived_states(&self) -> Vec<BipartiteState> {
        let side = self.direction.receiver();
        self.unitaries
            .iter()
            .map(|u| apply_local_unitary(u, &self.base, side).expect("validated dimensions"))
            .collect()
    }
}

/// Rewrites the set so its unitaries act on the other party.
///
/// With `M` the (maximally entangled) base coefficient matrix,
/// `(I ⊗ U)|ψ⟩ = (V ⊗ I)|ψ⟩` for `V = d · M Uᵀ M†`; for `|Φ+⟩` this is
/// `V = Uᵀ`. The derived states are unchanged and the direction flips.
pub fn transpose_set(ss: &StateSet) -> Result<StateSet> {
    if ss.d_a() != ss.d_b() {
        return Err(Error::DimensionMismatch {
            expected: ss.d_a(),
            found: ss.d_b(),
        });
    }
    if !is_maximally_entangled(&ss.base) {
        return Err(Error::NotMaximallyEntangled);
    }
    let d = ss.d_a() as f64;
    let m = ss.base.amplitudes();
    let unitaries = ss
        .unitaries
        .iter()
        .map(|u| {
            let v = match ss.direction {
                Direction::AtoB => m * u.inner().transpose() * m.adjoint() * Complex64::from(d),
                Direction::BtoA => (m.adjoint() * u.inner() * m).transpose() * Complex64::from(d),
            };
            ComplexOperator::from_matrix(v)
        })
        .collect();
    StateSet::new(ss.base.clone(), unitaries, ss.direction.flipped())
}

/// `max_{k,l} ‖U_k†U_l − U_l U_k†‖_max`.
pub fn commutation_defect(ss: &StateSet) -> f64 {
    let mut worst: f64 = 0.0;
    for uk in &ss.unitaries {
        let uk_dag = uk.adjoint();
        for ul in &ss.unitaries {
            let left = &uk_dag * ul;
            let right = ul * &uk_dag;
            worst = worst.max(left.max_abs_diff(&right));
        }
    }
    worst
}
