//! Weyl (shift-and-clock) operators and generalized Bell states.
//!
//! `U_nm = Σ_j ω^{jn} |j ⊕ m⟩⟨j|` with `ω = e^{2πi/d}`, and
//! `|Ψ_nm⟩ = (I ⊗ U_nm)|Φ+⟩`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexOperator;
use crate::state::BipartiteState;

/// The `d` powers of `ω = e^{2πi/d}`, each evaluated once.
///
/// Phases are always looked up by a reduced integer exponent, so equal
/// exponents give bit-identical values.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    d: usize,
    table: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(d: usize) -> Self {
        let table = (0..d)
            .map(|r| {
                if r == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / d as f64)
                }
            })
            .collect();
        RootsOfUnity { d, table }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `ω^e` for any integer exponent.
    pub fn pow(&self, e: i64) -> Complex64 {
        self.table[e.rem_euclid(self.d as i64) as usize]
    }
}

/// Index `(n, m)` of a Weyl operator in dimension `d`, with `0 ≤ n, m < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylIndex {
    n: usize,
    m: usize,
    d: usize,
}

impl WeylIndex {
    pub fn new(n: i64, m: i64, d: usize) -> Result<Self> {
        if d == 0 || n < 0 || m < 0 || n >= d as i64 || m >= d as i64 {
            return Err(Error::InvalidWeylIndex { n, m, d });
        }
        Ok(WeylIndex {
            n: n as usize,
            m: m as usize,
            d,
        })
    }

    /// Builds the index with both components reduced mod `d`.
    pub fn wrapping(n: i64, m: i64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        let dd = d as i64;
        Self::new(n.rem_euclid(dd), m.rem_euclid(dd), d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Index whose operator equals `U_nmᵀ` up to a global phase:
    /// `U_nmᵀ = ω^{-nm} U_{n,-m}`.
    pub fn transposed(&self) -> Self {
        WeylIndex {
            n: self.n,
            m: (self.d - self.m) % self.d,
            d: self.d,
        }
    }

    /// Index of `U_self† U_other` up to a global phase.
    pub fn relative_to(&self, base: &WeylIndex) -> Self {
        let d = self.d;
        WeylIndex {
            n: (self.n + d - base.n) % d,
            m: (self.m + d - base.m) % d,
            d,
        }
    }

    /// Every index in dimension `d`, ordered by `(n, m)`.
    pub fn all(d: usize) -> impl Iterator<Item = WeylIndex> {
        (0..d).flat_map(move |n| (0..d).map(move |m| WeylIndex { n, m, d }))
    }
}

impl fmt::Display for WeylIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// `U_nm` with `U[j ⊕ m][j] = ω^{jn}` and zeros elsewhere.
pub fn make_weyl(idx: WeylIndex) -> ComplexOperator {
    let d = idx.d;
    let roots = RootsOfUnity::new(d);
    let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for j in 0..d {
        m[((j + idx.m) % d, j)] = roots.pow((j * idx.n) as i64);
    }
    ComplexOperator::from_matrix(m)
}

/// `|Ψ_nm⟩` as a `d × d` coefficient matrix: `amp[j][j ⊕ m] = ω^{jn}/√d`.
pub fn make_generalized_bell(idx: WeylIndex) -> BipartiteState {
    let d = idx.d;
    let roots = RootsOfUnity::new(d);
    let scale = 1.0 / (d as f64).sqrt();
    let mut amp = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for j in 0..d {
        amp[(j, (j + idx.m) % d)] = roots.pow((j * idx.n) as i64) * scale;
    }
    BipartiteState::from_matrix_unchecked(amp)
}
