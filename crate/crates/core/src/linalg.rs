//! Dense complex vectors and operators.
//!
//! Thin newtypes over `nalgebra` storage. Dimensions in this crate are small
//! (d ≤ 32), so everything is dense and column-major.

use std::ops::Mul;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(DVector<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        ComplexVector(DVector::from_vec(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector(DVector::from_element(dim, ZERO))
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = Complex64::new(1.0, 0.0);
        v
    }

    /// Haar-random unit vector (normalized complex Gaussian).
    pub fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let v = ComplexVector(DVector::from_fn(dim, |_, _| gaussian(rng)));
            if let Ok(u) = v.normalized() {
                return u;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn inner(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(ComplexVector(self.0.map(|z| z / n)))
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn conj(&self) -> Self {
        ComplexVector(self.0.map(|z| z.conj()))
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn dot(&self, other: &ComplexVector) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexVector(self.0.map(|z| z * s))
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Rotates the global phase so that the first component of largest
    /// modulus is real and nonnegative.
    pub fn gauge_fixed(&self) -> Self {
        let max = self.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return self.clone();
        }
        // Near-ties resolve to the lowest index so the choice is stable.
        let pivot = self
            .0
            .iter()
            .position(|z| z.norm() >= max * (1.0 - 1e-12))
            .unwrap_or(0);
        let z = self.0[pivot];
        let phase = z.conj() / z.norm();
        self.scale(phase)
    }
}

impl From<DVector<Complex64>> for ComplexVector {
    fn from(v: DVector<Complex64>) -> Self {
        ComplexVector(v)
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator(DMatrix<Complex64>);

impl ComplexOperator {
    pub fn identity(dim: usize) -> Self {
        ComplexOperator(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexOperator(DMatrix::from_element(dim, dim, ZERO))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexOperator(DMatrix::from_fn(dim, dim, f))
    }

    /// Builds an operator from row vectors; every row must have as many
    /// entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        Ok(Self::from_fn(dim, |r, c| rows[r][c]))
    }

    /// Square `DMatrix` wrapper; panics on non-square input.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        ComplexOperator(m)
    }

    /// Haar-random unitary: QR of a complex Gaussian matrix with the phases
    /// of `diag(R)` pushed into `Q`.
    pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for c in 0..dim {
            let d = r[(c, c)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for row in 0..dim {
                q[(row, c)] *= phase;
            }
        }
        ComplexOperator(q)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.0[(r, c)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        ComplexOperator(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexOperator(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        ComplexOperator(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexOperator(self.0.map(|z| z * s))
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 * v.inner())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn max_abs_diff(&self, other: &ComplexOperator) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = ComplexOperator(self.0.adjoint() * &self.0);
        p.max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Returns `θ` such that `self ≈ e^{iθ} other` (entrywise within `tol`),
    /// or `None` if the two differ by more than a global phase.
    pub fn phase_relative_to(&self, other: &ComplexOperator, tol: f64) -> Option<f64> {
        if self.dim() != other.dim() {
            return None;
        }
        let (idx, pivot) = other
            .0
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if pivot.norm() == 0.0 {
            return None;
        }
        let ratio = self.0.as_slice()[idx] / pivot;
        if (ratio.norm() - 1.0).abs() > tol {
            return None;
        }
        let phase = ratio / ratio.norm();
        (self.max_abs_diff(&other.scale(phase)) <= tol).then(|| phase.arg())
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: &ComplexOperator) -> ComplexOperator {
        ComplexOperator(&self.0 * &rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=8 {
            let u = ComplexOperator::random_unitary(d, &mut rng);
            assert!(u.unitarity_defect() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn random_unitary_is_reproducible() {
        let a = ComplexOperator::random_unitary(4, &mut ChaCha8Rng::seed_from_u64(3));
        let b = ComplexOperator::random_unitary(4, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn gauge_fix_makes_pivot_real() {
        let v = ComplexVector::new(vec![
            Complex64::new(0.1, 0.2),
            Complex64::new(0.0, -0.9),
            Complex64::new(0.3, 0.1),
        ])
        .normalized()
        .unwrap();
        let g = v.gauge_fixed();
        assert!(g[1].im.abs() < 1e-15 && g[1].re > 0.0);
        assert!((g.norm() - 1.0).abs() < 1e-15);
        // gauge-fixing is idempotent and phase-blind
        let rotated = v.scale(Complex64::from_polar(1.0, 1.234));
        assert!(rotated.gauge_fixed().max_abs_diff(&g) < 1e-14);
    }

    #[test]
    fn zero_vector_cannot_be_normalized() {
        assert_eq!(ComplexVector::zeros(3).normalized(), Err(Error::ZeroVector));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let one = Complex64::new(1.0, 0.0);
        let err = ComplexOperator::from_rows(&[vec![one, one], vec![one]]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
