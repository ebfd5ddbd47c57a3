use num_complex::Complex64;

use crate::state::StateSet;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The products `U_k†U_l` for `k < l`, flattened row-major for the hot loop.
#[derive(Debug, Clone)]
pub(crate) struct PairProducts {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    mats: Vec<Vec<Complex64>>,
}

impl PairProducts {
    pub(crate) fn new(ss: &StateSet) -> Self {
        let dim = ss.receiver_dim();
        let us = ss.unitaries();
        let mut pairs = Vec::new();
        let mut mats = Vec::new();
        for k in 0..us.len() {
            let uk_dag = us[k].adjoint();
            for l in k + 1..us.len() {
                let p = &uk_dag * &us[l];
                let mut flat = Vec::with_capacity(dim * dim);
                for r in 0..dim {
                    for c in 0..dim {
                        flat.push(p.get(r, c));
                    }
                }
                pairs.push((k, l));
                mats.push(flat);
            }
        }
        PairProducts { dim, pairs, mats }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `⟨φ|U_k†U_l|φ⟩` for every pair.
    pub(crate) fn residuals(&self, phi: &[Complex64]) -> Vec<Complex64> {
        self.mats
            .iter()
            .map(|a| {
                let mut r = ZERO;
                for row in 0..self.dim {
                    let mut acc = ZERO;
                    for col in 0..self.dim {
                        acc += a[row * self.dim + col] * phi[col];
                    }
                    r += phi[row].conj() * acc;
                }
                r
            })
            .collect()
    }

    pub(crate) fn value(&self, phi: &[Complex64]) -> f64 {
        self.residuals(phi).iter().map(|r| r.norm_sqr()).sum()
    }

    /// Returns `f` and writes the Wirtinger gradient `∂f/∂φ*` into `grad`:
    /// `Σ r* (Aφ) + r (A†φ)` with `A = U_k†U_l`, `r = ⟨φ|Aφ⟩`.
    pub(crate) fn value_and_grad(&self, phi: &[Complex64], grad: &mut [Complex64]) -> f64 {
        let d = self.dim;
        grad.iter_mut().for_each(|g| *g = ZERO);
        let mut a_phi = vec![ZERO; d];
        let mut ad_phi = vec![ZERO; d];
        let mut f = 0.0;
        for a in &self.mats {
            a_phi.iter_mut().for_each(|x| *x = ZERO);
            ad_phi.iter_mut().for_each(|x| *x = ZERO);
            for row in 0..d {
                for col in 0..d {
                    let e = a[row * d + col];
                    a_phi[row] += e * phi[col];
                    // (A†)[col][row] = conj(A[row][col])
                    ad_phi[col] += e.conj() * phi[row];
                }
            }
            let r: Complex64 = phi.iter().zip(&a_phi).map(|(p, x)| p.conj() * x).sum();
            f += r.norm_sqr();
            let rc = r.conj();
            for j in 0..d {
                grad[j] += rc * a_phi[j] + r * ad_phi[j];
            }
        }
        f
    }
}
