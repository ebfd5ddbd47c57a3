//! Projected gradient descent on the complex unit sphere.
//!
//! Each step moves along the tangent projection of the real gradient and
//! retracts by renormalization; the step length comes from Armijo
//! backtracking (factor 0.5, initial step 1.0).

use num_complex::Complex64;

const ARMIJO_C: f64 = 0.25;
const MAX_BACKTRACKS: usize = 60;
/// Below this the objective is indistinguishable from zero for acceptance.
const F_STOP: f64 = 1e-26;
const GRAD_STOP: f64 = 1e-30;
/// A step that lowers `f` by less than this fraction ends the run.
const STALL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct Descent {
    pub phi: Vec<Complex64>,
    pub f: f64,
    pub iterations: usize,
    /// Objective at every accepted iterate, starting with the initial point.
    pub history: Vec<f64>,
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

/// Minimizes `eval` over the unit sphere starting from the normalized
/// `start`. `eval` returns the objective and writes its Wirtinger gradient.
pub(crate) fn descend<F>(eval: F, start: Vec<Complex64>, max_iters: usize, record: bool) -> Descent
where
    F: Fn(&[Complex64], &mut [Complex64]) -> f64,
{
    let d = start.len();
    let mut phi = start;
    normalize(&mut phi);
    let mut grad = vec![Complex64::new(0.0, 0.0); d];
    let mut f = eval(&phi, &mut grad);
    let mut history = Vec::new();
    if record {
        history.push(f);
    }
    let mut trial = vec![Complex64::new(0.0, 0.0); d];
    let mut trial_grad = vec![Complex64::new(0.0, 0.0); d];
    let mut tangent = vec![Complex64::new(0.0, 0.0); d];
    let mut iterations = 0;
    let mut stalled = false;

    while iterations < max_iters && f > F_STOP && !stalled {
        // real gradient is 2 ∂f/∂φ*; drop its radial component
        let radial: f64 = phi
            .iter()
            .zip(&grad)
            .map(|(p, g)| (p.conj() * g).re)
            .sum::<f64>()
            * 2.0;
        for j in 0..d {
            tangent[j] = grad[j] * 2.0 - phi[j] * radial;
        }
        let slope: f64 = tangent.iter().map(|z| z.norm_sqr()).sum();
        if slope <= GRAD_STOP {
            break;
        }

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_BACKTRACKS {
            for j in 0..d {
                trial[j] = phi[j] - tangent[j] * step;
            }
            normalize(&mut trial);
            let f_trial = eval(&trial, &mut trial_grad);
            if f_trial <= f - ARMIJO_C * step * slope {
                stalled = f - f_trial <= STALL * f;
                std::mem::swap(&mut phi, &mut trial);
                std::mem::swap(&mut grad, &mut trial_grad);
                f = f_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        iterations += 1;
        if record {
            history.push(f);
        }
    }
    Descent {
        phi,
        f,
        iterations,
        history,
    }
}
