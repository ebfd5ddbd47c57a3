//! Strictly positive combinations of roots of unity.
//!
//! Under a fixed support `S`, a shift-0 condition reads
//! `Σ_{j∈S} ω^{e·j} x_j = 0` with every `x_j = |φ_j|² > 0`. It is solvable
//! iff the origin lies in the relative interior of the convex hull of the
//! points `ω^{e·j}`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::tol;
use crate::weyl::RootsOfUnity;

/// Exact test for a single condition. `angles` are exponents `e·j mod d`
/// (one per support element, repeats allowed). Returns true when some
/// strictly positive combination of the points is zero.
pub(crate) fn positive_combination_exists(angles: &[usize], d: usize) -> bool {
    let mut distinct: Vec<usize> = angles.iter().map(|a| a % d).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return false;
    }
    let k = distinct.len();
    let max_gap = (0..k)
        .map(|i| {
            if i + 1 < k {
                distinct[i + 1] - distinct[i]
            } else {
                distinct[0] + d - distinct[k - 1]
            }
        })
        .max()
        .unwrap_or(d);
    // every point inside an open half-plane, or inside a closed one with a
    // point strictly off the boundary line: no positive combination
    match (2 * max_gap).cmp(&d) {
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => k == 2,
        std::cmp::Ordering::Less => true,
    }
}

/// Largest `s` such that some `x` with `x_j ≥ s`, `Σ x_j = 1` satisfies
/// every condition `Σ_j ω^{e·j} x_j = 0`; `None` when the equalities have no
/// solution on the simplex's affine hull at all.
pub(crate) fn max_uniform_slack(support: &[usize], exponents: &[usize], d: usize) -> Option<f64> {
    let roots = RootsOfUnity::new(d);
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = support
        .iter()
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let s = lp.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    for &x in &xs {
        lp.add_constraint([(x, 1.0), (s, -1.0)], ComparisonOp::Ge, 0.0);
    }
    let ones: Vec<_> = xs.iter().map(|&x| (x, 1.0)).collect();
    lp.add_constraint(&ones, ComparisonOp::Eq, 1.0);
    for &e in exponents {
        let pts: Vec<_> = support.iter().map(|&j| roots.pow((e * j) as i64)).collect();
        let re: Vec<_> = xs.iter().zip(&pts).map(|(&x, p)| (x, p.re)).collect();
        let im: Vec<_> = xs.iter().zip(&pts).map(|(&x, p)| (x, p.im)).collect();
        lp.add_constraint(&re, ComparisonOp::Eq, 0.0);
        lp.add_constraint(&im, ComparisonOp::Eq, 0.0);
    }
    lp.solve().ok().map(|sol| sol.objective())
}

/// Joint shift-0 test: the branch is refuted when no strictly positive
/// solution exists, with the best attainable slack at most the hull margin.
pub(crate) fn joint_refuted(support: &[usize], exponents: &[usize], d: usize) -> bool {
    match max_uniform_slack(support, exponents, d) {
        None => true,
        Some(slack) => slack <= tol::HULL,
    }
}
