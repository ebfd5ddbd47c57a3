//! Independent re-verification of a [`ProofTrace`].
//!
//! The checker rebuilds the condition table from the indices and checks
//! each recorded step by its own route: annihilator counts against the
//! table, alignment arithmetic recomputed, shift-0 refutations by linear
//! programming, and cross-term ranks by singular values in floating point.
//! It never searches; a step it cannot confirm is an error.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use super::hull;
use super::table::{build_condition_table, ConditionTable};
use super::trace::{Outcome, ProofStep, ProofTrace};
use super::{inverse_mod, SupportPattern};
use crate::weyl::{RootsOfUnity, WeylIndex};

/// Smallest singular value accepted as full rank.
const RANK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct ReplayError {
    /// 1-based step number; 0 for whole-trace problems.
    pub step: usize,
    pub reason: String,
}

fn fail<T>(step: usize, reason: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError {
        step,
        reason: reason.into(),
    })
}

/// Checks `trace` against the Weyl `indices` it claims to be about.
pub fn replay(trace: &ProofTrace, indices: &[WeylIndex]) -> Result<(), ReplayError> {
    let table = build_condition_table(indices).or_else(|e| fail(0, e.to_string()))?;
    let d = table.d();
    if trace.d != d {
        return fail(0, format!("trace is for d={}, indices have d={d}", trace.d));
    }
    let mut steps = trace.steps.iter().enumerate().map(|(i, s)| (i + 1, s));

    match steps.next() {
        Some((_, ProofStep::ConditionTable { d: td, conditions }))
            if *td == d && conditions.as_slice() == table.conditions() => {}
        Some((n, _)) => return fail(n, "first step must be the condition table of the indices"),
        None => return fail(0, "empty trace"),
    }

    let (n, anchor, residual) = match steps.next() {
        Some((n, ProofStep::NoAnchor)) => {
            check_no_anchor(&table, n)?;
            return finish_open(trace, steps.next());
        }
        Some((
            n,
            ProofStep::ForcedProportionality {
                anchor,
                residual,
                annihilators,
            },
        )) => {
            check_proportionality(&table, n, *anchor, *residual, annihilators)?;
            (n, *anchor, *residual)
        }
        _ => return fail(2, "expected FORCED_PROPORTIONALITY or NO_ANCHOR"),
    };

    match steps.next() {
        Some((
            m,
            ProofStep::LambdaNonzeroRefuted {
                anchor: a,
                residual: r,
                shift,
                exponent,
                power,
                residue,
            },
        )) => {
            if (*a, *r) != (anchor, residual) {
                return fail(
                    m,
                    "anchor and residual differ from the proportionality step",
                );
            }
            check_alignment(
                &table, m, anchor, residual, *shift, *exponent, *power, *residue,
            )?;
        }
        Some((
            m,
            ProofStep::LambdaNonzeroOpen {
                anchor: a,
                residual: r,
            },
        )) => {
            if (*a, *r) != (anchor, residual) {
                return fail(
                    m,
                    "anchor and residual differ from the proportionality step",
                );
            }
            return finish_open(trace, steps.next());
        }
        _ => return fail(n + 1, "expected a lambda-nonzero step"),
    }

    let cases = SupportPattern::independent(d, anchor);
    match steps.next() {
        Some((m, ProofStep::SupportCases { anchor: a, count })) => {
            if *a != anchor || *count != cases.len() {
                return fail(
                    m,
                    format!("expected {} supports for anchor {anchor}", cases.len()),
                );
            }
        }
        _ => return fail(n + 2, "expected LAMBDA_ZERO_SUPPORTS"),
    }

    let mut covered = BTreeSet::new();
    let mut open = false;
    for (m, step) in steps {
        let Some(mask) = step.mask() else {
            return fail(
                m,
                format!("unexpected {} in the support analysis", step.kind()),
            );
        };
        if open {
            return fail(m, "steps after an open branch");
        }
        let s = SupportPattern { mask, d };
        if mask >> d != 0 || !s.is_independent(anchor) {
            return fail(m, "support is not independent for the anchor");
        }
        if !covered.insert(mask) {
            return fail(m, "support analysed twice");
        }
        match step {
            ProofStep::BranchOpen { .. } => open = true,
            _ => check_support_step(&table, m, s, step)?,
        }
    }

    match trace.outcome {
        Outcome::Infeasible => {
            if open {
                return fail(0, "INFEASIBLE trace has an open branch");
            }
            let expected: BTreeSet<u32> = cases.iter().map(|s| s.mask).collect();
            if covered != expected {
                return fail(0, "supports refuted do not cover every independent support");
            }
            Ok(())
        }
        Outcome::Inconclusive if open => Ok(()),
        Outcome::Inconclusive => fail(0, "INCONCLUSIVE trace without an open branch"),
    }
}

fn finish_open(trace: &ProofTrace, extra: Option<(usize, &ProofStep)>) -> Result<(), ReplayError> {
    if let Some((m, _)) = extra {
        return fail(m, "steps after the analysis stopped");
    }
    if trace.outcome != Outcome::Inconclusive {
        return fail(0, "stopped analysis must be INCONCLUSIVE");
    }
    Ok(())
}

fn coprime_anchors(d: usize) -> impl Iterator<Item = usize> {
    (1..=d / 2).filter(move |&t| inverse_mod(t, d).is_some())
}

fn check_no_anchor(table: &ConditionTable, n: usize) -> Result<(), ReplayError> {
    let d = table.d();
    for t in coprime_anchors(d) {
        if table.exponents_at(t).len() + 1 >= d {
            return fail(n, format!("shift {t} carries at least {} exponents", d - 1));
        }
    }
    Ok(())
}

fn check_proportionality(
    table: &ConditionTable,
    n: usize,
    anchor: usize,
    residual: usize,
    annihilators: &[usize],
) -> Result<(), ReplayError> {
    let d = table.d();
    if !coprime_anchors(d).any(|t| t == anchor) {
        return fail(
            n,
            format!("anchor {anchor} is not a coprime shift of at most d/2"),
        );
    }
    let distinct: BTreeSet<usize> = annihilators.iter().copied().collect();
    if distinct.len() != d - 1 || annihilators.len() != d - 1 {
        return fail(n, format!("need {} distinct annihilators", d - 1));
    }
    if residual >= d || distinct.contains(&residual) {
        return fail(n, "residual must be the exponent left out");
    }
    for &e in annihilators {
        if e >= d || !table.contains_oriented(anchor, e) {
            return fail(n, format!("({anchor},{e}) is not a condition"));
        }
    }
    // the surviving character is annihilated by every other one
    let roots = RootsOfUnity::new(d);
    for &e in annihilators {
        let s: Complex64 = (0..d)
            .map(|j| roots.pow((e * j) as i64) * roots.pow(-((residual * j) as i64)))
            .sum();
        if s.norm() > 1e-9 {
            return fail(n, format!("character {e} does not annihilate the residual"));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn check_alignment(
    table: &ConditionTable,
    n: usize,
    anchor: usize,
    residual: usize,
    shift: usize,
    exponent: usize,
    power: usize,
    residue: usize,
) -> Result<(), ReplayError> {
    let d = table.d();
    if shift == 0 || shift >= d || exponent >= d {
        return fail(n, "orientation out of range");
    }
    if !table.contains_oriented(shift, exponent) {
        return fail(n, format!("({shift},{exponent}) is not a condition"));
    }
    if power == 0 || power >= d || power * anchor % d != shift {
        return fail(n, format!("{power}·{anchor} is not {shift} mod {d}"));
    }
    let r = ((exponent as i64 - (power * residual) as i64).rem_euclid(d as i64)) as usize;
    if r != residue || residue != 0 {
        return fail(n, format!("residue is {r}, not zero"));
    }
    Ok(())
}

fn check_support_step(
    table: &ConditionTable,
    n: usize,
    s: SupportPattern,
    step: &ProofStep,
) -> Result<(), ReplayError> {
    let d = table.d();
    let support = s.support();
    let zero = table.exponents_at(0);
    match step {
        ProofStep::Normalization { mask } => {
            if *mask != 0 {
                return fail(n, "normalization only refutes the empty support");
            }
        }
        ProofStep::ShiftZeroHull { exponent, .. } => {
            if !zero.contains(exponent) {
                return fail(n, format!("(0,{exponent}) is not a condition"));
            }
            if !hull::joint_refuted(&support, &[*exponent], d) {
                return fail(n, "a positive solution exists");
            }
        }
        ProofStep::ShiftZeroJoint { exponents, .. } => {
            if exponents.is_empty() || !exponents.iter().all(|e| zero.contains(e)) {
                return fail(n, "exponents are not shift-0 conditions");
            }
            if !hull::joint_refuted(&support, exponents, d) {
                return fail(n, "a positive solution exists");
            }
        }
        ProofStep::CrossTermsVanish {
            shift,
            exponents,
            columns,
            ..
        } => {
            if *shift == 0 || *shift >= d {
                return fail(n, "cross terms need a nonzero shift");
            }
            if exponents
                .iter()
                .any(|&e| e >= d || !table.contains_oriented(*shift, e))
            {
                return fail(n, format!("exponents are not shift-{shift} conditions"));
            }
            if *columns != s.cross_columns(*shift) || columns.is_empty() {
                return fail(n, "columns are not the surviving cross terms");
            }
            if min_singular_value(d, exponents, columns) <= RANK_TOL {
                return fail(n, "character matrix is not of full column rank");
            }
        }
        _ => return fail(n, format!("{} is not a support step", step.kind())),
    }
    Ok(())
}

fn min_singular_value(d: usize, rows: &[usize], cols: &[usize]) -> f64 {
    if rows.len() < cols.len() {
        return 0.0;
    }
    let roots = RootsOfUnity::new(d);
    let m = DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        roots.pow((rows[r] * cols[c]) as i64)
    });
    m.singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::prove_infeasible;

    fn ex1() -> Vec<WeylIndex> {
        [(0, 0), (1, 1), (3, 2), (3, 1)]
            .iter()
            .map(|&(n, m)| WeylIndex::new(n, m, 4).unwrap())
            .collect()
    }

    #[test]
    fn tampered_traces_are_rejected() {
        let good = prove_infeasible(&ex1()).unwrap();
        replay(&good, &ex1()).unwrap();

        let mut t = good.clone();
        if let ProofStep::LambdaNonzeroRefuted { exponent, .. } = &mut t.steps[2] {
            *exponent = 1;
        }
        assert!(replay(&t, &ex1()).is_err());

        let mut t = good.clone();
        t.steps.pop();
        assert!(replay(&t, &ex1()).is_err());

        let mut t = good.clone();
        if let ProofStep::ForcedProportionality {
            residual,
            annihilators,
            ..
        } = &mut t.steps[1]
        {
            *residual = 1;
            annihilators[0] = 0;
        }
        assert!(replay(&t, &ex1()).is_err());

        let mut t = good.clone();
        t.outcome = Outcome::Inconclusive;
        assert!(replay(&t, &ex1()).is_err());

        let other: Vec<_> = [(0, 0), (1, 1), (3, 2), (2, 1)]
            .iter()
            .map(|&(n, m)| WeylIndex::new(n, m, 4).unwrap())
            .collect();
        assert!(replay(&good, &other).is_err());
    }

    #[test]
    fn false_refutations_are_rejected() {
        let good = prove_infeasible(&ex1()).unwrap();
        // support {0,2} has shift-0 points 1, 1 under e=2: refuted; claim
        // instead a rank refutation at shift 2 with a wrong column set
        let mut t = good.clone();
        let pos = t
            .steps
            .iter()
            .position(|s| s.mask() == Some(0b0101))
            .unwrap();
        t.steps[pos] = ProofStep::CrossTermsVanish {
            mask: 0b0101,
            shift: 2,
            exponents: vec![3],
            columns: vec![0],
        };
        assert!(replay(&t, &ex1()).is_err());
    }
}
