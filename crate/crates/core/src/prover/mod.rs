//! Exact infeasibility certificates for subsets of Weyl operators.
//!
//! For `{U_{n_k m_k}}` a witness `φ` must satisfy one condition
//! `Σ_j ω^{e·j} φ_j φ*_{j⊕t} = 0` per pair (see [`ConditionTable`]). The
//! prover looks for an anchor shift `t₀`, coprime to `d`, whose correlation
//! `c(j) = φ_j φ*_{j⊕t₀}` is annihilated by `d − 1` distinct characters and
//! is therefore `λ ω^{-n₄ j}` for some `λ`. It then refutes both cases:
//!
//! - `λ ≠ 0`: every `φ_j` is nonzero and chaining `c` along the anchor gives
//!   `φ_j φ*_{j⊕k t₀} = λ^k ω^{-k n₄ j}·(const)/(positive)`. A condition at
//!   shift `k t₀` with exponent `e ≡ k n₄` then sums positive terms.
//! - `λ = 0`: the support of `φ` has no pair `{j, j⊕t₀}`. Each such support
//!   is refuted separately by normalization, by positivity of `|φ_j|²` in
//!   the shift-0 conditions, or by a full-rank character system forcing
//!   nonzero cross terms `φ_j φ*_{j⊕t}` to vanish.
//!
//! Every step is recorded in a [`ProofTrace`] that [`replay`] re-checks.

mod field;
mod hull;
mod replay;
mod table;
mod trace;

pub use replay::{replay, ReplayError};
pub use table::{build_condition_table, Condition, ConditionTable};
pub use trace::{Outcome, ParseError, ProofStep, ProofTrace};

use crate::error::Result;
use crate::weyl::WeylIndex;

/// `c(j) = φ_j φ*_{j⊕anchor}` is proportional to `ω^{-residual·j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proportionality {
    pub anchor: usize,
    pub residual: usize,
    /// The `d − 1` exponents whose conditions annihilate `c`.
    pub annihilators: Vec<usize>,
}

/// Exact support of `φ` in a `λ = 0` branch, as a bitmask over `0..d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern {
    pub mask: u32,
    pub d: usize,
}

impl SupportPattern {
    pub fn contains(&self, j: usize) -> bool {
        self.mask >> (j % self.d) & 1 == 1
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.d).filter(|&j| self.contains(j)).collect()
    }

    /// No pair `{j, j⊕shift}` lies in the support.
    pub fn is_independent(&self, shift: usize) -> bool {
        (0..self.d).all(|j| !(self.contains(j) && self.contains(j + shift)))
    }

    /// `{j ∈ S : j⊕shift ∈ S}`.
    pub fn cross_columns(&self, shift: usize) -> Vec<usize> {
        (0..self.d)
            .filter(|&j| self.contains(j) && self.contains(j + shift))
            .collect()
    }

    /// All supports independent in the circulant graph of `shift`, by mask.
    pub fn independent(d: usize, shift: usize) -> Vec<SupportPattern> {
        (0u32..1 << d)
            .map(|mask| SupportPattern { mask, d })
            .filter(|s| s.is_independent(shift))
            .collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn inverse_mod(a: usize, d: usize) -> Option<usize> {
    (1..d).find(|&x| a * x % d == 1).or((d == 1).then_some(0))
}

/// First anchor `t₀ ≤ d/2`, `gcd(t₀, d) = 1`, carrying at least `d − 1`
/// distinct exponents. With exactly `d − 1` the residual is the missing
/// exponent; with all `d` the correlation vanishes and `n₄ = 0` is used.
pub fn forced_proportionality(table: &ConditionTable) -> Option<Proportionality> {
    let d = table.d();
    (1..=d / 2).filter(|&t| gcd(t, d) == 1).find_map(|anchor| {
        let exps = table.exponents_at(anchor);
        if exps.len() + 1 < d {
            return None;
        }
        let residual = (0..d).find(|e| !exps.contains(e)).unwrap_or(0);
        Some(Proportionality {
            anchor,
            residual,
            annihilators: exps.into_iter().filter(|&e| e != residual).collect(),
        })
    })
}

/// A condition, in either orientation, aligned with the chained correlation.
/// Orientations whose shift needs at least two anchor steps are preferred.
pub fn refute_lambda_nonzero(table: &ConditionTable, prop: &Proportionality) -> Option<ProofStep> {
    let d = table.d();
    let inv = inverse_mod(prop.anchor, d)?;
    let candidates: Vec<ProofStep> = table
        .conditions()
        .iter()
        .flat_map(|c| c.orientations(d))
        .filter(|o| o.shift != 0)
        .filter_map(|o| {
            let power = o.shift * inv % d;
            let residue = (o.exponent + d * d - power * prop.residual) % d;
            (residue == 0).then_some(ProofStep::LambdaNonzeroRefuted {
                anchor: prop.anchor,
                residual: prop.residual,
                shift: o.shift,
                exponent: o.exponent,
                power,
                residue,
            })
        })
        .collect();
    let power = |s: &ProofStep| match s {
        ProofStep::LambdaNonzeroRefuted { power, .. } => *power,
        _ => 0,
    };
    candidates
        .iter()
        .find(|s| power(s) >= 2)
        .or(candidates.first())
        .cloned()
}

/// Steps refuting one support, ending in a contradiction or `BranchOpen`.
fn refute_support(table: &ConditionTable, s: SupportPattern) -> (ProofStep, bool) {
    let d = table.d();
    let mask = s.mask;
    if mask == 0 {
        return (ProofStep::Normalization { mask }, true);
    }
    let support = s.support();
    let zero: Vec<usize> = table.exponents_at(0).into_iter().collect();
    for &e in &zero {
        let angles: Vec<usize> = support.iter().map(|j| e * j % d).collect();
        if !hull::positive_combination_exists(&angles, d) {
            return (ProofStep::ShiftZeroHull { mask, exponent: e }, true);
        }
    }
    if zero.len() >= 2 && hull::joint_refuted(&support, &zero, d) {
        return (
            ProofStep::ShiftZeroJoint {
                mask,
                exponents: zero,
            },
            true,
        );
    }
    for shift in 1..=d / 2 {
        let columns = s.cross_columns(shift);
        let exponents: Vec<usize> = table.exponents_at(shift).into_iter().collect();
        if !columns.is_empty() && field::full_column_rank(d, &exponents, &columns) {
            return (
                ProofStep::CrossTermsVanish {
                    mask,
                    shift,
                    exponents,
                    columns,
                },
                true,
            );
        }
    }
    (ProofStep::BranchOpen { mask }, false)
}

/// Case analysis of `λ = 0`: the steps taken and the first open support.
fn analyze_lambda_zero(
    table: &ConditionTable,
    anchor: usize,
) -> (Vec<ProofStep>, Option<SupportPattern>) {
    let cases = SupportPattern::independent(table.d(), anchor);
    let mut steps = vec![ProofStep::SupportCases {
        anchor,
        count: cases.len(),
    }];
    for s in cases {
        let (step, refuted) = refute_support(table, s);
        steps.push(step);
        if !refuted {
            return (steps, Some(s));
        }
    }
    (steps, None)
}

/// Refutations of every support allowed by `λ = 0`, or `None` when some
/// support survives.
pub fn refute_lambda_zero(table: &ConditionTable, anchor: usize) -> Option<Vec<ProofStep>> {
    match analyze_lambda_zero(table, anchor) {
        (steps, None) => Some(steps),
        (_, Some(_)) => None,
    }
}

/// Runs the full case analysis. The outcome is `Infeasible` only when both
/// cases are refuted; otherwise the trace stops at the first open case.
pub fn prove_infeasible(indices: &[WeylIndex]) -> Result<ProofTrace> {
    let table = build_condition_table(indices)?;
    let d = table.d();
    let mut steps = vec![ProofStep::ConditionTable {
        d,
        conditions: table.conditions().to_vec(),
    }];
    let inconclusive = |steps| ProofTrace {
        d,
        steps,
        outcome: Outcome::Inconclusive,
    };

    let Some(prop) = forced_proportionality(&table) else {
        steps.push(ProofStep::NoAnchor);
        return Ok(inconclusive(steps));
    };
    steps.push(ProofStep::ForcedProportionality {
        anchor: prop.anchor,
        residual: prop.residual,
        annihilators: prop.annihilators.clone(),
    });

    match refute_lambda_nonzero(&table, &prop) {
        Some(step) => steps.push(step),
        None => {
            steps.push(ProofStep::LambdaNonzeroOpen {
                anchor: prop.anchor,
                residual: prop.residual,
            });
            return Ok(inconclusive(steps));
        }
    }

    let (zero_steps, open) = analyze_lambda_zero(&table, prop.anchor);
    steps.extend(zero_steps);
    Ok(ProofTrace {
        d,
        steps,
        outcome: if open.is_none() {
            Outcome::Infeasible
        } else {
            Outcome::Inconclusive
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(list: &[(i64, i64)], d: usize) -> Vec<WeylIndex> {
        list.iter()
            .map(|&(n, m)| WeylIndex::new(n, m, d).unwrap())
            .collect()
    }

    fn ex1() -> Vec<WeylIndex> {
        idx(&[(0, 0), (1, 1), (3, 2), (3, 1)], 4)
    }

    fn ex2() -> Vec<WeylIndex> {
        idx(&[(0, 0), (0, 1), (3, 1), (2, 2)], 5)
    }

    fn ex3() -> Vec<WeylIndex> {
        idx(&[(0, 0), (0, 1), (4, 1), (1, 2), (3, 3)], 6)
    }

    #[test]
    fn proportionality_on_the_examples() {
        let p1 = forced_proportionality(&build_condition_table(&ex1()).unwrap()).unwrap();
        assert_eq!((p1.anchor, p1.residual), (1, 0));
        assert_eq!(p1.annihilators, vec![1, 2, 3]);
        let p2 = forced_proportionality(&build_condition_table(&ex2()).unwrap()).unwrap();
        assert_eq!((p2.anchor, p2.residual), (1, 1));
        let p3 = forced_proportionality(&build_condition_table(&ex3()).unwrap()).unwrap();
        assert_eq!((p3.anchor, p3.residual), (1, 5));
        assert_eq!(p3.annihilators, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn proportionality_absent_with_one_shift_one_exponent() {
        let t = ConditionTable::from_conditions(
            4,
            [
                Condition {
                    shift: 1,
                    exponent: 2,
                },
                Condition {
                    shift: 0,
                    exponent: 2,
                },
            ],
        );
        assert_eq!(forced_proportionality(&t), None);
    }

    #[test]
    fn lambda_nonzero_alignment() {
        let t3 = build_condition_table(&ex3()).unwrap();
        let p3 = forced_proportionality(&t3).unwrap();
        assert_eq!(
            refute_lambda_nonzero(&t3, &p3),
            Some(ProofStep::LambdaNonzeroRefuted {
                anchor: 1,
                residual: 5,
                shift: 3,
                exponent: 3,
                power: 3,
                residue: 0,
            })
        );
        let t1 = build_condition_table(&ex1()).unwrap();
        let p1 = forced_proportionality(&t1).unwrap();
        let step = refute_lambda_nonzero(&t1, &p1).unwrap();
        assert!(matches!(
            step,
            ProofStep::LambdaNonzeroRefuted {
                shift: 3,
                exponent: 0,
                power: 3,
                ..
            }
        ));
        let t2 = build_condition_table(&ex2()).unwrap();
        let p2 = forced_proportionality(&t2).unwrap();
        assert!(matches!(
            refute_lambda_nonzero(&t2, &p2).unwrap(),
            ProofStep::LambdaNonzeroRefuted {
                shift: 2,
                exponent: 2,
                power: 2,
                ..
            }
        ));
    }

    #[test]
    fn lambda_nonzero_absent_when_nothing_aligns() {
        // d=5: shift-1 annihilators {0,2,3,4} give n4=1; shift-2 exponent 0
        // needs 2·1 = 2, so no alignment
        let t = ConditionTable::from_conditions(
            5,
            [0, 2, 3, 4]
                .into_iter()
                .map(|e| Condition {
                    shift: 1,
                    exponent: e,
                })
                .chain([Condition {
                    shift: 2,
                    exponent: 0,
                }]),
        );
        let p = forced_proportionality(&t).unwrap();
        assert_eq!(p.residual, 1);
        assert_eq!(refute_lambda_nonzero(&t, &p), None);
    }

    #[test]
    fn example_one_support_refutations() {
        let t = build_condition_table(&ex1()).unwrap();
        let steps = refute_lambda_zero(&t, 1).unwrap();
        assert_eq!(
            steps[0],
            ProofStep::SupportCases {
                anchor: 1,
                count: 7
            }
        );
        // {1,3}: ω^{2j} = -1 on both points
        assert!(steps.contains(&ProofStep::ShiftZeroHull {
            mask: 0b1010,
            exponent: 2
        }));
        assert!(steps.contains(&ProofStep::Normalization { mask: 0 }));
    }

    #[test]
    fn example_three_odd_support_loses_its_cross_terms() {
        let t = build_condition_table(&ex3()).unwrap();
        let steps = refute_lambda_zero(&t, 1).unwrap();
        let odd = 0b101010;
        let step = steps.iter().find(|s| s.mask() == Some(odd)).unwrap();
        assert!(matches!(
            step,
            ProofStep::ShiftZeroHull { .. } | ProofStep::CrossTermsVanish { .. }
        ));
        // 18 independent sets in the 6-cycle, plus the count step
        assert_eq!(steps.len(), 19);
    }

    #[test]
    fn worked_examples_are_infeasible() {
        for set in [ex1(), ex2(), ex3()] {
            let trace = prove_infeasible(&set).unwrap();
            assert_eq!(trace.outcome, Outcome::Infeasible, "{trace}");
            replay(&trace, &set).unwrap();
        }
    }

    #[test]
    fn pure_shifts_are_inconclusive() {
        let trace = prove_infeasible(&idx(&[(0, 0), (0, 1), (0, 2), (0, 3)], 4)).unwrap();
        assert_eq!(trace.outcome, Outcome::Inconclusive);
        assert_eq!(trace.steps.last(), Some(&ProofStep::NoAnchor));
    }

    #[test]
    fn trace_text_round_trips() {
        for set in [ex1(), ex2(), ex3()] {
            let trace = prove_infeasible(&set).unwrap();
            let text = trace.to_text();
            assert_eq!(ProofTrace::parse(&text).unwrap(), trace);
            assert!(text.ends_with("OUTCOME: INFEASIBLE\n"));
        }
    }

    #[test]
    fn independent_supports_of_small_cycles() {
        assert_eq!(SupportPattern::independent(4, 1).len(), 7);
        assert_eq!(SupportPattern::independent(5, 1).len(), 11);
        assert_eq!(SupportPattern::independent(5, 2).len(), 11);
        assert_eq!(SupportPattern::independent(2, 1).len(), 3);
    }

    #[test]
    fn inverse_mod_values() {
        assert_eq!(inverse_mod(1, 6), Some(1));
        assert_eq!(inverse_mod(2, 5), Some(3));
        assert_eq!(inverse_mod(2, 4), None);
    }
}
