use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weyl::{RootsOfUnity, WeylIndex};

/// One orthogonality constraint `Σ_j ω^{e·j} φ_j φ*_{j⊕t} = 0`.
///
/// Conjugating the sum maps `(t, e)` to `(d−t, d−e)` up to a global phase, so
/// both pairs describe the same constraint. Stored conditions are canonical:
/// `t ≤ d/2`, and on the self-conjugate shifts (`t = 0` and `2t = d`) the
/// larger of `e` and `d−e` is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    pub shift: usize,
    pub exponent: usize,
}

impl Condition {
    pub fn canonical(shift: i64, exponent: i64, d: usize) -> Condition {
        let dd = d as i64;
        let mut t = shift.rem_euclid(dd) as usize;
        let mut e = exponent.rem_euclid(dd) as usize;
        if 2 * t > d {
            t = d - t;
            e = (d - e) % d;
        }
        if t == 0 || 2 * t == d {
            e = e.max((d - e) % d);
        }
        Condition {
            shift: t,
            exponent: e,
        }
    }

    /// `(d−t, d−e)`, the conjugate form. Not canonical in general.
    pub fn conjugate(&self, d: usize) -> Condition {
        Condition {
            shift: (d - self.shift) % d,
            exponent: (d - self.exponent) % d,
        }
    }

    /// Both ways of writing this constraint.
    pub fn orientations(&self, d: usize) -> [Condition; 2] {
        [*self, self.conjugate(d)]
    }

    /// `Σ_j ω^{e·j} φ_j φ*_{j⊕t}`.
    pub fn evaluate(&self, phi: &[Complex64], roots: &RootsOfUnity) -> Complex64 {
        let d = roots.d();
        (0..d)
            .map(|j| {
                roots.pow((self.exponent * j) as i64) * phi[j] * phi[(j + self.shift) % d].conj()
            })
            .sum()
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.shift, self.exponent)
    }
}

/// Deduplicated canonical conditions for a set of Weyl indices, sorted by
/// `(shift, exponent)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionTable {
    d: usize,
    conditions: Vec<Condition>,
}

impl ConditionTable {
    pub fn from_conditions(d: usize, conditions: impl IntoIterator<Item = Condition>) -> Self {
        let set: BTreeSet<Condition> = conditions
            .into_iter()
            .map(|c| Condition::canonical(c.shift as i64, c.exponent as i64, d))
            .collect();
        ConditionTable {
            d,
            conditions: set.into_iter().collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// Distinct exponents stored at canonical shift `t`.
    pub fn exponents_at(&self, t: usize) -> BTreeSet<usize> {
        self.conditions
            .iter()
            .filter(|c| c.shift == t)
            .map(|c| c.exponent)
            .collect()
    }

    /// Whether `(t, e)` is one of the orientations of a stored condition.
    pub fn contains_oriented(&self, t: usize, e: usize) -> bool {
        let c = Condition::canonical(t as i64, e as i64, self.d);
        self.conditions.binary_search(&c).is_ok()
    }
}

/// Builds one condition per unordered pair of indices: the pair
/// `(U_{n_k m_k}, U_{n_l m_l})` gives `t = m_l ⊖ m_k`, `e = n_l ⊖ n_k`.
pub fn build_condition_table(indices: &[WeylIndex]) -> Result<ConditionTable> {
    let first = indices.first().ok_or(Error::EmptySet)?;
    let d = first.d();
    for idx in indices {
        if idx.d() != d {
            return Err(Error::MixedDimension {
                first: d,
                second: idx.d(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for idx in indices {
        if !seen.insert(*idx) {
            return Err(Error::RepeatedIndex {
                n: idx.n(),
                m: idx.m(),
            });
        }
    }
    if indices.len() < 2 || indices.len() > d {
        return Err(Error::InvalidArgument(format!(
            "need 2 ≤ N ≤ d, got N={} for d={d}",
            indices.len()
        )));
    }
    let mut conditions = Vec::new();
    for (k, a) in indices.iter().enumerate() {
        for b in &indices[k + 1..] {
            let t = b.m() as i64 - a.m() as i64;
            let e = b.n() as i64 - a.n() as i64;
            conditions.push(Condition::canonical(t, e, d));
        }
    }
    Ok(ConditionTable::from_conditions(d, conditions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexVector;
    use crate::state::StateSet;
    use crate::weyl::make_weyl;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn idx(list: &[(i64, i64)], d: usize) -> Vec<WeylIndex> {
        list.iter()
            .map(|&(n, m)| WeylIndex::new(n, m, d).unwrap())
            .collect()
    }

    fn conds(list: &[(usize, usize)]) -> Vec<Condition> {
        list.iter()
            .map(|&(shift, exponent)| Condition { shift, exponent })
            .collect()
    }

    #[test]
    fn example_one_table() {
        let t = build_condition_table(&idx(&[(0, 0), (1, 1), (3, 2), (3, 1)], 4)).unwrap();
        // shift-1 exponents 1, 3, 2 plus the shift-3 e=0 condition folded
        // into shift 1; shift 2 keeps e=3; shift 0 keeps e=2
        assert_eq!(
            t.conditions(),
            conds(&[(0, 2), (1, 0), (1, 1), (1, 2), (1, 3), (2, 3)]).as_slice()
        );
        assert!(t.contains_oriented(3, 0));
    }

    #[test]
    fn diagonal_pair_gives_single_shift_zero_condition() {
        let t = build_condition_table(&idx(&[(0, 0), (1, 0)], 2)).unwrap();
        assert_eq!(t.conditions(), conds(&[(0, 1)]).as_slice());
    }

    #[test]
    fn example_three_table_has_ten_conditions() {
        let t = build_condition_table(&idx(&[(0, 0), (0, 1), (4, 1), (1, 2), (3, 3)], 6)).unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t.exponents_at(1), [0, 1, 2, 3, 4].into_iter().collect());
        assert_eq!(t.exponents_at(2), [1, 3, 5].into_iter().collect());
        assert_eq!(t.exponents_at(3), [3].into_iter().collect());
        assert_eq!(t.exponents_at(0), [4].into_iter().collect());
    }

    #[test]
    fn table_errors() {
        let d4 = idx(&[(0, 0), (1, 1)], 4);
        let err = build_condition_table(&[d4[0], d4[1], d4[0]]).unwrap_err();
        assert_eq!(err, Error::RepeatedIndex { n: 0, m: 0 });
        let mixed = [d4[0], WeylIndex::new(0, 1, 3).unwrap()];
        assert!(matches!(
            build_condition_table(&mixed),
            Err(Error::MixedDimension { .. })
        ));
        let too_many = idx(&[(0, 0), (0, 1), (1, 0)], 2);
        assert!(matches!(
            build_condition_table(&too_many),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            build_condition_table(&d4[..1]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn conjugation_is_an_involution() {
        for d in 1..=8 {
            for t in 0..d {
                for e in 0..d {
                    let c = Condition {
                        shift: t,
                        exponent: e,
                    };
                    assert_eq!(c.conjugate(d).conjugate(d), c);
                    let canon = Condition::canonical(t as i64, e as i64, d);
                    assert!(2 * canon.shift <= d);
                    assert_eq!(
                        Condition::canonical(canon.shift as i64, canon.exponent as i64, d),
                        canon
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_form_preserves_vanishing() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for d in 2..=6 {
            let roots = RootsOfUnity::new(d);
            for _ in 0..100 {
                let phi = ComplexVector::random_unit(d, &mut rng);
                for t in 0..d {
                    for e in 0..d {
                        let raw = Condition {
                            shift: t,
                            exponent: e,
                        };
                        let canon = Condition::canonical(t as i64, e as i64, d);
                        let a = raw.evaluate(phi.as_slice(), &roots).norm();
                        let b = canon.evaluate(phi.as_slice(), &roots).norm();
                        assert!((a - b).abs() <= 1e-10, "d={d} ({t},{e})");
                    }
                }
            }
            // a vector where some conditions vanish exactly: |0⟩
            let zero = ComplexVector::basis(d, 0);
            for t in 1..d {
                for e in 0..d {
                    let raw = Condition {
                        shift: t,
                        exponent: e,
                    };
                    let canon = Condition::canonical(t as i64, e as i64, d);
                    assert!(raw.evaluate(zero.as_slice(), &roots).norm() <= 1e-10);
                    assert!(canon.evaluate(zero.as_slice(), &roots).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn conditions_match_operator_residuals() {
        // |⟨φ|U_k†U_l|φ⟩| equals |condition(φ)| for every pair
        let list = idx(&[(0, 0), (0, 1), (4, 1), (1, 2), (3, 3)], 6);
        let ss = StateSet::weyl(&list).unwrap();
        let roots = RootsOfUnity::new(6);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let phi = ComplexVector::random_unit(6, &mut rng);
            for (k, a) in list.iter().enumerate() {
                for b in &list[k + 1..] {
                    let op = &make_weyl(*a).adjoint() * &make_weyl(*b);
                    let lhs = phi.dot(&op.apply(&phi)).norm();
                    let c = Condition::canonical(
                        b.m() as i64 - a.m() as i64,
                        b.n() as i64 - a.n() as i64,
                        6,
                    );
                    let rhs = c.evaluate(phi.as_slice(), &roots).norm();
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
            assert_eq!(ss.len(), 5);
        }
    }
}
