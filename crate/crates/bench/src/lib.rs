//! Benchmark fixtures for `locclab-core`.

use locclab_core::{StateSet, WeylIndex};

/// Name, dimension and Weyl indices of a fixture set.
pub type Fixture = (&'static str, usize, &'static [(i64, i64)]);

/// The three infeasible index sets.
pub const EXAMPLES: [Fixture; 3] = [
    ("d4", 4, &[(0, 0), (1, 1), (3, 2), (3, 1)]),
    ("d5", 5, &[(0, 0), (0, 1), (3, 1), (2, 2)]),
    ("d6", 6, &[(0, 0), (0, 1), (4, 1), (1, 2), (3, 3)]),
];

pub fn indices(d: usize, idx: &[(i64, i64)]) -> Vec<WeylIndex> {
    idx.iter()
        .map(|&(n, m)| WeylIndex::new(n, m, d).expect("valid fixture index"))
        .collect()
}

pub fn weyl_set(d: usize, idx: &[(i64, i64)]) -> StateSet {
    StateSet::weyl(&indices(d, idx)).expect("orthogonal fixture set")
}
