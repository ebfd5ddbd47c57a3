//! Batch runs of the pipeline over subsets of Weyl indices.

use locclab_core::{StateSet, WeylIndex};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::pipeline::{decide, DecideOptions, DecideReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub d: usize,
    pub n: usize,
    /// Keep only subsets containing `(0,0)`.
    pub canonical: bool,
    pub limit: Option<usize>,
}

/// `N`-subsets of the `d²` Weyl indices in lexicographic order of `(n, m)`.
/// In canonical mode only subsets whose first index is `(0,0)` are kept:
/// replacing `U_i` by `U_1†U_i` leaves every residual unchanged, so each
/// subset is equivalent to one of these.
pub fn subsets(d: usize, n: usize, canonical: bool) -> Vec<Vec<WeylIndex>> {
    let all: Vec<WeylIndex> = WeylIndex::all(d).collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(n);
    fn rec(
        all: &[WeylIndex],
        start: usize,
        n: usize,
        pick: &mut Vec<WeylIndex>,
        out: &mut Vec<Vec<WeylIndex>>,
    ) {
        if pick.len() == n {
            out.push(pick.clone());
            return;
        }
        for i in start..all.len() {
            pick.push(all[i]);
            rec(all, i + 1, n, pick, out);
            pick.pop();
        }
    }
    if canonical {
        if n > 0 {
            pick.push(all[0]);
            rec(&all, 1, n, &mut pick, &mut out);
        }
    } else {
        rec(&all, 0, n, &mut pick, &mut out);
    }
    out
}

pub fn validate(opts: &SweepOptions) -> Result<()> {
    if !(2..=8).contains(&opts.d) {
        return Err(CliError::Usage(format!(
            "--d must lie in 2..=8, got {}",
            opts.d
        )));
    }
    if opts.n < 2 || opts.n > opts.d {
        return Err(CliError::Usage(format!(
            "--N must satisfy 2 <= N <= d = {}, got {}",
            opts.d, opts.n
        )));
    }
    Ok(())
}

/// Runs `decide` on every subset concurrently; rows come back in
/// enumeration order.
pub fn sweep(opts: &SweepOptions, decide_opts: &DecideOptions) -> Result<Vec<DecideReport>> {
    validate(opts)?;
    let mut sets = subsets(opts.d, opts.n, opts.canonical);
    if let Some(k) = opts.limit {
        sets.truncate(k);
    }
    sets.par_iter()
        .map(|idx| {
            let ss = StateSet::weyl(idx)?;
            decide(&ss, Some(idx), decide_opts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(3, 3, false).len(), 84);
        assert_eq!(subsets(3, 3, true).len(), 28);
        assert_eq!(subsets(4, 4, true).len(), 455);
        assert_eq!(subsets(2, 2, false).len(), 6);
    }

    #[test]
    fn canonical_subsets_start_at_identity() {
        for s in subsets(4, 3, true) {
            assert_eq!((s[0].n(), s[0].m()), (0, 0));
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = |d, n| {
            validate(&SweepOptions {
                d,
                n,
                canonical: true,
                limit: None,
            })
            .is_err()
        };
        assert!(bad(1, 1));
        assert!(bad(9, 2));
        assert!(bad(4, 5));
        assert!(bad(4, 1));
        assert!(!bad(4, 4));
    }
}
