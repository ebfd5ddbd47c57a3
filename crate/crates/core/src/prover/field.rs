//! Exact rank certificates for character matrices.
//!
//! Entries are powers of `ω = e^{2πi/d}`. The map `ω ↦ g`, with `g` an
//! element of order `d` in `F_p` (`p ≡ 1 mod d`), is a ring homomorphism
//! from `Z[ω]`, so a nonzero minor modulo `p` is a nonzero minor over `C`.
//! Full rank modulo some prime therefore certifies full rank; a deficient
//! rank modulo `p` proves nothing and is reported as "not certified".

const PRIMES_TRIED: usize = 3;
const SEARCH_FROM: u64 = 1 << 20;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of multiplicative order exactly `d` in `F_p`.
fn root_of_order(d: u64, p: u64) -> u64 {
    let factors = prime_factors(d);
    (2..p)
        .map(|h| pow_mod(h, (p - 1) / d, p))
        .find(|&g| factors.iter().all(|&q| pow_mod(g, d / q, p) != 1))
        .expect("p ≡ 1 mod d has elements of every order dividing p-1")
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col] * inv % p;
                for c in col..ncols {
                    let sub = factor * rows[rank][c] % p;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True when the matrix `[ω^{e·j}]` (rows `exponents`, columns `columns`)
/// is certified to have full column rank.
pub(crate) fn full_column_rank(d: usize, exponents: &[usize], columns: &[usize]) -> bool {
    if columns.is_empty() || exponents.len() < columns.len() {
        return false;
    }
    let d64 = d as u64;
    let mut p = SEARCH_FROM - SEARCH_FROM % d64 + 1;
    let mut tried = 0;
    while tried < PRIMES_TRIED {
        if is_prime(p) {
            tried += 1;
            let g = root_of_order(d64, p);
            let rows = exponents
                .iter()
                .map(|&e| {
                    columns
                        .iter()
                        .map(|&j| pow_mod(g, ((e * j) % d) as u64, p))
                        .collect()
                })
                .collect();
            if rank_mod(rows, p) == columns.len() {
                return true;
            }
        }
        p += d64;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_have_exact_order() {
        for d in 1..=12u64 {
            let p = (1..)
                .map(|k| k * d + 1)
                .find(|&p| is_prime(p) && p > 100)
                .unwrap();
            let g = root_of_order(d, p);
            assert_eq!(pow_mod(g, d, p), 1);
            for k in 1..d {
                assert_ne!(pow_mod(g, k, p), 1, "d={d}");
            }
        }
    }

    #[test]
    fn dft_submatrices() {
        // distinct characters restricted to all of Z_d are independent
        assert!(full_column_rank(
            6,
            &[0, 1, 2, 3, 4, 5],
            &[0, 1, 2, 3, 4, 5]
        ));
        // on the subgroup {0,2,4} of Z_6 the exponents 1,3,5 restrict to the
        // three distinct characters of Z_3
        assert!(full_column_rank(6, &[1, 3, 5], &[0, 2, 4]));
        // exponents 0 and 3 agree on {0,2,4}: rank 1 < 2 columns
        assert!(!full_column_rank(6, &[0, 3], &[0, 2]));
        assert!(!full_column_rank(4, &[1], &[0, 1]));
        assert!(!full_column_rank(4, &[1], &[]));
        assert!(full_column_rank(5, &[2], &[3]));
    }
}
