//! Independent brute-force references shared by the integration tests.
//! Nothing here calls into the solver.

#![allow(dead_code)]

/// For every subspace of `F_2^n` (enumerated as reduced echelon matrices, no
/// pruning), the dimension and the bitmask of weights its nonzero elements take.
pub fn all_subspaces(n: usize) -> Vec<(usize, u64)> {
    assert!(n <= 10);
    let mut out = Vec::new();
    for pivots in 0u32..1 << n {
        let pivot_cols: Vec<usize> = (0..n).filter(|&c| pivots >> c & 1 == 1).collect();
        // free slots: (row, column) with column above the row's pivot and not a pivot
        let slots: Vec<(usize, usize)> = pivot_cols
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..n).filter(|&c| pivots >> c & 1 == 0).map(move |c| (r, c)))
            .collect();
        for fill in 0u64..1 << slots.len() {
            let mut rows: Vec<u64> = pivot_cols.iter().map(|&p| 1u64 << p).collect();
            for (i, &(r, c)) in slots.iter().enumerate() {
                if fill >> i & 1 == 1 {
                    rows[r] |= 1 << c;
                }
            }
            let mut mask = 0u64;
            for combo in 1u64..1 << rows.len() {
                let mut x = 0u64;
                for (i, row) in rows.iter().enumerate() {
                    if combo >> i & 1 == 1 {
                        x ^= row;
                    }
                }
                mask |= 1 << x.count_ones();
            }
            out.push((rows.len(), mask));
        }
    }
    out
}

/// Max dimension of a subspace whose nonzero weights miss `forbidden_mask`.
pub fn oracle_k(subspaces: &[(usize, u64)], forbidden_mask: u64) -> usize {
    subspaces.iter().filter(|(_, m)| m & forbidden_mask == 0).map(|(d, _)| *d).max().unwrap_or(0)
}

pub fn interval_mask(a: usize, b: usize) -> u64 {
    (a..=b).fold(0, |m, w| m | 1 << w)
}

/// Number of subspaces of `F_2^n` (sum of Gaussian binomials), for sanity checks.
pub fn subspace_count(n: usize) -> u64 {
    let mut total = 0u64;
    for k in 0..=n {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= (1u64 << (n - i)) - 1;
            den *= (1u64 << (i + 1)) - 1;
        }
        total += num / den;
    }
    total
}
