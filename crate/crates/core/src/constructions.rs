//! Explicit avoiding subspaces: greedy packing, zero padding, parity, and the
//! block family `V + W'` that beats zero padding on annuli missing every
//! multiple of `2d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, EchelonBasis, DEFAULT_ENUMERATION_CAP};
use crate::sets::WeightSet;
use crate::solver::{max_avoiding_subspace, verify_avoiding, SearchConfig, SearchStatus};

/// Largest `n` for the greedy scan (a `2^n`-bit table is kept).
pub const GREEDY_MAX_N: usize = 26;

/// Free-coordinate count up to which `W'` is computed by exact search.
pub const WPRIME_EXACT_LIMIT: usize = 14;

/// Scans `1, 2, 3, ...` as integers and keeps every vector whose coset with
/// the current span misses the forbidden weights.
///
/// `blocked` holds `(F ∪ {0}) + span`; a vector outside it is both new and
/// admissible. The final dimension is at least `n - floor(log2 |F|) - 1`.
pub fn greedy_avoiding(forbidden: &WeightSet, n: usize) -> Result<EchelonBasis> {
    if forbidden.n() != n {
        return Err(Error::LengthMismatch { expected: n, found: forbidden.n() });
    }
    if forbidden.contains(0) {
        return Err(Error::InfeasibleZeroWeight);
    }
    if n > GREEDY_MAX_N {
        return Err(Error::DimensionTooLarge { n, max: GREEDY_MAX_N });
    }
    let size = 1usize << n;
    let table = forbidden.to_table();
    let mut blocked: Vec<bool> = (0..size).map(|u| u == 0 || table[u.count_ones() as usize]).collect();
    let mut rows = Vec::new();
    for v in 1..size {
        if blocked[v] {
            continue;
        }
        rows.push(BitVector::from_u64(n, v as u64)?);
        for u in 0..size {
            // visit each pair {u, u^v} once
            let w = u ^ v;
            if u < w {
                let joined = blocked[u] | blocked[w];
                blocked[u] = joined;
                blocked[w] = joined;
            }
        }
    }
    EchelonBasis::from_vectors(n, rows)
}

/// Unit vectors on the first `a-1` coordinates plus `inner` placed on coordinates `a..n`.
///
/// Every span element splits as `(u, w)` with `w(u) <= a-1` and `w` either
/// zero or heavier than `b`, so the total weight is never in `[a, b]`.
pub fn zero_pad(a: usize, b: usize, n: usize, inner: &EchelonBasis) -> Result<EchelonBasis> {
    if a == 0 {
        return Err(Error::ZeroRadius);
    }
    if a > n || b > n {
        return Err(Error::RadiusOutOfRange { a, b, n });
    }
    let width = n - a + 1;
    if inner.n() != width {
        return Err(Error::LengthMismatch { expected: width, found: inner.n() });
    }
    if inner.dim() > 0 {
        let lightest = inner.min_nonzero_weight(DEFAULT_ENUMERATION_CAP)?;
        if lightest <= b {
            return Err(Error::InnerTooShallow { weight: lightest, b });
        }
    }
    let pad = (0..a - 1).map(|i| BitVector::unit(n, i));
    let body = inner.rows().iter().map(|r| r.embed(n, a - 1));
    EchelonBasis::from_vectors(n, pad.chain(body).collect::<Result<Vec<_>>>()?)
}

/// The even-weight subspace: kernel of the all-ones row.
pub fn even_weight_basis(n: usize) -> Result<EchelonBasis> {
    Ok(BitMatrix::new(n, vec![BitVector::ones(n)?])?.kernel_basis())
}

fn block_count(n: usize, d: usize) -> Result<usize> {
    if d == 0 || d > n {
        return Err(Error::BlockCountTooSmall { n, d });
    }
    Ok(n / d)
}

/// Block-constant vectors (blocks of length `d`, tail zero) with an even number of full blocks.
pub fn construct_v(n: usize, d: usize) -> Result<EchelonBasis> {
    let blocks = block_count(n, d).ok().filter(|&q| q >= 2).ok_or(Error::BlockCountTooSmall { n, d })?;
    let block = |q: usize| -> Result<BitVector> {
        let mut v = BitVector::zeros(n)?;
        for j in 0..d {
            v.set(q * d + j, true);
        }
        Ok(v)
    };
    let first = block(0)?;
    let gens = (1..blocks).map(|q| Ok(block(q)?.xor(&first))).collect::<Result<Vec<_>>>()?;
    EchelonBasis::from_vectors(n, gens)
}

/// Coordinates left free in `W_{n,d}`: the first `floor(d/2)` positions of each
/// full block plus the tail beyond the last full block (0-based).
pub fn w_free_coordinates(n: usize, d: usize) -> Result<Vec<usize>> {
    if d == 0 {
        return Err(Error::BlockCountTooSmall { n, d });
    }
    let blocks = n / d;
    let mut free: Vec<usize> = (0..blocks).flat_map(|q| (0..d / 2).map(move |j| q * d + j)).collect();
    free.extend(blocks * d..n);
    Ok(free)
}

/// Dimension of `W_{n,d}`: `floor(d/2) * floor(n/d) + n - d * floor(n/d)`.
pub fn w_dimension(n: usize, d: usize) -> usize {
    (d / 2) * (n / d) + n - d * (n / d)
}

/// Vectors vanishing on the trailing `ceil(d/2)` positions of each full block.
pub fn construct_w(n: usize, d: usize) -> Result<EchelonBasis> {
    let free = w_free_coordinates(n, d)?;
    EchelonBasis::from_vectors(n, free.iter().map(|&i| BitVector::unit(n, i)).collect::<Result<Vec<_>>>()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WprimeMethod {
    Exact,
    Greedy,
    /// The exact search hit its budget; the subspace is valid but possibly not maximal.
    BudgetLimited,
}

/// Largest subspace of `W_{n,d}` with every nonzero element heavier than `b`,
/// built on the free coordinates of `W` (exactly when there are at most
/// [`WPRIME_EXACT_LIMIT`] of them).
pub fn construct_wprime(n: usize, d: usize, b: usize, cfg: &SearchConfig) -> Result<(EchelonBasis, WprimeMethod)> {
    let free = w_free_coordinates(n, d)?;
    let f = free.len();
    if f == 0 {
        return Ok((EchelonBasis::empty(n), WprimeMethod::Exact));
    }
    let forbidden = WeightSet::interval(1, b.min(f), f)?;
    let (inner, method) = if f <= WPRIME_EXACT_LIMIT {
        let res = max_avoiding_subspace(&forbidden, f, cfg)?;
        let method = match res.status {
            SearchStatus::Optimal => WprimeMethod::Exact,
            SearchStatus::LowerBoundOnly => WprimeMethod::BudgetLimited,
        };
        (res.witness, method)
    } else {
        (greedy_avoiding(&forbidden, f)?, WprimeMethod::Greedy)
    };
    let rows = inner
        .rows()
        .iter()
        .map(|r| {
            let mut out = BitVector::zeros(n)?;
            for i in r.ones_iter() {
                out.set(free[i], true);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((EchelonBasis::from_vectors(n, rows)?, method))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleParts {
    pub n: usize,
    pub d: usize,
    pub a: usize,
    pub b: usize,
    #[serde(skip)]
    pub v: EchelonBasis,
    #[serde(skip)]
    pub w: EchelonBasis,
    #[serde(skip)]
    pub wprime: EchelonBasis,
    #[serde(skip)]
    pub combined: EchelonBasis,
    pub dim_v: usize,
    pub dim_w: usize,
    pub dim_wprime: usize,
    pub dim_combined: usize,
    pub wprime_method: WprimeMethod,
    /// `n - dim(V + W')`, an upper bound on `m*(a, b, n)`.
    pub implied_upper_bound: usize,
}

/// `V_{n,d} + W'_{n,d,b}`, a direct sum avoiding `A(a, b, n)` whenever `[a, b]`
/// contains no multiple of `2d`.
pub fn combine_v_wprime(n: usize, d: usize, b: usize, a: usize, cfg: &SearchConfig) -> Result<CounterexampleParts> {
    if a == 0 {
        return Err(Error::ZeroRadius);
    }
    if a > b || b > n {
        return Err(Error::RadiusOutOfRange { a, b, n });
    }
    let step = 2 * d;
    let first_multiple = a.div_ceil(step) * step;
    if step > 0 && first_multiple <= b {
        return Err(Error::ForbiddenMultiple { a, b, multiple: first_multiple });
    }
    let v = construct_v(n, d)?;
    let w = construct_w(n, d)?;
    let (wprime, wprime_method) = construct_wprime(n, d, b, cfg)?;
    let mut combined = v.clone();
    for r in wprime.rows() {
        combined = combined.extend(r)?;
    }
    let forbidden = WeightSet::interval(a, b, n)?;
    if !verify_avoiding(&combined, &forbidden, cfg.enumeration_cap.max(n))? {
        return Err(Error::WitnessRejected);
    }
    Ok(CounterexampleParts {
        n,
        d,
        a,
        b,
        dim_v: v.dim(),
        dim_w: w.dim(),
        dim_wprime: wprime.dim(),
        dim_combined: combined.dim(),
        implied_upper_bound: n - combined.dim(),
        v,
        w,
        wprime,
        combined,
        wprime_method,
    })
}
