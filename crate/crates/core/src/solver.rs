//! Exact maximum dimension of a subspace avoiding a set of forbidden weights.
//!
//! The search walks reduced row echelon bases, adding rows in decreasing pivot
//! order. With that order a new row only has to be reduced against the rows
//! already present, and every subspace is reached along exactly one path.
//!
//! Each node keeps the sorted list of admissible coset representatives: the
//! reduced vectors `u` (pivot below every current pivot) such that the whole
//! coset `u + span` misses the forbidden weights. Choosing `v` from that list
//! leaves, as the child's list, every `u` with a smaller pivot for which
//! `u + v` is itself listed, so admissibility never re-scans the span.
//!
//! Forbidden sets are weight sets, hence invariant under coordinate
//! permutations. Any subspace can be permuted so that one of its sparsest
//! nonzero vectors is the all-ones vector on the top `s` coordinates; that
//! vector is then the top row of the echelon basis. The root therefore branches
//! on the minimum weight `s` only.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::distinguishing_bounds;
use crate::constructions::greedy_avoiding;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, EchelonBasis, DEFAULT_ENUMERATION_CAP};
use crate::sets::{Annulus, WeightSet};

/// Largest `n` the exact search accepts.
pub const SOLVER_MAX_N: usize = 24;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub worker_count: usize,
    /// A dimension known to be achievable; the search only looks for subspaces at least this large.
    pub initial_lower_bound: Option<usize>,
    pub time_limit: Option<Duration>,
    pub enumeration_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 1_000_000_000,
            worker_count: 1,
            initial_lower_bound: None,
            time_limit: None,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.worker_count = workers;
        self
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.worker_count == 0 {
            return Err(Error::DomainError("worker_count must be at least 1".into()));
        }
        if self.node_budget == 0 {
            return Err(Error::DomainError("node_budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Optimal,
    /// The budget ran out; `k` is achieved by the witness but may not be maximal.
    LowerBoundOnly,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub forbidden: WeightSet,
    pub k: usize,
    pub m_star: usize,
    #[serde(skip)]
    pub witness: EchelonBasis,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    /// Minimum weight of a nonzero witness element; `None` for the zero subspace.
    pub sparsest_witness_weight: Option<usize>,
}

impl SearchResult {
    /// Checks the witness against `forbidden` before accepting it.
    pub fn new(
        forbidden: WeightSet,
        witness: EchelonBasis,
        status: SearchStatus,
        nodes_explored: u64,
        cap: usize,
    ) -> Result<Self> {
        let n = forbidden.n();
        if witness.n() != n {
            return Err(Error::LengthMismatch { expected: n, found: witness.n() });
        }
        if !verify_avoiding(&witness, &forbidden, cap)? {
            return Err(Error::WitnessRejected);
        }
        let sparsest = match witness.dim() {
            0 => None,
            _ => Some(witness.min_nonzero_weight(cap)?),
        };
        Ok(SearchResult {
            n,
            forbidden,
            k: witness.dim(),
            m_star: n - witness.dim(),
            witness,
            status,
            nodes_explored,
            sparsest_witness_weight: sparsest,
        })
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SearchStatus::Optimal
    }
}

/// True iff no nonzero element of `span(basis)` has a weight in `forbidden`.
pub fn verify_avoiding(basis: &EchelonBasis, forbidden: &WeightSet, cap: usize) -> Result<bool> {
    if basis.n() != forbidden.n() {
        return Err(Error::LengthMismatch { expected: forbidden.n(), found: basis.n() });
    }
    if basis.n() <= 64 {
        let words: Vec<u64> = basis.rows().iter().map(BitVector::as_u64).collect();
        if basis.dim() > cap {
            return Err(Error::CapExceeded { dim: basis.dim(), cap });
        }
        let table = forbidden.to_table();
        let mut cur = 0u64;
        for i in 1u64..1 << basis.dim() {
            cur ^= words[i.trailing_zeros() as usize];
            if table[cur.count_ones() as usize] {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    Ok(basis.enumerate_span(cap)?.skip(1).all(|v| !forbidden.contains(v.weight())))
}

struct Shared {
    n: usize,
    best_k: AtomicUsize,
    best_rows: Mutex<Option<Vec<u64>>>,
    nodes: AtomicU64,
    aborted: AtomicBool,
    budget: u64,
    deadline: Option<Instant>,
}

impl Shared {
    fn record(&self, rows: &[u64]) {
        let dim = rows.len();
        if dim <= self.best_k.load(Ordering::Relaxed) {
            return;
        }
        let mut slot = self.best_rows.lock().expect("poisoned");
        // re-check under the lock so best_k and the stored witness agree
        if dim > self.best_k.load(Ordering::Relaxed) {
            *slot = Some(rows.to_vec());
            self.best_k.store(dim, Ordering::Relaxed);
        }
    }

    fn should_stop(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }
}

struct Worker<'a> {
    shared: &'a Shared,
    pending: u64,
}

const FLUSH_EVERY: u64 = 1024;

impl Worker<'_> {
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            self.flush();
        }
        !self.shared.should_stop()
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        let over_time = self.shared.deadline.is_some_and(|d| Instant::now() >= d);
        if total >= self.shared.budget || over_time {
            self.shared.aborted.store(true, Ordering::Relaxed);
        }
    }

    fn dfs(&mut self, cands: &[u64], rows: &mut Vec<u64>) {
        if !self.tick() {
            return;
        }
        self.shared.record(rows);
        let best = self.shared.best_k.load(Ordering::Relaxed);
        if rows.len() + remaining_bound(cands) <= best {
            return;
        }
        let mut child = Vec::with_capacity(cands.len());
        for &v in cands {
            let best = self.shared.best_k.load(Ordering::Relaxed);
            if rows.len() + 1 + remaining_bound_below(cands, v.trailing_zeros()) <= best {
                continue;
            }
            extend_candidates(cands, v, &mut child);
            rows.push(v);
            self.dfs(&child, rows);
            rows.pop();
            if self.shared.should_stop() {
                return;
            }
        }
    }
}

impl Drop for Worker<'_> {
    fn drop(&mut self) {
        if self.pending > 0 {
            self.flush();
        }
    }
}

/// Upper bound on how many more rows the candidates can contribute: one per
/// distinct pivot, and `2^r - 1` distinct nonzero cosets are needed for `r` rows.
fn remaining_bound(cands: &[u64]) -> usize {
    let pivots = cands.iter().fold(0u64, |acc, &u| acc | (u & u.wrapping_neg()));
    let by_pivots = pivots.count_ones() as usize;
    let by_count = (usize::BITS - (cands.len() + 1).leading_zeros() - 1) as usize;
    by_pivots.min(by_count)
}

fn remaining_bound_below(cands: &[u64], pivot: u32) -> usize {
    let mask = (1u64 << pivot) - 1;
    let mut pivots = 0u64;
    let mut count = 0usize;
    for &u in cands {
        if u & mask != 0 {
            pivots |= u & u.wrapping_neg();
            count += 1;
        }
    }
    (pivots.count_ones() as usize).min((usize::BITS - (count + 1).leading_zeros() - 1) as usize)
}

/// Candidates after choosing `v`: representatives with pivot below `v`'s whose
/// coset partner `u ^ v` is also admissible, reduced at `v`'s pivot.
fn extend_candidates(cands: &[u64], v: u64, out: &mut Vec<u64>) {
    out.clear();
    let pv = v.trailing_zeros();
    let below = (1u64 << pv) - 1;
    for &u in cands {
        if u & below == 0 {
            continue;
        }
        let partner = u ^ v;
        if cands.binary_search(&partner).is_ok() {
            out.push(if u >> pv & 1 == 1 { partner } else { u });
        }
    }
    out.sort_unstable();
    out.dedup();
}

/// Root candidates for the branch whose sparsest vector has weight `s`.
fn branch_root(n: usize, s: usize, allowed: &[bool]) -> (u64, Vec<u64>) {
    let top = ((1u64 << s) - 1) << (n - s);
    let pivot = n - s;
    let ok = |u: u64| {
        let w = u.count_ones() as usize;
        w >= s && allowed[w]
    };
    let cands = (1u64..1 << pivot)
        .chain((1u64..1 << (s - 1)).flat_map(|hi| {
            let high = hi << (pivot + 1);
            (1u64..1 << pivot).map(move |lo| high | lo)
        }))
        .filter(|&u| ok(u) && ok(u ^ top))
        .collect::<Vec<_>>();
    let mut cands = cands;
    cands.sort_unstable();
    (top, cands)
}

/// Maximum dimension of a subspace of `F_2^n` with no nonzero element of a forbidden weight.
pub fn max_avoiding_subspace(forbidden: &WeightSet, n: usize, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    if forbidden.n() != n {
        return Err(Error::LengthMismatch { expected: n, found: forbidden.n() });
    }
    if forbidden.contains(0) {
        return Err(Error::InfeasibleZeroWeight);
    }
    if n > SOLVER_MAX_N {
        return Err(Error::DimensionTooLarge { n, max: SOLVER_MAX_N });
    }

    let greedy = greedy_avoiding(forbidden, n)?;
    let cap = cfg.enumeration_cap.max(n);
    if greedy.dim() == n {
        return SearchResult::new(*forbidden, greedy, SearchStatus::Optimal, 1, cap);
    }

    let seed = cfg.initial_lower_bound.unwrap_or(0).min(n);
    let mut result = run_search(forbidden, n, cfg, &greedy, seed.saturating_sub(1).max(greedy.dim()))?;
    if result.is_optimal() && result.k < seed {
        // the seed overstated what is achievable; search again from the greedy bound
        result = run_search(forbidden, n, cfg, &greedy, greedy.dim())?;
    }
    Ok(result)
}

fn run_search(
    forbidden: &WeightSet,
    n: usize,
    cfg: &SearchConfig,
    greedy: &EchelonBasis,
    threshold: usize,
) -> Result<SearchResult> {
    let allowed: Vec<bool> = (0..=n).map(|w| !forbidden.contains(w)).collect();
    let shared = Shared {
        n,
        best_k: AtomicUsize::new(threshold),
        best_rows: Mutex::new(None),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        budget: cfg.node_budget,
        deadline: cfg.time_limit.map(|t| Instant::now() + t),
    };
    let branches: Vec<usize> = (1..=n).filter(|&s| allowed[s]).collect();

    let explore = |s: usize, parallel: bool| {
        let (top, cands) = branch_root(n, s, &allowed);
        let mut worker = Worker { shared: &shared, pending: 0 };
        if !worker.tick() {
            return;
        }
        let mut rows = vec![top];
        shared.record(&rows);
        if remaining_bound(&cands) < shared.best_k.load(Ordering::Relaxed) {
            return;
        }
        drop(worker);
        let first_level = |v: u64| {
            let mut worker = Worker { shared: &shared, pending: 0 };
            if 2 + remaining_bound_below(&cands, v.trailing_zeros()) <= shared.best_k.load(Ordering::Relaxed) {
                return;
            }
            let mut child = Vec::new();
            extend_candidates(&cands, v, &mut child);
            let mut rows = vec![top, v];
            worker.dfs(&child, &mut rows);
        };
        if parallel {
            cands.par_iter().for_each(|&v| first_level(v));
        } else {
            for &v in &cands {
                first_level(v);
                if shared.should_stop() {
                    break;
                }
            }
        }
        rows.clear();
    };

    if cfg.worker_count > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.worker_count)
            .build()
            .map_err(|e| Error::DomainError(format!("thread pool: {e}")))?;
        pool.install(|| branches.par_iter().for_each(|&s| explore(s, true)));
    } else {
        for &s in &branches {
            explore(s, false);
            if shared.should_stop() {
                break;
            }
        }
    }

    let status =
        if shared.aborted.load(Ordering::Relaxed) { SearchStatus::LowerBoundOnly } else { SearchStatus::Optimal };
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let witness = match shared.best_rows.into_inner().expect("poisoned") {
        Some(rows) => {
            EchelonBasis::from_vectors(shared.n, rows.into_iter().map(|r| BitVector::from_u64(n, r).expect("n <= 64")))?
        }
        None => greedy.clone(),
    };
    SearchResult::new(*forbidden, witness, status, nodes, cfg.enumeration_cap.max(n))
}

/// `m*(a, b, n)` for `1 <= a <= b <= n`.
pub fn m_star(a: usize, b: usize, n: usize, cfg: &SearchConfig) -> Result<SearchResult> {
    if a == 0 {
        return Err(Error::ZeroRadius);
    }
    let annulus = Annulus::new(a, b, n)?;
    if annulus.is_empty() {
        return Err(Error::RadiusOutOfRange { a, b, n });
    }
    max_avoiding_subspace(&annulus.weights(), n, cfg)
}

/// Memoizing front end; the key is the forbidden weight set together with `n`.
pub struct Solver {
    cfg: SearchConfig,
    cache: Mutex<HashMap<WeightSet, SearchResult>>,
}

impl Solver {
    pub fn new(cfg: SearchConfig) -> Self {
        Solver { cfg, cache: Mutex::new(HashMap::new()) }
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn solve(&self, forbidden: &WeightSet) -> Result<SearchResult> {
        if let Some(hit) = self.cache.lock().expect("poisoned").get(forbidden) {
            return Ok(hit.clone());
        }
        let res = max_avoiding_subspace(forbidden, forbidden.n(), &self.cfg)?;
        if res.is_optimal() {
            self.cache.lock().expect("poisoned").insert(*forbidden, res.clone());
        }
        Ok(res)
    }

    /// `m*(a, b, n)`, with `b` clamped to `n` (weights above `n` do not occur).
    pub fn m_star(&self, a: usize, b: usize, n: usize) -> Result<SearchResult> {
        if a == 0 {
            return Err(Error::ZeroRadius);
        }
        if a > b || a > n {
            return Err(Error::RadiusOutOfRange { a, b, n });
        }
        self.solve(&WeightSet::interval(a, b.min(n), n)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRecord {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub k: usize,
    pub m_star: usize,
    pub status: SearchStatus,
    pub nodes: u64,
    #[serde(skip)]
    pub witness: EchelonBasis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_file: Option<String>,
}

impl TableRecord {
    pub fn from_result(a: usize, b: usize, res: &SearchResult) -> Self {
        TableRecord {
            a,
            b,
            n: res.n,
            k: res.k,
            m_star: res.m_star,
            status: res.status,
            nodes: res.nodes_explored,
            witness: res.witness.clone(),
            witness_file: None,
        }
    }

    pub fn tsv_header() -> &'static str {
        "a\tb\tn\tk\tm_star\tstatus\tnodes"
    }

    pub fn to_tsv(&self) -> String {
        let status = match self.status {
            SearchStatus::Optimal => "optimal",
            SearchStatus::LowerBoundOnly => "lower_bound_only",
        };
        format!("{}\t{}\t{}\t{}\t{}\t{}\t{}", self.a, self.b, self.n, self.k, self.m_star, status, self.nodes)
    }
}

/// Records for every `a <= b <= n` drawn from the three ranges, ordered by `n`, then `a`, then `b`.
pub fn build_table<A, B, N>(a_range: A, b_range: B, n_range: N, solver: &Solver) -> Result<Vec<TableRecord>>
where
    A: IntoIterator<Item = usize> + Clone,
    B: IntoIterator<Item = usize> + Clone,
    N: IntoIterator<Item = usize>,
{
    let mut out = Vec::new();
    for n in n_range {
        for a in a_range.clone().into_iter().filter(|&a| a >= 1 && a <= n) {
            for b in b_range.clone().into_iter().filter(|&b| a <= b && b <= n) {
                let res = solver.m_star(a, b, n)?;
                out.push(TableRecord::from_result(a, b, &res));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `m*(a,b,n) = m*(1,b,n-a+1)` when `b >= 2a-2`.
    ReductionEquality,
    /// `k(a,b,n) <= max_{1<=s<a} s + k(a-s,b,n-s)` when `b >= 2a-2`, `a >= 2`.
    SparsestVectorRecursion,
    /// `m*(a,b,n) <= m*(1,b,n-a+1)`.
    ZeroPadUpperBound,
    /// The counting bounds for the annulus as forbidden set.
    CountingSandwich,
    /// `k(1,b,n-1) + 1 >= k(1,b,n)`.
    PuncturingMonotone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub relation: Relation,
    pub detail: String,
}

/// An entry with `b < 2a-2` where the reduction equality does not hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionException {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub m_star: usize,
    pub reduced_m_star: usize,
    /// Sparsest witness weight compared against `b - a + 1`.
    pub witness_has_light_vector: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub skipped_non_optimal: usize,
    pub violations: Vec<Violation>,
    pub exceptions: Vec<ReductionException>,
}

impl RelationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural relations between table entries. Entries whose
/// status is not optimal are skipped; a referenced entry that is absent is an error.
pub fn check_relations(table: &[TableRecord]) -> Result<RelationReport> {
    let index: HashMap<(usize, usize, usize), &TableRecord> = table.iter().map(|r| ((r.a, r.b, r.n), r)).collect();
    let get = |a: usize, b: usize, n: usize| -> Result<&TableRecord> {
        let b = b.min(n);
        index.get(&(a, b, n)).copied().ok_or(Error::MissingDependency { a, b, n })
    };

    let mut report = RelationReport::default();
    for rec in table {
        let (a, b, n) = (rec.a, rec.b, rec.n);
        if rec.status != SearchStatus::Optimal {
            report.skipped_non_optimal += 1;
            continue;
        }
        let mut deps_optimal = true;
        let mut violate = |relation: Relation, detail: String| {
            report.violations.push(Violation { a, b, n, relation, detail });
        };

        let reduced = get(1, b, n - a + 1)?;
        deps_optimal &= reduced.status == SearchStatus::Optimal;

        // zero padding bound, always
        if reduced.status == SearchStatus::Optimal && rec.m_star > reduced.m_star {
            violate(
                Relation::ZeroPadUpperBound,
                format!("m*={} > m*(1,{},{})={}", rec.m_star, reduced.b, reduced.n, reduced.m_star),
            );
        }

        if b + 2 >= 2 * a {
            if reduced.status == SearchStatus::Optimal && rec.m_star != reduced.m_star {
                violate(
                    Relation::ReductionEquality,
                    format!("m*={} != m*(1,{},{})={}", rec.m_star, reduced.b, reduced.n, reduced.m_star),
                );
            }
            if a >= 2 {
                let mut rhs = 0;
                for s in 1..a {
                    let sub = get(a - s, b, n - s)?;
                    deps_optimal &= sub.status == SearchStatus::Optimal;
                    rhs = rhs.max(s + sub.k);
                }
                if rec.k > rhs {
                    violate(Relation::SparsestVectorRecursion, format!("k={} > max_s s+k(a-s,b,n-s)={rhs}", rec.k));
                }
            }
        } else if reduced.status == SearchStatus::Optimal && rec.m_star != reduced.m_star {
            let light = b + 1 - a;
            report.exceptions.push(ReductionException {
                a,
                b,
                n,
                m_star: rec.m_star,
                reduced_m_star: reduced.m_star,
                witness_has_light_vector: rec.witness.dim() > 0
                    && rec.witness.min_nonzero_weight(DEFAULT_ENUMERATION_CAP).is_ok_and(|w| w <= light),
            });
        }

        let bounds = distinguishing_bounds(&WeightSet::interval(a, b, n)?);
        if rec.m_star < bounds.lower || rec.m_star > bounds.upper {
            violate(
                Relation::CountingSandwich,
                format!("m*={} outside [{}, {}]", rec.m_star, bounds.lower, bounds.upper),
            );
        }

        if a == 1 && n >= 2 {
            let shorter = get(1, b, n - 1)?;
            deps_optimal &= shorter.status == SearchStatus::Optimal;
            if shorter.k + 1 < rec.k {
                violate(
                    Relation::PuncturingMonotone,
                    format!("k(1,{},{})+1={} < k={}", shorter.b, n - 1, shorter.k + 1, rec.k),
                );
            }
        }

        if !deps_optimal {
            report.skipped_non_optimal += 1;
        }
        report.checked += 1;
    }
    Ok(report)
}
