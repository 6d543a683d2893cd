//! Python module `lbc`. Vectors cross the boundary as `0`/`1` strings.

use lbc_core::bounds::{conjecture_rate as rate, distinguishing_bounds as dbounds, entropy as h, lemma1_bounds as l1};
use lbc_core::classify::{build_classifier, Classifier as CoreClassifier, Strategy, Verdict};
use lbc_core::constructions::{combine_v_wprime, greedy_avoiding as greedy};
use lbc_core::{
    verify_avoiding, BitVector, ClassPair, EchelonBasis, Error, SearchConfig, SearchResult as CoreResult, SearchStatus,
    SymmetricClass, WeightSet as CoreWeightSet, DEFAULT_ENUMERATION_CAP as CAP,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn bits(text: &str) -> PyResult<BitVector> {
    BitVector::parse_bits(text).map_err(err)
}

fn config(workers: usize, node_budget: Option<u64>) -> SearchConfig {
    let cfg = SearchConfig::default().with_workers(workers);
    match node_budget {
        Some(b) => cfg.with_node_budget(b),
        None => cfg,
    }
}

/// Set of Hamming weights in `0..=n`.
#[pyclass(name = "WeightSet", module = "lbc", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct WeightSet(CoreWeightSet);

#[pymethods]
impl WeightSet {
    #[new]
    fn new(n: usize, weights: Vec<usize>) -> PyResult<Self> {
        CoreWeightSet::from_weights(n, weights).map(WeightSet).map_err(err)
    }

    /// Accepts `a..b`, comma lists, and the tokens `n`, `n-k`.
    #[staticmethod]
    fn parse(text: &str, n: usize) -> PyResult<Self> {
        CoreWeightSet::parse(text, n).map(WeightSet).map_err(err)
    }

    #[staticmethod]
    fn interval(lo: usize, hi: usize, n: usize) -> PyResult<Self> {
        CoreWeightSet::interval(lo, hi, n).map(WeightSet).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn weights(&self) -> Vec<usize> {
        self.0.iter().collect()
    }

    fn __contains__(&self, w: usize) -> bool {
        self.0.contains(w)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("WeightSet.parse('{}', {})", self.0, self.0.n())
    }
}

/// Subspace of `F_2^n` held as a reduced echelon basis.
#[pyclass(name = "Subspace", module = "lbc", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct Subspace(EchelonBasis);

#[pymethods]
impl Subspace {
    #[new]
    fn new(n: usize, rows: Vec<String>) -> PyResult<Self> {
        let vs = rows.iter().map(|r| bits(r)).collect::<PyResult<Vec<_>>>()?;
        EchelonBasis::from_vectors(n, vs).map(Subspace).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn rows(&self) -> Vec<String> {
        self.0.rows().iter().map(|r| r.to_string()).collect()
    }

    fn __contains__(&self, v: &str) -> PyResult<bool> {
        let v = bits(v)?;
        if v.len() != self.0.n() {
            return Err(err(Error::LengthMismatch { expected: self.0.n(), found: v.len() }));
        }
        Ok(self.0.span_contains(&v))
    }

    fn min_nonzero_weight(&self) -> PyResult<usize> {
        self.0.min_nonzero_weight(CAP).map_err(err)
    }

    fn weight_distribution(&self) -> PyResult<Vec<u64>> {
        self.0.weight_distribution(CAP).map_err(err)
    }

    fn avoids(&self, forbidden: &WeightSet) -> PyResult<bool> {
        verify_avoiding(&self.0, &forbidden.0, CAP).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Subspace(n={}, dim={})", self.0.n(), self.0.dim())
    }
}

#[pyclass(name = "SearchResult", module = "lbc", frozen, get_all)]
struct SearchResult {
    n: usize,
    k: usize,
    m_star: usize,
    optimal: bool,
    nodes_explored: u64,
    sparsest_witness_weight: Option<usize>,
    witness: Subspace,
    forbidden: WeightSet,
}

impl From<CoreResult> for SearchResult {
    fn from(r: CoreResult) -> Self {
        SearchResult {
            n: r.n,
            k: r.k,
            m_star: r.m_star,
            optimal: r.status == SearchStatus::Optimal,
            nodes_explored: r.nodes_explored,
            sparsest_witness_weight: r.sparsest_witness_weight,
            witness: Subspace(r.witness),
            forbidden: WeightSet(r.forbidden),
        }
    }
}

#[pymethods]
impl SearchResult {
    fn __repr__(&self) -> String {
        format!("SearchResult(n={}, k={}, m_star={}, optimal={})", self.n, self.k, self.m_star, self.optimal)
    }
}

/// Separating matrix for two disjoint symmetric classes.
#[pyclass(name = "Classifier", module = "lbc", frozen)]
struct Classifier(CoreClassifier);

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Class1 => "class1",
        Verdict::Class2 => "class2",
        Verdict::NeitherClass => "neither",
        Verdict::Unreachable => "unreachable",
    }
}

#[pymethods]
impl Classifier {
    #[new]
    #[pyo3(signature = (class1, class2, strategy = "exact", workers = 1))]
    fn new(py: Python<'_>, class1: &WeightSet, class2: &WeightSet, strategy: &str, workers: usize) -> PyResult<Self> {
        let strategy: Strategy = strategy.parse().map_err(err)?;
        let pair = ClassPair::new(SymmetricClass::new(class1.0), SymmetricClass::new(class2.0)).map_err(err)?;
        let cfg = config(workers, None);
        py.detach(|| build_classifier(&pair, strategy, &cfg)).map(Classifier).map_err(err)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn matrix(&self) -> Vec<String> {
        self.0.matrix.rows().iter().map(|r| r.to_string()).collect()
    }

    fn kernel(&self) -> Subspace {
        Subspace(self.0.kernel().clone())
    }

    fn validate(&self) -> PyResult<bool> {
        self.0.validate(CAP).map_err(err)
    }

    fn measure(&self, x: &str) -> PyResult<String> {
        self.0.measure(&bits(x)?).map(|y| y.to_string()).map_err(err)
    }

    /// Verdict for a measurement `y`.
    fn decode(&self, y: &str) -> PyResult<&'static str> {
        self.0.classify_point(&bits(y)?, CAP).map(verdict_name).map_err(err)
    }

    /// Measures `x`, then decodes.
    fn classify(&self, x: &str) -> PyResult<&'static str> {
        let y = self.0.measure(&bits(x)?).map_err(err)?;
        self.0.classify_point(&y, CAP).map(verdict_name).map_err(err)
    }
}

#[pyfunction]
#[pyo3(signature = (a, b, n, workers = 1, node_budget = None))]
fn m_star(
    py: Python<'_>,
    a: usize,
    b: usize,
    n: usize,
    workers: usize,
    node_budget: Option<u64>,
) -> PyResult<SearchResult> {
    let cfg = config(workers, node_budget);
    py.detach(|| lbc_core::m_star(a, b, n, &cfg)).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (forbidden, workers = 1, node_budget = None))]
fn max_avoiding_subspace(
    py: Python<'_>,
    forbidden: &WeightSet,
    workers: usize,
    node_budget: Option<u64>,
) -> PyResult<SearchResult> {
    let cfg = config(workers, node_budget);
    let f = forbidden.0;
    py.detach(|| lbc_core::max_avoiding_subspace(&f, f.n(), &cfg)).map(Into::into).map_err(err)
}

#[pyfunction]
fn greedy_avoiding(forbidden: &WeightSet) -> PyResult<Subspace> {
    greedy(&forbidden.0, forbidden.0.n()).map(Subspace).map_err(err)
}

/// `V + W'` for the given block length, as a dict of dimensions and the combined rows.
#[pyfunction]
fn counterexample<'py>(py: Python<'py>, n: usize, d: usize, a: usize, b: usize) -> PyResult<Bound<'py, PyDict>> {
    let parts = py.detach(|| combine_v_wprime(n, d, b, a, &SearchConfig::default())).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("dim_v", parts.dim_v)?;
    out.set_item("dim_w", parts.dim_w)?;
    out.set_item("dim_wprime", parts.dim_wprime)?;
    out.set_item("dim_combined", parts.dim_combined)?;
    out.set_item("implied_upper_bound", parts.implied_upper_bound)?;
    out.set_item("exact_wprime", parts.wprime_method == lbc_core::constructions::WprimeMethod::Exact)?;
    out.set_item("combined", Subspace(parts.combined))?;
    Ok(out)
}

#[pyfunction]
fn entropy(x: f64) -> PyResult<f64> {
    h(x).map_err(err)
}

#[pyfunction]
fn conjecture_rate(alpha: f64, beta: f64) -> PyResult<f64> {
    rate(alpha, beta).map_err(err)
}

/// `(lower, upper)` on the rank of a matrix injective on the class.
#[pyfunction]
fn lemma1_bounds(class_weights: &WeightSet) -> PyResult<(usize, usize)> {
    l1(&SymmetricClass::new(class_weights.0)).map(|r| (r.lower, r.upper)).map_err(err)
}

/// `(lower, upper)` on the rank of a matrix whose kernel misses `forbidden`.
#[pyfunction]
fn distinguishing_bounds(forbidden: &WeightSet) -> (usize, usize) {
    let r = dbounds(&forbidden.0);
    (r.lower, r.upper)
}

#[pymodule]
pub fn lbc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<WeightSet>()?;
    m.add_class::<Subspace>()?;
    m.add_class::<SearchResult>()?;
    m.add_class::<Classifier>()?;
    m.add_function(wrap_pyfunction!(m_star, m)?)?;
    m.add_function(wrap_pyfunction!(max_avoiding_subspace, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_avoiding, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_rate, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(distinguishing_bounds, m)?)?;
    Ok(())
}
