//! Python bindings for `shiftpow`.
//!
//! Sets cross the boundary as lists of ints (any iterable is accepted and
//! normalised), big integers as Python ints, and scan reports as dicts.

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use shiftpow::{
    AuditStatus, FiniteSet, GapStatus, GridConstraints, GridWitness, PowerGraph as CorePowerGraph, Prop21Verdict,
};

fn value_error(err: shiftpow::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn to_set(values: Vec<u64>) -> PyResult<FiniteSet> {
    FiniteSet::from_unsorted(values).map_err(value_error)
}

fn run<T: Send>(py: Python<'_>, workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    py.detach(|| match workers {
        Some(n) => shiftpow::with_workers(n, f),
        None => f(),
    })
}

/// Exponent `k >= 2` and nonzero shift `m` of the predicate `a*b + m = y**k`.
#[pyclass(name = "ShiftParams", frozen)]
struct ShiftParams(shiftpow::ShiftParams);

#[pymethods]
impl ShiftParams {
    #[new]
    fn new(k: u32, m: i64) -> PyResult<Self> {
        shiftpow::ShiftParams::new(k, m).map(Self).map_err(value_error)
    }

    #[getter]
    fn k(&self) -> u32 {
        self.0.k()
    }

    #[getter]
    fn m(&self) -> i64 {
        self.0.m()
    }

    fn __repr__(&self) -> String {
        format!("ShiftParams(k={}, m={})", self.0.k(), self.0.m())
    }
}

/// `(rows, cols, roots)` with `roots[i][j]` the k-th root for `rows[i]`, `cols[j]`.
type GridTuple = (Vec<u64>, Vec<u64>, Vec<Vec<BigUint>>);

fn grid_tuple(grid: GridWitness) -> GridTuple {
    (grid.rows, grid.cols, grid.witnesses)
}

/// Bipartite graph with an edge `a - b` whenever `a*b + m` is a k-th power.
#[pyclass(name = "PowerGraph", frozen)]
struct PowerGraph(CorePowerGraph);

#[pymethods]
impl PowerGraph {
    #[getter]
    fn left(&self) -> Vec<u64> {
        self.0.left().to_vec()
    }

    #[getter]
    fn right(&self) -> Vec<u64> {
        self.0.right().to_vec()
    }

    #[getter]
    fn bound(&self) -> u64 {
        self.0.bound()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn edges(&self) -> Vec<(u64, u64)> {
        self.0.graph().edges().collect()
    }

    /// Every `s` x `t` grid as `(rows, cols, roots)`.
    #[pyo3(signature = (s, t, min_col=None, rows_below_cols=false))]
    fn find_grid(
        &self,
        py: Python<'_>,
        s: usize,
        t: usize,
        min_col: Option<u64>,
        rows_below_cols: bool,
    ) -> PyResult<Vec<GridTuple>> {
        let constraints = GridConstraints {
            min_col,
            rows_below_cols,
        };
        let grids = py.detach(|| self.0.find_grid(s, t, constraints)).map_err(value_error)?;
        Ok(grids.into_iter().map(grid_tuple).collect())
    }

    /// Exact edge-bound audit with the columns as the side holding the `s`-set.
    fn kst_audit(&self, s: usize, t: usize) -> PyResult<(String, u64, KstBound)> {
        let audit = shiftpow::kst_audit(self.0.graph(), s, t).map_err(value_error)?;
        let status = match audit.status {
            AuditStatus::NotApplicable => "not_applicable",
            AuditStatus::Holds => "holds",
            AuditStatus::Violation => "violation",
        };
        Ok((status.to_string(), audit.edges, KstBound(audit.bound)))
    }

    fn __repr__(&self) -> String {
        format!(
            "PowerGraph(rows={}, cols={}, edges={}, X={})",
            self.0.left().len(),
            self.0.right().len(),
            self.0.edge_count(),
            self.0.bound()
        )
    }
}

/// Upper bound on the edges of a graph free of the forbidden grid.
#[pyclass(name = "KstBound", frozen)]
struct KstBound(shiftpow::KstBound);

#[pymethods]
impl KstBound {
    #[getter]
    fn value(&self) -> f64 {
        self.0.float_value
    }

    #[getter]
    fn degenerate(&self) -> bool {
        self.0.degenerate
    }

    /// Exact comparison of `edges` against the bound.
    fn admits(&self, edges: u64) -> bool {
        self.0.admits(edges)
    }

    fn __repr__(&self) -> String {
        let b = &self.0;
        format!(
            "KstBound(m={}, nv={}, s={}, t={}, value={})",
            b.m, b.nv, b.s, b.t, b.float_value
        )
    }
}

#[pyfunction]
fn integer_kth_root(x: BigUint, k: u32) -> PyResult<BigUint> {
    shiftpow::integer_kth_root(&x, k).map_err(value_error)
}

#[pyfunction]
fn kth_power_witness(x: BigInt, k: u32) -> Option<BigUint> {
    shiftpow::kth_power_witness(&x, k)
}

#[pyfunction]
fn shifted_power_witness(a: BigUint, b: BigUint, params: PyRef<'_, ShiftParams>) -> Option<BigUint> {
    shiftpow::shifted_power_witness(&a, &b, params.0)
}

#[pyfunction]
fn right_neighbors(a: u64, params: PyRef<'_, ShiftParams>, x: u64) -> Vec<u64> {
    shiftpow::right_neighbors(a, params.0, x)
}

#[pyfunction]
#[pyo3(signature = (left, params, x, workers=None))]
fn build_graph(
    py: Python<'_>,
    left: Vec<u64>,
    params: PyRef<'_, ShiftParams>,
    x: u64,
    workers: Option<usize>,
) -> PyResult<PowerGraph> {
    let p = params.0;
    run(py, workers, || shiftpow::build_graph(&left, p, x))
        .map(PowerGraph)
        .map_err(value_error)
}

#[pyfunction]
fn sk(k: u32) -> PyResult<u32> {
    shiftpow::sk(k).map_err(value_error)
}

/// `t_k` as a `(numerator, denominator)` pair.
#[pyfunction]
fn tk(k: u32) -> PyResult<(BigInt, BigInt)> {
    let t = shiftpow::tk(k).map_err(value_error)?;
    Ok((t.numer().clone(), t.denom().clone()))
}

#[pyfunction]
fn x0_threshold(n: BigInt, k: u32) -> PyResult<BigUint> {
    shiftpow::x0_threshold(&n, k).map_err(value_error)
}

/// Exact gap bound as a `(numerator, denominator)` pair.
#[pyfunction]
fn gap_lower_bound(a: BigUint, c: BigUint, params: PyRef<'_, ShiftParams>) -> (BigInt, BigInt) {
    let bound = shiftpow::gap_lower_bound(&a, &c, params.0);
    (bound.numer().clone(), bound.denom().clone())
}

#[pyfunction]
fn check_gap_instance(
    a: BigUint,
    b: BigUint,
    c: BigUint,
    d: BigUint,
    params: PyRef<'_, ShiftParams>,
) -> PyResult<String> {
    let verdict = shiftpow::check_gap_instance(&a, &b, &c, &d, params.0).map_err(value_error)?;
    Ok(match verdict.status {
        GapStatus::NotApplicable => "not_applicable",
        GapStatus::Holds => "holds",
        GapStatus::Violation => "violation",
    }
    .to_string())
}

#[pyfunction]
#[pyo3(signature = (params, bound, workers=None))]
fn gap_scan<'py>(
    py: Python<'py>,
    params: PyRef<'_, ShiftParams>,
    bound: u64,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params.0;
    let report = run(py, workers, || shiftpow::gap_scan(p, bound)).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("power_quadruples", report.power_quadruples)?;
    out.set_item("applicable", report.applicable)?;
    out.set_item("tightest", report.tightest)?;
    let violations: Vec<[u64; 4]> = report.violations.iter().map(|(q, _)| *q).collect();
    out.set_item("violations", violations)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (params, x, workers=None))]
fn cor22_scan<'py>(
    py: Python<'py>,
    params: PyRef<'_, ShiftParams>,
    x: u64,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params.0;
    let report = run(py, workers, || shiftpow::cor22_scan(p, x)).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("threshold", report.threshold)?;
    out.set_item("vacuous", report.vacuous)?;
    out.set_item("edges_examined", report.edges_examined)?;
    let grids: Vec<_> = report.grids.into_iter().map(grid_tuple).collect();
    out.set_item("grids", grids)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (params, x, workers=None))]
fn cor24_scan<'py>(
    py: Python<'py>,
    params: PyRef<'_, ShiftParams>,
    x: u64,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params.0;
    let report = run(py, workers, || shiftpow::cor24_scan(p, x)).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("a_range", report.a_range)?;
    out.set_item("b_range", report.b_range)?;
    out.set_item("theorem_applicable", report.theorem_applicable)?;
    out.set_item("quadruples", report.quadruples)?;
    Ok(out)
}

#[pyfunction]
fn cor25_audit<'py>(
    py: Python<'py>,
    a1: u64,
    a2: u64,
    params: PyRef<'_, ShiftParams>,
    x: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = shiftpow::cor25_audit(a1, a2, params.0, x).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("pairs", report.pairs)?;
    out.set_item("threshold", report.threshold)?;
    out.set_item("exceeds_threshold", report.exceeds_threshold)?;
    out.set_item("flagged", report.flagged)?;
    Ok(out)
}

/// `"not_applicable"`, `"holds"` or `"violation"`, with the large-element
/// count and limit when the hypotheses hold.
#[pyfunction]
fn prop21_check(a: Vec<u64>, b: Vec<u64>, params: PyRef<'_, ShiftParams>) -> PyResult<(String, Option<(usize, u32)>)> {
    let verdict = shiftpow::prop21_check(&to_set(a)?, &to_set(b)?, params.0).map_err(value_error)?;
    Ok(match verdict {
        Prop21Verdict::NotApplicable(_) => ("not_applicable".into(), None),
        Prop21Verdict::Holds { large, limit } => ("holds".into(), Some((large, limit))),
        Prop21Verdict::Violation { large, limit } => ("violation".into(), Some((large, limit))),
    })
}

#[pyfunction]
fn kst_edge_bound(m: u64, nv: u64, s: u64, t: u64) -> PyResult<KstBound> {
    shiftpow::kst_edge_bound(m, nv, s, t).map(KstBound).map_err(value_error)
}

#[pyfunction]
fn claim31_audit<'py>(
    py: Python<'py>,
    a: Vec<u64>,
    b: Vec<u64>,
    n: i64,
    k: u32,
    x: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let (a, b) = (to_set(a)?, to_set(b)?);
    let audit = py
        .detach(|| shiftpow::claim31_audit(&a, &b, n, k, x))
        .map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("qx", audit.qx)?;
    let terms = PyDict::new(py);
    for (name, value) in audit.rhs.named() {
        terms.set_item(name, value)?;
    }
    out.set_item("terms", terms)?;
    out.set_item("rhs", audit.rhs.total)?;
    out.set_item("x0", audit.x0)?;
    out.set_item("applicable", audit.applicable)?;
    out.set_item("holds", audit.holds)?;
    out.set_item("density_ratio", audit.density_ratio)?;
    Ok(out)
}

#[pyfunction]
fn product_set(a: Vec<u64>, b: Vec<u64>) -> PyResult<Vec<u64>> {
    shiftpow::product_set(&to_set(a)?, &to_set(b)?)
        .map(FiniteSet::into_vec)
        .map_err(value_error)
}

/// `(A, B)` with `A*B == S` and both of size at least two, or `None`.
#[pyfunction]
fn find_decomposition(py: Python<'_>, s: Vec<u64>) -> PyResult<Option<(Vec<u64>, Vec<u64>)>> {
    let s = to_set(s)?;
    let found = py.detach(|| shiftpow::find_decomposition(&s)).map_err(value_error)?;
    Ok(found.map(|d| (d.a.into_vec(), d.b.into_vec())))
}

#[pyfunction]
fn truncated_shifted_powers(k: u32, n: i64, x: u64) -> PyResult<Vec<u64>> {
    shiftpow::truncated_shifted_powers(k, n, x)
        .map(FiniteSet::into_vec)
        .map_err(value_error)
}

#[pyfunction]
fn rm_example(m: u64, k: u32, n: i64, x: u64) -> PyResult<Vec<u64>> {
    shiftpow::rm_example(m, k, n, x)
        .map(FiniteSet::into_vec)
        .map_err(value_error)
}

/// `(added, removed)` relative to `{x**k + n} ∩ [1, X]`.
#[pyfunction]
fn perturbation_distance(r: Vec<u64>, k: u32, n: i64, x: u64) -> PyResult<(u64, u64)> {
    let p = shiftpow::perturbation_distance(&to_set(r)?, k, n, x).map_err(value_error)?;
    Ok((p.added, p.removed))
}

#[pymodule]
#[pyo3(name = "shiftpow")]
fn shiftpow_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ShiftParams>()?;
    m.add_class::<PowerGraph>()?;
    m.add_class::<KstBound>()?;
    m.add_function(wrap_pyfunction!(integer_kth_root, m)?)?;
    m.add_function(wrap_pyfunction!(kth_power_witness, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_power_witness, m)?)?;
    m.add_function(wrap_pyfunction!(right_neighbors, m)?)?;
    m.add_function(wrap_pyfunction!(build_graph, m)?)?;
    m.add_function(wrap_pyfunction!(sk, m)?)?;
    m.add_function(wrap_pyfunction!(tk, m)?)?;
    m.add_function(wrap_pyfunction!(x0_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(gap_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_gap_instance, m)?)?;
    m.add_function(wrap_pyfunction!(gap_scan, m)?)?;
    m.add_function(wrap_pyfunction!(cor22_scan, m)?)?;
    m.add_function(wrap_pyfunction!(cor24_scan, m)?)?;
    m.add_function(wrap_pyfunction!(cor25_audit, m)?)?;
    m.add_function(wrap_pyfunction!(prop21_check, m)?)?;
    m.add_function(wrap_pyfunction!(kst_edge_bound, m)?)?;
    m.add_function(wrap_pyfunction!(claim31_audit, m)?)?;
    m.add_function(wrap_pyfunction!(product_set, m)?)?;
    m.add_function(wrap_pyfunction!(find_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_shifted_powers, m)?)?;
    m.add_function(wrap_pyfunction!(rm_example, m)?)?;
    m.add_function(wrap_pyfunction!(perturbation_distance, m)?)?;
    Ok(())
}
