//! Python bindings. Reports come back as plain dicts and lists with the
//! same layout as the command-line JSON; rationals are `"p/q"` strings.

use fracframes::algebra::rational::parse_rational;
use fracframes::dynamics::TransitionGraph;
use fracframes::families::{check_three_digit_family, check_two_digit_family};
use fracframes::io::{candidate_to_json, parse_candidate_value, weight_from_json};
use fracframes::{report, DilationSystem, Error, FrameCandidate, RatVec, DEFAULT_ATOM_BUDGET};
use num_complex::Complex64;
use pyo3::exceptions::{PyNotImplementedError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        Error::Resource { .. } | Error::Overflow(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn lib<T>(r: fracframes::Result<T>) -> PyResult<T> {
    r.map_err(to_py_err)
}

/// Python object to JSON via the standard `json` module.
fn to_value(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn parse_point(w: &[String]) -> PyResult<RatVec> {
    w.iter().map(|s| lib(parse_rational(s))).collect()
}

/// A frame candidate `(R, B, L, α)`.
#[pyclass(name = "Candidate", module = "pyfracframes")]
struct Candidate {
    inner: FrameCandidate,
    witness: Option<RatVec>,
}

#[pymethods]
impl Candidate {
    /// `R` is an integer or a square integer matrix; `digits` and `labels`
    /// are integer lists (one dimension) or lists of integer vectors.
    /// Weights take the JSON forms: a number, `{"re", "im"}`,
    /// `{"sqrt_recip": n}`, `{"sqrt": "p/q", "phase": "p/q"}` or
    /// `{"padded": True}`.
    #[new]
    #[pyo3(signature = (r, digits, labels, alpha, witness=None))]
    fn new(
        r: &Bound<'_, PyAny>,
        digits: &Bound<'_, PyAny>,
        labels: &Bound<'_, PyAny>,
        alpha: &Bound<'_, PyAny>,
        witness: Option<&Bound<'_, PyAny>>,
    ) -> PyResult<Self> {
        let mut v = json!({
            "ifs": { "R": to_value(r)?, "B": to_value(digits)? },
            "L": to_value(labels)?,
            "alpha": to_value(alpha)?,
        });
        if let Some(w) = witness {
            v["witness"] = to_value(w)?;
        }
        let file = lib(parse_candidate_value(&v))?;
        Ok(Candidate { inner: file.candidate, witness: file.witness })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = lib(fracframes::parse_candidate(text))?;
        Ok(Candidate { inner: file.candidate, witness: file.witness })
    }

    fn to_json(&self) -> String {
        candidate_to_json(&self.inner, self.witness.as_deref()).to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.system().dim()
    }

    #[getter]
    fn n_digits(&self) -> usize {
        self.inner.system().n_digits()
    }

    #[getter]
    fn labels(&self) -> Vec<Vec<i64>> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn witness(&self) -> Option<Vec<String>> {
        self.witness.as_ref().map(|w| w.iter().map(fracframes::algebra::rational::fmt_short).collect())
    }

    /// `T` with rows indexed by labels and columns by digits.
    fn t_matrix(&self) -> Vec<Vec<Complex64>> {
        let t = self.inner.t_matrix();
        (0..t.nrows()).map(|i| (0..t.ncols()).map(|j| t[(i, j)]).collect()).collect()
    }

    /// `(ok, max_deviation)` for `T*T = I`.
    #[pyo3(signature = (tol=1e-10))]
    fn check_isometry(&self, tol: f64) -> PyResult<(bool, f64)> {
        let r = lib(self.inner.check_isometry(tol))?;
        Ok((r.ok, r.max_deviation))
    }

    /// `(ok, max_deviation, exact)` for Parseval on the one-step measure.
    #[pyo3(signature = (tol=1e-10))]
    fn parseval_on_delta(&self, tol: f64) -> PyResult<(bool, f64, Option<bool>)> {
        let r = lib(self.inner.check_parseval_on_delta(tol))?;
        Ok((r.ok, r.max_deviation, r.exact))
    }

    fn transfer_one_deviation(&self, t: Vec<f64>) -> f64 {
        self.inner.transfer_one_deviation(&t)
    }

    fn exponential_sum_condition<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &report::exponential_sum(&lib(self.inner.exponential_sum_condition())?))
    }

    fn congruence_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &report::congruence(&self.inner.congruence_report()))
    }

    /// Closed-form conditions (i)–(v) for two or three digits in one
    /// dimension.
    fn family<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let v = match self.inner.system().n_digits() {
            2 => report::family("two_digit", &lib(check_two_digit_family(&self.inner))?),
            3 => report::family("three_digit", &lib(check_three_digit_family(&self.inner))?),
            n => return Err(PyNotImplementedError::new_err(format!("no closed form for {n} digits"))),
        };
        to_py(py, &v)
    }

    /// Parseval/Incomplete verdict with invariant sets and extreme cycles.
    fn verdict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let v = lib(fracframes::th2_verdict(&self.inner))?;
        let labels: Vec<i64> = self.inner.active().map(|i| self.inner.labels()[i][0]).collect();
        let cycles = lib(fracframes::extreme_cycles(self.inner.system(), &labels))?;
        to_py(py, &report::verdict(&v, &cycles))
    }

    fn transition_graph_dot(&self) -> PyResult<String> {
        Ok(lib(TransitionGraph::build(&self.inner))?.to_dot())
    }

    #[pyo3(signature = (k, budget=None))]
    fn level_k_parseval<'py>(&self, py: Python<'py>, k: usize, budget: Option<u128>) -> PyResult<Bound<'py, PyAny>> {
        let r = lib(fracframes::level_k_parseval(&self.inner, k, budget.unwrap_or(DEFAULT_ATOM_BUDGET)))?;
        to_py(py, &report::level(&r))
    }

    #[pyo3(signature = (t, max_len, budget=None))]
    fn bessel_partial_sum(&self, t: Vec<f64>, max_len: usize, budget: Option<u128>) -> PyResult<Vec<f64>> {
        lib(fracframes::bessel_partial_sum(&self.inner, &t, max_len, budget.unwrap_or(DEFAULT_ATOM_BUDGET)))
    }

    /// Exact certificate that `e_w` is orthogonal to every frame vector with
    /// a word of length at most `max_len`. `w` defaults to the declared
    /// witness.
    #[pyo3(signature = (w=None, max_len=4, depth=8, budget=None))]
    fn orthogonality_witness(
        &self,
        w: Option<Vec<String>>,
        max_len: usize,
        depth: usize,
        budget: Option<u128>,
    ) -> PyResult<bool> {
        let point = match w {
            Some(w) => parse_point(&w)?,
            None => self.witness.clone().ok_or_else(|| PyValueError::new_err("no witness given or declared"))?,
        };
        lib(fracframes::orthogonality_witness(
            &self.inner,
            &point,
            max_len,
            depth,
            budget.unwrap_or(DEFAULT_ATOM_BUDGET),
        ))
    }

    #[pyo3(signature = (n, max_len=6, budget=None))]
    fn representations<'py>(
        &self,
        py: Python<'py>,
        n: i64,
        max_len: usize,
        budget: Option<u128>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r =
            lib(fracframes::enumerate_representations(&self.inner, n, max_len, budget.unwrap_or(DEFAULT_ATOM_BUDGET)))?;
        to_py(py, &report::representations(&r))
    }

    #[pyo3(signature = (max_len, budget=None))]
    fn frequency_words<'py>(
        &self,
        py: Python<'py>,
        max_len: usize,
        budget: Option<u128>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let words = lib(fracframes::frequency_words(&self.inner, max_len, budget.unwrap_or(DEFAULT_ATOM_BUDGET)))?;
        to_py(py, &Value::Array(words.iter().map(report::frequency_atom).collect()))
    }

    /// Atoms of the level-`k` measure as `(point, mass)` string pairs.
    #[pyo3(signature = (k, budget=None))]
    fn level_measure(&self, k: usize, budget: Option<u128>) -> PyResult<Vec<(Vec<String>, String)>> {
        let m = lib(self.inner.system().level_measure(k, budget.unwrap_or(DEFAULT_ATOM_BUDGET)))?;
        let fmt = fracframes::algebra::rational::fmt_short;
        Ok(m.atoms().iter().map(|a| (a.point.iter().map(fmt).collect(), fmt(&a.mass))).collect())
    }

    /// Dilation report, a-matrix and padded labels.
    #[pyo3(signature = (aux_n=None))]
    fn dilation<'py>(&self, py: Python<'py>, aux_n: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let d = lib(DilationSystem::build(&self.inner, aux_n))?;
        let a = lib(d.build_a_matrix())?;
        let v = json!({
            "report": report::dilation(&d.report(&a)),
            "a_matrix": a.to_json(),
            "padded_labels": d.padded_labels(),
        });
        to_py(py, &v)
    }

    fn __repr__(&self) -> String {
        format!("Candidate({})", self.to_json())
    }
}

/// `L = {0} ∪ (1 + N L_1) ∪ … ∪ ((N−1) + N L_{N−1})` over `R = N`,
/// `B = {0,…,N−1}`.
#[pyfunction]
fn integer_base_family(n: i64, subsets: Vec<Vec<i64>>, weights: &Bound<'_, PyAny>) -> PyResult<Candidate> {
    let weights = match to_value(weights)? {
        Value::Array(rows) => rows
            .iter()
            .map(|row| match row {
                Value::Array(ws) => ws.iter().map(|w| lib(weight_from_json(w))).collect::<PyResult<Vec<_>>>(),
                _ => Err(PyValueError::new_err("weights must be a list of lists")),
            })
            .collect::<PyResult<Vec<_>>>()?,
        _ => return Err(PyValueError::new_err("weights must be a list of lists")),
    };
    let inner = lib(fracframes::make_integer_base_family(n, &subsets, &weights))?;
    Ok(Candidate { inner, witness: None })
}

#[pymodule]
fn pyfracframes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Candidate>()?;
    m.add_function(wrap_pyfunction!(integer_base_family, m)?)?;
    Ok(())
}
