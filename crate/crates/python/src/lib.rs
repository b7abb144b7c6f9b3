//! Python bindings: `import pyinvbar`.

use std::collections::BTreeMap;

use invbar::bijections::{self, CycleForm};
use invbar::gfseries::{self, parse_rational, Rational, TotalGf};
use invbar::invseq::{self, InversionSequence, Permutation};
use invbar::mpoly::{Assignment, MPoly, Var};
use invbar::recur::{self, DistTable};
use invbar::verify::{self, GfPoint, Suite, VerifyOptions};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_var(name: &str) -> PyResult<Var> {
    Var::from_name(name).ok_or_else(|| value_err(format!("unknown variable {name:?}")))
}

/// Accepts an int, a `fractions.Fraction` or a string like "-3/4".
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    parse_rational(text.trim()).ok_or_else(|| value_err(format!("not a rational number: {text}")))
}

fn to_fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((r.numer().clone(), r.denom().clone()))
}

type Exps = (i32, i32, i32, i32, i32);

fn to_seq(v: Vec<i64>) -> PyResult<InversionSequence> {
    InversionSequence::validate(&v).map_err(value_err)
}

/// Multivariate Laurent polynomial in y, p, q, r, t with integer coefficients.
#[pyclass(name = "Poly", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPoly(MPoly);

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (text = "0"))]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyPoly).map_err(value_err)
    }

    #[staticmethod]
    fn var(name: &str) -> PyResult<Self> {
        Ok(PyPoly(MPoly::var(parse_var(name)?)))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }

    fn __add__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 * &other.0)
    }

    fn __neg__(&self) -> PyPoly {
        PyPoly(-&self.0)
    }

    fn __pow__(&self, k: u32, _modulo: Option<u32>) -> PyPoly {
        PyPoly(self.0.pow(k))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// List of `(coeff, (y, p, q, r, t))` in canonical order.
    fn terms(&self) -> Vec<(BigInt, Exps)> {
        self.0
            .terms()
            .map(|(e, c)| (c.clone(), (e[0], e[1], e[2], e[3], e[4])))
            .collect()
    }

    fn substitute(&self, var: &str, repl: &PyPoly) -> PyResult<PyPoly> {
        self.0
            .substitute(parse_var(var)?, &repl.0)
            .map(PyPoly)
            .map_err(value_err)
    }

    /// Exact value at a point given as `{"p": Fraction(1, 2), ...}`.
    fn eval<'py>(&self, py: Python<'py>, point: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyAny>> {
        let mut at = Assignment::new();
        for (k, v) in point.iter() {
            at.insert(parse_var(&k.extract::<String>()?)?, to_rational(&v)?);
        }
        let r = self.0.eval_rational(&at).map_err(value_err)?;
        to_fraction(py, &r)
    }

    fn coeff_sum(&self) -> BigInt {
        self.0.coeff_sum()
    }

    fn weighted_coeff_sum(&self, var: &str) -> PyResult<BigInt> {
        Ok(self.0.weighted_coeff_sum(parse_var(var)?))
    }
}

/// Triangular table of polynomials indexed by `(n, i)`, `1 ≤ i ≤ n`.
#[pyclass(name = "DistTable", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyDistTable(DistTable);

impl PyDistTable {
    fn check(&self, m: usize, i: usize) -> PyResult<()> {
        if m == 0 || m > self.0.n() || i == 0 || i > m {
            return Err(value_err(format!("cell ({m},{i}) is outside the table")));
        }
        Ok(())
    }
}

#[pymethods]
impl PyDistTable {
    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn get(&self, m: usize, i: usize) -> PyResult<PyPoly> {
        self.check(m, i)?;
        Ok(PyPoly(self.0.get(m, i).clone()))
    }

    fn row(&self, m: usize) -> PyResult<Vec<PyPoly>> {
        self.check(m, 1)?;
        Ok(self.0.row(m).iter().cloned().map(PyPoly).collect())
    }

    /// `Σ_i entry(m, i) · y^i`.
    fn row_poly(&self, m: usize) -> PyResult<PyPoly> {
        self.check(m, 1)?;
        Ok(PyPoly(self.0.row_poly(m)))
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        DistTable::from_csv(text).map(PyDistTable).map_err(value_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        DistTable::from_json(text).map(PyDistTable).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("DistTable(n={})", self.0.n())
    }
}

/// Checks `1 ≤ seq[i] ≤ i + 1` and returns the sequence unchanged.
#[pyfunction]
fn validate(seq: Vec<i64>) -> PyResult<Vec<u32>> {
    Ok(to_seq(seq)?.into_vec())
}

#[pyfunction]
fn stats<'py>(py: Python<'py>, seq: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
    let st = invseq::stats(&to_seq(seq)?);
    let d = PyDict::new(py);
    d.set_item("area", st.area)?;
    d.set_item("sper", st.sper)?;
    d.set_item("levels", st.levels)?;
    d.set_item("descents", st.descents)?;
    d.set_item("ascents", st.ascents)?;
    Ok(d)
}

/// All inversion sequences of length `n` (at most 10) in lexicographic order.
#[pyfunction]
fn enumerate(n: usize) -> PyResult<Vec<Vec<u32>>> {
    if !(1..=10).contains(&n) {
        return Err(value_err("n must be in 1..=10"));
    }
    Ok(invseq::enumerate(n).map(InversionSequence::into_vec).collect())
}

/// `kind` is "area-sper" or "lda"; `engine` is "brute", "lemma" or "threeterm".
#[pyfunction]
#[pyo3(signature = (kind, n, engine = "lemma"))]
fn dist(py: Python<'_>, kind: &str, n: usize, engine: &str) -> PyResult<PyDistTable> {
    if n == 0 {
        return Err(value_err("n must be at least 1"));
    }
    if engine == "brute" && n > 10 {
        return Err(value_err("the brute engine is limited to n ≤ 10"));
    }
    let f: fn(usize) -> DistTable = match (kind, engine) {
        ("area-sper", "brute") => invseq::brute_dist_area_sper,
        ("area-sper", "lemma") => recur::a_table_lemma,
        ("area-sper", "threeterm") => recur::a_table_threeterm,
        ("lda", "brute") => invseq::brute_dist_lda,
        ("lda", "lemma") => recur::b_table_lemma,
        ("lda", "threeterm") => recur::b_table_threeterm,
        _ => return Err(value_err(format!("unknown table {kind:?} or engine {engine:?}"))),
    };
    Ok(PyDistTable(py.detach(|| f(n))))
}

#[pyfunction]
fn totals(n: usize) -> BTreeMap<&'static str, BigInt> {
    BTreeMap::from([
        ("area", recur::total_area(n)),
        ("sper", recur::total_sper(n)),
        ("levels", recur::total_levels(n)),
        ("descents", recur::total_descents(n)),
        ("ascents", recur::total_ascents(n)),
    ])
}

/// Applies a named map to its text input. Returns `None` outside the domain.
#[pyfunction]
fn apply_map(name: &str, input: &str) -> PyResult<Option<String>> {
    let seq = || input.parse::<InversionSequence>().map_err(value_err);
    let perm = || input.parse::<Permutation>().map_err(value_err);
    let out = match name {
        "f" => Some(bijections::f_levels_to_cycles(&seq()?).to_string()),
        "f-inverse" => {
            let c: CycleForm = input.parse().map_err(value_err)?;
            Some(bijections::f_inverse(&c).to_string())
        }
        "g" => Some(bijections::g_ascents(&seq()?).to_string()),
        "g-inverse" => Some(bijections::g_inverse(&perm()?).to_string()),
        "complement" => Some(bijections::complement(&seq()?).to_string()),
        "area-flip" => Some(bijections::area_flip(&seq()?).map_err(value_err)?.to_string()),
        "sper-involution" => bijections::sper_involution(&seq()?).map(|s| s.to_string()),
        "levels-involution" => bijections::levels_involution(&seq()?).map(|s| s.to_string()),
        "to-perm" => Some(invseq::to_permutation(&seq()?).to_string()),
        "from-perm" => Some(invseq::from_permutation(&perm()?).to_string()),
        "cycles" => Some(CycleForm::from_permutation(&perm()?).to_string()),
        _ => return Err(value_err(format!("unknown map {name:?}"))),
    };
    Ok(out)
}

/// Coefficients of `x^0..x^order` as `Fraction`s. `name` is one of
/// "A", "A1", "area-gf", "tote1", "tote2", "tote3".
#[pyfunction]
#[pyo3(signature = (name, order = 8, p = None, y = None))]
fn series<'py>(
    py: Python<'py>,
    name: &str,
    order: usize,
    p: Option<Bound<'py, PyAny>>,
    y: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyList>> {
    let need = |v: &Option<Bound<'py, PyAny>>, label: &str| -> PyResult<Rational> {
        match v {
            Some(v) => to_rational(v),
            None => Err(value_err(format!("{label} is required"))),
        }
    };
    let s = match name {
        "A" => gfseries::expand_a_closed(&need(&p, "p")?, &need(&y, "y")?, order),
        "A1" => gfseries::expand_a1_closed(&need(&p, "p")?, order),
        "area-gf" => gfseries::total_gf_closed(TotalGf::Area, &need(&y, "y")?, order),
        "tote1" => gfseries::total_gf_closed(TotalGf::Levels, &need(&y, "y")?, order),
        "tote2" => gfseries::total_gf_closed(TotalGf::Descents, &need(&y, "y")?, order),
        "tote3" => gfseries::total_gf_closed(TotalGf::Ascents, &need(&y, "y")?, order),
        _ => return Err(value_err(format!("unknown series {name:?}"))),
    }
    .map_err(value_err)?;
    let items = s
        .coeffs()
        .iter()
        .map(|c| to_fraction(py, c))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Runs a verification suite and returns the report as a list of dicts.
#[pyfunction]
#[pyo3(signature = (suite = "all", nmax = 7, order = 8, seed = verify::DEFAULT_SEED, corrupt = false))]
fn run_verify<'py>(
    py: Python<'py>,
    suite: &str,
    nmax: usize,
    order: usize,
    seed: u64,
    corrupt: bool,
) -> PyResult<Bound<'py, PyList>> {
    let suite = match suite {
        "all" => Suite::All,
        "recurrences" => Suite::Recurrences,
        "totals" => Suite::Totals,
        "signbalance" => Suite::SignBalance,
        "bijections" => Suite::Bijections,
        "gf" => Suite::Gf,
        _ => return Err(value_err(format!("unknown suite {suite:?}"))),
    };
    if !(3..=9).contains(&nmax) || !(1..=12).contains(&order) {
        return Err(value_err("nmax must be in 3..=9 and order in 1..=12"));
    }
    let opts = VerifyOptions {
        suite,
        nmax,
        order,
        seed,
        point: GfPoint::default(),
        corrupt,
    };
    let records = py.detach(|| verify::run(&opts));
    let out = PyList::empty(py);
    for r in records {
        let d = PyDict::new(py);
        d.set_item("formula_id", &r.formula_id)?;
        d.set_item("n_range", (r.n_range[0], r.n_range[1]))?;
        d.set_item("parameter_point", r.parameter_point.clone())?;
        d.set_item("status", if r.passed() { "pass" } else { "fail" })?;
        d.set_item("first_mismatch", r.first_mismatch.clone())?;
        out.append(d)?;
    }
    Ok(out)
}

#[pymodule]
pub fn pyinvbar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyDistTable>()?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(stats, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(dist, m)?)?;
    m.add_function(wrap_pyfunction!(totals, m)?)?;
    m.add_function(wrap_pyfunction!(apply_map, m)?)?;
    m.add_function(wrap_pyfunction!(series, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
