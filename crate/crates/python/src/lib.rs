use std::path::PathBuf;

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hypersmt::algebra::{parse_rational, HomogeneousPolynomial};
use hypersmt::error::Error;
use hypersmt::filtration::{compute_b, filtration_dims as core_filtration_dims, filtration_quotient_violations, FiltrationParams};
use hypersmt::nevanlinna::{characteristic_t, fmt_residual, zeros_in_disk as core_zeros_in_disk, EntireCurve, ExpPoly, QuadratureConfig};
use hypersmt::scenario::ScenarioFile;
use hypersmt::selftest;
use hypersmt::smt::{choose_u_projective as core_choose_u, smt_margins as core_smt_margins, truncation_level_projective, truncation_level_subgeneral, SmtVariant};
use hypersmt::variety::{check_position, construct_replacement, Emptiness, VarietyDescriptor, DEFAULT_MAX_RETRIES};
use hypersmt::weights::{chow_weight as core_chow_weight, hilbert_chow_margin, hilbert_weight as core_hilbert_weight, BracketPolynomial, WeightVector};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Syntax { .. }
        | Error::UnknownVariable { .. }
        | Error::NonHomogeneous { .. }
        | Error::VariableCount { .. }
        | Error::DegreeMismatch(_)
        | Error::InvalidInput(_)
        | Error::Precondition(_)
        | Error::Unsupported(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn polys(src: &[String], n_vars: usize) -> PyResult<Vec<HomogeneousPolynomial>> {
    src.iter().map(|s| HomogeneousPolynomial::parse(s, n_vars).map_err(py_err)).collect()
}

fn fraction<'py>(py: Python<'py>, q: &num_rational::BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

/// A projective variety given by homogeneous generators in `x0..xn`.
#[pyclass(frozen)]
struct Variety {
    inner: VarietyDescriptor,
}

#[pymethods]
impl Variety {
    #[new]
    #[pyo3(signature = (n, generators=Vec::new(), degree_cap=None))]
    fn new(n: usize, generators: Vec<String>, degree_cap: Option<u32>) -> PyResult<Self> {
        let v = VarietyDescriptor::new(n, polys(&generators, n + 1)?).map_err(py_err)?;
        Ok(Self { inner: if let Some(c) = degree_cap { v.with_degree_cap(c) } else { v } })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn hilbert_function(&self, m: u32) -> u64 {
        self.inner.hilbert_function(m)
    }

    fn dimension(&self) -> PyResult<u32> {
        self.inner.dimension().map_err(py_err)
    }

    fn degree(&self) -> PyResult<u64> {
        self.inner.degree().map_err(py_err)
    }

    /// `m*` when the variety is certified empty, else `None`.
    fn certify_empty(&self) -> Option<u32> {
        match self.inner.certify_empty() {
            Emptiness::CertifiedEmpty { m_star } => Some(m_star),
            _ => None,
        }
    }

    /// Returns `(verdict, witness)` with a 1-based witness subset when position fails.
    fn check_position(&self, hypersurfaces: Vec<String>, level: usize) -> PyResult<(String, Option<Vec<usize>>)> {
        let q = polys(&hypersurfaces, self.inner.n_vars())?;
        let rep = check_position(&self.inner, &q, level).map_err(py_err)?;
        Ok((format!("{:?}", rep.verdict), rep.witness.map(|w| w.iter().map(|i| i + 1).collect())))
    }

    /// Replacement hypersurfaces as strings with their dimension chain.
    #[pyo3(signature = (hypersurfaces, seed=0))]
    fn construct_replacement(&self, hypersurfaces: Vec<String>, seed: u64) -> PyResult<(Vec<String>, Vec<String>)> {
        let q = polys(&hypersurfaces, self.inner.n_vars())?;
        let sys = construct_replacement(&self.inner, &q, seed, DEFAULT_MAX_RETRIES).map_err(py_err)?;
        Ok((
            sys.polys.iter().map(ToString::to_string).collect(),
            sys.chain_dims.iter().map(ToString::to_string).collect(),
        ))
    }

    fn hilbert_weight(&self, m: u32, c: Vec<u64>) -> PyResult<u64> {
        Ok(core_hilbert_weight(&self.inner, m, &WeightVector::new(c)).map_err(py_err)?.s)
    }

    #[pyo3(signature = (chow_form, m, c, seed=0))]
    fn hilbert_chow_margin<'py>(&self, py: Python<'py>, chow_form: &str, m: u32, c: Vec<u64>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let f = BracketPolynomial::parse(chow_form, self.inner.n()).map_err(py_err)?;
        let margin = hilbert_chow_margin(&self.inner, &f, m, &WeightVector::new(c), seed).map_err(py_err)?;
        fraction(py, &margin)
    }

    fn __repr__(&self) -> String {
        let g: Vec<String> = self.inner.generators().iter().map(ToString::to_string).collect();
        format!("Variety(n={}, generators={:?})", self.inner.n(), g)
    }
}

/// An entire curve `(f_0, .., f_n)` whose components are sums `p(z) exp(q(z))`.
#[pyclass(frozen)]
struct Curve {
    inner: EntireCurve,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(components: Vec<String>) -> PyResult<Self> {
        let c: Vec<&str> = components.iter().map(String::as_str).collect();
        Ok(Self { inner: EntireCurve::parse(&c).map_err(py_err)? })
    }

    #[pyo3(signature = (r, nodes=65536))]
    fn characteristic(&self, r: f64, nodes: usize) -> PyResult<f64> {
        let cfg = QuadratureConfig { nodes, ..QuadratureConfig::default() };
        characteristic_t(&self.inner, r, &cfg).map_err(py_err)
    }

    /// Rows `(r, T, m, N, residual)` of the first-main-theorem residual for `q`.
    #[pyo3(signature = (q, r_grid, nodes=65536))]
    fn fmt_residual(&self, q: &str, r_grid: Vec<f64>, nodes: usize) -> PyResult<Vec<(f64, f64, f64, f64, f64)>> {
        let cfg = QuadratureConfig { nodes, ..QuadratureConfig::default() };
        let q = HomogeneousPolynomial::parse(q, self.inner.n() + 1).map_err(py_err)?;
        let rep = fmt_residual(&self.inner, &q, &r_grid, &cfg).map_err(py_err)?;
        Ok(rep.rows.iter().map(|r| (r.r, r.t, r.m, r.n, r.residual)).collect())
    }

    fn lies_in(&self, v: &Variety) -> PyResult<bool> {
        self.inner.lies_in(&v.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.inner)
    }
}

/// Zeros of an exponential polynomial in `|z| <= r` as `(location, multiplicity)`.
#[pyfunction]
fn zeros_in_disk(expr: &str, r: f64) -> PyResult<Vec<(Complex64, u32)>> {
    let g = ExpPoly::parse(expr).map_err(py_err)?;
    let z = core_zeros_in_disk(&g, r, &QuadratureConfig::default()).map_err(py_err)?;
    Ok(z.entries.iter().map(|e| (e.location, e.multiplicity)).collect())
}

#[pyfunction]
#[pyo3(signature = (chow_form, n, c, seed=0))]
fn chow_weight(chow_form: &str, n: usize, c: Vec<u64>, seed: u64) -> PyResult<u64> {
    let f = BracketPolynomial::parse(chow_form, n).map_err(py_err)?;
    core_chow_weight(&f, &WeightVector::new(c), seed).map_err(py_err)
}

/// Filtration table for forms `P_1..P_n` in `x0..xn`.
#[pyfunction]
fn filtration_dims<'py>(py: Python<'py>, n: usize, u: u32, forms: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
    let f: Vec<&str> = forms.iter().map(String::as_str).collect();
    let p = FiltrationParams::parse(n, u, &f).map_err(py_err)?;
    let t = core_filtration_dims(&p).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("indices", t.indices.clone())?;
    d.set_item("dims", t.dims.clone())?;
    d.set_item("quotients", t.m.clone())?;
    d.set_item("violations", filtration_quotient_violations(&t))?;
    d.set_item("b_bound_holds", compute_b(&t).all_nonnegative())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (deg_v, k, level, d, q, eps, proof_version=false))]
fn truncation_subgeneral(deg_v: u64, k: u64, level: u64, d: u64, q: u64, eps: &str, proof_version: bool) -> PyResult<BigInt> {
    let eps = parse_rational(eps).map_err(py_err)?;
    let r = truncation_level_subgeneral(deg_v, k, level, d, q, &eps, proof_version).map_err(py_err)?;
    Ok(r.m0)
}

#[pyfunction]
fn truncation_projective(n: u64, level: u64, d: u64, eps: &str) -> PyResult<BigInt> {
    let eps = parse_rational(eps).map_err(py_err)?;
    Ok(truncation_level_projective(n, level, d, &eps).map_err(py_err)?.m0)
}

#[pyfunction]
fn choose_u_projective<'py>(py: Python<'py>, n: u64, d: u64, p: u64, eps: &str) -> PyResult<(BigInt, Bound<'py, PyAny>)> {
    let eps = parse_rational(eps).map_err(py_err)?;
    let (u, ratio) = core_choose_u(n, d, p, &eps).map_err(py_err)?;
    Ok((u, fraction(py, &ratio)?))
}

/// Margins `(r, T, N_truncated_sum, margin)` for a scenario file.
#[pyfunction]
#[pyo3(signature = (scenario, theorem="1.1", proof_version=false))]
fn smt_margins(scenario: PathBuf, theorem: &str, proof_version: bool) -> PyResult<(u64, Vec<(f64, f64, f64, f64)>)> {
    let file = ScenarioFile::load(&scenario).map_err(py_err)?;
    let variant = SmtVariant::parse(theorem).map_err(py_err)?;
    let s = file.smt_scenario().map_err(py_err)?;
    let rep = core_smt_margins(&s, variant, file.params.truncation, proof_version, &file.quadrature()).map_err(py_err)?;
    Ok((
        rep.truncation,
        rep.rows.iter().map(|r| (r.r, r.t, r.n_truncated_sum, r.margin)).collect(),
    ))
}

/// Run one acceptance criterion; returns `(passed, detail)`.
#[pyfunction]
#[pyo3(signature = (id, seed=0))]
fn run_criterion(id: u8, seed: u64) -> PyResult<(bool, String)> {
    if !(1..=11).contains(&id) {
        return Err(PyValueError::new_err("criterion id must be in 1..=11"));
    }
    let o = selftest::run_criterion(id, seed);
    Ok((o.passed, o.detail))
}

#[pymodule]
fn pyhypersmt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", hypersmt::VERSION)?;
    m.add_class::<Variety>()?;
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(zeros_in_disk, m)?)?;
    m.add_function(wrap_pyfunction!(chow_weight, m)?)?;
    m.add_function(wrap_pyfunction!(filtration_dims, m)?)?;
    m.add_function(wrap_pyfunction!(truncation_subgeneral, m)?)?;
    m.add_function(wrap_pyfunction!(truncation_projective, m)?)?;
    m.add_function(wrap_pyfunction!(choose_u_projective, m)?)?;
    m.add_function(wrap_pyfunction!(smt_margins, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    Ok(())
}
