use nalgebra::DMatrix;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use robust_transfer::algebra::{projector_all_zero, projector_full, projector_span, SubspaceBasis};
use robust_transfer::analysis::{
    commutator_norms, robustness_report, saturation_check, theorem1_bound, verify_transfer, AncillaState, BoundQuery,
    BoundVariant, NULL_TOL,
};
use robust_transfer::protocols::{
    build_fast_ghz, build_qudit_saturating, build_saturating, build_swap, build_symmetrized, ProtocolInstance,
};
use robust_transfer::runtime::{optimal_p, runtime_lower_bound, RuntimeQuery};
use robust_transfer::tensor::{schatten_p_norm, DenseOperator, LatticeConfig, SchattenP};
use robust_transfer::{Complex64, Error};

create_exception!(robust_transfer, CapacityError, pyo3::exceptions::PyMemoryError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Capacity { .. } => CapacityError::new_err(e.to_string()),
        Error::NotUnitary(_) | Error::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn exponent(p: f64) -> PyResult<SchattenP> {
    SchattenP::finite(p).map_err(to_py)
}

/// `"zero"`, `"full"`, or a list of computational-basis indices of the middle sites.
fn middle_subspace(spec: Option<&Bound<'_, PyAny>>, sites: usize, local_dim: usize) -> PyResult<SubspaceBasis> {
    let middle = sites.checked_sub(2).ok_or_else(|| PyValueError::new_err("need at least 2 sites"))?;
    let Some(spec) = spec else {
        return projector_all_zero(middle, local_dim).map_err(to_py);
    };
    if let Ok(name) = spec.extract::<String>() {
        return match name.as_str() {
            "zero" => projector_all_zero(middle, local_dim),
            "full" => projector_full(middle, local_dim),
            other => return Err(PyValueError::new_err(format!("unknown subspace {other:?}"))),
        }
        .map_err(to_py);
    }
    let indices: Vec<usize> = spec.extract()?;
    let full = projector_full(middle, local_dim).map_err(to_py)?;
    let vectors = indices
        .iter()
        .map(|&k| full.vectors().get(k).cloned().ok_or_else(|| PyValueError::new_err(format!("basis index {k} out of range"))))
        .collect::<PyResult<Vec<_>>>()?;
    projector_span(&vectors).map_err(to_py)
}

/// A built transfer protocol.
#[pyclass(name = "Protocol", frozen)]
struct PyProtocol {
    inner: ProtocolInstance,
}

#[pymethods]
impl PyProtocol {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn sites(&self) -> usize {
        self.inner.cfg.sites()
    }

    #[getter]
    fn local_dim(&self) -> usize {
        self.inner.cfg.local_dim()
    }

    #[getter]
    fn declared_dim(&self) -> usize {
        self.inner.declared_subspace.dim()
    }

    /// Row-major unitary as nested lists of complex numbers.
    fn unitary(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.unitary.matrix();
        (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
    }

    /// Commutator norms for each exponent; `float("inf")` is the operator norm.
    fn commutator_norms(&self, py: Python<'_>, ps: Vec<f64>) -> PyResult<Vec<f64>> {
        let ps = ps.into_iter().map(exponent).collect::<PyResult<Vec<_>>>()?;
        py.detach(|| commutator_norms(&self.inner.unitary, &self.inner.cfg, &ps)).map_err(to_py)
    }

    /// Dimension of the computed robustness subspace.
    fn robustness_dim(&self, py: Python<'_>) -> PyResult<usize> {
        py.detach(|| robustness_report(&self.inner.unitary, &self.inner.cfg, NULL_TOL))
            .map(|r| r.joint.dim())
            .map_err(to_py)
    }

    /// True when every declared basis state and their uniform mixture transfer.
    #[pyo3(signature = (tol = 1e-9))]
    fn transfers(&self, py: Python<'_>, tol: f64) -> PyResult<bool> {
        let p = &self.inner;
        py.detach(|| {
            let basis = p.declared_subspace.vectors();
            for v in basis {
                if !verify_transfer(&p.unitary, &AncillaState::Pure(v.clone()), &p.cfg, tol)?.passed {
                    return Ok(false);
                }
            }
            Ok(verify_transfer(&p.unitary, &AncillaState::uniform(basis), &p.cfg, tol)?.passed)
        })
        .map_err(to_py)
    }

    /// Rows of `{p, actual, bound, gap, saturated}` at the computed robustness dimension.
    fn saturation<'py>(&self, py: Python<'py>, ps: Vec<f64>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let ps = ps.into_iter().map(exponent).collect::<PyResult<Vec<_>>>()?;
        let report = py.detach(|| saturation_check(&self.inner, &ps)).map_err(to_py)?;
        report
            .rows
            .iter()
            .map(|row| {
                let d = PyDict::new(py);
                d.set_item("p", row.p.value())?;
                d.set_item("actual", row.actual)?;
                d.set_item("bound", row.bound)?;
                d.set_item("gap", row.gap)?;
                d.set_item("saturated", row.saturated)?;
                d.set_item("computed_dim", report.computed_dim)?;
                Ok(d)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Protocol({:?}, L={}, D={})", self.inner.name, self.sites(), self.local_dim())
    }
}

fn wrap(p: robust_transfer::Result<ProtocolInstance>) -> PyResult<PyProtocol> {
    p.map(|inner| PyProtocol { inner }).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sites, subspace = None))]
fn saturating(sites: usize, subspace: Option<&Bound<'_, PyAny>>) -> PyResult<PyProtocol> {
    let cfg = LatticeConfig::qubit_chain(sites).map_err(to_py)?;
    wrap(build_saturating(cfg, &middle_subspace(subspace, sites, 2)?))
}

#[pyfunction]
#[pyo3(signature = (sites, local_dim, subspace = None))]
fn qudit_saturating(sites: usize, local_dim: usize, subspace: Option<&Bound<'_, PyAny>>) -> PyResult<PyProtocol> {
    let cfg = LatticeConfig::chain(sites, local_dim).map_err(to_py)?;
    wrap(build_qudit_saturating(cfg, &middle_subspace(subspace, sites, local_dim)?))
}

#[pyfunction]
fn fast_ghz(sites: usize) -> PyResult<PyProtocol> {
    wrap(LatticeConfig::qubit_chain(sites).and_then(build_fast_ghz))
}

#[pyfunction]
fn symmetrized(sites: usize) -> PyResult<PyProtocol> {
    wrap(LatticeConfig::qubit_chain(sites).and_then(build_symmetrized))
}

#[pyfunction]
#[pyo3(signature = (sites, local_dim = 2))]
fn swap(sites: usize, local_dim: usize) -> PyResult<PyProtocol> {
    wrap(LatticeConfig::chain(sites, local_dim).and_then(build_swap))
}

/// Lower bound on the commutator norm for a `dim_s`-dimensional robust subspace.
#[pyfunction]
#[pyo3(signature = (sites, dim_s, p, local_dim = 2))]
fn bound(sites: usize, dim_s: f64, p: f64, local_dim: usize) -> PyResult<f64> {
    let q = BoundQuery { sites, dim_s, p: exponent(p)?, local_dim, variant: BoundVariant::for_local_dim(local_dim) };
    theorem1_bound(&q).map_err(to_py)
}

#[pyfunction(name = "optimal_p")]
fn py_optimal_p(sites: usize, k: usize) -> PyResult<f64> {
    optimal_p(sites, k).map_err(to_py)
}

/// Light-cone runtime bounds with unit constants; failed branches are `None`.
#[pyfunction]
#[pyo3(signature = (sites, k, alpha, r = None))]
fn runtime_bounds<'py>(py: Python<'py>, sites: usize, k: usize, alpha: f64, r: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let mut q = RuntimeQuery::new(sites, k, alpha);
    if let Some(r) = r {
        q.r = r;
    }
    let rb = runtime_lower_bound(&q).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("p_star", rb.p_star)?;
    d.set_item("pnorm", rb.pnorm.as_ref().ok().map(|t| t.time))?;
    d.set_item("opnorm", rb.opnorm.as_ref().ok().map(|t| t.time))?;
    d.set_item("frobenius", rb.frobenius.as_ref().ok().map(|t| t.time))?;
    d.set_item("best", rb.best())?;
    Ok(d)
}

/// Renormalized Schatten norm of a square matrix given as nested lists.
#[pyfunction]
fn schatten_norm(rows: Vec<Vec<Complex64>>, p: f64) -> PyResult<f64> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let m = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
    let op = DenseOperator::new(m).map_err(to_py)?;
    Ok(schatten_p_norm(&op, exponent(p)?))
}

#[pyfunction(name = "max_dim")]
fn py_max_dim() -> usize {
    robust_transfer::tensor::max_dim()
}

#[pyfunction(name = "set_max_dim")]
fn py_set_max_dim(cap: usize) {
    robust_transfer::tensor::set_max_dim(cap);
}

#[pymodule(name = "robust_transfer")]
fn robust_transfer_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_class::<PyProtocol>()?;
    m.add_function(wrap_pyfunction!(saturating, m)?)?;
    m.add_function(wrap_pyfunction!(qudit_saturating, m)?)?;
    m.add_function(wrap_pyfunction!(fast_ghz, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrized, m)?)?;
    m.add_function(wrap_pyfunction!(swap, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_optimal_p, m)?)?;
    m.add_function(wrap_pyfunction!(runtime_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(schatten_norm, m)?)?;
    m.add_function(wrap_pyfunction!(py_max_dim, m)?)?;
    m.add_function(wrap_pyfunction!(py_set_max_dim, m)?)?;
    Ok(())
}
