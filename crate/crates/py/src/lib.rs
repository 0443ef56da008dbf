//! Python bindings: state construction, phase-space evaluation, the
//! faithfulness classification, and channel reconstruction.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use faithcheck::faithfulness::{
    ab_coefficients, check_operator_of, chi, classify, gaussian_faithful, DEFAULT_RANK_TOL,
};
use faithcheck::states::{moments_of, DensityOperator};
use faithcheck::tomography::{apply_channel_first, choi_of, reconstruct, Channel};
use faithcheck::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter { .. } | Error::DimensionMismatch(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Two-mode density matrix in the truncated Fock basis.
#[pyclass]
struct State {
    inner: DensityOperator,
}

#[pymethods]
impl State {
    /// R = (1−λ²) Σ λ^{n+m} |nn⟩⟨mm|
    #[staticmethod]
    fn twin_beam(lambda: f64, dim: usize) -> PyResult<Self> {
        Ok(Self { inner: faithcheck::twin_beam(lambda, dim).map_err(to_py)? })
    }

    /// Coherent mixture ∫ d²γ/(πσ²) e^{−|γ|²/σ²} |γ⟩⟨γ|⊗|γ⟩⟨γ|
    #[staticmethod]
    #[pyo3(signature = (sigma2, dim, quad_points=None))]
    fn split_thermal(sigma2: f64, dim: usize, quad_points: Option<usize>) -> PyResult<Self> {
        let q = quad_points.unwrap_or_else(|| 64.max(2 * dim - 1));
        Ok(Self { inner: faithcheck::split_thermal(sigma2, dim, q).map_err(to_py)? })
    }

    /// (1−λ) Σ λⁿ |nn⟩⟨nn|
    #[staticmethod]
    fn correlated_fock(lambda: f64, dim: usize) -> PyResult<Self> {
        Ok(Self { inner: faithcheck::correlated_fock(lambda, dim).map_err(to_py)? })
    }

    /// thermal(n̄) ⊗ vacuum
    #[staticmethod]
    fn thermal_vacuum_product(nbar: f64, dim: usize) -> PyResult<Self> {
        let a = faithcheck::states::thermal_single(nbar, dim).map_err(to_py)?;
        let b = faithcheck::states::vacuum_single(dim).map_err(to_py)?;
        Ok(Self { inner: faithcheck::product_state(&a, &b).map_err(to_py)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn min_eigenvalue(&self) -> f64 {
        self.inner.min_eigenvalue()
    }

    fn wigner(&self, alpha: Complex64, beta: Complex64) -> PyResult<f64> {
        faithcheck::wigner_point(&self.inner, alpha, beta).map_err(to_py)
    }

    fn characteristic(&self, alpha: Complex64, beta: Complex64) -> PyResult<Complex64> {
        faithcheck::characteristic_point(&self.inner, alpha, beta).map_err(to_py)
    }

    /// Rank/spectrum report of the check operator as a dict.
    #[pyo3(signature = (tol=None))]
    fn classify<'py>(&self, py: Python<'py>, tol: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let check = check_operator_of(&self.inner).map_err(to_py)?;
        let report = classify(&check, tol.unwrap_or(DEFAULT_RANK_TOL)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("dim", report.dim)?;
        d.set_item("rank", report.rank)?;
        d.set_item("full_rank", report.full_rank)?;
        d.set_item("sigma_min", report.sigma_min)?;
        d.set_item("sigma_max", report.sigma_max)?;
        d.set_item("cond", report.cond)?;
        d.set_item("tol", report.tol)?;
        Ok(d)
    }

    /// Correlation functional χ(R).
    fn chi(&self) -> PyResult<f64> {
        let m = moments_of(&self.inner).map_err(to_py)?;
        chi(&m).map_err(to_py)
    }

    /// Gaussian shortcut: (A, B, faithful) from finite differences of the
    /// characteristic function.
    #[pyo3(signature = (h=1e-3, tol=1e-8))]
    fn gaussian_criterion(&self, h: f64, tol: f64) -> PyResult<(Complex64, Complex64, bool)> {
        let c = ab_coefficients(&self.inner, h).map_err(to_py)?;
        Ok((c.a, c.b, gaussian_faithful(&c, tol)))
    }

    /// Applies a named channel to the first mode and reconstructs its Choi
    /// matrix from the output; returns (recovered, max_choi_entry_error).
    fn channel_round_trip(&self, channel: &str) -> PyResult<(bool, f64)> {
        let d = self.inner.dim();
        let ch = match channel {
            "identity" => Channel::identity(d),
            "dephasing" => Channel::dephasing(d),
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown channel {other:?}; expected identity or dephasing"
                )))
            }
        }
        .map_err(to_py)?;
        let out = apply_channel_first(&self.inner, &ch).map_err(to_py)?;
        let res = reconstruct(&self.inner, &out, 1e-8).map_err(to_py)?;
        let truth = choi_of(&ch).map_err(to_py)?;
        let err = (res.choi_estimate.carrier().matrix() - truth.carrier().matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        Ok((res.recovered, err))
    }
}

#[pymodule]
fn faithcheck_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<State>()?;
    Ok(())
}
