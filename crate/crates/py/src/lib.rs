//! Python bindings: load definitions, build tensor products and internal
//! homs, compute invariants and Ext, or drive the command line.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyKeyError};
use pyo3::prelude::*;

use comod::comodule::{invariants, Comodule};
use comod::complex::ext_dims;
use comod::format::{comodule_section, load, Definition, Document, FIXTURES};
use comod::monoidal::{chom, ctensor};
use comod::ring::Budget;
use comod::Error;

create_exception!(hopf_comod, ParseError, PyException);
create_exception!(hopf_comod, CapabilityError, PyException);
create_exception!(hopf_comod, ResourceLimitError, PyException);
create_exception!(hopf_comod, IntegrityError, PyException);
create_exception!(hopf_comod, InvalidInputError, PyException);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Parse { .. } => ParseError::new_err(msg),
        Error::Capability(_) => CapabilityError::new_err(msg),
        Error::ResourceLimit(_) => ResourceLimitError::new_err(msg),
        Error::Integrity(_) => IntegrityError::new_err(msg),
        Error::Invalid(_) => InvalidInputError::new_err(msg),
    }
}

/// The parsed and built contents of a definition file.
#[pyclass(name = "Definition", module = "hopf_comod")]
struct PyDefinition {
    inner: Definition,
}

#[pymethods]
impl PyDefinition {
    #[staticmethod]
    #[pyo3(signature = (text, budget=None))]
    fn load(text: &str, budget: Option<u64>) -> PyResult<Self> {
        let b = budget.map_or(Budget::default(), |b| Budget { max_reductions: b });
        Ok(PyDefinition {
            inner: load(text, b).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn fixture(id: &str) -> PyResult<Self> {
        Ok(PyDefinition {
            inner: comod::format::fixture(id).map_err(py_err)?,
        })
    }

    #[getter]
    fn algebroid(&self) -> String {
        self.inner.algebroid.name.clone()
    }

    fn comodule_names(&self) -> Vec<String> {
        self.inner.comodules.iter().map(|c| c.0.clone()).collect()
    }

    fn complex_names(&self) -> Vec<String> {
        self.inner.complexes.iter().map(|c| c.0.clone()).collect()
    }

    fn comodule(&self, name: &str) -> PyResult<PyComodule> {
        self.inner
            .comodule(name)
            .map(|c| PyComodule { inner: c.clone() })
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))
    }

    fn unit(&self) -> PyComodule {
        PyComodule {
            inner: Comodule::unit(&self.inner.algebroid),
        }
    }

    /// Axiom name to pass or failure witness.
    fn check_algebroid(&self) -> PyResult<Vec<(String, Option<String>)>> {
        let r = self.inner.algebroid.check().map_err(py_err)?;
        Ok(r.checks.into_iter().map(|c| (c.name, c.witness)).collect())
    }

    /// Homology dimensions of a declared complex; `None` when infinite.
    fn homology_dims(&self, name: &str) -> PyResult<Vec<(i64, Option<usize>)>> {
        let c = self
            .inner
            .complex(name)
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))?;
        c.homology_dims().map_err(py_err)
    }
}

#[pyclass(name = "Comodule", module = "hopf_comod")]
struct PyComodule {
    inner: Comodule,
}

#[pymethods]
impl PyComodule {
    #[getter]
    fn ngens(&self) -> usize {
        self.inner.ngens()
    }

    /// Dimension over the field, `None` when infinite.
    fn kdim(&self) -> PyResult<Option<usize>> {
        self.inner.kdim().map_err(py_err)
    }

    fn check(&self) -> PyResult<bool> {
        Ok(self.inner.check().map_err(py_err)?.passed())
    }

    fn tensor(&self, other: &PyComodule) -> PyResult<PyComodule> {
        Ok(PyComodule {
            inner: ctensor(&self.inner, &other.inner).map_err(py_err)?,
        })
    }

    /// Internal hom out of `self` into `other`.
    fn chom(&self, other: &PyComodule) -> PyResult<PyComodule> {
        Ok(PyComodule {
            inner: chom(&self.inner, &other.inner).map_err(py_err)?.comodule,
        })
    }

    fn invariants_dim(&self) -> PyResult<usize> {
        Ok(invariants(&self.inner).map_err(py_err)?.dim())
    }

    fn ext_dims(&self, depth: usize) -> PyResult<Vec<usize>> {
        ext_dims(&self.inner, depth).map_err(py_err)
    }

    /// The comodule as a `[comodule NAME]` section.
    #[pyo3(signature = (name="result"))]
    fn to_text(&self, name: &str) -> String {
        Document {
            sections: vec![comodule_section(name, &self.inner)],
        }
        .to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Comodule with {} generators>", self.inner.ngens())
    }
}

/// `(id, description)` for each built-in fixture.
#[pyfunction]
fn fixtures() -> Vec<(String, String)> {
    FIXTURES.iter().map(|(id, d, _)| (id.to_string(), d.to_string())).collect()
}

#[pyfunction]
fn fixture_text(id: &str) -> PyResult<String> {
    comod::format::fixture_text(id)
        .map(str::to_string)
        .ok_or_else(|| PyKeyError::new_err(id.to_string()))
}

/// Runs the command line with `args` (without the program name) and
/// returns the exit code and output.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let mut all = vec!["hopf-comod".to_string()];
    all.extend(args);
    comod::cli::run(all)
}

#[pymodule(name = "hopf_comod")]
fn hopf_comod_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDefinition>()?;
    m.add_class::<PyComodule>()?;
    m.add_function(wrap_pyfunction!(fixtures, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_text, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    let py = m.py();
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("CapabilityError", py.get_type::<CapabilityError>())?;
    m.add("ResourceLimitError", py.get_type::<ResourceLimitError>())?;
    m.add("IntegrityError", py.get_type::<IntegrityError>())?;
    m.add("InvalidInputError", py.get_type::<InvalidInputError>())?;
    Ok(())
}
