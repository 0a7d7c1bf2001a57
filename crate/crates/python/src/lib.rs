//! Python bindings: fields, complexes, workspaces and the verification
//! suites.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ndg::ncx::{self, GradedSpace, KhomFlavor, NComplex};
use ndg::ndgcat::{self, NdgModule};
use ndg::scalars::ScalarRepr;
use ndg::verify::{self, SuiteConfig};
use ndg::{Field, FieldSpec, Matrix};

fn err(e: ndg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn flavor(name: &str) -> PyResult<KhomFlavor> {
    match name {
        "susp0" => Ok(KhomFlavor::Susp0),
        "susp1" => Ok(KhomFlavor::Susp1),
        other => Err(PyValueError::new_err(format!("unknown flavor `{other}`"))),
    }
}

#[pyclass(name = "Field", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: Field,
}

#[pymethods]
impl PyField {
    /// `Q(zeta_n)` with `q = zeta_n`.
    #[staticmethod]
    fn cyclotomic(n: usize) -> PyResult<Self> {
        Ok(PyField { inner: Field::new(&FieldSpec::cyclotomic(n)).map_err(err)? })
    }

    /// `F_p` with a primitive `n`-th root `q` (chosen if not given).
    #[staticmethod]
    #[pyo3(signature = (p, n, q=None))]
    fn prime(p: u64, n: usize, q: Option<u64>) -> PyResult<Self> {
        let spec = match q {
            Some(q) => FieldSpec::prime_with_root(p, n, q),
            None => FieldSpec::prime(p, n),
        };
        Ok(PyField { inner: Field::new(&spec).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn q(&self) -> String {
        self.inner.format(&self.inner.q())
    }

    fn q_binomial(&self, m: usize, l: usize) -> PyResult<String> {
        Ok(self.inner.format(&self.inner.q_binomial(m, l).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", serde_json::to_string(&self.inner.spec()).unwrap_or_default())
    }
}

#[pyclass(name = "Complex", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyComplex {
    inner: NComplex,
}

fn to_scalar(field: &Field, v: &Bound<'_, PyAny>) -> PyResult<ndg::Scalar> {
    let repr = if let Ok(i) = v.extract::<i64>() {
        ScalarRepr::Int(i)
    } else {
        ScalarRepr::Text(v.extract::<String>()?)
    };
    field.parse(&repr).map_err(err)
}

#[pymethods]
impl PyComplex {
    /// `dims` maps degree to dimension; `d` maps degree `i` to the matrix
    /// (list of rows) of `d: X^i -> X^{i+1}`. Entries are ints or strings
    /// such as `"1/2"`.
    #[new]
    #[pyo3(signature = (field, dims, d=None))]
    fn new(field: &PyField, dims: BTreeMap<i64, usize>, d: Option<BTreeMap<i64, Vec<Vec<Bound<'_, PyAny>>>>>) -> PyResult<Self> {
        let f = &field.inner;
        let space = GradedSpace::new(dims);
        let mut diffs = BTreeMap::new();
        for (i, rows) in d.unwrap_or_default() {
            let rows = rows.iter().map(|r| r.iter().map(|v| to_scalar(f, v)).collect()).collect::<PyResult<Vec<_>>>()?;
            let m = if rows.is_empty() { Matrix::zeros(f, 0, space.dim(i)) } else { Matrix::from_rows(f, rows).map_err(err)? };
            diffs.insert(i, m);
        }
        Ok(PyComplex { inner: ncx::validate_ncomplex(f, space, diffs).map_err(err)? })
    }

    /// Length-`length` staircase block starting in degree `start`.
    #[staticmethod]
    fn block(field: &PyField, start: i64, length: usize) -> PyResult<Self> {
        Ok(PyComplex { inner: ncx::standard_block(&field.inner, start, length).map_err(err)? })
    }

    fn dims(&self) -> BTreeMap<i64, usize> {
        self.inner.space().dims().clone()
    }

    fn homology(&self, degree: i64, r: usize) -> PyResult<usize> {
        ncx::homology_dim(&self.inner, degree, r).map_err(err)
    }

    #[pyo3(signature = (all_r=false))]
    fn is_acyclic(&self, all_r: bool) -> bool {
        ncx::is_acyclic_with(&self.inner, all_r)
    }

    fn theta(&self, n: i64) -> Self {
        PyComplex { inner: ncx::theta_shift(&self.inner, n) }
    }

    fn suspend(&self) -> PyResult<Self> {
        Ok(PyComplex { inner: ncx::suspend(&self.inner).map_err(err)? })
    }

    fn desuspend(&self) -> PyResult<Self> {
        Ok(PyComplex { inner: ncx::desuspend(&self.inner).map_err(err)? })
    }

    fn hom(&self, other: &PyComplex) -> PyResult<Self> {
        Ok(PyComplex { inner: ncx::hom_complex(&self.inner, &other.inner).map_err(err)? })
    }

    fn tensor(&self, other: &PyComplex) -> PyResult<Self> {
        Ok(PyComplex { inner: ncx::tensor_complex(&self.inner, &other.inner).map_err(err)? })
    }

    /// Dimension of `Hom_K(θ^{-n} self, other)` (or into `Σ other` for `susp1`).
    #[pyo3(signature = (other, n=0, flavor="susp0"))]
    fn khom(&self, other: &PyComplex, n: i64, flavor: &str) -> PyResult<usize> {
        ncx::khom_dim(&self.inner, &other.inner, n, self::flavor(flavor)?).map_err(err)
    }

    /// Start degrees of the staircase blocks of an acyclic complex.
    fn contract(&self) -> PyResult<Vec<i64>> {
        Ok(ncx::contract_acyclic(&self.inner).map_err(err)?.blocks)
    }

    fn __eq__(&self, other: &PyComplex) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Complex(N={}, dims={:?})", self.inner.order(), self.inner.space().dims())
    }
}

#[pyclass(name = "Module", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyNdgModule {
    inner: NdgModule,
}

#[pymethods]
impl PyNdgModule {
    fn value(&self, object: &str) -> PyResult<PyComplex> {
        let a = self.inner.base().object_index(object).map_err(err)?;
        Ok(PyComplex { inner: self.inner.value(a).clone() })
    }

    /// Degree dimensions of the hom complex between two right modules.
    fn hom_dims(&self, other: &PyNdgModule) -> PyResult<BTreeMap<i64, usize>> {
        Ok(ndgcat::module_hom_complex(&self.inner, &other.inner).map_err(err)?.complex.space().dims().clone())
    }

    #[pyo3(signature = (other, n=0, flavor="susp0"))]
    fn khom(&self, other: &PyNdgModule, n: i64, flavor: &str) -> PyResult<usize> {
        ndgcat::khom_module(&self.inner, &other.inner, n, self::flavor(flavor)?).map_err(err)
    }
}

#[pyclass(name = "Workspace")]
struct PyWorkspace {
    inner: ndg::workspace::Workspace,
}

#[pymethods]
impl PyWorkspace {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyWorkspace { inner: ndg::workspace::Workspace::from_json(text).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyWorkspace { inner: ndg::workspace::Workspace::load(path).map_err(err)? })
    }

    #[staticmethod]
    fn empty(field: &PyField) -> Self {
        PyWorkspace { inner: ndg::workspace::Workspace::new(&field.inner) }
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { inner: self.inner.field().clone() }
    }

    fn complexes(&self) -> Vec<String> {
        self.inner.complexes.keys().cloned().collect()
    }

    fn modules(&self) -> Vec<String> {
        self.inner.modules.keys().cloned().collect()
    }

    fn complex(&self, name: &str) -> PyResult<PyComplex> {
        Ok(PyComplex { inner: self.inner.complex(name).map_err(err)?.clone() })
    }

    fn module(&self, name: &str) -> PyResult<PyNdgModule> {
        Ok(PyNdgModule { inner: self.inner.module(name).map_err(err)?.module.clone() })
    }

    fn add_complex(&mut self, name: &str, x: &PyComplex) -> PyResult<()> {
        self.inner.add_complex(name, x.inner.clone()).map_err(err)
    }
}

/// Runs a verification suite; returns `(passed, [(check, instances, failures)])`.
#[pyfunction]
#[pyo3(signature = (suite, orders=None, trials=None, seed=0))]
fn run_suite(suite: &str, orders: Option<Vec<usize>>, trials: Option<usize>, seed: u64) -> PyResult<(bool, Vec<(String, usize, usize)>)> {
    let (default_orders, default_trials) =
        verify::suite_defaults(suite).ok_or_else(|| PyValueError::new_err(format!("unknown suite `{suite}`")))?;
    let cfg = SuiteConfig::new(orders.unwrap_or(default_orders), trials.unwrap_or(default_trials), seed);
    let rep = verify::run_suite(suite, &cfg).map_err(err)?;
    Ok((rep.passed(), rep.checks.into_iter().map(|c| (c.name, c.instances, c.failures)).collect()))
}

#[pyfunction]
fn suites() -> Vec<&'static str> {
    verify::SUITES.to_vec()
}

#[pymodule]
fn ndg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyNdgModule>()?;
    m.add_class::<PyWorkspace>()?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    Ok(())
}
