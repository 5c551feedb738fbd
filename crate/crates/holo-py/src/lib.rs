//! `holomatch`: Python bindings over the exact matchgate and holographic
//! algorithm library. Scalars cross the boundary as their canonical text
//! form (`a/b`, `a/b+c/d*i`), so Python sees exact values.

use std::path::PathBuf;
use std::str::FromStr;

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use holo_core::basis;
use holo_core::collapse as collapse_engine;
use holo_core::doppler;
use holo_core::formats;
use holo_core::holant as holant_engine;
use holo_core::matchgate;
use holo_core::matrix;
use holo_core::scalar;
use holo_core::signature::{self, MgiOutcome, ParityClass};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Exact Gaussian-rational scalar.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Scalar {
    inner: scalar::Scalar,
}

#[pymethods]
impl Scalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Scalar { inner: scalar::Scalar::from_str(text).map_err(err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar({:?})", self.inner.to_string())
    }

    fn __add__(&self, other: &Scalar) -> Scalar {
        Scalar { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &Scalar) -> Scalar {
        Scalar { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &Scalar) -> Scalar {
        Scalar { inner: &self.inner * &other.inner }
    }

    fn __truediv__(&self, other: &Scalar) -> PyResult<Scalar> {
        if other.inner.is_zero() {
            return Err(PyZeroDivisionError::new_err("division by zero scalar"));
        }
        Ok(Scalar { inner: &self.inner / &other.inner })
    }

    fn __neg__(&self) -> Scalar {
        Scalar { inner: -&self.inner }
    }

    fn __eq__(&self, other: &Scalar) -> bool {
        self.inner == other.inner
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn conj(&self) -> Scalar {
        Scalar { inner: self.inner.conj() }
    }
}

/// Dense exact matrix.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Matrix {
    inner: matrix::Matrix,
}

fn parse_rows(rows: Vec<Vec<String>>) -> PyResult<matrix::Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged rows"));
    }
    let mut entries = Vec::with_capacity(r * c);
    for row in &rows {
        for cell in row {
            entries.push(scalar::Scalar::from_str(cell).map_err(err)?);
        }
    }
    Ok(matrix::Matrix::new(r, c, entries))
}

#[pymethods]
impl Matrix {
    #[new]
    fn new(rows: Vec<Vec<String>>) -> PyResult<Self> {
        Ok(Matrix { inner: parse_rows(rows)? })
    }

    #[staticmethod]
    fn identity(n: usize) -> Matrix {
        Matrix { inner: matrix::Matrix::identity(n) }
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<Scalar> {
        if i >= self.inner.rows() || j >= self.inner.cols() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(Scalar { inner: self.inner.at(i, j).clone() })
    }

    fn to_lists(&self) -> Vec<Vec<String>> {
        (0..self.inner.rows())
            .map(|i| (0..self.inner.cols()).map(|j| self.inner.at(i, j).to_string()).collect())
            .collect()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn determinant(&self) -> PyResult<Scalar> {
        Ok(Scalar { inner: self.inner.determinant().map_err(err)? })
    }

    fn inverse(&self) -> PyResult<Matrix> {
        Ok(Matrix { inner: self.inner.inverse().map_err(err)? })
    }

    fn pfaffian(&self) -> PyResult<Scalar> {
        Ok(Scalar { inner: self.inner.pfaffian().map_err(err)? })
    }

    fn mul(&self, other: &Matrix) -> PyResult<Matrix> {
        if self.inner.cols() != other.inner.rows() {
            return Err(PyValueError::new_err("inner dimensions must agree"));
        }
        Ok(Matrix { inner: self.inner.mul(&other.inner) })
    }

    fn kronecker_power(&self, n: usize) -> Matrix {
        Matrix { inner: self.inner.kronecker_power(n) }
    }

    fn transpose(&self) -> Matrix {
        Matrix { inner: self.inner.transpose() }
    }

    fn __eq__(&self, other: &Matrix) -> bool {
        self.inner == other.inner
    }
}

/// Signature tensor over domain size k and arity n.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Signature {
    inner: signature::Signature,
}

#[pymethods]
impl Signature {
    #[new]
    fn new(k: usize, n: usize, role: &str, entries: Vec<String>) -> PyResult<Self> {
        let role = signature::Role::from_str(role).map_err(err)?;
        let entries = entries
            .iter()
            .map(|t| scalar::Scalar::from_str(t).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Signature { inner: signature::Signature::new(k, n, role, entries).map_err(err)? })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    #[getter]
    fn role(&self) -> String {
        self.inner.role().to_string()
    }

    fn entries(&self) -> Vec<String> {
        self.inner.entries().iter().map(|e| e.to_string()).collect()
    }

    fn matrix_form(&self, t: usize) -> PyResult<Matrix> {
        Ok(Matrix { inner: self.inner.matrix_form(t).map_err(err)? })
    }

    fn parity(&self) -> PyResult<String> {
        Ok(match self.inner.parity_check().map_err(err)? {
            ParityClass::EvenMatchgate => "even".to_string(),
            ParityClass::OddMatchgate => "odd".to_string(),
            ParityClass::Violation { even_witness, odd_witness } => {
                format!("violation at {even_witness} and {odd_witness}")
            }
        })
    }

    /// None on pass; (alpha, positions, residual) on the least failing cell.
    fn mgi_failure(&self) -> PyResult<Option<(String, Vec<usize>, String)>> {
        Ok(match self.inner.mgi_check().map_err(err)? {
            MgiOutcome::Pass => None,
            MgiOutcome::Fail { alpha, positions, residual } => {
                Some((alpha.to_string(), positions, residual.to_string()))
            }
        })
    }

    fn is_standard_signature(&self) -> PyResult<bool> {
        self.inner.is_standard_signature().map_err(err)
    }

    fn arity4_standard_check(&self) -> PyResult<bool> {
        self.inner.arity4_standard_check().map_err(err)
    }

    fn is_degenerate(&self) -> Option<Vec<Vec<String>>> {
        self.inner.is_degenerate().map(|factors| {
            factors
                .into_iter()
                .map(|f| f.into_iter().map(|s| s.to_string()).collect())
                .collect()
        })
    }

    fn full_rank_slot(&self) -> Option<usize> {
        self.inner.full_rank_slot()
    }
}

/// Basis of size l on domain size k.
#[pyclass(frozen)]
struct Basis {
    inner: basis::Basis,
}

#[pymethods]
impl Basis {
    #[new]
    fn new(l: usize, k: usize, matrix: &Matrix) -> PyResult<Self> {
        Ok(Basis { inner: basis::Basis::new(l, k, matrix.inner.clone()).map_err(err)? })
    }

    #[getter]
    fn l(&self) -> usize {
        self.inner.l()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn matrix(&self) -> Matrix {
        Matrix { inner: self.inner.matrix().clone() }
    }

    fn is_full_rank(&self) -> bool {
        self.inner.is_full_rank()
    }

    fn generator_to_standard(&self, g: &Signature) -> PyResult<Signature> {
        Ok(Signature { inner: self.inner.generator_to_standard(&g.inner).map_err(err)? })
    }

    fn recognizer_from_standard(&self, under_r: &Signature) -> PyResult<Signature> {
        Ok(Signature { inner: self.inner.recognizer_from_standard(&under_r.inner).map_err(err)? })
    }

    fn generator_realizable(&self, g: &Signature) -> PyResult<bool> {
        self.inner.generator_realizable(&g.inner).map_err(err)
    }
}

/// Planar embedded weighted graph loaded from a graph file.
#[pyclass(frozen)]
struct Graph {
    inner: holo_core::PlanarGraph,
}

#[pymethods]
impl Graph {
    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edges().len()
    }

    fn perfmatch(&self) -> PyResult<Scalar> {
        Ok(Scalar { inner: self.inner.perfmatch().map_err(err)? })
    }

    fn perfmatch_bruteforce(&self) -> PyResult<Scalar> {
        Ok(Scalar { inner: self.inner.perfmatch_bruteforce().map_err(err)? })
    }

    fn face_count(&self) -> PyResult<usize> {
        Ok(self.inner.trace_faces().map_err(err)?.len())
    }
}

/// Matchgate loaded from a matchgate file.
#[pyclass(frozen)]
struct Matchgate {
    inner: matchgate::Matchgate,
}

#[pymethods]
impl Matchgate {
    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn standard_signature(&self) -> PyResult<Signature> {
        Ok(Signature { inner: self.inner.standard_signature().map_err(err)? })
    }
}

#[pyfunction]
fn load_graph(path: PathBuf) -> PyResult<Graph> {
    Ok(Graph { inner: formats::load_graph(&path).map_err(err)? })
}

#[pyfunction]
fn load_matchgate(path: PathBuf) -> PyResult<Matchgate> {
    Ok(Matchgate { inner: formats::load_matchgate(&path).map_err(err)? })
}

#[pyfunction]
fn load_signature(path: PathBuf) -> PyResult<Signature> {
    Ok(Signature { inner: formats::load_signature(&path).map_err(err)? })
}

#[pyfunction]
fn load_basis(path: PathBuf) -> PyResult<Basis> {
    Ok(Basis { inner: formats::load_basis(&path).map_err(err)? })
}

/// (contraction value, PerfMatch value) of a matchgrid manifest; the
/// Holant Theorem makes them equal.
#[pyfunction]
fn holant(path: PathBuf) -> PyResult<(String, String)> {
    let grid = formats::load_matchgrid(&path).map_err(err)?;
    let (gens, recs) = grid.standard_signatures().map_err(err)?;
    let wires = grid.wires().map_err(err)?;
    let by_contract =
        holant_engine::holant_contract(&gens, &recs, &wires, holant_engine::DEFAULT_WIRE_BOUND).map_err(err)?;
    let by_pm = holant_engine::holant_via_perfmatch(&grid).map_err(err)?;
    Ok((by_contract.to_string(), by_pm.to_string()))
}

#[pyfunction]
fn doppler_bruteforce(path: PathBuf) -> PyResult<u64> {
    let g = formats::load_graph(&path).map_err(err)?;
    doppler::doppler_bruteforce(&g).map_err(err)
}

#[pyfunction]
fn doppler_holographic(py: Python<'_>, path: PathBuf) -> PyResult<Py<PyDict>> {
    let g = formats::load_graph(&path).map_err(err)?;
    let out = doppler::doppler_holographic(&g).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("count", out.count)?;
    let fam = |f: &doppler::FamilyCheck| -> PyResult<Py<PyDict>> {
        let fd = PyDict::new(py);
        fd.set_item("layout", f.layout)?;
        fd.set_item("standard", f.standard)?;
        fd.set_item("witness", f.witness.clone())?;
        Ok(fd.into())
    };
    d.set_item("edge_family", fam(&out.edge_family)?)?;
    d.set_item("vertex_family", fam(&out.vertex_family)?)?;
    Ok(d.into())
}

/// Runs the domain-2 or domain-4 collapse pipeline over a manifest and
/// returns the verification report as (name, pass, witness) triples.
#[pyfunction]
fn collapse(path: PathBuf, domain: usize) -> PyResult<Vec<(String, bool, String)>> {
    let manifest = formats::load_collapse_manifest(&path).map_err(err)?;
    let pairs = |v: Vec<(signature::Signature, Option<signature::Signature>)>| {
        v.into_iter()
            .map(|(tensor, under)| {
                under
                    .map(|u| (tensor, u))
                    .ok_or_else(|| PyValueError::new_err("manifest needs <tensor> <standard> pairs"))
            })
            .collect::<PyResult<Vec<_>>>()
    };
    let inst = collapse_engine::CollapseInstance {
        basis: manifest.basis,
        generators: pairs(manifest.generators)?,
        recognizers: pairs(manifest.recognizers)?,
        wiring: if manifest.wires.is_empty() { None } else { Some(manifest.wires) },
    };
    let run = match domain {
        2 => collapse_engine::collapse_domain2(&inst, collapse_engine::CollapseOptions::default()),
        4 => collapse_engine::collapse_domain4(&inst, collapse_engine::CollapseOptions::default()),
        _ => return Err(PyValueError::new_err("domain must be 2 or 4")),
    };
    let result = run.map_err(err)?;
    Ok(result
        .report
        .into_iter()
        .map(|l| (l.name, l.pass, l.witness))
        .collect())
}

#[pymodule]
fn holomatch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scalar>()?;
    m.add_class::<Matrix>()?;
    m.add_class::<Signature>()?;
    m.add_class::<Basis>()?;
    m.add_class::<Graph>()?;
    m.add_class::<Matchgate>()?;
    m.add_function(wrap_pyfunction!(load_graph, m)?)?;
    m.add_function(wrap_pyfunction!(load_matchgate, m)?)?;
    m.add_function(wrap_pyfunction!(load_signature, m)?)?;
    m.add_function(wrap_pyfunction!(load_basis, m)?)?;
    m.add_function(wrap_pyfunction!(holant, m)?)?;
    m.add_function(wrap_pyfunction!(doppler_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(doppler_holographic, m)?)?;
    m.add_function(wrap_pyfunction!(collapse, m)?)?;
    Ok(())
}
