use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ffnets::construct::Variant;
use ffnets::genmat;
use ffnets::gf::{self, FieldElement, FieldSpec};
use ffnets::netverify;
use ffnets::params::{parse_field, Backend, BackendSpec, ParamSpec};
use ffnets::pipeline;
use ffnets::seqgen;

fn err(e: ffnets::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The finite field F_q; elements are the integers 0..q-1.
#[pyclass(name = "Field", frozen)]
struct PyField {
    k: FieldSpec,
}

impl PyField {
    fn el(&self, i: usize) -> PyResult<FieldElement> {
        self.k.elem(i).map_err(err)
    }
}

#[pymethods]
impl PyField {
    /// `Field(4)`, `Field("3^2")`, or `Field(2, modulus=[1, 1, 1])`.
    #[new]
    #[pyo3(signature = (q, modulus=None))]
    fn new(q: &Bound<'_, PyAny>, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        let text = match q.extract::<u64>() {
            Ok(n) => n.to_string(),
            Err(_) => q.extract::<String>()?,
        };
        let m = modulus.map(|m| m.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        Ok(PyField { k: parse_field(&text, m.as_deref()).map_err(err)? })
    }

    #[getter]
    fn size(&self) -> usize {
        self.k.size()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.k.characteristic()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.k.degree()
    }

    #[getter]
    fn modulus(&self) -> Option<Vec<u32>> {
        self.k.modulus().map(<[u32]>::to_vec)
    }

    fn add(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.k.add(self.el(a)?, self.el(b)?).index())
    }

    fn sub(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.k.sub(self.el(a)?, self.el(b)?).index())
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.k.mul(self.el(a)?, self.el(b)?).index())
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        Ok(self.k.inv(self.el(a)?).map_err(err)?.index())
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.k)
    }
}

/// Generating matrices `C^(1..s)` as loaded from or written to FFNETS v1 text.
#[pyclass(name = "MatrixSet", frozen)]
struct PyMatrixSet {
    ms: genmat::MatrixSet,
}

#[pymethods]
impl PyMatrixSet {
    #[staticmethod]
    fn deserialize(text: &str) -> PyResult<Self> {
        Ok(PyMatrixSet { ms: genmat::MatrixSet::deserialize(text).map_err(err)? })
    }

    fn serialize(&self) -> String {
        self.ms.serialize()
    }

    fn digest(&self) -> String {
        self.ms.digest()
    }

    #[getter]
    fn q(&self) -> usize {
        self.ms.field().size()
    }

    #[getter]
    fn s(&self) -> usize {
        self.ms.s()
    }

    #[getter]
    fn rows(&self) -> usize {
        self.ms.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.ms.cols()
    }

    #[getter]
    fn variant(&self) -> String {
        self.ms.variant().to_string()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.ms.genus()
    }

    #[getter]
    fn mu(&self) -> usize {
        self.ms.mu()
    }

    /// Matrix `C^(i)` (1-based) as nested lists of element indices.
    fn matrix(&self, i: usize) -> PyResult<Vec<Vec<usize>>> {
        if i == 0 || i > self.ms.s() {
            return Err(PyValueError::new_err(format!("coordinate {i} outside 1..={}", self.ms.s())));
        }
        Ok((0..self.ms.rows()).map(|j| self.ms.matrix(i - 1).row(j).iter().map(|e| e.index()).collect()).collect())
    }

    /// Numerators `Y_i` of point `n` to `m` digits (`x_i = Y_i / q^m`).
    fn point(&self, n: u128, m: usize) -> PyResult<Vec<u128>> {
        Ok(seqgen::point(&self.ms, n, m).map_err(err)?.numerators)
    }

    /// Points `n0 .. n0+count-1` as floats.
    #[pyo3(signature = (count, m, n0=0))]
    fn points(&self, count: usize, m: usize, n0: u128) -> PyResult<Vec<Vec<f64>>> {
        let req = seqgen::PointRequest { n0, count, m, mode: seqgen::OutputMode::Binary64 };
        Ok(seqgen::points(&self.ms, &req).map_err(err)?.iter().map(seqgen::Point::to_f64).collect())
    }

    fn rows_independent(&self, m: usize, d: Vec<usize>) -> PyResult<bool> {
        netverify::rows_independent(&self.ms, m, &d).map_err(err)
    }

    fn minimal_t(&self, m: usize) -> PyResult<usize> {
        netverify::minimal_t(&self.ms, m).map_err(err)
    }

    /// `(m, T*, bound)` for `m = 1..=m_max`.
    fn check_bound(&self, m_max: usize) -> PyResult<Vec<(usize, usize, usize)>> {
        let rep = netverify::check_bound(&self.ms, m_max).map_err(err)?;
        Ok(rep.rows.iter().map(|r| (r.m, r.t_star, r.bound)).collect())
    }

    /// `(shape, passed)` for every elementary-interval shape of the block.
    #[pyo3(signature = (m, t, offset=0))]
    fn netcheck(&self, m: usize, t: usize, offset: u128) -> PyResult<Vec<(Vec<usize>, bool)>> {
        pipeline::netcheck(&self.ms, m, t, offset).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "MatrixSet(q={}, s={}, variant={}, rows={}, cols={})",
            self.ms.field().size(),
            self.ms.s(),
            self.ms.variant(),
            self.ms.rows(),
            self.ms.cols()
        )
    }
}

/// Builds matrices from parameter text such as
/// `variant=genus0 q=2 s=2` or `variant=xing backend=curve:0,0,0,2,0 q=3 s=3`.
#[pyfunction]
#[pyo3(signature = (params, rows=8, cols=8))]
fn construct(params: &str, rows: usize, cols: usize) -> PyResult<PyMatrixSet> {
    let spec: ParamSpec = params.parse().map_err(err)?;
    Ok(PyMatrixSet { ms: pipeline::construct(&spec, rows, cols).map_err(err)? })
}

/// The parameter text with every kit default filled in.
#[pyfunction]
fn resolve_params(params: &str) -> PyResult<String> {
    let spec: ParamSpec = params.parse().map_err(err)?;
    Ok(spec.resolved().map_err(err)?.to_string())
}

/// Rebuilds a matrix set from explicit matrices (lists of index rows).
#[pyfunction]
#[pyo3(signature = (q, matrices, variant="genus0", mu=1, genus=0))]
fn matrix_set(q: u64, matrices: Vec<Vec<Vec<usize>>>, variant: &str, mu: usize, genus: usize) -> PyResult<PyMatrixSet> {
    let k = gf::field_of_size(q).map_err(err)?;
    let v: Variant = variant.parse().map_err(err)?;
    let mats = matrices
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|&i| k.elem(i)).collect()).collect())
        .collect::<ffnets::Result<Vec<Vec<Vec<_>>>>>()
        .map_err(err)?;
    Ok(PyMatrixSet { ms: genmat::MatrixSet::from_rows(k, v, mu, genus, mats).map_err(err)? })
}

/// `(k, digits)` pairs of the local expansion of `element` at `place`.
#[pyfunction]
#[pyo3(signature = (element, place, q="2", curve=None, upto=7))]
fn expand(element: &str, place: &str, q: &str, curve: Option<&str>, upto: i64) -> PyResult<Vec<(i64, Vec<usize>)>> {
    let k = parse_field(q, None).map_err(err)?;
    let spec = match curve {
        None => BackendSpec::RationalFunctionField,
        Some(c) => format!("curve:{c}").parse().map_err(err)?,
    };
    let b = Backend::new(&k, &spec).map_err(err)?;
    let e = pipeline::expand(&b, element, place, upto).map_err(err)?;
    Ok((e.start.min(0).min(e.upto)..=e.upto).map(|i| (i, e.coeff(i).iter().map(|d| d.index()).collect())).collect())
}

#[pymodule]
fn ffnets_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyMatrixSet>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_params, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_set, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    Ok(())
}
