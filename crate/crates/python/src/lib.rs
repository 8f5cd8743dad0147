//! Python bindings: polynomials, Gröbner bases, domains, spline dimensions,
//! homology and bases. Rationals cross the boundary as strings ("3/4").

use gsplines_core::chain::{ChainContext, ChainOptions, OrderChoice};
use gsplines_core::io;
use gsplines_core::poly::{format_rational, parse_rational, Grading, GradingKind, MonomialOrder, VariableSpace};
use gsplines_core::spline::{basis_algorithm1, dimension_with, Verifier};
use gsplines_core::{buchberger, GrDomain, GroebnerBasis, SplineBasis};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

fn err(e: gsplines_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn grading(kind: &str, d: u32) -> PyResult<Grading> {
    let kind: GradingKind = kind.parse().map_err(err)?;
    Ok(Grading { kind, d })
}

fn order_choice(order: &str) -> PyResult<OrderChoice> {
    order.parse().map_err(err)
}

/// Polynomial with rational coefficients over named variables.
#[pyclass(name = "Polynomial", module = "gsplines", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: gsplines_core::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(text: &str, variables: Vec<String>) -> PyResult<Self> {
        let names: Vec<&str> = variables.iter().map(String::as_str).collect();
        let space = VariableSpace::named(&names);
        Ok(Self { inner: gsplines_core::Polynomial::parse(text, &space).map_err(err)? })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.space().names().to_vec()
    }

    fn total_degree(&self) -> Option<u32> {
        self.inner.total_degree()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Evaluate at a point given as rational strings or ints.
    fn evaluate(&self, point: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
        let p = point
            .iter()
            .map(|x| parse_rational(&x.str()?.to_string()).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        if p.len() != self.inner.space().nvars() {
            return Err(PyValueError::new_err(format!("expected {} coordinates", self.inner.space().nvars())));
        }
        Ok(format_rational(&self.inner.eval(&p)))
    }

    fn derivative(&self, variable: &str) -> PyResult<Self> {
        let i = self
            .inner
            .space()
            .index_of(variable)
            .ok_or_else(|| PyValueError::new_err(format!("unknown variable `{variable}`")))?;
        Ok(Self { inner: self.inner.derivative(i) })
    }

    fn __add__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.try_add(&o.inner).map_err(err)? })
    }

    fn __sub__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.try_sub(&o.inner).map_err(err)? })
    }

    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.try_mul(&o.inner).map_err(err)? })
    }

    fn __pow__(&self, e: u32, _modulo: Option<Bound<'_, PyAny>>) -> Self {
        Self { inner: self.inner.pow(e) }
    }

    fn __eq__(&self, o: &Self) -> bool {
        self.inner == o.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}', {:?})", self.inner, self.inner.space().names())
    }
}

/// Reduced Gröbner basis of the ideal spanned by `generators`.
#[pyclass(name = "GroebnerBasis", module = "gsplines", frozen)]
struct PyGroebnerBasis {
    inner: GroebnerBasis,
}

#[pymethods]
impl PyGroebnerBasis {
    /// `order` is "grevlex" or "lex".
    #[new]
    #[pyo3(signature = (generators, order = "grevlex"))]
    fn new(generators: Vec<PyRef<'_, PyPolynomial>>, order: &str) -> PyResult<Self> {
        let first = generators.first().ok_or_else(|| PyValueError::new_err("no generators"))?;
        let n = first.inner.space().nvars();
        let ord = match order {
            "grevlex" => MonomialOrder::grevlex(n),
            "lex" => MonomialOrder::lex(n),
            _ => return Err(PyValueError::new_err(format!("unknown order `{order}`"))),
        };
        let gens: Vec<_> = generators.iter().map(|g| g.inner.clone()).collect();
        Ok(Self { inner: buchberger(&gens, &ord).map_err(err)? })
    }

    #[getter]
    fn generators(&self) -> Vec<PyPolynomial> {
        self.inner.generators.iter().map(|g| PyPolynomial { inner: g.clone() }).collect()
    }

    /// Normal form (the remainder 𝔯).
    fn reduce(&self, p: &PyPolynomial) -> PyResult<PyPolynomial> {
        check_space(self.inner.space(), &p.inner)?;
        Ok(PyPolynomial { inner: self.inner.normal_form(&p.inner) })
    }

    fn __contains__(&self, p: &PyPolynomial) -> PyResult<bool> {
        check_space(self.inner.space(), &p.inner)?;
        Ok(self.inner.contains(&p.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.generators.len()
    }
}

fn check_space(s: &Arc<VariableSpace>, p: &gsplines_core::Polynomial) -> PyResult<()> {
    if gsplines_core::poly::same_space(s, p.space()) {
        Ok(())
    } else {
        Err(PyTypeError::new_err("polynomial lives in a different variable space"))
    }
}

/// A G^r-domain: cell complex, face ideals and transition maps.
#[pyclass(name = "Domain", module = "gsplines", frozen)]
struct PyDomain {
    inner: GrDomain,
}

#[pymethods]
impl PyDomain {
    /// Load a domain JSON file, or `builtin:<name>`.
    #[staticmethod]
    #[pyo3(signature = (path, r = None))]
    fn load(path: &str, r: Option<u32>) -> PyResult<Self> {
        Ok(Self { inner: io::load_domain(path, r).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (name, r = 1))]
    fn builtin(name: &str, r: u32) -> PyResult<Self> {
        Ok(Self { inner: gsplines_core::complex::fixtures::builtin(name, r).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_domain_str(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        io::serialize_domain(&self.inner).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.r
    }

    /// Compatibility violations (empty when the domain is valid).
    fn check(&self) -> Vec<String> {
        self.inner.check_compatibility().violations
    }

    #[pyo3(signature = (degree, grading = "total", order = "grevlex"))]
    fn dimension(&self, py: Python<'_>, degree: u32, grading: &str, order: &str) -> PyResult<usize> {
        let g = self::grading(grading, degree)?;
        let o = order_choice(order)?;
        self.inner.ensure_compatible().map_err(err)?;
        py.detach(|| dimension_with(&self.inner, g, o)).map_err(err)
    }

    /// Dimensions of the quotient chain complex, C_0..C_n.
    #[pyo3(signature = (degree, grading = "total"))]
    fn chain_dims(&self, py: Python<'_>, degree: u32, grading: &str) -> PyResult<Vec<usize>> {
        Ok(self.complex(py, degree, grading)?.dims())
    }

    #[pyo3(signature = (degree, grading = "total"))]
    fn euler(&self, py: Python<'_>, degree: u32, grading: &str) -> PyResult<i64> {
        Ok(self.complex(py, degree, grading)?.euler_characteristic())
    }

    /// dim H_0..H_n.
    #[pyo3(signature = (degree, grading = "total"))]
    fn homology(&self, py: Python<'_>, degree: u32, grading: &str) -> PyResult<Vec<usize>> {
        Ok(self.complex(py, degree, grading)?.homology_dims())
    }

    #[pyo3(signature = (degree, grading = "total", order = "grevlex"))]
    fn basis(&self, py: Python<'_>, degree: u32, grading: &str, order: &str) -> PyResult<PyBasis> {
        let g = self::grading(grading, degree)?;
        let o = order_choice(order)?;
        let b = py.detach(|| basis_algorithm1(&self.inner, g, o)).map_err(err)?;
        Ok(PyBasis { inner: b })
    }

    /// True when every spline of `basis` is G^r on this domain and within its degree.
    fn verify(&self, basis: &PyBasis) -> PyResult<bool> {
        let v = Verifier::new(&self.inner).map_err(err)?;
        Ok(basis.inner.splines.iter().all(|s| v.verify(s, Some(basis.inner.grading)).ok()))
    }

    fn load_basis(&self, text: &str) -> PyResult<PyBasis> {
        Ok(PyBasis { inner: io::parse_basis(text, &self.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Domain('{}', n={}, r={})", self.inner.name, self.inner.n(), self.inner.r)
    }
}

impl PyDomain {
    fn complex(&self, py: Python<'_>, degree: u32, grading: &str) -> PyResult<gsplines_core::TruncatedChainComplex> {
        let g = self::grading(grading, degree)?;
        self.inner.ensure_compatible().map_err(err)?;
        py.detach(|| ChainContext::new(&self.inner, ChainOptions::default())?.complex(g)).map_err(err)
    }
}

/// Basis of a spline space; each spline is a dict face → polynomial text.
#[pyclass(name = "SplineBasis", module = "gsplines", frozen)]
struct PyBasis {
    inner: SplineBasis,
}

#[pymethods]
impl PyBasis {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn splines(&self) -> Vec<BTreeMap<String, String>> {
        self.inner.splines.iter().map(io::spline_record).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        io::serialize_basis(&self.inner).map_err(err)
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.grading.d
    }

    #[getter]
    fn grading(&self) -> String {
        match self.inner.grading.kind {
            GradingKind::Total => "total",
            GradingKind::Bidegree => "bidegree",
        }
        .to_string()
    }
}

#[pymodule]
fn gsplines(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyGroebnerBasis>()?;
    m.add_class::<PyDomain>()?;
    m.add_class::<PyBasis>()?;
    m.add("BUILTINS", gsplines_core::complex::fixtures::BUILTIN_NAMES.to_vec())?;
    Ok(())
}
