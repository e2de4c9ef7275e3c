//! Python bindings for the cone-zeta library: exact Laurent/motivic
//! arithmetic, the cone decomposition pipeline, and the brute-force
//! counting oracles.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use cone_zeta::exact;
use cone_zeta::integral::ZetaPipeline;
use cone_zeta::io::{self, AnyInput};
use cone_zeta::lie::{to_cone_data, BracketMode};
use cone_zeta::oracle;
use cone_zeta::topological::top_zeta_direct;

fn err(e: cone_zeta::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_mode(mode: &str) -> PyResult<BracketMode> {
    match mode {
        "sub" => Ok(BracketMode::Subalgebra),
        "ideal" => Ok(BracketMode::Ideal),
        other => Err(PyValueError::new_err(format!(
            "mode must be \"sub\" or \"ideal\", got \"{other}\""
        ))),
    }
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    let ctor = py.import("fractions")?.getattr("Fraction")?;
    ctor.call1((r.numer().clone(), r.denom().clone()))
}

/// Laurent polynomial in the Lefschetz class `L` with rational coefficients.
#[pyclass(frozen)]
struct LaurentPoly {
    inner: exact::LaurentPoly,
}

#[pymethods]
impl LaurentPoly {
    /// Parse canonical text such as `"L^3 + 2*L^2 + L + 1"` or `"L^-1"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = text.parse().map_err(err)?;
        Ok(Self { inner })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LaurentPoly({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner * &other.inner,
        }
    }

    /// Evaluate at `L = p` as an exact `fractions.Fraction`.
    fn eval<'py>(&self, py: Python<'py>, p: i64) -> PyResult<Bound<'py, PyAny>> {
        let v = self
            .inner
            .eval(&BigRational::from(BigInt::from(p)))
            .map_err(err)?;
        fraction(py, &v)
    }
}

/// Finite sum of factored terms `coeff * T^a L^-b * prod [x/(1 - x)]`,
/// closed under the arithmetic the zeta pipeline needs.
#[pyclass(frozen, name = "MotivicRational")]
struct Motivic {
    inner: exact::MotivicRational,
}

#[pymethods]
impl Motivic {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MotivicRational({:?})", self.inner.to_string())
    }

    /// Exact equality as rational functions, not term-by-term identity.
    fn __eq__(&self, other: &Self) -> bool {
        self.inner.equivalent(&other.inner)
    }

    /// Power-series coefficients of `T^0 .. T^order`, exact in `L`.
    fn series(&self, order: usize) -> PyResult<Vec<LaurentPoly>> {
        let coeffs = exact::mr_series(&self.inner, order).map_err(err)?;
        Ok(coeffs
            .into_iter()
            .map(|inner| LaurentPoly { inner })
            .collect())
    }

    /// Set `L = p`, producing a reduced rational function of `T`.
    fn specialize(&self, p: i64) -> PyResult<RationalFunction> {
        let inner = exact::mr_specialize(
            &self.inner,
            &BigRational::from(BigInt::from(p)),
            &BTreeMap::new(),
        )
        .map_err(err)?;
        Ok(RationalFunction { inner })
    }
}

/// Reduced rational function of the counting variable `T` over `Q`.
#[pyclass(frozen)]
struct RationalFunction {
    inner: exact::RationalFunctionT,
}

#[pymethods]
impl RationalFunction {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RationalFunction({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    /// Power-series coefficients `T^0 .. T^order` as `fractions.Fraction`s.
    fn series<'py>(&self, py: Python<'py>, order: usize) -> PyResult<Bound<'py, PyList>> {
        let coeffs = self.inner.series(order).map_err(err)?;
        let items: Vec<_> = coeffs
            .iter()
            .map(|c| fraction(py, c))
            .collect::<PyResult<_>>()?;
        PyList::new(py, items)
    }
}

/// Rational function of `s` in factored form, e.g. the topological zeta.
#[pyclass(frozen)]
struct TopZeta {
    inner: cone_zeta::topological::TopZeta,
}

#[pymethods]
impl TopZeta {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("TopZeta({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Decomposition-to-zeta pipeline over one set of resolution data.
#[pyclass(frozen)]
struct Pipeline {
    inner: ZetaPipeline,
}

impl Pipeline {
    fn top(&self) -> PyResult<TopZeta> {
        let inner = top_zeta_direct(
            self.inner.resolution(),
            self.inner.decomposition(),
            self.inner.edges(),
        )
        .map_err(err)?;
        Ok(TopZeta { inner })
    }
}

#[pymethods]
impl Pipeline {
    /// Lattice rank used to normalize the counting zeta, when known.
    fn rank(&self) -> Option<usize> {
        self.inner.rank()
    }

    /// The open simplicial pieces, one dict per piece: generator vectors,
    /// supporting divisor set, per-generator `(A, B)` constants, and the
    /// stratum class.
    fn pieces<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let mut rows = Vec::new();
        for piece in self.inner.assembly().pieces() {
            let d = PyDict::new(py);
            d.set_item("generators", piece.generators().to_vec())?;
            d.set_item(
                "support",
                piece.support().iter().copied().collect::<Vec<_>>(),
            )?;
            d.set_item("constants", piece.constants().to_vec())?;
            d.set_item("class", piece.class().to_string())?;
            rows.push(d);
        }
        PyList::new(py, rows)
    }

    /// Edge generators with their `(A, B)` constants.
    fn edges(&self) -> Vec<(Vec<i64>, (i64, i64))> {
        self.inner
            .edges()
            .iter()
            .map(|(e, ab)| (e.clone(), ab))
            .collect()
    }

    /// The assembled motivic integral, normalized by the unit-group factor
    /// when the rank is known.
    fn zeta_geom(&self) -> Motivic {
        Motivic {
            inner: self.inner.geom(),
        }
    }

    /// The counting zeta `P(T)`; requires the rank.
    fn counting(&self) -> PyResult<Motivic> {
        let inner = self.inner.counting().map_err(err)?;
        Ok(Motivic { inner })
    }

    /// The topological zeta as a rational function of `s`.
    fn zeta_top(&self) -> PyResult<TopZeta> {
        self.top()
    }
}

/// Registry names of the built-in example algebras.
#[pyfunction]
fn examples() -> Vec<&'static str> {
    io::example_names()
}

/// Build the pipeline for a built-in example algebra.
#[pyfunction]
#[pyo3(signature = (name, rank = None, mode = "sub"))]
fn pipeline(name: &str, rank: Option<usize>, mode: &str) -> PyResult<Pipeline> {
    let a = io::builtin_algebra(name).map_err(err)?;
    let data = to_cone_data(&a, parse_mode(mode)?).map_err(err)?;
    let rank = rank.or(Some(a.dim()));
    let inner = ZetaPipeline::from_monomial_data(data, rank).map_err(err)?;
    Ok(Pipeline { inner })
}

/// Build a pipeline from JSON text: a Lie algebra, cone integral data, or
/// resolution data document.
#[pyfunction]
#[pyo3(signature = (text, rank = None, mode = "sub"))]
fn pipeline_from_json(text: &str, rank: Option<usize>, mode: &str) -> PyResult<Pipeline> {
    let inner = match io::sniff_input(text).map_err(err)? {
        AnyInput::Algebra(a) => {
            let data = to_cone_data(&a, parse_mode(mode)?).map_err(err)?;
            ZetaPipeline::from_monomial_data(data, rank.or(Some(a.dim()))).map_err(err)?
        }
        AnyInput::ConeData(data) => ZetaPipeline::from_monomial_data(data, rank).map_err(err)?,
        AnyInput::Resolution(r) => ZetaPipeline::from_resolution(r, rank).map_err(err)?,
        AnyInput::Cone(_) => {
            return Err(PyValueError::new_err(
                "a bare cone has no integrand; provide cone integral data, \
                 resolution data, or a Lie algebra",
            ))
        }
    };
    Ok(Pipeline { inner })
}

/// Topological zeta of a built-in example, falling back to its stored
/// resolution data when the valuation conditions are not monomial.
#[pyfunction]
fn zeta_top(name: &str) -> PyResult<TopZeta> {
    let a = io::builtin_algebra(name).map_err(err)?;
    let data = to_cone_data(&a, BracketMode::Subalgebra).map_err(err)?;
    let pipe = if data.is_monomial() {
        ZetaPipeline::from_monomial_data(data, Some(a.dim())).map_err(err)?
    } else {
        let r = io::builtin_resolution(name).map_err(err)?.ok_or_else(|| {
            PyValueError::new_err(format!(
                "example \"{name}\" has non-monomial conditions and no stored resolution data"
            ))
        })?;
        ZetaPipeline::from_resolution(r, Some(a.dim())).map_err(err)?
    };
    Pipeline { inner: pipe }.top()
}

/// Count index-`p^n` subalgebras (or ideals) of a built-in example by
/// direct Hermite-normal-form enumeration.
#[pyfunction]
#[pyo3(signature = (name, p, n, mode = "sub"))]
fn count_subalgebras(name: &str, p: i64, n: u32, mode: &str) -> PyResult<u64> {
    let a = io::builtin_algebra(name).map_err(err)?;
    oracle::count_subalgebras(&a, p, n, parse_mode(mode)?).map_err(err)
}

/// The same count for a Lie algebra given as JSON text.
#[pyfunction]
#[pyo3(signature = (text, p, n, mode = "sub"))]
fn count_subalgebras_json(text: &str, p: i64, n: u32, mode: &str) -> PyResult<u64> {
    let a = io::algebra_from_json(text).map_err(err)?;
    oracle::count_subalgebras(&a, p, n, parse_mode(mode)?).map_err(err)
}

/// Count index-`q^n` submodules of the rank-2 module over `F_q[[t]]`.
#[pyfunction]
fn count_submodules_fqt(q: usize, n: u32) -> PyResult<u64> {
    oracle::count_submodules_fqt(q, n).map_err(err)
}

#[pymodule]
fn cone_zeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<LaurentPoly>()?;
    m.add_class::<Motivic>()?;
    m.add_class::<RationalFunction>()?;
    m.add_class::<TopZeta>()?;
    m.add_class::<Pipeline>()?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add_function(wrap_pyfunction!(pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(pipeline_from_json, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_top, m)?)?;
    m.add_function(wrap_pyfunction!(count_subalgebras, m)?)?;
    m.add_function(wrap_pyfunction!(count_subalgebras_json, m)?)?;
    m.add_function(wrap_pyfunction!(count_submodules_fqt, m)?)?;
    Ok(())
}
