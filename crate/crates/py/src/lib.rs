//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may be `int`, `Fraction` or `"p/q"` strings, never floats.

use dhlab_cli::commands::{compute as compute_report, parse_input};
use dhlab_cli::document::ReportDocument;
use dhlab_cli::{CliError, Options};
use dhlab_core::dhcore::{log_concavity_verdict, DHProfile};
use dhlab_core::exactlin::{self, IntegerSymmetricForm};
use dhlab_core::polycert::{logconcavity_defect, sign_on_interval, Interval, Polynomial};
use dhlab_core::rational::format_rational;
use dhlab_core::{parse_rational, Rational};
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyString};
use serde_json::{json, Value};

create_exception!(dhlab, DhlabError, PyValueError);

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(q),))
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if obj.is_instance_of::<PyFloat>() {
        return Err(PyTypeError::new_err("floats are not accepted; use int, Fraction or \"p/q\""));
    }
    let text: String = obj.str()?.extract()?;
    parse_rational(&text).ok_or_else(|| PyValueError::new_err(format!("not a rational: {text:?}")))
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

fn cli_error(e: CliError) -> PyErr {
    DhlabError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

fn run_document<'py>(py: Python<'py>, document: &Value) -> PyResult<Bound<'py, PyAny>> {
    let doc = parse_input(&document.to_string()).map_err(cli_error)?;
    let body = compute_report(&doc, &Options::default()).map_err(cli_error)?;
    let report = serde_json::to_value(ReportDocument::new(body)).expect("reports serialize");
    json_to_py(py, &report["report"]["result"])
}

fn form_json(form: &[Vec<i64>]) -> Value {
    json!(form)
}

fn q_json(values: &[Rational]) -> Value {
    values.iter().map(|q| Value::String(format_rational(q))).collect()
}

#[pyclass(name = "Inertia", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyInertia {
    #[pyo3(get)]
    b_plus: usize,
    #[pyo3(get)]
    b_minus: usize,
    #[pyo3(get)]
    b_zero: usize,
    #[pyo3(get)]
    signature: i64,
}

#[pymethods]
impl PyInertia {
    fn __repr__(&self) -> String {
        format!(
            "Inertia(b_plus={}, b_minus={}, b_zero={}, signature={})",
            self.b_plus, self.b_minus, self.b_zero, self.signature
        )
    }

    fn as_tuple(&self) -> (usize, usize, usize, i64) {
        (self.b_plus, self.b_minus, self.b_zero, self.signature)
    }
}

/// Exact univariate polynomial with rational coefficients, constant first.
#[pyclass(name = "Polynomial", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPolynomial(Polynomial);

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(Self(Polynomial::new(rationals(&coeffs)?)))
    }

    #[getter]
    fn coeffs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.coeffs().iter().map(|c| fraction(py, c)).collect()
    }

    #[getter]
    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn __call__<'py>(&self, py: Python<'py>, t: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.evaluate(&rational(t)?))
    }

    fn derivative(&self) -> Self {
        Self(self.0.derivative())
    }

    /// `f'' f - f'^2`.
    fn defect(&self) -> Self {
        Self(logconcavity_defect(&self.0))
    }

    /// Sturm sign certificate on the open interval; `None` bounds are infinite.
    #[pyo3(signature = (lower=None, upper=None))]
    fn sign_on(&self, lower: Option<Bound<'_, PyAny>>, upper: Option<Bound<'_, PyAny>>) -> PyResult<&'static str> {
        let interval = interval(lower.as_ref(), upper.as_ref())?;
        Ok(sign_on_interval(&self.0, &interval).kind.name())
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

fn interval(lower: Option<&Bound<'_, PyAny>>, upper: Option<&Bound<'_, PyAny>>) -> PyResult<Interval> {
    let lower = lower.map(rational).transpose()?;
    let upper = upper.map(rational).transpose()?;
    Interval::new(lower, upper).map_err(|e| DhlabError::new_err(e.to_string()))
}

/// Inertia of an integer symmetric matrix.
#[pyfunction]
fn inertia(form: Vec<Vec<i64>>) -> PyResult<PyInertia> {
    let form = IntegerSymmetricForm::new(form).map_err(|e| DhlabError::new_err(e.to_string()))?;
    let i = exactlin::inertia(&form);
    Ok(PyInertia {
        b_plus: i.b_plus,
        b_minus: i.b_minus,
        b_zero: i.b_zero,
        signature: i.signature,
    })
}

/// Non-log-concave density built from `form` (b+ > 1) and an integral
/// class `omega0` with positive square. Returns the report as a dict.
#[pyfunction]
fn counterexample<'py>(py: Python<'py>, form: Vec<Vec<i64>>, omega0: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let payload = json!({"form": form_json(&form), "omega0": q_json(&rationals(&omega0)?)});
    run_document(py, &json!({"version": "1", "kind": "counterexample", "payload": payload}))
}

/// Log-concavity verdict name for `(lower, upper, Polynomial)` pieces.
#[pyfunction]
#[pyo3(signature = (pieces, walls=Vec::new()))]
fn dh_verdict(
    pieces: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>, PyPolynomial)>,
    walls: Vec<Bound<'_, PyAny>>,
) -> PyResult<&'static str> {
    let pieces = pieces
        .iter()
        .map(|(lo, hi, p)| {
            let lo = (!lo.is_none()).then_some(lo);
            let hi = (!hi.is_none()).then_some(hi);
            Ok((interval(lo, hi)?, p.0.clone()))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let profile = DHProfile::new(pieces, rationals(&walls)?).map_err(|e| DhlabError::new_err(e.to_string()))?;
    Ok(log_concavity_verdict(&profile).verdict.name())
}

/// Any input document (a dict or JSON text); returns the report result dict.
#[pyfunction]
fn compute<'py>(py: Python<'py>, document: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text: String = if document.is_instance_of::<PyString>() {
        document.extract()?
    } else if document.is_instance_of::<PyDict>() {
        py.import("json")?.call_method1("dumps", (document,))?.extract()?
    } else {
        return Err(PyTypeError::new_err("document must be a dict or a JSON string"));
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| DhlabError::new_err(e.to_string()))?;
    run_document(py, &value)
}

/// Wall-crossing propagation for a `wallcross_spec` payload dict.
#[pyfunction]
fn walls<'py>(py: Python<'py>, payload: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyAny>> {
    let document = PyDict::new(py);
    document.set_item("version", "1")?;
    document.set_item("kind", "wallcross_spec")?;
    document.set_item("payload", payload)?;
    compute(py, document.as_any())
}

/// Hard Lefschetz checks for a simply connected base with form `form`.
#[pyfunction]
#[pyo3(signature = (form, omega0, beta2=None, beta4=None, epsilon=None, bound=1000))]
fn hard_lefschetz<'py>(
    py: Python<'py>,
    form: Vec<Vec<i64>>,
    omega0: Vec<Bound<'py, PyAny>>,
    beta2: Option<Vec<Bound<'py, PyAny>>>,
    beta4: Option<Bound<'py, PyAny>>,
    epsilon: Option<Bound<'py, PyAny>>,
    bound: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let mut payload = json!({
        "ring": {"b1": 0, "form": form_json(&form)},
        "omega0": q_json(&rationals(&omega0)?),
        "bound": bound,
    });
    if let Some(b) = beta2 {
        payload["beta2"] = q_json(&rationals(&b)?);
    }
    if let Some(b) = beta4 {
        payload["beta4"] = Value::String(format_rational(&rational(&b)?));
    }
    if let Some(e) = epsilon {
        payload["epsilon"] = Value::String(format_rational(&rational(&e)?));
    }
    run_document(py, &json!({"version": "1", "kind": "hl_data", "payload": payload}))
}

#[pymodule]
fn dhlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DhlabError", m.py().get_type::<DhlabError>())?;
    m.add_class::<PyInertia>()?;
    m.add_class::<PyPolynomial>()?;
    m.add_function(wrap_pyfunction!(inertia, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(dh_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    m.add_function(wrap_pyfunction!(walls, m)?)?;
    m.add_function(wrap_pyfunction!(hard_lefschetz, m)?)?;
    Ok(())
}
