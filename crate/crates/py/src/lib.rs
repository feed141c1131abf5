//! Python bindings. Exact values come back as `fractions.Fraction`, values
//! from the pmf backend as `float`. Thresholds may be given as `int`, `str`
//! (`"3/2"`, `"0.25"`), `Fraction` or `float`.

use infoclust::featsel::{FeatureProblem as Problem, PpResult};
use infoclust::{
    with_source, ClusterSet, DualityReport, Error, GroundSet, ModelDocument, Number, Partition, PspResult,
    RelaxResult, Scalar, SourceModel, Subset,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(infoclust_py, InfoclustError, PyValueError);

fn err(e: Error) -> PyErr {
    InfoclustError::new_err(e.to_string())
}

fn number<'py>(py: Python<'py>, v: &impl Scalar) -> PyResult<Bound<'py, PyAny>> {
    match v.to_number() {
        Number::Float(f) => Ok(f.into_pyobject(py)?.into_any()),
        exact => py.import("fractions")?.getattr("Fraction")?.call1((exact.to_string(),)),
    }
}

fn numbers<'py, V: Scalar>(py: Python<'py>, vs: &[V]) -> PyResult<Bound<'py, PyList>> {
    let out = vs.iter().map(|v| number(py, v)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, out)
}

fn gamma<V: Scalar>(g: &Bound<'_, PyAny>) -> PyResult<V> {
    let text = g.str()?.to_string();
    infoclust::scalar::parse_scalar(&text).map_err(err)
}

fn names<'py>(py: Python<'py>, ground: &GroundSet, b: Subset) -> PyResult<Bound<'py, PyAny>> {
    Ok(ground.subset_names(b).into_pyobject(py)?.into_any())
}

fn sets<'py>(py: Python<'py>, ground: &GroundSet, bs: &[Subset]) -> PyResult<Bound<'py, PyList>> {
    PyList::new(py, bs.iter().map(|&b| ground.subset_names(b)))
}

fn partition<'py>(py: Python<'py>, ground: &GroundSet, p: &Partition) -> PyResult<Bound<'py, PyList>> {
    sets(py, ground, p.blocks())
}

fn subset(ground: &GroundSet, vars: Vec<String>) -> PyResult<Subset> {
    ground.subset(vars.iter().map(String::as_str)).map_err(err)
}

fn cluster_list<'py, V>(py: Python<'py>, ground: &GroundSet, c: &ClusterSet<V>) -> PyResult<Bound<'py, PyList>> {
    sets(py, ground, &c.clusters)
}

fn psp_dict<'py, V: Scalar>(py: Python<'py>, ground: &GroundSet, r: &PspResult<V>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("critical_values", numbers(py, &r.critical_values)?)?;
    let chain = r.partitions.iter().map(|p| partition(py, ground, p)).collect::<PyResult<Vec<_>>>()?;
    d.set_item("partitions", chain)?;
    d.set_item("intercepts", numbers(py, &r.intercepts)?)?;
    Ok(d)
}

fn family<'py>(py: Python<'py>, ground: &GroundSet, f: &Option<Vec<Subset>>) -> PyResult<Bound<'py, PyAny>> {
    match f {
        Some(f) => Ok(sets(py, ground, f)?.into_any()),
        None => Ok(py.None().into_bound(py)),
    }
}

fn relax_dict<'py, V: Scalar>(py: Python<'py>, ground: &GroundSet, r: &RelaxResult<V>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("gamma", number(py, &r.gamma)?)?;
    d.set_item("value", number(py, &r.value)?)?;
    d.set_item("minimal", names(py, ground, r.minimal)?)?;
    d.set_item("maximal", names(py, ground, r.maximal)?)?;
    d.set_item("optimizers", family(py, ground, &r.optimizers)?)?;
    Ok(d)
}

fn pp_dict<'py, V: Scalar>(py: Python<'py>, ground: &GroundSet, r: &PpResult<V>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("breakpoints", numbers(py, &r.breakpoints)?)?;
    d.set_item("tangent_values", numbers(py, &r.tangent_values)?)?;
    let mut regions = Vec::new();
    for x in &r.regions {
        let e = PyDict::new(py);
        e.set_item("lower", x.lower.as_ref().map(|v| number(py, v)).transpose()?)?;
        e.set_item("upper", x.upper.as_ref().map(|v| number(py, v)).transpose()?)?;
        e.set_item("minimal", names(py, ground, x.minimal)?)?;
        e.set_item("maximal", names(py, ground, x.maximal)?)?;
        e.set_item("optimizers", family(py, ground, &x.optimizers)?)?;
        regions.push(e);
    }
    d.set_item("regions", regions)?;
    let at = r.at_breakpoints.iter().map(|x| relax_dict(py, ground, x)).collect::<PyResult<Vec<_>>>()?;
    d.set_item("at_breakpoints", at)?;
    Ok(d)
}

fn duality_dict<'py, V: Scalar>(py: Python<'py>, ground: &GroundSet, r: &DualityReport<V>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("gamma", number(py, &r.gamma)?)?;
    d.set_item("passed", r.passed)?;
    d.set_item("independent", r.independent)?;
    d.set_item("forward_witnesses", sets(py, ground, &r.forward_witnesses())?)?;
    d.set_item("backward_witnesses", sets(py, ground, &r.backward_witnesses())?)?;
    Ok(d)
}

/// A validated source model.
#[pyclass(module = "infoclust_py", frozen)]
struct Model {
    model: SourceModel,
    dependent: Option<String>,
}

impl Model {
    fn from_document(doc: ModelDocument) -> PyResult<Self> {
        let model = doc.build().map_err(err)?;
        Ok(Model { model, dependent: doc.dependent().map(str::to_string) })
    }

    fn ground(&self) -> &GroundSet {
        self.model.ground()
    }
}

#[pymethods]
impl Model {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::from_document(ModelDocument::from_json(text).map_err(err)?)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Self::from_document(ModelDocument::load(path).map_err(err)?)
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.ground().names().to_vec()
    }

    #[getter]
    fn dependent(&self) -> Option<String> {
        self.dependent.clone()
    }

    #[getter]
    fn backend(&self) -> &'static str {
        self.model.backend_name()
    }

    #[getter]
    fn exact(&self) -> bool {
        self.model.kind() == infoclust::ScalarKind::ExactRational
    }

    /// Semantic warnings and errors, one string each.
    fn validate(&self) -> Vec<String> {
        self.model.validate().iter().map(ToString::to_string).collect()
    }

    fn entropy<'py>(&self, py: Python<'py>, vars: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        let b = subset(self.ground(), vars)?;
        with_source!(&self.model, h => number(py, &infoclust::entropy(h, b).map_err(err)?))
    }

    fn mutual_information<'py>(&self, py: Python<'py>, a: Vec<String>, b: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        let (a, b) = (subset(self.ground(), a)?, subset(self.ground(), b)?);
        with_source!(&self.model, h => number(py, &infoclust::mutual_information(h, a, b).map_err(err)?))
    }

    fn conditional_entropy<'py>(&self, py: Python<'py>, a: Vec<String>, given: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        let (a, b) = (subset(self.ground(), a)?, subset(self.ground(), given)?);
        with_source!(&self.model, h => number(py, &infoclust::conditional_entropy(h, a, b).map_err(err)?))
    }

    fn mmi<'py>(&self, py: Python<'py>, vars: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        let b = subset(self.ground(), vars)?;
        with_source!(&self.model, h => number(py, &infoclust::mmi(h, b).map_err(err)?))
    }

    /// `(value, finest optimal partition)` of the truncation at `gamma`.
    fn dilworth_truncation<'py>(&self, py: Python<'py>, gamma: &Bound<'py, PyAny>) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyList>)> {
        with_source!(&self.model, h => {
            let r = infoclust::dilworth_truncation(h, &self::gamma(gamma)?).map_err(err)?;
            Ok((number(py, &r.value)?, partition(py, self.ground(), &r.finest)?))
        })
    }

    fn psp<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        with_source!(&self.model, h => psp_dict(py, self.ground(), &infoclust::psp(h).map_err(err)?))
    }

    fn clusters<'py>(&self, py: Python<'py>, gamma: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyList>> {
        with_source!(&self.model, h => {
            cluster_list(py, self.ground(), &infoclust::clusters(h, &self::gamma(gamma)?).map_err(err)?)
        })
    }

    fn extended_clusters<'py>(&self, py: Python<'py>, gamma: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyList>> {
        with_source!(&self.model, h => {
            cluster_list(py, self.ground(), &infoclust::extended_clusters(h, &self::gamma(gamma)?).map_err(err)?)
        })
    }

    /// Feature-selection view with `dependent` (default: the document's) as the target.
    #[pyo3(signature = (dependent=None))]
    fn features(&self, dependent: Option<String>) -> PyResult<FeatureProblem> {
        let dep = dependent.or_else(|| self.dependent.clone()).ok_or_else(|| {
            err(Error::PreconditionViolated("the model names no dependent variable".into()))
        })?;
        let lifted = self.model.lift(&dep).map_err(err)?;
        with_source!(&lifted, h => Problem::new(h).map(drop).map_err(err))?;
        Ok(FeatureProblem { lifted })
    }

    fn __repr__(&self) -> String {
        format!("Model(backend={:?}, variables={:?})", self.backend(), self.variables())
    }
}

/// A model with the target variable moved to the front.
#[pyclass(module = "infoclust_py", frozen)]
struct FeatureProblem {
    lifted: SourceModel,
}

macro_rules! with_problem {
    ($self:ident, $p:ident => $body:expr) => {
        with_source!(&$self.lifted, h => {
            let $p = Problem::new(h).map_err(err)?;
            $body
        })
    };
}

#[pymethods]
impl FeatureProblem {
    #[getter]
    fn target(&self) -> String {
        self.lifted.ground().name(0).to_string()
    }

    #[getter]
    fn features(&self) -> Vec<String> {
        self.lifted.ground().names()[1..].to_vec()
    }

    #[getter]
    fn independent(&self) -> PyResult<bool> {
        with_problem!(self, p => Ok(p.features_independent()))
    }

    /// I(target; vars).
    fn objective<'py>(&self, py: Python<'py>, vars: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        let b = subset(self.lifted.ground(), vars)?;
        with_problem!(self, p => number(py, &infoclust::objective(&p, b).map_err(err)?))
    }

    fn select<'py>(&self, py: Python<'py>, gamma: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
        with_problem!(self, p => {
            relax_dict(py, self.lifted.ground(), &infoclust::relax_optimize(&p, &self::gamma(gamma)?).map_err(err)?)
        })
    }

    /// `(best value, all maximisers)` among feature sets of size `k`.
    fn select_size<'py>(&self, py: Python<'py>, k: usize) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyList>)> {
        with_problem!(self, p => {
            let r = infoclust::size_constrained(&p, k).map_err(err)?;
            Ok((number(py, &r.value)?, sets(py, self.lifted.ground(), &r.argmax)?))
        })
    }

    fn pp<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        with_problem!(self, p => pp_dict(py, self.lifted.ground(), &infoclust::pp(&p).map_err(err)?))
    }

    fn duality<'py>(&self, py: Python<'py>, gamma: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
        with_problem!(self, p => {
            duality_dict(py, self.lifted.ground(), &infoclust::verify_duality(&p, &self::gamma(gamma)?).map_err(err)?)
        })
    }

    fn sweep_duality<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        with_problem!(self, p => {
            let reports = infoclust::sweep_duality(&p).map_err(err)?;
            reports.iter().map(|r| duality_dict(py, self.lifted.ground(), r)).collect()
        })
    }

    fn __repr__(&self) -> String {
        format!("FeatureProblem(target={:?}, features={:?})", self.target(), self.features())
    }
}

#[pymodule]
fn infoclust_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<FeatureProblem>()?;
    m.add("InfoclustError", m.py().get_type::<InfoclustError>())?;
    Ok(())
}
