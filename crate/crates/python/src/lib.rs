use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use relsep::crosscheck::{run as run_crosscheck, CrosscheckConfig, Counterexample};
use relsep::query::{matrix_rows, relation_by_name, run_query, Method};
use relsep::{
    completeness_bound, d_connected_reach, exists_active_path_bounded, morally_blocked, ConditionalRelations,
    VertexId, VertexSet,
};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A directed graph with named vertices. Loops and cycles are allowed.
#[pyclass(name = "Graph", module = "relsep", frozen)]
struct PyGraph {
    inner: relsep::Graph,
}

impl PyGraph {
    fn id(&self, name: &str) -> PyResult<VertexId> {
        self.inner.vertex(name).map_err(err)
    }

    fn set(&self, names: Vec<String>) -> PyResult<VertexSet> {
        self.inner.vertex_set(names.iter().map(String::as_str)).map_err(err)
    }
}

#[pymethods]
impl PyGraph {
    /// Parse the edge-list format (`a -> b`, `node z`, `#` comments).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        relsep::Graph::parse_edge_list(text).map(|inner| PyGraph { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_edges(edges: Vec<(String, String)>) -> Self {
        let pairs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        PyGraph { inner: relsep::Graph::from_edges(&pairs) }
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String)> {
        self.inner
            .edges()
            .pairs()
            .map(|(b, c)| (self.inner.name(b).to_string(), self.inner.name(c).to_string()))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Graph({} vertices, {} edges)", self.inner.len(), self.inner.edges().len())
    }

    /// Ancestral closure: every vertex with a directed path into `given`.
    fn ancestral_closure(&self, given: Vec<String>) -> PyResult<Vec<String>> {
        let w = self.set(given)?;
        Ok(self.inner.set_names(&self.inner.ancestral_closure(&w)).into_iter().map(String::from).collect())
    }

    #[pyo3(signature = (x, y, given = Vec::new()))]
    fn d_separated(&self, x: &str, y: &str, given: Vec<String>) -> PyResult<bool> {
        let (x, y, w) = (self.id(x)?, self.id(y)?, self.set(given)?);
        relsep::d_separated(&self.inner, x, y, &w).map_err(err)
    }

    #[pyo3(signature = (sources, targets, given = Vec::new()))]
    fn d_separated_sets(&self, sources: Vec<String>, targets: Vec<String>, given: Vec<String>) -> PyResult<bool> {
        let (b, c, w) = (self.set(sources)?, self.set(targets)?, self.set(given)?);
        relsep::d_separated_sets(&self.inner, &b, &c, &w).map_err(err)
    }

    #[pyo3(signature = (x, y, given = Vec::new()))]
    fn d_connected_reach(&self, x: &str, y: &str, given: Vec<String>) -> PyResult<bool> {
        let (x, y, w) = (self.id(x)?, self.id(y)?, self.set(given)?);
        Ok(d_connected_reach(&self.inner, x, y, &w))
    }

    /// Bounded search for an active path; `max_len` defaults to `2|V|+2`.
    #[pyo3(signature = (x, y, given = Vec::new(), max_len = None))]
    fn exists_active_path(&self, x: &str, y: &str, given: Vec<String>, max_len: Option<usize>) -> PyResult<bool> {
        let (x, y, w) = (self.id(x)?, self.id(y)?, self.set(given)?);
        let len = max_len.unwrap_or_else(|| completeness_bound(self.inner.len()));
        Ok(exists_active_path_bounded(&self.inner, x, y, &w, len))
    }

    #[pyo3(signature = (sources, targets, given = Vec::new()))]
    fn morally_blocked(&self, sources: Vec<String>, targets: Vec<String>, given: Vec<String>) -> PyResult<bool> {
        let (b, c, w) = (self.set(sources)?, self.set(targets)?, self.set(given)?);
        morally_blocked(&self.inner, &b, &c, &w).map_err(err)
    }

    /// Active path as `(tail, head, orient)` triples, or `None` when separated.
    #[pyo3(signature = (x, y, given = Vec::new()))]
    fn witness(&self, x: &str, y: &str, given: Vec<String>) -> PyResult<Option<Vec<(String, String, i8)>>> {
        let (x, y, w) = (self.id(x)?, self.id(y)?, self.set(given)?);
        let rel = ConditionalRelations::new(&self.inner, &w).map_err(err)?;
        Ok(rel.witness(&self.inner, x, y).map(|p| {
            p.to_records(&self.inner)
                .into_iter()
                .map(|r| (r.tail, r.head, r.orient))
                .collect()
        }))
    }

    #[pyo3(signature = (x, y, given = Vec::new()))]
    fn witness_text(&self, x: &str, y: &str, given: Vec<String>) -> PyResult<Option<String>> {
        let (x, y, w) = (self.id(x)?, self.id(y)?, self.set(given)?);
        let rel = ConditionalRelations::new(&self.inner, &w).map_err(err)?;
        Ok(rel.witness(&self.inner, x, y).map(|p| p.display(&self.inner).to_string()))
    }

    /// Named relation as a row-major 0/1 matrix over `names`.
    #[pyo3(signature = (which, given = Vec::new()))]
    fn relation(&self, which: &str, given: Vec<String>) -> PyResult<Vec<Vec<u32>>> {
        let w = self.set(given)?;
        let r = relation_by_name(&self.inner, &w, which).map_err(err)?;
        // u8 rows would surface as `bytes`
        Ok(matrix_rows(&r).into_iter().map(|row| row.into_iter().map(u32::from).collect()).collect())
    }

    /// Runs the chosen methods and returns the report as a dict.
    #[pyo3(signature = (x, y, given = Vec::new(), methods = vec!["relational".to_string(), "reachability".to_string()], max_len = None))]
    fn query<'py>(
        &self,
        py: Python<'py>,
        x: &str,
        y: &str,
        given: Vec<String>,
        methods: Vec<String>,
        max_len: Option<usize>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let (x, y, w) = (self.id(x)?, self.id(y)?, self.set(given)?);
        let methods = methods.iter().map(|m| m.parse::<Method>()).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let report = run_query(&self.inner, x, y, &w, &methods, max_len);
        let d = PyDict::new(py);
        d.set_item("x", report.x)?;
        d.set_item("y", report.y)?;
        d.set_item("given", report.given)?;
        d.set_item("verdicts", report.verdicts)?;
        let witness: Option<Vec<(String, String, i8)>> =
            report.witness.map(|w| w.into_iter().map(|r| (r.tail, r.head, r.orient)).collect());
        d.set_item("witness", witness)?;
        d.set_item("agree", report.agree)?;
        Ok(d)
    }
}

/// Random differential test of all deciders; returns the summary as a dict.
#[pyfunction]
#[pyo3(signature = (vertices = 5, edge_prob = 0.3, trials = 100, seed = 0, max_vertices_exhaustive = None))]
fn crosscheck<'py>(
    py: Python<'py>,
    vertices: usize,
    edge_prob: f64,
    trials: u64,
    seed: u64,
    max_vertices_exhaustive: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let config = CrosscheckConfig {
        vertices,
        edge_prob,
        trials,
        seed,
        max_vertices_exhaustive,
        ..CrosscheckConfig::default()
    };
    let summary = py.detach(|| run_crosscheck(&config)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("trials", summary.trials)?;
    d.set_item("pairs_checked", summary.pairs_checked)?;
    d.set_item("disagreements", summary.disagreements)?;
    d.set_item("seed", summary.seed)?;
    d.set_item("moral_checked", summary.moral_checked)?;
    d.set_item("first_counterexample", summary.first_counterexample.map(|cx| counterexample_text(&cx)))?;
    Ok(d)
}

fn counterexample_text(cx: &Counterexample) -> String {
    format!("{}given: {:?}\nverdicts: {:?}\n", cx.graph, cx.given, cx.verdicts)
}

#[pymodule]
#[pyo3(name = "relsep")]
fn relsep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(crosscheck, m)?)?;
    m.add("RELATIONS", relsep::query::RELATION_NAMES.to_vec())?;
    Ok(())
}
