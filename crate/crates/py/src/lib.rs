//! Python bindings. Infinite values come back as `math.inf`, finite ones as `int`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use limitgame::gen::{gen_random_instance, GenParams};
use limitgame::graph::{GameGraph, Lasso};
use limitgame::oracle::{eval_limit_value, eval_reach_value};
use limitgame::product::build_product;
use limitgame::rank::Rank;
use limitgame::report::{self, SolveReport};
use limitgame::text;
use limitgame::verify::{run_suite, Criterion};

fn value_err(e: limitgame::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rank_to_py(py: Python<'_>, r: Rank) -> PyResult<Py<PyAny>> {
    Ok(match r {
        Rank::Finite(k) => k.into_pyobject(py)?.into_any().unbind(),
        Rank::Infinity => f64::INFINITY.into_pyobject(py)?.into_any().unbind(),
    })
}

#[pyclass(module = "limitgame", frozen)]
struct Arena(limitgame::Arena);

#[pymethods]
impl Arena {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text::parse_arena(text).map(Arena).map_err(value_err)
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.0.vertices().iter().map(|v| v.id.clone()).collect()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.0.num_edges()
    }

    fn to_text(&self) -> String {
        text::write_arena(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.num_vertices()
    }

    fn __repr__(&self) -> String {
        format!("Arena({} vertices, {} edges)", self.0.num_vertices(), self.0.num_edges())
    }
}

#[pyclass(module = "limitgame", frozen)]
struct Dfa(limitgame::Dfa);

#[pymethods]
impl Dfa {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text::parse_dfa(text).map(Dfa).map_err(value_err)
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.0.num_states()
    }

    fn to_text(&self) -> String {
        text::write_dfa(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Dfa({} states)", self.0.num_states())
    }
}

/// Result of `solve` or `solve_reach`.
#[pyclass(module = "limitgame", frozen)]
struct Report(SolveReport);

#[pymethods]
impl Report {
    /// Vertex id to value.
    #[getter]
    fn values<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for r in &self.0.values {
            d.set_item(&r.vertex, rank_to_py(py, r.value)?)?;
        }
        Ok(d)
    }

    /// Vertices with a finite value.
    #[getter]
    fn winning_region(&self) -> Vec<String> {
        self.0.values.iter().filter(|r| r.value.is_finite()).map(|r| r.vertex.clone()).collect()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.0.diagnostics.iterations
    }

    fn value(&self, py: Python<'_>, vertex: &str) -> PyResult<Py<PyAny>> {
        let r = self
            .0
            .value_of(vertex)
            .ok_or_else(|| PyValueError::new_err(format!("unknown vertex {vertex}")))?;
        rank_to_py(py, r)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (arena, dfa, strategies = false))]
fn solve(py: Python<'_>, arena: &Arena, dfa: &Dfa, strategies: bool) -> PyResult<Report> {
    py.detach(|| report::solve(&arena.0, &dfa.0, strategies))
        .map(|o| Report(o.report))
        .map_err(value_err)
}

#[pyfunction]
fn solve_reach(py: Python<'_>, arena: &Arena, dfa: &Dfa) -> PyResult<Report> {
    py.detach(|| report::solve_reach(&arena.0, &dfa.0)).map(Report).map_err(value_err)
}

/// Value of the play `stem` followed by `cycle` repeated forever.
#[pyfunction]
#[pyo3(signature = (arena, dfa, stem, cycle, reach = false))]
fn eval_lasso(
    py: Python<'_>,
    arena: &Arena,
    dfa: &Dfa,
    stem: Vec<String>,
    cycle: Vec<String>,
    reach: bool,
) -> PyResult<Py<PyAny>> {
    if cycle.is_empty() {
        return Err(PyValueError::new_err("cycle must name at least one vertex"));
    }
    let a = &arena.0;
    let value = (|| {
        let lasso = Lasso::new(a.resolve_ids(&stem)?, a.resolve_ids(&cycle)?);
        let p = build_product(a, &dfa.0)?;
        let lifted = p.lift_lasso(&lasso)?;
        if reach {
            eval_reach_value(&p, &lifted)
        } else {
            eval_limit_value(&p, &lifted)
        }
    })()
    .map_err(value_err)?;
    rank_to_py(py, value)
}

#[pyfunction]
#[pyo3(signature = (seed, max_vertices = 6, max_dfa_states = 4, max_out_degree = 3, max_weight = 5, accepting_fraction = 0.5))]
fn generate(
    seed: u64,
    max_vertices: usize,
    max_dfa_states: usize,
    max_out_degree: usize,
    max_weight: u64,
    accepting_fraction: f64,
) -> PyResult<(Arena, Dfa)> {
    let params = GenParams {
        max_vertices,
        max_dfa_states,
        max_out_degree,
        max_weight,
        accepting_fraction,
        seed,
    };
    let (a, d) = gen_random_instance(&params).map_err(value_err)?;
    Ok((Arena(a), Dfa(d)))
}

/// Runs the randomized verification suite. Returns a dict with `instances`,
/// `matched` and `criteria`, the latter mapping each criterion number to its
/// list of findings.
#[pyfunction]
#[pyo3(signature = (trials = 100, seed = 0))]
fn verify<'py>(py: Python<'py>, trials: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let params = GenParams { seed, ..GenParams::default() };
    let summary = py.detach(|| run_suite(&params, trials)).map_err(value_err)?;
    let criteria = PyDict::new(py);
    for c in Criterion::ALL {
        criteria.set_item(c.number(), summary.findings.get(&c).cloned().unwrap_or_default())?;
    }
    let d = PyDict::new(py);
    d.set_item("instances", summary.instances)?;
    d.set_item("matched", summary.matched)?;
    d.set_item("criteria", criteria)?;
    Ok(d)
}

#[pymodule(name = "limitgame")]
fn limitgame_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Arena>()?;
    m.add_class::<Dfa>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_reach, m)?)?;
    m.add_function(wrap_pyfunction!(eval_lasso, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
