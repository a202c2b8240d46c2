//! Python bindings. Box indices are 0-based; exact values come back as
//! `fractions.Fraction`. Rewards and probabilities may be given as ints,
//! Fractions, floats (read through their decimal text) or strings.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use trapsearch::bounds;
use trapsearch::equal;
use trapsearch::io::{self, ResultFile};
use trapsearch::monte_carlo;
use trapsearch::one_uniform;
use trapsearch::oracle;
use trapsearch::partition;
use trapsearch::rational;
use trapsearch::{BoxSet, Error, GameInstance, HiderStrategy, Hypergraph, Method, Rational, SearcherStrategy};

create_exception!(trapsearch_py, TrapsearchError, PyValueError, "Invalid input or failed solve.");
create_exception!(trapsearch_py, RegimeError, TrapsearchError, "Closed form used outside its parameter range.");
create_exception!(trapsearch_py, CapacityError, TrapsearchError, "Enumeration would exceed a configured limit.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Regime(_) => RegimeError::new_err(e.to_string()),
        Error::Capacity { .. } => CapacityError::new_err(e.to_string()),
        _ => TrapsearchError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational::format(q),))
}

fn exact(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    rational::parse(&obj.str()?.to_cow()?).map_err(py_err)
}

fn boxes(set: BoxSet) -> Vec<usize> {
    set.to_vec()
}

fn to_set(items: &[usize]) -> PyResult<BoxSet> {
    if let Some(i) = items.iter().find(|&&i| i >= trapsearch::boxset::MAX_BOXES) {
        return Err(TrapsearchError::new_err(format!("box index {i} is out of range")));
    }
    Ok(items.iter().copied().collect())
}

fn atoms_from(items: Vec<(Vec<usize>, Bound<'_, PyAny>)>) -> PyResult<Vec<(BoxSet, Rational)>> {
    items.into_iter().map(|(s, p)| Ok((to_set(&s)?, exact(&p)?))).collect()
}

fn atoms_to<'py>(py: Python<'py>, atoms: &[(BoxSet, Rational)]) -> PyResult<Vec<(Vec<usize>, Bound<'py, PyAny>)>> {
    atoms.iter().map(|(s, p)| Ok((boxes(*s), fraction(py, p)?))).collect()
}

/// A booby-trap search game.
///
/// `Game(rewards, k, hypergraph="complete", boxes=None, edges=None)` where
/// `hypergraph` is "complete", "one_uniform" (searchable `boxes`, default all)
/// or "explicit" (list of `edges`).
#[pyclass(module = "trapsearch_py", frozen)]
struct Game {
    inner: GameInstance,
}

#[pymethods]
impl Game {
    #[new]
    #[pyo3(signature = (rewards, k, hypergraph = "complete", boxes = None, edges = None))]
    fn new(
        rewards: Vec<Bound<'_, PyAny>>,
        k: usize,
        hypergraph: &str,
        boxes: Option<Vec<usize>>,
        edges: Option<Vec<Vec<usize>>>,
    ) -> PyResult<Self> {
        let rewards = rewards.iter().map(exact).collect::<PyResult<Vec<_>>>()?;
        let n = rewards.len();
        let h = match hypergraph {
            "complete" => Hypergraph::Complete,
            "one_uniform" => Hypergraph::OneUniform(match boxes {
                Some(b) => to_set(&b)?,
                None => BoxSet::full(n.min(trapsearch::boxset::MAX_BOXES)),
            }),
            "explicit" => Hypergraph::Explicit(
                edges
                    .ok_or_else(|| TrapsearchError::new_err("explicit hypergraphs need edges"))?
                    .iter()
                    .map(|e| to_set(e))
                    .collect::<PyResult<_>>()?,
            ),
            other => return Err(TrapsearchError::new_err(format!("unknown hypergraph kind {other:?}"))),
        };
        GameInstance::new(rewards, k, h).map(|inner| Game { inner }).map_err(py_err)
    }

    /// Parses a JSON instance document (1-based indices, as in instance files).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_instance(text).map(|inner| Game { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        io::read_instance(path).map(|inner| Game { inner }).map_err(py_err)
    }

    fn to_json(&self) -> String {
        io::instance_to_json(&self.inner).to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn rewards<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.rewards().iter().map(|r| fraction(py, r)).collect()
    }

    /// `r(S)` if `searched` and `trapped` are disjoint, else 0.
    fn payoff<'py>(&self, py: Python<'py>, searched: Vec<usize>, trapped: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let v = trapsearch::payoff(&self.inner, to_set(&searched)?, to_set(&trapped)?).map_err(py_err)?;
        fraction(py, &v)
    }

    /// Expected payoff of two mixed strategies, each a list of `(boxes, prob)`.
    fn expected_payoff<'py>(
        &self,
        py: Python<'py>,
        searcher: Vec<(Vec<usize>, Bound<'py, PyAny>)>,
        hider: Vec<(Vec<usize>, Bound<'py, PyAny>)>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let p = SearcherStrategy::new(atoms_from(searcher)?).map_err(py_err)?;
        let q = HiderStrategy::new(atoms_from(hider)?).map_err(py_err)?;
        let v = trapsearch::expected_payoff(&self.inner, &p, &q).map_err(py_err)?;
        fraction(py, &v)
    }

    /// Solves with `method` in {"auto", "one_uniform", "equal", "k1", "n4k2", "lp"}.
    #[pyo3(signature = (method = "auto"))]
    fn solve(&self, py: Python<'_>, method: &str) -> PyResult<Solution> {
        let method = match method {
            "auto" => None,
            "one_uniform" => Some(Method::OneUniform),
            "equal" | "equal_rewards" => Some(Method::EqualRewards),
            "k1" => Some(Method::KEquals1),
            "n4k2" => Some(Method::N4K2),
            "lp" | "lp_oracle" => Some(Method::LpOracle),
            other => return Err(TrapsearchError::new_err(format!("unknown method {other:?}"))),
        };
        let inner = &self.inner;
        let solved = py.detach(|| match method {
            None => oracle::solve_any(inner),
            Some(m) => oracle::solve_with(inner, m),
        });
        solved.map(|s| Solution { inner: s }).map_err(py_err)
    }

    /// `[(t, V(t)), ...]` for a one-uniform game.
    fn value_curve<'py>(&self, py: Python<'py>) -> PyResult<Vec<(usize, Bound<'py, PyAny>)>> {
        let curve = one_uniform::value_curve(&self.inner).map_err(py_err)?;
        curve.points.iter().map(|(t, v)| Ok((*t, fraction(py, v)?))).collect()
    }

    fn upper_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &bounds::upper_bound(&self.inner))
    }

    fn lower_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &bounds::lower_bound_independent(&self.inner).map_err(py_err)?)
    }

    /// Guarantee of `edges` played with probabilities inversely proportional
    /// to their rewards: `(lambda, m, guaranteed)`.
    fn partition_bound<'py>(
        &self,
        py: Python<'py>,
        edges: Vec<Vec<usize>>,
    ) -> PyResult<(Bound<'py, PyAny>, usize, Bound<'py, PyAny>)> {
        let edges = edges.iter().map(|e| to_set(e)).collect::<PyResult<Vec<_>>>()?;
        let s = bounds::partition_bound(&self.inner, &edges).map_err(py_err)?;
        Ok((fraction(py, &s.lambda)?, s.m, fraction(py, &s.guaranteed)?))
    }

    /// Returns a dict with `lp_value`, `best`, `gap`, `consistent`, `complete`, `witness`.
    #[pyo3(signature = (max_support = 8))]
    fn check_conjecture<'py>(&self, py: Python<'py>, max_support: usize) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let inner = &self.inner;
        let r = py.detach(|| bounds::check_conjecture(inner, max_support)).map_err(py_err)?;
        let d = pyo3::types::PyDict::new(py);
        d.set_item("lp_value", fraction(py, &r.lp_value)?)?;
        d.set_item("best", fraction(py, &r.best)?)?;
        d.set_item("gap", fraction(py, &r.gap)?)?;
        d.set_item("consistent", r.is_consistent())?;
        d.set_item("complete", r.complete)?;
        let witness = r
            .witness
            .as_ref()
            .map(|w| w.edges.iter().map(|e| boxes(*e)).collect::<Vec<_>>());
        d.set_item("witness", witness)?;
        Ok(d)
    }

    /// Plays the optimal strategies `trials` times: `(mean, stderr, exact, passed)`.
    #[pyo3(signature = (trials = 1_000_000, seed = 0))]
    fn simulate<'py>(&self, py: Python<'py>, trials: u64, seed: u64) -> PyResult<(f64, f64, Bound<'py, PyAny>, bool)> {
        let inner = &self.inner;
        let r = py
            .detach(|| {
                let s = oracle::solve_any(inner)?;
                monte_carlo::simulate(inner, &s.searcher, &s.hider, trials, seed)
            })
            .map_err(py_err)?;
        Ok((r.mean, r.stderr, fraction(py, &r.exact)?, r.pass()))
    }

    fn __repr__(&self) -> String {
        format!("Game({})", self.to_json())
    }
}

/// A solved game with exact optimal strategies.
#[pyclass(module = "trapsearch_py", frozen)]
struct Solution {
    inner: trapsearch::Solution,
}

#[pymethods]
impl Solution {
    #[getter]
    fn value<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.value)
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.name()
    }

    /// `[(edge, prob), ...]`, 0-based.
    #[getter]
    fn searcher<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<usize>, Bound<'py, PyAny>)>> {
        atoms_to(py, self.inner.searcher.atoms())
    }

    /// `[(trap set, prob), ...]`, 0-based.
    #[getter]
    fn hider<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<usize>, Bound<'py, PyAny>)>> {
        atoms_to(py, self.inner.hider.atoms())
    }

    #[getter]
    fn certified(&self) -> bool {
        self.inner.is_certified_optimal()
    }

    #[getter]
    fn guarantees<'py>(&self, py: Python<'py>) -> PyResult<Option<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
        match &self.inner.certificates {
            Some(c) => Ok(Some((fraction(py, &c.searcher_guarantee)?, fraction(py, &c.hider_guarantee)?))),
            None => Ok(None),
        }
    }

    /// The result file document (1-based indices).
    fn to_json(&self) -> String {
        ResultFile::from_solution(&self.inner).to_json()
    }

    fn __repr__(&self) -> String {
        format!("Solution(value={}, method={})", rational::format(&self.inner.value), self.inner.method)
    }
}

/// `(value, m_star)` for `n` boxes of equal `reward` and `k` traps.
#[pyfunction]
#[pyo3(signature = (n, k, reward = None))]
fn solve_equal<'py>(py: Python<'py>, n: u64, k: u64, reward: Option<Bound<'py, PyAny>>) -> PyResult<(Bound<'py, PyAny>, u64)> {
    let r = match reward {
        Some(r) => exact(&r)?,
        None => Rational::from_integer(1.into()),
    };
    let s = equal::solve_equal(n, k, &r).map_err(py_err)?;
    Ok((fraction(py, &s.value)?, s.m_star))
}

/// A distribution over `k`-sets whose per-box marginals equal `marginals`.
#[pyfunction]
fn rotation_mixture<'py>(
    py: Python<'py>,
    marginals: Vec<Bound<'py, PyAny>>,
    k: usize,
) -> PyResult<Vec<(Vec<usize>, Bound<'py, PyAny>)>> {
    let y = marginals.iter().map(exact).collect::<PyResult<Vec<_>>>()?;
    let mix = one_uniform::rotation_mixture(&y, k).map_err(py_err)?;
    atoms_to(py, mix.atoms())
}

/// `(side, difference)`: the canonical side of an optimal two-way split.
#[pyfunction]
fn best_partition<'py>(py: Python<'py>, rewards: Vec<Bound<'py, PyAny>>) -> PyResult<(Vec<usize>, Bound<'py, PyAny>)> {
    let r = rewards.iter().map(exact).collect::<PyResult<Vec<_>>>()?;
    let p = partition::best_partition(&r).map_err(py_err)?;
    Ok((boxes(p.s_star), fraction(py, &p.diff)?))
}

#[pymodule]
fn trapsearch_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Game>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(solve_equal, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_mixture, m)?)?;
    m.add_function(wrap_pyfunction!(best_partition, m)?)?;
    m.add("TrapsearchError", m.py().get_type::<TrapsearchError>())?;
    m.add("RegimeError", m.py().get_type::<RegimeError>())?;
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    Ok(())
}
