//! Python bindings: `import ggp`.

use ggp_core::chars::is_regular;
use ggp_core::dl::{weyl_group_data, TorusCharacter, TorusShape};
use ggp_core::fields::FieldTower;
use ggp_core::groups::DeltaChoice;
use ggp_core::mult::{self, RankConvention, DEFAULT_PAIR_SIGN};
use ggp_core::oracle::{self, Convention, OracleContext};
use ggp_core::verify::{run_suite, Suite, VerifyOptions};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn py_err(e: ggp_core::Error) -> PyErr {
    match e {
        ggp_core::Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn rank_convention(name: &str) -> PyResult<RankConvention> {
    match name {
        "kprime" => Ok(RankConvention::KPrime),
        "k" => Ok(RankConvention::K),
        _ => Err(PyValueError::new_err(format!("unknown rank convention {name:?}"))),
    }
}

fn delta_choice(name: &str) -> PyResult<DeltaChoice> {
    match name {
        "standard" => Ok(DeltaChoice::Standard),
        "alternate" => Ok(DeltaChoice::Alternate),
        _ => Err(PyValueError::new_err(format!("unknown delta choice {name:?}"))),
    }
}

/// The tower `F_q ⊂ F_{q^2} ⊂ … ⊂ F_{q^D}` inside one ambient field.
#[pyclass(name = "FieldTower", frozen)]
struct PyFieldTower(FieldTower);

#[pymethods]
impl PyFieldTower {
    #[new]
    #[pyo3(signature = (p, e=1, max_degree=4))]
    fn new(p: u64, e: u32, max_degree: u32) -> PyResult<Self> {
        FieldTower::new(p, e, max_degree).map(Self).map_err(py_err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn e(&self) -> u32 {
        self.0.e()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    #[getter]
    fn max_degree(&self) -> u32 {
        self.0.max_degree()
    }

    /// Coefficients of the ambient defining polynomial, constant term first.
    #[getter]
    fn defining_polynomial(&self) -> Vec<u64> {
        self.0.defining_polynomial()
    }

    fn supports(&self, d: u32) -> bool {
        self.0.supports(d)
    }

    /// `|F_{q^d}^×|`.
    fn mult_order(&self, d: u32) -> PyResult<u64> {
        if !self.0.supports(d) {
            return Err(PyValueError::new_err(format!("degree {d} is not in the tower")));
        }
        Ok(self.0.mult_order(d))
    }

    fn __repr__(&self) -> String {
        format!(
            "FieldTower(p={}, e={}, max_degree={})",
            self.0.p(),
            self.0.e(),
            self.0.max_degree()
        )
    }
}

/// A maximal torus of `GL_n(k_2)` up to conjugacy, `T^F = ∏_j (k_{2j}^×)^{λ_j}`.
#[pyclass(name = "TorusShape", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTorusShape(TorusShape);

#[pymethods]
impl PyTorusShape {
    #[new]
    fn new(n: u32, lambda: Vec<u32>) -> PyResult<Self> {
        TorusShape::new(n, &lambda).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn all(n: u32) -> Vec<Self> {
        ggp_core::dl::torus_shapes(n).into_iter().map(Self).collect()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn lambda_(&self) -> Vec<u32> {
        self.0.lambda().to_vec()
    }

    #[getter]
    fn rank(&self) -> u32 {
        self.0.rank()
    }

    #[getter]
    fn is_cuspidal(&self) -> bool {
        self.0.is_cuspidal()
    }

    fn weyl_order(&self) -> u64 {
        ggp_core::dl::WeylGroup::order_formula(&self.0)
    }

    /// Every character of `T^F`, or one per Weyl orbit.
    #[pyo3(signature = (q, dedup_orbits=false))]
    fn characters(&self, q: u64, dedup_orbits: bool) -> Vec<PyTorusCharacter> {
        let mut chars = TorusCharacter::all(q, &self.0);
        if dedup_orbits {
            let w = weyl_group_data(&self.0);
            chars.retain(|c| &w.canonical(c) == c);
        }
        chars.into_iter().map(PyTorusCharacter).collect()
    }

    /// Rows `{nu, mu, mu_prime, count, normalizer}` over the subtorus data of the shape.
    fn subtori<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        #[derive(Serialize)]
        struct Row<'a> {
            nu: &'a [u32],
            mu: &'a [u32],
            mu_prime: &'a [u32],
            count: u128,
            normalizer: u128,
        }
        mult::subtorus_data(&self.0)
            .iter()
            .map(|d| {
                let row = Row {
                    nu: d.nu(),
                    mu: d.mu(),
                    mu_prime: d.mu_prime(),
                    count: mult::count_subtori(&self.0, d).map_err(py_err)?,
                    normalizer: mult::normalizer_order(&self.0, d).map_err(py_err)?,
                };
                to_py(py, &row)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("TorusShape(n={}, lambda=({}))", self.0.n(), self.0.label())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// A character of `T^F`, one exponent per cyclic factor.
#[pyclass(name = "TorusCharacter", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTorusCharacter(TorusCharacter);

#[pymethods]
impl PyTorusCharacter {
    #[new]
    fn new(q: u64, shape: &PyTorusShape, exponents: Vec<u64>) -> PyResult<Self> {
        TorusCharacter::new(q, &shape.0, &exponents)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    #[getter]
    fn shape(&self) -> PyTorusShape {
        PyTorusShape(self.0.shape().clone())
    }

    #[getter]
    fn exponents(&self) -> Vec<u64> {
        self.0.exponents().to_vec()
    }

    fn is_trivial(&self) -> bool {
        self.0.is_trivial()
    }

    fn is_regular(&self) -> PyResult<bool> {
        is_regular(self.0.shape(), &self.0).map_err(py_err)
    }

    /// The index sets, the signed sum and the closed form for a regular character.
    #[pyo3(signature = (pair_sign=DEFAULT_PAIR_SIGN))]
    fn regular_multiplicity<'py>(&self, py: Python<'py>, pair_sign: i8) -> PyResult<Bound<'py, PyAny>> {
        let m = mult::regular_multiplicity(self.0.shape(), &self.0, pair_sign).map_err(py_err)?;
        to_py(py, &m)
    }

    /// The multiplicity from the general subtorus formula.
    #[pyo3(signature = (pair_sign=DEFAULT_PAIR_SIGN))]
    fn general_multiplicity(&self, pair_sign: i8) -> PyResult<i64> {
        mult::general_multiplicity(self.0.shape(), &self.0, pair_sign).map_err(py_err)
    }

    /// The dichotomy for a regular character of the anisotropic torus.
    fn cuspidal_multiplicity(&self) -> PyResult<i64> {
        mult::cuspidal_multiplicity(self.0.shape(), &self.0).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "TorusCharacter(q={}, lambda=({}), exponents={:?})",
            self.0.q(),
            self.0.shape().label(),
            self.0.exponents()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// Brute-force inner products with the Weil representation of `U_n(F_q)`, `n <= 2`.
#[pyclass(name = "Oracle", frozen)]
struct PyOracle(OracleContext);

impl PyOracle {
    fn convention(&self, psi: Option<u64>, delta: &str) -> PyResult<Convention> {
        let q = self.0.q();
        let psi = psi.unwrap_or(self.0.default_convention().psi) % q;
        if psi == 0 {
            return Err(PyValueError::new_err("ψ residue must be nonzero mod p"));
        }
        Ok(Convention {
            psi,
            delta: delta_choice(delta)?,
        })
    }
}

#[pymethods]
impl PyOracle {
    #[new]
    fn new(q: u64, n: u32) -> PyResult<Self> {
        OracleContext::new(q, n).map(Self).map_err(py_err)
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    /// `|U_n(F_q)|`.
    fn group_order(&self) -> usize {
        self.0.elements().len()
    }

    /// `⟨R_{T,χ}, ω_ψ⟩` by summing over the group.
    #[pyo3(signature = (chi, psi=None, delta="standard"))]
    fn multiplicity(
        &self,
        py: Python<'_>,
        chi: &PyTorusCharacter,
        psi: Option<u64>,
        delta: &str,
    ) -> PyResult<i64> {
        let conv = self.convention(psi, delta)?;
        py.detach(|| oracle::brute_force_multiplicity(&self.0, &chi.0, conv))
            .map_err(py_err)
    }

    /// The rank convention matching the oracle on unipotent characters, or `None`.
    #[pyo3(signature = (psi=None, delta="standard"))]
    fn rank_convention(
        &self,
        py: Python<'_>,
        psi: Option<u64>,
        delta: &str,
    ) -> PyResult<Option<&'static str>> {
        let conv = self.convention(psi, delta)?;
        let r = py
            .detach(|| oracle::resolve_rank_convention(&self.0, conv))
            .map_err(py_err)?;
        Ok(r.map(RankConvention::label))
    }

    /// A report dict comparing closed forms with the oracle for one character.
    #[pyo3(signature = (chi, psi=None, delta="standard", convention="kprime"))]
    fn report<'py>(
        &self,
        py: Python<'py>,
        chi: &PyTorusCharacter,
        psi: Option<u64>,
        delta: &str,
        convention: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let conv = self.convention(psi, delta)?;
        let rank = rank_convention(convention)?;
        let r = py
            .detach(|| oracle::report(self.0.q(), &chi.0, Some(&self.0), Some(conv), rank))
            .map_err(py_err)?;
        to_py(py, &r)
    }

    /// Report dicts for every character of a torus.
    #[pyo3(signature = (shape, dedup_orbits=false, psi=None, delta="standard", convention="kprime"))]
    fn sweep<'py>(
        &self,
        py: Python<'py>,
        shape: &PyTorusShape,
        dedup_orbits: bool,
        psi: Option<u64>,
        delta: &str,
        convention: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let conv = self.convention(psi, delta)?;
        let rank = rank_convention(convention)?;
        let rows = py
            .detach(|| oracle::sweep(&self.0, &shape.0, conv, rank, dedup_orbits))
            .map_err(py_err)?;
        to_py(py, &rows)
    }
}

/// `(−1)^{rk T + rk G}` under the rank convention `"kprime"` or `"k"`.
#[pyfunction]
#[pyo3(signature = (shape, convention="kprime"))]
fn unipotent_multiplicity(shape: &PyTorusShape, convention: &str) -> PyResult<i64> {
    Ok(mult::unipotent_multiplicity(
        &shape.0,
        rank_convention(convention)?,
    ))
}

/// `2^n (n!)^{3/2}` as `(coefficient, radicand)` with the value `coefficient·√radicand`.
#[pyfunction]
fn multiplicity_bound(n: u32) -> PyResult<(u128, u128)> {
    let b = mult::multiplicity_bound(n).map_err(py_err)?;
    Ok((b.coefficient, b.radicand))
}

/// Runs a verification suite and returns one dict per criterion.
#[pyfunction]
#[pyo3(signature = (suite="all", q=3, nmax=5, seed=None))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    q: u64,
    nmax: u32,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let suite = match suite {
        "core" => Suite::Core,
        "weil" => Suite::Weil,
        "combinatorics" => Suite::Combinatorics,
        "all" => Suite::All,
        _ => return Err(PyValueError::new_err(format!("unknown suite {suite:?}"))),
    };
    let opts = VerifyOptions {
        q,
        nmax,
        seed: seed.unwrap_or(VerifyOptions::default().seed),
    };
    let results = py.detach(|| run_suite(suite, &opts)).map_err(py_err)?;
    to_py(py, &results)
}

#[pymodule]
pub fn ggp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFieldTower>()?;
    m.add_class::<PyTorusShape>()?;
    m.add_class::<PyTorusCharacter>()?;
    m.add_class::<PyOracle>()?;
    m.add_function(wrap_pyfunction!(unipotent_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicity_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("DEFAULT_PAIR_SIGN", DEFAULT_PAIR_SIGN)?;
    Ok(())
}
