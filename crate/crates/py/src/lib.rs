//! Python bindings for the gain synthesis library. All computations run in
//! floating point; matrices cross the boundary as nested lists of floats.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use blockgain::assignment::{
    amca_solvable, solve_gain_with_method, AssignmentResult, MethodChoice,
};
use blockgain::blockmat::BlockMatrix;
use blockgain::error::Error;
use blockgain::mat::Mat;
use blockgain::reduction::hessenberg_to_frobenius;
use blockgain::scalar::Scalar;
use blockgain::solvents::SolventSet;
use blockgain::system::{
    frobenius_from_coeffs, ode_to_state_space, BlockSystem, Form, HigherOrderOde,
    TargetCoefficients,
};

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mat_from_rows(rows: Vec<Vec<f64>>, name: &str) -> PyResult<Mat<f64>> {
    Mat::from_rows(rows).map_err(|e| PyValueError::new_err(format!("{name}: {e}")))
}

fn mat_to_rows(m: &Mat<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| *m.get(i, j)).collect())
        .collect()
}

fn square_blocks(blocks: Vec<Vec<Vec<f64>>>, name: &str) -> PyResult<Vec<Mat<f64>>> {
    blocks
        .into_iter()
        .enumerate()
        .map(|(i, b)| mat_from_rows(b, &format!("{name}[{i}]")))
        .collect()
}

fn default_tol(tol: Option<f64>) -> f64 {
    tol.unwrap_or_else(f64::default_tol)
}

/// Block state-space system with coefficient matrices F, G, H.
#[pyclass(name = "BlockSystem")]
#[derive(Clone)]
struct PyBlockSystem(BlockSystem<f64>);

#[pymethods]
impl PyBlockSystem {
    #[new]
    #[pyo3(signature = (f, g, h, s, p, form="frobenius"))]
    fn new(
        f: Vec<Vec<f64>>,
        g: Vec<Vec<f64>>,
        h: Vec<Vec<f64>>,
        s: usize,
        p: usize,
        form: &str,
    ) -> PyResult<Self> {
        let form = match form {
            "frobenius" => Form::Frobenius,
            "hessenberg" => Form::Hessenberg,
            "general" => Form::General,
            other => {
                return Err(PyValueError::new_err(format!(
                    "form must be frobenius, hessenberg or general, got {other}"
                )))
            }
        };
        let f = BlockMatrix::new(mat_from_rows(f, "F")?, s).map_err(to_py_err)?;
        let g = BlockMatrix::new(mat_from_rows(g, "G")?, s).map_err(to_py_err)?;
        let h = BlockMatrix::new(mat_from_rows(h, "H")?, s).map_err(to_py_err)?;
        BlockSystem::new(f, g, h, p, form).map(PyBlockSystem).map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn s(&self) -> usize {
        self.0.s
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p
    }

    #[getter]
    fn form(&self) -> String {
        self.0.form.to_string()
    }

    /// Structural violations of the declared form; empty when valid.
    #[pyo3(signature = (tol=None))]
    fn validate(&self, tol: Option<f64>) -> Vec<String> {
        self.0
            .validate(default_tol(tol))
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    /// State matrix of the loop closed with the gain Q.
    fn closed_loop(&self, q: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        let q = BlockMatrix::new(mat_from_rows(q, "Q")?, self.0.s).map_err(to_py_err)?;
        Ok(mat_to_rows(&self.0.closed_loop(&q).map_err(to_py_err)?.mat))
    }

    fn __repr__(&self) -> String {
        format!(
            "BlockSystem(n={}, s={}, m={}, k={}, p={}, form={})",
            self.0.n, self.0.s, self.0.m, self.0.k, self.0.p, self.0.form
        )
    }
}

/// Target coefficient blocks of the characteristic matrix polynomial.
#[pyclass(name = "TargetCoefficients")]
#[derive(Clone)]
struct PyTargets(TargetCoefficients<f64>);

#[pymethods]
impl PyTargets {
    #[new]
    fn new(gammas: Vec<Vec<Vec<f64>>>) -> PyResult<Self> {
        TargetCoefficients::new(square_blocks(gammas, "gammas")?)
            .map(PyTargets)
            .map_err(to_py_err)
    }

    #[getter]
    fn gammas(&self) -> Vec<Vec<Vec<f64>>> {
        self.0.gammas.iter().map(mat_to_rows).collect()
    }

    /// Companion matrix carrying these coefficients in its last block row.
    fn companion(&self) -> Vec<Vec<f64>> {
        mat_to_rows(&frobenius_from_coeffs(&self.0).mat)
    }
}

/// Synthesized gain with its similarity certificate.
#[pyclass(name = "AssignmentResult")]
struct PyAssignmentResult(AssignmentResult<f64>);

#[pymethods]
impl PyAssignmentResult {
    #[getter]
    fn q(&self) -> Vec<Vec<f64>> {
        mat_to_rows(&self.0.q.mat)
    }

    #[getter]
    fn s(&self) -> Vec<Vec<f64>> {
        mat_to_rows(&self.0.s.mat)
    }

    #[getter]
    fn phi(&self) -> Vec<Vec<f64>> {
        mat_to_rows(&self.0.phi.mat)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank_solvability
    }

    #[getter]
    fn residual_solve(&self) -> f64 {
        self.0.residual_solve
    }

    #[getter]
    fn residual_similarity(&self) -> f64 {
        self.0.residual_similarity
    }

    #[getter]
    fn method(&self) -> String {
        self.0.method.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "AssignmentResult(method={}, rank={}, residual_solve={:e}, residual_similarity={:e})",
            self.0.method, self.0.rank_solvability, self.0.residual_solve,
            self.0.residual_similarity
        )
    }
}

/// Rank-based solvability test; returns (solvable, rank, required, mk >= n).
#[pyfunction]
#[pyo3(signature = (system, tol=None))]
fn check(system: &PyBlockSystem, tol: Option<f64>) -> PyResult<(bool, usize, usize, bool)> {
    let v = amca_solvable(&system.0, default_tol(tol)).map_err(to_py_err)?;
    Ok((v.solvable, v.rank, v.required, v.precheck_mk_ge_n))
}

/// Synthesize a gain realizing the target coefficient blocks.
#[pyfunction]
#[pyo3(signature = (system, targets, method="auto", tol=None))]
fn assign(
    system: &PyBlockSystem,
    targets: &PyTargets,
    method: &str,
    tol: Option<f64>,
) -> PyResult<PyAssignmentResult> {
    let choice = match method {
        "auto" => MethodChoice::Auto,
        "general" => MethodChoice::General,
        "scalar-h" => MethodChoice::ScalarH,
        "scalar-fg" => MethodChoice::ScalarFg,
        other => {
            return Err(PyValueError::new_err(format!(
                "method must be auto, general, scalar-h or scalar-fg, got {other}"
            )))
        }
    };
    solve_gain_with_method(&system.0, &targets.0, choice, default_tol(tol))
        .map(PyAssignmentResult)
        .map_err(to_py_err)
}

/// Place a complete set of left solvents; returns the assignment, the
/// recovered coefficients and per-solvent residuals.
#[pyfunction]
#[pyo3(signature = (system, solvents, tol=None))]
fn assign_solvents(
    system: &PyBlockSystem,
    solvents: Vec<Vec<Vec<f64>>>,
    tol: Option<f64>,
) -> PyResult<(PyAssignmentResult, PyTargets, Vec<f64>)> {
    let set = SolventSet::new(square_blocks(solvents, "solvents")?).map_err(to_py_err)?;
    let (res, gammas, residuals) =
        blockgain::solvents::assign_solvents(&system.0, &set, default_tol(tol))
            .map_err(to_py_err)?;
    Ok((PyAssignmentResult(res), PyTargets(gammas), residuals))
}

/// Reduce a lower block Hessenberg state matrix to companion form;
/// returns (S, Phi, residual).
#[pyfunction]
#[pyo3(signature = (state, s, tol=None))]
fn reduce(
    state: Vec<Vec<f64>>,
    s: usize,
    tol: Option<f64>,
) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>, f64)> {
    let z = BlockMatrix::new(mat_from_rows(state, "state")?, s).map_err(to_py_err)?;
    let red = hessenberg_to_frobenius(&z, default_tol(tol)).map_err(to_py_err)?;
    Ok((mat_to_rows(&red.s.mat), mat_to_rows(&red.phi.mat), red.residual))
}

/// Monic characteristic polynomial coefficients of a square matrix.
#[pyfunction]
fn char_poly(matrix: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let m = mat_from_rows(matrix, "matrix")?;
    if !m.is_square() {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(<f64 as blockgain::mat::LinearOps>::char_poly(&m))
}

/// Convert a higher-order ODE system to companion state-space form.
/// `a` lists the coefficient blocks; `b[l-p][alpha]` and `c[nu-1][beta]`
/// hold the forcing and observation blocks.
#[pyfunction]
fn ode2ss(
    a: Vec<Vec<Vec<f64>>>,
    b: Vec<Vec<Vec<Vec<f64>>>>,
    c: Vec<Vec<Vec<Vec<f64>>>>,
    p: usize,
) -> PyResult<PyBlockSystem> {
    let a = square_blocks(a, "a")?;
    let n = a.len();
    let s = a.first().map_or(0, |m| m.nrows());
    let b: Vec<Vec<Mat<f64>>> = b
        .into_iter()
        .enumerate()
        .map(|(i, row)| square_blocks(row, &format!("b[{i}]")))
        .collect::<PyResult<_>>()?;
    let c: Vec<Vec<Mat<f64>>> = c
        .into_iter()
        .enumerate()
        .map(|(i, row)| square_blocks(row, &format!("c[{i}]")))
        .collect::<PyResult<_>>()?;
    let m = b.first().map_or(0, |r| r.len());
    let k = c.first().map_or(0, |r| r.len());
    let ode = HigherOrderOde { a, b, c, n, s, m, k, p };
    ode_to_state_space(&ode).map(PyBlockSystem).map_err(to_py_err)
}

#[pymodule]
fn blockgain_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBlockSystem>()?;
    m.add_class::<PyTargets>()?;
    m.add_class::<PyAssignmentResult>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(assign, m)?)?;
    m.add_function(wrap_pyfunction!(assign_solvents, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(char_poly, m)?)?;
    m.add_function(wrap_pyfunction!(ode2ss, m)?)?;
    Ok(())
}
