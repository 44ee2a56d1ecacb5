//! Left-solvent assignment: block Vandermonde construction, coefficient
//! recovery from a complete solvent set, and solvent verification.

use crate::assignment::{solve_gain_with_method, AssignmentResult, MethodChoice};
use crate::blockmat::BlockMatrix;
use crate::error::{Error, Result};
use crate::mat::{LinearOps, Mat};
use crate::scalar::Scalar;
use crate::system::{BlockSystem, TargetCoefficients};

/// A complete set of prescribed left solvents together with the block
/// Vandermonde matrix they generate.
#[derive(Debug, Clone)]
pub struct SolventSet<T: Scalar> {
    pub solvents: Vec<Mat<T>>,
    pub vandermonde: BlockMatrix<T>,
    /// Eigenvalues of all solvents as (re, im) pairs, when available.
    pub spectrum: Option<Vec<(f64, f64)>>,
}

/// ns×ns matrix with block (i,j) = X_j^{i−1}.
pub fn block_vandermonde<T: Scalar>(ls: &[Mat<T>]) -> Result<BlockMatrix<T>> {
    let n = ls.len();
    if n == 0 {
        return Err(Error::Validation("solvent list is empty".into()));
    }
    let s = ls[0].nrows();
    for l in ls {
        if l.nrows() != s || l.ncols() != s {
            return Err(Error::Dimension("solvents must all be square of one size".into()));
        }
    }
    let mut v = BlockMatrix::zeros(n, n, s);
    for (j, l) in ls.iter().enumerate() {
        let mut power = Mat::identity(s);
        for i in 0..n {
            v.set_block(i, j, &power);
            if i + 1 < n {
                power = power.matmul(l);
            }
        }
    }
    Ok(v)
}

impl<T: LinearOps> SolventSet<T> {
    /// Build the set and check that the block Vandermonde matrix is
    /// nonsingular.
    pub fn new(solvents: Vec<Mat<T>>) -> Result<Self> {
        let vandermonde = block_vandermonde(&solvents)?;
        let size = vandermonde.mat.nrows();
        let rank = T::rank(&vandermonde.mat, None)?;
        if rank < size {
            return Err(Error::Solvents(format!(
                "singular block Vandermonde matrix (rank {rank} < {size})"
            )));
        }
        let spectrum = solvents
            .iter()
            .map(T::eigenvalues)
            .collect::<Option<Vec<_>>>()
            .map(|per| per.into_iter().flatten().collect());
        Ok(SolventSet { solvents, vandermonde, spectrum })
    }

    pub fn n(&self) -> usize {
        self.solvents.len()
    }

    pub fn s(&self) -> usize {
        self.solvents[0].nrows()
    }
}

/// Coefficients Γ₁..Γₙ of the matrix polynomial having the given complete
/// set of left solvents: solve the block-transposed Vandermonde system for
/// col(Γₙ, …, Γ₁) = −(V^𝒯)⁻¹·col(L̂₁ⁿ, …, L̂ₙⁿ).
pub fn gammas_from_solvents<T: LinearOps>(set: &SolventSet<T>) -> Result<TargetCoefficients<T>> {
    let n = set.n();
    let s = set.s();
    let mut rhs = Mat::zeros(n * s, s);
    for (j, l) in set.solvents.iter().enumerate() {
        let mut power = Mat::identity(s);
        for _ in 0..n {
            power = power.matmul(l);
        }
        rhs.set_submatrix(j * s, 0, &power.neg());
    }
    let vt = set.vandermonde.block_transpose();
    let x = vt
        .mat
        .solve(&rhs)
        .map_err(|_| Error::Solvents("singular block Vandermonde matrix".into()))?;
    // x stacks Γₙ..Γ₁; flip into standard order.
    let mut gammas = Vec::with_capacity(n);
    for i in 0..n {
        gammas.push(x.submatrix((n - 1 - i) * s, 0, s, s));
    }
    TargetCoefficients::new(gammas)
}

/// Residual of the left-solvent equation
/// Lⁿ + L^{n−1}Γ₁ + … + LΓ_{n−1} + Γₙ = 0.
pub fn verify_solvent<T: Scalar>(
    l: &Mat<T>,
    gammas: &TargetCoefficients<T>,
    tol: f64,
) -> (bool, f64) {
    let n = gammas.n();
    let s = gammas.s();
    let mut acc = Mat::zeros(s, s);
    let mut power = Mat::identity(s);
    // Accumulate Γₙ, LΓ_{n−1}, …, L^{n−1}Γ₁, Lⁿ.
    for i in (0..n).rev() {
        acc = acc.add(&power.matmul(&gammas.gammas[i]));
        power = power.matmul(l);
    }
    acc = acc.add(&power);
    let residual = acc.max_norm();
    (residual <= tol, residual)
}

/// Assign a complete set of left solvents: recover the coefficients, run
/// the gain synthesis, then check every solvent against the realized
/// polynomial.
pub fn assign_solvents<T: LinearOps>(
    sys: &BlockSystem<T>,
    set: &SolventSet<T>,
    tol: f64,
) -> Result<(AssignmentResult<T>, TargetCoefficients<T>, Vec<f64>)> {
    let targets = gammas_from_solvents(set)?;
    let result = solve_gain_with_method(sys, &targets, MethodChoice::Auto, tol)?;
    let realized = TargetCoefficients::new(crate::system::frobenius_coefficients(&result.phi))?;
    let mut residuals = Vec::with_capacity(set.n());
    for l in &set.solvents {
        let (ok, residual) = verify_solvent(l, &realized, tol);
        if !ok {
            return Err(Error::Solvents(format!(
                "realized polynomial misses a prescribed solvent, residual {residual:e}"
            )));
        }
        residuals.push(residual);
    }
    Ok((result, targets, residuals))
}
