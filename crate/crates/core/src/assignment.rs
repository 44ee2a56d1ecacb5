//! Solvability matrices, rank tests and gain synthesis for assigning the
//! block coefficients of the closed-loop characteristic matrix polynomial.

use crate::blockmat::{BlockMatrix, UnrollMode};
use crate::error::{Error, Result};
use crate::mat::{LinearOps, Mat};
use crate::reduction::{
    hessenberg_to_frobenius, lower_block_triangular_inverse, solve_t_hat,
};
use crate::scalar::Scalar;
use crate::system::{frobenius_from_coeffs, BlockSystem, Form, TargetCoefficients};

/// Synthesis path used to produce a gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    General,
    ScalarH,
    ScalarFg,
    ScalarAll,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::General => write!(f, "general"),
            Method::ScalarH => write!(f, "scalar-h"),
            Method::ScalarFg => write!(f, "scalar-fg"),
            Method::ScalarAll => write!(f, "scalar-all"),
        }
    }
}

/// Requested synthesis path; `Auto` picks the cheapest applicable one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    General,
    ScalarH,
    ScalarFg,
}

/// Outcome of the rank-based solvability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solvability {
    pub solvable: bool,
    pub rank: usize,
    pub required: usize,
    /// Necessary counting condition m·k ≥ n.
    pub precheck_mk_ge_n: bool,
}

/// A synthesized gain together with the similarity certificate.
#[derive(Debug, Clone)]
pub struct AssignmentResult<T: Scalar> {
    pub q: BlockMatrix<T>,
    /// Similarity transform taking the closed loop to `phi` (the combined
    /// transform for Hessenberg input).
    pub s: BlockMatrix<T>,
    pub phi: BlockMatrix<T>,
    pub rank_solvability: usize,
    pub residual_solve: f64,
    pub residual_similarity: f64,
    pub method: Method,
}

fn require_valid<T: Scalar>(sys: &BlockSystem<T>, form: Form, tol: f64) -> Result<()> {
    if sys.form != form {
        return Err(Error::Validation(format!(
            "expected a {} system, got {}",
            form, sys.form
        )));
    }
    let violations = sys.validate(tol);
    if let Some(v) = violations.first() {
        return Err(Error::Validation(format!(
            "system fails {} validation: {} ({} violations)",
            form,
            v,
            violations.len()
        )));
    }
    Ok(())
}

fn theta_formula<T: Scalar>(sys: &BlockSystem<T>) -> Result<BlockMatrix<T>> {
    let (n, s) = (sys.n, sys.s);
    let ht_t = sys.h.block_transpose().transpose();
    let mut theta = BlockMatrix::zeros(n, sys.k * sys.m, s * s);
    let mut power_g = sys.g.clone();
    for i in 0..n {
        let row = ht_t.star(&power_g)?.unroll(UnrollMode::RR);
        for j in 0..sys.k * sys.m {
            theta.set_block(i, j, &row.block(0, j));
        }
        if i + 1 < n {
            power_g = sys.f.matmul(&power_g);
        }
    }
    Ok(theta)
}

/// Solvability matrix of the rank test: block row i is the row unrolling of
/// the star product of (H^𝒯)^T with F^{i−1}G. Requires companion form.
pub fn build_theta<T: Scalar>(sys: &BlockSystem<T>, tol: f64) -> Result<BlockMatrix<T>> {
    require_valid(sys, Form::Frobenius, tol)?;
    theta_formula(sys)
}

/// Same stacking applied directly to a system's matrices without requiring
/// companion form. For Hessenberg systems this generally differs from the
/// solvability matrix of the reduced system.
pub fn build_theta_direct<T: Scalar>(sys: &BlockSystem<T>) -> Result<BlockMatrix<T>> {
    theta_formula(sys)
}

/// Reduce a Hessenberg system to companion form: (F, G, H) become
/// (S̃·F̃·S̃⁻¹, S̃·G̃, H̃·S̃⁻¹).
pub fn transform_to_frobenius<T: Scalar>(
    sys: &BlockSystem<T>,
    tol: f64,
) -> Result<(BlockSystem<T>, BlockMatrix<T>)> {
    require_valid(sys, Form::Hessenberg, tol)?;
    let red = hessenberg_to_frobenius(&sys.f, tol)?;
    let s_inv = lower_block_triangular_inverse(&red.s)?;
    let g = red.s.matmul(&sys.g);
    let h = sys.h.matmul(&s_inv);
    let transformed = BlockSystem::new(red.phi, g, h, sys.p, Form::Frobenius)?;
    Ok((transformed, red.s))
}

/// Rank-based solvability test. Hessenberg systems are tested on their
/// companion-form reduction.
pub fn amca_solvable<T: LinearOps>(sys: &BlockSystem<T>, tol: f64) -> Result<Solvability> {
    let theta = match sys.form {
        Form::Frobenius => build_theta(sys, tol)?,
        Form::Hessenberg => {
            let (transformed, _) = transform_to_frobenius(sys, tol)?;
            build_theta(&transformed, tol)?
        }
        Form::General => {
            return Err(Error::Validation(
                "solvability test requires frobenius or hessenberg form".into(),
            ))
        }
    };
    let rank = theta.rank_with_tolerance(None)?;
    let required = sys.n * sys.s * sys.s;
    Ok(Solvability {
        solvable: rank == required,
        rank,
        required,
        precheck_mk_ge_n: sys.m * sys.k >= sys.n,
    })
}

fn stack_vecc<T: Scalar>(blocks: &[Mat<T>]) -> Mat<T> {
    let s2 = blocks[0].nrows() * blocks[0].ncols();
    let mut w = Mat::zeros(blocks.len() * s2, 1);
    for (i, b) in blocks.iter().enumerate() {
        w.set_submatrix(i * s2, 0, &b.vecc());
    }
    w
}

fn similarity_certificate<T: Scalar>(
    closed: &BlockMatrix<T>,
    targets: &TargetCoefficients<T>,
    tol: f64,
) -> Result<(BlockMatrix<T>, BlockMatrix<T>, f64)> {
    let red = hessenberg_to_frobenius(closed, tol)?;
    let phi = frobenius_from_coeffs(targets);
    let mut residual = red.residual;
    for j in 0..phi.q {
        let dev = red.phi.block(phi.q - 1, j).sub(&phi.block(phi.q - 1, j)).max_norm();
        residual = residual.max(dev);
    }
    if residual > tol {
        return Err(Error::Numeric(format!(
            "closed loop reduces to the wrong coefficients, deviation {residual:e}"
        )));
    }
    Ok((red.s, phi, residual))
}

fn finish<T: Scalar>(
    sys: &BlockSystem<T>,
    targets: &TargetCoefficients<T>,
    q: BlockMatrix<T>,
    rank: usize,
    residual_solve: f64,
    method: Method,
    tol: f64,
) -> Result<AssignmentResult<T>> {
    let closed = sys.closed_loop(&q)?;
    let (s, phi, residual_similarity) = similarity_certificate(&closed, targets, tol)?;
    Ok(AssignmentResult {
        q,
        s,
        phi,
        rank_solvability: rank,
        residual_solve,
        residual_similarity,
        method,
    })
}

fn check_targets<T: Scalar>(sys: &BlockSystem<T>, targets: &TargetCoefficients<T>) -> Result<()> {
    if targets.n() != sys.n || targets.s() != sys.s {
        return Err(Error::Dimension(format!(
            "expected {} target blocks of size {}",
            sys.n, sys.s
        )));
    }
    Ok(())
}

/// Gain synthesis for companion-form systems: solve the unrolled linear
/// system for the gain entries, then certify by reducing the closed loop.
pub fn solve_gain<T: LinearOps>(
    sys: &BlockSystem<T>,
    targets: &TargetCoefficients<T>,
    tol: f64,
) -> Result<AssignmentResult<T>> {
    require_valid(sys, Form::Frobenius, tol)?;
    check_targets(sys, targets)?;
    let a = sys.last_row_coefficients();
    let t = solve_t_hat(&a, targets)?;
    let w = stack_vecc(&t);
    let theta = theta_formula(sys)?;
    let rank = theta.rank_with_tolerance(None)?;
    let v = T::min_norm_solve(&theta.mat, &w, tol)?;
    let residual_solve = theta.mat.matmul(&v).sub(&w).max_norm();
    if residual_solve > tol {
        return Err(Error::Unsolvable { residual: residual_solve });
    }
    let unrolled = BlockMatrix::new(v.vecc_inverse(sys.s, sys.k * sys.m * sys.s)?, sys.s)?;
    let q = unrolled.unroll_inverse(UnrollMode::CR, sys.m, sys.k)?;
    finish(sys, targets, q, rank, residual_solve, Method::General, tol)
}

/// Gain synthesis for Hessenberg systems: reduce to companion form, run the
/// companion-form synthesis, and combine the two transforms.
pub fn solve_gain_hessenberg<T: LinearOps>(
    sys: &BlockSystem<T>,
    targets: &TargetCoefficients<T>,
    tol: f64,
) -> Result<AssignmentResult<T>> {
    if sys.form == Form::Frobenius {
        return solve_gain(sys, targets, tol);
    }
    check_targets(sys, targets)?;
    let (transformed, s_tilde) = transform_to_frobenius(sys, tol)?;
    let inner = solve_gain(&transformed, targets, tol)?;
    // The same gain closes the original loop; the overall transform is the
    // product of the inner transform with the state reduction.
    let r = inner.s.matmul(&s_tilde);
    let closed = sys.closed_loop(&inner.q)?;
    let r_inv = lower_block_triangular_inverse(&r)?;
    let image = r.matmul(&closed).matmul(&r_inv);
    let residual_similarity = image.mat.sub(&inner.phi.mat).max_norm();
    if residual_similarity > tol {
        return Err(Error::Numeric(format!(
            "combined transform fails to certify the reduction, deviation {residual_similarity:e}"
        )));
    }
    Ok(AssignmentResult { s: r, residual_similarity, ..inner })
}

/// Compact solvability matrix available when all blocks of H are scalar
/// multiples of I: block row i is the row unrolling of (H^𝒯)^T·F^{i−1}·G.
pub fn build_omega<T: Scalar>(sys: &BlockSystem<T>, tol: f64) -> Result<BlockMatrix<T>> {
    require_valid(sys, Form::Frobenius, tol)?;
    let (n, s) = (sys.n, sys.s);
    let ht_t = sys.h.block_transpose().transpose();
    let mut omega = BlockMatrix::zeros(n, sys.k * sys.m, s);
    let mut power_g = sys.g.clone();
    for i in 0..n {
        let row = ht_t.matmul(&power_g).unroll(UnrollMode::RR);
        for j in 0..sys.k * sys.m {
            omega.set_block(i, j, &row.block(0, j));
        }
        if i + 1 < n {
            power_g = sys.f.matmul(&power_g);
        }
    }
    Ok(omega)
}

fn stack_blocks_column<T: Scalar>(blocks: &[Mat<T>]) -> BlockMatrix<T> {
    let s = blocks[0].nrows();
    let mut out = BlockMatrix::zeros(blocks.len(), 1, s);
    for (i, b) in blocks.iter().enumerate() {
        out.set_block(i, 0, b);
    }
    out
}

/// Gain synthesis through the compact s-block system, applicable when all
/// blocks of H are scalar multiples of I.
pub fn solve_gain_scalar_h<T: LinearOps>(
    sys: &BlockSystem<T>,
    targets: &TargetCoefficients<T>,
    tol: f64,
) -> Result<AssignmentResult<T>> {
    require_valid(sys, Form::Frobenius, tol)?;
    check_targets(sys, targets)?;
    if !sys.h.has_scalar_blocks(tol) {
        return Err(Error::Validation(
            "this path requires every block of H to be a scalar multiple of I".into(),
        ));
    }
    let a = sys.last_row_coefficients();
    let t = solve_t_hat(&a, targets)?;
    let w = stack_blocks_column(&t);
    let omega = build_omega(sys, tol)?;
    let rank = omega.rank_with_tolerance(None)?;
    let v = T::min_norm_solve(&omega.mat, &w.mat, tol)?;
    let residual_solve = omega.mat.matmul(&v).sub(&w.mat).max_norm();
    if residual_solve > tol {
        return Err(Error::Unsolvable { residual: residual_solve });
    }
    let q = BlockMatrix::new(v, sys.s)?.unroll_inverse(UnrollMode::CC, sys.m, sys.k)?;
    finish(sys, targets, q, rank, residual_solve, Method::ScalarH, tol)
}

/// Row-column solvability matrix available when all blocks of F and G are
/// scalar multiples of I: block column i is the column unrolling of
/// H·F^{i−1}·G.
pub fn build_xi<T: Scalar>(sys: &BlockSystem<T>, tol: f64) -> Result<BlockMatrix<T>> {
    require_valid(sys, Form::Frobenius, tol)?;
    let (n, s) = (sys.n, sys.s);
    let mut xi = BlockMatrix::zeros(sys.m * sys.k, n, s);
    let mut power_g = sys.g.clone();
    for i in 0..n {
        let col = sys.h.matmul(&power_g).unroll(UnrollMode::RC);
        for j in 0..sys.m * sys.k {
            xi.set_block(j, i, &col.block(j, 0));
        }
        if i + 1 < n {
            power_g = sys.f.matmul(&power_g);
        }
    }
    Ok(xi)
}

/// Gain synthesis through the transposed compact system, applicable when
/// all blocks of F and G are scalar multiples of I.
pub fn solve_gain_scalar_fg<T: LinearOps>(
    sys: &BlockSystem<T>,
    targets: &TargetCoefficients<T>,
    tol: f64,
) -> Result<AssignmentResult<T>> {
    require_valid(sys, Form::Frobenius, tol)?;
    check_targets(sys, targets)?;
    if !sys.f.has_scalar_blocks(tol) || !sys.g.has_scalar_blocks(tol) {
        return Err(Error::Validation(
            "this path requires every block of F and G to be a scalar multiple of I".into(),
        ));
    }
    let a = sys.last_row_coefficients();
    let t = solve_t_hat(&a, targets)?;
    // Row layout: Y = [T₁ … Tₙ]; solve X·Ξ = Y through the transposed system.
    let y = stack_blocks_column(&t).block_transpose();
    let xi = build_xi(sys, tol)?;
    let xi_t = xi.transpose();
    let rank = xi_t.rank_with_tolerance(None)?;
    let x_t = T::min_norm_solve(&xi_t.mat, &y.mat.transpose(), tol)?;
    let residual_solve = xi_t.mat.matmul(&x_t).sub(&y.mat.transpose()).max_norm();
    if residual_solve > tol {
        return Err(Error::Unsolvable { residual: residual_solve });
    }
    let x = BlockMatrix::new(x_t.transpose(), sys.s)?;
    let q = x.unroll_inverse(UnrollMode::CR, sys.m, sys.k)?;
    finish(sys, targets, q, rank, residual_solve, Method::ScalarFg, tol)
}

/// When all blocks of F, G and H are scalar multiples of I, solvability
/// collapses to linear independence of the s=1 products H₀F₀^{i−1}G₀.
pub fn check_scalar_all<T: LinearOps>(sys: &BlockSystem<T>, tol: f64) -> Result<bool> {
    let f0 = sys
        .f
        .scalar_block_factor(tol)
        .ok_or_else(|| Error::Validation("blocks of F are not scalar multiples of I".into()))?;
    let g0 = sys
        .g
        .scalar_block_factor(tol)
        .ok_or_else(|| Error::Validation("blocks of G are not scalar multiples of I".into()))?;
    let h0 = sys
        .h
        .scalar_block_factor(tol)
        .ok_or_else(|| Error::Validation("blocks of H are not scalar multiples of I".into()))?;
    let mut stacked = Mat::zeros(sys.n, sys.k * sys.m);
    let mut power_g = g0.clone();
    for i in 0..sys.n {
        let row = h0.matmul(&power_g).vecr();
        stacked.set_submatrix(i, 0, &row);
        if i + 1 < sys.n {
            power_g = f0.matmul(&power_g);
        }
    }
    Ok(T::rank(&stacked, None)? == sys.n)
}

/// Synthesize a gain with an explicit or automatically selected path.
pub fn solve_gain_with_method<T: LinearOps>(
    sys: &BlockSystem<T>,
    targets: &TargetCoefficients<T>,
    choice: MethodChoice,
    tol: f64,
) -> Result<AssignmentResult<T>> {
    if sys.form == Form::Hessenberg {
        if !matches!(choice, MethodChoice::Auto | MethodChoice::General) {
            return Err(Error::Validation(
                "scalar-block paths apply to frobenius-form systems only".into(),
            ));
        }
        return solve_gain_hessenberg(sys, targets, tol);
    }
    match choice {
        MethodChoice::General => solve_gain(sys, targets, tol),
        MethodChoice::ScalarH => solve_gain_scalar_h(sys, targets, tol),
        MethodChoice::ScalarFg => solve_gain_scalar_fg(sys, targets, tol),
        MethodChoice::Auto => {
            let h_scalar = sys.h.has_scalar_blocks(tol);
            let fg_scalar = sys.f.has_scalar_blocks(tol) && sys.g.has_scalar_blocks(tol);
            if h_scalar && fg_scalar {
                let mut result = solve_gain_scalar_h(sys, targets, tol)?;
                result.method = Method::ScalarAll;
                Ok(result)
            } else if h_scalar {
                solve_gain_scalar_h(sys, targets, tol)
            } else if fg_scalar {
                solve_gain_scalar_fg(sys, targets, tol)
            } else {
                solve_gain(sys, targets, tol)
            }
        }
    }
}

/// Check that S·M·S⁻¹ equals Phi within tolerance.
pub fn verify_similarity<T: Scalar>(
    s: &BlockMatrix<T>,
    m: &BlockMatrix<T>,
    phi: &BlockMatrix<T>,
    tol: f64,
) -> Result<(bool, f64)> {
    let s_inv = s
        .mat
        .inverse()
        .map_err(|_| Error::Numeric("similarity transform is singular".into()))?;
    let image = s.mat.matmul(&m.mat).matmul(&s_inv);
    let residual = image.sub(&phi.mat).max_norm();
    Ok((residual <= tol, residual))
}

/// Monic characteristic polynomial coefficients δ₁..δ_r of a square matrix.
pub fn char_poly<T: LinearOps>(m: &BlockMatrix<T>) -> Vec<T> {
    T::char_poly(&m.mat)
}
