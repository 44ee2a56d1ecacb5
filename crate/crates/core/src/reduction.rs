//! Constructive similarity machinery: the Toeplitz matrix P, the N-sequence,
//! the Hessenberg-to-companion reduction and the coefficient oracle for
//! perturbed companion matrices.

use crate::blockmat::{shift_matrix, BlockMatrix};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::system::TargetCoefficients;

/// Result of reducing a lower block Hessenberg matrix to companion form by
/// a lower block triangular similarity.
#[derive(Debug, Clone)]
pub struct ReductionResult<T: Scalar> {
    /// The individual triangular factors, first applied first.
    pub factors: Vec<BlockMatrix<T>>,
    /// Product of the factors.
    pub s: BlockMatrix<T>,
    /// The companion-form image S·Z·S⁻¹ with the structural pattern forced.
    pub phi: BlockMatrix<T>,
    /// Max-norm deviation of S·Z·S⁻¹ from the forced pattern entries.
    pub residual: f64,
}

/// Unit lower block triangular Toeplitz matrix with I on the diagonal and
/// A₁, …, A_{n−1} on the subdiagonals. Takes the full list A₁..Aₙ; the last
/// entry is not used but fixes n.
pub fn build_p<T: Scalar>(a: &[Mat<T>]) -> BlockMatrix<T> {
    let n = a.len();
    assert!(n >= 1, "coefficient list must be nonempty");
    let s = a[0].nrows();
    let mut p = BlockMatrix::identity(n, s);
    for i in 1..n {
        for j in 0..i {
            p.set_block(i, j, &a[i - j - 1]);
        }
    }
    p
}

/// Inverse of a lower block triangular matrix by block forward
/// substitution; the diagonal blocks are inverted individually.
pub fn lower_block_triangular_inverse<T: Scalar>(l: &BlockMatrix<T>) -> Result<BlockMatrix<T>> {
    if l.q != l.r {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = l.q;
    let mut diag_inv = Vec::with_capacity(n);
    for i in 0..n {
        let inv = l
            .block(i, i)
            .inverse()
            .map_err(|_| Error::SingularBlock { index: i + 1 })?;
        diag_inv.push(inv);
    }
    let mut x = BlockMatrix::zeros(n, n, l.s);
    for j in 0..n {
        x.set_block(j, j, &diag_inv[j]);
        for i in (j + 1)..n {
            let mut acc = Mat::zeros(l.s, l.s);
            for nu in j..i {
                acc = acc.add(&l.block(i, nu).matmul(&x.block(nu, j)));
            }
            x.set_block(i, j, &diag_inv[i].matmul(&acc).neg());
        }
    }
    Ok(x)
}

/// N₀ = I, N_ν = N_{ν−1}·F + I⊗A_ν for ν = 1..n−1, where F is in companion
/// form with last-row coefficients A.
pub fn build_n_sequence<T: Scalar>(
    f: &BlockMatrix<T>,
    a: &[Mat<T>],
) -> Vec<BlockMatrix<T>> {
    let n = f.q;
    let s = f.s;
    let eye_n = Mat::identity(n);
    let mut seq = vec![BlockMatrix::identity(n, s)];
    for nu in 1..n {
        let prev = seq.last().unwrap();
        let next = prev
            .matmul(f)
            .add(&BlockMatrix::new(eye_n.kron(&a[nu - 1]), s).unwrap());
        seq.push(next);
    }
    seq
}

fn check_perturbation_pattern<T: Scalar>(d: &BlockMatrix<T>, p: usize, tol: f64) -> Result<()> {
    let n = d.q;
    for i in 0..p.saturating_sub(1) {
        for j in 0..d.r {
            if d.block(i, j).max_norm() > tol {
                return Err(Error::Validation(format!(
                    "perturbation block ({},{}) must be zero (first {} block rows)",
                    i + 1,
                    j + 1,
                    p - 1
                )));
            }
        }
    }
    for i in 0..n {
        for j in p..n {
            if d.block(i, j).max_norm() > tol {
                return Err(Error::Validation(format!(
                    "perturbation block ({},{}) must be zero (last {} block columns)",
                    i + 1,
                    j + 1,
                    n - p
                )));
            }
        }
    }
    Ok(())
}

/// Coefficients Γ₁..Γₙ of the companion form similar to F+D, computed as
/// Γ_i = A_i − SP_s(N_{i−1}·D). F must be in companion form and D must have
/// first p−1 block rows and last n−p block columns zero.
pub fn gamma_from_perturbation<T: Scalar>(
    f: &BlockMatrix<T>,
    d: &BlockMatrix<T>,
    p: usize,
    tol: f64,
) -> Result<TargetCoefficients<T>> {
    let n = f.q;
    if d.q != n || d.r != n || d.s != f.s {
        return Err(Error::Dimension("perturbation shape mismatch".into()));
    }
    check_perturbation_pattern(d, p, tol)?;
    let a = crate::system::frobenius_coefficients(f);
    let seq = build_n_sequence(f, &a);
    let mut gammas = Vec::with_capacity(n);
    for i in 0..n {
        let trace = seq[i].matmul(d).block_trace()?;
        gammas.push(a[i].sub(&trace));
    }
    TargetCoefficients::new(gammas)
}

/// Solve P·T̂ = Â − Γ̂ for the stacked blocks T₁..Tₙ by forward
/// substitution on the unit lower triangular Toeplitz structure.
pub fn solve_t_hat<T: Scalar>(
    a: &[Mat<T>],
    targets: &TargetCoefficients<T>,
) -> Result<Vec<Mat<T>>> {
    let n = a.len();
    if targets.n() != n {
        return Err(Error::Dimension("coefficient and target counts differ".into()));
    }
    let mut t: Vec<Mat<T>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = a[i].sub(&targets.gammas[i]);
        for (j, tj) in t.iter().enumerate() {
            // P block (i,j) = A_{i-j} for j < i.
            acc = acc.sub(&a[i - j - 1].matmul(tj));
        }
        t.push(acc);
    }
    Ok(t)
}

/// Reduce an unreduced lower block Hessenberg matrix to companion form:
/// returns triangular factors S₁..S_{n−1}, their product S, and the
/// companion image Φ = S·Z·S⁻¹.
pub fn hessenberg_to_frobenius<T: Scalar>(
    z: &BlockMatrix<T>,
    tol: f64,
) -> Result<ReductionResult<T>> {
    if z.q != z.r {
        return Err(Error::Dimension("reduction input must be square".into()));
    }
    let n = z.q;
    let s = z.s;
    if n == 1 {
        return Ok(ReductionResult {
            factors: vec![],
            s: BlockMatrix::identity(1, s),
            phi: z.clone(),
            residual: 0.0,
        });
    }
    for i in 0..n - 1 {
        if z.block(i, i + 1).det().magnitude() <= tol {
            return Err(Error::SingularBlock { index: i + 1 });
        }
    }

    // First factor: unit first block row, then the first n−1 block rows of Z.
    let mut s1 = BlockMatrix::zeros(n, n, s);
    s1.set_block(0, 0, &Mat::identity(s));
    for i in 0..n - 1 {
        for j in 0..n {
            s1.set_block(i + 1, j, &z.block(i, j));
        }
    }
    let mut factors = vec![s1];
    // Each further factor embeds the previous one shifted one block down and
    // right, with I in the leading block.
    for _ in 2..n {
        let prev = factors.last().unwrap();
        let mut next = BlockMatrix::zeros(n, n, s);
        next.set_block(0, 0, &Mat::identity(s));
        for i in 1..n {
            for j in 1..n {
                next.set_block(i, j, &prev.block(i - 1, j - 1));
            }
        }
        factors.push(next);
    }

    let mut s_mat = factors[0].clone();
    for f in &factors[1..] {
        s_mat = f.matmul(&s_mat);
    }
    let s_inv = lower_block_triangular_inverse(&s_mat)?;
    let image = s_mat.matmul(z).matmul(&s_inv);

    // Measure deviation from the forced entries (zeros and identities in the
    // first n−1 block rows), then emit the exact pattern with the last block
    // row read off the image.
    let eye = Mat::identity(s);
    let mut residual = 0.0f64;
    for i in 0..n - 1 {
        for j in 0..n {
            let expected = if j == i + 1 { eye.clone() } else { Mat::zeros(s, s) };
            residual = residual.max(image.block(i, j).sub(&expected).max_norm());
        }
    }
    if residual > tol {
        return Err(Error::Numeric(format!(
            "reduction image deviates from companion form by {residual:e}"
        )));
    }
    let mut phi = shift_matrix(n, s);
    for j in 0..n {
        phi.set_block(n - 1, j, &image.block(n - 1, j));
    }
    Ok(ReductionResult { factors, s: s_mat, phi, residual })
}
