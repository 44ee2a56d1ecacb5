//! Dense row-major matrices generic over the scalar backend.

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use nalgebra::DMatrix;

/// Dense matrix with entries of type `T`, row-major storage.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> std::fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from integer literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect())
            .expect("literal rows must be rectangular")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = value;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(factor)).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).add(&a.mul(other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out.set(
                            i * other.rows + p,
                            j * other.cols + q,
                            a.mul(other.get(p, q)),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(row0 + i, col0 + j).clone());
            }
        }
        out
    }

    pub fn set_submatrix(&mut self, row0: usize, col0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row0 + i, col0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Column-by-column unroll into a column vector (`vecc`).
    pub fn vecc(&self) -> Self {
        let mut out = Mat::zeros(self.rows * self.cols, 1);
        let mut idx = 0;
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(idx, 0, self.get(i, j).clone());
                idx += 1;
            }
        }
        out
    }

    /// Row-by-row unroll into a row vector (`vecr`).
    pub fn vecr(&self) -> Self {
        let mut out = Mat::zeros(1, self.rows * self.cols);
        let mut idx = 0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(0, idx, self.get(i, j).clone());
                idx += 1;
            }
        }
        out
    }

    /// Inverse of `vecc` for a target shape.
    pub fn vecc_inverse(&self, rows: usize, cols: usize) -> Result<Self> {
        if self.cols != 1 || self.rows != rows * cols {
            return Err(Error::Dimension(format!(
                "vecc inverse: expected {}x1 column, got {}x{}",
                rows * cols,
                self.rows,
                self.cols
            )));
        }
        let mut out = Mat::zeros(rows, cols);
        let mut idx = 0;
        for j in 0..cols {
            for i in 0..rows {
                out.set(i, j, self.get(idx, 0).clone());
                idx += 1;
            }
        }
        Ok(out)
    }

    /// Entrywise max-magnitude norm.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Whether the matrix is a scalar multiple of the identity; returns the
    /// factor when it is.
    pub fn as_scalar_multiple_of_identity(&self, tol: f64) -> Option<T> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let factor = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expected = if i == j { factor.clone() } else { T::zero() };
                if self.get(i, j).sub(&expected).magnitude() > tol {
                    return None;
                }
            }
        }
        Some(factor)
    }

    /// Solve the square system `self * x = rhs` by Gaussian elimination with
    /// partial pivoting (largest magnitude).
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() || self.rows != rhs.rows {
            return Err(Error::Dimension("solve: shape mismatch".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    a.get(i, col).magnitude().total_cmp(&a.get(j, col).magnitude())
                })
                .unwrap();
            if a.get(pivot_row, col).is_zero() {
                return Err(Error::Numeric("singular matrix in solve".into()));
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                b.swap_rows(pivot_row, col);
            }
            let pivot = a.get(col, col).clone();
            for i in (col + 1)..n {
                let factor = a.get(i, col).div(&pivot);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(col, j)));
                    a.set(i, j, v);
                }
                for j in 0..b.cols {
                    let v = b.get(i, j).sub(&factor.mul(b.get(col, j)));
                    b.set(i, j, v);
                }
            }
        }
        let mut x = Mat::zeros(n, b.cols);
        for j in 0..b.cols {
            for i in (0..n).rev() {
                let mut acc = b.get(i, j).clone();
                for l in (i + 1)..n {
                    acc = acc.sub(&a.get(i, l).mul(x.get(l, j)));
                }
                x.set(i, j, acc.div(a.get(i, i)));
            }
        }
        Ok(x)
    }

    /// Inverse by elimination against the identity.
    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.rows))
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for col in 0..self.cols {
            self.data.swap(i * self.cols + col, j * self.cols + col);
        }
    }

    /// Rank by elimination, treating pivots with magnitude ≤ `tol` as zero.
    pub fn rank_elimination(&self, tol: f64) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            if row >= a.rows {
                break;
            }
            let pivot_row = (row..a.rows)
                .max_by(|&i, &j| a.get(i, col).magnitude().total_cmp(&a.get(j, col).magnitude()))
                .unwrap();
            if a.get(pivot_row, col).magnitude() <= tol {
                continue;
            }
            a.swap_rows(pivot_row, row);
            let pivot = a.get(row, col).clone();
            for i in (row + 1)..a.rows {
                let factor = a.get(i, col).div(&pivot);
                if factor.is_zero() {
                    continue;
                }
                for j in col..a.cols {
                    let v = a.get(i, j).sub(&factor.mul(a.get(row, j)));
                    a.set(i, j, v);
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }

    /// Determinant by elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| a.get(i, col).magnitude().total_cmp(&a.get(j, col).magnitude()))
                .unwrap();
            if a.get(pivot_row, col).is_zero() {
                return T::zero();
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = det.neg();
            }
            let pivot = a.get(col, col).clone();
            det = det.mul(&pivot);
            for i in (col + 1)..n {
                let factor = a.get(i, col).div(&pivot);
                for j in col..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(col, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }
}

impl Mat<f64> {
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| *self.get(i, j))
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let mut out = Mat::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }
}

/// Rank and least-squares backend, specialized per scalar type.
pub trait LinearOps: Scalar + Sized {
    /// Numerical rank: singular values above `tol` in float mode, exact
    /// elimination rank in rational mode. `tol = None` selects the default
    /// `max(rows, cols) · eps · σ_max` formula (float mode only).
    fn rank(mat: &Mat<Self>, tol: Option<f64>) -> Result<usize>;

    /// Minimum-norm solution of `A x = b` (per column of `b`). Returns the
    /// least-norm least-squares solution; the caller is responsible for
    /// checking the residual when consistency is required.
    fn min_norm_solve(a: &Mat<Self>, b: &Mat<Self>, tol: f64) -> Result<Mat<Self>>;

    /// Monic characteristic polynomial coefficients `(δ₁, …, δ_r)` of a
    /// square matrix, so that `χ(λ) = λ^r + δ₁ λ^{r-1} + … + δ_r`.
    fn char_poly(mat: &Mat<Self>) -> Vec<Self>;

    /// Eigenvalues as (re, im) pairs. In exact mode this is available only
    /// for triangular matrices (read off the diagonal); `None` otherwise.
    fn eigenvalues(mat: &Mat<Self>) -> Option<Vec<(f64, f64)>>;
}

impl LinearOps for f64 {
    fn rank(mat: &Mat<f64>, tol: Option<f64>) -> Result<usize> {
        if mat.nrows() == 0 || mat.ncols() == 0 {
            return Ok(0);
        }
        let svd = mat.to_dmatrix().svd(false, false);
        let sigma = &svd.singular_values;
        let sigma_max = sigma.iter().cloned().fold(0.0f64, f64::max);
        let tol = tol.unwrap_or_else(|| {
            mat.nrows().max(mat.ncols()) as f64 * f64::EPSILON * sigma_max
        });
        Ok(sigma.iter().filter(|&&v| v > tol).count())
    }

    fn min_norm_solve(a: &Mat<f64>, b: &Mat<f64>, tol: f64) -> Result<Mat<f64>> {
        if a.nrows() != b.nrows() {
            return Err(Error::Dimension("min_norm_solve: shape mismatch".into()));
        }
        let da = a.to_dmatrix();
        let db = b.to_dmatrix();
        // Full row rank: use x = Aᵀ(AAᵀ)⁻¹b. Otherwise least-norm least
        // squares through the pseudoinverse.
        let gram = &da * da.transpose();
        if let Some(gram_inv) = gram.clone().try_inverse() {
            let cond_ok = Self::rank(a, Some(tol.max(0.0)))? == a.nrows();
            if cond_ok {
                let x = da.transpose() * gram_inv * &db;
                return Ok(Mat::from_dmatrix(&x));
            }
        }
        let svd = da.clone().svd(true, true);
        let eps = if tol > 0.0 {
            tol
        } else {
            a.nrows().max(a.ncols()) as f64
                * f64::EPSILON
                * svd.singular_values.iter().cloned().fold(0.0f64, f64::max)
        };
        let pinv = svd
            .pseudo_inverse(eps)
            .map_err(|e| Error::Numeric(format!("SVD pseudoinverse failed: {e}")))?;
        Ok(Mat::from_dmatrix(&(pinv * db)))
    }

    fn char_poly(mat: &Mat<f64>) -> Vec<f64> {
        // Reduce to upper Hessenberg form, then expand det(λI − H) by the
        // standard leading-principal-minor recurrence.
        let n = mat.nrows();
        if n == 0 {
            return vec![];
        }
        let h = nalgebra::linalg::Hessenberg::new(mat.to_dmatrix()).h();
        // p_k(λ) = char poly of the leading k×k block.
        // p_k = (λ − h_kk) p_{k-1} − Σ_{i<k} h_{ik} (Π_{j=i..k-1} h_{j+1,j}) p_{i-1}
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
        for k in 1..=n {
            let mut p = poly_mul_linear(&polys[k - 1], h[(k - 1, k - 1)]);
            let mut subdiag_prod = 1.0;
            for i in (1..k).rev() {
                subdiag_prod *= h[(i, i - 1)];
                let coeff = h[(i - 1, k - 1)] * subdiag_prod;
                poly_axpy(&mut p, -coeff, &polys[i - 1]);
            }
            polys.push(p);
        }
        let full = polys.pop().unwrap();
        // Monic by construction; strip the leading 1.
        full[1..].to_vec()
    }

    fn eigenvalues(mat: &Mat<f64>) -> Option<Vec<(f64, f64)>> {
        let eigs = mat.to_dmatrix().complex_eigenvalues();
        Some(eigs.iter().map(|z| (z.re, z.im)).collect())
    }
}

/// Multiply polynomial (descending coefficients, monic leading term included)
/// by (λ − root).
fn poly_mul_linear(p: &[f64], root: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c;
        out[i + 1] -= c * root;
    }
    out
}

fn poly_axpy(p: &mut [f64], factor: f64, q: &[f64]) {
    let offset = p.len() - q.len();
    for (i, &c) in q.iter().enumerate() {
        p[offset + i] += factor * c;
    }
}

impl LinearOps for Rational {
    fn rank(mat: &Mat<Rational>, _tol: Option<f64>) -> Result<usize> {
        Ok(mat.rank_elimination(0.0))
    }

    fn min_norm_solve(a: &Mat<Rational>, b: &Mat<Rational>, _tol: f64) -> Result<Mat<Rational>> {
        if a.nrows() != b.nrows() {
            return Err(Error::Dimension("min_norm_solve: shape mismatch".into()));
        }
        // Minimum-norm solution x = Aᵀy with (AAᵀ)y = b; the Gram system is
        // consistent exactly when b ∈ range(A), including rank-deficient A.
        let at = a.transpose();
        let gram = a.matmul(&at);
        if let Some(y) = solve_consistent_rational(&gram, b) {
            return Ok(at.matmul(&y));
        }
        // Inconsistent: fall back to a least-squares solution of the normal
        // equations so the caller can report the residual.
        let ata = at.matmul(a);
        let atb = at.matmul(b);
        solve_consistent_rational(&ata, &atb)
            .ok_or_else(|| Error::Numeric("normal equations unexpectedly inconsistent".into()))
    }

    fn char_poly(mat: &Mat<Rational>) -> Vec<Rational> {
        // Faddeev–LeVerrier.
        let n = mat.nrows();
        let mut coeffs = Vec::with_capacity(n);
        let mut m = Mat::<Rational>::zeros(n, n);
        let mut c_prev = Rational::one();
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{k-1} I
            let mut am = mat.matmul(&m);
            for i in 0..n {
                let v = am.get(i, i).add(&c_prev);
                am.set(i, i, v);
            }
            m = am;
            let trace = {
                let prod = mat.matmul(&m);
                let mut acc = Rational::zero();
                for i in 0..n {
                    acc = acc.add(prod.get(i, i));
                }
                acc
            };
            let c_k = trace.div(&Rational::from_i64(k as i64)).neg();
            coeffs.push(c_k.clone());
            c_prev = c_k;
        }
        coeffs
    }

    fn eigenvalues(mat: &Mat<Rational>) -> Option<Vec<(f64, f64)>> {
        let n = mat.nrows();
        let lower = (0..n).all(|i| ((i + 1)..n).all(|j| mat.get(i, j).is_zero()));
        let upper = (0..n).all(|i| (0..i).all(|j| mat.get(i, j).is_zero()));
        if !lower && !upper {
            return None;
        }
        Some((0..n).map(|i| (mat.get(i, i).to_f64(), 0.0)).collect())
    }
}

/// Solve `A x = b` for a possibly singular square (or rectangular) rational
/// system; returns a particular solution when consistent, `None` otherwise.
fn solve_consistent_rational(a: &Mat<Rational>, b: &Mat<Rational>) -> Option<Mat<Rational>> {
    let rows = a.nrows();
    let cols = a.ncols();
    let mut aug = Mat::<Rational>::zeros(rows, cols + b.ncols());
    aug.set_submatrix(0, 0, a);
    aug.set_submatrix(0, cols, b);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot_row = (row..rows).find(|&i| !aug.get(i, col).is_zero());
        let Some(pivot_row) = pivot_row else { continue };
        if pivot_row != row {
            for j in 0..aug.ncols() {
                let vi = aug.get(pivot_row, j).clone();
                let vj = aug.get(row, j).clone();
                aug.set(pivot_row, j, vj);
                aug.set(row, j, vi);
            }
        }
        let pivot = aug.get(row, col).clone();
        for i in 0..rows {
            if i == row {
                continue;
            }
            let factor = aug.get(i, col).div(&pivot);
            if factor.is_zero() {
                continue;
            }
            for j in col..aug.ncols() {
                let v = aug.get(i, j).sub(&factor.mul(aug.get(row, j)));
                aug.set(i, j, v);
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    // Inconsistency: a zero row of A with nonzero RHS.
    for i in row..rows {
        for j in cols..aug.ncols() {
            if !aug.get(i, j).is_zero() {
                return None;
            }
        }
    }
    let mut x = Mat::<Rational>::zeros(cols, b.ncols());
    for &(r, c) in &pivots {
        let pivot = aug.get(r, c).clone();
        for j in 0..b.ncols() {
            x.set(c, j, aug.get(r, cols + j).div(&pivot));
        }
    }
    Some(x)
}
