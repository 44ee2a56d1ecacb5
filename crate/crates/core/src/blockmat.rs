//! Block-structured matrices and the block calculus: Kronecker product,
//! star product, block trace, block transposition and the four unrollings.

use crate::error::{Error, Result};
use crate::mat::{LinearOps, Mat};
use crate::scalar::Scalar;

/// Traversal order and layout of an unrolling. The first letter is the block
/// traversal order (column-major or row-major over block indices), the second
/// is the shape of the result (single block row or single block column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnrollMode {
    /// Column-major traversal into one block row.
    CR,
    /// Row-major traversal into one block row.
    RR,
    /// Row-major traversal into one block column.
    RC,
    /// Column-major traversal into one block column.
    CC,
}

/// Dense matrix carrying block-structure metadata: `q` block rows and `r`
/// block columns of square `s`×`s` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix<T: Scalar> {
    pub mat: Mat<T>,
    pub s: usize,
    pub q: usize,
    pub r: usize,
}

impl<T: Scalar> BlockMatrix<T> {
    pub fn new(mat: Mat<T>, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::Validation("block size must be at least 1".into()));
        }
        if mat.nrows() % s != 0 || mat.ncols() % s != 0 {
            return Err(Error::Dimension(format!(
                "matrix {}x{} is not a multiple of block size {}",
                mat.nrows(),
                mat.ncols(),
                s
            )));
        }
        let q = mat.nrows() / s;
        let r = mat.ncols() / s;
        Ok(BlockMatrix { mat, s, q, r })
    }

    pub fn zeros(q: usize, r: usize, s: usize) -> Self {
        BlockMatrix { mat: Mat::zeros(q * s, r * s), s, q, r }
    }

    pub fn identity(q: usize, s: usize) -> Self {
        BlockMatrix { mat: Mat::identity(q * s), s, q, r: q }
    }

    /// Block at 0-based block indices `(i, j)`.
    pub fn block(&self, i: usize, j: usize) -> Mat<T> {
        self.mat.submatrix(i * self.s, j * self.s, self.s, self.s)
    }

    /// Overwrite the block at 0-based block indices `(i, j)`.
    pub fn set_block(&mut self, i: usize, j: usize, block: &Mat<T>) {
        assert_eq!((block.nrows(), block.ncols()), (self.s, self.s));
        self.mat.set_submatrix(i * self.s, j * self.s, block);
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.s, other.s);
        BlockMatrix { mat: self.mat.matmul(&other.mat), s: self.s, q: self.q, r: other.r }
    }

    pub fn add(&self, other: &Self) -> Self {
        BlockMatrix { mat: self.mat.add(&other.mat), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BlockMatrix { mat: self.mat.sub(&other.mat), ..self.clone() }
    }

    /// Star product: Z with blocks Z_iν = Σ_j  X_ij ⊗ Y_jν of size s².
    pub fn star(&self, other: &Self) -> Result<BlockMatrix<T>> {
        if self.s != other.s {
            return Err(Error::Dimension("star: block sizes differ".into()));
        }
        if self.r != other.q {
            return Err(Error::Dimension(format!(
                "star: left has {} block columns, right has {} block rows",
                self.r, other.q
            )));
        }
        let s = self.s;
        let s2 = s * s;
        let mut out = BlockMatrix::zeros(self.q, other.r, s2);
        for i in 0..self.q {
            for nu in 0..other.r {
                let mut acc = Mat::zeros(s2, s2);
                for j in 0..self.r {
                    acc = acc.add(&self.block(i, j).kron(&other.block(j, nu)));
                }
                out.set_block(i, nu, &acc);
            }
        }
        Ok(out)
    }

    /// Block trace: sum of the diagonal s×s blocks.
    pub fn block_trace(&self) -> Result<Mat<T>> {
        if self.q != self.r {
            return Err(Error::Dimension("block_trace: block structure not square".into()));
        }
        let mut acc = Mat::zeros(self.s, self.s);
        for i in 0..self.q {
            acc = acc.add(&self.block(i, i));
        }
        Ok(acc)
    }

    /// Block transposition: blocks are permuted, block interiors untouched.
    pub fn block_transpose(&self) -> Self {
        let mut out = BlockMatrix::zeros(self.r, self.q, self.s);
        for i in 0..self.q {
            for j in 0..self.r {
                out.set_block(j, i, &self.block(i, j));
            }
        }
        out
    }

    /// Ordinary scalar transpose, keeping block size.
    pub fn transpose(&self) -> Self {
        BlockMatrix { mat: self.mat.transpose(), s: self.s, q: self.r, r: self.q }
    }

    fn block_sequence(&self, mode: UnrollMode) -> Vec<Mat<T>> {
        let mut seq = Vec::with_capacity(self.q * self.r);
        match mode {
            UnrollMode::CR | UnrollMode::CC => {
                for j in 0..self.r {
                    for i in 0..self.q {
                        seq.push(self.block(i, j));
                    }
                }
            }
            UnrollMode::RR | UnrollMode::RC => {
                for i in 0..self.q {
                    for j in 0..self.r {
                        seq.push(self.block(i, j));
                    }
                }
            }
        }
        seq
    }

    /// Unroll the blocks into a single block row (CR, RR) or a single block
    /// column (RC, CC).
    pub fn unroll(&self, mode: UnrollMode) -> BlockMatrix<T> {
        let seq = self.block_sequence(mode);
        match mode {
            UnrollMode::CR | UnrollMode::RR => {
                let mut out = BlockMatrix::zeros(1, seq.len(), self.s);
                for (idx, b) in seq.iter().enumerate() {
                    out.set_block(0, idx, b);
                }
                out
            }
            UnrollMode::RC | UnrollMode::CC => {
                let mut out = BlockMatrix::zeros(seq.len(), 1, self.s);
                for (idx, b) in seq.iter().enumerate() {
                    out.set_block(idx, 0, b);
                }
                out
            }
        }
    }

    /// Reconstruct the q×r block matrix whose unrolling in `mode` is `self`.
    pub fn unroll_inverse(&self, mode: UnrollMode, q: usize, r: usize) -> Result<BlockMatrix<T>> {
        let count = q * r;
        let shape_ok = match mode {
            UnrollMode::CR | UnrollMode::RR => self.q == 1 && self.r == count,
            UnrollMode::RC | UnrollMode::CC => self.q == count && self.r == 1,
        };
        if !shape_ok {
            return Err(Error::Dimension(format!(
                "unroll_inverse: input {}x{} blocks does not match target {}x{}",
                self.q, self.r, q, r
            )));
        }
        let get = |idx: usize| match mode {
            UnrollMode::CR | UnrollMode::RR => self.block(0, idx),
            UnrollMode::RC | UnrollMode::CC => self.block(idx, 0),
        };
        let mut out = BlockMatrix::zeros(q, r, self.s);
        let mut idx = 0;
        match mode {
            UnrollMode::CR | UnrollMode::CC => {
                for j in 0..r {
                    for i in 0..q {
                        out.set_block(i, j, &get(idx));
                        idx += 1;
                    }
                }
            }
            UnrollMode::RR | UnrollMode::RC => {
                for i in 0..q {
                    for j in 0..r {
                        out.set_block(i, j, &get(idx));
                        idx += 1;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether every block is a scalar multiple of the identity.
    pub fn has_scalar_blocks(&self, tol: f64) -> bool {
        for i in 0..self.q {
            for j in 0..self.r {
                if self.block(i, j).as_scalar_multiple_of_identity(tol).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Collapse a matrix with scalar blocks to its n×m factor, so that
    /// the original equals factor ⊗ I.
    pub fn scalar_block_factor(&self, tol: f64) -> Option<Mat<T>> {
        let mut out = Mat::zeros(self.q, self.r);
        for i in 0..self.q {
            for j in 0..self.r {
                out.set(i, j, self.block(i, j).as_scalar_multiple_of_identity(tol)?);
            }
        }
        Some(out)
    }
}

impl<T: LinearOps> BlockMatrix<T> {
    /// Numerical rank. `tol = None` selects the default
    /// `max(rows, cols) · eps · σ_max` threshold in float mode; exact mode
    /// ignores the tolerance.
    pub fn rank_with_tolerance(&self, tol: Option<f64>) -> Result<usize> {
        T::rank(&self.mat, tol)
    }
}

/// Shift matrix J ⊗ I of size ns×ns, with J the n×n matrix having ones on
/// the superdiagonal.
pub fn shift_matrix<T: Scalar>(n: usize, s: usize) -> BlockMatrix<T> {
    let mut out = BlockMatrix::zeros(n, n, s);
    let eye = Mat::identity(s);
    for i in 0..n.saturating_sub(1) {
        out.set_block(i, i + 1, &eye);
    }
    out
}
