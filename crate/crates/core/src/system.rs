//! System models: block state-space triples, target coefficient lists,
//! structural-form validation and the higher-order ODE converter.

use crate::blockmat::BlockMatrix;
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::reduction::build_p;
use crate::scalar::Scalar;

/// Declared structural form of a system. The form is asserted by the caller
/// and checked by `validate`, never inferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Lower block Frobenius (companion) coefficient matrix with the
    /// matching zero patterns in G and H.
    Frobenius,
    /// Unreduced lower block Hessenberg coefficient matrix with the same
    /// zero patterns in G and H.
    Hessenberg,
    /// No structural constraints; accepted for storage and verification but
    /// rejected by synthesis.
    General,
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Form::Frobenius => write!(f, "frobenius"),
            Form::Hessenberg => write!(f, "hessenberg"),
            Form::General => write!(f, "general"),
        }
    }
}

/// A structural violation found by `validate`. Block indices are 1-based to
/// match the conventions used in the documentation.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub matrix: &'static str,
    pub block: (usize, usize),
    pub condition: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} block ({},{}): {}", self.matrix, self.block.0, self.block.1, self.condition)
    }
}

/// State-space system ẋ = Fx + Gu, y = Hx with n×n, n×m, k×n block
/// coefficients of block size s.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem<T: Scalar> {
    pub f: BlockMatrix<T>,
    pub g: BlockMatrix<T>,
    pub h: BlockMatrix<T>,
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub k: usize,
    pub p: usize,
    pub form: Form,
}

/// Ordered target coefficients Γ₁..Γₙ of the monic matrix polynomial
/// Iλⁿ + Γ₁λⁿ⁻¹ + … + Γₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetCoefficients<T: Scalar> {
    pub gammas: Vec<Mat<T>>,
}

impl<T: Scalar> TargetCoefficients<T> {
    pub fn new(gammas: Vec<Mat<T>>) -> Result<Self> {
        let s = gammas.first().map_or(0, |g| g.nrows());
        if gammas.is_empty() {
            return Err(Error::Validation("target coefficient list is empty".into()));
        }
        for g in &gammas {
            if g.nrows() != s || g.ncols() != s {
                return Err(Error::Dimension("target blocks must all be square of one size".into()));
            }
        }
        Ok(TargetCoefficients { gammas })
    }

    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    pub fn s(&self) -> usize {
        self.gammas[0].nrows()
    }
}

/// Higher-order system of ODEs
/// y^{(n)} + A₁y^{(n-1)} + … + Aₙy = Σ B_{lα} u_α^{(n-l)},
/// observed through z_β = Σ C_{νβ} y^{(ν-1)}.
#[derive(Debug, Clone, PartialEq)]
pub struct HigherOrderOde<T: Scalar> {
    /// A₁..Aₙ.
    pub a: Vec<Mat<T>>,
    /// b[l-p][α-1] = B_{lα}, l = p..n.
    pub b: Vec<Vec<Mat<T>>>,
    /// c[ν-1][β-1] = C_{νβ}, ν = 1..p.
    pub c: Vec<Vec<Mat<T>>>,
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub k: usize,
    pub p: usize,
}

impl<T: Scalar> BlockSystem<T> {
    pub fn new(
        f: BlockMatrix<T>,
        g: BlockMatrix<T>,
        h: BlockMatrix<T>,
        p: usize,
        form: Form,
    ) -> Result<Self> {
        let s = f.s;
        if g.s != s || h.s != s {
            return Err(Error::Dimension("F, G, H must share one block size".into()));
        }
        if f.q != f.r {
            return Err(Error::Dimension("F must be square in blocks".into()));
        }
        let n = f.q;
        if g.q != n {
            return Err(Error::Dimension("G must have n block rows".into()));
        }
        if h.r != n {
            return Err(Error::Dimension("H must have n block columns".into()));
        }
        if p == 0 || p > n {
            return Err(Error::Validation(format!("p = {} must lie in 1..{}", p, n)));
        }
        Ok(BlockSystem { m: g.r, k: h.q, f, g, h, n, s, p, form })
    }

    /// Check the declared structural form. Returns one entry per violated
    /// condition; an empty list means the system matches its form.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n;
        let eye = Mat::identity(self.s);
        match self.form {
            Form::General => {}
            Form::Frobenius => {
                for i in 0..n.saturating_sub(1) {
                    for j in 0..n {
                        let b = self.f.block(i, j);
                        if j == i + 1 {
                            if b.sub(&eye).max_norm() > tol {
                                out.push(Violation {
                                    matrix: "F",
                                    block: (i + 1, j + 1),
                                    condition: "superdiagonal block must be I".into(),
                                });
                            }
                        } else if b.max_norm() > tol {
                            out.push(Violation {
                                matrix: "F",
                                block: (i + 1, j + 1),
                                condition: "block must be zero above the last block row".into(),
                            });
                        }
                    }
                }
            }
            Form::Hessenberg => {
                for i in 0..n {
                    for j in (i + 2)..n {
                        if self.f.block(i, j).max_norm() > tol {
                            out.push(Violation {
                                matrix: "F",
                                block: (i + 1, j + 1),
                                condition: "block above the superdiagonal must be zero".into(),
                            });
                        }
                    }
                }
                for i in 0..n.saturating_sub(1) {
                    if self.f.block(i, i + 1).det().magnitude() <= tol {
                        out.push(Violation {
                            matrix: "F",
                            block: (i + 1, i + 2),
                            condition: "superdiagonal block must be nonsingular".into(),
                        });
                    }
                }
            }
        }
        if self.form != Form::General {
            for i in 0..self.p.saturating_sub(1) {
                for j in 0..self.m {
                    if self.g.block(i, j).max_norm() > tol {
                        out.push(Violation {
                            matrix: "G",
                            block: (i + 1, j + 1),
                            condition: format!("first {} block rows must be zero", self.p - 1),
                        });
                    }
                }
            }
            for i in 0..self.k {
                for j in self.p..n {
                    if self.h.block(i, j).max_norm() > tol {
                        out.push(Violation {
                            matrix: "H",
                            block: (i + 1, j + 1),
                            condition: format!("last {} block columns must be zero", n - self.p),
                        });
                    }
                }
            }
        }
        out
    }

    /// Closed-loop coefficient matrix F + GQH for the static output
    /// feedback u = Qy.
    pub fn closed_loop(&self, q: &BlockMatrix<T>) -> Result<BlockMatrix<T>> {
        if q.s != self.s || q.q != self.m || q.r != self.k {
            return Err(Error::Dimension(format!(
                "gain must be {}x{} blocks of size {}",
                self.m, self.k, self.s
            )));
        }
        Ok(self.f.add(&self.g.matmul(q).matmul(&self.h)))
    }

    /// Coefficients A₁..Aₙ read off the last block row of a Frobenius-form
    /// F (the row stores −Aₙ, …, −A₁).
    pub fn last_row_coefficients(&self) -> Vec<Mat<T>> {
        frobenius_coefficients(&self.f)
    }
}

/// Companion matrix with I on the block superdiagonal and last block row
/// (−Γₙ, …, −Γ₁).
pub fn frobenius_from_coeffs<T: Scalar>(targets: &TargetCoefficients<T>) -> BlockMatrix<T> {
    let n = targets.n();
    let s = targets.s();
    let mut phi = BlockMatrix::zeros(n, n, s);
    let eye = Mat::identity(s);
    for i in 0..n.saturating_sub(1) {
        phi.set_block(i, i + 1, &eye);
    }
    for (i, gamma) in targets.gammas.iter().enumerate() {
        // Γ_{i+1} sits at block column n-1-i with a minus sign.
        phi.set_block(n - 1, n - 1 - i, &gamma.neg());
    }
    phi
}

/// Inverse of `frobenius_from_coeffs` on the last block row: returns
/// Γ₁..Γₙ of a Frobenius-form matrix.
pub fn frobenius_coefficients<T: Scalar>(phi: &BlockMatrix<T>) -> Vec<Mat<T>> {
    let n = phi.q;
    (0..n).map(|i| phi.block(n - 1, n - 1 - i).neg()).collect()
}

/// Convert a higher-order ODE system to an equivalent block state-space
/// system in Frobenius form.
pub fn ode_to_state_space<T: Scalar>(ode: &HigherOrderOde<T>) -> Result<BlockSystem<T>> {
    let (n, s, m, k, p) = (ode.n, ode.s, ode.m, ode.k, ode.p);
    if ode.a.len() != n || p == 0 || p > n {
        return Err(Error::Validation("coefficient list length or p out of range".into()));
    }
    if ode.b.len() != n - p + 1 || ode.b.iter().any(|r| r.len() != m) {
        return Err(Error::Validation("input coefficient table has wrong shape".into()));
    }
    if ode.c.len() != p || ode.c.iter().any(|r| r.len() != k) {
        return Err(Error::Validation("output coefficient table has wrong shape".into()));
    }
    let targets = TargetCoefficients::new(ode.a.clone())?;
    let f = frobenius_from_coeffs(&targets);

    // Stack the forcing coefficients into the lower part of the input matrix.
    let mut b_full = BlockMatrix::zeros(n, m, s);
    for l in p..=n {
        for alpha in 0..m {
            b_full.set_block(l - 1, alpha, &ode.b[l - p][alpha]);
        }
    }
    let p_mat = build_p(&ode.a);
    let g = BlockMatrix::new(p_mat.mat.solve(&b_full.mat)?, s)?;

    // Output map: h = (stacked C)^𝒯, so block (β, ν) of H is C_{ν+1, β+1}.
    let mut c_full = BlockMatrix::zeros(n, k, s);
    for nu in 0..p {
        for beta in 0..k {
            c_full.set_block(nu, beta, &ode.c[nu][beta]);
        }
    }
    let h = c_full.block_transpose();

    BlockSystem::new(f, g, h, p, Form::Frobenius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::Rational;

    #[test]
    fn frobenius_from_coeffs_small() {
        let g1 = Mat::<Rational>::from_i64(&[&[7]]);
        let t = TargetCoefficients::new(vec![g1]).unwrap();
        let phi = frobenius_from_coeffs(&t);
        assert_eq!(phi.mat, Mat::from_i64(&[&[-7]]));

        let zeros = TargetCoefficients::new(vec![Mat::<Rational>::zeros(2, 2); 3]).unwrap();
        let phi = frobenius_from_coeffs(&zeros);
        assert_eq!(phi.mat, crate::blockmat::shift_matrix::<Rational>(3, 2).mat);
    }

    #[test]
    fn frobenius_coefficients_round_trip() {
        let t = TargetCoefficients::new(vec![
            Mat::<Rational>::from_i64(&[&[1, 2], &[3, 4]]),
            Mat::from_i64(&[&[0, -1], &[5, 0]]),
        ])
        .unwrap();
        let phi = frobenius_from_coeffs(&t);
        assert_eq!(frobenius_coefficients(&phi), t.gammas);
    }

    #[test]
    fn validate_example1_frobenius() {
        let sys = fixtures::example1_system::<Rational>();
        assert!(sys.validate(0.0).is_empty());

        let mut broken = sys.clone();
        broken.f.set_block(0, 1, &Mat::zeros(2, 2));
        let violations = broken.validate(0.0);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].matrix, "F");
        assert_eq!(violations[0].block, (1, 2));
    }

    #[test]
    fn validate_example2_hessenberg() {
        let sys = fixtures::example2_system::<Rational>();
        assert!(sys.validate(0.0).is_empty());
    }

    #[test]
    fn closed_loop_matches_example1() {
        let sys = fixtures::example1_system::<Rational>();
        let zero_gain = BlockMatrix::zeros(sys.m, sys.k, sys.s);
        assert_eq!(sys.closed_loop(&zero_gain).unwrap().mat, sys.f.mat);

        let q = fixtures::example1_gain::<Rational>();
        let cl = sys.closed_loop(&q).unwrap();
        assert_eq!(cl.mat, fixtures::example1_closed_loop::<Rational>());
    }

    #[test]
    fn closed_loop_matches_example2() {
        let sys = fixtures::example2_system::<Rational>();
        let q = fixtures::example2_gain::<Rational>();
        let cl = sys.closed_loop(&q).unwrap();
        assert_eq!(cl.mat, fixtures::example2_closed_loop::<Rational>());
    }

    #[test]
    fn ode_round_trip_n1() {
        let a1 = Mat::<Rational>::from_i64(&[&[2, 1], &[0, 3]]);
        let b = Mat::from_i64(&[&[1, 0], &[1, 1]]);
        let c = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        let ode = HigherOrderOde {
            a: vec![a1.clone()],
            b: vec![vec![b.clone()]],
            c: vec![vec![c.clone()]],
            n: 1,
            s: 2,
            m: 1,
            k: 1,
            p: 1,
        };
        let sys = ode_to_state_space(&ode).unwrap();
        assert_eq!(sys.f.mat, a1.neg());
        assert_eq!(sys.g.mat, b);
        assert_eq!(sys.h.mat, c);
    }

    #[test]
    fn ode_b_recovery() {
        // Multiplying the returned input matrix back by P reproduces the
        // stacked forcing coefficients.
        let a: Vec<Mat<Rational>> = vec![
            Mat::from_i64(&[&[0, 1], &[2, 0]]),
            Mat::from_i64(&[&[1, 1], &[0, 1]]),
            Mat::from_i64(&[&[-1, 0], &[3, 2]]),
        ];
        let b2 = Mat::from_i64(&[&[1, 0], &[0, 2]]);
        let b3 = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        let c1 = Mat::from_i64(&[&[1, 0], &[0, 1]]);
        let c2 = Mat::from_i64(&[&[2, 0], &[1, 1]]);
        let ode = HigherOrderOde {
            a: a.clone(),
            b: vec![vec![b2.clone()], vec![b3.clone()]],
            c: vec![vec![c1], vec![c2]],
            n: 3,
            s: 2,
            m: 1,
            k: 1,
            p: 2,
        };
        let sys = ode_to_state_space(&ode).unwrap();
        assert!(sys.validate(0.0).is_empty());
        let p_mat = build_p(&a);
        let recovered = p_mat.matmul(&sys.g);
        assert!(recovered.block(0, 0).is_zero_matrix());
        assert_eq!(recovered.block(1, 0), b2);
        assert_eq!(recovered.block(2, 0), b3);
    }
}
