//! Seeded random generators shared by the integration test suites. All
//! values are small integers so the exact rational backend stays cheap.

#![allow(dead_code)]

use rand::Rng;

use blockgain::blockmat::BlockMatrix;
use blockgain::mat::Mat;
use blockgain::reduction::gamma_from_perturbation;
use blockgain::scalar::{Rational, Scalar};
use blockgain::system::{frobenius_from_coeffs, BlockSystem, Form, TargetCoefficients};

pub fn rand_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat<Rational> {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, Rational::from_i64(rng.random_range(-4..=4)));
        }
    }
    m
}

pub fn rand_block_matrix<R: Rng>(rng: &mut R, q: usize, r: usize, s: usize) -> BlockMatrix<Rational> {
    BlockMatrix::new(rand_mat(rng, q * s, r * s), s).unwrap()
}

/// Random square matrix with nonzero determinant, by rejection.
pub fn rand_nonsingular<R: Rng>(rng: &mut R, n: usize) -> Mat<Rational> {
    loop {
        let m = rand_mat(rng, n, n);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random companion-form system: coefficient blocks, an input matrix with
/// the first p−1 block rows zero, and an output matrix with the last n−p
/// block columns zero.
pub fn rand_frobenius_system<R: Rng>(
    rng: &mut R,
    n: usize,
    s: usize,
    m: usize,
    k: usize,
    p: usize,
) -> BlockSystem<Rational> {
    let a: Vec<Mat<Rational>> = (0..n).map(|_| rand_mat(rng, s, s)).collect();
    let f = frobenius_from_coeffs(&TargetCoefficients::new(a).unwrap());
    let mut g = BlockMatrix::zeros(n, m, s);
    for i in p - 1..n {
        for j in 0..m {
            g.set_block(i, j, &rand_mat(rng, s, s));
        }
    }
    let mut h = BlockMatrix::zeros(k, n, s);
    for i in 0..k {
        for j in 0..p {
            h.set_block(i, j, &rand_mat(rng, s, s));
        }
    }
    BlockSystem::new(f, g, h, p, Form::Frobenius).unwrap()
}

/// Random unreduced lower block Hessenberg state matrix: nonsingular
/// superdiagonal blocks, zeros above them, arbitrary lower part.
pub fn rand_hessenberg_state<R: Rng>(rng: &mut R, n: usize, s: usize) -> BlockMatrix<Rational> {
    let mut z = BlockMatrix::zeros(n, n, s);
    for i in 0..n {
        for j in 0..=i.min(n - 1) {
            z.set_block(i, j, &rand_mat(rng, s, s));
        }
        if i + 1 < n {
            z.set_block(i, i + 1, &rand_nonsingular(rng, s));
        }
    }
    z
}

/// Random perturbation with the closed-loop zero pattern: first p−1 block
/// rows and last n−p block columns zero.
pub fn rand_patterned_perturbation<R: Rng>(
    rng: &mut R,
    n: usize,
    s: usize,
    p: usize,
) -> BlockMatrix<Rational> {
    let mut d = BlockMatrix::zeros(n, n, s);
    for i in p - 1..n {
        for j in 0..p {
            d.set_block(i, j, &rand_mat(rng, s, s));
        }
    }
    d
}

pub fn rand_gain<R: Rng>(rng: &mut R, m: usize, k: usize, s: usize) -> BlockMatrix<Rational> {
    rand_block_matrix(rng, m, k, s)
}

/// Targets attainable by construction: the exact coefficients realized by
/// closing the loop with a known gain.
pub fn attainable_targets(
    sys: &BlockSystem<Rational>,
    q: &BlockMatrix<Rational>,
) -> TargetCoefficients<Rational> {
    let d = sys.g.matmul(q).matmul(&sys.h);
    gamma_from_perturbation(&sys.f, &d, sys.p, 0.0).unwrap()
}

/// Random dimensions within the desk-scale envelope of the test suites.
pub fn rand_dims<R: Rng>(rng: &mut R) -> (usize, usize, usize, usize, usize) {
    let n = rng.random_range(1..=4);
    let s = rng.random_range(1..=3);
    let m = rng.random_range(1..=3);
    let k = rng.random_range(1..=3);
    let p = rng.random_range(1..=n);
    (n, s, m, k, p)
}
