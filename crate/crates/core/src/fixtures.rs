//! Small worked reference systems shared by the unit, property and
//! acceptance test suites. All entries are integer-valued so both scalar
//! backends reproduce them exactly.

use crate::blockmat::BlockMatrix;
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::system::{BlockSystem, Form, TargetCoefficients};

fn bm<T: Scalar>(rows: &[&[i64]], s: usize) -> BlockMatrix<T> {
    BlockMatrix::new(Mat::from_i64(rows), s).unwrap()
}

/// n=3, s=2, m=k=p=2 companion-form system with a fully worked gain.
pub fn example1_system<T: Scalar>() -> BlockSystem<T> {
    let f = bm(
        &[
            &[0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 1],
            &[2, 0, -1, 0, 0, 0],
            &[0, 0, 0, -1, 0, -1],
        ],
        2,
    );
    let g = bm(
        &[
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
            &[0, 1, 1, 0],
            &[0, -1, 0, 1],
            &[-1, 3, 1, -1],
            &[2, 1, 0, -1],
        ],
        2,
    );
    let h = bm(
        &[
            &[1, 0, 0, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0],
            &[1, 0, 0, 0, 0, 0],
            &[0, -1, 1, 0, 0, 0],
        ],
        2,
    );
    BlockSystem::new(f, g, h, 2, Form::Frobenius).unwrap()
}

/// Open-loop coefficients A₁, A₂, A₃ of the first reference system.
pub fn example1_coeffs<T: Scalar>() -> Vec<Mat<T>> {
    vec![
        Mat::from_i64(&[&[0, 0], &[0, 1]]),
        Mat::from_i64(&[&[1, 0], &[0, 1]]),
        Mat::from_i64(&[&[-2, 0], &[0, 0]]),
    ]
}

/// Targets Γ₁=6I, Γ₂=11I, Γ₃=6I (spectrum {−1,−1,−2,−2,−3,−3}).
pub fn example1_targets<T: Scalar>() -> TargetCoefficients<T> {
    TargetCoefficients::new(vec![
        Mat::from_i64(&[&[6, 0], &[0, 6]]),
        Mat::from_i64(&[&[11, 0], &[0, 11]]),
        Mat::from_i64(&[&[6, 0], &[0, 6]]),
    ])
    .unwrap()
}

pub fn example1_t_blocks<T: Scalar>() -> Vec<Mat<T>> {
    vec![
        Mat::from_i64(&[&[-6, 0], &[0, -5]]),
        Mat::from_i64(&[&[-10, 0], &[0, -5]]),
        Mat::from_i64(&[&[-2, 0], &[0, 4]]),
    ]
}

pub fn example1_w() -> Vec<i64> {
    vec![-6, 0, 0, -5, -10, 0, 0, -5, -2, 0, 0, 4]
}

pub fn example1_v() -> Vec<i64> {
    vec![0, -2, -5, -16, -3, -5, 16, -21, 0, -2, 3, 9, -3, -5, -15, 9]
}

pub fn example1_gain<T: Scalar>() -> BlockMatrix<T> {
    bm(
        &[
            &[0, -5, 0, 3],
            &[-2, -16, -2, 9],
            &[-3, 16, -3, -15],
            &[-5, -21, -5, 9],
        ],
        2,
    )
}

pub fn example1_closed_loop<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[-10, 6, -6, 0, 1, 0],
        &[-6, 0, 0, -5, 0, 1],
        &[-6, 0, -1, -6, 0, 0],
        &[6, -6, 6, -6, 0, -1],
    ])
}

/// The similarity transform produced for the first reference system:
/// identity except for the last block row (S₃₁, S₃₂, I).
pub fn example1_s<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[-10, 6, -6, 0, 1, 0],
        &[-6, 0, 0, -5, 0, 1],
    ])
}

/// Block (1,1) of the star product of (H^𝒯)^T with G for the first
/// reference system.
pub fn example1_star_block11<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
        &[0, 0, 0, 1],
        &[0, 0, 0, -1],
    ])
}

/// n=3, s=2, m=k=p=2 lower block Hessenberg system.
pub fn example2_system<T: Scalar>() -> BlockSystem<T> {
    let f = bm(
        &[
            &[1, 0, -1, 0, 0, 0],
            &[0, 1, 0, -1, 0, 0],
            &[0, 0, -1, 0, 1, 0],
            &[0, 0, 0, -1, 0, 1],
            &[1, -1, -2, 1, -1, 0],
            &[0, 2, 1, -2, -1, 1],
        ],
        2,
    );
    let g = bm(
        &[
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
            &[-1, 0, 1, 0],
            &[1, -1, -1, 1],
            &[1, 1, -1, 0],
            &[0, -1, 0, 1],
        ],
        2,
    );
    let h = bm(
        &[
            &[-1, -1, 1, 0, 0, 0],
            &[0, -1, -1, 1, 0, 0],
            &[1, -1, -1, 1, 0, 0],
            &[1, -1, 0, 0, 0, 0],
        ],
        2,
    );
    BlockSystem::new(f, g, h, 2, Form::Hessenberg).unwrap()
}

/// Targets for the Hessenberg reference system.
pub fn example2_targets<T: Scalar>() -> TargetCoefficients<T> {
    TargetCoefficients::new(vec![
        Mat::from_i64(&[&[-1, 0], &[0, -1]]),
        Mat::from_i64(&[&[1, 0], &[0, 0]]),
        Mat::from_i64(&[&[-2, 1], &[0, 1]]),
    ])
    .unwrap()
}

/// The triangular reduction of the Hessenberg state matrix: block rows
/// (I,0,0), (I,−I,0), (I,0,−I).
pub fn example2_s_tilde<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[1, 0, -1, 0, 0, 0],
        &[0, 1, 0, -1, 0, 0],
        &[1, 0, 0, 0, -1, 0],
        &[0, 1, 0, 0, 0, -1],
    ])
}

/// Coefficients A₁, A₂, A₃ of the transformed (companion-form) system.
pub fn example2_transformed_coeffs<T: Scalar>() -> Vec<Mat<T>> {
    vec![
        Mat::from_i64(&[&[1, 0], &[1, -1]]),
        Mat::from_i64(&[&[1, -1], &[-1, 1]]),
        Mat::from_i64(&[&[-2, 0], &[0, 1]]),
    ]
}

pub fn example2_t_blocks<T: Scalar>() -> Vec<Mat<T>> {
    vec![
        Mat::from_i64(&[&[2, 0], &[1, 0]]),
        Mat::from_i64(&[&[-2, -1], &[-2, 1]]),
        Mat::from_i64(&[&[1, 0], &[1, 2]]),
    ]
}

pub fn example2_w() -> Vec<i64> {
    vec![2, 1, 0, 0, -2, -2, -1, 1, 1, 1, 0, 2]
}

pub fn example2_v() -> Vec<i64> {
    vec![-1, -1, 1, 0, 1, 2, -1, -7, -1, -1, 1, 0, 1, 6, -1, -2]
}

pub fn example2_gain<T: Scalar>() -> BlockMatrix<T> {
    bm(
        &[
            &[-1, 1, -1, 1],
            &[-1, 0, -1, 0],
            &[1, -1, 1, -1],
            &[2, -7, 6, -2],
        ],
        2,
    )
}

pub fn example2_closed_loop<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[1, 0, -1, 0, 0, 0],
        &[0, 1, 0, -1, 0, 0],
        &[-2, 0, 1, 0, 1, 0],
        &[4, -1, 1, -1, 0, 1],
        &[3, 1, -4, 0, -1, 0],
        &[2, 1, 4, -2, -1, 1],
    ])
}

/// Closed loop of the transformed (companion-form) system.
pub fn example2_transformed_closed_loop<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 2, 0, 1, 0],
        &[-5, 1, 1, 0, 0, 1],
        &[2, -1, -3, 0, -1, 0],
        &[-5, 0, 4, -1, -1, 1],
    ])
}

/// Combined transform R for the Hessenberg reference system.
pub fn example2_r<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[1, 0, -1, 0, 0, 0],
        &[0, 1, 0, -1, 0, 0],
        &[3, 0, -2, 0, -1, 0],
        &[-4, 2, -1, 0, 0, -1],
    ])
}

/// n=4, s=2, m=k=2, p=2 Hessenberg system whose reduction has non-scalar
/// blocks, separating the direct and transformed solvability matrices.
pub fn example3_system<T: Scalar>() -> BlockSystem<T> {
    // A = [[2,0],[0,1]], B = [[0,1],[1,0]].
    let f = bm(
        &[
            &[0, 0, 2, 0, 0, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0, 0, 0],
        ],
        2,
    );
    let g = bm(
        &[
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
        ],
        2,
    );
    let h = bm(
        &[
            &[1, 0, 0, 0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0, 0, 0],
            &[0, 0, 1, 0, 0, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0, 0, 0],
        ],
        2,
    );
    BlockSystem::new(f, g, h, 2, Form::Hessenberg).unwrap()
}

/// The diagonal reduction diag{I, A, AB, AB} of the third reference system.
pub fn example3_s_tilde<T: Scalar>() -> Mat<T> {
    Mat::from_i64(&[
        &[1, 0, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 2, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 2, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0, 2],
        &[0, 0, 0, 0, 0, 0, 1, 0],
    ])
}

/// n=2, s=2, m=1, k=2, p=2 system where scalar spectra are assignable but
/// arbitrary matrix coefficients are not.
pub fn example4_system<T: Scalar>() -> BlockSystem<T> {
    let f = bm(
        &[
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
        ],
        2,
    );
    let g = bm(&[&[0, 0], &[0, 0], &[1, 0], &[0, 1]], 2);
    let h = bm(
        &[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 0],
        ],
        2,
    );
    BlockSystem::new(f, g, h, 2, Form::Frobenius).unwrap()
}

/// Scalar-spectrum gain for the fourth reference system: realizes
/// χ(λ) = λ⁴ + δ₁λ³ + δ₂λ² + δ₃λ + δ₄.
pub fn example4_char_poly_gain<T: Scalar>(deltas: &[i64; 4]) -> BlockMatrix<T> {
    bm(
        &[
            &[-deltas[1], 1, -deltas[0], 0],
            &[-deltas[3], 0, -deltas[2], 0],
        ],
        2,
    )
}

/// Solvents −I, −2I, −3I assigned on the first reference system.
pub fn example5_solvents<T: Scalar>() -> Vec<Mat<T>> {
    vec![
        Mat::from_i64(&[&[-1, 0], &[0, -1]]),
        Mat::from_i64(&[&[-2, 0], &[0, -2]]),
        Mat::from_i64(&[&[-3, 0], &[0, -3]]),
    ]
}
