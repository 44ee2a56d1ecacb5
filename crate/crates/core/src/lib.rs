//! Static output-feedback gain synthesis for block linear control systems.
//!
//! Given a system ẋ = Fx + Gu, y = Hx whose coefficients are built from
//! s×s blocks, this crate constructs gains Q such that the closed-loop
//! matrix F + GQH is similar to a block companion matrix with prescribed
//! coefficient blocks Γ₁..Γₙ, i.e. the closed loop realizes the prescribed
//! characteristic matrix polynomial Iλⁿ + Γ₁λⁿ⁻¹ + … + Γₙ. Companion and
//! lower block Hessenberg coefficient shapes are supported, along with
//! cheaper paths when blocks of H (or of F and G) are scalar multiples of
//! the identity, and assignment of prescribed left solvents.
//!
//! All computations run over either `f64` or exact big-rational scalars.

pub mod assignment;
pub mod blockmat;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod mat;
pub mod reduction;
pub mod scalar;
pub mod solvents;
pub mod system;

pub use assignment::{
    amca_solvable, build_omega, build_theta, build_theta_direct, build_xi, char_poly,
    check_scalar_all, solve_gain, solve_gain_hessenberg, solve_gain_scalar_fg,
    solve_gain_scalar_h, solve_gain_with_method, transform_to_frobenius, verify_similarity,
    AssignmentResult, Method, MethodChoice, Solvability,
};
pub use blockmat::{shift_matrix, BlockMatrix, UnrollMode};
pub use error::{Error, Result};
pub use formats::{GainFile, JsonScalar, OdeFile, ResultFile, SystemFile, TargetsFile};
pub use mat::{LinearOps, Mat};
pub use reduction::{
    build_n_sequence, build_p, gamma_from_perturbation, hessenberg_to_frobenius,
    lower_block_triangular_inverse, solve_t_hat, ReductionResult,
};
pub use scalar::{format_rational, parse_rational, Rational, Scalar};
pub use solvents::{
    assign_solvents, block_vandermonde, gammas_from_solvents, verify_solvent, SolventSet,
};
pub use system::{
    frobenius_coefficients, frobenius_from_coeffs, ode_to_state_space, BlockSystem, Form,
    HigherOrderOde, TargetCoefficients, Violation,
};
