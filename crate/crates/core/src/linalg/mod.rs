//! Fixed-size dense linear algebra: stack-allocated matrices and vectors plus
//! the pivoted LDU / LDLT / thin LDQ factorisations used by the body model.

mod decomp;
mod matrix;
mod vector;

pub use decomp::{
    ldq_decompose, ldu_decompose, ldu_decompose_leading, pivot_iterations, LduFactors, ThinLdq,
    RANK_TOL,
};
pub use matrix::{diagonal_inverse, rot_x, rot_y, rot_z, skew, Mat3, Mat6, Matrix, SINGULAR_TOL};
pub use vector::{Vec12, Vec2, Vec3, Vec6, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("pivot below tolerance at step {step} of {expected}: rank assumption violated")]
    RankDeficient { step: usize, expected: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("dimension mismatch")]
    Dimension,
}
