//! The deformed oscillator realized on φ_n = d̂_n √ω h̃_n.
//!
//! [`wave`] has the functional side: wave functions and the operators a,
//! a⁺, H applied pointwise. [`matrix`] has finite sections of the same
//! operators in the φ_n basis, the rescaled b, b⁺, the su(1,1) generators,
//! and residuals for their commutation relations.

pub mod matrix;
pub mod wave;

pub use matrix::{
    algebra_residual, bridge_residual, build_matrix, sym_qbracket_diag, AlgebraRelation, MatrixKind, OperatorMatrix,
};
pub use wave::{
    apply_ladder, eigen_residual, inner_product, ladder_handle, ladder_residual, phi, selfadjoint_residual, Ladder,
    WaveFunction,
};
