//! Generalized discrete q-Hermite II polynomials h̃_{n,α}(x;q).
//!
//! Evaluation ([`poly`]), the weight and normalization constants
//! ([`weight`]), and residual checks for the identities the family
//! satisfies: algebraic relations, q-integral representations,
//! orthogonality and kernel sums.

pub mod integrals;
pub mod kernels;
pub mod ortho;
pub mod poly;
pub mod quad;
pub mod relations;
pub mod weight;

pub use integrals::{
    bessel_moment, bessel_weight_transform, integral_representation, integral_representation_residual, log_moment,
    moment_check, moment_check_published, Parity, ScaledIntegral,
};
pub use kernels::{
    bessel_expansion_residual, bessel_expansion_sides, poisson_kernel_residual, poisson_kernel_sides,
    rogers_ramanujan_corrected_residual, rogers_ramanujan_residual, KernelForm,
};
pub use ortho::{continuous_inner, discrete_norm_scaled, orthogonality, Normalization, OrthoCheckParams, OrthoMode};
pub use poly::{
    eval_coefficients, hermite_h, hermite_via_laguerre, qlaguerre, two_route_residual, HermiteFamily, DEFAULT_N_MAX,
};
pub use quad::{integrate, QuadConfig, QuadResult};
pub use relations::{relation_residual, Relation};
pub use weight::{
    c_q_alpha, log_weight, norm_constants, orthonormal_c, orthonormal_d, published_diagonal, weight, weight_t,
    NormConstants,
};
