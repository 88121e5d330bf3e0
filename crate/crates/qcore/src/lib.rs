//! Basic q-calculus.
//!
//! * q-shifted factorials `(a;q)_n`, `(a;q)_∞` and q-numbers
//! * generalized q-integers `⟦n⟧_{q,α}` and factorials `(q;q)_{n,α}`
//! * the six q-difference operators (`D_q`, `D_q⁺`, their α-versions, `Δ`, `Δ⁺`)
//! * Jackson integrals on the half line and the line
//!
//! Truncated infinite quantities come back as [`TruncatedValue`] with an
//! explicit remainder bound.

pub mod check;
pub mod context;
pub mod deriv;
pub mod error;
pub mod jackson;
pub mod real;
pub mod series;
pub mod symbols;

pub use check::CheckResult;
pub use context::{QContext, TruncatedValue};
pub use deriv::{
    monomial_delta_residual, parity_split, qderiv, qderiv_pow, qderiv_with, FunctionHandle, ParityParts, Variant,
};
pub use error::{QError, Result};
pub use jackson::{jackson_integral, JacksonDomain};
pub use real::{Dd, Real};
pub use series::sum_by_ratio;
pub use symbols::{
    gen_exponent, gen_qint, gen_qpoch, qnumber, qpoch, qpoch_base, qpoch_inf, qpoch_inf_base,
    sym_qnumber, theta, QParams,
};
