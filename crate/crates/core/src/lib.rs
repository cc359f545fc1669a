//! Extended-precision engine for Fibonacci/Lucas–zeta series identities.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: the [`Real`] multiprecision substrate, π, √5 and cot(πx).
//! * [`qsqrt5`]: exact arithmetic in ℚ(√5): golden-ratio powers, Fibonacci
//!   and Lucas numbers, exact floor and comparison.
//! * [`specfun`]: Bernoulli numbers, ζ(k), cotangent derivative polynomials
//!   and the polygamma functions ψ⁽ᵐ⁾ at real and ℚ(√5) arguments.
//! * [`funceq`]: residual evaluators for the polygamma functional equations
//!   and their evaluations at golden-ratio arguments.
//! * [`series`]: direct summation of the Fibonacci/Lucas–zeta series with an
//!   exact convergence test and a rigorous geometric tail bound.
//! * [`identities`]: the identity catalog, closed forms and verification
//!   reports.

pub mod arith;
pub mod error;
pub mod funceq;
pub mod identities;
pub mod qsqrt5;
pub mod series;
pub mod specfun;

pub use arith::{Precision, Real};
pub use error::{Error, Result};
pub use qsqrt5::QS5;
pub use series::{Kind, SeriesSpec, SumResult};
