//! Extended-precision real arithmetic, constants and cot(πx).
//!
//! [`Real`] is a binary floating-point value backed by `num-bigint`; every
//! other module only uses the operations exposed here, so the backend can be
//! swapped without touching the kernels.

mod decimal;
mod elementary;
mod real;

pub use decimal::parse_rational;
pub use elementary::{
    const_euler_gamma, const_pi, const_sqrt5, cot_pi, ln2_bits, pi_bits, sqrt5_bits, Arg,
};
pub(crate) use elementary::{cot_pi_reduced, reduce_mod_one};
pub use real::{Precision, Real, GUARD_BITS};

use num_bigint::BigInt;

use crate::error::Result;

/// `p/q` at working precision.
pub fn real_from_rational(p: &BigInt, q: &BigInt, prec: Precision) -> Result<Real> {
    Real::from_ratio(p, q, prec.working_bits())
}
