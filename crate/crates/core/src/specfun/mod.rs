//! Special functions: Bernoulli numbers, ζ at integers, cotangent derivatives
//! and polygamma functions.

mod bernoulli;
mod cotpoly;
mod polygamma;
mod zeta;

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

pub use bernoulli::{bernoulli, inject_sign_fault};
pub use cotpoly::{cot_deriv_poly, CotDerivPoly};
pub use polygamma::polygamma;
pub(crate) use polygamma::polygamma_bits;
pub use zeta::zeta_int;
pub(crate) use zeta::zeta_bits;

use crate::arith::{cot_pi_reduced, pi_bits, reduce_mod_one, Arg, Precision, Real};
use crate::error::Result;

static PI_CACHE: LazyLock<RwLock<HashMap<u32, Real>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// π at `bits`, memoized.
pub(crate) fn pi_cached(bits: u32) -> Real {
    if let Some(p) = PI_CACHE.read().expect("pi cache poisoned").get(&bits) {
        return p.clone();
    }
    let p = pi_bits(bits);
    PI_CACHE.write().expect("pi cache poisoned").insert(bits, p.clone());
    p
}

/// dᵐ/dxᵐ cot(πx) = πᵐ · P_m(cot πx).
pub fn cot_deriv(m: u32, x: impl Into<Arg>, prec: Precision) -> Result<Real> {
    cot_deriv_bits(m, &x.into(), prec.working_bits(), prec)
}

/// π · dᵐ/dxᵐ cot(πx), the reflection term of the polygamma equations.
pub fn pi_cot_deriv(m: u32, x: impl Into<Arg>, prec: Precision) -> Result<Real> {
    let bits = prec.working_bits();
    Ok(cot_deriv_bits(m, &x.into(), bits, prec)? * pi_cached(bits))
}

pub(crate) fn cot_deriv_bits(m: u32, x: &Arg, bits: u32, prec: Precision) -> Result<Real> {
    let s = reduce_mod_one(x, prec, bits)?;
    let pi = pi_cached(bits);
    let u = cot_pi_reduced(&s, &pi);
    Ok(cot_deriv_poly(m).eval(&u) * pi.powi(m as i64))
}
