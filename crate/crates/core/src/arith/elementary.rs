//! Constants and elementary functions on [`Real`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Precision, Real};
use crate::error::{Error, Result};
use crate::qsqrt5::QS5;

/// Σ ±2^F / ((2n+1) k^(2n+1)) as a fixed-point integer: atan(1/k) (or
/// atanh(1/k) when `alternating` is false) scaled by 2^F.
fn arctan_inv_fixed(k: u32, frac_bits: u32, alternating: bool) -> BigInt {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = (BigInt::one() << frac_bits as usize) / &k;
    let mut sum = power.clone();
    let mut n: u64 = 1;
    loop {
        power /= &k2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * n + 1);
        if alternating && n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
    }
    sum
}

/// π at `bits` bits, from Machin's formula π = 16·atan(1/5) − 4·atan(1/239).
pub fn pi_bits(bits: u32) -> Real {
    let frac = bits + 24;
    let a = arctan_inv_fixed(5, frac, true);
    let b = arctan_inv_fixed(239, frac, true);
    Real::from_scaled(a * 16 - b * 4, -(frac as i64), bits)
}

/// ln 2 = 2·atanh(1/3) at `bits` bits.
pub fn ln2_bits(bits: u32) -> Real {
    let frac = bits + 24;
    Real::from_scaled(arctan_inv_fixed(3, frac, false) * 2, -(frac as i64), bits)
}

/// π at working precision for `prec`.
pub fn const_pi(prec: Precision) -> Real {
    pi_bits(prec.working_bits())
}

/// √5 at working precision for `prec`.
pub fn const_sqrt5(prec: Precision) -> Real {
    sqrt5_bits(prec.working_bits())
}

pub fn sqrt5_bits(bits: u32) -> Real {
    Real::from_int(5, bits).sqrt().expect("5 > 0")
}

/// γ = −ψ(1), computed through the digamma pipeline.
pub fn const_euler_gamma(prec: Precision) -> Real {
    -crate::specfun::polygamma(0, QS5::from_int(1), prec).expect("ψ(1) is regular")
}

impl Real {
    /// Natural logarithm; non-positive input is a domain error.
    pub fn ln(&self) -> Result<Real> {
        if self.signum() <= 0 {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        let bits = self.bits();
        let wb = bits + 8;
        // x = y · 2^k with y ∈ [1, 2)
        let k = self.top() - 1;
        let y = self.with_bits(wb).mul_pow2(-k);
        let one = Real::one(wb);
        let u = (&y - &one) / (&y + &one);
        let u2 = u.square();
        let mut term = u.clone();
        let mut sum = u.clone();
        let mut n: i64 = 1;
        while !term.is_zero() {
            term = &term * &u2;
            let t = term.div_int(2 * n + 1);
            if t.is_zero() || t.top() < sum.top() - wb as i64 - 2 {
                break;
            }
            sum = sum + t;
            n += 1;
        }
        let ln_y = sum.mul_pow2(1);
        let ln2 = ln2_bits(wb);
        Ok((ln2.mul_int(k) + ln_y).with_bits(bits))
    }
}

/// (sin y, cos y) by Taylor series; intended for |y| ≤ 1.
pub(crate) fn sin_cos_small(y: &Real) -> (Real, Real) {
    let bits = y.bits();
    let y2 = y.square();
    let mut sin = y.clone();
    let mut term = y.clone();
    let mut k: i64 = 1;
    loop {
        term = -(&term * &y2).div_int((2 * k) * (2 * k + 1));
        if term.is_zero() || term.top() < sin.top() - bits as i64 - 4 {
            break;
        }
        sin = sin + &term;
        k += 1;
    }
    let mut cos = Real::one(bits);
    let mut term = Real::one(bits);
    let mut k: i64 = 1;
    loop {
        term = -(&term * &y2).div_int((2 * k - 1) * (2 * k));
        if term.is_zero() || term.top() < -(bits as i64) - 4 {
            break;
        }
        cos = cos + &term;
        k += 1;
    }
    (sin, cos)
}

/// cot(π s) for s ∈ (0, 1), given π at the same precision.
pub(crate) fn cot_pi_reduced(s: &Real, pi: &Real) -> Real {
    let bits = s.bits().max(pi.bits());
    let one = Real::one(bits);
    let half = one.mul_pow2(-1);
    let quarter = one.mul_pow2(-2);
    if s > &half {
        return -cot_pi_reduced(&(&one - s), pi);
    }
    if s > &quarter {
        // cot(πs) = tan(π(1/2 − s))
        let t = &half - s;
        if t.is_zero() {
            return Real::zero(bits);
        }
        let (sin, cos) = sin_cos_small(&(pi * &t));
        return sin / cos;
    }
    let (sin, cos) = sin_cos_small(&(pi * s));
    cos / sin
}

/// An evaluation point: exact in ℚ(√5) or an approximate real.
#[derive(Clone, Debug)]
pub enum Arg {
    Exact(QS5),
    Approx(Real),
}

impl From<QS5> for Arg {
    fn from(x: QS5) -> Self {
        Arg::Exact(x)
    }
}

impl From<&QS5> for Arg {
    fn from(x: &QS5) -> Self {
        Arg::Exact(x.clone())
    }
}

impl From<Real> for Arg {
    fn from(x: Real) -> Self {
        Arg::Approx(x)
    }
}

impl From<&Real> for Arg {
    fn from(x: &Real) -> Self {
        Arg::Approx(x.clone())
    }
}

/// Fractional part of `x` in (0, 1) at `bits`, or a pole error when `x` is an
/// integer (exactly for QS5, within `10^(5−P)` for approximate input).
pub(crate) fn reduce_mod_one(x: &Arg, prec: Precision, bits: u32) -> Result<Real> {
    match x {
        Arg::Exact(q) => {
            let n = q.floor();
            let s = q - &QS5::from_bigint(n);
            if s.is_zero() {
                return Err(Error::Pole(format!("cot(πx) at integer x = {q}")));
            }
            Ok(s.to_real_bits(bits))
        }
        Arg::Approx(r) => {
            let r = r.with_bits(bits);
            let n = r.floor();
            let s = &r - &Real::from_bigint(&n, bits);
            let guard = prec.tolerance(5);
            if s < guard || (&Real::one(bits) - &s) < guard {
                return Err(Error::Pole(format!(
                    "cot(πx) at x = {} (within 10^(5-P) of an integer)",
                    r.to_decimal(20)
                )));
            }
            Ok(s)
        }
    }
}

/// cot(πx) with the argument reduced modulo 1 (exactly for ℚ(√5) input).
pub fn cot_pi(x: impl Into<Arg>, prec: Precision) -> Result<Real> {
    let bits = prec.working_bits();
    let s = reduce_mod_one(&x.into(), prec, bits)?;
    Ok(cot_pi_reduced(&s, &pi_bits(bits)))
}
