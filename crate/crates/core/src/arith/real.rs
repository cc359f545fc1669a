use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Guard bits carried by every kernel on top of the requested precision
/// (about ten decimal digits).
pub const GUARD_BITS: u32 = 34;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT: Precision = Precision { digits: 50 };

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Domain(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits needed for `digits` decimal digits.
    pub fn bits(self) -> u32 {
        (self.digits as f64 * BITS_PER_DIGIT).ceil() as u32 + 4
    }

    /// Bits used internally by the kernels (requested bits plus guard).
    pub fn working_bits(self) -> u32 {
        self.bits() + GUARD_BITS
    }

    pub fn with_extra_digits(self, extra: u32) -> Self {
        Precision {
            digits: self.digits + extra,
        }
    }

    /// `10^(offset - P)`, the tolerance convention used throughout the crate.
    pub fn tolerance(self, offset: i32) -> Real {
        Real::pow10(offset - self.digits as i32, self.working_bits())
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.digits)
    }
}

/// Binary floating-point number with an arbitrary-size mantissa.
///
/// The value is `man · 2^exp`. Every operation rounds its result to
/// `bits` significant bits (round half away from zero); binary operations
/// use the larger precision of their two operands.
#[derive(Clone)]
pub struct Real {
    man: BigInt,
    exp: i64,
    bits: u32,
}

fn round_mantissa(man: BigInt, exp: i64, bits: u32) -> (BigInt, i64) {
    let n = man.bits();
    if n <= bits as u64 {
        return (man, exp);
    }
    let shift = n - bits as u64;
    let (sign, mag) = man.into_parts();
    let half = BigUint::one() << (shift - 1);
    let mag = (mag + half) >> shift;
    (BigInt::from_biguint(sign, mag), exp + shift as i64)
}

impl Real {
    fn from_parts(man: BigInt, exp: i64, bits: u32) -> Real {
        if man.is_zero() {
            return Real::zero(bits);
        }
        let (man, exp) = round_mantissa(man, exp, bits);
        Real { man, exp, bits }
    }

    pub fn zero(bits: u32) -> Real {
        Real {
            man: BigInt::zero(),
            exp: 0,
            bits,
        }
    }

    pub fn one(bits: u32) -> Real {
        Real::from_int(1, bits)
    }

    pub fn from_int(n: i64, bits: u32) -> Real {
        Real::from_parts(BigInt::from(n), 0, bits)
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> Real {
        Real::from_parts(n.clone(), 0, bits)
    }

    /// `p / q` rounded to `bits` bits.
    pub fn from_ratio(p: &BigInt, q: &BigInt, bits: u32) -> Result<Real> {
        if q.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if p.is_zero() {
            return Ok(Real::zero(bits));
        }
        let shift = (bits as i64 + 2 + q.bits() as i64 - p.bits() as i64).max(0);
        let num: BigInt = p << (shift as usize);
        Ok(Real::from_parts(num / q, -shift, bits))
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Real {
        Real::from_ratio(q.numer(), q.denom(), bits).expect("BigRational has nonzero denominator")
    }

    pub fn from_f64(x: f64, bits: u32) -> Real {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Real::zero(bits);
        }
        let raw = x.to_bits();
        let sign = if raw >> 63 == 1 { -1 } else { 1 };
        let e = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        Real::from_parts(BigInt::from(m) * sign, e, bits.max(53))
    }

    /// `10^k` rounded to `bits` bits.
    pub fn pow10(k: i32, bits: u32) -> Real {
        let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
        if k >= 0 {
            Real::from_parts(p, 0, bits)
        } else {
            Real::from_ratio(&BigInt::one(), &p, bits).expect("nonzero")
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Same value re-rounded (or simply relabelled) at `bits` bits.
    pub fn with_bits(&self, bits: u32) -> Real {
        Real::from_parts(self.man.clone(), self.exp, bits)
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Real {
        Real {
            man: self.man.abs(),
            exp: self.exp,
            bits: self.bits,
        }
    }

    /// Exponent of the leading bit plus one: `|x| ∈ [2^(top-1), 2^top)`.
    /// Returns `i64::MIN` for zero.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        Real {
            man: self.man.clone(),
            exp: self.exp + k,
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, k: i64) -> Real {
        Real::from_parts(&self.man * k, self.exp, self.bits)
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Real {
        Real::from_parts(&self.man * k, self.exp, self.bits)
    }

    pub fn div_int(&self, k: i64) -> Real {
        assert!(k != 0, "division by zero");
        self.div_bigint(&BigInt::from(k))
    }

    pub fn div_bigint(&self, k: &BigInt) -> Real {
        assert!(!k.is_zero(), "division by zero");
        if self.is_zero() {
            return self.clone();
        }
        let shift = (self.bits as i64 + 2 + k.bits() as i64 - self.man.bits() as i64).max(0);
        let num: BigInt = &self.man << (shift as usize);
        Real::from_parts(num / k, self.exp - shift, self.bits)
    }

    pub fn recip(&self) -> Real {
        &Real::one(self.bits) / self
    }

    pub fn square(&self) -> Real {
        self * self
    }

    /// Square root; negative input is a domain error.
    pub fn sqrt(&self) -> Result<Real> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let want = 2 * (self.bits as i64 + 2);
        let mut shift = (want - self.man.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = self.man.magnitude() << (shift as usize);
        let root = BigInt::from(scaled.sqrt());
        Ok(Real::from_parts(root, (self.exp - shift) / 2, self.bits))
    }

    /// Integer power by binary exponentiation; `x^0 = 1`.
    pub fn powi(&self, n: i64) -> Real {
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        let mut acc = Real::one(self.bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Greatest integer not above the value.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << (self.exp as usize)
        } else {
            // arithmetic shift rounds toward -inf
            &self.man >> ((-self.exp) as usize)
        }
    }

    /// Nearest integer (ties away from zero).
    pub fn round(&self) -> BigInt {
        let half = Real {
            man: BigInt::one(),
            exp: -1,
            bits: self.bits,
        };
        if self.is_negative() {
            -(self.abs() + half).floor()
        } else {
            (self + &half).floor()
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let n = self.man.bits() as i64;
        let (m, e) = if n > 64 {
            (&self.man >> ((n - 64) as usize), self.exp + n - 64)
        } else {
            (self.man.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split to stay within powi's range
        mf * 2f64.powi((e / 2) as i32) * 2f64.powi((e - e / 2) as i32)
    }

    /// log₂|x| as an f64 estimate; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let n = self.man.bits() as i64;
        let top = if n > 60 {
            (self.man.magnitude() >> ((n - 60) as usize)).to_f64().unwrap() / 2f64.powi(60)
        } else {
            self.man.magnitude().to_f64().unwrap() / 2f64.powi(n as i32)
        };
        (self.exp + n) as f64 + top.log2()
    }

    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LOG10_2
    }

    pub(crate) fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub(crate) fn exponent(&self) -> i64 {
        self.exp
    }

    pub(crate) fn from_scaled(man: BigInt, exp: i64, bits: u32) -> Real {
        Real::from_parts(man, exp, bits)
    }

    fn cmp_abs(&self, other: &Real) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            return ta.cmp(&tb);
        }
        let e = self.exp.min(other.exp);
        let a = self.man.magnitude() << ((self.exp - e) as usize);
        let b = other.man.magnitude() << ((other.exp - e) as usize);
        a.cmp(&b)
    }

    fn add_impl(a: &Real, b: &Real) -> Real {
        let bits = a.bits.max(b.bits);
        if a.is_zero() {
            return b.with_bits(bits);
        }
        if b.is_zero() {
            return a.with_bits(bits);
        }
        let top = a.top().max(b.top());
        let floor_exp = top - 2 * bits as i64 - 8;
        let clip = |x: &Real| -> Option<(BigInt, i64)> {
            if x.exp >= floor_exp {
                return Some((x.man.clone(), x.exp));
            }
            let m = &x.man >> ((floor_exp - x.exp) as usize);
            if m.is_zero() || (x.is_negative() && m == -BigInt::one()) {
                None
            } else {
                Some((m, floor_exp))
            }
        };
        match (clip(a), clip(b)) {
            (None, None) => Real::zero(bits),
            (Some((m, e)), None) | (None, Some((m, e))) => Real::from_parts(m, e, bits),
            (Some((am, ae)), Some((bm, be))) => {
                let e = ae.min(be);
                let man = (am << ((ae - e) as usize)) + (bm << ((be - e) as usize));
                Real::from_parts(man, e, bits)
            }
        }
    }

    fn mul_impl(a: &Real, b: &Real) -> Real {
        let bits = a.bits.max(b.bits);
        Real::from_parts(&a.man * &b.man, a.exp + b.exp, bits)
    }

    fn div_impl(a: &Real, b: &Real) -> Real {
        assert!(!b.is_zero(), "division by zero");
        let bits = a.bits.max(b.bits);
        if a.is_zero() {
            return Real::zero(bits);
        }
        let shift = (bits as i64 + 2 + b.man.bits() as i64 - a.man.bits() as i64).max(0);
        let num: BigInt = &a.man << (shift as usize);
        Real::from_parts(num / &b.man, a.exp - shift - b.exp, bits)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.signum().cmp(&other.signum()) {
            Ordering::Equal => {}
            o => return o,
        }
        let c = self.cmp_abs(other);
        if self.is_negative() {
            c.reverse()
        } else {
            c
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            man: -&self.man,
            exp: self.exp,
            bits: self.bits,
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            man: -self.man,
            exp: self.exp,
            bits: self.bits,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                $imp(self, rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $imp(self, &rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                $imp(&self, rhs)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $imp(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, Real::add_impl);
forward_binop!(Sub, sub, |a: &Real, b: &Real| Real::add_impl(a, &-b));
forward_binop!(Mul, mul, Real::mul_impl);
forward_binop!(Div, div, Real::div_impl);

impl std::iter::Sum for Real {
    /// Panics on an empty iterator (there is no precision to give the zero).
    fn sum<I: Iterator<Item = Real>>(mut iter: I) -> Real {
        let first = iter.next().expect("sum of an empty iterator of Real");
        iter.fold(first, |acc, x| acc + x)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(25))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits as f64) / BITS_PER_DIGIT).floor() as usize;
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u32 = 200;

    fn r(x: f64) -> Real {
        Real::from_f64(x, B)
    }

    #[test]
    fn basic_arithmetic_matches_f64() {
        let a = r(1.75);
        let b = r(-0.3125);
        assert_eq!((&a + &b).to_f64(), 1.4375);
        assert_eq!((&a - &b).to_f64(), 2.0625);
        assert_eq!((&a * &b).to_f64(), -0.546875);
        assert_eq!((&a / &b).to_f64(), -5.6);
    }

    #[test]
    fn one_third_has_full_precision() {
        let third = Real::from_ratio(&1.into(), &3.into(), B).unwrap();
        let back = &third * &Real::from_int(3, B);
        let err = (&back - &Real::one(B)).abs();
        assert!(err.top() <= -(B as i64) + 2);
    }

    #[test]
    fn zero_denominator_is_domain_error() {
        assert!(matches!(
            Real::from_ratio(&1.into(), &0.into(), B),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn floor_rounds_toward_negative_infinity() {
        assert_eq!(r(2.5).floor(), BigInt::from(2));
        assert_eq!(r(-2.5).floor(), BigInt::from(-3));
        assert_eq!(r(-3.0).floor(), BigInt::from(-3));
        assert_eq!(r(-0.001).floor(), BigInt::from(-1));
        assert_eq!(r(-2.5).round(), BigInt::from(-3));
        assert_eq!(r(2.4).round(), BigInt::from(2));
    }

    #[test]
    fn sqrt_two_squared() {
        let two = Real::from_int(2, B);
        let s = two.sqrt().unwrap();
        let err = (&s.square() - &two).abs();
        assert!(err.top() < -(B as i64) + 4);
        assert!(Real::from_int(-1, B).sqrt().is_err());
    }

    #[test]
    fn powi_negative_and_zero() {
        let x = r(1.5);
        assert_eq!(x.powi(0).to_f64(), 1.0);
        assert_eq!(x.powi(3).to_f64(), 3.375);
        assert!((x.powi(-2).to_f64() - 1.0 / 2.25).abs() < 1e-15);
    }

    #[test]
    fn addition_absorbs_negligible_operand() {
        let big = Real::one(B);
        let tiny = Real::one(B).mul_pow2(-1000);
        assert_eq!(&big + &tiny, big);
        assert_eq!(&tiny + &big, big);
        // exact cancellation
        assert!((&big - &big).is_zero());
    }

    #[test]
    fn ordering_is_exact() {
        let a = Real::from_ratio(&1.into(), &3.into(), B).unwrap();
        let b = Real::from_ratio(&1.into(), &3.into(), B + 10).unwrap();
        assert_ne!(a, b);
        assert!(r(-2.0) < r(-1.0));
        assert!(r(0.0) < r(1e-300));
        assert!(r(3.0) > r(2.999));
    }
}
