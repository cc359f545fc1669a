//! Exact arithmetic in ℚ(√5).
//!
//! [`QS5`] holds `a + b·√5` with reduced rational components. Golden-ratio
//! powers, Fibonacci and Lucas numbers, exact floor and exact comparison all
//! live here; nothing in this module touches floating point except the final
//! [`QS5::to_real`] conversion.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{sqrt5_bits, Precision, Real};

pub use num_rational::BigRational as Rational;

/// `a + b·√5` with `a, b ∈ ℚ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QS5 {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QS5 {
    pub fn new(a: BigRational, b: BigRational) -> QS5 {
        QS5 { a, b }
    }

    pub fn zero() -> QS5 {
        QS5::new(rat(0), rat(0))
    }

    pub fn one() -> QS5 {
        QS5::from_int(1)
    }

    pub fn from_int(n: i64) -> QS5 {
        QS5::new(rat(n), rat(0))
    }

    pub fn from_bigint(n: BigInt) -> QS5 {
        QS5::new(BigRational::from_integer(n), rat(0))
    }

    pub fn from_rational(q: BigRational) -> QS5 {
        QS5::new(q, rat(0))
    }

    /// `p/q + (r/s)·√5` from small integers; panics on zero denominators.
    pub fn from_ratios(p: i64, q: i64, r: i64, s: i64) -> QS5 {
        QS5::new(
            BigRational::new(p.into(), q.into()),
            BigRational::new(r.into(), s.into()),
        )
    }

    pub fn sqrt5() -> QS5 {
        QS5::new(rat(0), rat(1))
    }

    /// The golden ratio α = (1 + √5)/2.
    pub fn alpha() -> QS5 {
        QS5::from_ratios(1, 2, 1, 2)
    }

    /// β = (1 − √5)/2 = −1/α.
    pub fn beta() -> QS5 {
        QS5::from_ratios(1, 2, -1, 2)
    }

    /// αⁿ by repeated squaring in ℚ(√5); `n` may be negative.
    pub fn alpha_pow(n: i64) -> QS5 {
        QS5::alpha().pow(n)
    }

    /// βⁿ by repeated squaring in ℚ(√5).
    pub fn beta_pow(n: i64) -> QS5 {
        QS5::beta().pow(n)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// True for 0, −1, −2, … (the poles of ψ⁽ᵐ⁾).
    pub fn is_nonpositive_integer(&self) -> bool {
        self.is_integer() && !self.a.is_positive()
    }

    /// The Galois conjugate `a − b√5`.
    pub fn conj(&self) -> QS5 {
        QS5::new(self.a.clone(), -&self.b)
    }

    /// Field norm `x · conj(x) = a² − 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(5)
    }

    pub fn half(&self) -> QS5 {
        self.scale(&BigRational::new(1.into(), 2.into()))
    }

    pub fn scale(&self, k: &BigRational) -> QS5 {
        QS5::new(&self.a * k, &self.b * k)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> QS5 {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero in Q(sqrt 5)");
        self.conj().scale(&n.recip())
    }

    pub fn pow(&self, n: i64) -> QS5 {
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        let mut acc = QS5::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Sign of `a + b√5` using rational arithmetic only.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // mixed signs: compare a² with 5b²
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * rat(5);
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // unreachable for b ≠ 0, √5 is irrational
        }
    }

    pub fn abs(&self) -> QS5 {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact sign of `self − other`.
    pub fn compare(&self, other: &QS5) -> Ordering {
        (self - other).signum().cmp(&0)
    }

    /// Greatest integer ≤ `a + b√5`, by bisection of a rational bracket for √5.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let mut lo = rat(2);
        let mut hi = rat(3);
        let five = rat(5);
        let two = rat(2);
        loop {
            let (x0, x1) = if self.b.is_positive() {
                (&self.a + &self.b * &lo, &self.a + &self.b * &hi)
            } else {
                (&self.a + &self.b * &hi, &self.a + &self.b * &lo)
            };
            // the value lies strictly inside (x0, x1)
            let f0 = x0.floor().to_integer();
            let f1 = x1.floor().to_integer();
            if f0 == f1 {
                return f0;
            }
            let mid = (&lo + &hi) / &two;
            if &mid * &mid < five {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    pub fn fract(&self) -> QS5 {
        self - &QS5::from_bigint(self.floor())
    }

    /// Numeric value at `bits` bits, raising the internal precision when
    /// `a` and `b√5` cancel.
    pub fn to_real_bits(&self, bits: u32) -> Real {
        if self.b.is_zero() {
            return Real::from_rational(&self.a, bits);
        }
        let mut wb = bits + 16;
        loop {
            let a = Real::from_rational(&self.a, wb);
            let b = Real::from_rational(&self.b, wb) * sqrt5_bits(wb);
            let v = &a + &b;
            let lost = if v.is_zero() {
                wb as i64
            } else {
                a.top().max(b.top()) - v.top()
            };
            if lost + 8 <= (wb - bits) as i64 {
                return v.with_bits(bits);
            }
            wb = bits + lost.max(0) as u32 + 24;
        }
    }

    /// Numeric value at working precision for `prec`.
    pub fn to_real(&self, prec: Precision) -> Real {
        self.to_real_bits(prec.working_bits())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real_bits(64).to_f64()
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Rational bracket `lo < √5 < hi` with `hi − lo = 2^-bits`.
pub fn sqrt5_bracket(bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << bits as usize;
    let root = (BigInt::from(5) * &scale * &scale).sqrt();
    let lo = BigRational::new(root.clone(), scale.clone());
    let hi = BigRational::new(root + 1, scale);
    (lo, hi)
}

/// (F_n, F_{n+1}) for n ≥ 0 by fast doubling.
fn fib_pair(n: u64) -> (BigInt, BigInt) {
    if n == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (f, g) = fib_pair(n / 2);
    // F_2k = F_k (2F_{k+1} − F_k), F_{2k+1} = F_k² + F_{k+1}²
    let c = &f * (&g * 2 - &f);
    let d = &f * &f + &g * &g;
    if n % 2 == 0 {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

/// Fibonacci number F_n for any integer n (F_{−n} = (−1)^{n+1} F_n).
pub fn fib(n: i64) -> BigInt {
    let (f, _) = fib_pair(n.unsigned_abs());
    if n < 0 && n % 2 == 0 {
        -f
    } else {
        f
    }
}

/// Lucas number L_n for any integer n (L_{−n} = (−1)^n L_n).
pub fn lucas(n: i64) -> BigInt {
    let (f, g) = fib_pair(n.unsigned_abs());
    let l: BigInt = &g * 2u32 - f;
    if n < 0 && n % 2 != 0 {
        -l
    } else {
        l
    }
}

/// n! as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

impl PartialOrd for QS5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QS5 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl Neg for &QS5 {
    type Output = QS5;
    fn neg(self) -> QS5 {
        QS5::new(-&self.a, -&self.b)
    }
}

impl Neg for QS5 {
    type Output = QS5;
    fn neg(self) -> QS5 {
        QS5::new(-self.a, -self.b)
    }
}

fn add(x: &QS5, y: &QS5) -> QS5 {
    QS5::new(&x.a + &y.a, &x.b + &y.b)
}

fn sub(x: &QS5, y: &QS5) -> QS5 {
    QS5::new(&x.a - &y.a, &x.b - &y.b)
}

fn mul(x: &QS5, y: &QS5) -> QS5 {
    QS5::new(
        &x.a * &y.a + &x.b * &y.b * rat(5),
        &x.a * &y.b + &x.b * &y.a,
    )
}

fn div(x: &QS5, y: &QS5) -> QS5 {
    mul(x, &y.recip())
}

macro_rules! qs5_binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&QS5> for &QS5 {
            type Output = QS5;
            fn $method(self, rhs: &QS5) -> QS5 {
                $f(self, rhs)
            }
        }
        impl $trait<QS5> for QS5 {
            type Output = QS5;
            fn $method(self, rhs: QS5) -> QS5 {
                $f(&self, &rhs)
            }
        }
        impl $trait<&QS5> for QS5 {
            type Output = QS5;
            fn $method(self, rhs: &QS5) -> QS5 {
                $f(&self, rhs)
            }
        }
        impl $trait<QS5> for &QS5 {
            type Output = QS5;
            fn $method(self, rhs: QS5) -> QS5 {
                $f(self, &rhs)
            }
        }
    };
}

qs5_binop!(Add, add, add);
qs5_binop!(Sub, sub, sub);
qs5_binop!(Mul, mul, mul);
qs5_binop!(Div, div, div);

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QS5 {
    /// Rationals render as `p/q`; irrationals as `(A+B√5)/D`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_rational(&self.a));
        }
        let d = self.a.denom().lcm(self.b.denom());
        let big_a = (&self.a * BigRational::from_integer(d.clone())).to_integer();
        let big_b = (&self.b * BigRational::from_integer(d.clone())).to_integer();
        let root = match big_b.abs() {
            x if x.is_one() => "√5".to_string(),
            x => format!("{x}√5"),
        };
        let num = match (big_a.is_zero(), big_b.is_negative()) {
            (true, false) => root,
            (true, true) => format!("-{root}"),
            (false, false) => format!("{big_a}+{root}"),
            (false, true) => format!("{big_a}-{root}"),
        };
        if d.is_one() {
            f.write_str(&num)
        } else if big_a.is_zero() {
            write!(f, "{num}/{d}")
        } else {
            write!(f, "({num})/{d}")
        }
    }
}

impl fmt::Debug for QS5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QS5({self})")
    }
}
