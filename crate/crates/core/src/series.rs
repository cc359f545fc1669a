//! Direct summation of the Fibonacci/Lucas–zeta series
//!
//! ```text
//! (F)  Σ_{j≥1} (−1)^(j+1) (m+j)!/j! ζ(m+j+1) F_{rj} z^j
//! (L)  Σ_{j≥0} (−1)^j     (m+j)!/j! ζ(m+j+1) L_{rj} z^j
//! ```
//!
//! Convergence is decided exactly in ℚ(√5), and summation stops on a
//! geometric tail bound built from exact rational upper bounds.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{Precision, Real};
use crate::error::{Error, Result};
use crate::qsqrt5::{fib, lucas, sqrt5_bracket, Rational, QS5};
use crate::specfun::zeta_bits;

/// Default cap on the number of summed terms.
pub const DEFAULT_MAX_TERMS: usize = 20_000;

/// Which Binet combination the series carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    F,
    L,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::F => "F",
            Kind::L => "L",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "F" | "f" => Ok(Kind::F),
            "L" | "l" => Ok(Kind::L),
            _ => Err(Error::Usage(format!("unknown series kind {s:?} (expected F or L)"))),
        }
    }
}

/// A series of kind F or L with order m, index step r and argument z.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesSpec {
    pub kind: Kind,
    pub m: u32,
    pub r: i64,
    pub z: Rational,
}

impl SeriesSpec {
    /// Validates the parameters; the L series needs m ≥ 1 because at m = 0 the
    /// constant γ does not cancel.
    pub fn new(kind: Kind, m: u32, r: i64, z: Rational) -> Result<SeriesSpec> {
        if kind == Kind::L && m == 0 {
            return Err(Error::Usage("the L series requires m >= 1".into()));
        }
        Ok(SeriesSpec { kind, m, r, z })
    }

    /// First summation index: 1 for F (F_0 = 0), 0 for L.
    pub fn first_index(&self) -> u32 {
        match self.kind {
            Kind::F => 1,
            Kind::L => 0,
        }
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(m={}, r={}, z={})", self.kind, self.m, self.r, self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Convergent,
    Divergent,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Convergent => "convergent",
            Classification::Divergent => "divergent",
        })
    }
}

/// Outcome of [`sum_series`]. `value` and `tail_bound` are present only for
/// convergent specs.
#[derive(Clone, Debug)]
pub struct SumResult {
    pub classification: Classification,
    /// α^|r|·|z|, the exact dominant term ratio.
    pub ratio: QS5,
    pub value: Option<Real>,
    pub terms_used: usize,
    pub tail_bound: Option<Real>,
}

/// Exact Taylor-disc test: convergent iff α^|r|·|z| < 1.
pub fn converges(r: i64, z: &Rational) -> (bool, QS5) {
    let ratio = QS5::alpha_pow(r.abs()).scale(&z.abs());
    let ok = ratio < QS5::one();
    (ok, ratio)
}

/// ceil(x · 2^k) / 2^k for x ≥ 0.
fn round_up(x: &Rational, k: u32) -> Rational {
    let scale = BigInt::one() << k as usize;
    let n = (x.numer() * &scale).div_ceil(x.denom());
    Rational::new(n, scale)
}

/// Rational upper bounds used by the tail estimate.
struct RatioBounds {
    /// ≥ α^|r|
    alpha_r: Rational,
    /// ≥ α^(−2|r|)
    rho: Rational,
}

impl RatioBounds {
    fn new(r: i64) -> RatioBounds {
        let r = r.unsigned_abs() as i64;
        let (_, s5_hi) = sqrt5_bracket(96);
        let two = Rational::from_integer(2.into());
        let alpha_r = (Rational::from_integer(lucas(r)) + Rational::from_integer(fib(r)) * &s5_hi) / &two;
        let inv_alpha = (&s5_hi - Rational::one()) / &two;
        // r = 0: G_j is constant, so the Binet factor is exactly 1
        let rho = if r == 0 {
            Rational::zero()
        } else {
            round_up(&num_traits::pow(inv_alpha, 2 * r as usize), 96)
        };
        RatioBounds { alpha_r, rho }
    }

    /// Upper bound on |t_{j+1}/t_j| for all j ≥ J, given ρ^J (rounded up).
    fn ratio(&self, m: u32, big_j: u32, rho_j: &Rational, z_abs: &Rational) -> Option<Rational> {
        let one = Rational::one();
        if rho_j >= &one {
            return None;
        }
        let poly = Rational::new((m + big_j + 1).into(), (big_j + 1).into());
        let binet = (&one + rho_j) / (&one - rho_j);
        Some(poly * &self.alpha_r * binet * z_abs)
    }
}

/// Sums the series of `spec` until the geometric tail bound drops below `tol`.
pub fn sum_series(spec: &SeriesSpec, prec: Precision, tol: &Real, max_terms: usize) -> Result<SumResult> {
    let SeriesSpec { kind, m, r, ref z } = *spec;
    if kind == Kind::L && m == 0 {
        return Err(Error::Usage("the L series requires m >= 1".into()));
    }
    let (ok, ratio) = converges(r, z);
    if !ok {
        return Ok(SumResult {
            classification: Classification::Divergent,
            ratio,
            value: None,
            terms_used: 0,
            tail_bound: None,
        });
    }
    let bits = prec.working_bits();
    let wb = bits + 32;
    let z_abs = z.abs();
    let lr = lucas(r);
    let sign_r: i64 = if r % 2 == 0 { 1 } else { -1 };
    // G_j = F_{rj} or L_{rj}, with G_{j+1} = L_r G_j − (−1)^r G_{j−1}
    let (mut g_prev, mut g) = match kind {
        Kind::F => (BigInt::zero(), fib(r)),
        Kind::L => (BigInt::from(2), lr.clone()),
    };
    let j0 = spec.first_index();
    if j0 == 0 {
        std::mem::swap(&mut g_prev, &mut g);
        // g = G_0, g_prev = G_1; fix up so that g_prev is G_{−1}
        let g_minus = (&lr * &g - &g_prev) * sign_r;
        g_prev = g_minus;
    }
    // (m+j)!/j! at j = j0
    let mut falling: BigInt = (j0 + 1..=j0 + m).fold(BigInt::one(), |acc, k| acc * k);
    let mut z_num = num_traits::pow(z.numer().clone(), j0 as usize);
    let mut z_den = num_traits::pow(z.denom().clone(), j0 as usize);
    let bounds = RatioBounds::new(r);
    let mut rho_j = Rational::one();
    for _ in 0..j0 {
        rho_j = round_up(&(&rho_j * &bounds.rho), 96);
    }
    let mut sum = Real::zero(wb);
    let mut last_tail = None;
    let mut count = 0usize;
    let mut j = j0;
    loop {
        if count >= max_terms {
            return Err(Error::Truncation {
                terms: count,
                partial: Box::new(sum.with_bits(bits)),
                tail_bound: last_tail.map(|t: Real| Box::new(t.with_bits(bits))),
            });
        }
        let alternating_sign = match kind {
            Kind::F => j % 2 == 1,
            Kind::L => j % 2 == 0,
        };
        let num = &falling * &g * &z_num;
        let mut t = Real::from_ratio(&num, &z_den, wb)? * zeta_bits(m + j + 1, wb)?;
        if !alternating_sign {
            t = -t;
        }
        sum = sum + &t;
        count += 1;
        if j >= 1 {
            if let Some(q) = bounds.ratio(m, j, &rho_j, &z_abs) {
                if q < Rational::one() {
                    let qr = Real::from_rational(&q, 64);
                    let one = Real::one(64);
                    let tail = (t.abs() * &qr / (&one - &qr)).with_bits(bits);
                    if &tail < tol {
                        return Ok(SumResult {
                            classification: Classification::Convergent,
                            ratio,
                            value: Some(sum.with_bits(bits)),
                            terms_used: count,
                            tail_bound: Some(tail),
                        });
                    }
                    last_tail = Some(tail);
                }
            }
        }
        // advance to j + 1
        let g_next = &lr * &g - &g_prev * sign_r;
        g_prev = std::mem::replace(&mut g, g_next);
        falling = falling * (m + j + 1) / (j + 1);
        z_num *= z.numer();
        z_den *= z.denom();
        rho_j = round_up(&(&rho_j * &bounds.rho), 96);
        j += 1;
    }
}
