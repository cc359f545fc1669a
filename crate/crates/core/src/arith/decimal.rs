//! Locale-independent decimal rendering and parsing of [`Real`] values.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Real;
use crate::error::{Error, Result};

/// Parses a rational literal: `p`, `p/q`, or a decimal such as `-1.25e-3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Usage(format!("cannot parse number {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n = BigInt::from_str(&digits).map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * p)
    } else {
        BigRational::new(n, p)
    })
}

impl Real {
    /// Parses a decimal or `p/q` literal, rounding to `bits`.
    pub fn parse(s: &str, bits: u32) -> Result<Real> {
        Ok(Real::from_rational(&parse_rational(s)?, bits))
    }

    /// Renders `sig` significant digits, positional for moderate exponents and
    /// `d.ddde±x` otherwise. Zero renders as `"0"`.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut e10 = self.log10_abs().floor() as i64;
        let digits = loop {
            let n = self.scaled_digits(sig as i64 - 1 - e10);
            let len = n.to_string().len() as i64;
            if len > sig as i64 {
                e10 += len - sig as i64;
            } else if len < sig as i64 {
                e10 -= sig as i64 - len;
            } else {
                break n.to_string();
            }
        };
        let sign = if self.is_negative() { "-" } else { "" };
        if (-7..21).contains(&e10) {
            if e10 >= 0 {
                let int_len = (e10 + 1) as usize;
                if int_len >= sig {
                    format!("{sign}{digits}{}", "0".repeat(int_len - sig))
                } else {
                    format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
                }
            } else {
                format!("{sign}0.{}{digits}", "0".repeat((-e10 - 1) as usize))
            }
        } else if sig == 1 {
            format!("{sign}{digits}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &digits[..1], &digits[1..])
        }
    }

    /// round(|x| · 10^k) as an integer.
    fn scaled_digits(&self, k: i64) -> BigInt {
        let ten = BigInt::from(10);
        let p = num_traits::pow(ten, k.unsigned_abs() as usize);
        let (mut num, mut den) = if k >= 0 {
            (self.mantissa().abs() * p, BigInt::one())
        } else {
            (self.mantissa().abs(), p)
        };
        let e = self.exponent();
        if e >= 0 {
            num <<= e as usize;
        } else {
            den <<= (-e) as usize;
        }
        let (q, r) = num.div_rem(&den);
        if r * 2 >= den {
            q + 1
        } else {
            q
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_positional_and_scientific() {
        let x = Real::parse("13616/25", 200).unwrap();
        assert_eq!(x.to_decimal(8), "544.64000");
        assert_eq!(Real::parse("-0.00125", 200).unwrap().to_decimal(3), "-0.00125");
        assert_eq!(Real::parse("1e-30", 200).unwrap().to_decimal(2), "1.0e-30");
        assert_eq!(Real::parse("123456", 200).unwrap().to_decimal(3), "123000");
        assert_eq!(Real::parse("9.9999", 200).unwrap().to_decimal(3), "10.0");
        assert_eq!(Real::zero(100).to_decimal(5), "0");
    }

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert_eq!(parse_rational("+7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn one_third_renders_fifty_threes() {
        let s = Real::parse("1/3", 200).unwrap().to_decimal(50);
        assert_eq!(s, format!("0.{}", "3".repeat(50)));
    }
}
