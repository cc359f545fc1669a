use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{Arg, Precision, Real};
use crate::error::{Error, Result};
use crate::qsqrt5::{factorial, QS5};

use super::bernoulli::bernoulli;

/// Default recurrence threshold W(P) = max(10, 0.8·P).
fn shift_threshold(bits: u32) -> i64 {
    let digits = bits as f64 / std::f64::consts::LOG2_10;
    (0.8 * digits).ceil().max(10.0) as i64
}

/// ψ⁽ᵐ⁾(x) at working precision.
///
/// Arguments below 1/2 (including negative non-integers) are moved up by the
/// recurrence ψ⁽ᵐ⁾(x) = ψ⁽ᵐ⁾(x+1) − (−1)ᵐ m!/x^(m+1), with the shift terms
/// summed exactly in ℚ(√5) for exact input. The argument is then pushed past
/// W(P) numerically and the Bernoulli asymptotic expansion is applied.
pub fn polygamma(m: u32, x: impl Into<Arg>, prec: Precision) -> Result<Real> {
    polygamma_bits(m, &x.into(), prec.working_bits(), prec)
}

pub(crate) fn polygamma_bits(m: u32, x: &Arg, bits: u32, prec: Precision) -> Result<Real> {
    let m_fact = factorial(m);
    let sign_m: i64 = if m % 2 == 0 { 1 } else { -1 };
    // step 1: bring the argument to ≥ 1/2, collecting Σ 1/(x+i)^(m+1)
    let (start, low_shift) = match x {
        Arg::Exact(q) => {
            if q.is_nonpositive_integer() {
                return Err(Error::Pole(format!("psi^({m}) at {q}")));
            }
            let half = QS5::from_ratios(1, 2, 0, 1);
            let mut y = q.clone();
            let mut acc = QS5::zero();
            while y < half {
                acc = acc + y.pow(-(m as i64) - 1);
                y = y + QS5::one();
            }
            let low = if acc.is_zero() {
                Real::zero(bits)
            } else {
                acc.to_real_bits(bits)
            };
            (y.to_real_bits(bits), low)
        }
        Arg::Approx(r) => {
            let r = r.with_bits(bits);
            if r.signum() <= 0 {
                let dist = (&r - &Real::from_bigint(&r.round(), bits)).abs();
                if dist < prec.tolerance(5) {
                    return Err(Error::Pole(format!("psi^({m}) at {}", r.to_decimal(20))));
                }
            }
            let half = Real::one(bits).mul_pow2(-1);
            let mut y = r;
            let mut acc = Real::zero(bits);
            while y < half {
                acc = acc + y.powi(-(m as i64) - 1);
                y = y + Real::one(bits);
            }
            (y, acc)
        }
    };
    let mut threshold = shift_threshold(bits);
    for _ in 0..4 {
        match shifted_asymptotic(m, &start, threshold, bits) {
            Ok(v) => {
                let shift = low_shift.mul_bigint(&m_fact).mul_int(sign_m);
                return Ok(v - shift);
            }
            Err(Error::Precision(_)) => threshold *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Precision(format!(
        "psi^({m}) asymptotic series did not converge"
    )))
}

/// ψ⁽ᵐ⁾(x) for x ≥ 1/2 via upward recurrence to `threshold` plus asymptotics.
fn shifted_asymptotic(m: u32, x: &Real, threshold: i64, bits: u32) -> Result<Real> {
    let mut w = x.clone();
    let limit = Real::from_int(threshold, bits);
    let mut acc = Real::zero(bits);
    while w < limit {
        acc = acc + w.powi(-(m as i64) - 1);
        w = w + Real::one(bits);
    }
    let asym = asymptotic(m, &w, bits)?;
    let sign_m: i64 = if m % 2 == 0 { 1 } else { -1 };
    Ok(asym - acc.mul_bigint(&factorial(m)).mul_int(sign_m))
}

/// Asymptotic expansion of ψ⁽ᵐ⁾(w), truncated at the smallest term.
///
/// m = 0: ln w − 1/(2w) − Σ B_2k / (2k w^2k)
/// m ≥ 1: (−1)^(m+1) [ (m−1)!/wᵐ + m!/(2w^(m+1)) + Σ B_2k (2k+m−1)!/((2k)! w^(2k+m)) ]
fn asymptotic(m: u32, w: &Real, bits: u32) -> Result<Real> {
    let eps_top = -(bits as i64) - 2;
    let inv_w = w.recip();
    let inv_w2 = inv_w.square();
    let (mut sum, mut pow) = if m == 0 {
        (w.ln()? - inv_w.mul_pow2(-1), Real::one(bits))
    } else {
        let wm = inv_w.powi(m as i64);
        let lead = wm.mul_bigint(&factorial(m - 1)) + (&wm * &inv_w).mul_bigint(&factorial(m)).mul_pow2(-1);
        (lead, wm)
    };
    let scale_top = sum.top();
    // coef_k = (2k+m−1)!/(2k)! for m ≥ 1, 1/(2k) for m = 0
    let mut fact_ratio = if m == 0 {
        BigInt::zero()
    } else {
        factorial(m + 1) / 2
    };
    let mut prev_top = i64::MAX;
    let mut converged = false;
    for k in 1..2000i64 {
        pow = &pow * &inv_w2;
        let b = Real::from_rational(&bernoulli(2 * k as usize), bits);
        let term = if m == 0 {
            -(&b * &pow).div_int(2 * k)
        } else {
            (&b * &pow).mul_bigint(&fact_ratio)
        };
        let t = term.top();
        if term.is_zero() || t < scale_top + eps_top {
            converged = true;
            break;
        }
        if t > prev_top {
            break;
        }
        prev_top = t;
        sum = sum + term;
        if m > 0 {
            // (2k+m+1)!/(2k+2)! from (2k+m−1)!/(2k)!
            let mm = m as i64;
            fact_ratio = fact_ratio * ((2 * k + mm) * (2 * k + mm + 1)) / ((2 * k + 1) * (2 * k + 2));
        }
    }
    if !converged {
        return Err(Error::Precision(format!(
            "asymptotic series for psi^({m}) stalled at w = {}",
            w.to_decimal(6)
        )));
    }
    Ok(if m % 2 == 0 && m > 0 { -sum } else { sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{const_pi, ln2_bits};
    use crate::specfun::zeta_int;

    const GAMMA_40: &str = "0.5772156649015328606065120900824024310422";
    const CATALAN_40: &str = "0.9159655941772190150546035149323841107741";

    fn close(a: &Real, b: &Real, prec: Precision) -> bool {
        (a - b).abs() < prec.tolerance(5)
    }

    #[test]
    fn digamma_at_one_and_half() {
        let p = Precision::new(40).unwrap();
        let bits = p.working_bits();
        let gamma = Real::parse(GAMMA_40, bits).unwrap();
        let psi1 = polygamma(0, QS5::one(), p).unwrap();
        assert!((&psi1 + &gamma).abs() < Real::pow10(-39, bits));
        let psi_half = polygamma(0, QS5::from_ratios(1, 2, 0, 1), p).unwrap();
        let expect = -(&gamma + &ln2_bits(bits).mul_pow2(1));
        assert!((&psi_half - &expect).abs() < Real::pow10(-39, bits));
    }

    #[test]
    fn trigamma_and_tetragamma_at_one() {
        let p = Precision::DEFAULT;
        let pi = const_pi(p);
        let t = polygamma(1, QS5::one(), p).unwrap();
        assert!(close(&t, &pi.square().div_int(6), p));
        let t2 = polygamma(2, QS5::one(), p).unwrap();
        assert!(close(&t2, &zeta_int(3, p).unwrap().mul_int(-2), p));
    }

    #[test]
    fn trigamma_quarter_is_pi_squared_plus_eight_catalan() {
        let p = Precision::new(40).unwrap();
        let bits = p.working_bits();
        let t = polygamma(1, QS5::from_ratios(1, 4, 0, 1), p).unwrap();
        let expect = const_pi(p).square() + Real::parse(CATALAN_40, bits).unwrap().mul_int(8);
        assert!((&t - &expect).abs() < Real::pow10(-38, bits));
    }

    #[test]
    fn exact_and_numeric_arguments_agree() {
        let p = Precision::DEFAULT;
        for m in 0..5 {
            let x = QS5::from_ratios(-7, 3, 1, 2);
            let a = polygamma(m, &x, p).unwrap();
            let b = polygamma(m, x.to_real(p), p).unwrap();
            assert!(((&a - &b) / &a).abs() < p.tolerance(8), "m = {m}");
        }
    }

    #[test]
    fn recurrence_holds_at_negative_argument() {
        let p = Precision::DEFAULT;
        let x = QS5::from_ratios(-5, 2, 0, 1);
        for m in 0..4u32 {
            let lhs = polygamma(m, &x + &QS5::one(), p).unwrap()
                - polygamma(m, &x, p).unwrap();
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let rhs = x.to_real(p).powi(-(m as i64) - 1).mul_bigint(&factorial(m)).mul_int(sign);
            assert!(close(&lhs, &rhs, p), "m = {m}");
        }
    }

    #[test]
    fn poles_are_reported() {
        let p = Precision::DEFAULT;
        assert!(matches!(polygamma(0, QS5::zero(), p), Err(Error::Pole(_))));
        assert!(matches!(polygamma(3, QS5::from_int(-4), p), Err(Error::Pole(_))));
        assert!(matches!(polygamma(1, Real::from_int(-2, 300), p), Err(Error::Pole(_))));
    }
}
