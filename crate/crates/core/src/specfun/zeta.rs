use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use crate::arith::{Precision, Real};
use crate::error::{Error, Result};

use super::bernoulli::bernoulli;

static CACHE: LazyLock<RwLock<HashMap<(u32, u32), Real>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// ζ(k) for integer k ≥ 2 at working precision, memoized per (k, precision).
pub fn zeta_int(k: u32, prec: Precision) -> Result<Real> {
    zeta_bits(k, prec.working_bits())
}

pub(crate) fn zeta_bits(k: u32, bits: u32) -> Result<Real> {
    if k < 2 {
        return Err(Error::Domain(format!("zeta({k}) requires k >= 2")));
    }
    if let Some(v) = CACHE.read().expect("zeta cache poisoned").get(&(k, bits)) {
        return Ok(v.clone());
    }
    let v = compute(k, bits)?;
    CACHE
        .write()
        .expect("zeta cache poisoned")
        .insert((k, bits), v.clone());
    Ok(v)
}

fn compute(k: u32, bits: u32) -> Result<Real> {
    let wb = bits + 16;
    let eps_top = -(wb as i64) - 4;
    let mut n_cut = ((wb as f64) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI)).ceil()
        as u32
        + 4;
    // large k: the Dirichlet sum alone converges after a handful of terms
    if (k as f64) * (n_cut as f64).log2() > wb as f64 + 8.0 {
        let mut s = Real::one(wb);
        let mut n: i64 = 2;
        loop {
            let t = Real::from_int(n, wb).powi(-(k as i64));
            if t.top() < eps_top {
                break;
            }
            s = s + t;
            n += 1;
        }
        return Ok(s.with_bits(bits));
    }
    for _ in 0..6 {
        if let Some(v) = euler_maclaurin(k, n_cut, wb) {
            return Ok(v.with_bits(bits));
        }
        n_cut *= 2;
    }
    Err(Error::Precision(format!("zeta({k}) Euler-Maclaurin did not converge")))
}

/// Σ_{n<N} n^-k + N^(1-k)/(k-1) + N^-k/2 + Σ_i B_2i/(2i)! (k)_{2i-1} N^(-k-2i+1);
/// `None` if the correction terms start growing before they are negligible.
fn euler_maclaurin(k: u32, n_cut: u32, wb: u32) -> Option<Real> {
    let eps_top = -(wb as i64) - 4;
    let k_i = k as i64;
    let mut s = Real::zero(wb);
    for n in 1..n_cut as i64 {
        s = s + Real::from_int(n, wb).powi(-k_i);
    }
    let nr = Real::from_int(n_cut as i64, wb);
    let n_pow = nr.powi(-k_i);
    s = s + (&n_pow * &nr).div_int(k_i - 1) + n_pow.mul_pow2(-1);
    let inv_n2 = nr.square().recip();
    // ratio_i = (k)_{2i-1} / (2i)! · N^(-k-2i+1)
    let mut ratio = (&n_pow / &nr).mul_int(k_i).div_int(2);
    let mut prev_top = i64::MAX;
    for i in 1.. {
        let b = bernoulli(2 * i as usize);
        let term = Real::from_rational(&b, wb) * &ratio;
        let t = term.top();
        if term.is_zero() || t < eps_top {
            return Some(s);
        }
        if t > prev_top {
            return None;
        }
        prev_top = t;
        s = s + term;
        let a = k_i + 2 * i - 1;
        ratio = (&ratio * &inv_n2).mul_int(a * (a + 1)).div_int((2 * i + 1) * (2 * i + 2));
    }
    unreachable!()
}
