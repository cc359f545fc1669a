use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::Real;

/// Integer polynomial P_m with dᵐ/dzᵐ cot z = P_m(cot z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotDerivPoly {
    order: u32,
    /// `coeffs[i]` multiplies `u^i`.
    coeffs: Vec<BigInt>,
}

impl CotDerivPoly {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at `u`.
    pub fn eval(&self, u: &Real) -> Real {
        let bits = u.bits();
        self.coeffs
            .iter()
            .rev()
            .fold(Real::zero(bits), |acc, c| &acc * u + Real::from_bigint(c, bits))
    }
}

/// P_0(u) = u, P_{m+1}(u) = −(1 + u²)·P_m′(u).
pub fn cot_deriv_poly(m: u32) -> CotDerivPoly {
    let mut coeffs = vec![BigInt::zero(), BigInt::from(1)];
    for _ in 0..m {
        let deriv: Vec<BigInt> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i)
            .collect();
        let mut next = vec![BigInt::zero(); deriv.len() + 2];
        for (i, c) in deriv.iter().enumerate() {
            next[i] -= c;
            next[i + 2] -= c;
        }
        coeffs = next;
    }
    CotDerivPoly { order: m, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn first_polynomials() {
        assert_eq!(cot_deriv_poly(0).coeffs(), ints(&[0, 1]).as_slice());
        assert_eq!(cot_deriv_poly(1).coeffs(), ints(&[-1, 0, -1]).as_slice());
        assert_eq!(cot_deriv_poly(2).coeffs(), ints(&[0, 2, 0, 2]).as_slice());
        assert_eq!(cot_deriv_poly(3).coeffs(), ints(&[-2, 0, -8, 0, -6]).as_slice());
    }

    #[test]
    fn degree_and_parity() {
        for m in 0..=12u32 {
            let p = cot_deriv_poly(m);
            assert_eq!(p.degree(), m as usize + 1);
            assert!(!p.coeffs()[p.degree()].is_zero());
            for (i, c) in p.coeffs().iter().enumerate() {
                if (i + m as usize + 1) % 2 == 1 {
                    assert!(c.is_zero(), "m={m} i={i}");
                }
            }
        }
    }
}
