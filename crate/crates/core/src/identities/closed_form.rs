use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{Arg, Precision, Real};
use crate::error::{Error, Result};
use crate::qsqrt5::{factorial, fib, lucas, Rational, QS5};
use crate::specfun::{cot_deriv_bits, pi_cached};

/// Expression tree for the right-hand side of an identity.
///
/// `CotDerivAt { m, at }` is dᵐ/dzᵐ cot(πz) at z = `at`, without the usual
/// π prefactor; the prefactor is an explicit `PiPow(1)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedForm {
    Scalar(QS5),
    PiPow(i32),
    Sqrt5Pow(i32),
    CotDerivAt { m: u32, at: QS5 },
    Fib(i64),
    Lucas(i64),
    Factorial(u32),
    Add(Vec<ClosedForm>),
    Mul(Vec<ClosedForm>),
    Neg(Box<ClosedForm>),
    Pow(Box<ClosedForm>, i32),
}

impl ClosedForm {
    pub fn int(n: i64) -> ClosedForm {
        ClosedForm::Scalar(QS5::from_int(n))
    }

    pub fn ratio(p: i64, q: i64) -> ClosedForm {
        ClosedForm::Scalar(QS5::from_ratios(p, q, 0, 1))
    }

    /// dᵐ/dzᵐ cot(πz) at `at`; rejects integer points, where cot has a pole.
    pub fn cot_deriv_at(m: u32, at: QS5) -> Result<ClosedForm> {
        if at.is_integer() {
            return Err(Error::Pole(format!("cot derivative atom at integer {at}")));
        }
        Ok(ClosedForm::CotDerivAt { m, at })
    }

    /// π · dᵐ/dzᵐ cot(πz) at `at`.
    pub fn pi_cot_deriv_at(m: u32, at: QS5) -> Result<ClosedForm> {
        Ok(ClosedForm::PiPow(1) * ClosedForm::cot_deriv_at(m, at)?)
    }

    pub fn pow(self, k: i32) -> ClosedForm {
        ClosedForm::Pow(Box::new(self), k)
    }

    /// Flattens the tree into Σ coefficient · π^k · [cot atom], with every
    /// exact atom folded into the ℚ(√5) coefficient.
    pub fn canonical(&self) -> Result<Canonical> {
        use ClosedForm::*;
        Ok(match self {
            Scalar(q) => Canonical::scalar(q.clone()),
            PiPow(k) => Canonical::monomial(*k, None, QS5::one()),
            Sqrt5Pow(k) => Canonical::scalar(QS5::sqrt5().pow(*k as i64)),
            CotDerivAt { m, at } => Canonical::monomial(0, Some((*m, at.fract())), QS5::one()),
            Fib(n) => Canonical::scalar(QS5::from_bigint(fib(*n))),
            Lucas(n) => Canonical::scalar(QS5::from_bigint(lucas(*n))),
            Factorial(n) => Canonical::scalar(QS5::from_bigint(factorial(*n))),
            Add(xs) => {
                let mut acc = Canonical::default();
                for x in xs {
                    acc = acc.add(&x.canonical()?);
                }
                acc
            }
            Mul(xs) => {
                let mut acc = Canonical::scalar(QS5::one());
                for x in xs {
                    acc = acc.mul(&x.canonical()?)?;
                }
                acc
            }
            Neg(x) => x.canonical()?.scale(&QS5::from_int(-1)),
            Pow(x, k) => x.canonical()?.pow(*k)?,
        })
    }

    /// Numeric value at working precision for `prec`.
    pub fn eval(&self, prec: Precision) -> Result<Real> {
        self.canonical()?.eval(prec)
    }
}

impl Add for ClosedForm {
    type Output = ClosedForm;

    fn add(self, rhs: ClosedForm) -> ClosedForm {
        match self {
            ClosedForm::Add(mut xs) => {
                xs.push(rhs);
                ClosedForm::Add(xs)
            }
            lhs => ClosedForm::Add(vec![lhs, rhs]),
        }
    }
}

impl Sub for ClosedForm {
    type Output = ClosedForm;

    fn sub(self, rhs: ClosedForm) -> ClosedForm {
        self + (-rhs)
    }
}

impl Mul for ClosedForm {
    type Output = ClosedForm;

    fn mul(self, rhs: ClosedForm) -> ClosedForm {
        match self {
            ClosedForm::Mul(mut xs) => {
                xs.push(rhs);
                ClosedForm::Mul(xs)
            }
            lhs => ClosedForm::Mul(vec![lhs, rhs]),
        }
    }
}

impl Neg for ClosedForm {
    type Output = ClosedForm;

    fn neg(self) -> ClosedForm {
        ClosedForm::Neg(Box::new(self))
    }
}

fn paren(s: String) -> String {
    if s.contains([' ', '+']) || s.chars().skip(1).any(|c| c == '-') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClosedForm::*;
        match self {
            Scalar(q) => write!(f, "{q}"),
            PiPow(1) => f.write_str("π"),
            PiPow(k) => write!(f, "π^{k}"),
            Sqrt5Pow(1) => f.write_str("√5"),
            Sqrt5Pow(k) => write!(f, "√5^{k}"),
            CotDerivAt { m, at } => write!(f, "cot^({m})[{at}]"),
            Fib(n) => write!(f, "F({n})"),
            Lucas(n) => write!(f, "L({n})"),
            Factorial(n) => write!(f, "{n}!"),
            Add(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    match (i, x) {
                        (0, Neg(inner)) => write!(f, "-{}", paren(inner.to_string()))?,
                        (0, x) => write!(f, "{x}")?,
                        (_, Neg(inner)) => write!(f, " - {}", paren(inner.to_string()))?,
                        (_, x) => write!(f, " + {x}")?,
                    }
                }
                Ok(())
            }
            Mul(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| paren(x.to_string())).collect();
                f.write_str(&parts.join("·"))
            }
            Neg(x) => write!(f, "-{}", paren(x.to_string())),
            Pow(x, k) => write!(f, "{}^{k}", paren(x.to_string())),
        }
    }
}

/// Key of a canonical monomial: power of π and an optional cotangent
/// derivative atom (order, argument reduced into [0, 1)).
pub type MonomialKey = (i32, Option<(u32, QS5)>);

/// A ClosedForm flattened to Σ coefficient · π^k · [cot atom].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Canonical {
    terms: BTreeMap<MonomialKey, QS5>,
}

impl Canonical {
    pub fn scalar(q: QS5) -> Canonical {
        Canonical::monomial(0, None, q)
    }

    fn monomial(pi: i32, atom: Option<(u32, QS5)>, coef: QS5) -> Canonical {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert((pi, atom), coef);
        }
        Canonical { terms }
    }

    pub fn terms(&self) -> &BTreeMap<MonomialKey, QS5> {
        &self.terms
    }

    /// The exact constant (π⁰, no cot atom) part.
    pub fn constant(&self) -> QS5 {
        self.terms.get(&(0, None)).cloned().unwrap_or_else(QS5::zero)
    }

    fn add(mut self, other: &Canonical) -> Canonical {
        for (k, v) in &other.terms {
            let sum = self.terms.get(k).cloned().unwrap_or_else(QS5::zero) + v;
            if sum.is_zero() {
                self.terms.remove(k);
            } else {
                self.terms.insert(k.clone(), sum);
            }
        }
        self
    }

    fn scale(mut self, c: &QS5) -> Canonical {
        if c.is_zero() {
            return Canonical::default();
        }
        for v in self.terms.values_mut() {
            *v = &*v * c;
        }
        self
    }

    fn mul(&self, other: &Canonical) -> Result<Canonical> {
        let mut out = Canonical::default();
        for ((pa, aa), ca) in &self.terms {
            for ((pb, ab), cb) in &other.terms {
                let atom = match (aa, ab) {
                    (None, x) | (x, None) => x.clone(),
                    (Some(_), Some(_)) => {
                        return Err(Error::Usage(
                            "products of two cotangent atoms are not supported".into(),
                        ))
                    }
                };
                out = out.add(&Canonical::monomial(pa + pb, atom, ca * cb));
            }
        }
        Ok(out)
    }

    fn pow(&self, k: i32) -> Result<Canonical> {
        if k >= 0 {
            let mut acc = Canonical::scalar(QS5::one());
            for _ in 0..k {
                acc = acc.mul(self)?;
            }
            return Ok(acc);
        }
        match self.terms.iter().next() {
            Some(((pi, None), c)) if self.terms.len() == 1 => {
                Ok(Canonical::monomial(pi * k, None, c.pow(k as i64)))
            }
            _ => Err(Error::Usage(
                "negative powers are supported only for π^k times a constant".into(),
            )),
        }
    }

    /// Numeric value; exact parts are combined in ℚ(√5) before rounding.
    pub fn eval(&self, prec: Precision) -> Result<Real> {
        let bits = prec.working_bits() + 16;
        let pi = pi_cached(bits);
        let mut acc = Real::zero(bits);
        for ((k, atom), coef) in &self.terms {
            let mut v = coef.to_real_bits(bits) * pi.powi(*k as i64);
            if let Some((m, at)) = atom {
                v = v * cot_deriv_bits(*m, &Arg::Exact(at.clone()), bits, prec)?;
            }
            acc = acc + v;
        }
        Ok(acc.with_bits(prec.working_bits()))
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // cot terms first, by descending π power, then the constant
        let mut keys: Vec<&MonomialKey> = self.terms.keys().collect();
        keys.sort_by_key(|(pi, atom)| (atom.is_none(), -pi));
        for (i, key) in keys.into_iter().enumerate() {
            let coef = &self.terms[key];
            let (neg, mag) = if coef.signum() < 0 { (true, -coef) } else { (false, coef.clone()) };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let (pi, atom) = key;
            let mut factors = Vec::new();
            if mag != QS5::one() || (*pi == 0 && atom.is_none()) {
                factors.push(paren(mag.to_string()));
            }
            match pi {
                0 => {}
                1 => factors.push("π".into()),
                k => factors.push(format!("π^{k}")),
            }
            if let Some((m, at)) = atom {
                factors.push(format!("cot^({m})[{at}]"));
            }
            f.write_str(&factors.join("·"))?;
        }
        Ok(())
    }
}

/// Rational convenience for exact scalars.
pub(crate) fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_folds_exact_atoms() {
        // 2·F(9)·2!/√5^2 = 2·34·2/5
        let e = ClosedForm::int(2) * ClosedForm::Fib(9) * ClosedForm::Factorial(2) * ClosedForm::Sqrt5Pow(-2);
        assert_eq!(e.canonical().unwrap().constant(), QS5::from_ratios(136, 5, 0, 1));
    }

    #[test]
    fn cot_atoms_are_compared_modulo_one() {
        let a = ClosedForm::cot_deriv_at(1, QS5::alpha_pow(3).half()).unwrap();
        let b = ClosedForm::cot_deriv_at(1, QS5::sqrt5().half()).unwrap();
        assert_eq!(a.canonical().unwrap(), b.canonical().unwrap());
    }

    #[test]
    fn integer_cot_argument_is_rejected() {
        assert!(ClosedForm::cot_deriv_at(0, QS5::from_int(3)).is_err());
    }

    #[test]
    fn pi_powers_cancel() {
        let e = ClosedForm::PiPow(3) * ClosedForm::PiPow(-2).pow(1) * ClosedForm::PiPow(1).pow(-1);
        let c = e.canonical().unwrap();
        assert_eq!(c.constant(), QS5::one());
    }

    #[test]
    fn evaluates_cot_csc_squared() {
        // cot(π/4)·csc²(π/4) = 2 and equals cot''/(2π²) there
        let e = ClosedForm::ratio(1, 2)
            * ClosedForm::PiPow(-2)
            * ClosedForm::cot_deriv_at(2, QS5::from_ratios(1, 4, 0, 1)).unwrap();
        let p = Precision::DEFAULT;
        let v = e.eval(p).unwrap();
        assert!((&v - &Real::from_int(2, v.bits())).abs() < p.tolerance(5));
    }

    #[test]
    fn display_is_readable() {
        let e = ClosedForm::ratio(13616, 25) - ClosedForm::PiPow(1) * ClosedForm::Sqrt5Pow(-1);
        assert_eq!(e.to_string(), "13616/25 - (π·(√5^-1))");
        let c = e.canonical().unwrap();
        assert_eq!(c.to_string(), "-√5/5·π + 13616/25");
        let _ = rat(1, 2);
    }
}
