//! Residual evaluators for the polygamma functional equations and their
//! evaluations at golden-ratio arguments.
//!
//! Every equation is stored as two lists of [`Term`]s. The two sides are
//! evaluated separately, so a bug in one kernel cannot cancel against itself.
//! Working precision is raised by the decimal magnitude of the largest term,
//! which keeps absolute residuals meaningful near poles.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Arg, Precision, Real};
use crate::error::{Error, Result};
use crate::qsqrt5::{factorial, fib, lucas, Rational, QS5};
use crate::specfun::{cot_deriv_bits, pi_cached, polygamma_bits};

/// Which orders m an equation holds for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Any,
    Even,
    Odd,
}

impl Parity {
    pub fn admits(self, m: u32) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => m % 2 == 0,
            Parity::Odd => m % 2 == 1,
        }
    }
}

/// Linear constraint tying the two arguments of a binary equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Free,
    /// x + y = 1
    SumOne,
    /// x + y = 2
    SumTwo,
    /// x − y = 1
    DiffOne,
}

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }

            pub fn from_name(s: &str) -> Option<$name> {
                $name::ALL.iter().copied().find(|v| v.name().eq_ignore_ascii_case(s))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

named_enum! {
    /// The polygamma functional equations, in the order they are derived.
    FuncEqId {
        Recurrence => "RECURRENCE",
        Reflection => "REFLECTION",
        Duplication => "DUPLICATION",
        DupDiffEven => "DUP_DIFF_EVEN",
        DupSumOdd => "DUP_SUM_ODD",
        NegDiffEven => "NEG_DIFF_EVEN",
        NegSumOdd => "NEG_SUM_ODD",
        HalfReflect => "HALF_REFLECT",
        OnePm => "ONE_PM",
        UnitShift => "UNIT_SHIFT",
        SumOne => "SUM_ONE",
        ShiftDiff => "SHIFT_DIFF",
        ShiftSum => "SHIFT_SUM",
        GenDiff => "GEN_DIFF",
        GenSum => "GEN_SUM",
        Xy1DiffEven => "XY1_DIFF_EVEN",
        Xy1SumOdd => "XY1_SUM_ODD",
        Xy2DiffEven => "XY2_DIFF_EVEN",
        Xy2SumOdd => "XY2_SUM_ODD",
        HalfGenDiff => "HALF_GEN_DIFF",
        HalfGenSum => "HALF_GEN_SUM",
        HalfDiffEven => "HALF_DIFF_EVEN",
        HalfSumOdd => "HALF_SUM_ODD",
    }
}

named_enum! {
    /// Evaluations of polygamma combinations at golden-ratio arguments.
    LemmaId {
        AtAlphaDiffEven => "AT_ALPHA_DIFF_EVEN",
        AtAlphaSumOdd => "AT_ALPHA_SUM_ODD",
        AtAlpha2DiffEven => "AT_ALPHA2_DIFF_EVEN",
        AtAlpha2SumOdd => "AT_ALPHA2_SUM_ODD",
        AtAlpha3DiffEven => "AT_ALPHA3_DIFF_EVEN",
        AtAlpha3SumOdd => "AT_ALPHA3_SUM_ODD",
        AtAlpha3HalfDiffEven => "AT_ALPHA3_HALF_DIFF_EVEN",
        AtAlpha3HalfSumOdd => "AT_ALPHA3_HALF_SUM_ODD",
        AtArOverLrDiffEven => "AT_AR_OVER_LR_DIFF_EVEN",
        AtArOverLrSumOdd => "AT_AR_OVER_LR_SUM_ODD",
        AtArOverFrSqrt5Diff => "AT_AR_OVER_FR_SQRT5_DIFF",
        AtOnePlus2ArLrDiffEven => "AT_ONE_PLUS_2AR_LR_DIFF_EVEN",
        AtOnePlus2ArLrSumOdd => "AT_ONE_PLUS_2AR_LR_SUM_ODD",
        AtNegArLrDiffEven => "AT_NEG_AR_LR_DIFF_EVEN",
        AtNegArLrSumOdd => "AT_NEG_AR_LR_SUM_ODD",
    }
}

impl FuncEqId {
    pub fn parity(self) -> Parity {
        use FuncEqId::*;
        match self {
            DupDiffEven | NegDiffEven | Xy1DiffEven | Xy2DiffEven | HalfDiffEven => Parity::Even,
            DupSumOdd | NegSumOdd | Xy1SumOdd | Xy2SumOdd | HalfSumOdd => Parity::Odd,
            _ => Parity::Any,
        }
    }

    /// Number of free arguments (1 or 2).
    pub fn arity(self) -> usize {
        use FuncEqId::*;
        match self {
            Recurrence | Reflection | Duplication | HalfReflect | OnePm => 1,
            _ => 2,
        }
    }

    pub fn constraint(self) -> Constraint {
        use FuncEqId::*;
        match self {
            NegDiffEven | NegSumOdd | SumOne | Xy1DiffEven | Xy1SumOdd | HalfDiffEven
            | HalfSumOdd => Constraint::SumOne,
            Xy2DiffEven | Xy2SumOdd => Constraint::SumTwo,
            UnitShift => Constraint::DiffOne,
            _ => Constraint::Free,
        }
    }
}

impl LemmaId {
    pub fn parity(self) -> Parity {
        use LemmaId::*;
        match self {
            AtArOverFrSqrt5Diff => Parity::Any,
            AtAlphaDiffEven | AtAlpha2DiffEven | AtAlpha3DiffEven | AtAlpha3HalfDiffEven
            | AtArOverLrDiffEven | AtOnePlus2ArLrDiffEven | AtNegArLrDiffEven => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// Whether the evaluation depends on an integer parameter r.
    pub fn takes_r(self) -> bool {
        use LemmaId::*;
        matches!(
            self,
            AtArOverLrDiffEven
                | AtArOverLrSumOdd
                | AtArOverFrSqrt5Diff
                | AtOnePlus2ArLrDiffEven
                | AtOnePlus2ArLrSumOdd
                | AtNegArLrDiffEven
                | AtNegArLrSumOdd
        )
    }
}

/// One additive term of an equation side.
#[derive(Clone, Debug)]
pub enum Term {
    /// sign · ψ⁽ᵐ⁾(x)
    Psi { sign: i64, m: u32, x: Arg },
    /// sign · π dᵐ/dzᵐ cot(πz) at z = x
    PiCot { sign: i64, m: u32, x: Arg },
    /// coef / x^n
    InvPow { coef: BigInt, x: Arg, n: u32 },
    /// an exact element of ℚ(√5)
    Exact(QS5),
}

/// Both sides of an equation evaluated independently.
#[derive(Clone, Debug)]
pub struct Sides {
    pub lhs: Real,
    pub rhs: Real,
    /// Decimal digits actually used after magnitude scaling.
    pub digits_used: u32,
}

impl Sides {
    pub fn residual(&self) -> Real {
        (&self.lhs - &self.rhs).abs()
    }
}

/// Residual contract for kernel-level checks: 10^(12−P).
pub fn residual_tolerance(prec: Precision) -> Real {
    prec.tolerance(12)
}

fn arg_f64(x: &Arg) -> f64 {
    match x {
        Arg::Exact(q) => q.to_f64(),
        Arg::Approx(r) => r.to_f64(),
    }
}

fn arg_real(x: &Arg, bits: u32) -> Real {
    match x {
        Arg::Exact(q) => q.to_real_bits(bits),
        Arg::Approx(r) => r.with_bits(bits),
    }
}

/// s·x + c, exact when `x` is exact.
fn affine(x: &Arg, s: i64, c: &QS5) -> Arg {
    match x {
        Arg::Exact(q) => Arg::Exact(q * &QS5::from_int(s) + c),
        Arg::Approx(r) => {
            let bits = r.bits();
            Arg::Approx(r.mul_int(s) + c.to_real_bits(bits))
        }
    }
}

fn add(a: &Arg, b: &Arg) -> Arg {
    match (a, b) {
        (Arg::Exact(p), Arg::Exact(q)) => Arg::Exact(p + q),
        _ => {
            let bits = match (a, b) {
                (Arg::Approx(r), _) | (_, Arg::Approx(r)) => r.bits(),
                _ => unreachable!(),
            };
            Arg::Approx(arg_real(a, bits) + arg_real(b, bits))
        }
    }
}

fn log10_factorial(m: u32) -> f64 {
    (2..=m).map(|k| (k as f64).log10()).sum()
}

/// Upper estimate of log10 |term|, used only to choose a precision.
fn magnitude(term: &Term) -> f64 {
    match term {
        Term::Psi { m, x, .. } => {
            let v = arg_f64(x);
            let lf = log10_factorial(*m);
            let far = if *m == 0 {
                v.abs().max(2.0).ln().abs().log10() + 1.0
            } else {
                lf + (*m as f64 + 1.0) * 2f64.log10() + 1.0
            };
            if v >= 0.5 {
                return far;
            }
            let d = (v - v.round()).abs().max(1e-300);
            let count = (0.5 - v).ceil().max(1.0);
            let near = lf - (*m as f64 + 1.0) * d.log10() + count.log10();
            far.max(near) + 0.5
        }
        Term::PiCot { m, x, .. } => {
            let v = arg_f64(x);
            let d = (v - v.round()).abs().max(1e-300);
            let lf = log10_factorial(*m);
            (lf - (*m as f64 + 1.0) * d.log10()).max(lf + 1.0) + 1.0
        }
        Term::InvPow { coef, x, n } => {
            let c = coef.abs().bits() as f64 * 2f64.log10();
            c - (*n as f64) * arg_f64(x).abs().log10()
        }
        Term::Exact(q) => q.to_f64().abs().max(1e-300).log10(),
    }
}

fn eval_term(term: &Term, bits: u32, prec: Precision) -> Result<Real> {
    Ok(match term {
        Term::Psi { sign, m, x } => polygamma_bits(*m, x, bits, prec)?.mul_int(*sign),
        Term::PiCot { sign, m, x } => {
            (cot_deriv_bits(*m, x, bits, prec)? * pi_cached(bits)).mul_int(*sign)
        }
        Term::InvPow { coef, x, n } => match x {
            Arg::Exact(q) => {
                if q.is_zero() {
                    return Err(Error::Pole(format!("1/x^{n} at x = 0")));
                }
                (q.pow(-(*n as i64)) * QS5::from_bigint(coef.clone())).to_real_bits(bits)
            }
            Arg::Approx(r) => {
                if r.is_zero() {
                    return Err(Error::Pole(format!("1/x^{n} at x = 0")));
                }
                r.with_bits(bits).powi(-(*n as i64)).mul_bigint(coef)
            }
        },
        Term::Exact(q) => q.to_real_bits(bits),
    })
}

fn eval_side(terms: &[Term], bits: u32, prec: Precision) -> Result<Real> {
    let mut acc = Real::zero(bits);
    for t in terms {
        acc = acc + eval_term(t, bits, prec)?;
    }
    Ok(acc)
}

/// Evaluates both sides at P plus the number of digits the largest term
/// occupies above the decimal point.
pub fn evaluate_sides(lhs: &[Term], rhs: &[Term], prec: Precision) -> Result<Sides> {
    let top = lhs
        .iter()
        .chain(rhs)
        .map(magnitude)
        .fold(0.0f64, f64::max);
    let extra = if top.is_finite() { top.ceil() as u32 + 3 } else { 3 };
    let raised = prec.with_extra_digits(extra);
    let bits = raised.working_bits();
    Ok(Sides {
        lhs: eval_side(lhs, bits, raised)?,
        rhs: eval_side(rhs, bits, raised)?,
        digits_used: raised.digits(),
    })
}

fn psi(sign: i64, m: u32, x: Arg) -> Term {
    Term::Psi { sign, m, x }
}

fn picot(sign: i64, m: u32, x: Arg) -> Term {
    Term::PiCot { sign, m, x }
}

fn inv(coef: &BigInt, sign: i64, x: Arg, m: u32) -> Term {
    Term::InvPow {
        coef: coef * sign,
        x,
        n: m + 1,
    }
}

fn check_constraint(id: FuncEqId, args: &[Arg], prec: Precision) -> Result<()> {
    if args.len() != id.arity() {
        return Err(Error::Usage(format!(
            "{id} takes {} argument(s), got {}",
            id.arity(),
            args.len()
        )));
    }
    let target = match id.constraint() {
        Constraint::Free => return Ok(()),
        Constraint::SumOne => (1, 1),
        Constraint::SumTwo => (1, 2),
        Constraint::DiffOne => (-1, 1),
    };
    let combo = add(&args[0], &affine(&args[1], target.0, &QS5::zero()));
    let ok = match &combo {
        Arg::Exact(q) => *q == QS5::from_int(target.1),
        Arg::Approx(r) => {
            (r - &Real::from_int(target.1, r.bits())).abs() < prec.tolerance(5)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "{id} requires its arguments to satisfy {:?}",
            id.constraint()
        )))
    }
}

/// The two sides of functional equation `id` at order `m` as term lists.
pub fn funceq_terms(id: FuncEqId, m: u32, args: &[Arg], prec: Precision) -> Result<(Vec<Term>, Vec<Term>)> {
    use FuncEqId::*;
    if !id.parity().admits(m) {
        return Err(Error::Usage(format!("{id} does not hold for m = {m}")));
    }
    check_constraint(id, args, prec)?;
    let s: i64 = if m % 2 == 0 { 1 } else { -1 };
    let f = factorial(m);
    let x = args[0].clone();
    let y = args.get(1).cloned().unwrap_or_else(|| x.clone());
    let one = QS5::one();
    let half = QS5::from_ratios(1, 2, 0, 1);
    let zero = QS5::zero();
    let sh = |a: &Arg, sign: i64, c: &QS5| affine(a, sign, c);
    let (lhs, rhs) = match id {
        Recurrence => (
            vec![psi(1, m, sh(&x, 1, &one))],
            vec![psi(1, m, x.clone()), inv(&f, s, x, m)],
        ),
        Reflection => (
            vec![psi(s, m, sh(&x, -1, &one)), psi(-1, m, x.clone())],
            vec![picot(1, m, x)],
        ),
        Duplication => (
            vec![psi(1, m, sh(&x, -1, &zero)), psi(-s, m, x.clone())],
            vec![picot(s, m, x.clone()), inv(&f, 1, x, m)],
        ),
        DupDiffEven => (
            vec![psi(1, m, sh(&x, -1, &zero)), psi(-1, m, sh(&y, -1, &zero))],
            vec![
                psi(1, m, x.clone()),
                psi(-1, m, y.clone()),
                inv(&f, 1, x.clone(), m),
                inv(&f, -1, y.clone(), m),
                picot(1, m, x),
                picot(-1, m, y),
            ],
        ),
        DupSumOdd => (
            vec![psi(1, m, sh(&x, -1, &zero)), psi(1, m, sh(&y, -1, &zero))],
            vec![
                psi(-1, m, x.clone()),
                psi(-1, m, y.clone()),
                inv(&f, 1, x.clone(), m),
                inv(&f, 1, y.clone(), m),
                picot(-1, m, x),
                picot(-1, m, y),
            ],
        ),
        NegDiffEven => (
            vec![psi(1, m, sh(&x, -1, &zero)), psi(-1, m, sh(&y, -1, &zero))],
            vec![picot(-1, m, y.clone()), inv(&f, 1, x, m), inv(&f, -1, y, m)],
        ),
        NegSumOdd => (
            vec![psi(1, m, sh(&x, -1, &zero)), psi(1, m, sh(&y, -1, &zero))],
            vec![picot(-1, m, y.clone()), inv(&f, 1, x, m), inv(&f, 1, y, m)],
        ),
        HalfReflect => (
            vec![psi(s, m, sh(&x, 1, &half)), psi(-1, m, sh(&x, -1, &half))],
            vec![picot(1, m, sh(&x, -1, &half))],
        ),
        OnePm => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(-s, m, sh(&x, -1, &one))],
            vec![picot(-1, m, x.clone()), inv(&f, s, x, m)],
        ),
        UnitShift => (
            vec![psi(1, m, x), psi(-1, m, y.clone())],
            vec![inv(&f, s, y, m)],
        ),
        SumOne => (
            vec![psi(1, m, x.clone()), psi(-s, m, y)],
            vec![picot(-1, m, x)],
        ),
        ShiftDiff => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(-1, m, sh(&y, 1, &one))],
            vec![
                psi(1, m, x.clone()),
                psi(-1, m, y.clone()),
                inv(&f, -s, y, m),
                inv(&f, s, x, m),
            ],
        ),
        ShiftSum => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(1, m, sh(&y, 1, &one))],
            vec![
                psi(1, m, x.clone()),
                psi(1, m, y.clone()),
                inv(&f, s, y, m),
                inv(&f, s, x, m),
            ],
        ),
        GenDiff => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(-1, m, sh(&y, 1, &one))],
            vec![
                psi(s, m, sh(&x, -1, &one)),
                psi(-s, m, sh(&y, -1, &one)),
                picot(-1, m, x.clone()),
                picot(1, m, y.clone()),
                inv(&f, s, x, m),
                inv(&f, -s, y, m),
            ],
        ),
        GenSum => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(1, m, sh(&y, 1, &one))],
            vec![
                psi(s, m, sh(&x, -1, &one)),
                psi(s, m, sh(&y, -1, &one)),
                picot(-1, m, x.clone()),
                picot(-1, m, y.clone()),
                inv(&f, s, x, m),
                inv(&f, s, y, m),
            ],
        ),
        Xy1DiffEven => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(-1, m, sh(&y, 1, &one))],
            vec![picot(1, m, y.clone()), inv(&f, 1, x, m), inv(&f, -1, y, m)],
        ),
        Xy1SumOdd => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(1, m, sh(&y, 1, &one))],
            vec![picot(-1, m, y.clone()), inv(&f, -1, x, m), inv(&f, -1, y, m)],
        ),
        Xy2DiffEven => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(-1, m, sh(&y, 1, &one))],
            vec![
                picot(-1, m, x.clone()),
                inv(&f, 1, sh(&y, -1, &one), m),
                inv(&f, 1, x, m),
                inv(&f, -1, y, m),
            ],
        ),
        Xy2SumOdd => (
            vec![psi(1, m, sh(&x, 1, &one)), psi(1, m, sh(&y, 1, &one))],
            vec![
                picot(-1, m, x.clone()),
                inv(&f, -1, sh(&y, -1, &one), m),
                inv(&f, -1, x, m),
                inv(&f, -1, y, m),
            ],
        ),
        HalfGenDiff => (
            vec![psi(s, m, sh(&x, 1, &half)), psi(-s, m, sh(&y, 1, &half))],
            vec![
                psi(1, m, sh(&x, -1, &half)),
                psi(-1, m, sh(&y, -1, &half)),
                picot(1, m, sh(&x, -1, &half)),
                picot(-1, m, sh(&y, -1, &half)),
            ],
        ),
        HalfGenSum => (
            vec![psi(s, m, sh(&x, 1, &half)), psi(s, m, sh(&y, 1, &half))],
            vec![
                psi(1, m, sh(&x, -1, &half)),
                psi(1, m, sh(&y, -1, &half)),
                picot(1, m, sh(&x, -1, &half)),
                picot(1, m, sh(&y, -1, &half)),
            ],
        ),
        HalfDiffEven => (
            vec![psi(1, m, sh(&x, 1, &half)), psi(-1, m, sh(&y, 1, &half))],
            vec![picot(-1, m, sh(&y, -1, &half)), inv(&f, 1, sh(&x, 1, &-&half), m)],
        ),
        HalfSumOdd => (
            vec![psi(1, m, sh(&x, 1, &half)), psi(1, m, sh(&y, 1, &half))],
            vec![picot(-1, m, sh(&y, -1, &half)), inv(&f, -1, sh(&x, 1, &-&half), m)],
        ),
    };
    Ok((lhs, rhs))
}

/// Both sides of functional equation `id` at order `m`.
pub fn funceq_sides(id: FuncEqId, m: u32, args: &[Arg], prec: Precision) -> Result<Sides> {
    let (lhs, rhs) = funceq_terms(id, m, args, prec)?;
    evaluate_sides(&lhs, &rhs, prec)
}

/// |LHS − RHS| of functional equation `id` at order `m`.
pub fn funceq_residual(id: FuncEqId, m: u32, args: &[Arg], prec: Precision) -> Result<Real> {
    Ok(funceq_sides(id, m, args, prec)?.residual())
}

fn q(n: &BigInt) -> QS5 {
    QS5::from_bigint(n.clone())
}

/// The two sides of golden-ratio evaluation `id` as term lists.
pub fn lemma_terms(id: LemmaId, m: u32, r: Option<i64>) -> Result<(Vec<Term>, Vec<Term>)> {
    use LemmaId::*;
    if !id.parity().admits(m) {
        return Err(Error::Usage(format!("{id} does not hold for m = {m}")));
    }
    let r = match (id.takes_r(), r) {
        (true, Some(0)) => return Err(Error::Usage(format!("{id} requires r != 0"))),
        (true, Some(r)) => r,
        (true, None) => return Err(Error::Usage(format!("{id} requires a value for r"))),
        (false, _) => 0,
    };
    let f = factorial(m);
    let fq = q(&f);
    let n1 = m as i64 + 1;
    let a = QS5::alpha();
    let b = QS5::beta();
    let s5 = QS5::sqrt5();
    let e = |x: QS5| Arg::Exact(x);
    let two_pow = QS5::from_int(2).pow(n1);
    let lr = QS5::from_bigint(lucas(r));
    let fr = QS5::from_bigint(fib(r));
    let ar_lr = QS5::alpha_pow(r) * lr.recip();
    let br_lr = QS5::beta_pow(r) * lr.recip();
    let lr_pow = lr.pow(n1);
    let sign_r = if r % 2 == 0 { 1 } else { -1 };
    let pair = |x: QS5, y: QS5, sy: i64| vec![psi(1, m, e(x)), psi(sy, m, e(y))];
    let (lhs, rhs) = match id {
        AtAlphaDiffEven | AtAlphaSumOdd => (
            pair(a.clone(), b, if id == AtAlphaDiffEven { -1 } else { 1 }),
            vec![picot(-1, m, e(a))],
        ),
        AtAlpha2DiffEven => (
            pair(a.pow(2), b.pow(2), -1),
            vec![picot(1, m, e(b)), Term::Exact(&fq * &q(&fib(n1)) * &s5)],
        ),
        AtAlpha2SumOdd => (
            pair(a.pow(2), b.pow(2), 1),
            vec![picot(-1, m, e(b)), Term::Exact(-(&fq * &q(&lucas(n1))))],
        ),
        AtAlpha3DiffEven => (
            pair(a.pow(3), b.pow(3), -1),
            vec![
                picot(1, m, e(b.scale(&Rational::from_integer(2.into())))),
                Term::Exact(&fq * &s5.pow(-n1)),
                Term::Exact(&fq * &two_pow.recip() * q(&fib(n1)) * &s5),
            ],
        ),
        AtAlpha3SumOdd => (
            pair(a.pow(3), b.pow(3), 1),
            vec![
                picot(-1, m, e(b.scale(&Rational::from_integer(2.into())))),
                Term::Exact(-(&fq * &s5.pow(-n1))),
                Term::Exact(-(&fq * &two_pow.recip() * q(&lucas(n1)))),
            ],
        ),
        AtAlpha3HalfDiffEven | AtAlpha3HalfSumOdd => {
            let sg = if id == AtAlpha3HalfDiffEven { 1 } else { -1 };
            (
                pair(a.pow(3).half(), b.pow(3).half(), -sg),
                vec![
                    picot(-1, m, e(s5.half())),
                    Term::Exact(&fq * &two_pow * s5.pow(-n1) * QS5::from_int(sg)),
                ],
            )
        }
        AtArOverLrDiffEven | AtArOverLrSumOdd => (
            pair(ar_lr.clone(), br_lr, if id == AtArOverLrDiffEven { -1 } else { 1 }),
            vec![picot(-1, m, e(ar_lr))],
        ),
        AtArOverFrSqrt5Diff => {
            let d = &fr * &s5;
            let sign = if (r * m as i64 + r + m as i64) % 2 == 0 { 1 } else { -1 };
            (
                pair(QS5::alpha_pow(r) * d.recip(), QS5::beta_pow(r) * d.recip(), -1),
                vec![Term::Exact(
                    QS5::from_int(sign) * &fq * fr.pow(n1) * (QS5::alpha_pow(r) * &s5).pow(n1),
                )],
            )
        }
        AtOnePlus2ArLrDiffEven | AtOnePlus2ArLrSumOdd => {
            let two = Rational::from_integer(2.into());
            let x = QS5::one() + ar_lr.scale(&two);
            let y = QS5::one() + br_lr.scale(&two);
            let near = &fq * &lr_pow * (&fr * &s5).pow(-n1);
            let lrm = &fq * &lr_pow * two_pow.recip();
            if id == AtOnePlus2ArLrDiffEven {
                (
                    pair(x, y, -1),
                    vec![
                        picot(-1, m, e(ar_lr.scale(&two))),
                        Term::Exact(near),
                        Term::Exact(-(lrm * QS5::from_int(sign_r) * q(&fib(r * n1)) * &s5)),
                    ],
                )
            } else {
                (
                    pair(x, y, 1),
                    vec![
                        picot(-1, m, e(ar_lr.scale(&two))),
                        Term::Exact(-near),
                        Term::Exact(-(lrm * q(&lucas(r * n1)))),
                    ],
                )
            }
        }
        AtNegArLrDiffEven => (
            pair(-&ar_lr, -&br_lr, -1),
            vec![
                picot(-1, m, e(br_lr)),
                Term::Exact(-(&fq * &lr_pow * QS5::from_int(sign_r) * q(&fib(r * n1)) * &s5)),
            ],
        ),
        AtNegArLrSumOdd => (
            pair(-&ar_lr, -&br_lr, 1),
            vec![
                picot(-1, m, e(br_lr)),
                Term::Exact(&fq * &lr_pow * q(&lucas(r * n1))),
            ],
        ),
    };
    Ok((lhs, rhs))
}

/// Both sides of golden-ratio evaluation `id`: ψ values on the left, cotangent
/// derivative plus exact Fibonacci/Lucas parts on the right.
pub fn lemma_sides(id: LemmaId, m: u32, r: Option<i64>, prec: Precision) -> Result<Sides> {
    let (lhs, rhs) = lemma_terms(id, m, r)?;
    evaluate_sides(&lhs, &rhs, prec)
}

/// Orders m ≤ `max_m` for which `parity` holds.
pub fn admissible_orders(parity: Parity, max_m: u32) -> Vec<u32> {
    (0..=max_m).filter(|&m| parity.admits(m)).collect()
}

fn random_unit(rng: &mut ChaCha8Rng) -> QS5 {
    let den: i64 = rng.gen_range(2..=64);
    let num: i64 = rng.gen_range(1..den);
    QS5::from_ratios(num, den, 0, 1)
}

/// Random argument tuple for `id`: rationals with denominator ≤ 64 in (0, 1),
/// with the second argument fixed by the linear constraint exactly.
pub fn random_args(id: FuncEqId, rng: &mut ChaCha8Rng) -> Vec<Arg> {
    let x = random_unit(rng);
    if id.arity() == 1 {
        return vec![Arg::Exact(x)];
    }
    let (x, y) = match id.constraint() {
        Constraint::Free => (x, random_unit(rng)),
        Constraint::SumOne => (x.clone(), QS5::one() - x),
        Constraint::SumTwo => (x.clone(), QS5::from_int(2) - x),
        Constraint::DiffOne => (&x + &QS5::one(), x),
    };
    vec![Arg::Exact(x), Arg::Exact(y)]
}

/// Deterministic per-equation generator, independent of evaluation order.
pub fn point_rng(seed: u64, id: FuncEqId) -> ChaCha8Rng {
    let idx = FuncEqId::ALL.iter().position(|&v| v == id).unwrap_or(0) as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ idx)
}

/// `count` admissible argument tuples for `id` at order `m`, redrawing
/// points that hit a pole of any term.
pub fn admissible_points(
    id: FuncEqId,
    m: u32,
    count: usize,
    rng: &mut ChaCha8Rng,
    prec: Precision,
) -> Vec<Vec<Arg>> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let args = random_args(id, rng);
        if let Ok((lhs, rhs)) = funceq_terms(id, m, &args, prec) {
            if lhs.iter().chain(&rhs).all(|t| !hits_pole(t)) {
                out.push(args);
            }
        }
    }
    out
}

fn hits_pole(t: &Term) -> bool {
    match t {
        Term::Psi { x: Arg::Exact(q), .. } => q.is_nonpositive_integer(),
        Term::PiCot { x: Arg::Exact(q), .. } => q.is_integer(),
        Term::InvPow { x: Arg::Exact(q), .. } => q.is_zero(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::DEFAULT
    }

    fn tol() -> Real {
        residual_tolerance(p())
    }

    #[test]
    fn recurrence_at_decimal_point() {
        let x = Real::parse("0.7", 400).unwrap();
        let r = funceq_residual(FuncEqId::Recurrence, 3, &[x.into()], p()).unwrap();
        assert!(r < tol());
    }

    #[test]
    fn xy2_at_twice_golden_roots() {
        let args = [
            Arg::Exact(QS5::alpha().scale(&Rational::from_integer(2.into()))),
            Arg::Exact(QS5::beta().scale(&Rational::from_integer(2.into()))),
        ];
        let r = funceq_residual(FuncEqId::Xy2DiffEven, 2, &args, p()).unwrap();
        assert!(r < tol());
    }

    #[test]
    fn neg_sum_at_alpha_squared_over_lucas() {
        let l2 = QS5::from_int(3).recip();
        let args = [Arg::Exact(QS5::alpha_pow(2) * &l2), Arg::Exact(QS5::beta_pow(2) * &l2)];
        let r = funceq_residual(FuncEqId::NegSumOdd, 1, &args, p()).unwrap();
        assert!(r < tol());
    }

    #[test]
    fn constraint_and_parity_are_enforced() {
        let args = [Arg::Exact(QS5::from_ratios(1, 3, 0, 1)), Arg::Exact(QS5::from_ratios(1, 3, 0, 1))];
        assert!(matches!(
            funceq_residual(FuncEqId::SumOne, 1, &args, p()),
            Err(Error::Usage(_))
        ));
        let args = [Arg::Exact(QS5::from_ratios(1, 3, 0, 1)), Arg::Exact(QS5::from_ratios(2, 3, 0, 1))];
        assert!(matches!(
            funceq_residual(FuncEqId::Xy1DiffEven, 1, &args, p()),
            Err(Error::Usage(_))
        ));
        assert!(funceq_residual(FuncEqId::Xy1DiffEven, 2, &args, p()).unwrap() < tol());
    }

    #[test]
    fn lemma_half_alpha_cubed_odd() {
        let s = lemma_sides(LemmaId::AtAlpha3HalfSumOdd, 1, None, p()).unwrap();
        assert!(s.residual() < tol());
    }

    #[test]
    fn lemma_fibonacci_sqrt5_quotient() {
        let s = lemma_sides(LemmaId::AtArOverFrSqrt5Diff, 2, Some(3), p()).unwrap();
        assert!(s.residual() < tol());
        assert!(s.digits_used > 50);
    }

    #[test]
    fn lemma_alpha_digamma() {
        let s = lemma_sides(LemmaId::AtAlphaDiffEven, 0, None, p()).unwrap();
        assert!(s.residual() < tol());
    }

    #[test]
    fn names_round_trip() {
        for &id in FuncEqId::ALL {
            assert_eq!(FuncEqId::from_name(id.name()), Some(id));
        }
        for &id in LemmaId::ALL {
            assert_eq!(LemmaId::from_name(id.name()), Some(id));
        }
        assert_eq!(FuncEqId::ALL.len(), 23);
        assert_eq!(LemmaId::ALL.len(), 15);
    }
}
