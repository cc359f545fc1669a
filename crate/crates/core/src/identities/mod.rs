//! The identity catalog: Fibonacci/Lucas–zeta series paired with closed
//! forms built from cotangent derivatives and exact Fibonacci/Lucas parts.

mod closed_form;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use closed_form::{Canonical, ClosedForm, MonomialKey};
pub use verify::{
    alternation_offset, cross_check, identity_tolerance, rhs_difference, shift_identity_check,
    theorem_rhs, verify, verify_with, Mode, VerificationReport, Verdict,
};

use crate::error::{Error, Result};
use crate::funceq::Parity;
use crate::qsqrt5::{lucas, Rational, QS5};
use crate::series::{converges, Kind, SeriesSpec};
use closed_form::rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    TheoremF,
    TheoremL,
    Cor2F,
    Cor2L,
    Cor3F,
    Cor3L,
    Cor4F,
    Cor4L,
    Cor5F,
    Cor5L,
    Example,
}

impl Family {
    pub const GENERATORS: &'static [Family] = &[
        Family::Cor2F,
        Family::Cor2L,
        Family::Cor3F,
        Family::Cor3L,
        Family::Cor4F,
        Family::Cor4L,
        Family::Cor5F,
        Family::Cor5L,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TheoremF => "THEOREM_F",
            Family::TheoremL => "THEOREM_L",
            Family::Cor2F => "COR2_F",
            Family::Cor2L => "COR2_L",
            Family::Cor3F => "COR3_F",
            Family::Cor3L => "COR3_L",
            Family::Cor4F => "COR4_F",
            Family::Cor4L => "COR4_L",
            Family::Cor5F => "COR5_F",
            Family::Cor5L => "COR5_L",
            Family::Example => "EXAMPLE",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        let all = [Family::TheoremF, Family::TheoremL, Family::Example];
        all.iter()
            .chain(Family::GENERATORS)
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
    }

    pub fn kind(self) -> Option<Kind> {
        use Family::*;
        match self {
            TheoremF | Cor2F | Cor3F | Cor4F | Cor5F => Some(Kind::F),
            TheoremL | Cor2L | Cor3L | Cor4L | Cor5L => Some(Kind::L),
            Example => None,
        }
    }

    /// F-type families hold for even m, L-type for odd m.
    pub fn parity(self) -> Parity {
        use Family::*;
        match self {
            Cor2F | Cor3F | Cor4F | Cor5F => Parity::Even,
            Cor2L | Cor3L | Cor4L | Cor5L => Parity::Odd,
            TheoremF | TheoremL | Example => Parity::Any,
        }
    }

    fn short(self) -> &'static str {
        use Family::*;
        match self {
            Cor2F => "cor2F",
            Cor2L => "cor2L",
            Cor3F => "cor3F",
            Cor3L => "cor3L",
            Cor4F => "cor4F",
            Cor4L => "cor4L",
            Cor5F => "cor5F",
            Cor5L => "cor5L",
            TheoremF => "thmF",
            TheoremL => "thmL",
            Example => "ex",
        }
    }

    /// Whether the family is parameterized by r (the COR2 families fix r = 3).
    pub fn takes_r(self) -> bool {
        !matches!(self, Family::Cor2F | Family::Cor2L)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A catalog entry: `lhs_sign · Σ(series) = rhs`.
#[derive(Clone, Debug)]
pub struct Identity {
    pub id: String,
    pub family: Family,
    /// The generating family; for examples, the family they specialize.
    pub base: Family,
    pub m: u32,
    pub r: i64,
    /// The series argument z as it enters the F/L series.
    pub z: Rational,
    pub lhs: SeriesSpec,
    /// +1, or −1 when the stated left side is the negated series.
    pub lhs_sign: i64,
    pub rhs: ClosedForm,
    pub convergent: bool,
    pub provenance: String,
}

impl Identity {
    pub fn kind(&self) -> Kind {
        self.lhs.kind
    }
}

/// Family parameters: (series argument z, sign of the stated left side).
fn family_argument(family: Family, r: i64) -> Result<(Rational, i64)> {
    use Family::*;
    let lr = lucas(r);
    Ok(match family {
        Cor2F | Cor2L => (rat(1, 2), 1),
        Cor3F | Cor3L => (Rational::new(1.into(), lr), 1),
        Cor4F | Cor4L => (Rational::new(2.into(), lr), 1),
        Cor5F => (Rational::new((-1).into(), lr), -1),
        Cor5L => (Rational::new((-1).into(), lr), 1),
        _ => return Err(Error::Usage(format!("{family} is not a generating family"))),
    })
}

fn family_provenance(family: Family) -> &'static str {
    use Family::*;
    match family {
        Cor2F => "F series with r = 3, z = 1/2 (m even)",
        Cor2L => "L series with r = 3, z = 1/2 (m odd); constant read as -A - B - C",
        Cor3F => "alternating F series at z = 1/L_r (m even)",
        Cor3L => "alternating L series at z = 1/L_r (m odd)",
        Cor4F => "alternating F series at z = 2/L_r, |r| > 1 (m even)",
        Cor4L => "alternating L series at z = 2/L_r, |r| > 1 (m odd)",
        Cor5F => "non-alternating F series at z = 1/L_r, |r| > 1 (m even)",
        Cor5L => "non-alternating L series at z = 1/L_r, |r| > 1 (m odd)",
        _ => "",
    }
}

/// Right-hand side of a generating family at (m, r), built from exact atoms.
pub fn family_rhs(family: Family, m: u32, r: i64) -> Result<ClosedForm> {
    use ClosedForm as C;
    use Family::*;
    let n1 = m as i32 + 1;
    let fact = || C::Factorial(m);
    let sign_r = if r % 2 == 0 { 1 } else { -1 };
    let lr_pow = || C::Lucas(r).pow(n1);
    let two_pow = || C::int(2).pow(n1);
    let beta_r_lr = QS5::beta_pow(r) * QS5::from_bigint(lucas(r)).recip();
    let two_alpha_r_lr = QS5::alpha_pow(r) * QS5::from_ratios(2, 1, 0, 1) * QS5::from_bigint(lucas(r)).recip();
    let sqrt5_half = QS5::sqrt5().half();
    // m!·L_r^{m+1} / (F_r √5)^{m+1}
    let fr_term = || fact() * lr_pow() * (C::Fib(r) * C::Sqrt5Pow(1)).pow(-n1);
    Ok(match family {
        Cor2F => {
            -(C::Sqrt5Pow(-1)
                * (C::pi_cot_deriv_at(m, sqrt5_half)? - fact() * two_pow() * C::Sqrt5Pow(-n1)))
                + fact() * two_pow() * C::Fib(3 * n1 as i64)
        }
        Cor2L => {
            -C::pi_cot_deriv_at(m, sqrt5_half)?
                - fact() * two_pow() * C::Sqrt5Pow(-n1)
                - fact() * two_pow() * C::Lucas(3 * n1 as i64)
        }
        Cor3F => {
            C::Sqrt5Pow(-1) * C::pi_cot_deriv_at(m, beta_r_lr)?
                - C::int(sign_r) * fact() * lr_pow() * C::Fib(r * n1 as i64)
        }
        Cor3L => -C::pi_cot_deriv_at(m, beta_r_lr)? - fact() * lr_pow() * C::Lucas(r * n1 as i64),
        Cor4F => {
            -(C::Sqrt5Pow(-1) * (C::pi_cot_deriv_at(m, two_alpha_r_lr)? - fr_term()))
                - C::int(sign_r) * fact() * lr_pow() * C::Fib(r * n1 as i64) * two_pow().pow(-1)
        }
        Cor4L => {
            -C::pi_cot_deriv_at(m, two_alpha_r_lr)?
                - fr_term()
                - fact() * lr_pow() * C::Lucas(r * n1 as i64) * two_pow().pow(-1)
        }
        Cor5F => C::Sqrt5Pow(-1) * C::pi_cot_deriv_at(m, beta_r_lr)?,
        Cor5L => -C::pi_cot_deriv_at(m, beta_r_lr)?,
        _ => return Err(Error::Usage(format!("{family} is not a generating family"))),
    })
}

/// A new instance of a generating family at (m, r).
///
/// Rejects orders of the wrong parity, r = 0, and |r| ≤ 1 for the two
/// families that divide by F_r or need L_r ≠ ±1.
pub fn generate(family: Family, m: u32, r: i64) -> Result<Identity> {
    use Family::*;
    let kind = family
        .kind()
        .filter(|_| Family::GENERATORS.contains(&family))
        .ok_or_else(|| Error::Usage(format!("{family} is not a generating family")))?;
    if !family.parity().admits(m) {
        return Err(Error::Usage(format!(
            "{family} requires m {}, got m = {m}",
            if family.parity() == Parity::Even { "even" } else { "odd" }
        )));
    }
    if kind == Kind::L && m == 0 {
        return Err(Error::Usage("the L series requires m >= 1".into()));
    }
    let r = if family.takes_r() { r } else { 3 };
    if r == 0 {
        return Err(Error::Usage("r must be nonzero".into()));
    }
    if matches!(family, Cor4F | Cor4L | Cor5F | Cor5L) && r.abs() <= 1 {
        return Err(Error::Usage(format!("{family} requires |r| > 1")));
    }
    let (z, lhs_sign) = family_argument(family, r)?;
    let id = if family.takes_r() {
        format!("{}-m{m}-r{r}", family.short())
    } else {
        format!("{}-m{m}", family.short())
    };
    Ok(Identity {
        id,
        family,
        base: family,
        m,
        r,
        convergent: converges(r, &z).0,
        lhs: SeriesSpec::new(kind, m, r, z.clone())?,
        z,
        lhs_sign,
        rhs: family_rhs(family, m, r)?,
        provenance: family_provenance(family).to_string(),
    })
}

/// Deliberate corruptions used to check that the harness notices errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogFault {
    /// Replaces the constant 432 of `ex-s1u6y4q` by 433.
    ExampleConstant,
}

/// π²csc²(πx) = −π·cot′(πx)/π² scaled: written through the first cot derivative.
fn pi2_csc2(x: QS5) -> Result<ClosedForm> {
    use ClosedForm as C;
    // d/dz cot(πz) = −π csc²(πz)
    Ok(C::PiPow(2) * -(C::PiPow(-1) * C::cot_deriv_at(1, x)?))
}

/// π²sec²(πt) = π²csc²(π(1/2 − t)).
fn pi2_sec2(t: QS5) -> Result<ClosedForm> {
    pi2_csc2(QS5::from_ratios(1, 2, 0, 1) - t)
}

/// cot(πx)csc²(πx) = cot″(πx)/(2π²).
fn cot_csc2(x: QS5) -> Result<ClosedForm> {
    use ClosedForm as C;
    Ok(C::ratio(1, 2) * C::PiPow(-2) * C::cot_deriv_at(2, x)?)
}

/// tan(πt)sec²(πt) = cot(πu)csc²(πu) with u = 1/2 − t.
fn tan_sec2(t: QS5) -> Result<ClosedForm> {
    cot_csc2(QS5::from_ratios(1, 2, 0, 1) - t)
}

struct Worked {
    id: &'static str,
    base: Family,
    m: u32,
    r: i64,
    statement: &'static str,
}

const WORKED: &[Worked] = &[
    Worked {
        id: "ex-s1a2ufl",
        base: Family::Cor2F,
        m: 2,
        r: 3,
        statement: "Σ (-1)^(j+1) (j+1)(j+2)/2^j ζ(j+3) F_3j = -(2π³/√5) cot(π√5/2) csc²(π√5/2) + 13616/25",
    },
    Worked {
        id: "ex-ew630ib",
        base: Family::Cor2L,
        m: 1,
        r: 3,
        statement: "Σ (-1)^j (j+1)/2^j ζ(j+2) L_3j = π² csc²(π√5/2) - 364/5",
    },
    Worked {
        id: "ex-s1u6y4q",
        base: Family::Cor3F,
        m: 2,
        r: 2,
        statement: "Σ (-1)^(j+1) (j+1)(j+2)/3^j ζ(j+3) F_2j = (2π³/√5) tan(π√5/6) sec²(π√5/6) - 432",
    },
    Worked {
        id: "ex-fc0zaz6",
        base: Family::Cor3L,
        m: 1,
        r: 1,
        statement: "Σ (-1)^j (j+1) ζ(j+2) L_j = π² sec²(π√5/2) - 3",
    },
    Worked {
        id: "ex-wi3ql4i",
        base: Family::Cor4F,
        m: 2,
        r: 3,
        statement: "Σ (-1)^(j+1) (j+1)(j+2)/2^j ζ(j+3) F_3j = 13616/25 - (2π³/√5) cot(π√5/2) csc²(π√5/2)",
    },
    Worked {
        id: "ex-allakva",
        base: Family::Cor4L,
        m: 1,
        r: 3,
        statement: "Σ (-1)^j (j+1)/2^j ζ(j+2) L_3j = π² csc²(π√5/2) - 364/5",
    },
    Worked {
        id: "ex-pnj960x",
        base: Family::Cor5F,
        m: 2,
        r: 2,
        statement: "Σ (j+1)(j+2)/3^j ζ(j+3) F_2j = (2π³/√5) tan(π√5/6) sec²(π√5/6)",
    },
    Worked {
        id: "ex-gluacxg",
        base: Family::Cor5L,
        m: 1,
        r: 4,
        statement: "Σ (j+1)/7^j ζ(j+2) L_4j = π² sec²(3π√5/14)",
    },
];

/// The right-hand side of a worked example, written atom by atom.
fn worked_rhs(id: &str, fault: Option<CatalogFault>) -> Result<ClosedForm> {
    use ClosedForm as C;
    let root5_half = QS5::sqrt5().half();
    let root5_sixth = QS5::from_ratios(0, 1, 1, 6);
    let two_pi3_over_root5 = || C::int(2) * C::PiPow(3) * C::Sqrt5Pow(-1);
    Ok(match id {
        "ex-s1a2ufl" => -(two_pi3_over_root5() * cot_csc2(root5_half)?) + C::ratio(13616, 25),
        "ex-ew630ib" => pi2_csc2(root5_half)? - C::ratio(364, 5),
        "ex-s1u6y4q" => {
            let k = if fault == Some(CatalogFault::ExampleConstant) { 433 } else { 432 };
            two_pi3_over_root5() * tan_sec2(root5_sixth)? - C::int(k)
        }
        "ex-fc0zaz6" => pi2_sec2(root5_half)? - C::int(3),
        "ex-wi3ql4i" => C::ratio(13616, 25) - two_pi3_over_root5() * cot_csc2(root5_half)?,
        "ex-allakva" => pi2_csc2(root5_half)? - C::ratio(364, 5),
        "ex-pnj960x" => two_pi3_over_root5() * tan_sec2(root5_sixth)?,
        "ex-gluacxg" => pi2_sec2(QS5::from_ratios(0, 1, 3, 14))?,
        _ => return Err(Error::Usage(format!("unknown example {id}"))),
    })
}

fn examples(fault: Option<CatalogFault>) -> Result<Vec<Identity>> {
    WORKED
        .iter()
        .map(|p| {
            let generic = generate(p.base, p.m, p.r)?;
            Ok(Identity {
                id: p.id.to_string(),
                family: Family::Example,
                rhs: worked_rhs(p.id, fault)?,
                provenance: format!("worked example via {}: {}", p.base, p.statement),
                ..generic
            })
        })
        .collect()
}

/// Generic instances: parity-admissible m ≤ 5 and r ∈ 1..=4 where allowed.
fn generic_instances() -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    for &family in Family::GENERATORS {
        let rs: Vec<i64> = match family {
            Family::Cor2F | Family::Cor2L => vec![3],
            Family::Cor3F | Family::Cor3L => (1..=4).collect(),
            _ => (2..=4).collect(),
        };
        for r in rs {
            for m in 0..=5u32 {
                if family.parity().admits(m) && !(family.kind() == Some(Kind::L) && m == 0) {
                    out.push(generate(family, m, r)?);
                }
            }
        }
    }
    Ok(out)
}

/// The full catalog: the eight worked examples followed by generic
/// family instances.
pub fn build_catalog() -> Vec<Identity> {
    build_catalog_with(None)
}

pub fn build_catalog_with(fault: Option<CatalogFault>) -> Vec<Identity> {
    let mut out = examples(fault).expect("worked examples are well formed");
    out.extend(generic_instances().expect("generic instances are well formed"));
    out
}

/// Looks up an entry by id.
pub fn find<'a>(catalog: &'a [Identity], id: &str) -> Option<&'a Identity> {
    catalog.iter().find(|i| i.id == id)
}
