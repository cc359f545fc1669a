//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use phizeta::arith::Arg;
use phizeta::funceq::{
    admissible_orders, admissible_points, funceq_residual, lemma_sides, point_rng, FuncEqId, LemmaId,
};
use phizeta::identities::{build_catalog, cross_check, find, verify, Mode, Verdict};
use phizeta::qsqrt5::{fib, lucas};
use phizeta::series::converges;
use phizeta::specfun::{polygamma, zeta_int};
use phizeta::{Precision, Real, QS5};

const SEED: u64 = 20240611;
const BITS: u32 = 400;

fn p() -> Precision {
    Precision::DEFAULT
}

/// 10^(−k)
fn tol(k: i32) -> Real {
    Real::pow10(-k, p().working_bits())
}

fn r(n: i64) -> Real {
    Real::from_int(n, BITS)
}

fn bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_phizeta")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

// Oracles with no shared code path: AGM for π, Brent–McMillan for γ,
// brute-force sums with Euler–Maclaurin remainder bounds.

fn pi_agm() -> Real {
    let (mut a, mut b, mut t, mut q) = (r(1), r(2).sqrt().unwrap().recip(), r(1).div_int(4), r(1));
    for _ in 0..12 {
        let an = (&a + &b).div_int(2);
        b = (&a * &b).sqrt().unwrap();
        t = &t - &(&q * &(&a - &an).square());
        q = q.mul_int(2);
        a = an;
    }
    (&a + &b).square() / t.mul_int(4)
}

fn gamma_brent_mcmillan() -> Real {
    let n = 64i64;
    let ln2: Real = (1..=BITS as i64 + 20).map(|k| r(1).mul_pow2(-k).div_int(k)).sum();
    let (mut b_k, mut h, mut a_sum, mut b_sum) = (r(1), r(0), r(0), r(1));
    for k in 1..=600i64 {
        b_k = b_k.mul_int(n * n).div_int(k * k);
        h = &h + &r(1).div_int(k);
        a_sum = &a_sum + &(&b_k * &h);
        b_sum = &b_sum + &b_k;
    }
    &(&a_sum / &b_sum) - &ln2.mul_int(6)
}

/// Σ_{k≥0} (a+k)^(−s): Euler–Maclaurin through B₆, B₈ term as remainder bound.
fn em_tail(a: &Real, s: i64) -> (Real, Real) {
    let bern = [(1i64, 6i64), (-1, 30), (1, 42), (-1, 30)];
    let mut est = a.powi(1 - s).div_int(s - 1) + a.powi(-s).div_int(2);
    let mut fact = 1i64;
    let mut bound = r(0);
    for (j, &(bn, bd)) in bern.iter().enumerate() {
        let n = 2 * j as i64 + 1;
        let rising = (0..n).fold(BigInt::from(1), |acc, i| acc * (s + i));
        fact *= (2 * j as i64 + 1) * (2 * j as i64 + 2);
        let term = a.powi(-s - n).mul_bigint(&rising).mul_int(bn).div_int(bd * fact);
        if j + 1 < bern.len() {
            est = &est + &term;
        } else {
            bound = term.abs();
        }
    }
    (est, bound)
}

fn criterion_1() {
    let pi = pi_agm();
    let t1 = polygamma(1, Arg::Exact(QS5::one()), p()).unwrap();
    assert!((&t1 - &pi.square().div_int(6)).abs() < tol(38), "ψ'(1)");
    let gamma = gamma_brent_mcmillan();
    let d = polygamma(0, Arg::Exact(QS5::one()), p()).unwrap();
    assert!((&d + &gamma).abs() < tol(38), "ψ(1) + γ");
    // Taylor series ψ⁽ᵐ⁾(1+x) = (−1)^(m+1) Σ (m+j)!/j! ζ(m+j+1) (−x)^j
    for m in 1..=3u32 {
        for num in [-3i64, 1, 4] {
            let x = BigRational::new(num.into(), 10.into());
            let xr = Real::from_rational(&x, BITS);
            let (mut sum, mut coef, mut pw) = (r(0), BigInt::from((1..=m as i64).product::<i64>()), r(1));
            for j in 0..200u32 {
                sum = &sum + &(zeta_int(m + j + 1, p()).unwrap().mul_bigint(&coef) * &pw);
                coef = coef * (m + j + 1) / (j + 1);
                pw = -(&pw * &xr);
            }
            if m % 2 == 0 {
                sum = -sum;
            }
            let got = polygamma(m, Arg::Exact(QS5::from_rational(x + BigRational::from_integer(1.into()))), p()).unwrap();
            assert!((&got - &sum).abs() < tol(38), "Taylor m={m} x={num}/10");
        }
    }
}

fn criterion_2() {
    for &id in FuncEqId::ALL {
        let mut rng = point_rng(SEED, id);
        for m in admissible_orders(id.parity(), 6) {
            let pts = admissible_points(id, m, 10, &mut rng, p());
            assert_eq!(pts.len(), 10, "{id} m={m}");
            for a in pts {
                let res = funceq_residual(id, m, &a, p()).unwrap();
                assert!(res < tol(38), "{id} m={m} {a:?}: {res}");
            }
        }
    }
}

fn criterion_3() {
    assert!(LemmaId::ALL.len() >= 14);
    for &id in LemmaId::ALL {
        let rs: Vec<Option<i64>> = if id.takes_r() { (1..=6).map(Some).collect() } else { vec![None] };
        for m in admissible_orders(id.parity(), 7) {
            for &rr in &rs {
                let res = lemma_sides(id, m, rr, p()).unwrap().residual();
                assert!(res < tol(38), "{id} m={m} r={rr:?}: {res}");
            }
        }
    }
}

fn criterion_4() {
    let cat = build_catalog();
    for (id, k) in [("ex-pnj960x", 30), ("ex-s1u6y4q", 30), ("ex-gluacxg", 20)] {
        let e = find(&cat, id).unwrap();
        assert!(e.convergent, "{id}");
        let reps = verify(e, p(), &tol(k));
        let direct = reps.iter().find(|r| r.mode == Mode::DirectSum).unwrap();
        assert_eq!(direct.verdict, Verdict::Pass, "{id}: {direct:?}");
        assert!(direct.terms_used.parse::<usize>().unwrap() <= 20_000, "{id}");
    }
}

fn criterion_5() {
    let cat = build_catalog();
    for (id, constant) in [
        ("ex-s1a2ufl", QS5::from_ratios(13616, 25, 0, 1)),
        ("ex-wi3ql4i", QS5::from_ratios(13616, 25, 0, 1)),
        ("ex-ew630ib", QS5::from_ratios(-364, 5, 0, 1)),
        ("ex-allakva", QS5::from_ratios(-364, 5, 0, 1)),
        ("ex-fc0zaz6", QS5::from_int(-3)),
    ] {
        let e = find(&cat, id).unwrap();
        assert!(!e.convergent, "{id}");
        assert_eq!(e.rhs.canonical().unwrap().constant(), constant, "{id}");
        let reps = verify(e, p(), &tol(30));
        assert_eq!(reps[0].verdict, Verdict::DivergentSkippedDirect, "{id}");
        assert_eq!(reps[1].mode, Mode::PolygammaForm);
        assert_eq!(reps[1].verdict, Verdict::Pass, "{id}: {:?}", reps[1]);
    }
    let (_, ratio) = converges(3, &BigRational::new(1.into(), 2.into()));
    assert_eq!(ratio, QS5::from_ratios(1, 1, 1, 2));
    let (code, out) = bin(&["sum", "--kind", "F", "--m", "2", "--r", "3", "--z", "1/2"]);
    assert_eq!(code, 0);
    assert!(out.contains("divergent (|α^r z| = (2+√5)/2 > 1)"), "{out}");
    assert!(!out.contains("direct sum"));
}

fn criterion_6() {
    let cat = build_catalog();
    for (a, b) in [("ex-s1a2ufl", "ex-wi3ql4i"), ("ex-ew630ib", "ex-allakva")] {
        let d = cross_check(find(&cat, a).unwrap(), find(&cat, b).unwrap(), p()).unwrap();
        assert!(d < tol(38), "{a} vs {b}: {d}");
    }
}

fn criterion_7() {
    for n in -40i64..=40 {
        let (f, l) = (fib(n), lucas(n));
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let half = |x: BigInt| BigRational::new(x, 2.into());
        assert_eq!(QS5::alpha_pow(n), QS5::new(half(l.clone()), half(f.clone())));
        assert_eq!(QS5::alpha_pow(n).norm(), BigRational::from_integer(sign.into()));
        assert_eq!(&l * &l - BigInt::from(5) * &f * &f, BigInt::from(4 * sign));
    }
    for rr in 1i64..=10 {
        assert_eq!(converges(rr, &BigRational::new(1.into(), lucas(rr))).0, rr % 2 == 0, "r={rr}");
    }
}

fn criterion_8() {
    let pp = Precision::new(60).unwrap();
    let args = [
        (QS5::from_ratios(1, 3, 0, 1), r(1).div_int(3)),
        (QS5::sqrt5().half(), r(5).sqrt().unwrap().div_int(2)),
        (QS5::from_ratios(7, 2, 0, 1), r(7).div_int(2)),
    ];
    for m in 1..=4u32 {
        let s = m as i64 + 1;
        let fact: i64 = (1..=m as i64).product();
        let sign = if m % 2 == 1 { 1 } else { -1 };
        for (exact, x) in &args {
            let n = 400;
            let mut sum = r(0);
            for k in 0..n {
                sum = &sum + &(x + &r(k)).powi(-s);
            }
            let (tail, bound) = em_tail(&(x + &r(n)), s);
            let oracle = (&sum + &tail).mul_int(sign * fact);
            let got = polygamma(m, Arg::Exact(exact.clone()), pp).unwrap();
            assert!((&got - &oracle).abs() <= &bound.mul_int(fact) + &pp.tolerance(0), "m={m} x={exact}");
        }
    }
    let mut s = r(0);
    for k in 1..10_000i64 {
        s = &s + &r(k).powi(-3);
    }
    let (tail, bound) = em_tail(&r(10_000), 3);
    assert!(bound < tol(30));
    let z3 = zeta_int(3, p()).unwrap();
    assert!((&z3 - &(&s + &tail)).abs() < tol(30), "ζ(3)");
}

fn criterion_9() {
    let (ok, _) = bin(&["selftest"]);
    assert_eq!(ok, 0, "unperturbed selftest");
    let (code, _) = bin(&["--inject-fault", "example-constant", "verify", "--id", "ex-s1u6y4q"]);
    assert_eq!(code, 1, "432 -> 433");
    let (code, _) = bin(&["--inject-fault", "bernoulli-sign", "selftest"]);
    assert_ne!(code, 0, "flipped Bernoulli sign");
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        ("kernel ground truth", criterion_1),
        ("functional-equation grid", criterion_2),
        ("golden-ratio evaluation grid", criterion_3),
        ("convergent examples by direct summation", criterion_4),
        ("divergent examples in polygamma form", criterion_5),
        ("route consistency", criterion_6),
        ("exact arithmetic", criterion_7),
        ("oracle equivalence", criterion_8),
        ("harness sensitivity", criterion_9),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let ms = t.elapsed().as_millis();
        match res {
            Ok(()) => println!("criterion {} PASS  {name} ({ms} ms)", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {} FAIL  {name} ({ms} ms): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
