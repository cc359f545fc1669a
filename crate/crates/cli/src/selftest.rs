//! The full self-test: residual grids, kernel oracles, exact arithmetic and
//! the catalog.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use phizeta::arith::{const_pi, ln2_bits, Arg};
use phizeta::funceq::{
    admissible_orders, admissible_points, funceq_residual, lemma_sides, point_rng,
    residual_tolerance, FuncEqId, LemmaId,
};
use phizeta::identities::{shift_identity_check, Family};
use phizeta::qsqrt5::{factorial, fib, lucas};
use phizeta::series::converges;
use phizeta::specfun::{bernoulli, polygamma, zeta_int};
use phizeta::{Real, Result, QS5};

use crate::commands::{catalog, verify_entries};
use crate::config::RunConfig;
use crate::report::{pass_count, to_json, Header};
use crate::{Exit, Output};

/// Counts and worst residual of one suite.
#[derive(Debug)]
pub struct Suite {
    pub name: &'static str,
    pub checks: usize,
    pub passed: usize,
    pub max_residual: Option<Real>,
    pub first_failure: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite { name, checks: 0, passed: 0, max_residual: None, first_failure: None }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.first_failure.get_or_insert(what);
    }

    /// Records `residual < tol`; errors count as failures.
    fn record(&mut self, what: impl FnOnce() -> String, residual: Result<Real>, tol: &Real) {
        match residual {
            Ok(r) => {
                self.checks += 1;
                if &r < tol {
                    self.passed += 1;
                } else {
                    self.first_failure.get_or_insert_with(|| format!("{}: {}", what(), r.to_decimal(6)));
                }
                if self.max_residual.as_ref().is_none_or(|m| &r > m) {
                    self.max_residual = Some(r);
                }
            }
            Err(e) => self.fail(format!("{}: {e}", what())),
        }
    }

    fn exact(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.checks += 1;
        if ok {
            self.passed += 1;
        } else {
            self.first_failure.get_or_insert_with(what);
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.checks
    }
}

fn funceq_suite(cfg: &RunConfig) -> Suite {
    let p = cfg.precision;
    let tol = residual_tolerance(p);
    let mut s = Suite::new("functional equations");
    for &id in FuncEqId::ALL {
        let mut rng = point_rng(cfg.seed, id);
        for m in admissible_orders(id.parity(), 6) {
            let points = admissible_points(id, m, 10, &mut rng, p);
            if points.len() < 10 {
                s.fail(format!("{id} m={m}: only {} admissible points", points.len()));
            }
            for args in points {
                s.record(|| format!("{id} m={m} {args:?}"), funceq_residual(id, m, &args, p), &tol);
            }
        }
    }
    s
}

fn lemma_suite(cfg: &RunConfig) -> Suite {
    let p = cfg.precision;
    let tol = residual_tolerance(p);
    let mut s = Suite::new("golden-ratio evaluations");
    for &id in LemmaId::ALL {
        let rs: Vec<Option<i64>> = if id.takes_r() { (1..=6).map(Some).collect() } else { vec![None] };
        for m in admissible_orders(id.parity(), 7) {
            for &r in &rs {
                s.record(|| format!("{id} m={m} r={r:?}"), lemma_sides(id, m, r, p).map(|x| x.residual()), &tol);
            }
        }
    }
    s
}

fn kernel_suite(cfg: &RunConfig) -> Suite {
    let p = cfg.precision;
    let bits = p.working_bits();
    let tol = residual_tolerance(p);
    let mut s = Suite::new("kernel oracles");
    let pi = const_pi(p);
    let one = || Arg::Exact(QS5::one());
    let half = || Arg::Exact(QS5::from_ratios(1, 2, 0, 1));
    let diff = |a: Result<Real>, b: Real| a.map(|a| (&a - &b).abs());

    s.record(|| "psi'(1) = pi^2/6".into(), diff(polygamma(1, one(), p), pi.square().div_int(6)), &tol);
    s.record(|| "psi'(1/2) = pi^2/2".into(), diff(polygamma(1, half(), p), pi.square().div_int(2)), &tol);
    let psi_half_gap = polygamma(0, half(), p).and_then(|a| Ok(&a - &polygamma(0, one(), p)?));
    s.record(|| "psi(1/2) - psi(1) = -2 ln 2".into(), diff(psi_half_gap, -ln2_bits(bits).mul_int(2)), &tol);
    let z3 = zeta_int(3, p);
    s.record(
        || "psi''(1) = -2 zeta(3)".into(),
        z3.and_then(|z| diff(polygamma(2, one(), p), -z.mul_int(2))),
        &tol,
    );
    // ζ(2k) = (−1)^(k+1) B_2k (2π)^2k / (2 (2k)!)
    for k in 1..=6u32 {
        let b = bernoulli(2 * k as usize);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let want = Real::from_rational(&(b * BigRational::from_integer(BigInt::from(sign))), bits)
            * pi.mul_int(2).powi(2 * k as i64)
            / Real::from_bigint(&(factorial(2 * k) * 2), bits);
        s.record(|| format!("zeta({}) from B_{}", 2 * k, 2 * k), diff(zeta_int(2 * k, p), want), &tol);
    }
    s
}

fn exact_suite() -> Suite {
    let mut s = Suite::new("exact arithmetic");
    for n in -40i64..=40 {
        let (f, l) = (fib(n), lucas(n));
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let binet = QS5::new(BigRational::new(l.clone(), 2.into()), BigRational::new(f.clone(), 2.into()));
        s.exact(|| format!("Binet n={n}"), QS5::alpha_pow(n) == binet);
        s.exact(|| format!("norm n={n}"), QS5::alpha_pow(n).norm() == BigRational::from_integer(sign.into()));
        s.exact(|| format!("L^2 - 5F^2 n={n}"), &l * &l - BigInt::from(5) * &f * &f == BigInt::from(4 * sign));
    }
    for r in 1i64..=10 {
        let z = BigRational::new(1.into(), lucas(r));
        s.exact(|| format!("convergence parity r={r}"), converges(r, &z).0 == (r % 2 == 0));
    }
    s
}

fn shift_suite(cfg: &RunConfig) -> Suite {
    let p = cfg.precision;
    let tol = residual_tolerance(p);
    let mut s = Suite::new("shift identities");
    for id in catalog(cfg).iter().filter(|i| i.family != Family::Example) {
        let l = &id.lhs;
        s.record(|| id.id.clone(), shift_identity_check(l.kind, l.m, l.r, &l.z, p), &tol);
    }
    s
}

fn catalog_suite(cfg: &RunConfig) -> Suite {
    let cat = catalog(cfg);
    let entries: Vec<_> = cat.iter().collect();
    let reports = verify_entries(cfg, &entries);
    let (passed, total) = pass_count(&reports);
    let max_residual = reports
        .iter()
        .filter_map(|r| r.abs_error.as_deref())
        .filter_map(|e| Real::parse(e, 64).ok())
        .max();
    let first_failure = reports
        .iter()
        .find(|r| r.verdict.is_failure())
        .map(|r| format!("{} {}: {}", r.id, r.mode, r.abs_error.as_deref().or(r.diagnostic.as_deref()).unwrap_or("?")));
    Suite { name: "identity catalog", checks: total, passed, max_residual, first_failure }
}

pub fn run_suites(cfg: &RunConfig) -> Vec<Suite> {
    vec![
        kernel_suite(cfg),
        exact_suite(),
        funceq_suite(cfg),
        lemma_suite(cfg),
        shift_suite(cfg),
        catalog_suite(cfg),
    ]
}

#[derive(Serialize)]
struct SuiteRow {
    suite: String,
    checks: String,
    passed: String,
    max_residual: Option<String>,
    first_failure: Option<String>,
}

pub fn selftest(cfg: &RunConfig) -> Output {
    let suites = run_suites(cfg);
    let ok = suites.iter().all(Suite::ok);
    let rows: Vec<SuiteRow> = suites
        .iter()
        .map(|s| SuiteRow {
            suite: s.name.to_string(),
            checks: s.checks.to_string(),
            passed: s.passed.to_string(),
            max_residual: s.max_residual.as_ref().map(|r| r.to_decimal(3)),
            first_failure: s.first_failure.clone(),
        })
        .collect();
    let body = if cfg.json {
        to_json(&Header::new(cfg), &json!({ "suites": rows, "ok": ok }))
    } else {
        let mut out = format!("{:26}  {:>6}  {:>6}  {}\n", "suite", "checks", "passed", "max residual");
        for r in &rows {
            out.push_str(&format!(
                "{:26}  {:>6}  {:>6}  {}\n",
                r.suite,
                r.checks,
                r.passed,
                r.max_residual.as_deref().unwrap_or("-")
            ));
            if let Some(f) = &r.first_failure {
                out.push_str(&format!("  ! {f}\n"));
            }
        }
        let passed = suites.iter().filter(|s| s.ok()).count();
        out.push_str(&format!("passed {passed}/{}\n", suites.len()));
        out
    };
    Output { body, exit: if ok { Exit::Pass } else { Exit::Fail } }
}
