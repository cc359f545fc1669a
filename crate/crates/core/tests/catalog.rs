use phizeta::identities::{
    build_catalog, build_catalog_with, cross_check, find, generate, identity_tolerance, theorem_rhs, verify,
    CatalogFault, Family, Mode, Verdict,
};
use phizeta::series::Kind;
use phizeta::Precision;
use rayon::prelude::*;

#[test]
fn every_entry_verifies_at_defaults() {
    let p = Precision::DEFAULT;
    let tol = identity_tolerance(p);
    let cat = build_catalog();
    let failures: Vec<String> = cat
        .par_iter()
        .flat_map(|id| verify(id, p, &tol))
        .filter(|r| r.verdict == Verdict::Fail)
        .map(|r| format!("{} {}: {:?} {:?}", r.id, r.mode, r.abs_error, r.diagnostic))
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn closed_forms_match_polygamma_forms_tightly() {
    let p = Precision::DEFAULT;
    let tol = p.tolerance(12);
    for id in build_catalog() {
        let s = &id.lhs;
        let lhs = theorem_rhs(s.kind, s.m, s.r, &s.z, p).unwrap();
        let lhs = if id.lhs_sign < 0 { -lhs } else { lhs };
        let rhs = id.rhs.eval(p).unwrap();
        let err = (&lhs - &rhs).abs();
        // relative to the magnitude of the values involved
        let scale = rhs.abs().max(phizeta::Real::one(64));
        assert!(err < &tol * &scale, "{}: {}", id.id, err);
    }
}

#[test]
fn worked_convergent_examples_sum_directly() {
    let p = Precision::DEFAULT;
    let tol = p.tolerance(20);
    let cat = build_catalog();
    for id in ["ex-pnj960x", "ex-s1u6y4q", "ex-gluacxg"] {
        let reps = verify(find(&cat, id).unwrap(), p, &tol);
        assert_eq!(reps[0].mode, Mode::DirectSum);
        assert_eq!(reps[0].verdict, Verdict::Pass, "{id}: {:?}", reps[0]);
        assert_eq!(reps[1].verdict, Verdict::Pass, "{id}: {:?}", reps[1]);
        let terms: usize = reps[0].terms_used.parse().unwrap();
        assert!(terms <= 20_000, "{id}: {terms}");
    }
}

#[test]
fn divergent_examples_are_refused_with_exact_ratio() {
    let p = Precision::DEFAULT;
    let tol = p.tolerance(20);
    let cat = build_catalog();
    for (id, ratio) in [
        ("ex-s1a2ufl", "(2+√5)/2"),
        ("ex-ew630ib", "(2+√5)/2"),
        ("ex-fc0zaz6", "(1+√5)/2"),
        ("ex-wi3ql4i", "(2+√5)/2"),
        ("ex-allakva", "(2+√5)/2"),
    ] {
        let reps = verify(find(&cat, id).unwrap(), p, &tol);
        assert_eq!(reps[0].verdict, Verdict::DivergentSkippedDirect, "{id}");
        assert!(reps[0].lhs_value.is_none());
        assert!(reps[0].diagnostic.as_deref().unwrap().contains(ratio), "{id}: {:?}", reps[0].diagnostic);
        assert_eq!(reps[1].verdict, Verdict::Pass, "{id}");
    }
}

#[test]
fn two_routes_agree() {
    let p = Precision::DEFAULT;
    let cat = build_catalog();
    for (a, b) in [("ex-s1a2ufl", "ex-wi3ql4i"), ("ex-ew630ib", "ex-allakva")] {
        let d = cross_check(find(&cat, a).unwrap(), find(&cat, b).unwrap(), p).unwrap();
        assert!(d < p.tolerance(12), "{a} vs {b}: {d}");
    }
    assert!(cross_check(find(&cat, "ex-s1a2ufl").unwrap(), find(&cat, "ex-ew630ib").unwrap(), p).is_err());
}

#[test]
fn corrupted_constant_fails_by_one() {
    let p = Precision::DEFAULT;
    let tol = p.tolerance(20);
    let cat = build_catalog_with(Some(CatalogFault::ExampleConstant));
    let reps = verify(find(&cat, "ex-s1u6y4q").unwrap(), p, &tol);
    for r in &reps {
        assert_eq!(r.verdict, Verdict::Fail);
        let err: f64 = r.abs_error.as_deref().unwrap().parse().unwrap();
        assert!((err - 1.0).abs() < 1e-9, "{err}");
    }
}

#[test]
fn parity_gating_at_build_time() {
    for &f in Family::GENERATORS {
        let wrong = if f.kind() == Some(Kind::F) { 1 } else { 2 };
        assert!(generate(f, wrong, 2).is_err(), "{f}");
    }
}
