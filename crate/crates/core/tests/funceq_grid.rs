use phizeta::funceq::{
    admissible_orders, admissible_points, lemma_sides, point_rng, residual_tolerance, FuncEqId,
    LemmaId, funceq_residual,
};
use phizeta::Precision;

#[test]
fn every_functional_equation_on_random_points() {
    let prec = Precision::DEFAULT;
    let tol = residual_tolerance(prec);
    for &id in FuncEqId::ALL {
        let mut rng = point_rng(20240611, id);
        for m in admissible_orders(id.parity(), 6) {
            let points = admissible_points(id, m, 10, &mut rng, prec);
            assert_eq!(points.len(), 10, "{id} m={m}");
            for args in points {
                let r = funceq_residual(id, m, &args, prec)
                    .unwrap_or_else(|e| panic!("{id} m={m} {args:?}: {e}"));
                assert!(r < tol, "{id} m={m} {args:?}: residual {r}");
            }
        }
    }
}

#[test]
fn every_lemma_evaluation_over_orders_and_r() {
    let prec = Precision::DEFAULT;
    let tol = residual_tolerance(prec);
    for &id in LemmaId::ALL {
        let rs: Vec<Option<i64>> = if id.takes_r() {
            (1..=6).map(Some).collect()
        } else {
            vec![None]
        };
        for m in admissible_orders(id.parity(), 7) {
            for &r in &rs {
                let s = lemma_sides(id, m, r, prec).unwrap();
                assert!(s.residual() < tol, "{id} m={m} r={r:?}: {}", s.residual());
            }
        }
    }
}

#[test]
fn flipped_cot_sign_in_xy1_odd_is_detected() {
    // With +π·D(y) on the right the equation is off by 2π·D(y).
    use phizeta::funceq::{evaluate_sides, funceq_terms, Term};
    use phizeta::arith::Arg;
    use phizeta::QS5;
    let prec = Precision::DEFAULT;
    let args = [
        Arg::Exact(QS5::from_ratios(1, 3, 0, 1)),
        Arg::Exact(QS5::from_ratios(2, 3, 0, 1)),
    ];
    let (lhs, mut rhs) = funceq_terms(FuncEqId::Xy1SumOdd, 1, &args, prec).unwrap();
    for t in rhs.iter_mut() {
        if let Term::PiCot { sign, .. } = t {
            *sign = -*sign;
        }
    }
    let s = evaluate_sides(&lhs, &rhs, prec).unwrap();
    assert!(s.residual().to_f64() > 1.0);
}
