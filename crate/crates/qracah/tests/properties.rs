use proptest::prelude::*;
use qracah::multivar::{eval_poly_mv, permuted_params, FamilyId, FamilyMV, MultiIndex, ParamSetMV};
use qracah::qseries::{phi_cleared, phi_terminating, qpoch, PhiSpec};
use qracah::scalar::{int_pow, scalar_arith, ArithOp, Num, RootParam, Scalar};
use qracah::verify::{enumerate_indices, params_to_float, random_params, simplex};
use qracah::{Float, Rational};

fn rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=17).prop_map(|(n, d)| Rational::from((n, d)))
}

fn nonzero_rat() -> impl Strategy<Value = Rational> {
    rat().prop_filter("nonzero", |r| *r != 0)
}

/// `0 < q < 1`, away from the ends.
fn base() -> impl Strategy<Value = Rational> {
    (1i64..=7, 2i64..=9).prop_filter_map("proper", |(n, d)| (n < d).then(|| Rational::from((n, d))))
}

fn close(a: &Float, b: &Float, rel: f64) -> bool {
    let d = Float::with_val(a.prec(), a - b).abs();
    let s = Float::with_val(a.prec(), a.abs_ref()).max(&Float::with_val(a.prec(), b.abs_ref()));
    d <= s * rel || d < 1e-60
}

fn naive_phi(upper: &[Rational], lower: &[Rational], q: &Rational, z: &Rational, n: usize) -> Rational {
    let excess = 1 + lower.len() as i64 - upper.len() as i64;
    let mut sum = Rational::new();
    for k in 0..=n {
        let mut num = int_pow(z, k as i64).unwrap();
        for u in upper {
            num *= qpoch(u, q, k);
        }
        let mut den = qpoch(q, q, k);
        for l in lower {
            den *= qpoch(l, q, k);
        }
        let sign = if (k as i64 * excess) % 2 == 0 { 1 } else { -1 };
        let qpow = int_pow(q, excess * (k * k.saturating_sub(1) / 2) as i64).unwrap();
        sum += num / den * qpow * sign;
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_field_laws(a in rat(), b in rat(), c in rat()) {
        let (x, y, z) = (Scalar::Exact(a), Scalar::Exact(b), Scalar::Exact(c));
        let ab = scalar_arith(&x, &y, ArithOp::Add).unwrap();
        let bc = scalar_arith(&y, &z, ArithOp::Add).unwrap();
        prop_assert_eq!(scalar_arith(&ab, &z, ArithOp::Add).unwrap(), scalar_arith(&x, &bc, ArithOp::Add).unwrap());
        let xy = scalar_arith(&x, &y, ArithOp::Mul).unwrap();
        let yz = scalar_arith(&y, &z, ArithOp::Mul).unwrap();
        prop_assert_eq!(scalar_arith(&xy, &z, ArithOp::Mul).unwrap(), scalar_arith(&x, &yz, ArithOp::Mul).unwrap());
        let left = scalar_arith(&x, &bc, ArithOp::Mul).unwrap();
        let xz = scalar_arith(&x, &z, ArithOp::Mul).unwrap();
        prop_assert_eq!(left, scalar_arith(&xy, &xz, ArithOp::Add).unwrap());
    }

    #[test]
    fn float_distributivity_within_rounding(a in rat(), b in rat(), c in rat()) {
        let f = |r: &Rational| Float::with_val(256, r);
        let (x, y, z) = (f(&a), f(&b), f(&c));
        let left = x.clone() * Float::with_val(256, &y + &z);
        let right = Float::with_val(256, &x * &y) + Float::with_val(256, &x * &z);
        prop_assert!(close(&left, &right, 1e-70));
    }

    #[test]
    fn division_by_zero_is_an_error(a in rat()) {
        let r = scalar_arith(&Scalar::Exact(a), &Scalar::Exact(Rational::new()), ArithOp::Div);
        prop_assert!(r.is_err());
    }

    #[test]
    fn even_half_powers_are_integer_powers(root in nonzero_rat(), k in -20i64..=20) {
        let p = RootParam::new(root);
        prop_assert_eq!(p.half_pow(2 * k).unwrap(), int_pow(&p.value(), k).unwrap());
    }

    #[test]
    fn qpoch_splits(a in rat(), q in base(), m in 0usize..6, n in 0usize..6) {
        let whole = qpoch(&a, &q, m + n);
        let shifted = a.clone() * int_pow(&q, m as i64).unwrap();
        prop_assert_eq!(whole, qpoch(&a, &q, m) * qpoch(&shifted, &q, n));
    }

    #[test]
    fn terminating_series_matches_direct_sum(
        n in 0usize..6,
        q in base(),
        up in prop::collection::vec(rat(), 0..3),
        lo in prop::collection::vec(nonzero_rat(), 1..3),
        z in rat(),
    ) {
        let lo: Vec<Rational> = lo.into_iter().map(|l| l * 7 + Rational::from((1, 3))).collect();
        prop_assume!(lo.iter().all(|l| qpoch(l, &q, n) != 0));
        let mut upper = vec![int_pow(&q, -(n as i64)).unwrap()];
        upper.extend(up.iter().cloned());
        let spec = PhiSpec { upper: upper.clone(), lower: lo.clone(), q: q.clone(), z: z.clone(), n };
        prop_assert_eq!(phi_terminating(&spec).unwrap(), naive_phi(&upper, &lo, &q, &z, n));
        let cleared = phi_cleared(n, &up, &lo, &q, &z).unwrap();
        let pre = lo.iter().fold(Rational::from(1), |acc, l| acc * qpoch(l, &q, n));
        prop_assert_eq!(cleared, pre * naive_phi(&upper, &lo, &q, &z, n));
    }

    #[test]
    fn unit_upper_parameter_gives_one(n in 1usize..6, q in base(), lo in nonzero_rat(), z in rat()) {
        let lo = lo * 5 + Rational::from((1, 7));
        prop_assume!(qpoch(&lo, &q, n) != 0);
        let spec = PhiSpec { upper: vec![int_pow(&q, -(n as i64)).unwrap(), Rational::from(1)], lower: vec![lo], q, z, n };
        prop_assert_eq!(phi_terminating(&spec).unwrap(), Rational::from(1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn permutation_is_an_involution(seed in 0u64..1000, s in 1usize..4) {
        let ParamSetMV::Q(p) = random_params(FamilyId::QRacahMV, s, 3, seed).unwrap() else { unreachable!() };
        prop_assert_eq!(permuted_params(&permuted_params(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn float_precisions_agree_with_exact(seed in 0u64..1000) {
        let id = FamilyId::ALL[(seed % 7) as usize];
        let p = random_params(id, 2, 3, seed).unwrap();
        let exact = FamilyMV::new(id, p.clone()).unwrap();
        let lo = FamilyMV::new(id, params_to_float(&p, 128)).unwrap();
        let hi = FamilyMV::new(id, params_to_float(&p, 256)).unwrap();
        for n in enumerate_indices(2, 3) {
            // Cancellation can leave values far below the size of the
            // polynomial, so errors are measured against its largest value.
            let mut rows = Vec::new();
            let mut scale = Float::with_val(256, 1);
            for x in simplex(2, 3) {
                let e: Rational = eval_poly_mv(&exact, &n, &x).unwrap();
                let e = Float::with_val(256, &e);
                scale.max_mut(&Float::with_val(256, e.abs_ref()));
                rows.push((x, e));
            }
            for (x, e) in rows {
                let a = Float::with_val(256, eval_poly_mv(&lo, &n, &x).unwrap());
                let b = eval_poly_mv(&hi, &n, &x).unwrap();
                let dab = Float::with_val(256, &a - &b).abs() / &scale;
                let dbe = Float::with_val(256, &b - &e).abs() / &scale;
                prop_assert!(dab < 1e-25, "{} {} {} {}", id, n, x, a.to_text());
                prop_assert!(dbe < 1e-60, "{} {} {} {}", id, n, x, b.to_text());
            }
        }
    }

    #[test]
    fn degree_zero_is_one_everywhere(seed in 0u64..1000) {
        let id = FamilyId::ALL[(seed % 7) as usize];
        let f = FamilyMV::new(id, random_params(id, 3, 2, seed).unwrap()).unwrap();
        for x in simplex(3, 2) {
            prop_assert_eq!(eval_poly_mv(&f, &MultiIndex(vec![0; 3]), &x).unwrap(), Rational::from(1));
        }
    }
}
