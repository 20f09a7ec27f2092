use qracah::multivar::{FamilyId, FamilyMV, ParamSetMV, QParams, Reading};
use qracah::scalar::RootParam;
use qracah::verify::{
    arbitrate, check_identity, check_limit, enumerate_lattice, family_indices, gram, gram_matrix, params_to_float,
    plan_truncation, random_params, GramOptions, Identity, Limit,
};
use qracah::{Error, Float, Rational};

const EXACT: [FamilyId; 7] = [
    FamilyId::QRacahMV,
    FamilyId::QRacahMV2,
    FamilyId::DualQHahnMV,
    FamilyId::DualQHahnMV2,
    FamilyId::DualQHahnStarMV,
    FamilyId::QHahnMV,
    FamilyId::QKrawtchoukMV,
];

fn exact_pass(id: FamilyId, s: usize, n: usize, seed: u64) {
    let f = FamilyMV::new(id, random_params(id, s, n, seed).unwrap()).unwrap();
    let r = gram(&f, &GramOptions::default()).unwrap();
    assert!(r.passed, "{id} s={s} N={n} seed={seed}: {:?}", r.failures.first());
    assert!(r.exact);
    assert_eq!(r.max_abs_residual, "0");
}

#[test]
fn exact_orthogonality_small() {
    for id in EXACT {
        for (s, n) in [(1, 5), (2, 4), (3, 3)] {
            for seed in 0..3 {
                exact_pass(id, s, n, seed);
            }
        }
    }
}

#[test]
fn exact_orthogonality_larger() {
    for id in [FamilyId::QRacahMV, FamilyId::DualQHahnStarMV, FamilyId::QKrawtchoukMV] {
        for seed in 0..3 {
            exact_pass(id, 2, 5, seed);
            exact_pass(id, 3, 4, seed);
        }
    }
}

#[test]
fn shipped_readings_win_arbitration() {
    use qracah::multivar::Variants;
    let defaults = Variants::default();
    for item in Variants::ITEMS {
        let id = item.family;
        let sets: Vec<ParamSetMV<Rational>> = (0..2).map(|seed| random_params(id, 2, 3, seed).unwrap()).collect();
        let a = arbitrate(item.key, &sets, 2).unwrap();
        assert_eq!(a.winner(), defaults.get(item.key), "{}", item.key);
    }
}

fn meixner_params(beta: bool) -> QParams<Float> {
    let half = Float::with_val(256, 0.5);
    let fr = |n: i64, d: i64| RootParam::new(Float::with_val(256, Rational::from((n, d))));
    QParams {
        s: 2,
        q: RootParam::from_value(&half).unwrap(),
        a: vec![fr(7, 2), fr(9, 2)],
        b: None,
        beta: beta.then(|| fr(1, 2)),
        big_n: 0,
    }
}

#[test]
fn meixner_and_charlier_truncated() {
    for (id, beta) in [(FamilyId::QMeixnerMV, true), (FamilyId::QCharlierMV, false)] {
        let f = FamilyMV::new(id, ParamSetMV::Q(meixner_params(beta))).unwrap();
        let r = gram(&f, &GramOptions { threads: 4, tol: 1e-20, degree_cap: Some(3), ..Default::default() }).unwrap();
        assert!(r.passed, "{id}: {:?}", r.failures.first());
        let t = r.truncation.unwrap();
        assert!(t.bound < 1e-20 && t.ratio < 1.0);
    }
}

#[test]
fn truncation_example_scale() {
    // q = 1/2 with a_1 = a_2 = 4: the shell ratio only contracts for low
    // degree caps, since it behaves like q^(1-2 cap) / (a_1 a_2).
    let four = Float::with_val(256, 4);
    let half = Float::with_val(256, 0.5);
    let p = QParams {
        s: 2,
        q: RootParam::from_value(&half).unwrap(),
        a: vec![RootParam::from_value(&four).unwrap(), RootParam::from_value(&four).unwrap()],
        b: None,
        beta: Some(RootParam::from_value(&half).unwrap()),
        big_n: 0,
    };
    let f = FamilyMV::new(FamilyId::QMeixnerMV, ParamSetMV::Q(p)).unwrap();
    let t = plan_truncation(&f, 1, 1e-30, 2).unwrap();
    assert!(t.x_max <= 120, "{}", t.x_max);
    assert!(matches!(plan_truncation(&f, 4, 1e-30, 2), Err(Error::NonContracting(_))));
}

#[test]
fn classical_racah_float() {
    for seed in 0..2 {
        let p = random_params(FamilyId::RacahClassicalMV, 2, 4, seed).unwrap();
        let f = FamilyMV::new(FamilyId::RacahClassicalMV, params_to_float(&p, 256)).unwrap();
        let r = gram(&f, &GramOptions { tol: 1e-25, ..Default::default() }).unwrap();
        assert!(r.passed, "{:?}", r.failures.first());
        assert!(r.max_scaled_residual < 1e-25);
    }
}

#[test]
fn classical_racah_needs_floats() {
    let p = random_params(FamilyId::RacahClassicalMV, 2, 3, 0).unwrap();
    assert!(matches!(FamilyMV::new(FamilyId::RacahClassicalMV, p), Err(Error::FloatOnly(_))));
}

#[test]
fn thread_count_does_not_change_results() {
    let p = random_params(FamilyId::QRacahMV, 3, 4, 11).unwrap();
    let f = FamilyMV::new(FamilyId::QRacahMV, params_to_float(&p, 256)).unwrap();
    let lat = enumerate_lattice(&f, None).unwrap();
    let idx = family_indices(&f, None);
    let one = gram_matrix(&f, &lat, &idx, 1).unwrap();
    let eight = gram_matrix(&f, &lat, &idx, 8).unwrap();
    let bits = |v: &[Float]| v.iter().map(|x| x.to_string_radix(16, None)).collect::<Vec<_>>();
    assert_eq!(bits(&one), bits(&eight));

    let m = FamilyMV::new(FamilyId::QMeixnerMV, ParamSetMV::Q(meixner_params(true))).unwrap();
    let opts = |threads| GramOptions { threads, tol: 1e-20, degree_cap: Some(2), ..Default::default() };
    let a = gram(&m, &opts(1)).unwrap();
    let b = gram(&m, &opts(8)).unwrap();
    assert_eq!(a.residual_matrix, b.residual_matrix);
    assert_eq!(a.truncation.unwrap().x_max, b.truncation.unwrap().x_max);
}

#[test]
fn corrupted_norms_are_detected() {
    for id in EXACT {
        let f = FamilyMV::new(id, random_params(id, 2, 2, 5).unwrap()).unwrap();
        let r = gram(&f, &GramOptions { corrupt_norms: true, ..Default::default() }).unwrap();
        assert!(!r.passed, "{id}");
    }
}

#[test]
fn flipping_a_shipped_reading_breaks_orthogonality() {
    use qracah::multivar::Variants;
    let item = Variants::ITEMS.iter().find(|i| i.key == "tail_sums").unwrap();
    let f = FamilyMV::new(item.family, random_params(item.family, 2, 3, 1).unwrap())
        .unwrap()
        .with_variants(Variants::default().with("tail_sums", Reading::Printed).unwrap());
    assert!(!gram(&f, &GramOptions::default()).unwrap().passed);
}

fn identity_params() -> QParams<Rational> {
    let rp = |n: i64, d: i64| RootParam::new(Rational::from((n, d)));
    QParams {
        s: 3,
        q: rp(1, 2),
        a: vec![rp(1, 3), rp(2, 5), rp(3, 7), rp(4, 9)],
        b: Some(rp(1, 11)),
        beta: None,
        big_n: 3,
    }
}

#[test]
fn identities_that_hold() {
    let p = identity_params();
    for which in [
        Identity::Sears,
        Identity::WeightPermutationDerived,
        Identity::SecondFamily,
        Identity::PartialSum,
        Identity::DStarWeightFactorDerived,
    ] {
        let r = check_identity(which, &p).unwrap();
        assert!(r.passed && r.checked > 0, "{}: {:?}", r.name, r.witness);
    }
}

#[test]
fn stated_forms_that_fail_have_witnesses() {
    let p = identity_params();
    for which in [
        Identity::WeightPermutation,
        Identity::QHahnLabelInvariance,
        Identity::QHahnLabelInvarianceExtended,
        Identity::DStarWeightFactor,
    ] {
        let r = check_identity(which, &p).unwrap();
        assert!(!r.passed, "{}", r.name);
        assert!(r.witness.is_some());
    }
}

#[test]
fn limits_converge_linearly() {
    let fr = |n: i64, d: i64| RootParam::new(Float::with_val(256, Rational::from((n, d))));
    let p =
        QParams { s: 2, q: fr(1, 2), a: vec![fr(1, 3), fr(2, 5), fr(3, 7)], b: Some(fr(1, 11)), beta: None, big_n: 3 };
    let eps: Vec<Float> =
        ["1e-4", "1e-5", "1e-6"].iter().map(|e| Float::with_val(256, Float::parse(e).unwrap())).collect();
    for l in Limit::ALL {
        let p = if l == Limit::BetaToZero { QParams { a: vec![fr(7, 2), fr(9, 2)], ..p.clone() } } else { p.clone() };
        let r = check_limit(l, &p, &eps).unwrap();
        assert!(r.passed, "{} {:?} {:?}", r.name, r.deviations, r.ratios);
    }
}
