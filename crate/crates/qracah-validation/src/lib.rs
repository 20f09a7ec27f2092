//! Parameter fixtures shared by the acceptance suite.

use qracah::multivar::QParams;
use qracah::scalar::RootParam;
use qracah::{Float, Rational};

/// Working precision of the float criteria.
pub const PREC: u32 = 256;

pub fn rp(n: i64, d: i64) -> RootParam<Rational> {
    RootParam::new(Rational::from((n, d)))
}

pub fn fr(n: i64, d: i64) -> RootParam<Float> {
    RootParam::new(Float::with_val(PREC, Rational::from((n, d))))
}

/// `s = 3` q-Racah parameters for the exact identities: q = 1/4 and roots
/// 1/3, 2/5, 3/7, 4/9 for the a's and 1/11 for b.
pub fn identity_params(big_n: usize) -> QParams<Rational> {
    QParams {
        s: 3,
        q: rp(1, 2),
        a: vec![rp(1, 3), rp(2, 5), rp(3, 7), rp(4, 9)],
        b: Some(rp(1, 11)),
        beta: None,
        big_n,
    }
}

/// `s = 2` q-Meixner (with `beta`) or q-Charlier parameters at q = 1/2.
/// `a_1 a_2` is large enough for the tail to contract up to degree 3.
pub fn meixner_params(beta: bool) -> QParams<Float> {
    let half = Float::with_val(PREC, 0.5);
    QParams {
        s: 2,
        q: RootParam::from_value(&half).expect("1/2 is positive"),
        a: vec![fr(7, 2), fr(9, 2)],
        b: None,
        beta: beta.then(|| fr(1, 2)),
        big_n: 0,
    }
}

/// `s = 2`, N = 3 float parameters for the limit suite.
pub fn limit_params() -> QParams<Float> {
    QParams { s: 2, q: fr(1, 2), a: vec![fr(1, 3), fr(2, 5), fr(3, 7)], b: Some(fr(1, 11)), beta: None, big_n: 3 }
}

/// Three epsilons a factor 10 apart, so one pair differs by 100.
pub fn epsilons() -> Vec<Float> {
    ["1e-4", "1e-5", "1e-6"].iter().map(|e| Float::with_val(PREC, Float::parse(e).expect("literal parses"))).collect()
}
