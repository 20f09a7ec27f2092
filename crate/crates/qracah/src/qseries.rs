//! q-Pochhammer symbols and terminating basic hypergeometric series.

use crate::scalar::{int_pow, Num};
use crate::{Error, Result};

/// `(a;q)_n = (1-a)(1-aq)...(1-aq^{n-1})`, equal to 1 for `n = 0`.
pub fn qpoch<T: Num>(a: &T, q: &T, n: usize) -> T {
    let one = a.one_like();
    let mut p = one.clone();
    let mut t = a.clone();
    for k in 0..n {
        p *= &(one.clone() - &t);
        if k + 1 < n {
            t *= q;
        }
    }
    p
}

/// `(a_1, ..., a_k; q)_n`, the product of the individual symbols.
pub fn qpoch_multi<T: Num>(a: &[T], q: &T, n: usize) -> T {
    let mut p = q.one_like();
    for ai in a {
        p *= &qpoch(ai, q, n);
    }
    p
}

/// `(a;q)_∞` in the float backend.
///
/// Factors are multiplied until `|a q^k| < tol (1-|q|)`. The neglected tail
/// satisfies `Σ|a q^j| < tol`, so the relative error is at most about `tol`.
pub fn qpoch_inf<T: Num>(a: &T, q: &T, tol: &T) -> Result<T> {
    if T::EXACT {
        return Err(Error::FloatOnly("qpoch_inf"));
    }
    let one = a.one_like();
    let aq = q.abs();
    if aq >= one {
        return Err(Error::Domain(format!("|q| = {} is not below 1", aq.to_f64())));
    }
    let cut = tol.abs() * &(one.clone() - &aq);
    if cut.is_zero() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let mut p = one.clone();
    let mut t = a.clone();
    while t.abs() >= cut {
        p *= &(one.clone() - &t);
        t *= q;
    }
    Ok(p)
}

/// A terminating series `_{r}φ_{s}(upper; lower; q, z)` cut after `n + 1`
/// terms. One upper parameter must equal `q^{-n}`.
#[derive(Clone, Debug)]
pub struct PhiSpec<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub q: T,
    pub z: T,
    pub n: usize,
}

/// True when `u` equals `target`: exactly for rationals, to relative
/// tolerance `2^{-P/2}` for floats.
fn matches_param<T: Num>(u: &T, target: &T) -> bool {
    match u.precision() {
        None => u == target,
        Some(p) => {
            let diff = (u.clone() - target).abs();
            let scale = target.abs();
            let tol = int_pow(&u.lift(2), -(i64::from(p) / 2)).expect("2 is nonzero");
            diff <= scale * &tol
        }
    }
}

/// Sums a terminating series with the term-ratio recurrence (O(n) products).
///
/// The factor `((-1)^k q^{k(k-1)/2})^{1+s-r}` is included when the parameter
/// counts are unbalanced. Summation stops early once a term vanishes, since
/// every later term carries the same zero factor.
pub fn phi_terminating<T: Num>(spec: &PhiSpec<T>) -> Result<T> {
    let PhiSpec { upper, lower, q, z, n } = spec;
    let n = *n;
    let q_neg_n = int_pow(q, -(n as i64))?;
    if !upper.iter().any(|u| matches_param(u, &q_neg_n)) {
        return Err(Error::NotTerminating(format!("no upper parameter equals q^-{n}")));
    }
    let excess = 1 + lower.len() as i64 - upper.len() as i64;
    let one = q.one_like();
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut qk = one.clone();
    for k in 0..n {
        let mut num = z.clone();
        for u in upper {
            num *= &(one.clone() - &(u.clone() * &qk));
        }
        if num.is_zero() {
            break;
        }
        let mut den = one.clone() - &(qk.clone() * q);
        if den.is_zero() {
            return Err(Error::ZeroDenominator(format!("(q;q)_k at k = {}", k + 1)));
        }
        for (j, l) in lower.iter().enumerate() {
            let f = one.clone() - &(l.clone() * &qk);
            if f.is_zero() {
                return Err(Error::ZeroDenominator(format!("lower parameter {} ({}) at k = {k}", j + 1, l.to_text())));
            }
            den *= &f;
        }
        if excess != 0 {
            let step = -qk.clone();
            num *= &int_pow(&step, excess)?;
        }
        term *= &num.try_div(&den)?;
        sum += &term;
        qk *= q;
    }
    Ok(sum)
}

/// `∏_j (l_j;q)_n · φ(q^{-n}, upper; lower; q, z)` evaluated without
/// dividing by the lower parameters:
///
/// `Σ_k (q^{-n}, upper;q)_k / (q;q)_k · z^k · ∏_j (l_j q^k;q)_{n-k}`.
///
/// Every polynomial family in the crate is a product of such a prefactor and
/// a series, so lower parameters of the form `q^{-j}` cause no trouble here.
/// Costs O(n·(r+s)) using forward and suffix products.
pub fn phi_cleared<T: Num>(n: usize, upper: &[T], lower: &[T], q: &T, z: &T) -> Result<T> {
    let one = q.one_like();
    let mut qp = Vec::with_capacity(n + 1);
    let mut t = one.clone();
    for _ in 0..=n {
        qp.push(t.clone());
        t *= q;
    }
    let q_neg_n = int_pow(q, -(n as i64))?;
    // suffix[k] = ∏_j ∏_{i=k}^{n-1} (1 - l_j q^i)
    let mut suffix = vec![one.clone(); n + 1];
    for k in (0..n).rev() {
        let mut f = suffix[k + 1].clone();
        for l in lower {
            f *= &(one.clone() - &(l.clone() * &qp[k]));
        }
        suffix[k] = f;
    }
    let excess = lower.len() as i64 - upper.len() as i64;
    let mut fwd = one.clone();
    let mut sum = suffix[0].clone();
    for k in 0..n {
        let mut num = (one.clone() - &(q_neg_n.clone() * &qp[k])) * z;
        for u in upper {
            num *= &(one.clone() - &(u.clone() * &qp[k]));
        }
        if excess != 0 {
            num *= &int_pow(&(-qp[k].clone()), excess)?;
        }
        let den = one.clone() - &qp[k + 1];
        if den.is_zero() {
            return Err(Error::ZeroDenominator(format!("(q;q)_k at k = {}", k + 1)));
        }
        fwd = (fwd * &num).try_div(&den)?;
        if fwd.is_zero() {
            break;
        }
        sum += &(fwd.clone() * &suffix[k + 1]);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::{Float, Rational};

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn qpoch_examples() {
        let q = r(1, 3);
        assert_eq!(qpoch(&r(5, 7), &q, 0), r(1, 1));
        assert_eq!(qpoch(&r(1, 2), &r(1, 2), 2), r(3, 8));
        assert_eq!(qpoch(&r(3, 1), &q, 3), r(0, 1));
    }

    #[test]
    fn qpoch_multi_examples() {
        let q = r(1, 2);
        assert_eq!(qpoch_multi::<Rational>(&[], &q, 5), r(1, 1));
        assert_eq!(qpoch_multi(&[r(2, 9)], &q, 3), qpoch(&r(2, 9), &q, 3));
        assert_eq!(qpoch_multi(&[r(1, 2), r(1, 3)], &q, 1), r(1, 3));
    }

    #[test]
    fn qpoch_inf_values() {
        let p = 256;
        let q = Float::with_val(p, 0.5);
        let tol = Float::with_val(p, Float::parse("1e-70").unwrap());
        let zero = Float::with_val(p, 0);
        assert_eq!(qpoch_inf(&zero, &q, &tol).unwrap(), Float::with_val(p, 1));
        // (1/2;1/2)_∞ from a 200-factor product at 512 bits.
        let want = Float::with_val(p, Float::parse("0.28878809508660242127889972192923078008891190484").unwrap());
        let got = qpoch_inf(&q, &q, &tol).unwrap();
        assert!(Float::with_val(p, &got - &want).abs() < 1e-45);
        let a = Float::with_val(p, 0.3);
        let lhs = qpoch_inf(&a, &q, &tol).unwrap();
        let rhs = (Float::with_val(p, 1) - &a) * qpoch_inf(&(a.clone() * &q), &q, &tol).unwrap();
        assert!(Float::with_val(p, &lhs - &rhs).abs() < 1e-65);
        assert!(qpoch_inf(&a, &Float::with_val(p, 1), &tol).is_err());
        assert!(matches!(qpoch_inf(&r(1, 2), &r(1, 2), &r(1, 100)), Err(Error::FloatOnly(_))));
    }

    #[test]
    fn phi_trivial_cases() {
        let q = r(1, 2);
        let spec = PhiSpec { upper: vec![r(1, 1), r(3, 7)], lower: vec![r(1, 5)], q: q.clone(), z: q.clone(), n: 0 };
        assert_eq!(phi_terminating(&spec).unwrap(), r(1, 1));
        // 2φ1(q^{-1}, q^{-x}; q^{-N}; q, q) at x = 0.
        let spec = PhiSpec { upper: vec![r(2, 1), r(1, 1)], lower: vec![r(8, 1)], q: q.clone(), z: q, n: 1 };
        assert_eq!(phi_terminating(&spec).unwrap(), r(1, 1));
    }

    #[test]
    fn phi_three_two_against_direct_sum() {
        // 3φ2(q^{-2}, q^{-1}, c q^{1-N}; bcq, q^{-N}; q, q), q=1/2, b=1/3, c=1/5, N=3.
        let q = r(1, 2);
        let (b, c) = (r(1, 3), r(1, 5));
        let up = vec![r(4, 1), r(2, 1), c.clone() * r(1, 4)];
        let lo = vec![b.clone() * &c * &q, r(8, 1)];
        let spec = PhiSpec { upper: up.clone(), lower: lo.clone(), q: q.clone(), z: q.clone(), n: 2 };
        let mut want = r(0, 1);
        for k in 0..=2usize {
            let t =
                qpoch_multi(&up, &q, k) / (qpoch_multi(&lo, &q, k) * qpoch(&q, &q, k)) * int_pow(&q, k as i64).unwrap();
            want += t;
        }
        assert_eq!(phi_terminating(&spec).unwrap(), want);
        let cleared = phi_cleared(2, &up[1..], &lo, &q, &q).unwrap();
        assert_eq!(cleared, want * qpoch_multi(&lo, &q, 2));
    }

    #[test]
    fn phi_errors() {
        let q = r(1, 2);
        let spec = PhiSpec { upper: vec![r(3, 1)], lower: vec![], q: q.clone(), z: q.clone(), n: 2 };
        assert!(matches!(phi_terminating(&spec), Err(Error::NotTerminating(_))));
        // Lower parameter q^{-1} makes (1 - l q) vanish at k = 1.
        let spec = PhiSpec { upper: vec![r(8, 1), r(1, 7)], lower: vec![r(2, 1)], q: q.clone(), z: q, n: 3 };
        match phi_terminating(&spec) {
            Err(Error::ZeroDenominator(m)) => assert!(m.contains("lower parameter 1") && m.contains("k = 1"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cleared_handles_structural_zero() {
        // Lower q^{-N} with N < n: the prefactor kills the value.
        let q = r(1, 3);
        let v = phi_cleared(3, &[r(9, 1)], &[r(9, 1)], &q, &q).unwrap();
        assert_eq!(v, r(0, 1));
    }

    #[test]
    fn float_termination_tolerance() {
        let p = 128;
        let q = Float::with_val(p, 0.25);
        let qn = Float::with_val(p, 16) * (Float::with_val(p, 1) + Float::with_val(p, 1e-30));
        let spec = PhiSpec { upper: vec![qn], lower: vec![Float::with_val(p, 0.1)], q: q.clone(), z: q, n: 2 };
        assert!(phi_terminating(&spec).is_ok());
    }
}
