//! Single-variable families: polynomials, weights and norms.
//!
//! Each polynomial is described by a [`Series`]: the prefactor
//! `∏(l_j;q)_n` times a terminating series, evaluated in cleared form so a
//! lower parameter `q^{-N}` with `N < n` yields 0 instead of 0/0.

use crate::qseries::{phi_cleared, qpoch, qpoch_inf};
use crate::scalar::{int_pow, Num, RootParam};
use crate::{Error, Result};

/// A lower series parameter. Structural ones (such as `q^{-N}`) are allowed
/// to vanish inside the sum; they only ever occur in the cleared prefactor.
#[derive(Clone, Debug)]
pub struct Lower<T> {
    pub value: T,
    pub label: &'static str,
    pub structural: bool,
}

impl<T> Lower<T> {
    pub fn free(value: T, label: &'static str) -> Self {
        Self { value, label, structural: false }
    }

    pub fn structural(value: T, label: &'static str) -> Self {
        Self { value, label, structural: true }
    }
}

/// The base of a series: a q-series, or an ordinary hypergeometric series at
/// unit argument (rising factorials instead of q-Pochhammers).
#[derive(Clone, Debug)]
pub enum Base<T> {
    Q { q: T, z: T },
    Classical,
}

/// `scale · ∏_j (l_j)_n · φ(q^{-n}, upper; lower; q, z)`, or without the
/// lower-parameter prefactor when `normalized` is set.
#[derive(Clone, Debug)]
pub struct Series<T> {
    pub n: usize,
    pub upper: Vec<T>,
    pub lower: Vec<Lower<T>>,
    pub base: Base<T>,
    pub scale: T,
    pub normalized: bool,
}

impl<T: Num> Series<T> {
    pub fn eval(&self) -> Result<T> {
        let lows: Vec<T> = self.lower.iter().map(|l| l.value.clone()).collect();
        let mut v = match &self.base {
            Base::Q { q, z } => phi_cleared(self.n, &self.upper, &lows, q, z)?,
            Base::Classical => classical_cleared(self.n, &self.upper, &lows, &self.scale)?,
        };
        if self.normalized {
            let mut f = Frac::new(&self.scale);
            for l in &self.lower {
                let p = match &self.base {
                    Base::Q { q, .. } => qpoch(&l.value, q, self.n),
                    Base::Classical => rising(&l.value, self.n),
                };
                f.div(p, l.label);
            }
            v *= &f.finish()?;
        }
        Ok(v * &self.scale)
    }

    /// Records every non-structural lower parameter whose factor vanishes
    /// inside the summation range.
    pub fn scan(&self, sink: &mut Vec<String>) {
        for l in self.lower.iter().filter(|l| !l.structural) {
            for k in 0..self.n {
                let zero = match &self.base {
                    Base::Q { q, .. } => {
                        let qk = int_pow(q, k as i64).expect("nonnegative power");
                        (l.value.one_like() - &(l.value.clone() * &qk)).is_zero()
                    }
                    Base::Classical => (l.value.clone() + &l.value.lift(k as i64)).is_zero(),
                };
                if zero {
                    sink.push(format!("series lower parameter {} vanishes at k = {k} (n = {})", l.label, self.n));
                    break;
                }
            }
        }
    }
}

/// Rising factorial `(a)_n = a(a+1)...(a+n-1)`.
pub fn rising<T: Num>(a: &T, n: usize) -> T {
    let mut p = a.one_like();
    for k in 0..n {
        p *= &(a.clone() + &a.lift(k as i64));
    }
    p
}

/// `Σ_k (-n, upper)_k / k! · ∏_j (l_j + k)_{n-k}`: the classical analogue of
/// [`phi_cleared`] at unit argument.
fn classical_cleared<T: Num>(n: usize, upper: &[T], lower: &[T], like: &T) -> Result<T> {
    let one = like.one_like();
    let mut suffix = vec![one.clone(); n + 1];
    for k in (0..n).rev() {
        let mut f = suffix[k + 1].clone();
        for l in lower {
            f *= &(l.clone() + &like.lift(k as i64));
        }
        suffix[k] = f;
    }
    let mut fwd = one;
    let mut sum = suffix[0].clone();
    for k in 0..n {
        let kk = like.lift(k as i64);
        let mut num = like.lift(k as i64 - n as i64);
        for u in upper {
            num *= &(u.clone() + &kk);
        }
        fwd = (fwd * &num).try_div(&like.lift(k as i64 + 1))?;
        if fwd.is_zero() {
            break;
        }
        sum += &(fwd.clone() * &suffix[k + 1]);
    }
    Ok(sum)
}

/// Product/quotient accumulator that names every vanishing denominator.
#[derive(Clone, Debug)]
pub struct Frac<T> {
    num: T,
    den: T,
    zeros: Vec<String>,
}

impl<T: Num> Frac<T> {
    pub fn new(like: &T) -> Self {
        Self { num: like.one_like(), den: like.one_like(), zeros: Vec::new() }
    }

    pub fn mul(&mut self, v: T) -> &mut Self {
        self.num *= &v;
        self
    }

    pub fn div(&mut self, v: T, label: &str) -> &mut Self {
        if v.is_zero() {
            self.zeros.push(label.to_string());
        } else {
            self.den *= &v;
        }
        self
    }

    /// Multiplies by `base^k`, dividing when `k < 0`.
    pub fn pow(&mut self, base: &T, k: i64, label: &str) -> &mut Self {
        if k >= 0 {
            self.mul(int_pow(base, k).expect("nonnegative power"))
        } else {
            self.div(int_pow(base, -k).expect("nonnegative power"), label)
        }
    }

    pub fn zeros(&self) -> &[String] {
        &self.zeros
    }

    pub fn finish(self) -> Result<T> {
        if !self.zeros.is_empty() {
            return Err(Error::ZeroDenominator(self.zeros.join("; ")));
        }
        self.num.try_div(&self.den)
    }
}

/// Converts a possibly negative lattice offset into a Pochhammer length.
pub(crate) fn len(k: i64, what: &str) -> Result<usize> {
    usize::try_from(k).map_err(|_| Error::OutOfRange(format!("{what} = {k} is negative")))
}

/// `(-1)^k q^{k(k-1)/2}`.
pub(crate) fn sign_qbinom<T: Num>(q: &T, k: i64) -> Result<T> {
    let v = int_pow(q, k * (k - 1) / 2)?;
    Ok(if k % 2 != 0 { -v } else { v })
}

/// Precision-matched tolerance for infinite products.
pub(crate) fn inf_tol<T: Num>(like: &T) -> Result<T> {
    let bits = like.precision().unwrap_or(256);
    int_pow(&like.lift(2), -(i64::from(bits) + 16))
}

/// Which single-variable family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId1V {
    RacahClassical,
    QRacah,
    DualQHahn,
    DualQHahnStar,
    QHahn,
    QKrawtchouk,
    QMeixner,
    QCharlier,
}

/// A single-variable family with its parameters. Every parameter entering a
/// half power is a [`RootParam`].
#[derive(Clone, Debug)]
pub enum Family1V<T> {
    RacahClassical { alpha: T, beta: T, gamma: T, big_n: usize },
    QRacah { q: RootParam<T>, a: RootParam<T>, b: RootParam<T>, c: RootParam<T>, big_n: usize },
    DualQHahn { q: RootParam<T>, b: RootParam<T>, c: RootParam<T>, big_n: usize },
    DualQHahnStar { q: RootParam<T>, b: RootParam<T>, c: RootParam<T>, big_n: usize },
    QHahn { q: RootParam<T>, a: RootParam<T>, b: RootParam<T>, big_n: usize },
    QKrawtchouk { q: RootParam<T>, b: RootParam<T>, big_n: usize },
    QMeixner { q: RootParam<T>, a: RootParam<T>, c: RootParam<T> },
    QCharlier { q: RootParam<T>, a: RootParam<T> },
}

impl<T: Num> Family1V<T> {
    pub fn id(&self) -> FamilyId1V {
        match self {
            Family1V::RacahClassical { .. } => FamilyId1V::RacahClassical,
            Family1V::QRacah { .. } => FamilyId1V::QRacah,
            Family1V::DualQHahn { .. } => FamilyId1V::DualQHahn,
            Family1V::DualQHahnStar { .. } => FamilyId1V::DualQHahnStar,
            Family1V::QHahn { .. } => FamilyId1V::QHahn,
            Family1V::QKrawtchouk { .. } => FamilyId1V::QKrawtchouk,
            Family1V::QMeixner { .. } => FamilyId1V::QMeixner,
            Family1V::QCharlier { .. } => FamilyId1V::QCharlier,
        }
    }

    /// `N`, or `None` for the infinite-support families.
    pub fn big_n(&self) -> Option<usize> {
        match self {
            Family1V::RacahClassical { big_n, .. }
            | Family1V::QRacah { big_n, .. }
            | Family1V::DualQHahn { big_n, .. }
            | Family1V::DualQHahnStar { big_n, .. }
            | Family1V::QHahn { big_n, .. }
            | Family1V::QKrawtchouk { big_n, .. } => Some(*big_n),
            Family1V::QMeixner { .. } | Family1V::QCharlier { .. } => None,
        }
    }

    fn check_range(&self, v: usize, what: &str) -> Result<()> {
        match self.big_n() {
            Some(n) if v > n => Err(Error::OutOfRange(format!("{what} = {v} exceeds N = {n}"))),
            _ => Ok(()),
        }
    }
}

// ---- series builders shared with the multivariable module ----

/// q-Racah `r_n(x; a, b, c, N)` with `x` and `N` possibly negative offsets.
pub fn qracah_series<T: Num>(
    n: usize,
    x: i64,
    q: &RootParam<T>,
    a: &RootParam<T>,
    b: &RootParam<T>,
    c: &RootParam<T>,
    big_n: i64,
) -> Result<Series<T>> {
    let qv = q.value();
    let (av, bv, cv) = (a.value(), b.value(), c.value());
    let n_i = n as i64;
    let upper =
        vec![av.clone() * &bv * &int_pow(&qv, n_i + 1)?, int_pow(&qv, -x)?, cv.clone() * &int_pow(&qv, x - big_n)?];
    let lower = vec![
        Lower::free(av * &qv, "aq"),
        Lower::free(bv * &cv * &qv, "bcq"),
        Lower::structural(int_pow(&qv, -big_n)?, "q^-N"),
    ];
    let scale = int_pow(&q.half_pow(big_n)?.try_div(c.root())?, n_i)?;
    Ok(Series { n, upper, lower, base: Base::Q { q: qv.clone(), z: qv }, scale, normalized: false })
}

/// Dual q-Hahn `d_n(x; b, c, N)`, or `d*_n` when `star` is set.
pub fn dual_series<T: Num>(
    n: usize,
    x: i64,
    q: &RootParam<T>,
    b: &RootParam<T>,
    c: &RootParam<T>,
    big_n: i64,
    star: bool,
) -> Result<Series<T>> {
    let qv = q.value();
    let (bv, cv) = (b.value(), c.value());
    let n_i = n as i64;
    let upper = vec![int_pow(&qv, -x)?, cv.clone() * &int_pow(&qv, x - big_n)?];
    let lower = vec![Lower::free(bv.clone() * &cv * &qv, "bcq"), Lower::structural(int_pow(&qv, -big_n)?, "q^-N")];
    let mut scale = int_pow(&q.half_pow(big_n)?.try_div(c.root())?, n_i)?;
    let z = if star {
        scale *= &sign_qbinom(&qv, n_i)?;
        bv * &int_pow(&qv, n_i + 1)?
    } else {
        qv.clone()
    };
    Ok(Series { n, upper, lower, base: Base::Q { q: qv, z }, scale, normalized: false })
}

/// q-Hahn `h_n(x; a, b, N)`.
pub fn qhahn_series<T: Num>(n: usize, x: i64, q: &T, a: &T, b: &T, big_n: i64) -> Result<Series<T>> {
    let upper = vec![a.clone() * b * &int_pow(q, n as i64 + 1)?, int_pow(q, -x)?];
    let lower = vec![Lower::free(a.clone() * q, "aq"), Lower::structural(int_pow(q, -big_n)?, "q^-N")];
    Ok(Series { n, upper, lower, base: Base::Q { q: q.clone(), z: q.clone() }, scale: q.one_like(), normalized: false })
}

/// q-Krawtchouk `k_n(x; b, N)`.
pub fn qkrawtchouk_series<T: Num>(n: usize, x: i64, q: &T, b: &T, big_n: i64) -> Result<Series<T>> {
    let n_i = n as i64;
    Ok(Series {
        n,
        upper: vec![int_pow(q, -x)?],
        lower: vec![Lower::structural(int_pow(q, -big_n)?, "q^-N")],
        base: Base::Q { q: q.clone(), z: b.clone() * &int_pow(q, n_i + 1)? },
        scale: sign_qbinom(q, n_i)?,
        normalized: false,
    })
}

/// `(aq;q)_n M_n(q^{-x}; a, c)` for the multivariable q-Meixner factors,
/// where `aq` may be a structural `q^{-j}`; `aq = None` gives the q-Charlier
/// case (lower parameter 0).
pub fn meixner_cleared_series<T: Num>(n: usize, x: i64, q: &T, aq: Option<(T, bool)>, c: &T) -> Result<Series<T>> {
    let z = -(int_pow(q, n as i64 + 1)?.try_div(c)?);
    let lower = match aq {
        Some((v, structural)) => vec![Lower { value: v, label: "aq", structural }],
        None => vec![Lower::free(q.zero_like(), "0")],
    };
    Ok(Series {
        n,
        upper: vec![int_pow(q, -x)?],
        lower,
        base: Base::Q { q: q.clone(), z },
        scale: q.one_like(),
        normalized: false,
    })
}

/// Classical Racah `r_n(x; α, β, γ, N)`.
pub fn racah_classical_series<T: Num>(n: usize, x: i64, alpha: &T, beta: &T, gamma: &T, big_n: i64) -> Series<T> {
    let n_i = alpha.lift(n as i64);
    let one = alpha.one_like();
    let upper = vec![n_i + alpha + beta + &one, alpha.lift(-x), alpha.lift(x - big_n) + gamma];
    let lower = vec![
        Lower::free(alpha.clone() + &one, "alpha+1"),
        Lower::free(beta.clone() + gamma + &one, "beta+gamma+1"),
        Lower::structural(alpha.lift(-big_n), "-N"),
    ];
    Series { n, upper, lower, base: Base::Classical, scale: one, normalized: false }
}

/// The series describing `P_n(x)` for a single-variable family.
pub fn series_1v<T: Num>(f: &Family1V<T>, n: usize, x: i64) -> Result<Series<T>> {
    match f {
        Family1V::RacahClassical { alpha, beta, gamma, big_n } => {
            Ok(racah_classical_series(n, x, alpha, beta, gamma, *big_n as i64))
        }
        Family1V::QRacah { q, a, b, c, big_n } => qracah_series(n, x, q, a, b, c, *big_n as i64),
        Family1V::DualQHahn { q, b, c, big_n } => dual_series(n, x, q, b, c, *big_n as i64, false),
        Family1V::DualQHahnStar { q, b, c, big_n } => dual_series(n, x, q, b, c, *big_n as i64, true),
        Family1V::QHahn { q, a, b, big_n } => qhahn_series(n, x, &q.value(), &a.value(), &b.value(), *big_n as i64),
        Family1V::QKrawtchouk { q, b, big_n } => qkrawtchouk_series(n, x, &q.value(), &b.value(), *big_n as i64),
        Family1V::QMeixner { q, a, c } => {
            let qv = q.value();
            let mut s = meixner_cleared_series(n, x, &qv, Some((a.value() * &qv, false)), &c.value())?;
            s.normalized = true;
            Ok(s)
        }
        Family1V::QCharlier { q, a } => {
            let mut s = meixner_cleared_series(n, x, &q.value(), None, &a.value())?;
            s.normalized = true;
            Ok(s)
        }
    }
}

/// `P_n(x)` for a single-variable family.
pub fn eval_poly_1v<T: Num>(f: &Family1V<T>, n: usize, x: usize) -> Result<T> {
    f.check_range(n, "n")?;
    f.check_range(x, "x")?;
    series_1v(f, n, x as i64)?.eval()
}

fn weight_frac<T: Num>(f: &Family1V<T>, x: usize) -> Result<Frac<T>> {
    let xi = x as i64;
    Ok(match f {
        Family1V::RacahClassical { alpha, beta, gamma, big_n } => {
            let one = alpha.one_like();
            let nn = alpha.lift(*big_n as i64);
            let gmn = gamma.clone() - &nn;
            let mut w = Frac::new(alpha);
            w.mul(gmn.clone() + &alpha.lift(2 * xi)).div(gmn.clone(), "gamma-N");
            w.mul(rising(&gmn, x) * &rising(&(alpha.clone() + &one), x));
            w.mul(rising(&(beta.clone() + gamma + &one), x) * &rising(&(-nn.clone()), x));
            w.div(rising(&one, x), "x!");
            w.div(rising(&(gmn.clone() - alpha), x), "(gamma-alpha-N)_x");
            w.div(rising(&(-(beta.clone() + &nn)), x), "(-beta-N)_x");
            w.div(rising(&(gamma.clone() + &one), x), "(gamma+1)_x");
            w
        }
        Family1V::QRacah { q, a, b, c, big_n } => {
            let qv = q.value();
            let (av, bv, cv) = (a.value(), b.value(), c.value());
            let one = qv.one_like();
            let qmn = int_pow(&qv, -(*big_n as i64))?;
            let mut w = Frac::new(&qv);
            w.mul(one.clone() - &(cv.clone() * &int_pow(&qv, 2 * xi - *big_n as i64)?));
            w.div(one.clone() - &(cv.clone() * &qmn), "1-cq^-N");
            for v in [cv.clone() * &qmn, av.clone() * &qv, bv.clone() * &cv * &qv, qmn.clone()] {
                w.mul(qpoch(&v, &qv, x));
            }
            w.div(qpoch(&qv, &qv, x), "(q;q)_x");
            w.div(qpoch(&(cv.clone() * &qmn).try_div(&av)?, &qv, x), "(cq^-N/a;q)_x");
            w.div(qpoch(&qmn.try_div(&bv)?, &qv, x), "(q^-N/b;q)_x");
            w.div(qpoch(&(cv * &qv), &qv, x), "(cq;q)_x");
            w.pow(&(av * &bv * &qv), -xi, "(abq)^x");
            w
        }
        Family1V::DualQHahn { q, b, c, big_n } | Family1V::DualQHahnStar { q, b, c, big_n } => {
            let qv = q.value();
            let (bv, cv) = (b.value(), c.value());
            let one = qv.one_like();
            let nn = *big_n as i64;
            let qmn = int_pow(&qv, -nn)?;
            let mut w = Frac::new(&qv);
            w.mul(one.clone() - &(cv.clone() * &int_pow(&qv, 2 * xi - nn)?));
            w.div(one.clone() - &(cv.clone() * &qmn), "1-cq^-N");
            for v in [cv.clone() * &qmn, bv.clone() * &cv * &qv, qmn.clone()] {
                w.mul(qpoch(&v, &qv, x));
            }
            w.div(qpoch(&qv, &qv, x), "(q;q)_x");
            w.div(qpoch(&qmn.try_div(&bv)?, &qv, x), "(q^-N/b;q)_x");
            w.div(qpoch(&(cv.clone() * &qv), &qv, x), "(cq;q)_x");
            if matches!(f, Family1V::DualQHahn { .. }) {
                w.pow(&(bv * &qv), -xi, "(bq)^x");
                w.pow(&(-(cv * &qmn)), -xi, "(-cq^-N)^x");
                w.pow(&qv, -xi * (xi - 1) / 2, "q^binom(x,2)");
            } else {
                w.pow(&(-bv), -xi, "(-b)^x");
                w.mul(int_pow(&qv, xi * (xi - 1) / 2)?);
            }
            w
        }
        Family1V::QHahn { q, a, b, big_n } => {
            let qv = q.value();
            let (av, bv) = (a.value(), b.value());
            let qmn = int_pow(&qv, -(*big_n as i64))?;
            let mut w = Frac::new(&qv);
            w.mul(qpoch(&(av.clone() * &qv), &qv, x) * &qpoch(&qmn, &qv, x));
            w.div(qpoch(&qv, &qv, x), "(q;q)_x");
            w.div(qpoch(&qmn.try_div(&bv)?, &qv, x), "(q^-N/b;q)_x");
            w.pow(&(av * &bv * &qv), -xi, "(abq)^x");
            w
        }
        Family1V::QKrawtchouk { q, b, big_n } => {
            let qv = q.value();
            let bv = b.value();
            let qmn = int_pow(&qv, -(*big_n as i64))?;
            let mut w = Frac::new(&qv);
            w.mul(qpoch(&qmn, &qv, x));
            w.div(qpoch(&qv, &qv, x), "(q;q)_x");
            w.div(qpoch(&qmn.try_div(&bv)?, &qv, x), "(q^-N/b;q)_x");
            w.pow(&(-bv), -xi, "(-b)^x");
            w.mul(int_pow(&qv, xi * (xi - 1) / 2)?);
            w
        }
        Family1V::QMeixner { q, a, c } => {
            let qv = q.value();
            let (av, cv) = (a.value(), c.value());
            let mut w = Frac::new(&qv);
            w.mul(qpoch(&(av.clone() * &qv), &qv, x));
            w.div(qpoch(&qv, &qv, x), "(q;q)_x");
            w.div(qpoch(&(-(av * &cv * &qv)), &qv, x), "(-acq;q)_x");
            w.mul(int_pow(&cv, xi)? * &int_pow(&qv, xi * (xi - 1) / 2)?);
            w
        }
        Family1V::QCharlier { q, a } => {
            let qv = q.value();
            let mut w = Frac::new(&qv);
            w.mul(int_pow(&a.value(), xi)? * &int_pow(&qv, xi * (xi - 1) / 2)?);
            w.div(qpoch(&qv, &qv, x), "(q;q)_x");
            w
        }
    })
}

/// The weight at `x`.
pub fn eval_weight_1v<T: Num>(f: &Family1V<T>, x: usize) -> Result<T> {
    f.check_range(x, "x")?;
    weight_frac(f, x)?.finish()
}

fn norm_frac<T: Num>(f: &Family1V<T>, n: usize) -> Result<Frac<T>> {
    let ni = n as i64;
    Ok(match f {
        Family1V::RacahClassical { alpha, beta, gamma, big_n } => {
            let one = alpha.one_like();
            let nn = *big_n;
            let ab1 = alpha.clone() + beta + &one;
            let amg1 = alpha.clone() - gamma + &one;
            let mut l = Frac::new(alpha);
            l.mul(rising(&(ab1.clone() + &one), nn) * &rising(&(-gamma.clone()), nn));
            l.div(rising(&(beta.clone() + &one), nn), "(beta+1)_N");
            l.div(rising(&amg1, nn), "(alpha-gamma+1)_N");
            l.mul(rising(&amg1, n) * &rising(&(beta.clone() + gamma + &one), n));
            l.mul(rising(&(ab1.clone() + &one + &alpha.lift(nn as i64)), n));
            l.mul(ab1.clone() * &rising(&one, n) * &rising(&(alpha.clone() + &one), n));
            l.mul(rising(&(beta.clone() + &one), n) * &rising(&alpha.lift(-(nn as i64)), n));
            l.div(ab1.clone() + &alpha.lift(2 * ni), "alpha+beta+1+2n");
            l.div(rising(&ab1, n), "(alpha+beta+1)_n");
            l
        }
        Family1V::QRacah { q, a, b, c, big_n } => {
            let qv = q.value();
            let (av, bv, cv) = (a.value(), b.value(), c.value());
            let one = qv.one_like();
            let nn = *big_n;
            let abq = av.clone() * &bv * &qv;
            let aq_c = (av.clone() * &qv).try_div(&cv)?;
            let mut l = Frac::new(&qv);
            l.mul(qpoch(&cv.recip()?, &qv, nn) * &qpoch(&(abq.clone() * &qv), &qv, nn));
            l.div(qpoch(&aq_c, &qv, nn), "(aq/c;q)_N");
            l.div(qpoch(&(bv.clone() * &qv), &qv, nn), "(bq;q)_N");
            for v in [qv.clone(), av * &qv, bv.clone() * &qv, aq_c, bv * &cv * &qv, int_pow(&qv, -(nn as i64))?] {
                l.mul(qpoch(&v, &qv, n));
            }
            l.mul(one.clone() - &abq);
            l.div(one - &(abq.clone() * &int_pow(&qv, 2 * ni)?), "1-abq^(2n+1)");
            l.mul(qpoch(&(abq.clone() * &int_pow(&qv, nn as i64 + 1)?), &qv, n));
            l.div(qpoch(&abq, &qv, n), "(abq;q)_n");
            l
        }
        Family1V::DualQHahn { q, b, c, big_n } | Family1V::DualQHahnStar { q, b, c, big_n } => {
            let qv = q.value();
            let (bv, cv) = (b.value(), c.value());
            let nn = *big_n;
            let mut l = Frac::new(&qv);
            l.mul(qpoch(&cv.recip()?, &qv, nn));
            l.div(qpoch(&(bv.clone() * &qv), &qv, nn), "(bq;q)_N");
            for v in [qv.clone(), bv.clone() * &qv, bv.clone() * &cv * &qv, int_pow(&qv, -(nn as i64))?] {
                l.mul(qpoch(&v, &qv, n));
            }
            if matches!(f, Family1V::DualQHahnStar { .. }) {
                l.mul(int_pow(&(bv * &cv * &qv), nn as i64)?);
                l.pow(&cv, -ni, "c^n");
                l.pow(&qv, ni * ni + nn as i64 * ni - 2 * ni, "q^(n^2+Nn-2n)");
            }
            l
        }
        Family1V::QHahn { q, a, b, big_n } => {
            let qv = q.value();
            let (av, bv) = (a.value(), b.value());
            let one = qv.one_like();
            let nn = *big_n;
            let abq = av.clone() * &bv * &qv;
            let mut l = Frac::new(&qv);
            l.mul(qpoch(&(abq.clone() * &qv), &qv, nn));
            l.pow(&(av.clone() * &qv), -(nn as i64), "(aq)^N");
            l.div(qpoch(&(bv.clone() * &qv), &qv, nn), "(bq;q)_N");
            for v in [qv.clone(), av.clone() * &qv, bv * &qv, int_pow(&qv, -(nn as i64))?] {
                l.mul(qpoch(&v, &qv, n));
            }
            l.mul(int_pow(&(-(av * &int_pow(&qv, 1 - nn as i64)?)), ni)?);
            l.mul(int_pow(&qv, ni * (ni - 1) / 2)?);
            l.mul(one.clone() - &abq);
            l.div(one - &(abq.clone() * &int_pow(&qv, 2 * ni)?), "1-abq^(2n+1)");
            l.mul(qpoch(&(abq.clone() * &int_pow(&qv, nn as i64 + 1)?), &qv, n));
            l.div(qpoch(&abq, &qv, n), "(abq;q)_n");
            l
        }
        Family1V::QKrawtchouk { q, b, big_n } => {
            let qv = q.value();
            let bv = b.value();
            let nn = *big_n as i64;
            let mut l = Frac::new(&qv);
            l.mul(int_pow(&(-(bv.clone() * &qv)), nn)? * &int_pow(&qv, nn * (nn - 1) / 2)?);
            l.div(qpoch(&(bv.clone() * &qv), &qv, nn as usize), "(bq;q)_N");
            for v in [qv.clone(), bv * &qv, int_pow(&qv, -nn)?] {
                l.mul(qpoch(&v, &qv, n));
            }
            l.pow(&qv, ni * ni - 2 * ni, "q^(n^2-2n)");
            l
        }
        Family1V::QMeixner { q, a, c } => {
            let qv = q.value();
            let (av, cv) = (a.value(), c.value());
            let tol = inf_tol(&qv)?;
            let mut l = Frac::new(&qv);
            l.mul(qpoch_inf(&(-cv.clone()), &qv, &tol)?);
            l.div(qpoch_inf(&(-(av.clone() * &cv * &qv)), &qv, &tol)?, "(-acq;q)_inf");
            l.mul(qpoch(&qv, &qv, n) * &qpoch(&(-(qv.try_div(&cv)?)), &qv, n));
            l.div(qpoch(&(av * &qv), &qv, n), "(aq;q)_n");
            l.pow(&qv, -ni, "q^n");
            l
        }
        Family1V::QCharlier { q, a } => {
            let qv = q.value();
            let av = a.value();
            let tol = inf_tol(&qv)?;
            let mut l = Frac::new(&qv);
            l.mul(qpoch_inf(&(-av.clone()), &qv, &tol)?);
            l.mul(qpoch(&qv, &qv, n) * &qpoch(&(-(qv.try_div(&av)?)), &qv, n));
            l.pow(&qv, -ni, "q^n");
            l
        }
    })
}

/// The squared norm `λ_n`.
pub fn eval_norm_1v<T: Num>(f: &Family1V<T>, n: usize) -> Result<T> {
    f.check_range(n, "n")?;
    norm_frac(f, n)?.finish()
}

/// Every vanishing denominator met by the polynomial, weight and norm
/// formulas for `0 <= n, x <= range`. Empty means the parameters are usable.
pub fn validate_params<T: Num>(f: &Family1V<T>, range: usize) -> Vec<String> {
    let top = f.big_n().map_or(range, |n| n.min(range));
    let mut out = Vec::new();
    for n in 0..=top {
        for x in 0..=top {
            match series_1v(f, n, x as i64) {
                Ok(s) => s.scan(&mut out),
                Err(e) => out.push(format!("polynomial n = {n}, x = {x}: {e}")),
            }
        }
        match norm_frac(f, n) {
            Ok(l) => out.extend(l.zeros().iter().map(|z| format!("norm n = {n}: {z}"))),
            Err(e) => out.push(format!("norm n = {n}: {e}")),
        }
    }
    for x in 0..=top {
        match weight_frac(f, x) {
            Ok(w) => out.extend(w.zeros().iter().map(|z| format!("weight x = {x}: {z}"))),
            Err(e) => out.push(format!("weight x = {x}: {e}")),
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{phi_terminating, qpoch_multi, PhiSpec};
    use rug::{Float, Rational};

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn rp(n: i64, d: i64) -> RootParam<Rational> {
        RootParam::new(r(n, d))
    }

    fn qracah() -> Family1V<Rational> {
        // q = 1/4, a = 1/9, b = 1/4, c = 1/25, N = 2
        Family1V::QRacah { q: rp(1, 2), a: rp(1, 3), b: rp(1, 2), c: rp(1, 5), big_n: 2 }
    }

    fn gram_1v(f: &Family1V<Rational>, n_max: usize) -> bool {
        for n in 0..=n_max {
            for m in 0..=n_max {
                let mut g = r(0, 1);
                for x in 0..=n_max {
                    g +=
                        eval_poly_1v(f, n, x).unwrap() * eval_poly_1v(f, m, x).unwrap() * eval_weight_1v(f, x).unwrap();
                }
                let want = if n == m { eval_norm_1v(f, n).unwrap() } else { r(0, 1) };
                if g != want {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn qracah_degree_zero_and_origin() {
        let f = qracah();
        for x in 0..=2 {
            assert_eq!(eval_poly_1v(&f, 0, x).unwrap(), r(1, 1));
        }
        // r_n(0) = (aq, bcq, q^-N; q)_n (q^N/c)^{n/2}
        let q = r(1, 4);
        let want = qpoch_multi(&[r(1, 36), r(1, 400), r(16, 1)], &q, 2) * r(5, 4).square();
        assert_eq!(eval_poly_1v(&f, 2, 0).unwrap(), want);
    }

    #[test]
    fn qracah_value_against_direct_sum() {
        // r_1(1) by direct summation of the defining 4φ3.
        let q = r(1, 4);
        let (a, b, c) = (r(1, 9), r(1, 4), r(1, 25));
        let spec = PhiSpec {
            upper: vec![r(4, 1), a.clone() * &b * r(1, 16), r(4, 1), c.clone() * r(4, 1)],
            lower: vec![a.clone() * &q, b.clone() * &c * &q, r(16, 1)],
            q: q.clone(),
            z: q.clone(),
            n: 1,
        };
        let pre = qpoch_multi(&[a * &q, b * &c * &q, r(16, 1)], &q, 1) * r(5, 4);
        let want = pre * phi_terminating(&spec).unwrap();
        assert_eq!(eval_poly_1v(&qracah(), 1, 1).unwrap(), want);
    }

    #[test]
    fn qracah_weight_and_norm_edges() {
        let f = qracah();
        assert_eq!(eval_weight_1v(&f, 0).unwrap(), r(1, 1));
        let mut mass = r(0, 1);
        for x in 0..=2 {
            mass += eval_weight_1v(&f, x).unwrap();
        }
        assert_eq!(mass, eval_norm_1v(&f, 0).unwrap());
        // λ_0 = (1/c, abq^2;q)_N / (aq/c, bq;q)_N
        let q = r(1, 4);
        let want = qpoch_multi(&[r(25, 1), r(1, 9 * 4 * 16)], &q, 2) / qpoch_multi(&[r(25, 36), r(1, 16)], &q, 2);
        assert_eq!(eval_norm_1v(&f, 0).unwrap(), want);
    }

    #[test]
    fn exact_orthogonality_of_finite_families() {
        let fams: Vec<Family1V<Rational>> = vec![
            Family1V::QRacah { q: rp(1, 2), a: rp(1, 3), b: rp(2, 5), c: rp(1, 7), big_n: 4 },
            Family1V::DualQHahn { q: rp(1, 2), b: rp(2, 5), c: rp(1, 3), big_n: 4 },
            Family1V::DualQHahnStar { q: rp(1, 2), b: rp(2, 5), c: rp(1, 3), big_n: 4 },
            Family1V::QHahn { q: rp(1, 2), a: rp(1, 3), b: rp(2, 5), big_n: 4 },
            Family1V::QKrawtchouk { q: rp(1, 2), b: rp(2, 5), big_n: 4 },
            Family1V::RacahClassical { alpha: r(7, 10), beta: r(13, 10), gamma: r(23, 10), big_n: 4 },
        ];
        for f in &fams {
            assert!(validate_params(f, 4).is_empty(), "{:?}", f.id());
            assert!(gram_1v(f, 4), "{:?}", f.id());
        }
    }

    #[test]
    fn infinite_families_orthogonal_in_float() {
        let p = 256;
        let fl = |v: f64| RootParam::new(Float::with_val(p, v).sqrt());
        let fams = vec![
            Family1V::QMeixner { q: fl(0.5), a: fl(0.3), c: fl(0.2) },
            Family1V::QCharlier { q: fl(0.5), a: fl(0.4) },
        ];
        for f in &fams {
            for n in 0..3 {
                for m in 0..3 {
                    let mut g = Float::with_val(p, 0);
                    for x in 0..160 {
                        g += eval_poly_1v(f, n, x).unwrap()
                            * eval_poly_1v(f, m, x).unwrap()
                            * eval_weight_1v(f, x).unwrap();
                    }
                    let want = if n == m { eval_norm_1v(f, n).unwrap() } else { Float::with_val(p, 0) };
                    let err = Float::with_val(p, &g - &want).abs();
                    assert!(err < 1e-60, "{:?} {n} {m} {err}", f.id());
                }
            }
        }
        let f = &fams[0];
        assert_eq!(eval_weight_1v(f, 0).unwrap(), Float::with_val(p, 1));
    }

    #[test]
    fn meixner_norm_at_zero() {
        let p = 256;
        let q = Float::with_val(p, 0.5);
        let a = Float::with_val(p, 0.3);
        let c = Float::with_val(p, 0.2);
        let f = Family1V::QMeixner {
            q: RootParam::from_value(&q).unwrap(),
            a: RootParam::from_value(&a).unwrap(),
            c: RootParam::from_value(&c).unwrap(),
        };
        let tol = Float::with_val(p, Float::parse("1e-75").unwrap());
        let want = qpoch_inf(&(-c.clone()), &q, &tol).unwrap() / qpoch_inf(&(-(a * &c * &q)), &q, &tol).unwrap();
        let got = eval_norm_1v(&f, 0).unwrap();
        assert!(Float::with_val(p, &got - &want).abs() < 1e-70);
    }

    #[test]
    fn validation_finds_constructed_zeros() {
        // q-Hahn with a = q^{-2}: (aq;q)_k vanishes at k = 1.
        let f = Family1V::QHahn { q: rp(1, 2), a: rp(4, 1), b: rp(1, 3), big_n: 3 };
        let v = validate_params(&f, 3);
        assert!(v.iter().any(|s| s.contains("aq vanishes at k = 1")), "{v:?}");
        // q-Racah with b = q^{-3}: (bq;q)_N vanishes for N = 3.
        let f = Family1V::QRacah { q: rp(1, 2), a: rp(1, 3), b: rp(8, 1), c: rp(1, 5), big_n: 3 };
        let v = validate_params(&f, 3);
        assert!(v.iter().any(|s| s.contains("(bq;q)_N")), "{v:?}");
        assert!(validate_params(&qracah(), 2).is_empty());
    }

    #[test]
    fn out_of_range_is_an_error() {
        assert!(matches!(eval_poly_1v(&qracah(), 3, 0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn cleared_matches_plain_series() {
        // Without vanishing lower parameters the cleared series equals
        // prefactor times the ratio-recurrence sum.
        let f = Family1V::QHahn { q: rp(1, 2), a: rp(1, 3), b: rp(2, 5), big_n: 4 };
        let q = r(1, 4);
        for n in 0..=4usize {
            for x in 0..=4i64 {
                let s = series_1v(&f, n, x).unwrap();
                let mut up = vec![int_pow(&q, -(n as i64)).unwrap()];
                up.extend(s.upper.iter().cloned());
                let lows: Vec<Rational> = s.lower.iter().map(|l| l.value.clone()).collect();
                let spec = PhiSpec { upper: up, lower: lows.clone(), q: q.clone(), z: q.clone(), n };
                let want = qpoch_multi(&lows, &q, n) * phi_terminating(&spec).unwrap();
                assert_eq!(s.eval().unwrap(), want);
            }
        }
    }
}
