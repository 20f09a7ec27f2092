//! The ten multivariable systems, built as products of single-variable
//! factors with shifted arguments and composite parameters.
//!
//! Composite parameters are assembled from square roots, so every half power
//! in the definitions stays rational. Where a printed formula admits more
//! than one mechanical reading, [`Variants`] selects the reading; the
//! defaults are the readings that pass the exact Gram check.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::families::{
    dual_series, inf_tol, len, meixner_cleared_series, qhahn_series, qkrawtchouk_series, qracah_series,
    racah_classical_series, rising, sign_qbinom, Frac, Series,
};
use crate::qseries::{qpoch, qpoch_inf};
use crate::scalar::{gamma, int_pow, Num, RootParam};
use crate::{Error, Result};

/// The multivariable systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyId {
    QRacahMV,
    QRacahMV2,
    DualQHahnMV,
    DualQHahnMV2,
    DualQHahnStarMV,
    QHahnMV,
    QKrawtchoukMV,
    QMeixnerMV,
    QCharlierMV,
    RacahClassicalMV,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::QRacahMV,
        FamilyId::QRacahMV2,
        FamilyId::DualQHahnMV,
        FamilyId::DualQHahnMV2,
        FamilyId::DualQHahnStarMV,
        FamilyId::QHahnMV,
        FamilyId::QKrawtchoukMV,
        FamilyId::QMeixnerMV,
        FamilyId::QCharlierMV,
        FamilyId::RacahClassicalMV,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::QRacahMV => "qracah",
            FamilyId::QRacahMV2 => "qracah2",
            FamilyId::DualQHahnMV => "dual-qhahn",
            FamilyId::DualQHahnMV2 => "dual-qhahn2",
            FamilyId::DualQHahnStarMV => "dual-qhahn-star",
            FamilyId::QHahnMV => "qhahn",
            FamilyId::QKrawtchoukMV => "qkrawtchouk",
            FamilyId::QMeixnerMV => "qmeixner",
            FamilyId::QCharlierMV => "qcharlier",
            FamilyId::RacahClassicalMV => "racah",
        }
    }

    /// The orthogonality relation this family certifies, in words.
    pub fn relation(self) -> &'static str {
        match self {
            FamilyId::QRacahMV => "multivariable q-Racah orthogonality",
            FamilyId::QRacahMV2 => "second multivariable q-Racah orthogonality",
            FamilyId::DualQHahnMV => "multivariable dual q-Hahn orthogonality",
            FamilyId::DualQHahnMV2 => "second multivariable dual q-Hahn orthogonality",
            FamilyId::DualQHahnStarMV => "b to infinity dual q-Hahn orthogonality",
            FamilyId::QHahnMV => "multivariable q-Hahn orthogonality",
            FamilyId::QKrawtchoukMV => "multivariable q-Krawtchouk orthogonality",
            FamilyId::QMeixnerMV => "multivariable q-Meixner orthogonality",
            FamilyId::QCharlierMV => "multivariable q-Charlier orthogonality",
            FamilyId::RacahClassicalMV => "Tratnik multivariable Racah orthogonality",
        }
    }

    /// Infinite support: the sum over `x_s` runs to infinity.
    pub fn infinite(self) -> bool {
        matches!(self, FamilyId::QMeixnerMV | FamilyId::QCharlierMV)
    }

    /// Families whose formulas are rational in the parameters on a finite
    /// lattice and can be checked in the exact backend.
    pub fn exact_capable(self) -> bool {
        !self.infinite() && self != FamilyId::RacahClassicalMV
    }

    /// Number of `a` parameters for `s` variables.
    pub fn a_len(self, s: usize) -> usize {
        match self {
            FamilyId::QKrawtchoukMV | FamilyId::QMeixnerMV | FamilyId::QCharlierMV => s,
            _ => s + 1,
        }
    }

    pub fn needs_b(self) -> bool {
        matches!(self, FamilyId::QRacahMV | FamilyId::QRacahMV2)
    }

    pub fn needs_beta(self) -> bool {
        self == FamilyId::QMeixnerMV
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// Which reading of a formula to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reading {
    /// The formula as typeset.
    Printed,
    /// The amended reading described on the [`Variants`] field.
    Amended,
}

/// Formula readings. [`Variants::default`] is the shipped selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Variants {
    /// `N*_k`: printed as a product of `n_k..n_s`; amended to their sum.
    /// Used by the second q-Racah and second dual q-Hahn families.
    pub tail_sums: Reading,
    /// q-Hahn factor parameter: printed `A_k q^{2N_k+k-1}`; amended
    /// `A_k q^{2N_{k-1}+k-1}`.
    pub hahn_parameter: Reading,
    /// q-Hahn norm power: printed `(A_s q^{N_s+s})^{-N}`; amended
    /// `(A_s q^{N_s+s-1})^{-N}`.
    pub hahn_norm_power: Reading,
    /// q-Krawtchouk weight: printed `q^{-binom(y_1,2)}`; amended `q^{+binom(y_1,2)}`.
    pub krawtchouk_weight: Reading,
    /// q-Krawtchouk norm: printed `(qa_s;q)_{N_s}` in the denominator;
    /// amended `(qa_s;q)_N`.
    pub krawtchouk_norm: Reading,
    /// Starred dual q-Hahn weight: printed `(-a_1)^{x_1} q^{-binom(x_1,2)}`;
    /// amended `(-a_1)^{x_1} q^{+binom(x_1,2)}`.
    pub dstar_weight: Reading,
    /// Starred dual q-Hahn norm: printed `(A_k q^{N_{k-1}+1})^{-2n_k}`;
    /// amended `(A_k q^{2N_{k-1}+1})^{-2n_k}` times `(A_{s+1}q^N, q^{-N};q)_{N_s}`.
    pub dstar_norm: Reading,
    /// Classical Racah factor: printed second parameter `α_{k+1} - 1`;
    /// amended `a_{k+1} - 1`.
    pub racah_second_parameter: Reading,
    /// Classical Racah norm: printed Gamma form; amended to the norm
    /// recomputed from the single-variable norms (see `racah_norm_amended`).
    pub racah_norm: Reading,
}

impl Default for Variants {
    fn default() -> Self {
        Self {
            tail_sums: Reading::Amended,
            hahn_parameter: Reading::Amended,
            hahn_norm_power: Reading::Printed,
            krawtchouk_weight: Reading::Amended,
            krawtchouk_norm: Reading::Amended,
            dstar_weight: Reading::Amended,
            dstar_norm: Reading::Amended,
            racah_second_parameter: Reading::Amended,
            racah_norm: Reading::Amended,
        }
    }
}

/// One arbitrated formula: which family it affects and both readings.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct VariantItem {
    pub key: &'static str,
    pub family: FamilyId,
    pub printed: &'static str,
    pub amended: &'static str,
}

impl Variants {
    pub const ITEMS: [VariantItem; 9] = [
        VariantItem {
            key: "tail_sums",
            family: FamilyId::QRacahMV2,
            printed: "N*_k = product of n_k..n_s",
            amended: "N*_k = sum of n_k..n_s",
        },
        VariantItem {
            key: "hahn_parameter",
            family: FamilyId::QHahnMV,
            printed: "factor parameter A_k q^(2N_k+k-1)",
            amended: "factor parameter A_k q^(2N_(k-1)+k-1)",
        },
        VariantItem {
            key: "hahn_norm_power",
            family: FamilyId::QHahnMV,
            printed: "norm power (A_s q^(N_s+s))^(-N)",
            amended: "norm power (A_s q^(N_s+s-1))^(-N)",
        },
        VariantItem {
            key: "krawtchouk_weight",
            family: FamilyId::QKrawtchoukMV,
            printed: "weight (-1)^y1 q^(-binom(y1,2))",
            amended: "weight (-1)^y1 q^(+binom(y1,2))",
        },
        VariantItem {
            key: "krawtchouk_norm",
            family: FamilyId::QKrawtchoukMV,
            printed: "norm denominator (q a_s;q)_(N_s)",
            amended: "norm denominator (q a_s;q)_N",
        },
        VariantItem {
            key: "dstar_weight",
            family: FamilyId::DualQHahnStarMV,
            printed: "weight (-a1)^x1 q^(-binom(x1,2))",
            amended: "weight (-a1)^x1 q^(+binom(x1,2))",
        },
        VariantItem {
            key: "dstar_norm",
            family: FamilyId::DualQHahnStarMV,
            printed: "norm factors (A_k q^(N_(k-1)+1))^(-2n_k)",
            amended: "norm factors (A_k q^(2N_(k-1)+1))^(-2n_k) and (A_(s+1) q^N, q^-N;q)_(N_s)",
        },
        VariantItem {
            key: "racah_second_parameter",
            family: FamilyId::RacahClassicalMV,
            printed: "factor parameter alpha_(k+1) - 1",
            amended: "factor parameter a_(k+1) - 1",
        },
        VariantItem {
            key: "racah_norm",
            family: FamilyId::RacahClassicalMV,
            printed: "Gamma-form norm as typeset",
            amended: "norm rebuilt from the single-variable Racah norms",
        },
    ];

    pub fn get(&self, key: &str) -> Option<Reading> {
        Some(match key {
            "tail_sums" => self.tail_sums,
            "hahn_parameter" => self.hahn_parameter,
            "hahn_norm_power" => self.hahn_norm_power,
            "krawtchouk_weight" => self.krawtchouk_weight,
            "krawtchouk_norm" => self.krawtchouk_norm,
            "dstar_weight" => self.dstar_weight,
            "dstar_norm" => self.dstar_norm,
            "racah_second_parameter" => self.racah_second_parameter,
            "racah_norm" => self.racah_norm,
            _ => return None,
        })
    }

    /// A copy with one reading replaced.
    pub fn with(mut self, key: &str, r: Reading) -> Result<Self> {
        let slot = match key {
            "tail_sums" => &mut self.tail_sums,
            "hahn_parameter" => &mut self.hahn_parameter,
            "hahn_norm_power" => &mut self.hahn_norm_power,
            "krawtchouk_weight" => &mut self.krawtchouk_weight,
            "krawtchouk_norm" => &mut self.krawtchouk_norm,
            "dstar_weight" => &mut self.dstar_weight,
            "dstar_norm" => &mut self.dstar_norm,
            "racah_second_parameter" => &mut self.racah_second_parameter,
            "racah_norm" => &mut self.racah_norm,
            _ => return Err(Error::Parse(format!("unknown variant key {key:?}"))),
        };
        *slot = r;
        Ok(self)
    }
}

/// Parameters of the q-families. `a[0]` is `a_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QParams<T> {
    pub s: usize,
    pub q: RootParam<T>,
    pub a: Vec<RootParam<T>>,
    pub b: Option<RootParam<T>>,
    pub beta: Option<RootParam<T>>,
    /// `N`; unused by the infinite-support families.
    pub big_n: usize,
}

/// Parameters of the classical Racah system (plain values, not roots).
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalParams<T> {
    pub s: usize,
    pub a: Vec<T>,
    pub eta: T,
    pub big_n: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParamSetMV<T> {
    Q(QParams<T>),
    Classical(ClassicalParams<T>),
}

impl<T: Num> ParamSetMV<T> {
    pub fn s(&self) -> usize {
        match self {
            ParamSetMV::Q(p) => p.s,
            ParamSetMV::Classical(p) => p.s,
        }
    }

    pub fn big_n(&self) -> usize {
        match self {
            ParamSetMV::Q(p) => p.big_n,
            ParamSetMV::Classical(p) => p.big_n,
        }
    }

    pub fn as_q(&self) -> Result<&QParams<T>> {
        match self {
            ParamSetMV::Q(p) => Ok(p),
            ParamSetMV::Classical(_) => Err(Error::InvalidParams("q-family needs q parameters".into())),
        }
    }

    /// Human-readable listing (roots for q-parameters).
    pub fn describe(&self) -> String {
        match self {
            ParamSetMV::Q(p) => {
                let mut out = format!("s={} N={} q^(1/2)={}", p.s, p.big_n, p.q.root().to_text());
                for (i, a) in p.a.iter().enumerate() {
                    out.push_str(&format!(" a{}^(1/2)={}", i + 1, a.root().to_text()));
                }
                if let Some(b) = &p.b {
                    out.push_str(&format!(" b^(1/2)={}", b.root().to_text()));
                }
                if let Some(b) = &p.beta {
                    out.push_str(&format!(" beta^(1/2)={}", b.root().to_text()));
                }
                out
            }
            ParamSetMV::Classical(p) => {
                let mut out = format!("s={} N={} eta={}", p.s, p.big_n, p.eta.to_text());
                for (i, a) in p.a.iter().enumerate() {
                    out.push_str(&format!(" a{}={}", i + 1, a.to_text()));
                }
                out
            }
        }
    }
}

/// A degree vector `n = (n_1, ..., n_s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zero(s: usize) -> Self {
        MultiIndex(vec![0; s])
    }

    pub fn s(&self) -> usize {
        self.0.len()
    }

    /// `n_k`, 1-based.
    pub fn n(&self, k: usize) -> usize {
        self.0[k - 1]
    }

    /// `N_k = n_1 + ... + n_k`, with `N_0 = 0`.
    pub fn partial(&self, k: usize) -> usize {
        self.0[..k].iter().sum()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `N*_k = n_k + ... + n_s`, with `N*_{s+1} = 0`.
    pub fn tail(&self, k: usize) -> usize {
        self.0[k - 1..].iter().sum()
    }

    /// `n_k · ... · n_s`, with the value 0 at `k = s + 1`.
    pub fn tail_product(&self, k: usize) -> usize {
        if k > self.s() {
            0
        } else {
            self.0[k - 1..].iter().product()
        }
    }

    pub fn reversed(&self) -> Self {
        MultiIndex(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// A lattice site `x = (x_1, ..., x_s)`. For the q-Hahn and q-Krawtchouk
/// systems the coordinates are the partial sums `Y_k` of the composition
/// `y`, which is the same simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticePoint(pub Vec<usize>);

impl LatticePoint {
    /// `x_k`, 1-based; `x_{s+1}` is `top`.
    pub fn at(&self, k: usize, top: usize) -> i64 {
        if k > self.0.len() {
            top as i64
        } else {
            self.0[k - 1] as i64
        }
    }

    /// `N - x_{s+1-k}` for every k.
    pub fn reflected(&self, big_n: usize) -> Self {
        LatticePoint(self.0.iter().rev().map(|v| big_n - v).collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// A multivariable system with parameters and formula readings.
#[derive(Clone, Debug)]
pub struct FamilyMV<T> {
    pub id: FamilyId,
    pub params: ParamSetMV<T>,
    pub variants: Variants,
}

impl<T: Num> FamilyMV<T> {
    pub fn new(id: FamilyId, params: ParamSetMV<T>) -> Result<Self> {
        let f = Self { id, params, variants: Variants::default() };
        f.check_shape()?;
        Ok(f)
    }

    pub fn with_variants(mut self, v: Variants) -> Self {
        self.variants = v;
        self
    }

    pub fn s(&self) -> usize {
        self.params.s()
    }

    pub fn big_n(&self) -> usize {
        self.params.big_n()
    }

    fn check_shape(&self) -> Result<()> {
        let s = self.s();
        if s == 0 {
            return Err(Error::InvalidParams("s must be at least 1".into()));
        }
        match (&self.params, self.id) {
            (ParamSetMV::Classical(p), FamilyId::RacahClassicalMV) => {
                if p.a.len() != s + 1 {
                    return Err(Error::InvalidParams(format!("need {} values a_k, got {}", s + 1, p.a.len())));
                }
                if T::EXACT {
                    return Err(Error::FloatOnly("classical Racah system"));
                }
            }
            (ParamSetMV::Q(p), id) if id != FamilyId::RacahClassicalMV => {
                let want = id.a_len(s);
                if p.a.len() != want {
                    return Err(Error::InvalidParams(format!("{id} needs {want} parameters a_k, got {}", p.a.len())));
                }
                if id.needs_b() && p.b.is_none() {
                    return Err(Error::InvalidParams(format!("{id} needs b")));
                }
                if id.needs_beta() && p.beta.is_none() {
                    return Err(Error::InvalidParams(format!("{id} needs beta")));
                }
                if p.q.root().is_zero() || p.a.iter().any(|a| a.root().is_zero()) {
                    return Err(Error::InvalidParams("q and a_k must be nonzero".into()));
                }
                if id.needs_b() && p.b.as_ref().is_some_and(|b| b.root().is_zero()) {
                    return Err(Error::InvalidParams("b must be nonzero".into()));
                }
                if id.infinite() && T::EXACT {
                    return Err(Error::FloatOnly("infinite-support norms"));
                }
            }
            _ => return Err(Error::InvalidParams(format!("parameter kind does not match {}", self.id))),
        }
        Ok(())
    }

    fn check_index(&self, n: &MultiIndex) -> Result<()> {
        if n.s() != self.s() {
            return Err(Error::OutOfRange(format!("index {n} has wrong length")));
        }
        if !self.id.infinite() && n.total() > self.big_n() {
            return Err(Error::OutOfRange(format!("|{n}| exceeds N = {}", self.big_n())));
        }
        Ok(())
    }

    fn check_point(&self, x: &LatticePoint) -> Result<()> {
        if x.0.len() != self.s() {
            return Err(Error::OutOfRange(format!("point {x} has wrong length")));
        }
        if x.0.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::OutOfRange(format!("point {x} is not nondecreasing")));
        }
        if !self.id.infinite() && x.0.last().is_some_and(|&v| v > self.big_n()) {
            return Err(Error::OutOfRange(format!("point {x} exceeds N = {}", self.big_n())));
        }
        Ok(())
    }
}

/// Precomputed parameter values, all 1-based (`a[0] = A[0] = 1`).
struct View<T> {
    s: usize,
    big_n: i64,
    q: T,
    rq: RootParam<T>,
    ra: Vec<RootParam<T>>,
    a: Vec<T>,
    r_big_a: Vec<RootParam<T>>,
    big_a: Vec<T>,
    b: Option<RootParam<T>>,
    beta: Option<T>,
}

impl<T: Num> View<T> {
    fn new(p: &QParams<T>) -> Self {
        let one = RootParam::new(p.q.root().one_like());
        let mut ra = vec![one.clone()];
        ra.extend(p.a.iter().cloned());
        let a: Vec<T> = ra.iter().map(|r| r.value()).collect();
        let mut r_big_a = vec![one];
        for k in 1..ra.len() {
            let next = r_big_a[k - 1].mul(&ra[k]);
            r_big_a.push(next);
        }
        let big_a = r_big_a.iter().map(|r| r.value()).collect();
        Self {
            s: p.s,
            big_n: p.big_n as i64,
            q: p.q.value(),
            rq: p.q.clone(),
            ra,
            a,
            r_big_a,
            big_a,
            b: p.b.clone(),
            beta: p.beta.as_ref().map(|b| b.value()),
        }
    }

    fn qp(&self, k: i64) -> Result<T> {
        int_pow(&self.q, k)
    }

    fn poch(&self, v: &T, n: i64, what: &str) -> Result<T> {
        Ok(qpoch(v, &self.q, len(n, what)?))
    }

    fn b(&self) -> Result<&RootParam<T>> {
        self.b.as_ref().ok_or_else(|| Error::InvalidParams("missing b".into()))
    }

    fn bv(&self) -> Result<T> {
        Ok(self.b()?.value())
    }

    fn one(&self) -> T {
        self.q.one_like()
    }
}

// ---- polynomials ----

/// Single-variable factors whose product is `P_n(x)`, plus a scalar.
pub(crate) struct Factors<T> {
    pub series: Vec<Series<T>>,
    pub scalar: T,
}

impl<T: Num> Factors<T> {
    pub(crate) fn eval(&self) -> Result<T> {
        let mut v = self.scalar.clone();
        for (k, s) in self.series.iter().enumerate() {
            if v.is_zero() {
                break;
            }
            v *= &s.eval().map_err(|e| e.context(format!("factor {}", k + 1)))?;
        }
        Ok(v)
    }
}

fn qracah_factors<T: Num>(v: &View<T>, n: &MultiIndex, x: &LatticePoint) -> Result<Factors<T>> {
    let (s, top) = (v.s, v.big_n as usize);
    let rb = v.b()?;
    let mut series = Vec::with_capacity(s);
    for k in 1..=s {
        let nk1 = n.partial(k - 1) as i64;
        let xk1 = x.at(k + 1, top);
        let ra_ = rb.mul(&v.r_big_a[k]).times_half_pow(&v.rq, 2 * nk1)?.div(&v.ra[1])?;
        let rb_ = v.ra[k + 1].div(&v.rq)?;
        let rc_ = v.r_big_a[k].times_half_pow(&v.rq, xk1 + nk1)?;
        series.push(qracah_series(n.n(k), x.at(k, top) - nk1, &v.rq, &ra_, &rb_, &rc_, xk1 - nk1)?);
    }
    Ok(Factors { series, scalar: v.one() })
}

/// `N*_k` under the selected reading.
fn tail(n: &MultiIndex, k: usize, r: Reading) -> i64 {
    match r {
        Reading::Amended => n.tail(k) as i64,
        Reading::Printed => n.tail_product(k) as i64,
    }
}

/// The factors `k = 2..s` shared by the second q-Racah and second dual
/// q-Hahn families.
fn second_family_tail<T: Num>(
    v: &View<T>,
    n: &MultiIndex,
    x: &LatticePoint,
    r: Reading,
    out: &mut Vec<Series<T>>,
) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    for k in 2..=s {
        let t = tail(n, k + 1, r);
        let xkm1 = x.at(k - 1, nn as usize);
        let ra_ = v.r_big_a[s + 1].times_half_pow(&v.rq, 2 * t - 1)?.div(&v.r_big_a[k])?;
        let rb_ = v.ra[k].div(&v.rq)?;
        let rc_ = RootParam::new(v.rq.half_pow(t - nn - xkm1)?).div(&v.r_big_a[k])?;
        out.push(qracah_series(n.n(k), nn - t - x.at(k, nn as usize), &v.rq, &ra_, &rb_, &rc_, nn - t - xkm1)?);
    }
    Ok(())
}

fn qracah2_factors<T: Num>(v: &View<T>, n: &MultiIndex, x: &LatticePoint, r: Reading) -> Result<Factors<T>> {
    let (s, nn) = (v.s, v.big_n);
    let t2 = tail(n, 2, r);
    let ra_ = v.r_big_a[s + 1].times_half_pow(&v.rq, 2 * t2 - 1)?.div(&v.ra[1])?;
    let rc_ = RootParam::new(v.rq.half_pow(t2 - nn)?).div(&v.ra[1])?;
    let mut series = vec![qracah_series(n.n(1), nn - t2 - x.at(1, nn as usize), &v.rq, &ra_, v.b()?, &rc_, nn - t2)?];
    second_family_tail(v, n, x, r, &mut series)?;
    Ok(Factors { series, scalar: v.one() })
}

fn dual_factors<T: Num>(v: &View<T>, n: &MultiIndex, x: &LatticePoint, star: bool) -> Result<Factors<T>> {
    let (s, top) = (v.s, v.big_n as usize);
    let mut series = Vec::with_capacity(s);
    for k in 1..=s {
        let nk1 = n.partial(k - 1) as i64;
        let xk1 = x.at(k + 1, top);
        let rb_ = v.ra[k + 1].div(&v.rq)?;
        let rc_ = v.r_big_a[k].times_half_pow(&v.rq, xk1 + nk1)?;
        series.push(dual_series(n.n(k), x.at(k, top) - nk1, &v.rq, &rb_, &rc_, xk1 - nk1, star)?);
    }
    Ok(Factors { series, scalar: v.one() })
}

fn dual2_factors<T: Num>(v: &View<T>, n: &MultiIndex, x: &LatticePoint, r: Reading) -> Result<Factors<T>> {
    let (s, nn) = (v.s, v.big_n);
    let t2 = tail(n, 2, r);
    let rb_ = v.r_big_a[s + 1].times_half_pow(&v.rq, nn + t2 - 1)?;
    let rc_ = RootParam::new(v.rq.half_pow(t2 - nn)?).div(&v.ra[1])?;
    let mut series = vec![dual_series(n.n(1), nn - t2 - x.at(1, nn as usize), &v.rq, &rb_, &rc_, nn - t2, false)?];
    second_family_tail(v, n, x, r, &mut series)?;
    Ok(Factors { series, scalar: v.one() })
}

fn hahn_factors<T: Num>(v: &View<T>, n: &MultiIndex, x: &LatticePoint, r: Reading) -> Result<Factors<T>> {
    let (s, top) = (v.s, v.big_n as usize);
    let mut series = Vec::with_capacity(s);
    for k in 1..=s {
        let nk1 = n.partial(k - 1) as i64;
        let e = match r {
            Reading::Amended => 2 * nk1 + k as i64 - 1,
            Reading::Printed => 2 * n.partial(k) as i64 + k as i64 - 1,
        };
        let a_ = v.big_a[k].clone() * &v.qp(e)?;
        series.push(qhahn_series(n.n(k), x.at(k, top) - nk1, &v.q, &a_, &v.a[k + 1], x.at(k + 1, top) - nk1)?);
    }
    Ok(Factors { series, scalar: v.one() })
}

fn krawtchouk_factors<T: Num>(v: &View<T>, n: &MultiIndex, x: &LatticePoint) -> Result<Factors<T>> {
    let (s, top) = (v.s, v.big_n as usize);
    let mut series = Vec::with_capacity(s);
    for j in 1..=s {
        let nj1 = n.partial(j - 1) as i64;
        series.push(qkrawtchouk_series(n.n(j), x.at(j, top) - nj1, &v.q, &v.a[j], x.at(j + 1, top) - nj1)?);
    }
    Ok(Factors { series, scalar: v.one() })
}

fn meixner_factors<T: Num>(v: &View<T>, n: &MultiIndex, x: &LatticePoint, charlier: bool) -> Result<Factors<T>> {
    let s = v.s;
    let xs = |k: usize| x.0[k - 1] as i64;
    let mut series = Vec::with_capacity(s);
    let mut scalar = v.one();
    for k in 1..=s {
        let nk = n.n(k) as i64;
        let nk1 = n.partial(k - 1) as i64;
        scalar *= &sign_qbinom(&v.q, nk)?;
        scalar *= &v.qp(nk * nk1)?;
        scalar *= &v.r_big_a[k - 1].half_pow(nk)?;
        let c = -(v.q.try_div(&v.a[k])?);
        let aq = if k < s {
            Some((v.qp(nk1 - xs(k + 1))?, true))
        } else if charlier {
            None
        } else {
            let beta = v.beta.clone().ok_or_else(|| Error::InvalidParams("missing beta".into()))?;
            Some((beta * &v.qp(nk1)?, false))
        };
        series.push(meixner_cleared_series(n.n(k), xs(k) - nk1, &v.q, aq, &c)?);
    }
    Ok(Factors { series, scalar })
}

fn classical_factors<T: Num>(p: &ClassicalParams<T>, n: &MultiIndex, x: &LatticePoint, r: Reading) -> Factors<T> {
    let s = p.s;
    let eta = &p.eta;
    let alpha = alphas(&p.a);
    let mut series = Vec::with_capacity(s);
    for k in 1..=s {
        let nk1 = n.partial(k - 1) as i64;
        let xk1 = x.at(k + 1, p.big_n);
        let al = eta.lift(2 * nk1) + eta + &alpha[k] - &p.a[0];
        let be = match r {
            Reading::Amended => p.a[k].clone() - &eta.one_like(),
            Reading::Printed => alpha[k + 1].clone() - &eta.one_like(),
        };
        let ga = eta.lift(nk1 + xk1) + &alpha[k];
        series.push(racah_classical_series(n.n(k), x.at(k, p.big_n) - nk1, &al, &be, &ga, xk1 - nk1));
    }
    Factors { series, scalar: eta.one_like() }
}

/// `α_k = a_1 + ... + a_k` for `k = 0..=s+1`.
fn alphas<T: Num>(a: &[T]) -> Vec<T> {
    let mut out = vec![a[0].zero_like()];
    for ak in a {
        let next = out.last().expect("nonempty").clone() + ak;
        out.push(next);
    }
    out
}

pub(crate) fn factors<T: Num>(f: &FamilyMV<T>, n: &MultiIndex, x: &LatticePoint) -> Result<Factors<T>> {
    let var = &f.variants;
    if let ParamSetMV::Classical(p) = &f.params {
        return Ok(classical_factors(p, n, x, var.racah_second_parameter));
    }
    let v = View::new(f.params.as_q()?);
    match f.id {
        FamilyId::QRacahMV => qracah_factors(&v, n, x),
        FamilyId::QRacahMV2 => qracah2_factors(&v, n, x, var.tail_sums),
        FamilyId::DualQHahnMV => dual_factors(&v, n, x, false),
        FamilyId::DualQHahnMV2 => dual2_factors(&v, n, x, var.tail_sums),
        FamilyId::DualQHahnStarMV => dual_factors(&v, n, x, true),
        FamilyId::QHahnMV => hahn_factors(&v, n, x, var.hahn_parameter),
        FamilyId::QKrawtchoukMV => krawtchouk_factors(&v, n, x),
        FamilyId::QMeixnerMV => meixner_factors(&v, n, x, false),
        FamilyId::QCharlierMV => meixner_factors(&v, n, x, true),
        FamilyId::RacahClassicalMV => unreachable!("handled above"),
    }
}

/// `P_n(x)`.
pub fn eval_poly_mv<T: Num>(f: &FamilyMV<T>, n: &MultiIndex, x: &LatticePoint) -> Result<T> {
    f.check_index(n)?;
    f.check_point(x)?;
    factors(f, n, x)?.eval()
}

// ---- weights ----

/// `∏_{k=1}^{s} (a_{k+1})_{x_{k+1}-x_k} (A_{k+1})_{x_{k+1}+x_k} (1-A_k q^{2x_k})
/// / ((q)_{x_{k+1}-x_k} (qA_k)_{x_{k+1}+x_k} (1-A_k)) · a_k^{-x_k}`.
fn racah_chain<T: Num>(v: &View<T>, x: &LatticePoint, w: &mut Frac<T>) -> Result<()> {
    let top = v.big_n as usize;
    let one = v.one();
    for k in 1..=v.s {
        let (xk, xk1) = (x.at(k, top), x.at(k + 1, top));
        let d = xk1 - xk;
        let e = xk1 + xk;
        w.mul(v.poch(&v.a[k + 1], d, "x_(k+1)-x_k")? * &v.poch(&v.big_a[k + 1], e, "x_(k+1)+x_k")?);
        w.mul(one.clone() - &(v.big_a[k].clone() * &v.qp(2 * xk)?));
        w.div(v.poch(&v.q, d, "x_(k+1)-x_k")?, "(q;q)_(x_(k+1)-x_k)");
        w.div(v.poch(&(v.big_a[k].clone() * &v.q), e, "x_(k+1)+x_k")?, "(qA_k;q)_(x_(k+1)+x_k)");
        w.div(one.clone() - &v.big_a[k], "1-A_k");
        w.pow(&v.a[k], -xk, "a_k^x_k");
    }
    Ok(())
}

/// `(q, qA_s;q)_N / (a_{s+1}, A_{s+1};q)_N`.
fn racah_mass<T: Num>(v: &View<T>, w: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    w.mul(v.poch(&v.q, nn, "N")? * &v.poch(&(v.big_a[s].clone() * &v.q), nn, "N")?);
    w.div(v.poch(&v.a[s + 1], nn, "N")?, "(a_(s+1);q)_N");
    w.div(v.poch(&v.big_a[s + 1], nn, "N")?, "(A_(s+1);q)_N");
    Ok(())
}

fn qracah_weight<T: Num>(v: &View<T>, x: &LatticePoint, w: &mut Frac<T>) -> Result<()> {
    let x1 = x.at(1, 0);
    let bv = v.bv()?;
    racah_mass(v, w)?;
    w.mul(v.poch(&v.a[1], x1, "x_1")? * &v.poch(&(bv.clone() * &v.q), x1, "x_1")?);
    w.div(v.poch(&v.q, x1, "x_1")?, "(q;q)_x1");
    w.div(v.poch(&v.a[1].try_div(&bv)?, x1, "x_1")?, "(a_1/b;q)_x1");
    w.pow(&v.a[1].try_div(&(bv * &v.q))?, x1, "(a_1/bq)^x1");
    racah_chain(v, x, w)
}

fn dual_weight<T: Num>(v: &View<T>, x: &LatticePoint, star: Option<Reading>, w: &mut Frac<T>) -> Result<()> {
    let x1 = x.at(1, 0);
    racah_mass(v, w)?;
    w.mul(v.poch(&v.a[1], x1, "x_1")?);
    w.div(v.poch(&v.q, x1, "x_1")?, "(q;q)_x1");
    let binom = x1 * (x1 - 1) / 2;
    match star {
        None => {
            w.pow(&(-v.q.clone()), -x1, "(-q)^x1");
            w.pow(&v.q, -binom, "q^binom(x1,2)");
        }
        Some(r) => {
            w.mul(int_pow(&(-v.a[1].clone()), x1)?);
            let sign = if r == Reading::Amended { 1 } else { -1 };
            w.pow(&v.q, sign * binom, "q^binom(x1,2)");
        }
    }
    racah_chain(v, x, w)
}

/// `y_k = Y_k - Y_{k-1}` with `Y_0 = 0`.
fn composition(x: &LatticePoint) -> Vec<i64> {
    let mut prev = 0;
    x.0.iter()
        .map(|&y| {
            let d = y as i64 - prev;
            prev = y as i64;
            d
        })
        .collect()
}

fn hahn_weight<T: Num>(v: &View<T>, x: &LatticePoint, w: &mut Frac<T>) -> Result<()> {
    let s = v.s;
    let y = composition(x);
    let ys = x.at(s, 0);
    let qmn = v.qp(-v.big_n)?;
    w.mul(v.poch(&qmn, ys, "Y_s")?);
    w.div(v.poch(&qmn.try_div(&v.a[s + 1])?, ys, "Y_s")?, "(q^-N/a_(s+1);q)_Y_s");
    w.pow(&v.a[s + 1], -ys, "a_(s+1)^Y_s");
    for k in 1..=s {
        let qa = v.q.clone() * &v.a[k];
        w.mul(v.poch(&qa, y[k - 1], "y_k")?);
        w.div(v.poch(&v.q, y[k - 1], "y_k")?, "(q;q)_y_k");
        w.pow(&qa, -x.at(k, 0), "(q a_k)^Y_k");
    }
    Ok(())
}

fn krawtchouk_weight<T: Num>(v: &View<T>, x: &LatticePoint, r: Reading, w: &mut Frac<T>) -> Result<()> {
    let s = v.s;
    let y = composition(x);
    let ys = x.at(s, 0);
    let qmn = v.qp(-v.big_n)?;
    w.mul(v.poch(&qmn, ys, "Y_s")?);
    w.div(v.poch(&v.q, y[0], "y_1")?, "(q;q)_y1");
    w.div(v.poch(&qmn.try_div(&v.a[s])?, ys, "Y_s")?, "(q^-N/a_s;q)_Y_s");
    if y[0] % 2 != 0 {
        w.mul(-v.one());
    }
    let binom = y[0] * (y[0] - 1) / 2;
    let sign = if r == Reading::Amended { 1 } else { -1 };
    w.pow(&v.q, sign * binom, "q^binom(y1,2)");
    w.pow(&v.a[s], -ys, "a_s^Y_s");
    for j in 2..=s {
        let qa = v.q.clone() * &v.a[j - 1];
        w.mul(v.poch(&qa, y[j - 1], "y_j")?);
        w.div(v.poch(&v.q, y[j - 1], "y_j")?, "(q;q)_y_j");
        w.pow(&qa, -x.at(j, 0), "(q a_(j-1))^Y_j");
    }
    Ok(())
}

fn meixner_weight<T: Num>(v: &View<T>, x: &LatticePoint, charlier: bool, w: &mut Frac<T>) -> Result<()> {
    let s = v.s;
    let xs = |k: usize| x.0[k - 1] as i64;
    if !charlier {
        let beta = v.beta.clone().ok_or_else(|| Error::InvalidParams("missing beta".into()))?;
        w.mul(v.poch(&beta, xs(s), "x_s")?);
        w.div(v.poch(&(v.q.clone() * &beta).try_div(&v.a[s])?, xs(s), "x_s")?, "(q beta/a_s;q)_x_s");
    }
    w.pow(&v.q.try_div(&(v.a[s - 1].clone() * &v.a[s]))?, xs(s), "(q/a_(s-1)a_s)^x_s");
    let x1 = xs(1);
    if x1 % 2 != 0 {
        w.mul(-v.one());
    }
    w.div(v.poch(&v.q, x1, "x_1")?, "(q;q)_x1");
    w.mul(v.qp(x1 * (x1 - 1) / 2)?);
    for k in 1..s {
        let d = xs(k + 1) - xs(k);
        w.mul(v.poch(&v.a[k], d, "x_(k+1)-x_k")?);
        w.div(v.poch(&v.q, d, "x_(k+1)-x_k")?, "(q;q)_(x_(k+1)-x_k)");
        w.pow(&v.a[k - 1], -xs(k), "a_(k-1)^x_k");
    }
    Ok(())
}

fn classical_weight<T: Num>(p: &ClassicalParams<T>, x: &LatticePoint) -> Result<T> {
    let s = p.s;
    let a = |k: usize| &p.a[k - 1];
    let al = alphas(&p.a);
    let eta = &p.eta;
    let one = eta.one_like();
    let nn = eta.lift(p.big_n as i64);
    let xi = |k: usize| x.at(k, p.big_n);
    let mut w = Frac::new(eta);
    w.mul(rising(&one, p.big_n) * &gamma(&(al[s].clone() + &nn + &one))?);
    w.div(gamma(&(a(s + 1).clone() + &nn))?, "Gamma(a_(s+1)+N)");
    w.div(gamma(&(al[s + 1].clone() + &nn))?, "Gamma(alpha_(s+1)+N)");
    let x1 = len(xi(1), "x_1")?;
    w.mul(rising(a(1), x1) * &rising(&(eta.clone() + &one), x1));
    w.div(rising(&one, x1), "x_1!");
    w.div(rising(&(a(1).clone() - eta), x1), "(a_1-eta)_x1");
    for k in 1..=s {
        let d = xi(k + 1) - xi(k);
        let e = eta.lift(xi(k + 1) + xi(k));
        w.mul(gamma(&(a(k + 1).clone() + &eta.lift(d)))?);
        w.mul(gamma(&(al[k + 1].clone() + &e))?);
        w.div(rising(&one, len(d, "x_(k+1)-x_k")?), "(x_(k+1)-x_k)!");
        w.div(gamma(&(al[k].clone() + &e + &one))?, "Gamma(alpha_k+x_(k+1)+x_k+1)");
        w.mul(al[k].clone() + &eta.lift(2 * xi(k)));
        w.div(al[k].clone(), "alpha_k");
    }
    w.finish()
}

fn weight_frac<T: Num>(f: &FamilyMV<T>, x: &LatticePoint) -> Result<Frac<T>> {
    let v = View::new(f.params.as_q()?);
    let mut w = Frac::new(&v.q);
    match f.id {
        FamilyId::QRacahMV | FamilyId::QRacahMV2 => qracah_weight(&v, x, &mut w)?,
        FamilyId::DualQHahnMV | FamilyId::DualQHahnMV2 => dual_weight(&v, x, None, &mut w)?,
        FamilyId::DualQHahnStarMV => dual_weight(&v, x, Some(f.variants.dstar_weight), &mut w)?,
        FamilyId::QHahnMV => hahn_weight(&v, x, &mut w)?,
        FamilyId::QKrawtchoukMV => krawtchouk_weight(&v, x, f.variants.krawtchouk_weight, &mut w)?,
        FamilyId::QMeixnerMV => meixner_weight(&v, x, false, &mut w)?,
        FamilyId::QCharlierMV => meixner_weight(&v, x, true, &mut w)?,
        FamilyId::RacahClassicalMV => unreachable!("classical weight is not a Frac"),
    }
    Ok(w)
}

/// The weight `ρ(x)`.
pub fn eval_weight_mv<T: Num>(f: &FamilyMV<T>, x: &LatticePoint) -> Result<T> {
    f.check_point(x)?;
    if let ParamSetMV::Classical(p) = &f.params {
        return classical_weight(p, x);
    }
    weight_frac(f, x)?.finish()
}

// ---- norms ----

fn qracah_norm<T: Num>(v: &View<T>, n: &MultiIndex, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    let (q, a1, bv) = (&v.q, &v.a[1], v.bv()?);
    let one = v.one();
    let ns = n.total() as i64;
    let b_a1 = bv.try_div(a1)?;
    l.mul(v.poch(&(q.clone() * &v.big_a[s]), nn, "N")?);
    l.mul(v.poch(&(q.clone() * &b_a1 * &v.big_a[s + 1]), nn, "N")?);
    l.div(v.poch(&v.a[s + 1], nn, "N")?, "(a_(s+1);q)_N");
    l.div(v.poch(&a1.try_div(&bv)?, nn, "N")?, "(a_1/b;q)_N");
    l.pow(&a1.try_div(&(q.clone() * &bv * &v.big_a[s]))?, nn, "(a_1/qbA_s)^N");
    for p in [
        b_a1.clone() * &v.big_a[s + 1] * &v.qp(nn + 1)?,
        v.big_a[s + 1].clone() * &v.qp(nn)?,
        b_a1.clone() * &v.qp(1 - nn)?,
        v.qp(-nn)?,
    ] {
        l.mul(v.poch(&p, ns, "N_s")?);
    }
    for k in 1..=s {
        let (nk, nk1) = (n.partial(k) as i64, n.partial(k - 1) as i64);
        let ba = b_a1.clone() * &v.big_a[k + 1];
        l.mul(v.poch(q, n.n(k) as i64, "n_k")? * &v.poch(&v.a[k + 1], n.n(k) as i64, "n_k")?);
        l.mul(v.poch(&(q.clone() * &b_a1 * &v.big_a[k]), nk + nk1, "N_k+N_(k-1)")?);
        l.mul(one.clone() - &ba);
        l.div(v.poch(&ba, nk + nk1, "N_k+N_(k-1)")?, "(bA_(k+1)/a_1;q)_(N_k+N_(k-1))");
        l.div(one.clone() - &(ba * &v.qp(2 * nk)?), "1-bA_(k+1)q^(2N_k)/a_1");
    }
    Ok(())
}

/// Product over `k = 1..s-1` shared by the two second-family norms.
fn second_family_norm_tail<T: Num>(v: &View<T>, n: &MultiIndex, r: Reading, l: &mut Frac<T>) -> Result<()> {
    let s = v.s;
    let one = v.one();
    for k in 1..s {
        let (t1, t2) = (tail(n, k + 1, r), tail(n, k + 2, r));
        let nk = n.n(k + 1) as i64;
        let ratio = v.big_a[s + 1].try_div(&(v.q.clone() * &v.big_a[k]))?;
        l.mul(v.poch(&v.q, nk, "n_(k+1)")? * &v.poch(&v.a[k + 1], nk, "n_(k+1)")?);
        l.mul(v.poch(&v.big_a[s + 1].try_div(&v.big_a[k + 1])?, t1 + t2, "N*_(k+1)+N*_(k+2)")?);
        l.mul(one.clone() - &ratio);
        l.div(v.poch(&ratio, t1 + t2, "N*_(k+1)+N*_(k+2)")?, "(A_(s+1)/qA_k;q)_(N*_(k+1)+N*_(k+2))");
        l.div(one.clone() - &(ratio * &v.qp(2 * t1)?), "1-A_(s+1)q^(2N*_(k+1))/qA_k");
    }
    Ok(())
}

fn qracah2_norm<T: Num>(v: &View<T>, n: &MultiIndex, r: Reading, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    let (q, a1, bv) = (&v.q, &v.a[1], v.bv()?);
    let one = v.one();
    let (t1, t2) = (tail(n, 1, r), tail(n, 2, r));
    let b_a1 = bv.try_div(a1)?;
    let bas = b_a1.clone() * &v.big_a[s + 1];
    l.mul(v.poch(&(q.clone() * &v.big_a[s]), nn, "N")? * &v.poch(&(q.clone() * &bas), nn, "N")?);
    l.div(v.poch(&a1.try_div(&bv)?, nn, "N")?, "(a_1/b;q)_N");
    l.div(v.poch(&v.a[s + 1], nn, "N")?, "(a_(s+1);q)_N");
    l.pow(&a1.try_div(&(q.clone() * &bv * &v.big_a[s]))?, nn, "(a_1/qbA_s)^N");
    for p in
        [bas.clone() * &v.qp(nn + 1)?, b_a1.clone() * &v.qp(1 - nn)?, v.big_a[s + 1].clone() * &v.qp(nn)?, v.qp(-nn)?]
    {
        l.mul(v.poch(&p, t1, "N*_1")?);
    }
    l.mul(v.poch(q, n.n(1) as i64, "n_1")? * &v.poch(&(q.clone() * &bv), n.n(1) as i64, "n_1")?);
    l.mul(v.poch(&v.big_a[s + 1].try_div(a1)?, t1 + t2, "N*_1+N*_2")?);
    l.mul(one.clone() - &bas);
    l.div(v.poch(&bas, t1 + t2, "N*_1+N*_2")?, "(bA_(s+1)/a_1;q)_(N*_1+N*_2)");
    l.div(one - &(bas * &v.qp(2 * t1)?), "1-bA_(s+1)q^(2N*_1)/a_1");
    second_family_norm_tail(v, n, r, l)
}

/// `(qA_s;q)_N / (a_{s+1};q)_N · (-qA_s)^{-N} q^{-binom(N,2)}`.
fn dual_mass<T: Num>(v: &View<T>, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    l.mul(v.poch(&(v.q.clone() * &v.big_a[s]), nn, "N")?);
    l.div(v.poch(&v.a[s + 1], nn, "N")?, "(a_(s+1);q)_N");
    l.pow(&(-(v.q.clone() * &v.big_a[s])), -nn, "(-qA_s)^N");
    l.pow(&v.q, -nn * (nn - 1) / 2, "q^binom(N,2)");
    Ok(())
}

fn dual_norm<T: Num>(v: &View<T>, n: &MultiIndex, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    let ns = n.total() as i64;
    dual_mass(v, l)?;
    l.mul(v.poch(&(v.big_a[s + 1].clone() * &v.qp(nn)?), ns, "N_s")? * &v.poch(&v.qp(-nn)?, ns, "N_s")?);
    for k in 1..=s {
        let nk = n.n(k) as i64;
        l.mul(v.poch(&v.q, nk, "n_k")? * &v.poch(&v.a[k + 1], nk, "n_k")?);
    }
    Ok(())
}

fn dual2_norm<T: Num>(v: &View<T>, n: &MultiIndex, r: Reading, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    let (t1, t2) = (tail(n, 1, r), tail(n, 2, r));
    dual_mass(v, l)?;
    l.mul(v.poch(&(v.big_a[s + 1].clone() * &v.qp(nn)?), t1, "N*_1")? * &v.poch(&v.qp(-nn)?, t1, "N*_1")?);
    l.mul(v.poch(&v.q, n.n(1) as i64, "n_1")?);
    l.mul(v.poch(&v.big_a[s + 1].try_div(&v.a[1])?, t1 + t2, "N*_1+N*_2")?);
    second_family_norm_tail(v, n, r, l)
}

fn dstar_norm<T: Num>(v: &View<T>, n: &MultiIndex, r: Reading, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    let ns = n.total() as i64;
    l.mul(v.poch(&(v.q.clone() * &v.big_a[s]), nn, "N")?);
    l.div(v.poch(&v.a[s + 1], nn, "N")?, "(a_(s+1);q)_N");
    l.mul(int_pow(&(-v.a[s + 1].clone()), nn)? * &v.qp(nn * (nn - 1) / 2)?);
    l.mul(int_pow(&v.big_a[s + 1], ns)? * &v.qp(ns * (ns + 1))?);
    for k in 1..=s {
        let (nk, pk, pk1) = (n.n(k) as i64, n.partial(k) as i64, n.partial(k - 1) as i64);
        l.mul(v.poch(&v.q, nk, "n_k")? * &v.poch(&v.a[k + 1], nk, "n_k")?);
        let e = match r {
            Reading::Amended => 2 * pk1 + 1,
            Reading::Printed => pk1 + 1,
        };
        l.pow(&(v.big_a[k].clone() * &v.qp(e)?), -2 * nk, "A_k q^e");
        l.pow(&v.q, pk1 - pk, "q^(N_(k-1)-N_k)");
        l.pow(&v.a[k + 1], -pk - pk1, "a_(k+1)^(N_k+N_(k-1))");
    }
    if r == Reading::Amended {
        l.mul(v.poch(&(v.big_a[s + 1].clone() * &v.qp(nn)?), ns, "N_s")? * &v.poch(&v.qp(-nn)?, ns, "N_s")?);
    }
    Ok(())
}

fn hahn_norm<T: Num>(v: &View<T>, n: &MultiIndex, r: Reading, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    let si = s as i64;
    let ns = n.total() as i64;
    let one = v.one();
    l.mul(v.poch(&(v.big_a[s + 1].clone() * &v.qp(si + 1)?), nn + ns, "N+N_s")?);
    l.mul(v.poch(&v.qp(-nn)?, ns, "N_s")?);
    l.div(v.poch(&(v.q.clone() * &v.a[s + 1]), nn, "N")?, "(qa_(s+1);q)_N");
    let e = match r {
        Reading::Printed => ns + si,
        Reading::Amended => ns + si - 1,
    };
    l.pow(&(v.big_a[s].clone() * &v.qp(e)?), -nn, "(A_s q^e)^N");
    l.mul(sign_qbinom(&v.q, ns)?);
    for k in 1..=s {
        let ki = k as i64;
        let (nk, pk, pk1) = (n.n(k) as i64, n.partial(k) as i64, n.partial(k - 1) as i64);
        let ak1q = v.big_a[k + 1].clone() * &v.qp(ki)?;
        l.mul(v.poch(&v.q, nk, "n_k")? * &v.poch(&(v.q.clone() * &v.a[k + 1]), nk, "n_k")?);
        l.mul(v.poch(&(v.big_a[k].clone() * &v.qp(ki)?), pk + pk1, "N_k+N_(k-1)")?);
        l.mul(one.clone() - &ak1q);
        l.div(v.poch(&ak1q, pk + pk1, "N_k+N_(k-1)")?, "(A_(k+1)q^k;q)_(N_k+N_(k-1))");
        l.div(one.clone() - &(ak1q * &v.qp(2 * pk)?), "1-A_(k+1)q^(k+2N_k)");
        l.mul(int_pow(&(v.big_a[k].clone() * &v.qp(ki + 2 * pk1)?), nk)?);
    }
    Ok(())
}

fn krawtchouk_norm<T: Num>(v: &View<T>, n: &MultiIndex, r: Reading, l: &mut Frac<T>) -> Result<()> {
    let (s, nn) = (v.s, v.big_n);
    let si = s as i64;
    let ns = n.total() as i64;
    l.mul(v.poch(&v.qp(-nn)?, ns, "N_s")?);
    let den_len = match r {
        Reading::Amended => nn,
        Reading::Printed => ns,
    };
    l.div(v.poch(&(v.q.clone() * &v.a[s]), den_len, "N")?, "(qa_s;q)");
    l.pow(&(v.big_a[s - 1].clone() * &v.qp(si + ns)?), -nn, "(A_(s-1)q^(s+N_s))^N");
    l.mul(int_pow(&(v.big_a[s].clone() * &v.qp(si + 1)?), nn + ns)?);
    if nn % 2 != 0 {
        l.mul(-v.one());
    }
    l.mul(v.qp(ns * (ns - 1) / 2 + (nn + ns) * (nn + ns - 1) / 2)?);
    for j in 1..=s {
        let ji = j as i64;
        let (nj, pj, pj1) = (n.n(j) as i64, n.partial(j) as i64, n.partial(j - 1) as i64);
        l.mul(v.poch(&v.q, nj, "n_j")? * &v.poch(&(v.q.clone() * &v.a[j]), nj, "n_j")?);
        l.pow(&(v.big_a[j - 1].clone() * &v.qp(ji + 2 * pj1)?), -nj, "A_(j-1)q^(j+2N_(j-1))");
        l.pow(&v.a[j], -pj - pj1, "a_j^(N_j+N_(j-1))");
        l.pow(&v.q, -2 * pj, "q^(2N_j)");
    }
    Ok(())
}

fn meixner_norm<T: Num>(v: &View<T>, n: &MultiIndex, charlier: bool, l: &mut Frac<T>) -> Result<()> {
    let s = v.s;
    let ns = n.total() as i64;
    let tol = inf_tol(&v.q)?;
    l.mul(qpoch_inf(&v.q.try_div(&v.a[s])?, &v.q, &tol)?);
    if !charlier {
        let beta = v.beta.clone().ok_or_else(|| Error::InvalidParams("missing beta".into()))?;
        let qb = (v.q.clone() * &beta).try_div(&v.a[s])?;
        l.div(qpoch_inf(&qb, &v.q, &tol)?, "(q beta/a_s;q)_inf");
        l.mul(v.poch(&beta, ns, "N_s")?);
    }
    l.mul(v.qp(ns * (ns - 1))? * &int_pow(&v.big_a[s], ns)?);
    for k in 1..=s {
        let (nk, pk, pk1) = (n.n(k) as i64, n.partial(k) as i64, n.partial(k - 1) as i64);
        l.mul(v.poch(&v.q, nk, "n_k")? * &v.poch(&v.a[k], nk, "n_k")?);
        l.pow(&v.a[k], -pk - pk1, "a_k^(N_k+N_(k-1))");
        l.pow(&v.q, pk1 - pk, "q^(N_k-N_(k-1))");
    }
    Ok(())
}

/// Typeset Gamma-form norm of the classical system.
fn racah_norm_printed<T: Num>(p: &ClassicalParams<T>, n: &MultiIndex) -> Result<Frac<T>> {
    let s = p.s;
    let a = |k: usize| &p.a[k - 1];
    let al = alphas(&p.a);
    let eta = &p.eta;
    let one = eta.one_like();
    let nn = eta.lift(p.big_n as i64);
    let ns = n.total();
    let a1 = a(1);
    let mut l = Frac::new(eta);
    l.mul(rising(&(al[s].clone() + &nn), ns));
    l.mul(rising(&(eta.clone() + &one - a1 - &nn), ns) * &rising(&(-nn.clone()), ns));
    l.mul(gamma(&(a1.clone() - eta))? * &gamma(&(al[s].clone() + &nn + &one))?);
    l.mul(gamma(&(al[s + 1].clone() - a1 + eta + &eta.lift(ns as i64) + &nn + &one))?);
    l.div(gamma(a1)?, "Gamma(a_1)");
    l.div(gamma(&(eta.clone() + &one))?, "Gamma(eta+1)");
    l.div(gamma(&(a(s + 1).clone() + &nn))?, "Gamma(a_(s+1)+N)");
    l.div(gamma(&(a1.clone() - eta + &nn))?, "Gamma(a_1-eta+N)");
    for k in 1..=s {
        let nk = n.n(k);
        let sk = eta.lift((n.partial(k) + n.partial(k - 1)) as i64);
        l.div(al[k].clone(), "alpha_k");
        l.mul(rising(&one, nk));
        l.mul(rising(&(al[k + 1].clone() - a1 + eta + &sk), nk));
        l.mul(gamma(&(a(k + 1).clone() + &eta.lift(nk as i64)))?);
        l.mul(gamma(&(al[k].clone() - a1 + &sk + &one))?);
        let e = eta.lift(2 * n.partial(k) as i64);
        l.div(gamma(&(al[k + 1].clone() - a1 + eta + &e + &one))?, "Gamma(alpha_(k+1)-a_1+eta+2N_k+1)");
    }
    Ok(l)
}

/// Classical norm rebuilt by summing the chain of single-variable Racah
/// orthogonalities, with `h = η - a_1`:
///
/// `K · (α_s+1)_N (h+α_{s+1}+1)_N / ((a_{s+1})_N (-h)_N)
///  · (h+α_{s+1}+N+1, α_{s+1}+N, h+1-N, -N)_{N_s}
///  · ∏_k n_k! (a_{k+1})_{n_k} (h+α_k+1)_{N_k+N_{k-1}} (h+α_{k+1})
///        / ((h+α_{k+1})_{N_k+N_{k-1}} (h+α_{k+1}+2N_k))`
///
/// where `K = ∏_{k=1}^{s-1} Γ(a_{k+1}) Γ(α_{k+1}) / Γ(α_k + 1)`.
fn racah_norm_amended<T: Num>(p: &ClassicalParams<T>, n: &MultiIndex) -> Result<Frac<T>> {
    let s = p.s;
    let a = |k: usize| &p.a[k - 1];
    let al = alphas(&p.a);
    let one = p.eta.one_like();
    let h = p.eta.clone() - a(1);
    let nb = p.big_n;
    let nn = p.eta.lift(nb as i64);
    let ns = n.total();
    let mut l = Frac::new(&p.eta);
    for k in 1..s {
        l.mul(gamma(a(k + 1))? * &gamma(&al[k + 1])?);
        l.div(gamma(&(al[k].clone() + &one))?, "Gamma(alpha_k+1)");
    }
    l.mul(rising(&(al[s].clone() + &one), nb) * &rising(&(h.clone() + &al[s + 1] + &one), nb));
    l.div(rising(a(s + 1), nb), "(a_(s+1))_N");
    l.div(rising(&(-h.clone()), nb), "(a_1-eta)_N");
    l.mul(rising(&(h.clone() + &al[s + 1] + &nn + &one), ns) * &rising(&(al[s + 1].clone() + &nn), ns));
    l.mul(rising(&(h.clone() + &one - &nn), ns) * &rising(&(-nn.clone()), ns));
    for k in 1..=s {
        let nk = n.n(k);
        let sk = n.partial(k) + n.partial(k - 1);
        let hk1 = h.clone() + &al[k + 1];
        l.mul(rising(&one, nk) * &rising(a(k + 1), nk));
        l.mul(rising(&(h.clone() + &al[k] + &one), sk) * &hk1);
        l.div(rising(&hk1, sk), "(h+alpha_(k+1))_(N_k+N_(k-1))");
        l.div(hk1.clone() + &p.eta.lift(2 * n.partial(k) as i64), "h+alpha_(k+1)+2N_k");
    }
    Ok(l)
}

fn norm_frac<T: Num>(f: &FamilyMV<T>, n: &MultiIndex) -> Result<Frac<T>> {
    if let ParamSetMV::Classical(p) = &f.params {
        return match f.variants.racah_norm {
            Reading::Printed => racah_norm_printed(p, n),
            Reading::Amended => racah_norm_amended(p, n),
        };
    }
    let v = View::new(f.params.as_q()?);
    let var = &f.variants;
    let mut l = Frac::new(&v.q);
    match f.id {
        FamilyId::QRacahMV => qracah_norm(&v, n, &mut l)?,
        FamilyId::QRacahMV2 => qracah2_norm(&v, n, var.tail_sums, &mut l)?,
        FamilyId::DualQHahnMV => dual_norm(&v, n, &mut l)?,
        FamilyId::DualQHahnMV2 => dual2_norm(&v, n, var.tail_sums, &mut l)?,
        FamilyId::DualQHahnStarMV => dstar_norm(&v, n, var.dstar_norm, &mut l)?,
        FamilyId::QHahnMV => hahn_norm(&v, n, var.hahn_norm_power, &mut l)?,
        FamilyId::QKrawtchoukMV => krawtchouk_norm(&v, n, var.krawtchouk_norm, &mut l)?,
        FamilyId::QMeixnerMV => meixner_norm(&v, n, false, &mut l)?,
        FamilyId::QCharlierMV => meixner_norm(&v, n, true, &mut l)?,
        FamilyId::RacahClassicalMV => unreachable!("handled above"),
    }
    Ok(l)
}

/// The squared norm `λ_n`.
pub fn eval_norm_mv<T: Num>(f: &FamilyMV<T>, n: &MultiIndex) -> Result<T> {
    f.check_index(n)?;
    norm_frac(f, n)?.finish()
}

/// The parameter permutation that exchanges the two q-Racah families:
/// `a_1 -> (A_s q^{2N})^{-1}`, `a_{k+1} -> a_{s-k+1}`, `a_{s+1} -> bq`,
/// `b -> a_{s+1}/q`, at root level. It is an involution.
pub fn permuted_params<T: Num>(p: &QParams<T>) -> Result<QParams<T>> {
    let s = p.s;
    let b = p.b.as_ref().ok_or_else(|| Error::InvalidParams("permutation needs b".into()))?;
    if p.a.len() != s + 1 {
        return Err(Error::InvalidParams("permutation needs a_1..a_(s+1)".into()));
    }
    let mut ras = p.a[0].clone();
    for a in &p.a[1..s] {
        ras = ras.mul(a);
    }
    let mut a = vec![ras.times_half_pow(&p.q, 2 * p.big_n as i64)?.recip()?];
    for k in 1..s {
        a.push(p.a[s - k].clone());
    }
    a.push(b.mul(&p.q));
    Ok(QParams { s, q: p.q.clone(), a, b: Some(p.a[s].div(&p.q)?), beta: p.beta.clone(), big_n: p.big_n })
}

/// Every vanishing denominator met by the polynomial, weight and norm
/// formulas over the given lattice and index list.
pub fn validate_params_mv<T: Num>(f: &FamilyMV<T>, lattice: &[LatticePoint], indices: &[MultiIndex]) -> Vec<String> {
    let mut out = Vec::new();
    for n in indices {
        for x in lattice {
            match factors(f, n, x) {
                Ok(fs) => {
                    let mut local = Vec::new();
                    for s in &fs.series {
                        s.scan(&mut local);
                    }
                    out.extend(local.into_iter().map(|m| format!("polynomial {n} at {x}: {m}")));
                }
                Err(e) => out.push(format!("polynomial {n} at {x}: {e}")),
            }
        }
        if matches!(f.params, ParamSetMV::Q(_)) {
            match norm_frac(f, n) {
                Ok(l) => out.extend(l.zeros().iter().map(|z| format!("norm {n}: {z}"))),
                Err(e) => out.push(format!("norm {n}: {e}")),
            }
        } else if let Err(e) = eval_norm_mv(f, n) {
            out.push(format!("norm {n}: {e}"));
        }
    }
    for x in lattice {
        if matches!(f.params, ParamSetMV::Q(_)) {
            match weight_frac(f, x) {
                Ok(w) => out.extend(w.zeros().iter().map(|z| format!("weight {x}: {z}"))),
                Err(e) => out.push(format!("weight {x}: {e}")),
            }
        } else if let Err(e) = eval_weight_mv(f, x) {
            out.push(format!("weight {x}: {e}"));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eval_poly_1v, Family1V};
    use rug::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn rp(n: i64, d: i64) -> RootParam<Rational> {
        RootParam::new(r(n, d))
    }

    /// q = 1/4, a = 1/9, 1/25, 1/49, b = 1/121, N = 3.
    fn example() -> FamilyMV<Rational> {
        let p = QParams {
            s: 2,
            q: rp(1, 2),
            a: vec![rp(1, 3), rp(1, 5), rp(1, 7)],
            b: Some(rp(1, 11)),
            beta: None,
            big_n: 3,
        };
        FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(p)).unwrap()
    }

    fn pt(v: &[usize]) -> LatticePoint {
        LatticePoint(v.to_vec())
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn degree_zero_is_one() {
        let f = example();
        for x in [[0, 0], [1, 2], [3, 3]] {
            assert_eq!(eval_poly_mv(&f, &mi(&[0, 0]), &pt(&x)).unwrap(), r(1, 1));
        }
    }

    #[test]
    fn worked_example_values() {
        // Independent transcription with term-by-term 4φ3 sums.
        let f = example();
        let v = eval_poly_mv(&f, &mi(&[1, 1]), &pt(&[1, 2])).unwrap();
        assert_eq!(v, "12485595052108341/479756288000".parse::<Rational>().unwrap());
        let w = eval_weight_mv(&f, &pt(&[1, 2])).unwrap();
        assert_eq!(w, "-222187645440039569/5615975625000".parse::<Rational>().unwrap());
        let l = eval_norm_mv(&f, &mi(&[1, 0])).unwrap();
        assert_eq!(l, "3302568454186048352713585057839/991232000000000000".parse::<Rational>().unwrap());
    }

    #[test]
    fn one_variable_reduces_to_single_factor() {
        // s = 1: r_n(x; b, a_2/q, a_1 q^N, N).
        let (q, a1, a2, b) = (rp(1, 2), rp(1, 3), rp(2, 5), rp(1, 7));
        let nn = 4;
        let p =
            QParams { s: 1, q: q.clone(), a: vec![a1.clone(), a2.clone()], b: Some(b.clone()), beta: None, big_n: nn };
        let f = FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(p)).unwrap();
        let g = Family1V::QRacah {
            q: q.clone(),
            a: b,
            b: a2.div(&q).unwrap(),
            c: a1.times_half_pow(&q, nn as i64).unwrap(),
            big_n: nn,
        };
        for n in 0..=nn {
            for x in 0..=nn {
                assert_eq!(eval_poly_mv(&f, &mi(&[n]), &pt(&[x])).unwrap(), eval_poly_1v(&g, n, x).unwrap());
            }
        }
    }

    #[test]
    fn weight_at_origin_is_the_prefactor_chain() {
        let f = example();
        let ParamSetMV::Q(p) = &f.params else { unreachable!() };
        let q = p.q.value();
        let a: Vec<Rational> = p.a.iter().map(|v| v.value()).collect();
        let big_a = |k: usize| a[..k].iter().fold(r(1, 1), |acc, v| acc * v);
        let nn = 3;
        let mut want = qpoch(&q, &q, nn) * qpoch(&(q.clone() * big_a(2)), &q, nn)
            / (qpoch(&a[2], &q, nn) * qpoch(&big_a(3), &q, nn));
        // k = 2 is the only factor with x_{k+1} > 0 at x = (0, 0)
        want *= qpoch(&a[2], &q, nn) * qpoch(&big_a(3), &q, nn)
            / (qpoch(&q, &q, nn) * qpoch(&(q.clone() * big_a(2)), &q, nn));
        assert_eq!(eval_weight_mv(&f, &pt(&[0, 0])).unwrap(), want);
    }

    #[test]
    fn norm_at_zero_index() {
        let f = example();
        let ParamSetMV::Q(p) = &f.params else { unreachable!() };
        let q = p.q.value();
        let a: Vec<Rational> = p.a.iter().map(|v| v.value()).collect();
        let b = p.b.as_ref().unwrap().value();
        let a_s = a[0].clone() * &a[1];
        let a_s1 = a_s.clone() * &a[2];
        let nn = 3;
        let want = qpoch(&(q.clone() * &a_s), &q, nn) * qpoch(&(q.clone() * &b * &a_s1 / &a[0]), &q, nn)
            / (qpoch(&a[2], &q, nn) * qpoch(&(a[0].clone() / &b), &q, nn))
            * int_pow(&(a[0].clone() / (q.clone() * &b * &a_s)), nn as i64).unwrap();
        assert_eq!(eval_norm_mv(&f, &mi(&[0, 0])).unwrap(), want);
    }

    #[test]
    fn charlier_weight_and_norm_at_origin() {
        use rug::Float;
        let fl = |v: f64| RootParam::new(Float::with_val(256, v));
        let p = QParams { s: 2, q: fl(0.5), a: vec![fl(3.0), fl(4.0)], b: None, beta: None, big_n: 0 };
        let f = FamilyMV::new(FamilyId::QCharlierMV, ParamSetMV::Q(p)).unwrap();
        assert_eq!(eval_weight_mv(&f, &pt(&[0, 0])).unwrap(), Float::with_val(256, 1));
        let q = Float::with_val(256, 0.25);
        let a_s = Float::with_val(256, 16);
        let tol = Float::with_val(256, Float::parse("1e-80").unwrap());
        let want = qpoch_inf(&(q.clone() / &a_s), &q, &tol).unwrap();
        let got = eval_norm_mv(&f, &mi(&[0, 0])).unwrap();
        assert!(Float::with_val(256, &got - &want).abs() < 1e-70);
    }

    #[test]
    fn permutation_is_an_involution() {
        let ParamSetMV::Q(p) = example().params else { unreachable!() };
        assert_eq!(permuted_params(&permuted_params(&p).unwrap()).unwrap(), p);
        // s = 1: a_1 -> (a_1 q^{2N})^{-1}, a_2 -> bq, b -> a_2/q
        let p1 = QParams { s: 1, q: rp(1, 2), a: vec![rp(1, 3), rp(2, 5)], b: Some(rp(1, 7)), beta: None, big_n: 2 };
        let pp = permuted_params(&p1).unwrap();
        assert_eq!(pp.a[0].value(), r(9 * 16 * 16, 1));
        assert_eq!(pp.a[1].value(), r(1, 49) * r(1, 4));
        assert_eq!(pp.b.unwrap().value(), r(4, 25) * r(4, 1));
    }

    #[test]
    fn validation_names_constructed_zeros() {
        // a_1/b = q^{-1}: (a_1/b;q)_N vanishes for N >= 2.
        let p = QParams {
            s: 2,
            q: rp(1, 2),
            a: vec![rp(2, 3), rp(1, 5), rp(1, 7)],
            b: Some(rp(1, 3)),
            beta: None,
            big_n: 2,
        };
        let f = FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(p)).unwrap();
        let lat = crate::verify::simplex(2, 2);
        let idx = crate::verify::enumerate_indices(2, 2);
        let v = validate_params_mv(&f, &lat, &idx);
        assert!(v.iter().any(|m| m.contains("(a_1/b;q)_N")), "{v:?}");
        // A_{s+1} = q^{1-N}: the weight prefactor (A_{s+1};q)_N vanishes.
        let p = QParams {
            s: 2,
            q: rp(1, 2),
            a: vec![rp(2, 1), rp(3, 1), rp(2, 3)],
            b: Some(rp(1, 3)),
            beta: None,
            big_n: 3,
        };
        let f = FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(p)).unwrap();
        let v = validate_params_mv(&f, &crate::verify::simplex(2, 3), &crate::verify::enumerate_indices(2, 3));
        assert!(v.iter().any(|m| m.contains("(A_(s+1);q)_N")), "{v:?}");
        let f = example();
        let v = validate_params_mv(&f, &crate::verify::simplex(2, 3), &crate::verify::enumerate_indices(2, 3));
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn shape_errors() {
        let p = QParams { s: 2, q: rp(1, 2), a: vec![rp(1, 3)], b: Some(rp(1, 3)), beta: None, big_n: 2 };
        assert!(FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(p.clone())).is_err());
        let p = QParams { a: vec![rp(1, 3), rp(1, 5), rp(1, 7)], b: None, ..p };
        assert!(FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(p.clone())).is_err());
        assert!(FamilyMV::new(FamilyId::QMeixnerMV, ParamSetMV::Q(p)).is_err());
        let f = example();
        assert!(matches!(eval_poly_mv(&f, &mi(&[2, 2]), &pt(&[0, 0])), Err(Error::OutOfRange(_))));
        assert!(matches!(eval_poly_mv(&f, &mi(&[1, 0]), &pt(&[2, 1])), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn family_names_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.name().parse::<FamilyId>().unwrap(), id);
        }
        assert!("nope".parse::<FamilyId>().is_err());
    }

    #[test]
    fn tail_sums() {
        let n = mi(&[1, 2, 3]);
        assert_eq!((n.tail(1), n.tail(2), n.tail(3), n.tail(4)), (6, 5, 3, 0));
        assert_eq!((n.partial(0), n.partial(2)), (0, 3));
        assert_eq!(n.tail_product(2), 6);
    }
}
