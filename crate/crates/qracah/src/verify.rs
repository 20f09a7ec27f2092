//! Gram-matrix engine, truncation plans, identity and limit suites.
//!
//! A Gram check evaluates every polynomial once per lattice point, forms
//! the weighted outer products over fixed contiguous chunks of the lattice
//! and adds the chunk sums in chunk order, so results do not depend on the
//! thread count.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::families::{dual_series, qracah_series, Family1V};
use crate::multivar::{
    eval_norm_mv, eval_poly_mv, eval_weight_mv, factors, permuted_params, validate_params_mv, ClassicalParams,
    FamilyId, FamilyMV, LatticePoint, MultiIndex, ParamSetMV, QParams, Reading, Variants,
};
use crate::qseries::qpoch;
use crate::scalar::{int_pow, Num, RootParam};
use crate::{Error, Result};

/// Lattice points handled by one reduction chunk.
const CHUNK: usize = 16;

/// Default degree cap for the infinite-support families.
pub const DEFAULT_DEGREE_CAP: usize = 4;

/// Shells examined before giving up on a contracting tail.
pub const MAX_SHELLS: usize = 600;

/// Every nondecreasing `0 <= x_1 <= ... <= x_s <= top`, ordered by `x_s`,
/// then `x_{s-1}`, and so on (so points with equal `x_s` are contiguous).
pub fn simplex(s: usize, top: usize) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for last in 0..=top {
        shell(s, last, &mut out);
    }
    out
}

/// Points with `x_s = last`, in the same order as [`simplex`].
pub fn shell(s: usize, last: usize, out: &mut Vec<LatticePoint>) {
    if s == 1 {
        out.push(LatticePoint(vec![last]));
        return;
    }
    let mut inner = Vec::new();
    for top in 0..=last {
        inner.clear();
        shell(s - 1, top, &mut inner);
        for p in &inner {
            let mut v = p.0.clone();
            v.push(last);
            out.push(LatticePoint(v));
        }
    }
}

/// The orthogonality lattice of `f`. Infinite-support families need `cap`,
/// the largest `x_s`; the finite families ignore it.
pub fn enumerate_lattice<T: Num>(f: &FamilyMV<T>, cap: Option<usize>) -> Result<Vec<LatticePoint>> {
    let top = if f.id.infinite() { cap.ok_or(Error::MissingCap)? } else { f.big_n() };
    Ok(simplex(f.s(), top))
}

/// All degree vectors of length `s` with total at most `total`, in
/// lexicographic order.
pub fn enumerate_indices(s: usize, total: usize) -> Vec<MultiIndex> {
    fn rec(s: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if cur.len() == s {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(s, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, total, &mut Vec::with_capacity(s), &mut out);
    out
}

/// Degree vectors for `f`: total at most `N`, or at most the cap for the
/// infinite-support families.
pub fn family_indices<T: Num>(f: &FamilyMV<T>, cap: Option<usize>) -> Vec<MultiIndex> {
    let total = if f.id.infinite() { cap.unwrap_or(DEFAULT_DEGREE_CAP) } else { f.big_n() };
    enumerate_indices(f.s(), total)
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

/// Index of `(i, j)`, `i <= j`, in a packed upper triangle of side `m`.
fn tri(i: usize, j: usize, m: usize) -> usize {
    i * m - i * (i + 1) / 2 + j
}

/// Weight and all polynomial values at one point; `None` when the weight
/// vanishes.
fn point_values<T: Num>(f: &FamilyMV<T>, idx: &[MultiIndex], x: &LatticePoint) -> Result<Option<(T, Vec<T>)>> {
    let rho = eval_weight_mv(f, x).map_err(|e| e.context(format!("weight at {x}")))?;
    if rho.is_zero() {
        return Ok(None);
    }
    let mut vals = Vec::with_capacity(idx.len());
    for n in idx {
        let v = factors(f, n, x).and_then(|fs| fs.eval()).map_err(|e| e.context(format!("polynomial {n} at {x}")))?;
        vals.push(v);
    }
    Ok(Some((rho, vals)))
}

/// Packed upper triangle of `Σ_x P_n(x) P_m(x) ρ(x)` over `lattice`.
pub fn gram_matrix<T: Num>(
    f: &FamilyMV<T>,
    lattice: &[LatticePoint],
    idx: &[MultiIndex],
    threads: usize,
) -> Result<Vec<T>> {
    let m = idx.len();
    let like = zero_of(f);
    let chunk_sum = |chunk: &[LatticePoint]| -> Result<Vec<T>> {
        let mut acc = vec![like.clone(); m * (m + 1) / 2];
        for x in chunk {
            if let Some((rho, vals)) = point_values(f, idx, x)? {
                for i in 0..m {
                    if vals[i].is_zero() {
                        continue;
                    }
                    let wi = vals[i].clone() * &rho;
                    for j in i..m {
                        acc[tri(i, j, m)] += &(wi.clone() * &vals[j]);
                    }
                }
            }
        }
        Ok(acc)
    };
    let partials: Vec<Result<Vec<T>>> = pool(threads)?.install(|| lattice.par_chunks(CHUNK).map(chunk_sum).collect());
    let mut total = vec![like; m * (m + 1) / 2];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p?) {
            *t += &v;
        }
    }
    Ok(total)
}

/// A zero in the backend and precision of `f`'s parameters.
fn zero_of<T: Num>(f: &FamilyMV<T>) -> T {
    match &f.params {
        ParamSetMV::Q(p) => p.q.root().zero_like(),
        ParamSetMV::Classical(p) => p.eta.zero_like(),
    }
}

/// Geometric tail estimate for the infinite-support sums.
#[derive(Clone, Debug, Serialize)]
pub struct TruncationPlan {
    /// Largest `x_s` summed.
    pub x_max: usize,
    /// Largest shell-to-shell ratio over the last five shells.
    pub ratio: f64,
    /// `T(x_max) · ratio / (1 - ratio)`, where `T(X)` is the largest scaled
    /// shell sum `Σ_{x_s = X} |P_n P_m ρ| / sqrt|λ_n λ_m|`.
    pub bound: f64,
    pub degree_cap: usize,
    pub tol: f64,
}

/// Finds the smallest cutoff whose geometric tail bound is below `tol`.
pub fn plan_truncation<T: Num>(f: &FamilyMV<T>, degree_cap: usize, tol: f64, threads: usize) -> Result<TruncationPlan> {
    if !f.id.infinite() {
        return Err(Error::InvalidParams(format!("{} has finite support", f.id)));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    let p = f.params.as_q()?;
    let s = p.s;
    let q = p.q.value();
    let decay = if s >= 2 { p.a[s - 2].value() * &p.a[s - 1].value() } else { p.a[0].value() };
    // |P_n|^2 grows like q^(-2|n| x_s) while ρ decays like (q/(a_(s-1) a_s))^(x_s),
    // so the shell sums shrink geometrically only when this is below 1.
    let geo = int_pow(&q, 1 - 2 * degree_cap as i64)?.try_div(&decay)?.abs().to_f64();
    if geo >= 1.0 {
        return Err(Error::NonContracting(format!(
            "|q^(1-2 cap)/(a_(s-1) a_s)| = {geo} is not below 1; increase a_(s-1) a_s or lower the degree cap"
        )));
    }
    let idx = enumerate_indices(s, degree_cap);
    let m = idx.len();
    let mut inv_norm = Vec::with_capacity(m);
    for n in &idx {
        let l = eval_norm_mv(f, n)?;
        inv_norm.push(l.abs().sqrt()?.recip()?);
    }
    let pool = pool(threads)?;
    let mut shells: Vec<f64> = Vec::new();
    let mut pts = Vec::new();
    for x_s in 0..MAX_SHELLS {
        pts.clear();
        shell(s, x_s, &mut pts);
        let per_point: Vec<Result<Option<Vec<T>>>> = pool.install(|| {
            pts.par_iter()
                .map(|x| {
                    let Some((rho, vals)) = point_values(f, &idx, x)? else { return Ok(None) };
                    let root = rho.abs().sqrt()?;
                    Ok(Some(vals.iter().zip(&inv_norm).map(|(v, w)| v.abs() * w * &root).collect()))
                })
                .collect()
        });
        // scaled |P_n| sqrt(ρ) per point; the shell sum of products gives T(X)
        let mut sums = vec![zero_of(f); m * (m + 1) / 2];
        for r in per_point {
            if let Some(v) = r? {
                for i in 0..m {
                    for j in i..m {
                        sums[tri(i, j, m)] += &(v[i].clone() * &v[j]);
                    }
                }
            }
        }
        let t = sums.iter().map(|v| v.to_f64()).fold(0.0, f64::max);
        shells.push(t);
        if shells.len() < 6 {
            continue;
        }
        let tail = &shells[shells.len() - 6..];
        let mut ratio: f64 = 0.0;
        for w in tail.windows(2) {
            let r = if w[0] == 0.0 {
                if w[1] == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                w[1] / w[0]
            };
            ratio = ratio.max(r);
        }
        if ratio < 1.0 {
            let bound = t * ratio / (1.0 - ratio);
            if bound < tol {
                return Ok(TruncationPlan { x_max: x_s, ratio, bound, degree_cap, tol });
            }
        }
    }
    let last = shells.last().copied().unwrap_or(0.0);
    Err(Error::NonContracting(format!(
        "shell sums still {last:e} after {MAX_SHELLS} shells; increase a_(s-1) a_s or lower the degree cap"
    )))
}

/// Options for [`gram`].
#[derive(Clone, Debug)]
pub struct GramOptions {
    pub threads: usize,
    /// Pass threshold for float runs (scaled residual).
    pub tol: f64,
    /// Degree cap for the infinite-support families.
    pub degree_cap: Option<usize>,
    /// Record the wall time in the report.
    pub timing: bool,
    /// Test hook: multiply every norm by 2 before comparing.
    pub corrupt_norms: bool,
}

impl Default for GramOptions {
    fn default() -> Self {
        Self { threads: 1, tol: 1e-20, degree_cap: None, timing: false, corrupt_norms: false }
    }
}

/// One formula reading in force for the checked family.
#[derive(Clone, Debug, Serialize)]
pub struct VariantNote {
    pub key: &'static str,
    pub shipped: &'static str,
    pub alternative: &'static str,
}

/// Outcome of one Gram check.
#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub family: FamilyId,
    pub relation: &'static str,
    pub backend: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub params: String,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
    pub indices: Vec<MultiIndex>,
    pub lattice_size: usize,
    pub norms: Vec<String>,
    /// `r_{n,m} = G_{n,m} - λ_n δ_{n,m}`, full symmetric matrix.
    pub residual_matrix: Vec<Vec<String>>,
    pub max_abs_residual: String,
    /// Largest `|r_{n,m}| / sqrt|λ_n λ_m|`.
    pub max_scaled_residual: f64,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationPlan>,
    pub passed: bool,
    /// Up to ten nonzero (exact) or over-tolerance (float) entries.
    pub failures: Vec<String>,
    pub variants: Vec<VariantNote>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

/// The readings in force for `f`, with the alternatives.
pub fn variant_notes<T>(f: &FamilyMV<T>) -> Vec<VariantNote> {
    let related = |id: FamilyId, item: FamilyId| match item {
        FamilyId::QRacahMV2 => matches!(id, FamilyId::QRacahMV2 | FamilyId::DualQHahnMV2),
        other => other == id,
    };
    Variants::ITEMS
        .iter()
        .filter(|it| related(f.id, it.family))
        .map(|it| {
            let r = f.variants.get(it.key).expect("known key");
            let (shipped, alternative) = match r {
                Reading::Printed => (it.printed, it.amended),
                Reading::Amended => (it.amended, it.printed),
            };
            VariantNote { key: it.key, shipped, alternative }
        })
        .collect()
}

/// Runs the full Gram check for `f`.
pub fn gram<T: Num>(f: &FamilyMV<T>, opts: &GramOptions) -> Result<GramReport> {
    let start = Instant::now();
    let cap = opts.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
    let truncation = if f.id.infinite() { Some(plan_truncation(f, cap, opts.tol, opts.threads)?) } else { None };
    let lattice = enumerate_lattice(f, truncation.as_ref().map(|t| t.x_max))?;
    let idx = family_indices(f, Some(cap));
    let g = gram_matrix(f, &lattice, &idx, opts.threads)?;
    let m = idx.len();
    let mut norms = Vec::with_capacity(m);
    for n in &idx {
        let mut l = eval_norm_mv(f, n).map_err(|e| e.context(format!("norm {n}")))?;
        if opts.corrupt_norms {
            l = l.lift(2) * &l;
        }
        norms.push(l);
    }
    let zero = zero_of(f);
    let mut residual = vec![vec![String::new(); m]; m];
    let mut max_abs = zero.clone();
    let mut max_scaled: f64 = 0.0;
    let mut failures = Vec::new();
    let bound = truncation.as_ref().map_or(0.0, |t| t.bound);
    for i in 0..m {
        for j in i..m {
            let mut r = g[tri(i, j, m)].clone();
            if i == j {
                r -= &norms[i];
            }
            let scale = (norms[i].clone() * &norms[j]).abs().to_f64().sqrt();
            let scaled = if r.is_zero() { 0.0 } else { r.abs().to_f64() / scale };
            let bad = if T::EXACT { !r.is_zero() } else { scaled.is_nan() || scaled > opts.tol + bound };
            if bad && failures.len() < 10 {
                let what = if i == j { "diagonal" } else { "off-diagonal" };
                failures.push(format!("{what} entry ({}, {}): residual {}", idx[i], idx[j], r.to_text()));
            }
            if r.abs() > max_abs {
                max_abs = r.abs();
            }
            if scaled.is_nan() {
                max_scaled = f64::NAN;
            } else {
                max_scaled = max_scaled.max(scaled);
            }
            let text = r.to_text();
            residual[j][i] = text.clone();
            residual[i][j] = text;
        }
    }
    let passed = failures.is_empty() && !max_scaled.is_nan();
    Ok(GramReport {
        family: f.id,
        relation: f.id.relation(),
        backend: if T::EXACT { "exact" } else { "float" },
        precision: zero.precision(),
        params: f.params.describe(),
        s: f.s(),
        big_n: (!f.id.infinite()).then(|| f.big_n()),
        indices: idx,
        lattice_size: lattice.len(),
        norms: norms.iter().map(|l| l.to_text()).collect(),
        residual_matrix: residual,
        max_abs_residual: max_abs.to_text(),
        max_scaled_residual: max_scaled,
        exact: T::EXACT,
        tol: (!T::EXACT).then_some(opts.tol),
        truncation,
        passed,
        failures,
        variants: variant_notes(f),
        wall_time_ms: opts.timing.then(|| start.elapsed().as_millis()),
    })
}

// ---- typo arbitration ----

/// Exact Gram outcome of both readings of one formula.
#[derive(Clone, Debug, Serialize)]
pub struct Arbitration {
    pub key: &'static str,
    pub family: FamilyId,
    pub printed_passes: Vec<bool>,
    pub amended_passes: Vec<bool>,
}

impl Arbitration {
    /// The reading that passed at every parameter set, if exactly one did.
    pub fn winner(&self) -> Option<Reading> {
        let p = self.printed_passes.iter().all(|&b| b);
        let a = self.amended_passes.iter().all(|&b| b);
        match (p, a) {
            (true, false) => Some(Reading::Printed),
            (false, true) => Some(Reading::Amended),
            _ => None,
        }
    }
}

/// Runs the exact Gram check with each reading of `key` at every parameter
/// set. The classical items run in the float backend with tolerance `1e-25`.
pub fn arbitrate(key: &'static str, sets: &[ParamSetMV<Rational>], threads: usize) -> Result<Arbitration> {
    let item = Variants::ITEMS
        .iter()
        .find(|it| it.key == key)
        .ok_or_else(|| Error::Parse(format!("unknown variant key {key:?}")))?;
    let mut printed = Vec::new();
    let mut amended = Vec::new();
    for p in sets {
        for (r, out) in [(Reading::Printed, &mut printed), (Reading::Amended, &mut amended)] {
            let v = Variants::default().with(key, r)?;
            let passed = if item.family == FamilyId::RacahClassicalMV {
                let pf = params_to_float(p, crate::scalar::DEFAULT_PRECISION);
                let f = FamilyMV::new(item.family, pf)?.with_variants(v);
                let opts = GramOptions { threads, tol: 1e-25, ..GramOptions::default() };
                gram(&f, &opts).map(|g| g.passed).unwrap_or(false)
            } else {
                let f = FamilyMV::new(item.family, p.clone())?.with_variants(v);
                gram(&f, &GramOptions { threads, ..GramOptions::default() }).map(|g| g.passed).unwrap_or(false)
            };
            out.push(passed);
        }
    }
    Ok(Arbitration { key, family: item.family, printed_passes: printed, amended_passes: amended })
}

// ---- parameters ----

/// Converts rational parameters to floats at `prec` bits.
pub fn params_to_float(p: &ParamSetMV<Rational>, prec: u32) -> ParamSetMV<Float> {
    let fl = |r: &Rational| Float::with_val(prec, r);
    let root = |r: &RootParam<Rational>| RootParam::new(fl(r.root()));
    match p {
        ParamSetMV::Q(p) => ParamSetMV::Q(QParams {
            s: p.s,
            q: root(&p.q),
            a: p.a.iter().map(root).collect(),
            b: p.b.as_ref().map(root),
            beta: p.beta.as_ref().map(root),
            big_n: p.big_n,
        }),
        ParamSetMV::Classical(p) => ParamSetMV::Classical(ClassicalParams {
            s: p.s,
            a: p.a.iter().map(fl).collect(),
            eta: fl(&p.eta),
            big_n: p.big_n,
        }),
    }
}

/// A root `k/d` with small `d`, drawn in `(0, 1)`.
fn small_root(rng: &mut ChaCha8Rng) -> Rational {
    let d: i64 = rng.gen_range(3..=13);
    let k: i64 = rng.gen_range(1..d);
    Rational::from((k, d))
}

/// Random rational parameters for `id` that pass [`validate_params_mv`].
/// The classical family gets `a_k` in `(1/2, 3)` and `η` in `(0, a_1)`
/// shifted off the integers.
pub fn random_params(id: FamilyId, s: usize, big_n: usize, seed: u64) -> Result<ParamSetMV<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let p = if id == FamilyId::RacahClassicalMV {
            let a: Vec<Rational> = (0..=s).map(|_| Rational::from((rng.gen_range(6..30), 10))).collect();
            let eta = Rational::from((rng.gen_range(1..10) as i64, 10)) * &a[0] + Rational::from((1, 97));
            ParamSetMV::Classical(ClassicalParams { s, a, eta, big_n })
        } else {
            let q = RootParam::new(small_root(&mut rng));
            let a: Vec<_> = (0..id.a_len(s)).map(|_| RootParam::new(small_root(&mut rng))).collect();
            let b = id.needs_b().then(|| RootParam::new(small_root(&mut rng)));
            ParamSetMV::Q(QParams { s, q, a, b, beta: None, big_n })
        };
        let f = match FamilyMV::new(id, p.clone()) {
            Ok(f) => f,
            Err(_) if id == FamilyId::RacahClassicalMV => return Ok(p),
            Err(e) => return Err(e),
        };
        let lattice = enumerate_lattice(&f, None)?;
        let idx = family_indices(&f, None);
        if validate_params_mv(&f, &lattice, &idx).is_empty() && distinct_roots(&p) {
            return Ok(p);
        }
    }
    Err(Error::InvalidParams(format!("no valid random parameters for {id} after 200 draws")))
}

fn distinct_roots(p: &ParamSetMV<Rational>) -> bool {
    let ParamSetMV::Q(p) = p else { return true };
    let mut roots: Vec<&Rational> = p.a.iter().map(|r| r.root()).collect();
    roots.push(p.q.root());
    roots.extend(p.b.as_ref().map(|b| b.root()));
    let before = roots.len();
    roots.sort();
    roots.dedup();
    roots.len() == before
}

// ---- identities ----

/// The exact identities checked by [`check_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `r_n(x; a, b, c, N) = r_n(N - x; b, a, 1/c, N)`, with `a = a_1`,
    /// `b = a_2`, `c = b` taken from the parameter set.
    Sears,
    /// The permuted weight at the reflected point equals the original
    /// weight times the typeset constant.
    WeightPermutation,
    /// As above with the constant recomputed from the weight prefactors.
    WeightPermutationDerived,
    /// The second q-Racah family equals the first one with permuted
    /// parameters, reversed degrees and reflected points.
    SecondFamily,
    /// Summing the first `j` weight and polynomial factors over
    /// `x_1..x_j` leaves the closed form used in the induction step.
    PartialSum,
    /// The q-Hahn weight is unchanged by swapping labels 1 and 2.
    QHahnLabelInvariance,
    /// Swapping labels `s` and `s+1` (with `y_{s+1} = N - Y_s`) changes the
    /// q-Hahn weight by a constant factor.
    QHahnLabelInvarianceExtended,
    /// `ρ_{D*} = (a_1/q)^{x_1} q^{binom(x_1,2)} ρ_D`, as typeset.
    DStarWeightFactor,
    /// `ρ_{D*} = a_1^{x_1} q^{x_1^2} ρ_D`.
    DStarWeightFactorDerived,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::Sears,
        Identity::WeightPermutation,
        Identity::WeightPermutationDerived,
        Identity::SecondFamily,
        Identity::PartialSum,
        Identity::QHahnLabelInvariance,
        Identity::QHahnLabelInvarianceExtended,
        Identity::DStarWeightFactor,
        Identity::DStarWeightFactorDerived,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Sears => "sears",
            Identity::WeightPermutation => "weight_permutation",
            Identity::WeightPermutationDerived => "weight_permutation_derived",
            Identity::SecondFamily => "second_family",
            Identity::PartialSum => "partial_sum",
            Identity::QHahnLabelInvariance => "qhahn_label_invariance",
            Identity::QHahnLabelInvarianceExtended => "qhahn_label_invariance_extended",
            Identity::DStarWeightFactor => "dstar_weight_factor",
            Identity::DStarWeightFactorDerived => "dstar_weight_factor_derived",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Identity::ALL.into_iter().find(|i| i.name() == s).ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub passed: bool,
    /// Number of exact comparisons made.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

struct Tally {
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self { checked: 0, witness: None }
    }

    fn check(&mut self, lhs: &Rational, rhs: &Rational, at: impl FnOnce() -> String) {
        self.checked += 1;
        if lhs != rhs && self.witness.is_none() {
            self.witness = Some(format!("{}: {} != {}", at(), lhs, rhs));
        }
    }

    fn report(self, id: Identity) -> IdentityReport {
        IdentityReport { name: id.name(), passed: self.witness.is_none(), checked: self.checked, witness: self.witness }
    }
}

/// Checks one exact identity over its full range at the given parameters.
/// `p` supplies `q`, `a_1..a_{s+1}`, `b` and `N` as needed.
pub fn check_identity(which: Identity, p: &QParams<Rational>) -> Result<IdentityReport> {
    let mut t = Tally::new();
    match which {
        Identity::Sears => sears(p, &mut t)?,
        Identity::WeightPermutation => weight_permutation(p, false, &mut t)?,
        Identity::WeightPermutationDerived => weight_permutation(p, true, &mut t)?,
        Identity::SecondFamily => second_family(p, &mut t)?,
        Identity::PartialSum => partial_sum(p, &mut t)?,
        Identity::QHahnLabelInvariance => qhahn_swap(p, false, &mut t)?,
        Identity::QHahnLabelInvarianceExtended => qhahn_swap(p, true, &mut t)?,
        Identity::DStarWeightFactor => dstar_factor(p, false, &mut t)?,
        Identity::DStarWeightFactorDerived => dstar_factor(p, true, &mut t)?,
    }
    Ok(t.report(which))
}

fn need_b(p: &QParams<Rational>) -> Result<&RootParam<Rational>> {
    p.b.as_ref().ok_or_else(|| Error::InvalidParams("identity needs b".into()))
}

fn sears(p: &QParams<Rational>, t: &mut Tally) -> Result<()> {
    if p.a.len() < 2 {
        return Err(Error::InvalidParams("Sears check needs a_1 and a_2".into()));
    }
    let (a, b, c) = (&p.a[0], &p.a[1], need_b(p)?);
    let nn = p.big_n;
    let f = Family1V::QRacah { q: p.q.clone(), a: a.clone(), b: b.clone(), c: c.clone(), big_n: nn };
    let g = Family1V::QRacah { q: p.q.clone(), a: b.clone(), b: a.clone(), c: c.recip()?, big_n: nn };
    for n in 0..=nn {
        for x in 0..=nn {
            let lhs = crate::families::eval_poly_1v(&f, n, x)?;
            let rhs = crate::families::eval_poly_1v(&g, n, nn - x)?;
            t.check(&lhs, &rhs, || format!("n = {n}, x = {x}"));
        }
    }
    Ok(())
}

fn qracah(p: &QParams<Rational>, id: FamilyId) -> Result<FamilyMV<Rational>> {
    FamilyMV::new(id, ParamSetMV::Q(p.clone()))
}

/// Products of q-Pochhammers of length `n`.
fn pochs(v: &[Rational], q: &Rational, n: usize) -> Rational {
    v.iter().fold(Rational::from(1), |acc, a| acc * qpoch(a, q, n))
}

fn weight_permutation(p: &QParams<Rational>, derived: bool, t: &mut Tally) -> Result<()> {
    let s = p.s;
    let nn = p.big_n;
    let q = p.q.value();
    let a: Vec<Rational> = p.a.iter().map(|r| r.value()).collect();
    let b = need_b(p)?.value();
    let big_a = |k: usize| a[..k].iter().fold(Rational::from(1), |acc, v| acc * v);
    let (a1, as1) = (&a[0], &a[s]);
    let qa_s = q.clone() * big_a(s);
    let kappa = if derived {
        pochs(&[as1.clone(), a1.clone() / &b, a1.clone() * int_pow(&q, nn as i64)?], &q, nn)
            / pochs(&[qa_s.clone(), b.clone() * &q, big_a(s + 1) * int_pow(&q, nn as i64)?], &q, nn)
    } else {
        pochs(&[as1.clone(), a1.clone() / &b, big_a(s + 1)], &q, nn)
            / pochs(&[a1.clone(), b.clone() * &q, qa_s], &q, nn)
    } * int_pow(&(q.clone() * &b * big_a(s) / a1), nn as i64)?;
    let f = qracah(p, FamilyId::QRacahMV)?;
    let g = qracah(&permuted_params(p)?, FamilyId::QRacahMV)?;
    for x in simplex(s, nn) {
        let lhs = eval_weight_mv(&g, &x.reflected(nn))?;
        let rhs = kappa.clone() * eval_weight_mv(&f, &x)?;
        t.check(&lhs, &rhs, || format!("x = {x}"));
    }
    Ok(())
}

fn second_family(p: &QParams<Rational>, t: &mut Tally) -> Result<()> {
    let nn = p.big_n;
    let f2 = qracah(p, FamilyId::QRacahMV2)?;
    let g = qracah(&permuted_params(p)?, FamilyId::QRacahMV)?;
    for n in enumerate_indices(p.s, nn) {
        for x in simplex(p.s, nn) {
            let lhs = eval_poly_mv(&f2, &n, &x)?;
            let rhs = eval_poly_mv(&g, &n.reversed(), &x.reflected(nn))?;
            t.check(&lhs, &rhs, || format!("n = {n}, x = {x}"));
        }
    }
    Ok(())
}

/// Left side: `Σ_{x_1..x_j} ∏_{k<=j} w_k R_k(n) R_k(m)` with `x_{j+1}` fixed.
/// Right side: `δ_{n,m}` times the closed form in `x_{j+1}`.
fn partial_sum(p: &QParams<Rational>, t: &mut Tally) -> Result<()> {
    let s = p.s;
    if s < 2 {
        return Err(Error::InvalidParams("partial sums need s >= 2".into()));
    }
    let q = p.q.value();
    let a: Vec<Rational> = p.a.iter().map(|r| r.value()).collect();
    let b = need_b(p)?.value();
    let big_a = |k: usize| a[..k].iter().fold(Rational::from(1), |acc, v| acc * v);
    let rbig_a = |k: usize| p.a[..k].iter().fold(RootParam::new(Rational::from(1)), |acc, v| acc.mul(v));
    let a1 = a[0].clone();
    let one = Rational::from(1);
    let qp = |k: i64| int_pow(&q, k);
    let poch = |v: &Rational, n: i64| -> Rational {
        if n < 0 {
            Rational::from(0)
        } else {
            qpoch(v, &q, n as usize)
        }
    };
    // Reciprocal Pochhammer, zero for negative length.
    let rpoch = |v: &Rational, n: i64| -> Rational {
        if n < 0 {
            Rational::from(0)
        } else {
            Rational::from(1) / qpoch(v, &q, n as usize)
        }
    };
    let weight_k = |k: usize, xs: &[i64]| -> Result<Rational> {
        let (lo, hi) = (xs[k - 1], xs[k]);
        let (d, e) = (hi - lo, hi + lo);
        let mut v = poch(&a[k], d)
            * poch(&big_a(k + 1), e)
            * (one.clone() - big_a(k) * qp(2 * lo)?)
            * rpoch(&q, d)
            * rpoch(&(q.clone() * big_a(k)), e)
            / (one.clone() - big_a(k));
        if k == 1 {
            v *= poch(&a1, lo) * poch(&(b.clone() * &q), lo) * rpoch(&q, lo) * rpoch(&(a1.clone() / &b), lo);
            v *= int_pow(&(b.clone() * &q), -lo)?;
        } else {
            v *= int_pow(&a[k - 1], -lo)?;
        }
        Ok(v)
    };
    let factor_k = |k: usize, n: &MultiIndex, xs: &[i64]| -> Result<Rational> {
        let nk1 = n.partial(k - 1) as i64;
        let rb = need_b(p)?;
        let ra = rb.mul(&rbig_a(k)).times_half_pow(&p.q, 2 * nk1)?.div(&p.a[0])?;
        let rbb = p.a[k].div(&p.q)?;
        let rc = rbig_a(k).times_half_pow(&p.q, xs[k] + nk1)?;
        qracah_series(n.n(k), xs[k - 1] - nk1, &p.q, &ra, &rbb, &rc, xs[k] - nk1)?.eval()
    };
    let top = p.big_n;
    for j in 1..s {
        let idx = enumerate_indices(j, top);
        for xj1 in 0..=top {
            for n in &idx {
                for m in &idx {
                    let mut lhs = Rational::from(0);
                    for x in simplex(j, xj1) {
                        let mut xs: Vec<i64> = x.0.iter().map(|&v| v as i64).collect();
                        xs.push(xj1 as i64);
                        let mut v = Rational::from(1);
                        for k in 1..=j {
                            v *= weight_k(k, &xs)? * factor_k(k, n, &xs)? * factor_k(k, m, &xs)?;
                            if v == 0 {
                                break;
                            }
                        }
                        lhs += v;
                    }
                    let rhs = if n != m {
                        Rational::from(0)
                    } else {
                        let pn: Vec<i64> = (0..=j).map(|k| n.partial(k) as i64).collect();
                        let nj = pn[j];
                        let xj = xj1 as i64;
                        let mut v = Rational::from(1);
                        for k in 1..=j {
                            let ba = b.clone() * big_a(k + 1) / &a1;
                            v *= (one.clone() - &ba) / (one.clone() - ba.clone() * qp(2 * pn[k])?);
                            v *= qpoch(&q, &q, n.n(k)) * qpoch(&a[k], &q, n.n(k));
                            v *= poch(&(b.clone() * big_a(k) * &q / &a1), pn[k] + pn[k - 1]);
                            v /= poch(&ba, pn[k] + pn[k - 1]);
                        }
                        v *= poch(&big_a(j + 1), nj + xj) * poch(&(q.clone() * &b * big_a(j + 1) / &a1), nj + xj);
                        v *= rpoch(&q, xj - nj) * rpoch(&(a1.clone() / &b), xj - nj);
                        v *= int_pow(&(b.clone() / &a1), nj)? * qp(nj * nj)?;
                        v *= int_pow(&(b.clone() * big_a(j) * qp(2 * nj + 1)? / &a1), -xj)?;
                        v
                    };
                    t.check(&lhs, &rhs, || format!("j = {j}, x_(j+1) = {xj1}, n = {n}, m = {m}"));
                }
            }
        }
    }
    Ok(())
}

/// Swaps q-Hahn labels 1 and 2 (or `s` and `s+1` when `extended`).
fn qhahn_swap(p: &QParams<Rational>, extended: bool, t: &mut Tally) -> Result<()> {
    let s = p.s;
    let nn = p.big_n;
    if !extended && s < 2 {
        return Err(Error::InvalidParams("label swap (1 2) needs s >= 2".into()));
    }
    let (i, j) = if extended { (s - 1, s) } else { (0, 1) };
    let mut sw = QParams { b: None, ..p.clone() };
    sw.a.swap(i, j);
    let f = qracah(&QParams { b: None, ..p.clone() }, FamilyId::QHahnMV)?;
    let g = qracah(&sw, FamilyId::QHahnMV)?;
    let mut ratio: Option<Rational> = None;
    for x in simplex(s, nn) {
        // composition y_1..y_{s+1} with y_{s+1} = N - Y_s
        let mut y: Vec<usize> = Vec::with_capacity(s + 1);
        let mut prev = 0;
        for &v in x.0.iter().chain(std::iter::once(&nn)) {
            y.push(v - prev);
            prev = v;
        }
        y.swap(i, j);
        let mut acc = 0;
        let swapped = LatticePoint(
            y[..s]
                .iter()
                .map(|v| {
                    acc += v;
                    acc
                })
                .collect(),
        );
        let lhs = eval_weight_mv(&g, &swapped)?;
        let rhs = eval_weight_mv(&f, &x)?;
        if extended {
            if rhs == 0 {
                t.check(&lhs, &rhs, || format!("y = {x}"));
                continue;
            }
            let r = lhs / &rhs;
            match &ratio {
                None => {
                    t.checked += 1;
                    ratio = Some(r);
                }
                Some(r0) => t.check(&r, r0, || format!("weight ratio at Y = {x}")),
            }
        } else {
            t.check(&lhs, &rhs, || format!("Y = {x}"));
        }
    }
    Ok(())
}

fn dstar_factor(p: &QParams<Rational>, derived: bool, t: &mut Tally) -> Result<()> {
    let s = p.s;
    let nn = p.big_n;
    let q = p.q.value();
    let a1 = p.a[0].value();
    let base = QParams { b: None, ..p.clone() };
    let d = qracah(&base, FamilyId::DualQHahnMV)?;
    let ds = qracah(&base, FamilyId::DualQHahnStarMV)?;
    for x in simplex(s, nn) {
        let x1 = x.0[0] as i64;
        let factor = if derived {
            int_pow(&a1, x1)? * int_pow(&q, x1 * x1)?
        } else {
            int_pow(&(a1.clone() / &q), x1)? * int_pow(&q, x1 * (x1 - 1) / 2)?
        };
        let lhs = eval_weight_mv(&ds, &x)?;
        let rhs = factor * eval_weight_mv(&d, &x)?;
        t.check(&lhs, &rhs, || format!("x = {x}"));
    }
    Ok(())
}

// ---- limits ----

/// Limit transitions checked by [`check_limit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    /// q-Racah system with `b = ε` against the dual q-Hahn system.
    BToZero,
    /// q-Racah system with `b = 1/ε`, times `∏ (b A_k q^{2N_{k-1}+1}/a_1)^{-n_k}`,
    /// against the starred dual q-Hahn system.
    BToInfinity,
    /// q-Racah system with `a_1 = ε`, `b = a_1`, `a_k -> q a_k`, times
    /// `ε^{N_s/2} ∏ (q^{k-1} a_2...a_k q^{2N_{k-1}})^{n_k/2}`, against the
    /// q-Hahn system.
    A1ToZeroHahn,
    /// q-Meixner system with `β = ε` against the q-Charlier system.
    BetaToZero,
    /// Single-variable `r_n(x; ε, b, c, N)` against `d_n(x; b, c, N)` with
    /// `b = a_1`, `c = a_2`.
    AToZero,
}

impl Limit {
    pub const ALL: [Limit; 5] =
        [Limit::BToZero, Limit::BToInfinity, Limit::A1ToZeroHahn, Limit::BetaToZero, Limit::AToZero];

    pub fn name(self) -> &'static str {
        match self {
            Limit::BToZero => "b_to_zero",
            Limit::BToInfinity => "b_to_infinity",
            Limit::A1ToZeroHahn => "a1_to_zero_hahn",
            Limit::BetaToZero => "beta_to_zero",
            Limit::AToZero => "a_to_zero",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Limit::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| Error::Parse(format!("unknown limit {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub name: &'static str,
    pub epsilons: Vec<String>,
    /// Largest pointwise deviation for each ε.
    pub deviations: Vec<f64>,
    /// `deviation(ε) / deviation(ε/100)` for each pair present in the table.
    pub ratios: Vec<f64>,
    pub passed: bool,
}

/// Largest pointwise gap between the ε-family (with its multiplier) and
/// the limit family, for each ε. For q-Meixner the lattice stops at
/// `x_s = 6` and degrees at `N_s = 3`.
pub fn check_limit(which: Limit, p: &QParams<Float>, epsilons: &[Float]) -> Result<LimitReport> {
    let prec = p.q.root().prec();
    let mut deviations = Vec::with_capacity(epsilons.len());
    for eps in epsilons {
        deviations.push(limit_deviation(which, p, eps)?.to_f64());
    }
    let mut ratios = Vec::new();
    for (i, e) in epsilons.iter().enumerate() {
        for (j, e2) in epsilons.iter().enumerate() {
            let r = Float::with_val(prec, e / e2);
            if i != j && (r.to_f64() - 100.0).abs() < 1e-6 {
                ratios.push(deviations[i] / deviations[j]);
            }
        }
    }
    let passed = !ratios.is_empty() && ratios.iter().all(|r| (50.0..=200.0).contains(r));
    Ok(LimitReport {
        name: which.name(),
        epsilons: epsilons.iter().map(|e| format!("{:e}", e.to_f64())).collect(),
        deviations,
        ratios,
        passed,
    })
}

fn limit_deviation(which: Limit, p: &QParams<Float>, eps: &Float) -> Result<Float> {
    let mut worst = eps.zero_like();
    let mut track = |a: Float, b: Float| {
        let d = (a - b).abs();
        if d > worst {
            worst = d;
        }
    };
    let s = p.s;
    let nn = p.big_n;
    let base = QParams { b: None, beta: None, ..p.clone() };
    match which {
        Limit::BToZero | Limit::BToInfinity => {
            let star = which == Limit::BToInfinity;
            let bv = if star { eps.recip()? } else { eps.clone() };
            let rp = QParams { b: Some(RootParam::from_value(&bv)?), ..base.clone() };
            let r = FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(rp.clone()))?;
            let id = if star { FamilyId::DualQHahnStarMV } else { FamilyId::DualQHahnMV };
            let d = FamilyMV::new(id, ParamSetMV::Q(base.clone()))?;
            let q = rp.q.value();
            for n in enumerate_indices(s, nn) {
                let mut mult = eps.one_like();
                if star {
                    let a1 = rp.a[0].value();
                    let mut big_a = eps.one_like();
                    for k in 1..=s {
                        big_a *= &rp.a[k - 1].value();
                        let e = 2 * n.partial(k - 1) as i64 + 1;
                        let v = (bv.clone() * &big_a * &int_pow(&q, e)?).try_div(&a1)?;
                        mult *= &int_pow(&v, -(n.n(k) as i64))?;
                    }
                }
                for x in simplex(s, nn) {
                    track(eval_poly_mv(&r, &n, &x)? * &mult, eval_poly_mv(&d, &n, &x)?);
                }
            }
        }
        Limit::A1ToZeroHahn => {
            let mut a = vec![RootParam::from_value(eps)?];
            for k in 1..=s {
                a.push(p.a[k].mul(&p.q));
            }
            let rp = QParams { a, b: Some(p.a[0].clone()), beta: None, ..p.clone() };
            let r = FamilyMV::new(FamilyId::QRacahMV, ParamSetMV::Q(rp))?;
            let h = FamilyMV::new(FamilyId::QHahnMV, ParamSetMV::Q(base.clone()))?;
            let reps = Num::sqrt(eps)?;
            for n in enumerate_indices(s, nn) {
                let mut mult = eps.one_like();
                let mut ra = p.q.root().one_like();
                for k in 1..=s {
                    if k >= 2 {
                        ra *= &(p.q.root().clone() * p.a[k - 1].root());
                    }
                    let v = ra.clone() * &p.q.half_pow(2 * n.partial(k - 1) as i64)?;
                    mult *= &int_pow(&v, n.n(k) as i64)?;
                }
                let pre = int_pow(&reps, n.total() as i64)?;
                for x in simplex(s, nn) {
                    track(eval_poly_mv(&r, &n, &x)? * &pre * &mult, eval_poly_mv(&h, &n, &x)?);
                }
            }
        }
        Limit::BetaToZero => {
            let mp = QParams { beta: Some(RootParam::from_value(eps)?), b: None, ..p.clone() };
            let mut cp = base.clone();
            cp.a.truncate(s);
            let mut mp = mp;
            mp.a.truncate(s);
            let m = FamilyMV::new(FamilyId::QMeixnerMV, ParamSetMV::Q(mp))?;
            let c = FamilyMV::new(FamilyId::QCharlierMV, ParamSetMV::Q(cp))?;
            for n in enumerate_indices(s, 3) {
                for x in simplex(s, 6) {
                    track(eval_poly_mv(&m, &n, &x)?, eval_poly_mv(&c, &n, &x)?);
                }
            }
        }
        Limit::AToZero => {
            let (b, c) = (&p.a[0], &p.a[1]);
            let ra = RootParam::from_value(eps)?;
            for n in 0..=nn {
                for x in 0..=nn {
                    let (n64, x64) = (n, x as i64);
                    let r = qracah_series(n64, x64, &p.q, &ra, b, c, nn as i64)?.eval()?;
                    let d = dual_series(n64, x64, &p.q, b, c, nn as i64, false)?.eval()?;
                    track(r, d);
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(v: f64) -> RootParam<Float> {
        RootParam::new(Float::with_val(256, v))
    }

    fn meixner(a: (f64, f64)) -> FamilyMV<Float> {
        let half = Float::with_val(256, 0.5);
        let p = QParams {
            s: 2,
            q: RootParam::from_value(&half).unwrap(),
            a: vec![fl(a.0), fl(a.1)],
            b: None,
            beta: Some(fl(0.5)),
            big_n: 0,
        };
        FamilyMV::new(FamilyId::QMeixnerMV, ParamSetMV::Q(p)).unwrap()
    }

    #[test]
    fn lattice_order_and_counts() {
        let got: Vec<String> = simplex(2, 2).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["(0 0)", "(0 1)", "(1 1)", "(0 2)", "(1 2)", "(2 2)"]);
        assert_eq!(simplex(1, 4).len(), 5);
        assert_eq!(simplex(3, 5).len(), 56);
        assert!(simplex(4, 3).iter().all(|p| p.0.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn index_order() {
        let got: Vec<String> = enumerate_indices(2, 1).iter().map(|n| n.to_string()).collect();
        assert_eq!(got, ["(0 0)", "(0 1)", "(1 0)"]);
        assert_eq!(enumerate_indices(3, 4).len(), 35);
    }

    #[test]
    fn infinite_support_needs_a_cap() {
        assert!(matches!(enumerate_lattice(&meixner((3.5, 4.5)), None), Err(Error::MissingCap)));
    }

    #[test]
    fn tighter_tolerance_never_shrinks_the_lattice() {
        let f = meixner((3.5, 4.5));
        let mut last = 0;
        for tol in [1e-8, 1e-14, 1e-20, 1e-26] {
            let t = plan_truncation(&f, 2, tol, 2).unwrap();
            assert!(t.x_max >= last);
            assert!(t.bound < tol);
            last = t.x_max;
        }
    }

    #[test]
    fn larger_a_s_truncates_sooner() {
        let lo = plan_truncation(&meixner((3.5, 4.5)), 2, 1e-20, 2).unwrap();
        let hi = plan_truncation(&meixner((3.5, 9.0)), 2, 1e-20, 2).unwrap();
        assert!(hi.x_max <= lo.x_max, "{} > {}", hi.x_max, lo.x_max);
    }

    #[test]
    fn non_contracting_tail_is_reported() {
        // q^(-3)/(a_1 a_2) = 64 / (1/4)
        assert!(matches!(plan_truncation(&meixner((0.5, 1.0)), 2, 1e-20, 1), Err(Error::NonContracting(_))));
    }

    #[test]
    fn exact_gram_small_case() {
        let p = random_params(FamilyId::QRacahMV, 2, 2, 1).unwrap();
        let f = FamilyMV::new(FamilyId::QRacahMV, p).unwrap();
        let r = gram(&f, &GramOptions::default()).unwrap();
        assert!(r.passed && r.exact, "{:?}", r.failures);
        assert_eq!(r.max_abs_residual, "0");
    }

    #[test]
    fn corrupted_norms_fail() {
        let p = random_params(FamilyId::QHahnMV, 2, 2, 1).unwrap();
        let f = FamilyMV::new(FamilyId::QHahnMV, p).unwrap();
        let r = gram(&f, &GramOptions { corrupt_norms: true, ..Default::default() }).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn gram_sum_is_additive_over_the_lattice() {
        let p = random_params(FamilyId::DualQHahnMV, 2, 2, 4).unwrap();
        let f = FamilyMV::new(FamilyId::DualQHahnMV, p).unwrap();
        let lat = enumerate_lattice(&f, None).unwrap();
        let idx = family_indices(&f, None);
        let g = gram_matrix(&f, &lat, &idx, 1).unwrap();
        // the sum over a lattice is linear in ρ, so splitting it is exact
        let (left, right) = lat.split_at(lat.len() / 2);
        let gl = gram_matrix(&f, left, &idx, 1).unwrap();
        let gr = gram_matrix(&f, right, &idx, 1).unwrap();
        for ((a, b), c) in gl.iter().zip(&gr).zip(&g) {
            assert_eq!(Rational::from(a + b), *c);
        }
    }

    #[test]
    fn random_params_are_reproducible() {
        let a = random_params(FamilyId::QRacahMV, 3, 3, 7).unwrap();
        let b = random_params(FamilyId::QRacahMV, 3, 3, 7).unwrap();
        assert_eq!(a.describe(), b.describe());
        let c = random_params(FamilyId::QRacahMV, 3, 3, 8).unwrap();
        assert_ne!(a.describe(), c.describe());
    }

    #[test]
    fn names_parse() {
        for i in Identity::ALL {
            assert_eq!(Identity::parse(i.name()).unwrap(), i);
        }
        for l in Limit::ALL {
            assert_eq!(Limit::parse(l.name()).unwrap(), l);
        }
    }
}
