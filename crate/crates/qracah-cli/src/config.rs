//! Job configuration: a JSON file whose numbers are all strings, so
//! rationals cross the I/O boundary without rounding.

use std::collections::BTreeMap;
use std::path::Path;

use qracah::multivar::{ClassicalParams, FamilyId, ParamSetMV, QParams, Reading, Variants};
use qracah::scalar::{parse_rational, Num, RootParam, MIN_PRECISION};
use qracah::verify::{random_params, Identity, Limit};
use qracah::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A parameter: a bare string is the square root, `{"value": ..}` the
/// parameter itself. Classical Racah parameters are always plain values.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Param {
    Root(String),
    Value { value: String },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<String>,
    /// Draw random valid parameters instead of reading `q`, `a`, `b`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Param>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Param>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Param>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Param>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    /// Largest total degree for the infinite-support families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<String>,
    /// Largest `x_s` for `table` on the infinite-support families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_cap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<String>,
    /// Any of `gram`, `identities`, `limits`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limits: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<String>>,
    /// Formula readings, e.g. `{"tail_sums": "printed"}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variants: Option<BTreeMap<String, String>>,
    /// Record wall-clock times in reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct Job {
    pub config: JobConfig,
    pub family: FamilyId,
    pub backend: Backend,
    pub precision: u32,
    pub s: usize,
    pub big_n: usize,
    pub threads: usize,
    pub tol: f64,
    pub degree_cap: Option<usize>,
    pub lattice_cap: Option<usize>,
    pub variants: Variants,
    pub timing: bool,
}

fn int(field: &str, v: &Option<String>) -> Result<Option<usize>, CliError> {
    v.as_ref()
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("{field}: expected a nonnegative integer, got {t:?}")))
        })
        .transpose()
}

fn reading(v: &str) -> Result<Reading, CliError> {
    match v {
        "printed" => Ok(Reading::Printed),
        "amended" => Ok(Reading::Amended),
        _ => Err(CliError::Config(format!("reading must be printed or amended, got {v:?}"))),
    }
}

impl Job {
    pub fn new(config: JobConfig) -> Result<Self, CliError> {
        let family: FamilyId =
            config.family.as_deref().ok_or_else(|| CliError::Config("missing family".into()))?.parse()?;
        let backend = match config.backend.as_deref() {
            None if family.exact_capable() => Backend::Exact,
            None => Backend::Float,
            Some("exact") => Backend::Exact,
            Some("float") => Backend::Float,
            Some(b) => return Err(CliError::Config(format!("backend must be exact or float, got {b:?}"))),
        };
        if backend == Backend::Exact && !family.exact_capable() {
            return Err(CliError::Config(format!("{family} needs the float backend")));
        }
        let precision =
            int("precision", &config.precision)?.unwrap_or(qracah::scalar::DEFAULT_PRECISION as usize) as u32;
        if precision < MIN_PRECISION {
            return Err(CliError::Config(format!("precision must be at least {MIN_PRECISION} bits")));
        }
        let s = int("s", &config.s)?.ok_or_else(|| CliError::Config("missing s".into()))?;
        if s == 0 {
            return Err(CliError::Config("s must be positive".into()));
        }
        let big_n = int("N", &config.big_n)?.unwrap_or(0);
        if !family.infinite() && config.big_n.is_none() {
            return Err(CliError::Config(format!("{family} needs N")));
        }
        let threads = int("threads", &config.threads)?.unwrap_or(1).max(1);
        let tol = match &config.tol {
            None => 1e-20,
            Some(t) => parse_rational(t)?.to_f64(),
        };
        if (tol.is_nan() || tol <= 0.0) && backend == Backend::Float {
            return Err(CliError::Config("tolerance must be positive".into()));
        }
        let mut variants = Variants::default();
        for (k, v) in config.variants.iter().flatten() {
            variants = variants.with(k, reading(v)?)?;
        }
        let timing = matches!(config.timing.as_deref(), Some("true"));
        Ok(Job {
            family,
            backend,
            precision,
            s,
            big_n,
            threads,
            tol,
            degree_cap: int("degree_cap", &config.degree_cap)?,
            lattice_cap: int("lattice_cap", &config.lattice_cap)?,
            variants,
            timing,
            config,
        })
    }

    fn seed(&self) -> Result<Option<u64>, CliError> {
        self.config
            .seed
            .as_ref()
            .map(|t| t.trim().parse::<u64>().map_err(|_| CliError::Config(format!("seed: not an integer: {t:?}"))))
            .transpose()
    }

    /// Parameters in exact arithmetic. Values given through `{"value": ..}`
    /// must be squares of rationals.
    pub fn exact_params(&self) -> Result<ParamSetMV<Rational>, CliError> {
        if let Some(seed) = self.seed()? {
            return Ok(random_params(self.family, self.s, self.big_n, seed)?);
        }
        self.params_with(&|r: &Rational| r.clone())
    }

    pub fn float_params(&self) -> Result<ParamSetMV<Float>, CliError> {
        if let Some(seed) = self.seed()? {
            let p = random_params(self.family, self.s, self.big_n, seed)?;
            return Ok(qracah::verify::params_to_float(&p, self.precision));
        }
        let prec = self.precision;
        self.params_with(&move |r: &Rational| Float::with_val(prec, r))
    }

    fn params_with<T: Num>(&self, lift: &dyn Fn(&Rational) -> T) -> Result<ParamSetMV<T>, CliError> {
        let c = &self.config;
        let a = c.a.as_ref().ok_or_else(|| CliError::Config("missing a".into()))?;
        if self.family == FamilyId::RacahClassicalMV {
            let plain = |p: &Param| match p {
                Param::Root(v) | Param::Value { value: v } => parse_rational(v).map(|r| lift(&r)),
            };
            let a = a.iter().map(plain).collect::<qracah::Result<Vec<_>>>()?;
            let eta = c.eta.as_ref().ok_or_else(|| CliError::Config("missing eta".into()))?;
            return Ok(ParamSetMV::Classical(ClassicalParams {
                s: self.s,
                a,
                eta: lift(&parse_rational(eta)?),
                big_n: self.big_n,
            }));
        }
        let root = |name: &str, p: &Param| -> Result<RootParam<T>, CliError> {
            let r = match p {
                Param::Root(v) => RootParam::new(lift(&parse_rational(v)?)),
                Param::Value { value } => RootParam::from_value(&lift(&parse_rational(value)?))
                    .map_err(|e| CliError::Config(format!("{name}: {e}")))?,
            };
            Ok(r)
        };
        let q = root("q", c.q.as_ref().ok_or_else(|| CliError::Config("missing q".into()))?)?;
        let a = a.iter().enumerate().map(|(i, p)| root(&format!("a{}", i + 1), p)).collect::<Result<Vec<_>, _>>()?;
        let b = c.b.as_ref().map(|p| root("b", p)).transpose()?;
        let beta = c.beta.as_ref().map(|p| root("beta", p)).transpose()?;
        Ok(ParamSetMV::Q(QParams { s: self.s, q, a, b, beta, big_n: self.big_n }))
    }

    pub fn suites(&self) -> Vec<String> {
        self.config.suites.clone().unwrap_or_else(|| vec!["gram".into()])
    }

    pub fn identities(&self) -> Result<Vec<Identity>, CliError> {
        match &self.config.identities {
            None => Ok(Identity::ALL.to_vec()),
            Some(v) => v.iter().map(|s| Identity::parse(s).map_err(CliError::from)).collect(),
        }
    }

    pub fn limits(&self) -> Result<Vec<Limit>, CliError> {
        match &self.config.limits {
            None => Ok(Limit::ALL.to_vec()),
            Some(v) => v.iter().map(|s| Limit::parse(s).map_err(CliError::from)).collect(),
        }
    }

    pub fn epsilons(&self) -> Result<Vec<Float>, CliError> {
        let texts = self.config.epsilons.clone().unwrap_or_else(|| vec!["1e-4".into(), "1e-5".into(), "1e-6".into()]);
        texts
            .iter()
            .map(|t| {
                let r = parse_rational(t)?;
                if r <= 0 {
                    return Err(CliError::Config(format!("epsilon must be positive, got {t}")));
                }
                Ok(Float::with_val(self.precision, r))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Job, CliError> {
        Job::new(serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?)
    }

    #[test]
    fn roots_and_values() {
        let job =
            parse(r#"{"family":"qracah","s":"1","N":"2","q":{"value":"1/4"},"a":["1/3","2/5"],"b":"1/7"}"#).unwrap();
        let ParamSetMV::Q(p) = job.exact_params().unwrap() else { panic!() };
        assert_eq!(p.q.root(), &Rational::from((1, 2)));
        assert_eq!(p.a[1].value(), Rational::from((4, 25)));
        assert_eq!(job.backend, Backend::Exact);
    }

    #[test]
    fn non_square_value_is_rejected_exactly() {
        let job =
            parse(r#"{"family":"qracah","s":"1","N":"2","q":{"value":"1/2"},"a":["1/3","2/5"],"b":"1/7"}"#).unwrap();
        assert!(job.exact_params().is_err());
        let job = Job { backend: Backend::Float, ..job };
        assert!(job.float_params().is_ok());
    }

    #[test]
    fn bad_inputs() {
        assert!(parse(r#"{"family":"qracah","s":"1","N":"2","q":"3/0","a":["1/3","2/5"],"b":"1/7"}"#)
            .unwrap()
            .exact_params()
            .is_err());
        assert!(parse(r#"{"family":"nope","s":"1","N":"2"}"#).is_err());
        assert!(parse(r#"{"family":"qmeixner","backend":"exact","s":"1"}"#).is_err());
        assert!(parse(r#"{"family":"qracah","s":"1","N":"2","precision":"32"}"#).is_err());
        assert!(parse(r#"{"family":"qracah","s":"1","N":"2","variants":{"tail_sums":"maybe"}}"#).is_err());
        assert!(serde_json::from_str::<JobConfig>(r#"{"famly":"qracah"}"#).is_err());
    }
}
