//! Machine-readable reports written by `gram`, `verify` and `limits`.

use qracah::verify::{GramReport, Identity, IdentityReport, Limit, LimitReport};
use serde::Serialize;

use crate::config::JobConfig;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub relation: String,
    pub status: Status,
    /// Exact backend: the largest absolute residual. Float backend: the
    /// largest residual relative to `sqrt(|λ_n λ_m|)`.
    pub max_residual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
    pub details: serde_json::Value,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// The effective configuration; feeding it back reproduces the report.
    pub config: JobConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &'static str, config: JobConfig, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.status == Status::Pass);
        Report { tool: "qracah", version: env!("CARGO_PKG_VERSION"), command, config, passed, checks }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn status(passed: bool) -> Status {
    if passed {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn gram_check(mut r: GramReport) -> Check {
    let wall = r.wall_time_ms.take();
    let max_residual = if r.exact { r.max_abs_residual.clone() } else { format!("{:e}", r.max_scaled_residual) };
    Check {
        name: format!("gram:{}", r.family),
        relation: r.relation.to_string(),
        status: status(r.passed),
        max_residual,
        witness: r.failures.first().cloned(),
        wall_time_ms: wall,
        details: serde_json::to_value(&r).expect("gram report serializes"),
    }
}

pub fn identity_relation(i: Identity) -> &'static str {
    match i {
        Identity::Sears => "Sears transformation of the single-variable q-Racah polynomial",
        Identity::WeightPermutation => "q-Racah weight under the parameter permutation, stated constant",
        Identity::WeightPermutationDerived => "q-Racah weight under the parameter permutation, recomputed constant",
        Identity::SecondFamily => "second q-Racah family as the permuted first family",
        Identity::PartialSum => "orthogonality of partial sums over x_1..x_j",
        Identity::QHahnLabelInvariance => "q-Hahn weight under permutations of labels 1..s",
        Identity::QHahnLabelInvarianceExtended => "q-Hahn weight under permutations of labels 1..s+1",
        Identity::DStarWeightFactor => {
            "starred dual q-Hahn weight as a multiple of the dual q-Hahn weight, stated factor"
        }
        Identity::DStarWeightFactorDerived => {
            "starred dual q-Hahn weight as a multiple of the dual q-Hahn weight, factor a_1^x1 q^(x1^2)"
        }
    }
}

pub fn identity_check(which: Identity, r: IdentityReport, wall: Option<u128>) -> Check {
    Check {
        name: format!("identity:{}", r.name),
        relation: identity_relation(which).into(),
        status: status(r.passed),
        max_residual: if r.passed { "0".into() } else { "nonzero".into() },
        witness: r.witness.clone(),
        wall_time_ms: wall,
        details: serde_json::to_value(&r).expect("identity report serializes"),
    }
}

pub fn limit_relation(l: Limit) -> &'static str {
    match l {
        Limit::BToZero => "q-Racah to dual q-Hahn as b -> 0",
        Limit::BToInfinity => "rescaled q-Racah to starred dual q-Hahn as b -> infinity",
        Limit::A1ToZeroHahn => "rescaled q-Racah to q-Hahn as a_1 -> 0",
        Limit::BetaToZero => "q-Meixner to q-Charlier as beta -> 0",
        Limit::AToZero => "single-variable q-Racah to dual q-Hahn as a -> 0",
    }
}

pub fn limit_check(which: Limit, r: LimitReport, wall: Option<u128>) -> Check {
    let witness = (!r.passed).then(|| format!("deviation ratios {:?}, expected within [50, 200]", r.ratios));
    Check {
        name: format!("limit:{}", r.name),
        relation: limit_relation(which).into(),
        status: status(r.passed),
        max_residual: r.deviations.last().map_or_else(String::new, |d| format!("{d:e}")),
        witness,
        wall_time_ms: wall,
        details: serde_json::to_value(&r).expect("limit report serializes"),
    }
}
