use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::functions::Certification;
use crate::special::FractionalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T3.1")]
    T31,
    #[serde(rename = "T3.2")]
    T32,
    #[serde(rename = "L4.1")]
    L41,
    #[serde(rename = "T4.2")]
    T42,
    #[serde(rename = "L4.3")]
    L43,
    #[serde(rename = "T4.4")]
    T44,
    #[serde(rename = "L5.1-identity")]
    L51,
    #[serde(rename = "T5.2")]
    T52,
    #[serde(rename = "T5.3")]
    T53,
    #[serde(rename = "classical-T")]
    ClassicalT,
    #[serde(rename = "classical-T4")]
    ClassicalT4,
    #[serde(rename = "remark-RL")]
    RemarkRl,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::T31,
        TheoremId::T32,
        TheoremId::L41,
        TheoremId::T42,
        TheoremId::L43,
        TheoremId::T44,
        TheoremId::L51,
        TheoremId::T52,
        TheoremId::T53,
        TheoremId::ClassicalT,
        TheoremId::ClassicalT4,
        TheoremId::RemarkRl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T31 => "T3.1",
            TheoremId::T32 => "T3.2",
            TheoremId::L41 => "L4.1",
            TheoremId::T42 => "T4.2",
            TheoremId::L43 => "L4.3",
            TheoremId::T44 => "T4.4",
            TheoremId::L51 => "L5.1-identity",
            TheoremId::T52 => "T5.2",
            TheoremId::T53 => "T5.3",
            TheoremId::ClassicalT => "classical-T",
            TheoremId::ClassicalT4 => "classical-T4",
            TheoremId::RemarkRl => "remark-RL",
        }
    }

    /// Statements with a second order pair `(δ, λ)`.
    pub fn two_orders(self) -> bool {
        matches!(
            self,
            TheoremId::T32 | TheoremId::L43 | TheoremId::T44 | TheoremId::T53
        )
    }

    /// Number of weight functions the statement takes.
    pub fn weight_arity(self) -> usize {
        match self {
            TheoremId::T31 | TheoremId::T32 => 0,
            TheoremId::L41 | TheoremId::L43 | TheoremId::ClassicalT => 2,
            TheoremId::T42 | TheoremId::T44 => 3,
            TheoremId::L51
            | TheoremId::T52
            | TheoremId::T53
            | TheoremId::ClassicalT4
            | TheoremId::RemarkRl => 1,
        }
    }

    /// Statements bounded by derivative norms.
    pub fn uses_holder(self) -> bool {
        matches!(
            self,
            TheoremId::T52 | TheoremId::T53 | TheoremId::ClassicalT4 | TheoremId::RemarkRl
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TheoremId::ALL
            .into_iter()
            .find(|id| {
                id.as_str().eq_ignore_ascii_case(s) || (s == "L5.1" && *id == TheoremId::L51)
            })
            .ok_or_else(|| {
                let names: Vec<&str> = TheoremId::ALL.iter().map(|t| t.as_str()).collect();
                format!(
                    "unknown theorem {s:?}; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub k: f64,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl ReportParams {
    pub fn one(p: &FractionalParams) -> Self {
        Self {
            alpha: p.alpha(),
            beta: p.beta(),
            rho: p.rho(),
            k: p.k(),
            eta: p.eta(),
            delta: None,
            lambda: None,
        }
    }

    pub fn two(p1: &FractionalParams, p2: &FractionalParams) -> Self {
        Self {
            delta: Some(p2.alpha()),
            lambda: Some(p2.beta()),
            ..Self::one(p1)
        }
    }
}

/// Outcome of checking one statement at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theorem_id: TheoremId,
    pub params: ReportParams,
    pub x: f64,
    pub functions: Vec<String>,
    pub operands: BTreeMap<String, Option<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<[f64; 3]>,
    pub tol: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<Certification>,
    /// False when any quadrature behind the operands missed its tolerance.
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Rounds to 15 significant digits, the precision reports are written at.
pub fn round15(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.14e}").parse().unwrap_or(v)
}

impl InequalityReport {
    /// Rounds every real to 15 significant digits so that serialized
    /// reports are stable across platforms' last-bit differences.
    pub fn rounded(mut self) -> Self {
        self.params.alpha = round15(self.params.alpha);
        self.params.beta = round15(self.params.beta);
        self.params.rho = round15(self.params.rho);
        self.params.k = round15(self.params.k);
        self.params.eta = round15(self.params.eta);
        self.params.delta = self.params.delta.map(round15);
        self.params.lambda = self.params.lambda.map(round15);
        self.x = round15(self.x);
        for v in self.operands.values_mut() {
            *v = v.map(round15);
        }
        self.gap = self.gap.map(round15);
        self.chain = self.chain.map(|c| c.map(round15));
        self.tol = round15(self.tol);
        self
    }

    /// Canonical ordering key: theorem, parameters, point, functions.
    pub fn sort_key(&self) -> (TheoremId, [u64; 8], Vec<String>) {
        let ord = |v: f64| {
            // total order on f64 mapped to u64
            let b = v.to_bits();
            if b >> 63 == 1 {
                !b
            } else {
                b | (1 << 63)
            }
        };
        let p = &self.params;
        (
            self.theorem_id,
            [
                ord(p.alpha),
                ord(p.delta.unwrap_or(f64::NEG_INFINITY)),
                ord(p.beta),
                ord(p.lambda.unwrap_or(f64::NEG_INFINITY)),
                ord(p.rho),
                ord(p.k),
                ord(p.eta),
                ord(self.x),
            ],
            self.functions.clone(),
        )
    }
}
