//! Parameter sweeps over the inequality catalog.
//!
//! A [`SweepSpec`] lists candidate values per parameter; every statement in
//! `theorem_ids` is evaluated over the Cartesian product of the values it
//! uses. When a product exceeds `max_reports_per_theorem`, a seeded uniform
//! sample of that size is drawn instead, so runs stay reproducible.

use std::collections::HashMap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::{certify_pair, parse_integrand, HolderPair, Integrand, SynchronousPair};
use crate::inequalities::{Evaluator, InequalityReport, ReportParams, TheoremId, Verdict};
use crate::quadrature::QuadratureConfig;
use crate::special::{EvalPoint, FractionalParams};

/// The sweep shipped with the crate.
pub const STANDARD_SWEEP: &str = include_str!("../sweeps/standard.json");

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed sweep at {pointer}: {message}")]
    Json { pointer: String, message: String },
    #[error("invalid sweep value at {pointer}: {message}")]
    Invalid { pointer: String, message: String },
}

/// `β` (or `λ`) entry: a number, or `"order"` to tie it to `α` (or `δ`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderExponent {
    Value(f64),
    Tied(OrderTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderTag {
    #[serde(rename = "order")]
    Order,
}

impl OrderExponent {
    fn resolve(self, order: f64) -> f64 {
        match self {
            OrderExponent::Value(v) => v,
            OrderExponent::Tied(_) => order,
        }
    }
}

fn default_holder() -> Vec<f64> {
    vec![2.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub theorem_ids: Vec<TheoremId>,
    pub alpha: Vec<f64>,
    /// Second order; defaults to `alpha`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta: Vec<f64>,
    pub beta: Vec<OrderExponent>,
    /// Second exponent; defaults to `beta` (with `"order"` tied to `δ`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<OrderExponent>,
    pub rho: Vec<f64>,
    pub k: Vec<f64>,
    pub eta: Vec<f64>,
    pub x: Vec<f64>,
    pub function_pairs: Vec<(String, String)>,
    pub weights: Vec<String>,
    #[serde(default = "default_holder")]
    pub holder_s: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_override: Option<f64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_reports_per_theorem: Option<usize>,
    /// Upper end of the derivative-norm interval; defaults to each `x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_norm: Option<f64>,
}

fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> SweepError {
    SweepError::Invalid {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn check_all(
    name: &str,
    values: &[f64],
    ok: impl Fn(f64) -> bool,
    what: &str,
) -> Result<(), SweepError> {
    for (i, v) in values.iter().enumerate() {
        if !(v.is_finite() && ok(*v)) {
            return Err(invalid(format!("/{name}/{i}"), format!("{v} {what}")));
        }
    }
    Ok(())
}

fn non_empty<T>(name: &str, values: &[T]) -> Result<(), SweepError> {
    if values.is_empty() {
        return Err(invalid(format!("/{name}"), "list must not be empty"));
    }
    Ok(())
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self, SweepError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: SweepSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer: String = e
                .path()
                .iter()
                .map(|seg| match seg {
                    serde_path_to_error::Segment::Seq { index } => format!("/{index}"),
                    serde_path_to_error::Segment::Map { key } => format!("/{key}"),
                    serde_path_to_error::Segment::Enum { variant } => format!("/{variant}"),
                    serde_path_to_error::Segment::Unknown => "/?".to_string(),
                })
                .collect();
            SweepError::Json {
                pointer: if pointer.is_empty() {
                    "/".into()
                } else {
                    pointer
                },
                message: e.into_inner().to_string(),
            }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path).map_err(|source| SweepError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn standard() -> Self {
        Self::from_json(STANDARD_SWEEP).expect("shipped sweep is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep serializes")
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        non_empty("theorem_ids", &self.theorem_ids)?;
        non_empty("alpha", &self.alpha)?;
        non_empty("beta", &self.beta)?;
        non_empty("rho", &self.rho)?;
        non_empty("k", &self.k)?;
        non_empty("eta", &self.eta)?;
        non_empty("x", &self.x)?;
        non_empty("function_pairs", &self.function_pairs)?;
        non_empty("weights", &self.weights)?;
        non_empty("holder_s", &self.holder_s)?;
        check_all("alpha", &self.alpha, |v| v > 0.0, "must be positive")?;
        check_all("delta", &self.delta, |v| v > 0.0, "must be positive")?;
        check_all("rho", &self.rho, |v| v > 0.0, "must be positive")?;
        check_all("k", &self.k, |_| true, "must be finite")?;
        check_all("eta", &self.eta, |v| v > -1.0, "must exceed -1")?;
        check_all("x", &self.x, |v| v > 0.0, "must be positive")?;
        check_all("holder_s", &self.holder_s, |v| v > 1.0, "must exceed 1")?;
        for (name, list) in [("beta", &self.beta), ("lambda", &self.lambda)] {
            for (i, b) in list.iter().enumerate() {
                if let OrderExponent::Value(v) = b {
                    if !v.is_finite() {
                        return Err(invalid(format!("/{name}/{i}"), "must be finite"));
                    }
                }
            }
        }
        for (i, (a, b)) in self.function_pairs.iter().enumerate() {
            for (j, s) in [a, b].into_iter().enumerate() {
                parse_integrand(s)
                    .map_err(|e| invalid(format!("/function_pairs/{i}/{j}"), e.to_string()))?;
            }
        }
        for (i, s) in self.weights.iter().enumerate() {
            parse_integrand(s).map_err(|e| invalid(format!("/weights/{i}"), e.to_string()))?;
        }
        if let Some(t) = self.tol_override {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid("/tol_override", "must be positive"));
            }
        }
        if let Some(t) = self.t_norm {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid("/t_norm", "must be positive"));
            }
        }
        if self.max_reports_per_theorem == Some(0) {
            return Err(invalid("/max_reports_per_theorem", "must be at least 1"));
        }
        Ok(())
    }

    fn deltas(&self) -> &[f64] {
        if self.delta.is_empty() {
            &self.alpha
        } else {
            &self.delta
        }
    }

    fn lambdas(&self) -> &[OrderExponent] {
        if self.lambda.is_empty() {
            &self.beta
        } else {
            &self.lambda
        }
    }
}

/// Axes of the Cartesian product for one statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Axis {
    Alpha,
    Delta,
    Beta,
    Lambda,
    Rho,
    K,
    Eta,
    X,
    Pair,
    Weight(usize),
    Holder,
}

fn axes(id: TheoremId) -> Vec<Axis> {
    use Axis::*;
    let mut v = match id {
        TheoremId::ClassicalT | TheoremId::ClassicalT4 => vec![X, Pair],
        TheoremId::RemarkRl => vec![Alpha, X, Pair],
        _ if id.two_orders() => vec![Alpha, Delta, Beta, Lambda, Rho, K, Eta, X, Pair],
        _ => vec![Alpha, Beta, Rho, K, Eta, X, Pair],
    };
    v.extend((0..id.weight_arity()).map(Weight));
    if id.uses_holder() {
        v.push(Holder);
    }
    v
}

/// One point of a sweep, as indices into the spec's lists.
type Point = HashMap<Axis, usize>;

/// Index tuples to evaluate for `id`: all of them, or a seeded sample.
fn points(spec: &SweepSpec, id: TheoremId) -> Vec<Point> {
    let ax = axes(id);
    let len = |a: &Axis| match a {
        Axis::Alpha => spec.alpha.len(),
        Axis::Delta => spec.deltas().len(),
        Axis::Beta => spec.beta.len(),
        Axis::Lambda => spec.lambdas().len(),
        Axis::Rho => spec.rho.len(),
        Axis::K => spec.k.len(),
        Axis::Eta => spec.eta.len(),
        Axis::X => spec.x.len(),
        Axis::Pair => spec.function_pairs.len(),
        Axis::Weight(_) => spec.weights.len(),
        Axis::Holder => spec.holder_s.len(),
    };
    let dims: Vec<usize> = ax.iter().map(len).collect();
    let total: usize = dims.iter().product();
    let indices: Vec<usize> = match spec.max_reports_per_theorem {
        Some(cap) if cap < total => {
            // per-statement seed
            let salt = TheoremId::ALL.iter().position(|t| *t == id).unwrap_or(0) as u64;
            let mut rng =
                ChaCha8Rng::seed_from_u64(spec.seed ^ (salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
            let mut s = rand::seq::index::sample(&mut rng, total, cap).into_vec();
            s.sort_unstable();
            s
        }
        _ => (0..total).collect(),
    };
    indices
        .into_iter()
        .map(|mut idx| {
            let mut p = Point::new();
            for (a, d) in ax.iter().zip(&dims).rev() {
                p.insert(*a, idx % d);
                idx /= d;
            }
            p
        })
        .collect()
}

/// Parsed functions of a spec, shared across points.
struct Catalog {
    pairs: Vec<(Integrand, Integrand)>,
    weights: Vec<Integrand>,
}

impl Catalog {
    fn new(spec: &SweepSpec) -> Self {
        let parse = |s: &str| parse_integrand(s).expect("validated");
        Self {
            pairs: spec
                .function_pairs
                .iter()
                .map(|(a, b)| (parse(a), parse(b)))
                .collect(),
            weights: spec.weights.iter().map(|s| parse(s)).collect(),
        }
    }
}

/// One fully resolved evaluation request.
#[derive(Debug, Clone)]
pub struct Case<'a> {
    pub id: TheoremId,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub k: f64,
    pub eta: f64,
    /// Second order pair, used by two-order statements only.
    pub delta: f64,
    pub lambda: f64,
    pub x: f64,
    pub phi: &'a Integrand,
    pub psi: &'a Integrand,
    /// Exactly `id.weight_arity()` weights.
    pub weights: Vec<&'a Integrand>,
    pub holder_s: f64,
    pub t_norm: f64,
}

/// Evaluates one case; evaluation errors become indeterminate reports.
pub fn evaluate_case(ev: &mut Evaluator, c: &Case<'_>) -> InequalityReport {
    let (id, phi, psi, w) = (c.id, c.phi, c.psi, &c.weights);
    let mut functions = vec![phi.spec().to_string(), psi.spec().to_string()];
    functions.extend(w.iter().map(|f| f.spec().to_string()));
    let fallback_params = ReportParams {
        alpha: c.alpha,
        beta: c.beta,
        rho: c.rho,
        k: c.k,
        eta: c.eta,
        delta: id.two_orders().then_some(c.delta),
        lambda: id.two_orders().then_some(c.lambda),
    };

    let result = (|| {
        if w.len() != id.weight_arity() {
            return Err(crate::Error::InvalidParameter {
                name: "weights",
                value: w.len() as f64,
                reason: "count does not match the statement",
            });
        }
        let p1 = FractionalParams::new(c.alpha, c.beta, c.rho, c.k, c.eta)?;
        let p2 = FractionalParams::new(c.delta, c.lambda, c.rho, c.k, c.eta)?;
        let xp = EvalPoint::new(c.x)?;
        let pair = || -> SynchronousPair { certify_pair(phi, psi, c.x) };
        let hp = HolderPair::new(c.holder_s)?;
        let t_norm = c.t_norm;
        match id {
            TheoremId::T31 => ev.gap_t31(&p1, &pair(), xp),
            TheoremId::T32 => ev.gap_t32(&p1, &p2, &pair(), xp),
            TheoremId::L41 => ev.gap_l41(&p1, &pair(), w[0], w[1], xp),
            TheoremId::L43 => ev.gap_l43(&p1, &p2, &pair(), w[0], w[1], xp),
            TheoremId::T42 => ev.gap_t42(&p1, &pair(), w[0], w[1], w[2], xp),
            TheoremId::T44 => ev.gap_t44(&p1, &p2, &pair(), w[0], w[1], w[2], xp),
            TheoremId::L51 => ev.identity_l51(&p1, w[0], phi, psi, xp),
            TheoremId::T52 => ev.chain_t52(&p1, w[0], phi, psi, hp, xp, t_norm),
            TheoremId::T53 => ev.chain_t53(&p1, &p2, w[0], phi, psi, hp, xp, t_norm),
            TheoremId::ClassicalT => ev.classical_t(&pair(), w[0], w[1], xp),
            TheoremId::ClassicalT4 => ev.classical_t4(w[0], phi, psi, hp, xp, t_norm),
            TheoremId::RemarkRl => ev.remark_rl(c.alpha, w[0], phi, psi, hp, xp, t_norm),
        }
    })();
    result.unwrap_or_else(|e| Evaluator::failed(id, fallback_params, c.x, functions, &e))
}

fn run_point(
    ev: &mut Evaluator,
    spec: &SweepSpec,
    cat: &Catalog,
    id: TheoremId,
    pt: &Point,
) -> InequalityReport {
    let get = |a: Axis| pt.get(&a).copied().unwrap_or(0);
    let alpha = spec.alpha[get(Axis::Alpha)];
    let delta = spec.deltas()[get(Axis::Delta)];
    let x = spec.x[get(Axis::X)];
    let (phi, psi) = &cat.pairs[get(Axis::Pair)];
    let case = Case {
        id,
        alpha,
        beta: spec.beta[get(Axis::Beta)].resolve(alpha),
        rho: spec.rho[get(Axis::Rho)],
        k: spec.k[get(Axis::K)],
        eta: spec.eta[get(Axis::Eta)],
        delta,
        lambda: spec.lambdas()[get(Axis::Lambda)].resolve(delta),
        x,
        phi,
        psi,
        weights: (0..id.weight_arity())
            .map(|i| &cat.weights[get(Axis::Weight(i))])
            .collect(),
        holder_s: spec.holder_s[get(Axis::Holder)],
        t_norm: spec.t_norm.unwrap_or(x),
    };
    evaluate_case(ev, &case)
}

/// Counts of verdicts plus reports whose quadrature did not converge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub holds: usize,
    pub violated: usize,
    pub indeterminate: usize,
    pub not_converged: usize,
}

impl Summary {
    pub fn of(reports: &[InequalityReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Indeterminate => s.indeterminate += 1,
            }
            s.not_converged += usize::from(!r.converged);
        }
        s
    }
}

/// Evaluates every statement of the sweep; reports come back in canonical
/// order.
pub fn run_sweep(spec: &SweepSpec, cfg: QuadratureConfig) -> Vec<InequalityReport> {
    let mut ev = Evaluator::new(cfg);
    if let Some(t) = spec.tol_override {
        ev = ev.with_tol(t);
    }
    let cat = Catalog::new(spec);
    let mut ids = spec.theorem_ids.clone();
    ids.sort();
    ids.dedup();
    let mut out = Vec::new();
    for id in ids {
        for pt in points(spec, id) {
            out.push(run_point(&mut ev, spec, &cat, id, &pt));
        }
    }
    sort_reports(&mut out);
    out
}

pub fn sort_reports(reports: &mut [InequalityReport]) {
    reports.sort_by_cached_key(|r| r.sort_key());
}

/// JSON array with one report per line.
pub fn reports_to_json(reports: &[InequalityReport]) -> String {
    let mut s = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        s.push_str(&serde_json::to_string(r).expect("report serializes"));
        s.push_str(if i + 1 < reports.len() { ",\n" } else { "\n" });
    }
    s.push_str("]\n");
    s
}
