//! Test-function catalog: parsing, derivatives, monotonicity, synchrony
//! certification and derivative norms.
//!
//! Grammar (one production per spec):
//!
//! ```text
//! pow:<p>              τ^p
//! poly:<c0>,<c1>,...   Σ c_i τ^i
//! exp:<c>              e^(cτ)
//! log1p                ln(1 + τ)
//! affine:<a>,<b>       a + bτ
//! const:<c>            c
//! ```
//!
//! Products and scalar multiples are built programmatically with
//! [`Integrand::product`] and [`Integrand::scaled`]; their specs join the
//! factors with `*`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_single, Integral, JacobiWeight, QuadratureConfig};

/// Points of the synchrony validation grid.
pub const CERTIFY_GRID: usize = 200;
/// Points used to spot-check polynomial monotonicity.
const POLY_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotone {
    Increasing,
    Decreasing,
    /// Constant: both non-increasing and non-decreasing.
    None,
    Unknown,
}

type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Expr {
    Pow(f64),
    Poly(Vec<f64>),
    Exp(f64),
    Log1p,
    Affine(f64, f64),
    Const(f64),
    Scaled(f64, Box<Expr>),
    Product(Vec<Expr>),
    Custom(CustomFn),
}

impl Expr {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Pow(p) => pow(t, *p),
            Expr::Poly(c) => horner(c, t),
            Expr::Exp(c) => (c * t).exp(),
            Expr::Log1p => t.ln_1p(),
            Expr::Affine(a, b) => a + b * t,
            Expr::Const(c) => *c,
            Expr::Scaled(c, e) => c * e.eval(t),
            Expr::Product(fs) => fs.iter().map(|f| f.eval(t)).product(),
            Expr::Custom(f) => f(t),
        }
    }

    fn derivative(&self, t: f64) -> Option<f64> {
        Some(match self {
            Expr::Pow(p) if *p == 0.0 => 0.0,
            Expr::Pow(p) => p * pow(t, p - 1.0),
            Expr::Poly(c) => {
                let d: Vec<f64> = c
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, ci)| i as f64 * ci)
                    .collect();
                horner(&d, t)
            }
            Expr::Exp(c) => c * (c * t).exp(),
            Expr::Log1p => 1.0 / (1.0 + t),
            Expr::Affine(_, b) => *b,
            Expr::Const(_) => 0.0,
            Expr::Scaled(c, e) => c * e.derivative(t)?,
            Expr::Product(fs) => {
                let vals: Vec<f64> = fs.iter().map(|f| f.eval(t)).collect();
                let mut sum = 0.0;
                for (i, f) in fs.iter().enumerate() {
                    let rest: f64 = vals
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, v)| v)
                        .product();
                    sum += f.derivative(t)? * rest;
                }
                sum
            }
            Expr::Custom(_) => return None,
        })
    }

    /// Most negative power at 0, if the expression is singular there.
    fn singular_power(&self) -> Option<f64> {
        match self {
            Expr::Pow(p) if *p < 0.0 => Some(*p),
            Expr::Scaled(_, e) => e.singular_power(),
            Expr::Product(fs) => {
                let ps: Vec<f64> = fs.iter().filter_map(Expr::singular_power).collect();
                (!ps.is_empty()).then(|| ps.iter().sum())
            }
            _ => None,
        }
    }
}

fn pow(t: f64, p: f64) -> f64 {
    match p {
        0.0 => 1.0,
        1.0 => t,
        2.0 => t * t,
        3.0 => t * t * t,
        _ => t.powf(p),
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ci| acc * t + ci)
}

/// A parsed test function on `(0, ∞)`.
#[derive(Clone)]
pub struct Integrand {
    spec: String,
    expr: Expr,
    monotone: Monotone,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("spec", &self.spec)
            .field("monotone", &self.monotone)
            .finish()
    }
}

impl fmt::Display for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

impl std::str::FromStr for Integrand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_integrand(s)
    }
}

impl Integrand {
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn monotone(&self) -> Monotone {
        self.monotone
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.expr.eval(t)
    }

    /// `None` for functions without a symbolic derivative.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        self.expr.derivative(t)
    }

    pub fn has_derivative(&self) -> bool {
        self.expr.derivative(1.0).is_some()
    }

    /// Leading negative power at 0, used by the operator's integrability check.
    pub fn singular_power(&self) -> Option<f64> {
        self.expr.singular_power()
    }

    pub fn constant(c: f64) -> Self {
        Self {
            spec: format!("const:{c}"),
            expr: Expr::Const(c),
            monotone: Monotone::None,
        }
    }

    /// Wraps an arbitrary closure. `name` must identify it uniquely, since
    /// evaluation caches are keyed by spec.
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            spec: name.into(),
            expr: Expr::Custom(Arc::new(f)),
            monotone: Monotone::Unknown,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let monotone = match (self.monotone, c) {
            (_, 0.0) => Monotone::None,
            (m, c) if c > 0.0 => m,
            (Monotone::Increasing, _) => Monotone::Decreasing,
            (Monotone::Decreasing, _) => Monotone::Increasing,
            (m, _) => m,
        };
        Self {
            spec: format!("{c}*{}", self.spec),
            expr: Expr::Scaled(c, Box::new(self.expr.clone())),
            monotone,
        }
    }

    /// Pointwise product. Constant-one factors are dropped so that, for
    /// example, `const:1 * pow:1` shares its spec (and cache entries) with
    /// `pow:1`.
    pub fn product(factors: &[&Integrand]) -> Self {
        let kept: Vec<&Integrand> = factors
            .iter()
            .copied()
            .filter(|f| !matches!(f.expr, Expr::Const(c) if c == 1.0))
            .collect();
        match kept.as_slice() {
            [] => Self::constant(1.0),
            [one] => (*one).clone(),
            many => Self {
                spec: many
                    .iter()
                    .map(|f| f.spec.as_str())
                    .collect::<Vec<_>>()
                    .join("*"),
                expr: Expr::Product(many.iter().map(|f| f.expr.clone()).collect()),
                monotone: Monotone::Unknown,
            },
        }
    }
}

fn parse_err(spec: &str, position: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        spec: spec.to_string(),
        position,
        reason: reason.into(),
    }
}

/// Parses comma-separated reals starting at byte `offset` of `spec`.
fn parse_args(spec: &str, offset: usize) -> Result<Vec<f64>> {
    let body = &spec[offset..];
    let mut out = Vec::new();
    let mut pos = offset;
    for part in body.split(',') {
        let trimmed = part.trim();
        let lead = part.len() - part.trim_start().len();
        let v: f64 = trimmed.parse().map_err(|_| {
            parse_err(
                spec,
                pos + lead,
                format!("expected a number, found {trimmed:?}"),
            )
        })?;
        if !v.is_finite() {
            return Err(parse_err(spec, pos + lead, "number must be finite"));
        }
        out.push(v);
        pos += part.len() + 1;
    }
    Ok(out)
}

fn poly_monotone(c: &[f64]) -> Monotone {
    let d: Vec<f64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, ci)| i as f64 * ci)
        .collect();
    let Some(last) = d.iter().rposition(|v| *v != 0.0) else {
        return Monotone::None;
    };
    let d = &d[..=last];
    // Beyond the Cauchy root bound the derivative has the sign of its
    // leading coefficient, so only (0, R] needs sampling.
    let lead = d[last];
    let bound = 1.0
        + d[..last]
            .iter()
            .map(|v| (v / lead).abs())
            .fold(0.0, f64::max);
    let (mut pos, mut neg) = (lead > 0.0, lead < 0.0);
    for i in 1..=POLY_GRID {
        let v = horner(d, bound * i as f64 / POLY_GRID as f64);
        pos &= v >= 0.0;
        neg &= v <= 0.0;
    }
    match (pos, neg) {
        (true, _) => Monotone::Increasing,
        (_, true) => Monotone::Decreasing,
        _ => Monotone::Unknown,
    }
}

fn sign_monotone(c: f64) -> Monotone {
    if c > 0.0 {
        Monotone::Increasing
    } else if c < 0.0 {
        Monotone::Decreasing
    } else {
        Monotone::None
    }
}

/// Parses one grammar production. Errors carry the byte offset of the
/// offending token.
pub fn parse_integrand(spec: &str) -> Result<Integrand> {
    let (name, args_at) = match spec.find(':') {
        Some(i) => (&spec[..i], Some(i + 1)),
        None => (spec, None),
    };
    let need = |n: Option<usize>| -> Result<Vec<f64>> {
        let Some(at) = args_at else {
            return Err(parse_err(
                spec,
                spec.len(),
                format!("{name} needs ':' followed by arguments"),
            ));
        };
        let args = parse_args(spec, at)?;
        if let Some(n) = n {
            if args.len() != n {
                return Err(parse_err(
                    spec,
                    at,
                    format!("{name} takes {n} argument(s), found {}", args.len()),
                ));
            }
        }
        Ok(args)
    };
    let (expr, monotone) = match name.trim() {
        "pow" => {
            let p = need(Some(1))?[0];
            (Expr::Pow(p), sign_monotone(p))
        }
        "poly" => {
            let c = need(None)?;
            let m = poly_monotone(&c);
            (Expr::Poly(c), m)
        }
        "exp" => {
            let c = need(Some(1))?[0];
            (Expr::Exp(c), sign_monotone(c))
        }
        "log1p" => {
            if let Some(at) = args_at {
                return Err(parse_err(spec, at, "log1p takes no arguments"));
            }
            (Expr::Log1p, Monotone::Increasing)
        }
        "affine" => {
            let v = need(Some(2))?;
            (Expr::Affine(v[0], v[1]), sign_monotone(v[1]))
        }
        "const" => {
            let c = need(Some(1))?[0];
            (Expr::Const(c), Monotone::None)
        }
        other => {
            return Err(parse_err(
                spec,
                0,
                format!(
                    "unknown function {other:?}; expected pow, poly, exp, log1p, affine or const"
                ),
            ))
        }
    };
    Ok(Integrand {
        spec: spec.to_string(),
        expr,
        monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    Synchronous,
    Asynchronous,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct SynchronousPair {
    pub phi: Integrand,
    pub psi: Integrand,
    pub certified: Certification,
}

/// Certifies `(φ(τ)-φ(γ))(ψ(τ)-ψ(γ)) ≥ 0` (or `≤ 0`) on `(0, x_max]`.
///
/// Known monotone directions decide immediately; otherwise every pair of a
/// 200-point grid is checked. A grid that shows both signs yields `Unknown`.
pub fn certify_pair(phi: &Integrand, psi: &Integrand, x_max: f64) -> SynchronousPair {
    use Monotone::*;
    let certified = match (phi.monotone, psi.monotone) {
        (Increasing, Increasing) | (Decreasing, Decreasing) | (None, _) | (_, None) => {
            Certification::Synchronous
        }
        (Increasing, Decreasing) | (Decreasing, Increasing) => Certification::Asynchronous,
        _ => grid_certify(phi, psi, x_max),
    };
    SynchronousPair {
        phi: phi.clone(),
        psi: psi.clone(),
        certified,
    }
}

fn grid_certify(phi: &Integrand, psi: &Integrand, x_max: f64) -> Certification {
    if !(x_max.is_finite() && x_max > 0.0) {
        return Certification::Unknown;
    }
    let pts: Vec<(f64, f64)> = (1..=CERTIFY_GRID)
        .map(|i| {
            let t = x_max * i as f64 / CERTIFY_GRID as f64;
            (phi.eval(t), psi.eval(t))
        })
        .collect();
    if pts.iter().any(|(a, b)| !(a.is_finite() && b.is_finite())) {
        return Certification::Unknown;
    }
    let (mut sync, mut asyn) = (true, true);
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let h = (a.0 - b.0) * (a.1 - b.1);
            sync &= h >= 0.0;
            asyn &= h <= 0.0;
        }
        if !sync && !asyn {
            return Certification::Unknown;
        }
    }
    if sync {
        Certification::Synchronous
    } else {
        Certification::Asynchronous
    }
}

/// Hölder exponents with `1/s + 1/v = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderPair {
    s: f64,
    v: f64,
}

impl HolderPair {
    /// Conjugate pair from `s > 1`.
    pub fn new(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 1.0) {
            return Err(Error::InvalidParameter {
                name: "holder_s",
                value: s,
                reason: "Hölder exponent must exceed 1",
            });
        }
        Ok(Self {
            s,
            v: s / (s - 1.0),
        })
    }

    pub fn from_pair(s: f64, v: f64) -> Result<Self> {
        let pair = Self::new(s)?;
        if !(v > 1.0 && (1.0 / s + 1.0 / v - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidParameter {
                name: "holder_v",
                value: v,
                reason: "1/s + 1/v must equal 1",
            });
        }
        Ok(Self { v, ..pair })
    }

    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn v(&self) -> f64 {
        self.v
    }
}

/// `(∫₀ᵀ |f'(τ)|^p dτ)^(1/p)`.
pub fn lp_norm_derivative(
    f: &Integrand,
    p: f64,
    upper: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    if !f.has_derivative() {
        return Err(Error::MissingDerivative {
            spec: f.spec.clone(),
        });
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "norm exponent must be at least 1",
        });
    }
    if !(upper > 0.0 && upper.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "T",
            value: upper,
            reason: "norm interval must be (0, T) with T > 0",
        });
    }
    let inner = integrate_single(
        JacobiWeight::UNIFORM,
        |t| {
            f.derivative(upper * t)
                .map_or(f64::NAN, |d| d.abs().powf(p))
        },
        cfg,
    )?;
    let integral = upper * inner.value;
    let norm = integral.powf(1.0 / p);
    let est_err = if integral > 0.0 {
        norm / (p * integral) * upper * inner.est_err
    } else {
        inner.est_err.powf(1.0 / p)
    };
    Ok(Integral {
        value: norm,
        est_err,
        ..inner
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CATALOG: &[&str] = &[
        "pow:1",
        "pow:2",
        "pow:0.5",
        "pow:-0.3",
        "poly:1,-2,0.5",
        "exp:1",
        "exp:-0.7",
        "log1p",
        "affine:1,-1",
        "affine:0,3",
        "const:2",
    ];

    fn p(s: &str) -> Integrand {
        parse_integrand(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = p("pow:2");
        assert_eq!(f.eval(3.0), 9.0);
        assert_eq!(f.derivative(3.0), Some(6.0));
        assert_eq!(f.monotone(), Monotone::Increasing);
        let c = p("const:1");
        assert_eq!((c.eval(0.3), c.derivative(0.3)), (1.0, Some(0.0)));
        assert_eq!(c.monotone(), Monotone::None);
        let a = p("affine:1,-1");
        assert_eq!(a.eval(0.25), 0.75);
        assert_eq!(a.monotone(), Monotone::Decreasing);
        assert_eq!(p("log1p").monotone(), Monotone::Increasing);
        assert_eq!(p("poly:0,1,1").monotone(), Monotone::Increasing);
        assert_eq!(p("poly:0,1,-1").monotone(), Monotone::Unknown);
        assert_eq!(p("poly:3,-1,0,0").monotone(), Monotone::Decreasing);
        assert_eq!(p("poly:3").monotone(), Monotone::None);
    }

    #[test]
    fn parse_errors_report_position() {
        let pos = |s: &str| match parse_integrand(s) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("pow:abc"), 4);
        assert_eq!(pos("affine:1,x"), 9);
        assert_eq!(pos("affine:1"), 7);
        assert_eq!(pos("sin:1"), 0);
        assert_eq!(pos("pow"), 3);
        assert_eq!(pos("log1p:2"), 6);
        assert_eq!(pos("exp:inf"), 4);
    }

    #[test]
    fn products_and_scaling() {
        let f = Integrand::product(&[&p("pow:1"), &p("const:1"), &p("exp:1")]);
        assert_eq!(f.spec(), "pow:1*exp:1");
        let t: f64 = 0.7;
        assert!((f.eval(t) - t * t.exp()).abs() < 1e-15);
        assert!((f.derivative(t).unwrap() - (1.0 + t) * t.exp()).abs() < 1e-14);
        assert_eq!(
            Integrand::product(&[&p("const:1"), &p("pow:2")]).spec(),
            "pow:2"
        );
        let s = p("pow:1").scaled(-2.0);
        assert_eq!(s.monotone(), Monotone::Decreasing);
        assert_eq!(s.eval(3.0), -6.0);
        assert_eq!(
            Integrand::product(&[&p("pow:-0.5"), &p("pow:-0.25")]).singular_power(),
            Some(-0.75)
        );
    }

    #[test]
    fn certify_examples() {
        let c = |a: &str, b: &str| certify_pair(&p(a), &p(b), 2.0).certified;
        assert_eq!(c("pow:1", "pow:2"), Certification::Synchronous);
        assert_eq!(c("pow:1", "affine:1,-1"), Certification::Asynchronous);
        assert_eq!(c("const:1", "pow:3"), Certification::Synchronous);
        assert_eq!(c("poly:0,1,-1", "pow:1"), Certification::Unknown);
        assert_eq!(c("poly:0,1,-1", "poly:0,1,-1"), Certification::Synchronous);
        let bump = Integrand::custom("bump", |t| (t - 1.0).powi(2));
        let hill = Integrand::custom("hill", |t| -(t - 1.0).powi(2));
        assert_eq!(
            certify_pair(&bump, &hill, 2.0).certified,
            Certification::Asynchronous
        );
    }

    #[test]
    fn certify_self_and_symmetry() {
        for a in CATALOG {
            assert_eq!(c_of(a, a), Certification::Synchronous, "{a}");
            for b in CATALOG {
                assert_eq!(c_of(a, b), c_of(b, a), "({a}, {b})");
            }
        }
    }

    fn c_of(a: &str, b: &str) -> Certification {
        certify_pair(&p(a), &p(b), 3.0).certified
    }

    #[test]
    fn monotone_claims_hold_on_grid() {
        for s in CATALOG {
            let f = p(s);
            let vals: Vec<f64> = (1..=1000)
                .map(|i| f.eval(5.0 * i as f64 / 1000.0))
                .collect();
            match f.monotone() {
                Monotone::Increasing => assert!(vals.windows(2).all(|w| w[1] >= w[0]), "{s}"),
                Monotone::Decreasing => assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{s}"),
                _ => {}
            }
        }
    }

    #[test]
    fn holder_pairs() {
        let h = HolderPair::new(2.0).unwrap();
        assert_eq!(h.v(), 2.0);
        let h = HolderPair::new(4.0).unwrap();
        assert!((1.0 / h.s() + 1.0 / h.v() - 1.0).abs() < 1e-15);
        assert!(HolderPair::new(1.0).is_err());
        assert!(HolderPair::from_pair(3.0, 2.0).is_err());
        assert!(HolderPair::from_pair(3.0, 1.5).is_ok());
    }

    #[test]
    fn lp_norm_examples() {
        let cfg = QuadratureConfig::default();
        let n = |s: &str, q: f64, t: f64| lp_norm_derivative(&p(s), q, t, &cfg).unwrap().value;
        assert!((n("pow:1", 2.0, 1.0) - 1.0).abs() < 1e-14);
        assert!((n("pow:2", 2.0, 1.0) - 2.0 / 3f64.sqrt()).abs() < 1e-13);
        assert!((n("affine:0,3", 5.0, 2.0) - 3.0 * 2f64.powf(0.2)).abs() < 1e-13);
        // d/dτ τ^0.75 is singular at 0 but |f'|^1.2 stays integrable
        let want = 0.75 * 1.0 / (1.0 - 0.25 * 1.2f64).powf(1.0 / 1.2);
        assert!((n("pow:0.75", 1.2, 1.0) - want).abs() < 1e-9 * want);
        let custom = Integrand::custom("c", |t| t);
        assert!(matches!(
            lp_norm_derivative(&custom, 2.0, 1.0, &cfg),
            Err(Error::MissingDerivative { .. })
        ));
    }

    proptest! {
        #[test]
        fn derivatives_match_finite_differences(idx in 0..CATALOG.len(), t in 0.1f64..3.0) {
            let f = p(CATALOG[idx]);
            let h = 1e-5 * t.max(1.0);
            let fd = (f.eval(t + h) - f.eval(t - h)) / (2.0 * h);
            let d = f.derivative(t).unwrap();
            prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{} at {t}: {fd} vs {d}", CATALOG[idx]);
        }

        #[test]
        fn norm_is_homogeneous(idx in 0..CATALOG.len(), c in -4.0f64..4.0, q in 1.0f64..5.0) {
            prop_assume!(c.abs() > 1e-3);
            let cfg = QuadratureConfig::default();
            let f = p(CATALOG[idx]);
            let base = lp_norm_derivative(&f, q, 1.5, &cfg);
            prop_assume!(base.as_ref().is_ok_and(|b| b.converged && b.value.is_finite()));
            let base = base.unwrap().value;
            let scaled = lp_norm_derivative(&f.scaled(c), q, 1.5, &cfg).unwrap().value;
            prop_assert!((scaled - c.abs() * base).abs() <= 1e-10 * (c.abs() * base).max(1e-300));
        }
    }
}
