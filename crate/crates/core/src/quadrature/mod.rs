//! Integration against the weight `t^η (1-t)^(α-1)` on `(0, 1)`.
//!
//! [`jacobi_rule`] is the primitive. The adaptive integrators build a
//! composite rule from it: a Gauss–Jacobi panel on `[1/2, 1]` absorbs the
//! `(1-t)^(α-1)` singularity, a geometric sequence of Gauss–Legendre panels
//! (ratio 4) covers `[ε, 1/2]`, and a Gauss–Jacobi panel on `[0, ε]` absorbs
//! `t^η`. The grading resolves factors such as `f(x t^(1/ρ))`, whose
//! expansion at 0 contains non-integer powers of `t` that a single Jacobi
//! rule only resolves algebraically.

mod double;
mod jacobi;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use double::{integrate_double, PairFn, PairIntegrand};
pub use jacobi::{cached_rule, jacobi_rule, JacobiRule};

use crate::error::{Error, Result};

/// Exponents of the weight `t^eta (1-t)^(alpha-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiWeight {
    pub alpha: f64,
    pub eta: f64,
}

impl JacobiWeight {
    pub fn new(alpha: f64, eta: f64) -> Self {
        Self { alpha, eta }
    }

    /// Plain Lebesgue measure on `(0, 1)`.
    pub const UNIFORM: JacobiWeight = JacobiWeight {
        alpha: 1.0,
        eta: 0.0,
    };

    fn at(&self, t: f64) -> f64 {
        let mut w = 1.0;
        if self.eta != 0.0 {
            w *= t.powf(self.eta);
        }
        if self.alpha != 1.0 {
            w *= (1.0 - t).powf(self.alpha - 1.0);
        }
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Points per panel on the first pass.
    pub n_start: usize,
    /// Largest points-per-panel count tried before giving up.
    pub n_max: usize,
    /// Successive-doubling agreement required for convergence.
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            n_start: 16,
            n_max: 4096,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_start < 2 {
            return Err(Error::InvalidParameter {
                name: "n_start",
                value: self.n_start as f64,
                reason: "must be at least 2",
            });
        }
        if self.n_max < self.n_start {
            return Err(Error::InvalidParameter {
                name: "n_max",
                value: self.n_max as f64,
                reason: "must be at least n_start",
            });
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                reason: "must be positive",
            });
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Points per panel in the final pass.
    pub n_used: usize,
    /// Difference between the last two passes.
    pub est_err: f64,
    pub converged: bool,
}

impl Integral {
    /// Rescales value and error estimate by a constant factor.
    pub fn scaled(self, c: f64) -> Self {
        Self {
            value: self.value * c,
            est_err: self.est_err * c.abs(),
            ..self
        }
    }
}

/// Number of geometric panels so that `ε^(η+1) ≈ 1e-12`.
fn graded_levels(eta: f64) -> usize {
    let l = 12.0 / ((eta + 1.0) * 4f64.log10());
    (l.ceil() as usize).clamp(4, 160)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PanelKind {
    /// `[0, eps]`, Jacobi in `t/eps` with exponent `η`.
    Inner { eps: f64 },
    /// `[a, b]` away from both endpoints, Gauss–Legendre.
    Graded { a: f64, b: f64 },
    /// `[1/2, 1]`, Jacobi in `2t - 1` with exponent `α - 1` at 1.
    Right,
}

#[derive(Debug, Clone)]
pub(crate) struct Panel {
    pub kind: PanelKind,
    pub start: usize,
    pub end: usize,
}

/// Composite rule: `Σ w_i f(t_i) ≈ ∫₀¹ t^η (1-t)^(α-1) f(t) dt`.
#[derive(Debug, Clone)]
pub(crate) struct GradedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub panels: Vec<Panel>,
}

impl GradedRule {
    fn build(w: JacobiWeight, n: usize, levels: usize) -> Result<Self> {
        let mut nodes = Vec::with_capacity(n * (levels + 2));
        let mut weights = Vec::with_capacity(n * (levels + 2));
        let mut panels = Vec::with_capacity(levels + 2);
        let edge = |j: usize| 0.5 * 0.25f64.powi(j as i32);

        let eps = edge(levels);
        let inner = cached_rule(1.0, w.eta, n)?;
        let scale = eps.powf(w.eta + 1.0);
        for (s, ws) in inner.iter() {
            let t = eps * s;
            nodes.push(t);
            weights.push(ws * scale * (1.0 - t).powf(w.alpha - 1.0));
        }
        panels.push(Panel {
            kind: PanelKind::Inner { eps },
            start: 0,
            end: nodes.len(),
        });

        let legendre = cached_rule(1.0, 0.0, n)?;
        for j in (0..levels).rev() {
            let (a, b) = (edge(j + 1), edge(j));
            let start = nodes.len();
            for (s, ws) in legendre.iter() {
                let t = a + (b - a) * s;
                nodes.push(t);
                weights.push(ws * (b - a) * w.at(t));
            }
            panels.push(Panel {
                kind: PanelKind::Graded { a, b },
                start,
                end: nodes.len(),
            });
        }

        let right = cached_rule(w.alpha, 0.0, n)?;
        let start = nodes.len();
        let scale = 0.5f64.powf(w.alpha);
        for (s, ws) in right.iter() {
            let t = 0.5 + 0.5 * s;
            nodes.push(t);
            weights.push(ws * scale * if w.eta == 0.0 { 1.0 } else { t.powf(w.eta) });
        }
        panels.push(Panel {
            kind: PanelKind::Right,
            start,
            end: nodes.len(),
        });

        Ok(Self {
            nodes,
            weights,
            panels,
        })
    }
}

type GradedKey = (u64, u64, usize, usize);

pub(crate) fn graded_rule(w: JacobiWeight, n: usize, levels: usize) -> Result<Arc<GradedRule>> {
    static CACHE: OnceLock<Mutex<HashMap<GradedKey, Arc<GradedRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (w.alpha.to_bits(), w.eta.to_bits(), n, levels);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return Ok(Arc::clone(r));
    }
    let rule = Arc::new(GradedRule::build(w, n, levels)?);
    cache
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}

fn check_weight(w: JacobiWeight) -> Result<()> {
    if !(w.alpha.is_finite() && w.alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: w.alpha,
            reason: "weight exponent alpha must be positive",
        });
    }
    if !(w.eta.is_finite() && w.eta > -1.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: w.eta,
            reason: "weight exponent eta must exceed -1",
        });
    }
    Ok(())
}

/// Successive-doubling driver shared by the single and double integrators.
///
/// `pass(n)` returns `(value, magnitude)` where `magnitude` is the integral
/// of `|integrand|`; convergence is judged relative to the larger of the two
/// so that integrals which cancel to ~0 still terminate. `pass` returns
/// `None` when the rule for `n` would be too large to evaluate.
pub(crate) fn doubling(
    cfg: &QuadratureConfig,
    mut pass: impl FnMut(usize) -> Result<Option<(f64, f64)>>,
) -> Result<Integral> {
    cfg.validate()?;
    let mut n = cfg.n_start;
    let mut prev: Option<f64> = None;
    let mut last = Integral {
        value: f64::NAN,
        n_used: 0,
        est_err: f64::INFINITY,
        converged: false,
    };
    while n <= cfg.n_max {
        let Some((value, magnitude)) = pass(n)? else {
            break;
        };
        if !value.is_finite() {
            return Ok(Integral {
                value,
                n_used: n,
                est_err: f64::INFINITY,
                converged: false,
            });
        }
        let est_err = prev.map_or(f64::INFINITY, |p| (value - p).abs());
        last = Integral {
            value,
            n_used: n,
            est_err,
            converged: est_err <= cfg.rel_tol * value.abs().max(magnitude),
        };
        if last.converged {
            break;
        }
        prev = Some(value);
        n *= 2;
    }
    Ok(last)
}

/// Adaptive `∫₀¹ t^η (1-t)^(α-1) f(t) dt`. `f` is never sampled at 0 or 1.
pub fn integrate_single(
    w: JacobiWeight,
    f: impl Fn(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    check_weight(w)?;
    let levels = graded_levels(w.eta);
    doubling(cfg, |n| {
        let rule = graded_rule(w, n, levels)?;
        let (mut sum, mut mag) = (0.0, 0.0);
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let term = wt * f(t);
            sum += term;
            mag += term.abs();
        }
        Ok(Some((sum, mag)))
    })
}
