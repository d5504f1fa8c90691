//! The left-sided generalized Katugampola integral with lower limit 0,
//!
//! ```text
//! ρ^(1-β) x^k / Γ(α) ∫₀ˣ τ^(ρ(η+1)-1) (x^ρ - τ^ρ)^(α-1) φ(τ) dτ,
//! ```
//!
//! evaluated through `τ = x t^(1/ρ)`, which turns it into
//! `ρ^(-β) x^(k+ρ(η+α)) / Γ(α) · ∫₀¹ t^η (1-t)^(α-1) φ(x t^(1/ρ)) dt`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::functions::Integrand;
use crate::quadrature::{integrate_single, Integral, JacobiWeight, QuadratureConfig};
use crate::special::{gamma, ln_gamma, EvalPoint, FractionalParams, GAMMA_MAX_ARG};

/// Named specializations of the five-parameter family.
///
/// Weyl (lower limit -∞) and Hadamard (a limit in ρ) are not expressible by
/// parameter substitution at lower limit 0 and are not offered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReductionKind {
    RiemannLiouville,
    Katugampola { rho: f64 },
    ErdelyiKober { rho: f64, eta: f64 },
    LiouvilleA0,
    Generalized(FractionalParams),
}

impl ReductionKind {
    pub const SUPPORTED: &'static [&'static str] = &[
        "riemann-liouville",
        "katugampola",
        "erdelyi-kober",
        "liouville-a0",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ReductionKind::RiemannLiouville => "riemann-liouville",
            ReductionKind::Katugampola { .. } => "katugampola",
            ReductionKind::ErdelyiKober { .. } => "erdelyi-kober",
            ReductionKind::LiouvilleA0 => "liouville-a0",
            ReductionKind::Generalized(_) => "generalized",
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Label of a reduction, without its kind-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionLabel {
    RiemannLiouville,
    Katugampola,
    ErdelyiKober,
    LiouvilleA0,
}

impl FromStr for ReductionLabel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "riemann-liouville" => ReductionLabel::RiemannLiouville,
            "katugampola" => ReductionLabel::Katugampola,
            "erdelyi-kober" => ReductionLabel::ErdelyiKober,
            "liouville-a0" => ReductionLabel::LiouvilleA0,
            other => {
                let hint = match other.to_ascii_lowercase().as_str() {
                    "weyl" | "hadamard" => {
                        " (Weyl and Hadamard are excluded: they need a = -inf or a limit in rho)"
                    }
                    _ => " (Weyl and Hadamard reductions are not supported)",
                };
                return Err(format!(
                    "unknown reduction kind {other:?}; supported: {}{hint}",
                    ReductionKind::SUPPORTED.join(", ")
                ));
            }
        })
    }
}

/// Parameter tuple of a named reduction of order `alpha`.
///
/// For Riemann–Liouville and Liouville the exponent `β` only enters through
/// `ρ^(1-β)` with `ρ = 1`, so it is fixed to `α`.
pub fn reduce(kind: ReductionKind, alpha: f64) -> Result<FractionalParams> {
    match kind {
        ReductionKind::RiemannLiouville | ReductionKind::LiouvilleA0 => {
            FractionalParams::new(alpha, alpha, 1.0, 0.0, 0.0)
        }
        ReductionKind::Katugampola { rho } => FractionalParams::new(alpha, alpha, rho, 0.0, 0.0),
        ReductionKind::ErdelyiKober { rho, eta } => {
            FractionalParams::new(alpha, 0.0, rho, -rho * (alpha + eta), eta)
        }
        ReductionKind::Generalized(p) => Ok(p),
    }
}

/// `ρ^(-β) x^(k+ρ(η+α)) / Γ(α)`, the factor in front of the unit integral.
pub fn kernel_prefactor(p: &FractionalParams, x: EvalPoint) -> Result<f64> {
    let expo = p.k() + p.rho() * (p.eta() + p.alpha());
    let ln = -p.beta() * p.rho().ln() + expo * x.get().ln() - ln_gamma(p.alpha())?;
    let v = ln.exp();
    if !v.is_finite() || v == 0.0 {
        return Err(Error::overflow(
            "kernel prefactor",
            format!(
                "ρ^(-β) x^{expo} / Γ(α) is not representable at x = {}",
                x.get()
            ),
        ));
    }
    Ok(v)
}

/// Whether `f` is integrable against the kernel at 0.
fn check_integrable(p: &FractionalParams, f: &Integrand) -> Result<()> {
    if let Some(s) = f.singular_power() {
        let limit = -p.rho() * (p.eta() + 1.0);
        if s <= limit {
            return Err(Error::domain(
                "katugampola_integral",
                format!("{} behaves like τ^{s} at 0; need power > {limit}", f.spec()),
            ));
        }
    }
    Ok(())
}

/// `∫₀¹ t^η (1-t)^(α-1) f(x t^(1/ρ)) dt`. It depends only on `(α, ρ, η, x)`;
/// `β` and `k` enter through [`kernel_prefactor`].
pub fn reduced_integral(
    p: &FractionalParams,
    f: &Integrand,
    x: EvalPoint,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    check_integrable(p, f)?;
    let (xv, inv_rho) = (x.get(), 1.0 / p.rho());
    let w = JacobiWeight::new(p.alpha(), p.eta());
    if inv_rho == 1.0 {
        integrate_single(w, |t| f.eval(xv * t), cfg)
    } else {
        integrate_single(w, |t| f.eval(xv * t.powf(inv_rho)), cfg)
    }
}

/// Value of the operator applied to `f` at `x`.
///
/// Quadrature non-convergence is not an error: the returned [`Integral`]
/// carries `converged = false` with the best available value.
pub fn katugampola_integral(
    p: &FractionalParams,
    f: &Integrand,
    x: EvalPoint,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let pref = kernel_prefactor(p, x)?;
    Ok(reduced_integral(p, f, x, cfg)?.scaled(pref))
}

/// Exact operator value on `τ^σ`:
/// `ρ^(-β) x^(k+ρ(η+α)+σ) Γ(η+σ/ρ+1) / Γ(η+σ/ρ+α+1)`.
pub fn power_closed_form(p: &FractionalParams, sigma: f64, x: EvalPoint) -> Result<f64> {
    let limit = -p.rho() * (p.eta() + 1.0);
    if !(sigma.is_finite() && sigma > limit) {
        return Err(Error::domain(
            "power_closed_form",
            format!("σ = {sigma} must exceed -ρ(η+1) = {limit}"),
        ));
    }
    let a = p.eta() + sigma / p.rho() + 1.0;
    let b = a + p.alpha();
    let expo = p.k() + p.rho() * (p.eta() + p.alpha()) + sigma;
    let v = if b < GAMMA_MAX_ARG {
        gamma(a)? / gamma(b)? * p.rho().powf(-p.beta()) * x.get().powf(expo)
    } else {
        (ln_gamma(a)? - ln_gamma(b)? - p.beta() * p.rho().ln() + expo * x.get().ln()).exp()
    };
    if !v.is_finite() {
        return Err(Error::overflow(
            "power_closed_form",
            format!("value at x = {} is not representable", x.get()),
        ));
    }
    Ok(v)
}
