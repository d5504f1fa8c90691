//! Gamma and Beta functions, the validated operator parameter tuple, and the
//! normalisation `Λ` (the operator applied to the constant function 1).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest argument for which `Γ(z)` is finite in double precision.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos series for `z >= 0.5`, returned as `(t, A)` with
/// `Γ(z) = sqrt(2π) t^(z-1/2) e^(-t) A`.
fn lanczos(z: f64) -> (f64, f64) {
    let zm = z - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (zm + i as f64);
    }
    (zm + LANCZOS_G + 0.5, series)
}

fn check_positive(what: &'static str, z: f64) -> Result<()> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::domain(
            what,
            format!("argument {z} must be positive"),
        ));
    }
    Ok(())
}

/// Gamma function for positive real arguments.
pub fn gamma(z: f64) -> Result<f64> {
    check_positive("gamma", z)?;
    if z > GAMMA_MAX_ARG {
        return Err(Error::overflow(
            "gamma",
            format!("Γ({z}) exceeds f64 range"),
        ));
    }
    if z < 0.5 {
        return Ok(gamma(z + 1.0)? / z);
    }
    if z > 10.0 {
        // upward recurrence from [9, 10)
        let m = (z - 9.0).floor();
        let mut base = z - m;
        let mut v = gamma(base)?;
        while base < z - 0.5 {
            v *= base;
            base += 1.0;
        }
        return Ok(v);
    }
    let (t, series) = lanczos(z);
    // t^(z-1/2) as a product of two halves
    let half = t.powf(0.5 * (z - 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * series)
}

/// Natural logarithm of `Γ(z)` for positive real arguments.
pub fn ln_gamma(z: f64) -> Result<f64> {
    check_positive("ln_gamma", z)?;
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if z < 0.5 {
        return Ok(ln_gamma(z + 1.0)? - z.ln());
    }
    let (t, series) = lanczos(z);
    Ok(0.5 * (2.0 * PI).ln() + (z - 0.5) * t.ln() - t + series.ln())
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    check_positive("beta", a)?;
    check_positive("beta", b)?;
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`, evaluated through log-gamma.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    check_positive("beta", a)?;
    check_positive("beta", b)?;
    if a + b < GAMMA_MAX_ARG {
        return Ok(gamma(a)? * (gamma(b)? / gamma(a + b)?));
    }
    let v = ln_beta(a, b)?.exp();
    if v.is_infinite() {
        return Err(Error::overflow(
            "beta",
            format!("B({a}, {b}) exceeds f64 range"),
        ));
    }
    Ok(v)
}

/// Parameters `(α, β, ρ, k, η)` of the left-sided generalized Katugampola
/// integral with lower limit 0.
///
/// Invariants: `α > 0`, `ρ > 0`, `η > -1`, every field finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalParams {
    alpha: f64,
    beta: f64,
    rho: f64,
    k: f64,
    eta: f64,
}

impl FractionalParams {
    pub fn new(alpha: f64, beta: f64, rho: f64, k: f64, eta: f64) -> Result<Self> {
        let fields = [
            ("alpha", alpha),
            ("beta", beta),
            ("rho", rho),
            ("k", k),
            ("eta", eta),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        if alpha <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "order must be positive",
            });
        }
        if rho <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: rho,
                reason: "must be positive",
            });
        }
        if eta <= -1.0 {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                reason: "must exceed -1 for the kernel to be integrable at 0",
            });
        }
        Ok(Self {
            alpha,
            beta,
            rho,
            k,
            eta,
        })
    }

    /// Same `ρ, k, η` with a different order pair, e.g. `(δ, λ)`.
    pub fn with_order(&self, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, self.rho, self.k, self.eta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// True when `other` shares `ρ`, `k` and `η` with `self`.
    pub fn shares_kernel_shape(&self, other: &Self) -> bool {
        self.rho == other.rho && self.k == other.k && self.eta == other.eta
    }
}

/// Upper limit `x > 0` of the operator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EvalPoint(f64);

impl EvalPoint {
    pub fn new(x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidParameter {
                name: "x",
                value: x,
                reason: "evaluation point must be positive and finite",
            });
        }
        Ok(Self(x))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `Λ = Γ(η+1)/Γ(η+α+1) · ρ^(-β) · x^(k+ρ(η+α))`.
pub fn lambda_fn(p: &FractionalParams, x: EvalPoint) -> Result<f64> {
    let ln = ln_gamma(p.eta + 1.0)? - ln_gamma(p.eta + p.alpha + 1.0)? - p.beta * p.rho.ln()
        + (p.k + p.rho * (p.eta + p.alpha)) * x.get().ln();
    let v = ln.exp();
    if !v.is_finite() {
        return Err(Error::overflow("lambda", format!("ln Λ = {ln}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_examples() {
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-15);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), 1.772_453_850_905_516) < 1e-14);
    }

    #[test]
    fn gamma_matches_factorials_up_to_170() {
        let mut fact = 1.0_f64;
        for n in 1..=170u32 {
            // fact == (n-1)!
            let g = gamma(n as f64).unwrap();
            assert!(rel(g, fact) < 1e-13, "Γ({n}) = {g}, expected {fact}");
            fact *= n as f64;
        }
    }

    #[test]
    fn gamma_half_integers() {
        // Γ(m + 1/2) = √π · (2m-1)!! / 2^m
        let mut v = PI.sqrt();
        for m in 0..150u32 {
            let z = m as f64 + 0.5;
            assert!(rel(gamma(z).unwrap(), v) < 1e-13, "Γ({z})");
            v *= z;
        }
    }

    #[test]
    fn gamma_small_arguments_use_recurrence() {
        let z = 0.1;
        assert!(rel(gamma(z).unwrap(), gamma(z + 1.0).unwrap() / z) < 1e-15);
        assert!(rel(gamma(1e-8).unwrap(), 1e8 - 0.577_215_664_901_532_9) < 1e-12);
    }

    #[test]
    fn gamma_domain_and_overflow() {
        assert!(matches!(gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(gamma(-1.5), Err(Error::Domain { .. })));
        assert!(matches!(gamma(f64::NAN), Err(Error::Domain { .. })));
        assert!(matches!(gamma(172.0), Err(Error::Overflow { .. })));
        assert!(gamma(171.6).unwrap().is_finite());
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        for &z in &[0.3, 0.5, 1.0, 2.5, 10.0, 50.0, 170.0] {
            let g = gamma(z).unwrap();
            assert!((ln_gamma(z).unwrap() - g.ln()).abs() < 1e-13 * g.ln().abs().max(1.0));
        }
        assert!(ln_gamma(1000.0).unwrap().is_finite());
    }

    #[test]
    fn beta_examples() {
        assert!(rel(beta_fn(1.0, 1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-14);
        assert!(rel(beta_fn(0.5, 0.5).unwrap(), PI) < 1e-14);
        assert!(matches!(beta_fn(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(beta_fn(1.0, -2.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn lambda_examples() {
        let p = FractionalParams::new(1.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(rel(lambda_fn(&p, EvalPoint::new(1.0).unwrap()).unwrap(), 1.0) < 1e-15);
        assert!(rel(lambda_fn(&p, EvalPoint::new(2.0).unwrap()).unwrap(), 2.0) < 1e-14);

        let p = FractionalParams::new(0.5, 0.5, 2.0, 1.0, 0.5).unwrap();
        // Γ(1.5)/Γ(2) · 2^(-1/2) with Γ(1.5) = √π/2
        let expected = PI.sqrt() / 2.0 / 2f64.sqrt();
        let got = lambda_fn(&p, EvalPoint::new(1.0).unwrap()).unwrap();
        assert!(rel(got, expected) < 1e-14);
        assert!(rel(got, 0.626_657_068_7) < 1e-10);
    }

    #[test]
    fn lambda_overflow_is_reported() {
        let p = FractionalParams::new(100.0, 0.0, 10.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            lambda_fn(&p, EvalPoint::new(1e10).unwrap()),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(FractionalParams::new(0.0, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(FractionalParams::new(1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(FractionalParams::new(1.0, 0.0, 1.0, 0.0, -1.0).is_err());
        assert!(FractionalParams::new(1.0, f64::NAN, 1.0, 0.0, 0.0).is_err());
        assert!(FractionalParams::new(1.0, -3.0, 0.1, -7.0, -0.99).is_ok());
        assert!(EvalPoint::new(0.0).is_err());
        assert!(EvalPoint::new(f64::INFINITY).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gamma_recurrence(z in 0.5f64..100.0) {
                let lhs = gamma(z + 1.0).unwrap();
                let rhs = z * gamma(z).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
            }

            #[test]
            fn lambda_positive(
                alpha in 0.05f64..5.0, beta in -2.0f64..2.0, rho in 0.1f64..4.0,
                k in -2.0f64..2.0, eta in -0.95f64..3.0, x in 0.05f64..5.0,
            ) {
                let p = FractionalParams::new(alpha, beta, rho, k, eta).unwrap();
                prop_assert!(lambda_fn(&p, EvalPoint::new(x).unwrap()).unwrap() > 0.0);
            }
        }
    }
}
