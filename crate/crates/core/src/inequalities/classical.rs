use crate::error::{Error, Result};
use crate::functions::Integrand;
use crate::quadrature::{integrate_single, JacobiWeight, QuadratureConfig};

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter {
            name: "b",
            value: b,
            reason: "interval needs a < b",
        });
    }
    Ok(())
}

/// `∫_a^b f` and whether the quadrature converged.
fn integral(f: &Integrand, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(f64, bool)> {
    let r = integrate_single(JacobiWeight::UNIFORM, |t| f.eval(a + (b - a) * t), cfg)?;
    Ok((r.value * (b - a), r.converged))
}

/// Normalized Chebyshev functional
/// `T(φ,ψ) = (1/(b-a)) ∫φψ - (1/(b-a))² ∫φ ∫ψ` on `[a, b]`.
pub fn classical_chebyshev(
    phi: &Integrand,
    psi: &Integrand,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_interval(a, b)?;
    let len = b - a;
    let (ipp, _) = integral(&Integrand::product(&[phi, psi]), a, b, cfg)?;
    let (ip, _) = integral(phi, a, b, cfg)?;
    let (is, _) = integral(psi, a, b, cfg)?;
    Ok(ipp / len - ip * is / (len * len))
}

/// Value of the two-weight functional with the magnitude of its largest
/// product, for tolerance scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extended {
    pub value: f64,
    pub scale: f64,
    pub converged: bool,
}

/// `T(φ,ψ,g,h) = ∫h ∫φψg + ∫g ∫φψh - ∫φh ∫ψg - ∫φg ∫ψh` on `[a, b]`;
/// nonnegative for synchronous `φ, ψ` and nonnegative weights.
pub fn classical_extended(
    phi: &Integrand,
    psi: &Integrand,
    g: &Integrand,
    h: &Integrand,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Extended> {
    check_interval(a, b)?;
    let mut converged = true;
    let mut int = |fs: &[&Integrand]| -> Result<f64> {
        let (v, ok) = integral(&Integrand::product(fs), a, b, cfg)?;
        converged &= ok;
        Ok(v)
    };
    let terms = [
        int(&[h])? * int(&[phi, psi, g])?,
        int(&[g])? * int(&[phi, psi, h])?,
        int(&[phi, h])? * int(&[psi, g])?,
        int(&[phi, g])? * int(&[psi, h])?,
    ];
    Ok(Extended {
        value: terms[0] + terms[1] - terms[2] - terms[3],
        scale: terms.iter().map(|v| v.abs()).fold(0.0, f64::max),
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::parse_integrand;

    fn p(s: &str) -> Integrand {
        parse_integrand(s).unwrap()
    }

    #[test]
    fn chebyshev_examples() {
        let cfg = QuadratureConfig::default();
        let t = |a: &str, b: &str| classical_chebyshev(&p(a), &p(b), 0.0, 1.0, &cfg).unwrap();
        assert!((t("pow:1", "pow:1") - 1.0 / 12.0).abs() < 1e-14);
        assert!(t("const:1", "pow:7").abs() < 1e-14);
        assert!((t("pow:1", "affine:1,-1") + 1.0 / 12.0).abs() < 1e-14);
        // normalization: on [0, 2] with φ = ψ = τ the variance of U(0,2) is 1/3
        let wide = classical_chebyshev(&p("pow:1"), &p("pow:1"), 0.0, 2.0, &cfg).unwrap();
        assert!((wide - 1.0 / 3.0).abs() < 1e-14);
        assert!(classical_chebyshev(&p("pow:1"), &p("pow:1"), 1.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn extended_examples() {
        let cfg = QuadratureConfig::default();
        let one = p("const:1");
        let e = |a: &str, b: &str| {
            classical_extended(&p(a), &p(b), &one, &one, 0.0, 1.0, &cfg)
                .unwrap()
                .value
        };
        assert!((e("pow:1", "pow:1") - 1.0 / 6.0).abs() < 1e-14);
        assert!(e("const:1", "pow:2").abs() < 1e-14);
        assert!((e("pow:1", "affine:1,-1") + 1.0 / 6.0).abs() < 1e-14);
        let w = classical_extended(
            &p("pow:1"),
            &p("exp:1"),
            &p("pow:2"),
            &p("log1p"),
            0.0,
            1.5,
            &cfg,
        )
        .unwrap();
        assert!(w.value > 0.0 && w.converged);
    }
}
