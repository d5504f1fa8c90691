//! Gaps and bound chains of the Chebyshev-type fractional inequalities,
//! their classical counterparts, and the covariance identity that links the
//! operator to a double integral.
//!
//! Every statement is assembled from operator values obtained through an
//! [`Evaluator`], which memoizes the unit integrals so that a sweep over
//! `β` and `k` (which only enter the prefactor) costs nothing extra.

mod classical;
mod report;

use std::collections::{BTreeMap, HashMap};

pub use classical::{classical_chebyshev, classical_extended};
pub use report::{round15, InequalityReport, ReportParams, TheoremId, Verdict};

use crate::error::{Error, Result};
use crate::functions::{lp_norm_derivative, Certification, HolderPair, Integrand, SynchronousPair};
use crate::operator::{kernel_prefactor, reduced_integral};
use crate::quadrature::{
    integrate_double, integrate_single, Integral, JacobiWeight, PairIntegrand, QuadratureConfig,
};
use crate::special::{gamma, EvalPoint, FractionalParams};

/// Default coefficient of the verdict tolerance `c · max(1, scale)`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Grid used to check weight hypotheses (nonnegative / positive on `(0, x]`).
const HYPOTHESIS_GRID: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum DoubleKind {
    /// `h(τ)h(γ)(φ(τ)-φ(γ))(ψ(τ)-ψ(γ))`
    Covariance,
    /// `h(τ)h(γ)|τ-γ|`
    AbsDiff,
}

type UnitKey = (u64, u64, u64, u64, String);
type DoubleKey = (u64, u64, u64, u64, u64, DoubleKind, String);
type NormKey = (String, u64, u64);

/// Memoizing evaluator for operator values, double integrals and norms.
#[derive(Debug)]
pub struct Evaluator {
    cfg: QuadratureConfig,
    tol_coeff: f64,
    unit: HashMap<UnitKey, Integral>,
    double: HashMap<DoubleKey, Integral>,
    norms: HashMap<NormKey, Integral>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new(QuadratureConfig::default())
    }
}

/// Operand values of one statement, in report form.
#[derive(Default)]
struct Operands {
    map: BTreeMap<String, Option<f64>>,
    converged: bool,
}

impl Operands {
    fn new() -> Self {
        Self {
            map: BTreeMap::new(),
            converged: true,
        }
    }

    fn put(&mut self, name: impl Into<String>, v: Integral) -> f64 {
        self.converged &= v.converged;
        self.map.insert(name.into(), Some(v.value));
        v.value
    }

    fn put_value(&mut self, name: impl Into<String>, v: f64) -> f64 {
        self.map.insert(name.into(), Some(v));
        v
    }

    fn all_finite(&self) -> bool {
        self.map.values().all(|v| v.is_some_and(f64::is_finite))
    }
}

struct KernelPair<'a> {
    h: &'a Integrand,
    phi: &'a Integrand,
    psi: &'a Integrand,
    x: f64,
    inv_rho: f64,
    kind: DoubleKind,
}

impl PairIntegrand for KernelPair<'_> {
    type Point = [f64; 4];

    fn prepare(&self, t: f64) -> [f64; 4] {
        let tau = if self.inv_rho == 1.0 {
            self.x * t
        } else {
            self.x * t.powf(self.inv_rho)
        };
        match self.kind {
            DoubleKind::Covariance => [
                tau,
                self.h.eval(tau),
                self.phi.eval(tau),
                self.psi.eval(tau),
            ],
            DoubleKind::AbsDiff => [tau, self.h.eval(tau), 0.0, 0.0],
        }
    }

    fn eval(&self, a: [f64; 4], b: [f64; 4]) -> f64 {
        let hh = a[1] * b[1];
        match self.kind {
            DoubleKind::Covariance => hh * (a[2] - b[2]) * (a[3] - b[3]),
            DoubleKind::AbsDiff => hh * (a[0] - b[0]).abs(),
        }
    }
}

fn key(v: f64) -> u64 {
    v.to_bits()
}

/// Largest magnitude among the given products, floored at 1.
fn scale_of(products: &[f64]) -> f64 {
    products
        .iter()
        .map(|v| v.abs())
        .filter(|v| v.is_finite())
        .fold(1.0, f64::max)
}

fn one_sided(gap: f64, tol: f64, cert: Certification) -> Verdict {
    if !gap.is_finite() {
        return Verdict::Indeterminate;
    }
    let ok = match cert {
        Certification::Synchronous => gap >= -tol,
        Certification::Asynchronous => gap <= tol,
        Certification::Unknown => return Verdict::Indeterminate,
    };
    if ok {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

fn chain_verdict(chain: [f64; 3], tol: f64) -> Verdict {
    if chain.iter().any(|v| !v.is_finite()) {
        Verdict::Indeterminate
    } else if chain[0] <= chain[1] + tol && chain[1] <= chain[2] + tol {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// True when `f(τ) ≥ 0` (or `> 0` when `strict`) on a grid of `(0, x]`.
fn sign_hypothesis(f: &Integrand, x: f64, strict: bool) -> bool {
    (1..=HYPOTHESIS_GRID).all(|i| {
        let v = f.eval(x * i as f64 / HYPOTHESIS_GRID as f64);
        if strict {
            v > 0.0
        } else {
            v >= 0.0
        }
    })
}

fn shared_shape(p1: &FractionalParams, p2: &FractionalParams) -> Result<()> {
    if p1.shares_kernel_shape(p2) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "delta",
            value: p2.alpha(),
            reason: "the two parameter sets must share rho, k and eta",
        })
    }
}

struct Draft {
    id: TheoremId,
    params: ReportParams,
    x: f64,
    functions: Vec<String>,
    certification: Option<Certification>,
}

impl Draft {
    fn finish(
        self,
        ops: Operands,
        gap: Option<f64>,
        chain: Option<[f64; 3]>,
        tol: f64,
        verdict: Verdict,
        note: Option<String>,
    ) -> InequalityReport {
        let (verdict, note) = if verdict != Verdict::Indeterminate && !ops.all_finite() {
            (
                Verdict::Indeterminate,
                Some("non-finite operand".to_string()),
            )
        } else {
            (verdict, note)
        };
        InequalityReport {
            theorem_id: self.id,
            params: self.params,
            x: self.x,
            functions: self.functions,
            operands: ops.map,
            gap,
            chain,
            tol,
            verdict,
            certification: self.certification,
            converged: ops.converged,
            note,
        }
        .rounded()
    }
}

fn specs(fs: &[&Integrand]) -> Vec<String> {
    fs.iter().map(|f| f.spec().to_string()).collect()
}

impl Evaluator {
    pub fn new(cfg: QuadratureConfig) -> Self {
        Self {
            cfg,
            tol_coeff: DEFAULT_TOL,
            unit: HashMap::new(),
            double: HashMap::new(),
            norms: HashMap::new(),
        }
    }

    /// Replaces the verdict tolerance coefficient.
    pub fn with_tol(mut self, coeff: f64) -> Self {
        self.tol_coeff = coeff;
        self
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    pub fn tol_coeff(&self) -> f64 {
        self.tol_coeff
    }

    fn tol(&self, scale: f64) -> f64 {
        self.tol_coeff * scale.max(1.0)
    }

    /// Operator value, memoized on everything except `β` and `k`.
    pub fn op(&mut self, p: &FractionalParams, f: &Integrand, x: EvalPoint) -> Result<Integral> {
        let pref = kernel_prefactor(p, x)?;
        let k = (
            key(p.alpha()),
            key(p.rho()),
            key(p.eta()),
            key(x.get()),
            f.spec().to_string(),
        );
        let unit = match self.unit.get(&k) {
            Some(v) => *v,
            None => {
                let v = reduced_integral(p, f, x, &self.cfg)?;
                self.unit.insert(k, v);
                v
            }
        };
        Ok(unit.scaled(pref))
    }

    fn double(
        &mut self,
        p1: &FractionalParams,
        p2: &FractionalParams,
        fs: [&Integrand; 3],
        x: EvalPoint,
        kind: DoubleKind,
    ) -> Result<Integral> {
        let pref = kernel_prefactor(p1, x)? * kernel_prefactor(p2, x)?;
        let [h, phi, psi] = fs;
        let spec = match kind {
            DoubleKind::Covariance => format!("{}|{}|{}", h.spec(), phi.spec(), psi.spec()),
            DoubleKind::AbsDiff => h.spec().to_string(),
        };
        let k = (
            key(p1.alpha()),
            key(p2.alpha()),
            key(p1.rho()),
            key(p1.eta()),
            key(x.get()),
            kind,
            spec,
        );
        let unit = match self.double.get(&k) {
            Some(v) => *v,
            None => {
                let g = KernelPair {
                    h,
                    phi,
                    psi,
                    x: x.get(),
                    inv_rho: 1.0 / p1.rho(),
                    kind,
                };
                let v = integrate_double(
                    JacobiWeight::new(p1.alpha(), p1.eta()),
                    JacobiWeight::new(p2.alpha(), p2.eta()),
                    &g,
                    &self.cfg,
                    kind == DoubleKind::AbsDiff,
                )?;
                self.double.insert(k, v);
                v
            }
        };
        Ok(unit.scaled(pref))
    }

    fn norm(&mut self, f: &Integrand, p: f64, upper: f64) -> Result<Integral> {
        let k = (f.spec().to_string(), key(p), key(upper));
        if let Some(v) = self.norms.get(&k) {
            return Ok(*v);
        }
        let v = lp_norm_derivative(f, p, upper, &self.cfg)?;
        self.norms.insert(k, v);
        Ok(v)
    }

    /// `I(φψ) - I(φ)I(ψ)/Λ`.
    pub fn gap_t31(
        &mut self,
        p: &FractionalParams,
        pair: &SynchronousPair,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        let (phi, psi) = (&pair.phi, &pair.psi);
        let one = Integrand::constant(1.0);
        let phipsi = Integrand::product(&[phi, psi]);
        let mut ops = Operands::new();
        let lam = ops.put("I(1)", self.op(p, &one, x)?);
        let ipp = ops.put("I(phi*psi)", self.op(p, &phipsi, x)?);
        let ip = ops.put("I(phi)", self.op(p, phi, x)?);
        let is = ops.put("I(psi)", self.op(p, psi, x)?);
        let prod = ip * is / lam;
        let gap = ipp - prod;
        let tol = self.tol(scale_of(&[ipp, prod]));
        let draft = Draft {
            id: TheoremId::T31,
            params: ReportParams::one(p),
            x: x.get(),
            functions: specs(&[phi, psi]),
            certification: Some(pair.certified),
        };
        Ok(draft.finish(
            ops,
            Some(gap),
            None,
            tol,
            one_sided(gap, tol, pair.certified),
            None,
        ))
    }

    /// `Λ₂ I₁(φψ) + Λ₁ I₂(φψ) - I₁φ I₂ψ - I₁ψ I₂φ`, subscripts naming the
    /// `(α, β)` and `(δ, λ)` operators.
    pub fn gap_t32(
        &mut self,
        p1: &FractionalParams,
        p2: &FractionalParams,
        pair: &SynchronousPair,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        shared_shape(p1, p2)?;
        let one = Integrand::constant(1.0);
        let (phi, psi) = (&pair.phi, &pair.psi);
        let phipsi = Integrand::product(&[phi, psi]);
        let mut ops = Operands::new();
        let l1 = ops.put("I_alpha(1)", self.op(p1, &one, x)?);
        let l2 = ops.put("I_delta(1)", self.op(p2, &one, x)?);
        let a_pp = ops.put("I_alpha(phi*psi)", self.op(p1, &phipsi, x)?);
        let d_pp = ops.put("I_delta(phi*psi)", self.op(p2, &phipsi, x)?);
        let a_p = ops.put("I_alpha(phi)", self.op(p1, phi, x)?);
        let a_s = ops.put("I_alpha(psi)", self.op(p1, psi, x)?);
        let d_p = ops.put("I_delta(phi)", self.op(p2, phi, x)?);
        let d_s = ops.put("I_delta(psi)", self.op(p2, psi, x)?);
        let terms = [l2 * a_pp, l1 * d_pp, a_p * d_s, a_s * d_p];
        let gap = terms[0] + terms[1] - terms[2] - terms[3];
        let tol = self.tol(scale_of(&terms));
        let draft = Draft {
            id: TheoremId::T32,
            params: ReportParams::two(p1, p2),
            x: x.get(),
            functions: specs(&[phi, psi]),
            certification: Some(pair.certified),
        };
        Ok(draft.finish(
            ops,
            Some(gap),
            None,
            tol,
            one_sided(gap, tol, pair.certified),
            None,
        ))
    }

    /// Weighted two-operator lemma; `gap_l41` is the case `p1 = p2`.
    #[allow(clippy::too_many_arguments)]
    fn weighted_pair(
        &mut self,
        id: TheoremId,
        p1: &FractionalParams,
        p2: &FractionalParams,
        pair: &SynchronousPair,
        s_w: &Integrand,
        v_w: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        let (phi, psi) = (&pair.phi, &pair.psi);
        let (a, d) = if id == TheoremId::L41 {
            ("I", "I")
        } else {
            ("I_alpha", "I_delta")
        };
        let mut ops = Operands::new();
        let s_pp = ops.put(
            format!("{a}(s*phi*psi)"),
            self.op(p1, &Integrand::product(&[s_w, phi, psi]), x)?,
        );
        let v1 = ops.put(format!("{d}(v)"), self.op(p2, v_w, x)?);
        let s1 = ops.put(format!("{a}(s)"), self.op(p1, s_w, x)?);
        let v_pp = ops.put(
            format!("{d}(v*phi*psi)"),
            self.op(p2, &Integrand::product(&[v_w, phi, psi]), x)?,
        );
        let s_p = ops.put(
            format!("{a}(s*phi)"),
            self.op(p1, &Integrand::product(&[s_w, phi]), x)?,
        );
        let v_s = ops.put(
            format!("{d}(v*psi)"),
            self.op(p2, &Integrand::product(&[v_w, psi]), x)?,
        );
        let s_s = ops.put(
            format!("{a}(s*psi)"),
            self.op(p1, &Integrand::product(&[s_w, psi]), x)?,
        );
        let v_p = ops.put(
            format!("{d}(v*phi)"),
            self.op(p2, &Integrand::product(&[v_w, phi]), x)?,
        );
        let terms = [s_pp * v1, s1 * v_pp, s_p * v_s, s_s * v_p];
        let gap = terms[0] + terms[1] - terms[2] - terms[3];
        let tol = self.tol(scale_of(&terms));
        let weights_ok =
            sign_hypothesis(s_w, x.get(), false) && sign_hypothesis(v_w, x.get(), false);
        let (verdict, note) = if weights_ok {
            (one_sided(gap, tol, pair.certified), None)
        } else {
            (
                Verdict::Indeterminate,
                Some("weight negative on (0, x]".into()),
            )
        };
        let params = if id == TheoremId::L41 {
            ReportParams::one(p1)
        } else {
            ReportParams::two(p1, p2)
        };
        let draft = Draft {
            id,
            params,
            x: x.get(),
            functions: specs(&[phi, psi, s_w, v_w]),
            certification: Some(pair.certified),
        };
        Ok(draft.finish(ops, Some(gap), None, tol, verdict, note))
    }

    /// `I(sφψ)I(v) + I(s)I(vφψ) - I(sφ)I(vψ) - I(sψ)I(vφ)`.
    pub fn gap_l41(
        &mut self,
        p: &FractionalParams,
        pair: &SynchronousPair,
        s_w: &Integrand,
        v_w: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        self.weighted_pair(TheoremId::L41, p, p, pair, s_w, v_w, x)
    }

    /// As [`Evaluator::gap_l41`] with the `(δ, λ)` operator on every
    /// `v`-side operand.
    pub fn gap_l43(
        &mut self,
        p1: &FractionalParams,
        p2: &FractionalParams,
        pair: &SynchronousPair,
        s_w: &Integrand,
        v_w: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        shared_shape(p1, p2)?;
        self.weighted_pair(TheoremId::L43, p1, p2, pair, s_w, v_w, x)
    }

    /// Three-weight theorem; with `p1 = p2` it is the single-order form.
    #[allow(clippy::too_many_arguments)]
    fn weighted_triple(
        &mut self,
        id: TheoremId,
        p1: &FractionalParams,
        p2: &FractionalParams,
        pair: &SynchronousPair,
        f_w: &Integrand,
        g_w: &Integrand,
        h_w: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        let (phi, psi) = (&pair.phi, &pair.psi);
        let single = id == TheoremId::T42;
        let (a, d) = if single {
            ("I", "I")
        } else {
            ("I_alpha", "I_delta")
        };
        let mut ops = Operands::new();
        let mut put = |ev: &mut Self, name: String, p: &FractionalParams, fs: &[&Integrand]| {
            let v = ev.op(p, &Integrand::product(fs), x)?;
            Ok::<f64, Error>(ops.put(name, v))
        };
        // α-side operands
        let ah = put(self, format!("{a}(h)"), p1, &[h_w])?;
        let af = put(self, format!("{a}(f)"), p1, &[f_w])?;
        let ag = put(self, format!("{a}(g)"), p1, &[g_w])?;
        let a_fpp = put(self, format!("{a}(f*phi*psi)"), p1, &[f_w, phi, psi])?;
        let a_hpp = put(self, format!("{a}(h*phi*psi)"), p1, &[h_w, phi, psi])?;
        let a_fp = put(self, format!("{a}(f*phi)"), p1, &[f_w, phi])?;
        let a_fs = put(self, format!("{a}(f*psi)"), p1, &[f_w, psi])?;
        let a_hp = put(self, format!("{a}(h*phi)"), p1, &[h_w, phi])?;
        let a_hs = put(self, format!("{a}(h*psi)"), p1, &[h_w, psi])?;
        // δ-side operands
        let dg = put(self, format!("{d}(g)"), p2, &[g_w])?;
        let df = put(self, format!("{d}(f)"), p2, &[f_w])?;
        let d_gpp = put(self, format!("{d}(g*phi*psi)"), p2, &[g_w, phi, psi])?;
        let d_fpp = put(self, format!("{d}(f*phi*psi)"), p2, &[f_w, phi, psi])?;
        let d_gp = put(self, format!("{d}(g*phi)"), p2, &[g_w, phi])?;
        let d_gs = put(self, format!("{d}(g*psi)"), p2, &[g_w, psi])?;
        let d_fp = put(self, format!("{d}(f*phi)"), p2, &[f_w, phi])?;
        let d_fs = put(self, format!("{d}(f*psi)"), p2, &[f_w, psi])?;

        let lhs_terms = [
            ah * a_fpp * dg,
            2.0 * ah * af * d_gpp,
            ah * ag * d_fpp,
            af * dg * a_hpp,
            ag * df * a_hpp,
        ];
        let rhs_terms = [
            ah * a_fp * d_gs,
            ah * a_fs * d_gp,
            af * a_hp * d_gs,
            af * a_hs * d_gp,
            ag * a_hp * d_fs,
            ag * a_hs * d_fp,
        ];
        let lhs: f64 = lhs_terms.iter().sum();
        let rhs: f64 = rhs_terms.iter().sum();
        ops.put_value("lhs", lhs);
        ops.put_value("rhs", rhs);
        let gap = lhs - rhs;
        let all: Vec<f64> = lhs_terms.iter().chain(&rhs_terms).copied().collect();
        let tol = self.tol(scale_of(&all));
        let weights_ok = [f_w, g_w, h_w]
            .iter()
            .all(|w| sign_hypothesis(w, x.get(), false));
        let (verdict, note) = if weights_ok {
            (one_sided(gap, tol, pair.certified), None)
        } else {
            (
                Verdict::Indeterminate,
                Some("weight negative on (0, x]".into()),
            )
        };
        let draft = Draft {
            id,
            params: if single {
                ReportParams::one(p1)
            } else {
                ReportParams::two(p1, p2)
            },
            x: x.get(),
            functions: specs(&[phi, psi, f_w, g_w, h_w]),
            certification: Some(pair.certified),
        };
        Ok(draft.finish(ops, Some(gap), None, tol, verdict, note))
    }

    /// Three-weight single-order theorem, assembled term by term from its
    /// displayed form.
    pub fn gap_t42(
        &mut self,
        p: &FractionalParams,
        pair: &SynchronousPair,
        f_w: &Integrand,
        g_w: &Integrand,
        h_w: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        self.weighted_triple(TheoremId::T42, p, p, pair, f_w, g_w, h_w, x)
    }

    /// Mixed-order form of [`Evaluator::gap_t42`].
    #[allow(clippy::too_many_arguments)]
    pub fn gap_t44(
        &mut self,
        p1: &FractionalParams,
        p2: &FractionalParams,
        pair: &SynchronousPair,
        f_w: &Integrand,
        g_w: &Integrand,
        h_w: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        shared_shape(p1, p2)?;
        self.weighted_triple(TheoremId::T44, p1, p2, pair, f_w, g_w, h_w, x)
    }

    /// Both sides of the covariance identity
    /// `∬ K(τ)K(γ) h(τ)h(γ) H(τ,γ) = 2[I(hφψ)I(h) - I(hψ)I(hφ)]`
    /// with `H = (φ(τ)-φ(γ))(ψ(τ)-ψ(γ))`. The gap is `lhs - rhs`.
    pub fn identity_l51(
        &mut self,
        p: &FractionalParams,
        h_w: &Integrand,
        phi: &Integrand,
        psi: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        let mut ops = Operands::new();
        let lhs = ops.put(
            "lhs",
            self.double(p, p, [h_w, phi, psi], x, DoubleKind::Covariance)?,
        );
        let (ih, ihpp, ihp, ihs) = self.h_operands(&mut ops, "I", p, h_w, phi, psi, x)?;
        let products = [ihpp * ih, ihs * ihp];
        let rhs = ops.put_value("rhs", 2.0 * (products[0] - products[1]));
        let gap = lhs - rhs;
        let tol = self.tol(scale_of(&[lhs, rhs, 2.0 * products[0], 2.0 * products[1]]));
        let (verdict, note) = if !sign_hypothesis(h_w, x.get(), true) {
            (
                Verdict::Indeterminate,
                Some("h not positive on (0, x]".into()),
            )
        } else if !gap.is_finite() {
            (Verdict::Indeterminate, None)
        } else if gap.abs() <= tol {
            (Verdict::Holds, None)
        } else {
            (Verdict::Violated, None)
        };
        let draft = Draft {
            id: TheoremId::L51,
            params: ReportParams::one(p),
            x: x.get(),
            functions: specs(&[phi, psi, h_w]),
            certification: None,
        };
        Ok(draft.finish(ops, Some(gap), None, tol, verdict, note))
    }

    /// `(I h, I(hφψ), I(hφ), I(hψ))` under `p`, recorded with prefix `a`.
    #[allow(clippy::too_many_arguments)]
    fn h_operands(
        &mut self,
        ops: &mut Operands,
        a: &str,
        p: &FractionalParams,
        h: &Integrand,
        phi: &Integrand,
        psi: &Integrand,
        x: EvalPoint,
    ) -> Result<(f64, f64, f64, f64)> {
        let ih = ops.put(format!("{a}(h)"), self.op(p, h, x)?);
        let ihpp = ops.put(
            format!("{a}(h*phi*psi)"),
            self.op(p, &Integrand::product(&[h, phi, psi]), x)?,
        );
        let ihp = ops.put(
            format!("{a}(h*phi)"),
            self.op(p, &Integrand::product(&[h, phi]), x)?,
        );
        let ihs = ops.put(
            format!("{a}(h*psi)"),
            self.op(p, &Integrand::product(&[h, psi]), x)?,
        );
        Ok((ih, ihpp, ihp, ihs))
    }

    fn holder_norms(
        &mut self,
        ops: &mut Operands,
        phi: &Integrand,
        psi: &Integrand,
        hp: HolderPair,
        t_norm: f64,
    ) -> Result<f64> {
        let nphi = ops.put("norm_s(phi')", self.norm(phi, hp.s(), t_norm)?);
        let npsi = ops.put("norm_v(psi')", self.norm(psi, hp.v(), t_norm)?);
        ops.put_value("holder_s", hp.s());
        ops.put_value("T_norm", t_norm);
        Ok(nphi * npsi)
    }

    /// `A = 2|I(hφψ)I(h) - I(hψ)I(hφ)| ≤ B ≤ C = ‖φ'‖_s‖ψ'‖_v x (I h)²`, where
    /// `B` carries the `|τ-γ|` double integral. Norms are taken over
    /// `(0, t_norm)`.
    #[allow(clippy::too_many_arguments)]
    pub fn chain_t52(
        &mut self,
        p: &FractionalParams,
        h_w: &Integrand,
        phi: &Integrand,
        psi: &Integrand,
        hp: HolderPair,
        x: EvalPoint,
        t_norm: f64,
    ) -> Result<InequalityReport> {
        let mut ops = Operands::new();
        let (ih, ihpp, ihp, ihs) = self.h_operands(&mut ops, "I", p, h_w, phi, psi, x)?;
        let norms = self.holder_norms(&mut ops, phi, psi, hp, t_norm)?;
        let dbl = ops.put(
            "double_abs",
            self.double(p, p, [h_w, phi, psi], x, DoubleKind::AbsDiff)?,
        );
        let products = [ihpp * ih, ihs * ihp];
        let a = 2.0 * (products[0] - products[1]).abs();
        let b = norms * dbl;
        let c = norms * x.get() * ih * ih;
        let chain = [a, b, c];
        let tol = self.tol(scale_of(&[2.0 * products[0], 2.0 * products[1], b, c]));
        self.finish_chain(
            TheoremId::T52,
            ReportParams::one(p),
            ops,
            chain,
            tol,
            [h_w, phi, psi],
            x,
        )
    }

    /// Mixed-order chain:
    /// `A = I₁(hφψ)I₂h - I₂(hψ)I₁(hφ) - I₂(hφ)I₁(hψ) + I₂(hφψ)I₁h`,
    /// `B` the mixed-kernel `|τ-γ|` bound and `C = ‖φ'‖‖ψ'‖ x I₁h I₂h`.
    /// The chain records `|A|`; the signed value is the operand `A`.
    #[allow(clippy::too_many_arguments)]
    pub fn chain_t53(
        &mut self,
        p1: &FractionalParams,
        p2: &FractionalParams,
        h_w: &Integrand,
        phi: &Integrand,
        psi: &Integrand,
        hp: HolderPair,
        x: EvalPoint,
        t_norm: f64,
    ) -> Result<InequalityReport> {
        shared_shape(p1, p2)?;
        let mut ops = Operands::new();
        let (ah, ahpp, ahp, ahs) = self.h_operands(&mut ops, "I_alpha", p1, h_w, phi, psi, x)?;
        let (dh, dhpp, dhp, dhs) = self.h_operands(&mut ops, "I_delta", p2, h_w, phi, psi, x)?;
        let norms = self.holder_norms(&mut ops, phi, psi, hp, t_norm)?;
        let dbl = ops.put(
            "double_abs",
            self.double(p1, p2, [h_w, phi, psi], x, DoubleKind::AbsDiff)?,
        );
        let terms = [ahpp * dh, dhs * ahp, dhp * ahs, dhpp * ah];
        let signed = ops.put_value("A", terms[0] - terms[1] - terms[2] + terms[3]);
        let b = norms * dbl;
        let c = norms * x.get() * ah * dh;
        let chain = [signed.abs(), b, c];
        let mut all = terms.to_vec();
        all.extend([b, c]);
        let tol = self.tol(scale_of(&all));
        self.finish_chain(
            TheoremId::T53,
            ReportParams::two(p1, p2),
            ops,
            chain,
            tol,
            [h_w, phi, psi],
            x,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn finish_chain(
        &self,
        id: TheoremId,
        params: ReportParams,
        ops: Operands,
        chain: [f64; 3],
        tol: f64,
        [h, phi, psi]: [&Integrand; 3],
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        let (verdict, note) = if sign_hypothesis(h, x.get(), true) {
            (chain_verdict(chain, tol), None)
        } else {
            (
                Verdict::Indeterminate,
                Some("h not positive on (0, x]".into()),
            )
        };
        let draft = Draft {
            id,
            params,
            x: x.get(),
            functions: specs(&[phi, psi, h]),
            certification: None,
        };
        Ok(draft.finish(ops, None, Some(chain), tol, verdict, note))
    }

    /// Classical weighted functional on `[0, x]` (see [`classical_extended`]),
    /// judged against the synchrony of the pair.
    pub fn classical_t(
        &mut self,
        pair: &SynchronousPair,
        g_w: &Integrand,
        h_w: &Integrand,
        x: EvalPoint,
    ) -> Result<InequalityReport> {
        let (phi, psi) = (&pair.phi, &pair.psi);
        let mut ops = Operands::new();
        let ext = classical_extended(phi, psi, g_w, h_w, 0.0, x.get(), &self.cfg)?;
        let gap = ops.put_value("T(phi,psi,g,h)", ext.value);
        ops.converged &= ext.converged;
        let t = classical_chebyshev(phi, psi, 0.0, x.get(), &self.cfg)?;
        ops.put_value("T(phi,psi)", t);
        let tol = self.tol(ext.scale);
        let weights_ok =
            sign_hypothesis(g_w, x.get(), false) && sign_hypothesis(h_w, x.get(), false);
        let (verdict, note) = if weights_ok {
            (one_sided(gap, tol, pair.certified), None)
        } else {
            (
                Verdict::Indeterminate,
                Some("weight negative on (0, x]".into()),
            )
        };
        let draft = Draft {
            id: TheoremId::ClassicalT,
            params: ReportParams {
                alpha: 1.0,
                beta: 0.0,
                rho: 1.0,
                k: 0.0,
                eta: 0.0,
                delta: None,
                lambda: None,
            },
            x: x.get(),
            functions: specs(&[phi, psi, g_w, h_w]),
            certification: Some(pair.certified),
        };
        Ok(draft.finish(ops, Some(gap), None, tol, verdict, note))
    }

    /// Unit-interval integral `∫₀¹ w(t) f(x t) dt` for the classical and
    /// Riemann–Liouville assemblies (`ρ = 1`, `η = 0`).
    fn plain(&self, alpha: f64, f: &Integrand, x: f64) -> Result<Integral> {
        integrate_single(JacobiWeight::new(alpha, 0.0), |t| f.eval(x * t), &self.cfg)
    }

    fn plain_abs_double(&self, alpha: f64, g: &Integrand, x: f64) -> Result<Integral> {
        let one = Integrand::constant(1.0);
        let pair = KernelPair {
            h: g,
            phi: &one,
            psi: &one,
            x,
            inv_rho: 1.0,
            kind: DoubleKind::AbsDiff,
        };
        let w = JacobiWeight::new(alpha, 0.0);
        integrate_double(w, w, &pair, &self.cfg, true)
    }

    /// Fractional Riemann–Liouville chain of order `α` for weight `g`:
    /// `2|I g I(gφψ) - I(gφ) I(gψ)| ≤ ‖φ'‖‖ψ'‖/Γ(α)² ∬ (x-τ)^(α-1)(x-γ)^(α-1)
    /// |τ-γ| g g ≤ ‖φ'‖‖ψ'‖ x (I g)²`, computed directly in the
    /// Riemann–Liouville normalization. The verdict also requires the
    /// chain to coincide with [`Evaluator::chain_t52`] at `ρ = 1, k = 0, η = 0`.
    #[allow(clippy::too_many_arguments)]
    pub fn remark_rl(
        &mut self,
        alpha: f64,
        g_w: &Integrand,
        phi: &Integrand,
        psi: &Integrand,
        hp: HolderPair,
        x: EvalPoint,
        t_norm: f64,
    ) -> Result<InequalityReport> {
        let xv = x.get();
        let mut ops = Operands::new();
        let pref = xv.powf(alpha) / gamma(alpha)?;
        let mut rl = |ev: &Self, name: &str, f: &Integrand| -> Result<f64> {
            Ok(ops.put(name, ev.plain(alpha, f, xv)?.scaled(pref)))
        };
        let ig = rl(self, "RL(g)", g_w)?;
        let igpp = rl(self, "RL(g*phi*psi)", &Integrand::product(&[g_w, phi, psi]))?;
        let igp = rl(self, "RL(g*phi)", &Integrand::product(&[g_w, phi]))?;
        let igs = rl(self, "RL(g*psi)", &Integrand::product(&[g_w, psi]))?;
        let norms = self.holder_norms(&mut ops, phi, psi, hp, t_norm)?;
        let dbl = ops.put(
            "double_abs",
            self.plain_abs_double(alpha, g_w, xv)?.scaled(pref * pref),
        );
        let products = [ig * igpp, igp * igs];
        let chain = [
            2.0 * (products[0] - products[1]).abs(),
            norms * dbl,
            norms * xv * ig * ig,
        ];
        let p = FractionalParams::new(alpha, alpha, 1.0, 0.0, 0.0)?;
        let general = self.chain_t52(&p, g_w, phi, psi, hp, x, t_norm)?;
        let general_chain = general.chain.unwrap_or([f64::NAN; 3]);
        let mismatch = chain
            .iter()
            .zip(&general_chain)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ops.put_value("mismatch_vs_T5.2", mismatch);
        ops.converged &= general.converged;
        let tol = self.tol(scale_of(&[
            2.0 * products[0],
            2.0 * products[1],
            chain[1],
            chain[2],
        ]));
        let (verdict, note) = if !sign_hypothesis(g_w, xv, true) {
            (
                Verdict::Indeterminate,
                Some("g not positive on (0, x]".into()),
            )
        } else if !mismatch.is_finite() {
            (Verdict::Indeterminate, None)
        } else if mismatch > tol {
            (
                Verdict::Violated,
                Some("differs from the T5.2 chain".into()),
            )
        } else {
            (chain_verdict(chain, tol), None)
        };
        let draft = Draft {
            id: TheoremId::RemarkRl,
            params: ReportParams::one(&p),
            x: xv,
            functions: specs(&[phi, psi, g_w]),
            certification: None,
        };
        Ok(draft.finish(ops, None, Some(chain), tol, verdict, note))
    }

    /// Classical integral chain on `[0, x]`:
    /// `2|T(φ,ψ,g)| ≤ ‖φ'‖‖ψ'‖ ∬|τ-γ| g g ≤ ‖φ'‖‖ψ'‖ x (∫g)²` with
    /// `T(φ,ψ,g) = ∫g ∫gφψ - ∫gφ ∫gψ`.
    pub fn classical_t4(
        &mut self,
        g_w: &Integrand,
        phi: &Integrand,
        psi: &Integrand,
        hp: HolderPair,
        x: EvalPoint,
        t_norm: f64,
    ) -> Result<InequalityReport> {
        let xv = x.get();
        let mut ops = Operands::new();
        let mut int = |ev: &Self, name: &str, f: &Integrand| -> Result<f64> {
            Ok(ops.put(name, ev.plain(1.0, f, xv)?.scaled(xv)))
        };
        let ig = int(self, "int(g)", g_w)?;
        let igpp = int(
            self,
            "int(g*phi*psi)",
            &Integrand::product(&[g_w, phi, psi]),
        )?;
        let igp = int(self, "int(g*phi)", &Integrand::product(&[g_w, phi]))?;
        let igs = int(self, "int(g*psi)", &Integrand::product(&[g_w, psi]))?;
        let norms = self.holder_norms(&mut ops, phi, psi, hp, t_norm)?;
        let dbl = ops.put(
            "double_abs",
            self.plain_abs_double(1.0, g_w, xv)?.scaled(xv * xv),
        );
        let products = [ig * igpp, igp * igs];
        let chain = [
            2.0 * (products[0] - products[1]).abs(),
            norms * dbl,
            norms * xv * ig * ig,
        ];
        let tol = self.tol(scale_of(&[
            2.0 * products[0],
            2.0 * products[1],
            chain[1],
            chain[2],
        ]));
        let (verdict, note) = if sign_hypothesis(g_w, xv, false) {
            (chain_verdict(chain, tol), None)
        } else {
            (Verdict::Indeterminate, Some("g negative on (0, x]".into()))
        };
        let draft = Draft {
            id: TheoremId::ClassicalT4,
            params: ReportParams {
                alpha: 1.0,
                beta: 0.0,
                rho: 1.0,
                k: 0.0,
                eta: 0.0,
                delta: None,
                lambda: None,
            },
            x: xv,
            functions: specs(&[phi, psi, g_w]),
            certification: None,
        };
        Ok(draft.finish(ops, None, Some(chain), tol, verdict, note))
    }

    /// Report for a statement that could not be evaluated at all.
    pub fn failed(
        id: TheoremId,
        params: ReportParams,
        x: f64,
        functions: Vec<String>,
        err: &Error,
    ) -> InequalityReport {
        InequalityReport {
            theorem_id: id,
            params,
            x,
            functions,
            operands: BTreeMap::new(),
            gap: None,
            chain: None,
            tol: 0.0,
            verdict: Verdict::Indeterminate,
            certification: None,
            converged: false,
            note: Some(err.to_string()),
        }
        .rounded()
    }
}

#[cfg(test)]
mod tests;
