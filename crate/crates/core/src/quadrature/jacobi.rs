//! Gauss–Jacobi rules on `[0, 1]` for the weight `t^η (1-t)^(α-1)`.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix built from the
//! three-term recurrence (Golub–Welsch), polished by Newton iteration on the
//! orthonormal polynomial of degree `n`. Weights come from the Christoffel
//! function `w_i = 1 / Σ_{k<n} p_k(t_i)²`, which avoids eigenvectors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::special::beta_fn;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    alpha: f64,
    eta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl JacobiRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    /// Strictly increasing, inside `(0, 1)`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ w_i f(t_i)`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(t, w)| w * f(t)).sum()
    }
}

/// Monic recurrence coefficients `(a_k, b_k)` on `[0, 1]`, `k = 0..=n`.
fn recurrence(alpha: f64, eta: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    // Classical Jacobi on [-1, 1] with weight (1-x)^a (1+x)^b, then x = 2t - 1.
    let a = alpha - 1.0;
    let b = eta;
    let ab = a + b;
    let mut diag = Vec::with_capacity(n + 1);
    let mut off = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let dx = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        diag.push(0.5 * (1.0 + dx));
        let bx = match k {
            0 => 0.0,
            1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab)),
            _ => 4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0)),
        };
        off.push(0.25 * bx);
    }
    (diag, off)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL.
/// `e[i]` couples rows `i` and `i+1`; `e` has the same length as `d`.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> std::result::Result<(), usize> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(l);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Orthonormal polynomial values `p_{n}(t)`, `p_n'(t)` and `Σ_{k<n} p_k(t)²`.
fn orthonormal_eval(t: f64, diag: &[f64], sq: &[f64], n: usize, p0: f64) -> (f64, f64, f64) {
    let (mut p_prev, mut p) = (0.0, p0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    let mut sum = 0.0;
    for k in 0..n {
        sum += p * p;
        let next = ((t - diag[k]) * p - sq[k] * p_prev) / sq[k + 1];
        let dnext = (p + (t - diag[k]) * d - sq[k] * d_prev) / sq[k + 1];
        p_prev = p;
        p = next;
        d_prev = d;
        d = dnext;
    }
    (p, d, sum)
}

/// `n`-point Gauss rule for `∫₀¹ t^η (1-t)^(α-1) f(t) dt`.
pub fn jacobi_rule(alpha: f64, eta: f64, n: usize) -> Result<JacobiRule> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "Jacobi exponent alpha must be positive",
        });
    }
    if !(eta.is_finite() && eta > -1.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "Jacobi exponent eta must exceed -1",
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "a rule needs at least 2 points",
        });
    }

    let mu0 = beta_fn(eta + 1.0, alpha)?;
    let (diag, off) = recurrence(alpha, eta, n);
    let sq: Vec<f64> = off.iter().map(|b| b.sqrt()).collect();

    let mut d = diag[..n].to_vec();
    let mut e: Vec<f64> = sq[1..=n].to_vec();
    tridiagonal_eigenvalues(&mut d, &mut e).map_err(|index| Error::NodeConvergence {
        index,
        n,
        residual: f64::NAN,
    })?;
    d.sort_by(f64::total_cmp);

    let p0 = 1.0 / mu0.sqrt();
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (i, &guess) in d.iter().enumerate() {
        // Newton may not leave the gap between neighbouring eigenvalues.
        let lo = if i == 0 {
            0.0
        } else {
            0.5 * (d[i - 1] + guess)
        };
        let hi = if i + 1 == n {
            1.0
        } else {
            0.5 * (guess + d[i + 1])
        };
        let mut t = guess.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
        // a stalled step is accepted relative to the eigenvalue gap
        let stall_tol = 1e-10 * (hi - lo);
        let mut converged = false;
        let mut last_step = f64::INFINITY;
        for _ in 0..30 {
            let (p, dp, _) = orthonormal_eval(t, &diag, &sq, n, p0);
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            let next = t - step;
            if !(next > lo && next < hi) {
                break;
            }
            if step.abs() > 0.5 * last_step.abs() && step.abs() <= stall_tol {
                converged = true;
                break;
            }
            t = next;
            if step.abs() <= 4.0 * f64::EPSILON * t {
                converged = true;
                break;
            }
            last_step = step;
        }
        if !converged {
            let (p, dp, _) = orthonormal_eval(t, &diag, &sq, n, p0);
            let step = p / dp;
            if step.is_nan() || step.abs() > stall_tol.max(64.0 * f64::EPSILON * t) {
                return Err(Error::NodeConvergence {
                    index: i,
                    n,
                    residual: step,
                });
            }
        }
        let (_, _, sum) = orthonormal_eval(t, &diag, &sq, n, p0);
        nodes.push(t);
        weights.push(1.0 / sum);
    }

    let ordered = nodes.windows(2).all(|w| w[0] < w[1]);
    let inside = nodes.iter().all(|&t| t > 0.0 && t < 1.0);
    if !(ordered && inside) || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::NodeConvergence {
            index: 0,
            n,
            residual: f64::NAN,
        });
    }

    Ok(JacobiRule {
        alpha,
        eta,
        nodes,
        weights,
    })
}

type RuleKey = (u64, u64, usize);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<JacobiRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<JacobiRule>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared, memoised [`jacobi_rule`].
pub fn cached_rule(alpha: f64, eta: f64, n: usize) -> Result<Arc<JacobiRule>> {
    let key = (alpha.to_bits(), eta.to_bits(), n);
    if let Some(rule) = rule_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(jacobi_rule(alpha, eta, n)?);
    rule_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}
