use super::{
    cached_rule, check_weight, doubling, graded_levels, graded_rule, Integral, JacobiWeight,
    PanelKind, QuadratureConfig,
};
use crate::error::Result;

/// Largest tensor evaluated in one pass; doubling stops beyond it.
const MAX_PAIRS: usize = 1 << 24;

/// Integrand of a double integral over `(0,1)²`.
///
/// `prepare` is called once per node and may precompute per-point data
/// (function values, say) so that `eval` stays cheap on the tensor grid.
pub trait PairIntegrand {
    type Point: Copy;
    fn prepare(&self, t: f64) -> Self::Point;
    fn eval(&self, t: Self::Point, u: Self::Point) -> f64;
}

/// Adapts a plain closure `g(t, u)`.
pub struct PairFn<F>(pub F);

impl<F: Fn(f64, f64) -> f64> PairIntegrand for PairFn<F> {
    type Point = f64;
    fn prepare(&self, t: f64) -> f64 {
        t
    }
    fn eval(&self, t: f64, u: f64) -> f64 {
        (self.0)(t, u)
    }
}

#[derive(Default)]
struct Acc {
    sum: f64,
    mag: f64,
}

impl Acc {
    fn add(&mut self, term: f64) {
        self.sum += term;
        self.mag += term.abs();
    }

    fn merge_scaled(&mut self, other: Acc, c: f64) {
        self.sum += c * other.sum;
        self.mag += c.abs() * other.mag;
    }
}

/// Adaptive `∬ W₁(t) W₂(u) g(t, u) dt du` over `(0,1)²`.
///
/// With `diagonal_split` the diagonal panel blocks are split along `t = u`
/// and each triangle is mapped to the square by a Duffy collapse, so
/// integrands with a kink on the diagonal (such as `|t - u|`) converge
/// spectrally. Without it the plain tensor rule is used.
pub fn integrate_double<G: PairIntegrand>(
    w1: JacobiWeight,
    w2: JacobiWeight,
    g: &G,
    cfg: &QuadratureConfig,
    diagonal_split: bool,
) -> Result<Integral> {
    check_weight(w1)?;
    check_weight(w2)?;
    let levels = graded_levels(w1.eta).max(graded_levels(w2.eta));
    doubling(cfg, |n| {
        let r1 = graded_rule(w1, n, levels)?;
        let r2 = graded_rule(w2, n, levels)?;
        if r1.nodes.len() * r2.nodes.len() > MAX_PAIRS {
            return Ok(None);
        }
        let p1: Vec<G::Point> = r1.nodes.iter().map(|&t| g.prepare(t)).collect();
        let p2: Vec<G::Point> = r2.nodes.iter().map(|&t| g.prepare(t)).collect();
        let mut acc = Acc::default();
        let block = |acc: &mut Acc, a: std::ops::Range<usize>, b: std::ops::Range<usize>| {
            for i in a {
                let mut row = Acc::default();
                for j in b.clone() {
                    row.add(r2.weights[j] * g.eval(p1[i], p2[j]));
                }
                acc.merge_scaled(row, r1.weights[i]);
            }
        };
        if !diagonal_split {
            block(&mut acc, 0..p1.len(), 0..p2.len());
            return Ok(Some((acc.sum, acc.mag)));
        }
        for (pi, a) in r1.panels.iter().enumerate() {
            for (qi, b) in r2.panels.iter().enumerate() {
                if pi != qi {
                    block(&mut acc, a.start..a.end, b.start..b.end);
                }
            }
            diagonal_block(&mut acc, a.kind, w1, w2, g, n)?;
        }
        Ok(Some((acc.sum, acc.mag)))
    })
}

/// Both triangles of the diagonal block of one panel.
fn diagonal_block<G: PairIntegrand>(
    acc: &mut Acc,
    kind: PanelKind,
    w1: JacobiWeight,
    w2: JacobiWeight,
    g: &G,
    n: usize,
) -> Result<()> {
    let (a1, e1, a2, e2) = (w1.alpha, w1.eta, w2.alpha, w2.eta);
    match kind {
        PanelKind::Inner { eps } => {
            // t = u s on t < u, u = t s on t > u; the t^η u^η' factors
            // become Jacobi weights in the collapsed coordinates.
            let outer = cached_rule(1.0, e1 + e2 + 1.0, n)?;
            let factor = eps.powf(e1 + e2 + 2.0);
            let tail = |t: f64, u: f64| (1.0 - t).powf(a1 - 1.0) * (1.0 - u).powf(a2 - 1.0);
            let lower = cached_rule(1.0, e1, n)?;
            let upper = cached_rule(1.0, e2, n)?;
            let mut tri = Acc::default();
            for (v, wv) in outer.iter() {
                let x = eps * v;
                let px = g.prepare(x);
                let mut row = Acc::default();
                for (s, ws) in lower.iter() {
                    let t = x * s;
                    row.add(ws * tail(t, x) * g.eval(g.prepare(t), px));
                }
                for (s, ws) in upper.iter() {
                    let u = x * s;
                    row.add(ws * tail(x, u) * g.eval(px, g.prepare(u)));
                }
                tri.merge_scaled(row, wv);
            }
            acc.merge_scaled(tri, factor);
        }
        PanelKind::Graded { a, b } => {
            let leg = cached_rule(1.0, 0.0, n)?;
            let (w1, w2) = (w1, w2);
            let mut tri = Acc::default();
            for (v, wv) in leg.iter() {
                let x = a + (b - a) * v;
                let px = g.prepare(x);
                let (w1x, w2x) = (w1.at(x), w2.at(x));
                let mut row = Acc::default();
                for (s, ws) in leg.iter() {
                    let y = a + (x - a) * s;
                    let py = g.prepare(y);
                    row.add(ws * w1.at(y) * w2x * g.eval(py, px));
                    row.add(ws * w1x * w2.at(y) * g.eval(px, py));
                }
                tri.merge_scaled(row, wv * (x - a));
            }
            acc.merge_scaled(tri, b - a);
        }
        PanelKind::Right => {
            // p = 1 - t, q = 1 - u; on each triangle the smaller distance to
            // 1 is written as a fraction of the larger one.
            let outer = cached_rule(1.0, a1 + a2 - 1.0, n)?;
            let factor = 0.5f64.powf(a1 + a2);
            let head = |t: f64, u: f64| {
                let mut h = 1.0;
                if e1 != 0.0 {
                    h *= t.powf(e1);
                }
                if e2 != 0.0 {
                    h *= u.powf(e2);
                }
                h
            };
            // q < p: inner exponent from the u weight
            let q_small = cached_rule(1.0, a2 - 1.0, n)?;
            let p_small = cached_rule(1.0, a1 - 1.0, n)?;
            let mut tri = Acc::default();
            for (v, wv) in outer.iter() {
                let big = 0.5 * v;
                let x = 1.0 - big;
                let px = g.prepare(x);
                let mut row = Acc::default();
                for (s, ws) in q_small.iter() {
                    let u = 1.0 - big * s;
                    row.add(ws * head(x, u) * g.eval(px, g.prepare(u)));
                }
                for (s, ws) in p_small.iter() {
                    let t = 1.0 - big * s;
                    row.add(ws * head(t, x) * g.eval(g.prepare(t), px));
                }
                tri.merge_scaled(row, wv);
            }
            acc.merge_scaled(tri, factor);
        }
    }
    Ok(())
}
