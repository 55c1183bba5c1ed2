//! Exp-sinh (double-exponential) quadrature on (0, ∞) with level doubling.

use rug::float::Constant;
use rug::Float;

use super::complex::log2_abs;
use super::PrecisionContext;
use crate::error::{Error, Result};

const T_CAP: f64 = 8.0;
const H0: f64 = 0.5;
const MAX_LEVEL: usize = 9;

/// One abscissa of the rule: u = exp((π/2) sinh t), weight = du/dt.
#[derive(Clone, Debug)]
pub struct Node {
    pub t: f64,
    pub u: Float,
    pub ln_u: Float,
    pub weight: Float,
}

/// Node tables for the map u = exp((π/2) sinh t), built lazily per level.
/// Level 0 holds t = j·h0; level l ≥ 1 holds the odd multiples of h0·2^{-l}.
#[derive(Clone, Debug)]
pub struct ExpSinhRule {
    prec: u32,
    levels: Vec<Vec<Node>>,
}

impl ExpSinhRule {
    pub fn new(prec: u32) -> Self {
        ExpSinhRule { prec, levels: Vec::new() }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn node(&self, t: f64) -> Node {
        let p = self.prec;
        let half_pi = Float::with_val(p, Constant::Pi) / 2u32;
        let et = Float::with_val(p, t).exp();
        let emt = Float::with_val(p, et.recip_ref());
        let sinh = Float::with_val(p, &et - &emt) / 2u32;
        let cosh = Float::with_val(p, &et + &emt) / 2u32;
        let ln_u = Float::with_val(p, &half_pi * &sinh);
        let u = Float::with_val(p, ln_u.exp_ref());
        let weight = Float::with_val(p, &u * &half_pi) * cosh;
        Node { t, u, ln_u, weight }
    }

    pub fn step(level: usize) -> f64 {
        H0 / (1u64 << level) as f64
    }

    pub fn level(&mut self, l: usize) -> &[Node] {
        while self.levels.len() <= l {
            let k = self.levels.len();
            let h = Self::step(k);
            let jmax = (T_CAP / h).round() as i64;
            let nodes: Vec<Node> = if k == 0 {
                (-jmax..=jmax).map(|j| self.node(j as f64 * h)).collect()
            } else {
                (-jmax..jmax)
                    .filter(|j| j.rem_euclid(2) == 1)
                    .map(|j| self.node(j as f64 * h))
                    .collect()
            };
            self.levels.push(nodes);
        }
        &self.levels[l]
    }
}

/// Shared driver: `f(node)` returns the integrand value at node.u (weight applied here).
/// `relative` makes the stopping test relative to the running integral.
pub(crate) fn integrate_with_rule<F>(
    rule: &mut ExpSinhRule,
    mut f: F,
    tol: f64,
    relative: bool,
    max_nodes: usize,
) -> Result<Float>
where
    F: FnMut(&Node) -> Result<Float>,
{
    let p = rule.prec();
    let log2_tol = tol.log2();
    // level 0 over the whole cap, then restrict the range to the significant part
    let mut terms0: Vec<(f64, Float)> = Vec::new();
    for node in rule.level(0).to_vec() {
        let v = f(&node)?;
        terms0.push((node.t, Float::with_val(p, &v * &node.weight)));
    }
    let mut sum = Float::new(p);
    for (_, v) in &terms0 {
        sum += v;
    }
    let scale = |s: &Float| if relative { log2_abs(s).max(-1e6) } else { 0.0 };
    let cut = log2_tol + scale(&sum) - 40.0;
    let sig: Vec<f64> = terms0
        .iter()
        .filter(|(_, v)| log2_abs(v) > cut)
        .map(|(t, _)| *t)
        .collect();
    let (t_lo, t_hi) = match (sig.first(), sig.last()) {
        (Some(a), Some(b)) => (a - H0, b + H0),
        _ => return Ok(Float::new(p)),
    };
    let mut estimate = Float::with_val(p, &sum * H0);
    let mut nodes_used = terms0.len();
    for l in 1..=MAX_LEVEL {
        let h = ExpSinhRule::step(l);
        let level: Vec<Node> = rule
            .level(l)
            .iter()
            .filter(|n| n.t >= t_lo && n.t <= t_hi)
            .cloned()
            .collect();
        nodes_used += level.len();
        if nodes_used > max_nodes {
            return Err(Error::QuadratureNotConverged(format!(
                "node budget {max_nodes} exhausted at level {l}"
            )));
        }
        for node in &level {
            let v = f(node)?;
            sum += Float::with_val(p, &v * &node.weight);
        }
        let next = Float::with_val(p, &sum * h);
        let diff = log2_abs(&Float::with_val(p, &next - &estimate));
        estimate = next;
        if l >= 2 && diff < log2_tol + scale(&estimate) {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNotConverged(format!(
        "no agreement to {tol:e} after {MAX_LEVEL} refinements"
    )))
}

/// ∫₀^∞ f(u) du to absolute error ctx.tol.
pub fn integrate_semiaxis<F>(f: F, ctx: &PrecisionContext) -> Result<Float>
where
    F: Fn(&Float) -> Result<Float>,
{
    let mut rule = ExpSinhRule::new(ctx.work_prec());
    integrate_with_rule(&mut rule, |n| f(&n.u), ctx.tol, false, ctx.quad_points)
}

/// ∫₀^∞ f(u) du where f receives (u, ln u); stopping test relative to the result.
pub fn integrate_semiaxis_log<F>(rule: &mut ExpSinhRule, f: F, rel_tol: f64, max_nodes: usize) -> Result<Float>
where
    F: Fn(&Float, &Float) -> Result<Float>,
{
    integrate_with_rule(rule, |n| f(&n.u, &n.ln_u), rel_tol, true, max_nodes)
}
