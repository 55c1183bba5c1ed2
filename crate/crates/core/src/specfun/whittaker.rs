//! Whittaker W_{μ,ν}(x) through the Kummer U integral
//! U(a,b,x) = Γ(a)^{-1} ∫₀^∞ e^{-xt} t^{a−1} (1+t)^{b−a−1} dt.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::gamma::gamma_real;
use crate::error::{Error, Result};
use crate::numkernel::quadrature::Node;
use crate::numkernel::{log2_abs, ExpSinhRule, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhittakerParams {
    pub mu: f64,
    pub nu: f64,
    pub x: f64,
}

impl WhittakerParams {
    pub fn new(mu: f64, nu: f64, x: f64) -> Self {
        WhittakerParams { mu, nu, x }
    }

    /// Kummer parameters (a, b) = (ν − μ + 1/2, 1 + 2ν).
    pub fn kummer(&self) -> (f64, f64) {
        (self.nu - self.mu + 0.5, 1.0 + 2.0 * self.nu)
    }
}

fn shared_level(prec: u32, level: usize) -> Vec<Node> {
    static RULES: OnceLock<Mutex<HashMap<u32, ExpSinhRule>>> = OnceLock::new();
    let mut map = RULES.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
    map.entry(prec).or_insert_with(|| ExpSinhRule::new(prec)).level(level).to_vec()
}

const MAX_LEVEL: usize = 10;

/// Kummer U(a, b, ·) for fixed (a, b) and many arguments: the x-independent
/// part weight·t^{a−1}(1+t)^{b−a−1} of every node is tabulated once.
pub struct WhittakerKernel {
    a: Float,
    b: Float,
    prec: u32,
    inv_gamma_a: Float,
    // per level: (t, u, factor)
    levels: Vec<Vec<(f64, Float, Float)>>,
    kind: KernelKind,
    rel_tol: f64,
    max_nodes: usize,
}

enum KernelKind {
    Integral,
    /// U(−n, b, x) is a polynomial of degree n.
    Polynomial(u32),
}

impl WhittakerKernel {
    pub fn new(a: f64, b: f64, ctx: &PrecisionContext) -> Result<Self> {
        let prec = ctx.work_prec() + 16;
        let kind = if a > 0.0 {
            KernelKind::Integral
        } else if a.fract() == 0.0 {
            KernelKind::Polynomial((-a) as u32)
        } else {
            return Err(Error::DomainError(format!("Kummer U integral needs a > 0, got a={a}")));
        };
        let af = Float::with_val(prec, a);
        let inv_gamma_a = match kind {
            KernelKind::Integral => gamma_real(&af)?.recip(),
            KernelKind::Polynomial(_) => Float::with_val(prec, 1),
        };
        Ok(WhittakerKernel {
            a: af,
            b: Float::with_val(prec, b),
            prec,
            inv_gamma_a,
            levels: Vec::new(),
            kind,
            rel_tol: ctx.tol / 100.0,
            max_nodes: ctx.quad_points.max(64),
        })
    }

    fn level(&mut self, l: usize) -> &[(f64, Float, Float)] {
        while self.levels.len() <= l {
            let p = self.prec;
            let am1 = Float::with_val(p, &self.a - 1u32);
            let bam1 = Float::with_val(p, &self.b - &self.a) - 1u32;
            let nodes = shared_level(p, self.levels.len());
            let tab = nodes
                .into_iter()
                .map(|n| {
                    let l1p = Float::with_val(p, n.u.ln_1p_ref());
                    let e = Float::with_val(p, &am1 * &n.ln_u) + Float::with_val(p, &bam1 * &l1p);
                    let f = e.exp() * &n.weight;
                    (n.t, n.u, f)
                })
                .collect();
            self.levels.push(tab);
        }
        &self.levels[l]
    }

    fn polynomial(&self, n: u32, x: &Float) -> Float {
        // U(−n,b,x) = (−1)^n Σ_s C(n,s) (b+s)_{n−s} (−x)^s
        let p = self.prec;
        let mut sum = Float::new(p);
        let mut binom = Float::with_val(p, 1);
        let mut xs = Float::with_val(p, 1);
        for s in 0..=n {
            let mut poch = Float::with_val(p, 1);
            for j in 0..(n - s) {
                poch *= Float::with_val(p, &self.b + (s + j));
            }
            sum += Float::with_val(p, &binom * &poch) * &xs;
            binom *= n - s;
            binom /= s + 1;
            xs *= x;
            xs = -xs;
        }
        if n % 2 == 1 {
            -sum
        } else {
            sum
        }
    }

    /// U(a, b, x).
    pub fn u(&mut self, x: &Float) -> Result<Float> {
        if !(x.is_sign_positive() && !x.is_zero()) {
            return Err(Error::DomainError(format!("Kummer U needs x > 0, got {}", x.to_f64())));
        }
        if let KernelKind::Polynomial(n) = self.kind {
            let v = self.polynomial(n, &Float::with_val(self.prec, x));
            return Ok(v);
        }
        let p = self.prec;
        let x = Float::with_val(p, x);
        let log2_tol = self.rel_tol.log2();
        let eval = |u: &Float, f: &Float| -> Float {
            let e = Float::with_val(p, -Float::with_val(p, &x * u)).exp();
            e * f
        };
        let level0: Vec<(f64, Float)> = self.level(0).iter().map(|(t, u, f)| (*t, eval(u, f))).collect();
        let mut sum = Float::new(p);
        for (_, v) in &level0 {
            sum += v;
        }
        if sum.is_zero() {
            return Err(Error::QuadratureNotConverged("Kummer U integrand vanished".into()));
        }
        let cut = log2_abs(&sum) + log2_tol - 40.0;
        let sig: Vec<f64> = level0.iter().filter(|(_, v)| log2_abs(v) > cut).map(|(t, _)| *t).collect();
        let h0 = ExpSinhRule::step(0);
        let (lo, hi) = (sig[0] - h0, sig[sig.len() - 1] + h0);
        let mut est = Float::with_val(p, &sum * h0);
        let mut used = level0.len();
        for l in 1..=MAX_LEVEL {
            let h = ExpSinhRule::step(l);
            let mut add = Float::new(p);
            let mut count = 0;
            for (t, u, f) in self.level(l) {
                if *t < lo || *t > hi {
                    continue;
                }
                add += eval(u, f);
                count += 1;
            }
            used += count;
            sum += add;
            let next = Float::with_val(p, &sum * h);
            let diff = log2_abs(&Float::with_val(p, &next - &est));
            est = next;
            if l >= 2 && diff < log2_tol + log2_abs(&est) {
                return Ok(est * &self.inv_gamma_a);
            }
            if used > self.max_nodes {
                break;
            }
        }
        Err(Error::QuadratureNotConverged(format!(
            "Kummer U(a={}, x={}) after {used} nodes",
            self.a.to_f64(),
            x.to_f64()
        )))
    }
}

/// W_{μ,ν}(x) · e^{x/2} = x^{ν+1/2} U(a, b, x).
pub fn whittaker_w_scaled(p: &WhittakerParams, ctx: &PrecisionContext) -> Result<Float> {
    if !(p.x > 0.0) {
        return Err(Error::DomainError(format!("Whittaker W needs x > 0, got {}", p.x)));
    }
    let prec = ctx.work_prec() + 16;
    let x = Float::with_val(prec, p.x);
    whittaker_w_scaled_at(p.mu, p.nu, &x, ctx)
}

/// As [`whittaker_w_scaled`] with a high-precision argument.
pub fn whittaker_w_scaled_at(mu: f64, nu: f64, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.work_prec() + 16;
    let (a, b) = WhittakerParams::new(mu, nu, 0.0).kummer();
    let x = Float::with_val(prec, x);
    let (u, extra) = if a <= 0.0 && a.fract() != 0.0 {
        // Kummer transformation U(a,b,x) = x^{1−b} U(a−b+1, 2−b, x)
        let mut k = WhittakerKernel::new(a - b + 1.0, 2.0 - b, ctx)?;
        (k.u(&x)?, 1.0 - b)
    } else {
        let mut k = WhittakerKernel::new(a, b, ctx)?;
        (k.u(&x)?, 0.0)
    };
    let pw = Float::with_val(prec, nu + 0.5 + extra);
    let xp = Float::with_val(prec, Pow::pow(&x, &pw));
    Ok(Float::with_val(ctx.work_prec(), xp * u))
}

pub fn whittaker_w(p: &WhittakerParams, ctx: &PrecisionContext) -> Result<Float> {
    let s = whittaker_w_scaled(p, ctx)?;
    let prec = s.prec();
    let e = Float::with_val(prec, -p.x / 2.0).exp();
    Ok(s * e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel::bessel_k;
    use crate::specfun::expint::exp_integral_e1;
    use rug::float::Constant;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn rel(a: &Float, b: &Float) -> f64 {
        (Float::with_val(a.prec(), a - b) / b).abs().to_f64()
    }

    #[test]
    fn w00_reduces_to_k0() {
        let c = ctx();
        let p = c.work_prec();
        let x = 1.0;
        let w = whittaker_w(&WhittakerParams::new(0.0, 0.0, 2.0 * x), &c).unwrap();
        let pi = Float::with_val(p, Constant::Pi);
        let k0 = bessel_k(0.0, &Float::with_val(p, x), &c).unwrap();
        let expect = (Float::with_val(p, 2.0 * x) / pi).sqrt() * k0;
        assert!(rel(&w, &expect) < 1e-25);
    }

    #[test]
    fn exponential_case() {
        let c = ctx();
        let p = c.work_prec();
        let (nu, x) = (0.25, 3.0);
        let w = whittaker_w(&WhittakerParams::new(nu + 0.5, nu, x), &c).unwrap();
        let expect = Float::with_val(p, x).pow(nu + 0.5) * Float::with_val(p, -x / 2.0).exp();
        assert!(rel(&w, &expect) < 1e-25);
    }

    #[test]
    fn minus_half_zero_is_exponential_integral() {
        let c = ctx();
        let p = c.work_prec();
        let x = 2.0;
        let w = whittaker_w(&WhittakerParams::new(-0.5, 0.0, x), &c).unwrap();
        let e1 = exp_integral_e1(&Float::with_val(p, x), &c).unwrap();
        // −√x e^{x/2} Ei(−x) = √x e^{x/2} E₁(x)
        let expect = Float::with_val(p, x).sqrt() * Float::with_val(p, x / 2.0).exp() * e1;
        assert!(rel(&w, &expect) < 1e-25);
    }

    #[test]
    fn minus_one_zero_bessel_form() {
        let c = ctx();
        let p = c.work_prec();
        let x = 2.0;
        let w = whittaker_w(&WhittakerParams::new(-1.0, 0.0, x), &c).unwrap();
        let h = Float::with_val(p, x / 2.0);
        let k0 = bessel_k(0.0, &h, &c).unwrap();
        let k1 = bessel_k(1.0, &h, &c).unwrap();
        let sp = Float::with_val(p, Constant::Pi).sqrt();
        let xf = Float::with_val(p, x);
        let t0 = Float::with_val(p, xf.sqrt_ref()) * 2u32 * (x + 1.0) * k0;
        let t1 = Float::with_val(p, Pow::pow(&xf, 1.5)) * 2u32 * k1;
        let expect = (t0 - t1) / sp;
        assert!(rel(&w, &expect) < 1e-25);
    }

    #[test]
    fn polynomial_branch_matches_recurrence_value() {
        // U(−1, b, x) = x − b
        let c = ctx();
        let mut k = WhittakerKernel::new(-1.0, 1.0, &c).unwrap();
        let v = k.u(&Float::with_val(128, 3.5)).unwrap();
        assert!((v - 2.5f64).abs().to_f64() < 1e-30);
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(whittaker_w(&WhittakerParams::new(0.0, 0.0, 0.0), &ctx()).is_err());
    }
}
