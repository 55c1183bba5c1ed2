//! Mellin–Barnes integrals (1/2πi)∫_{μ−i∞}^{μ+i∞} f(s) ds on vertical lines.
//!
//! Every integrand used here satisfies f(s̄) = conj f(s), so the line integral is
//! (1/π)∫₀^∞ Re f(μ+it) dt, computed by the trapezoidal rule with step halving.

use std::f64::consts::PI;

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{Complex, PrecisionContext};
use crate::specfun::gamma::{digamma_real, euler_gamma, gamma, gamma_real};
use crate::specfun::lattice::log_phi_k;
use crate::zetafn::zeta_k;

/// Vertical integration line Re s = abscissa, truncated at |Im s| ≤ height,
/// sampled with an initial spacing `step` that is halved until convergence.
/// A non-positive height asks for an automatic choice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub height: f64,
    pub step: f64,
}

impl ContourSpec {
    pub fn new(abscissa: f64, height: f64, step: f64) -> Self {
        ContourSpec { abscissa, height, step }
    }

    pub fn at(abscissa: f64) -> Self {
        ContourSpec { abscissa, height: 0.0, step: 0.25 }
    }
}

#[derive(Clone, Debug)]
pub struct LineIntegral {
    pub value: Float,
    pub height: f64,
    pub step: f64,
    pub nodes: usize,
    /// Estimate of the neglected |Im s| > height part.
    pub tail: f64,
}

const MAX_HALVINGS: usize = 9;

/// Growth exponent A(σ) with |ζ_k(σ+it)| ≪ |t|^{A(σ)+δ}.
pub fn growth_exponent(k: u32, sigma: f64) -> f64 {
    let kh = k as f64 / 2.0;
    if sigma > kh {
        0.0
    } else if sigma >= 0.0 {
        kh - sigma
    } else {
        kh - 2.0 * sigma
    }
}

/// Smallest T ≥ 4 on a unit grid with e^{-rate T} T^{power} below `target`.
fn envelope_height(rate: f64, power: f64, log_target: f64) -> f64 {
    let mut t: f64 = 4.0;
    while -rate * t + power * t.ln() > log_target {
        t += 1.0;
    }
    t
}

/// (1/2πi) ∫ f(s) ds along `spec`, to absolute accuracy `target`.
/// `rate` is the exponential decay of |f(μ+it)| in |t|; `power` its polynomial factor.
pub fn vertical_line_integral<F>(
    mut f: F,
    spec: &ContourSpec,
    rate: f64,
    power: f64,
    target: f64,
    prec: u32,
) -> Result<LineIntegral>
where
    F: FnMut(&Complex) -> Result<Complex>,
{
    let mu = Float::with_val(prec, spec.abscissa);
    let mut at = |t: f64| -> Result<Float> {
        let s = Complex::new(mu.clone(), Float::with_val(prec, t));
        Ok(f(&s)?.re)
    };
    // the envelope gives a first height; the measured integrand confirms it
    let log_target = target.ln();
    let mut height = if spec.height > 0.0 {
        spec.height
    } else {
        envelope_height(rate, power, log_target - 4.0)
    };
    let mut tail;
    loop {
        let edge = at(height)?.abs().to_f64();
        tail = edge / rate;
        if spec.height > 0.0 || tail < target / 10.0 || height > 400.0 {
            break;
        }
        height += 2.0;
    }
    let h0 = spec.step;
    let n0 = (height / h0).ceil() as i64;
    let mut sum = Float::with_val(prec, at(0.0)?) / 2u32;
    for j in 1..=n0 {
        sum += at(j as f64 * h0)?;
    }
    let mut nodes = n0 as usize + 1;
    let scale = Float::with_val(prec, Constant::Pi).recip();
    let mut h = h0;
    let mut est = Float::with_val(prec, &sum * h) * &scale;
    for _ in 0..MAX_HALVINGS {
        h /= 2.0;
        let n = (height / h).ceil() as i64;
        let mut j = 1;
        while j <= n {
            sum += at(j as f64 * h)?;
            nodes += 1;
            j += 2;
        }
        let next = Float::with_val(prec, &sum * h) * &scale;
        let diff = Float::with_val(prec, &next - &est).abs().to_f64();
        est = next;
        if diff < target / 10.0 {
            return Ok(LineIntegral { value: est, height, step: h, nodes, tail });
        }
    }
    Err(Error::QuadratureNotConverged(format!(
        "line Re s = {} not converged after {nodes} nodes",
        spec.abscissa
    )))
}

fn whittaker_integrand(
    rho: f64,
    sigma: f64,
    x: f64,
    prec: u32,
) -> Result<impl FnMut(&Complex) -> Result<Complex>> {
    let p = prec;
    let half = Float::with_val(p, 0.5);
    let norm = gamma_real(&Float::with_val(p, 0.5 + rho - sigma))? * gamma_real(&Float::with_val(p, 0.5 + rho + sigma))?;
    let inv = Float::with_val(p, norm.recip_ref());
    let lx = Float::with_val(p, x).ln();
    let sg = Float::with_val(p, sigma);
    let rh = Float::with_val(p, rho);
    Ok(move |s: &Complex| -> Result<Complex> {
        let a = gamma(&s.add_real(&Float::with_val(p, &half - &sg)), p)?;
        let b = gamma(&s.add_real(&Float::with_val(p, &half + &sg)), p)?;
        let c = gamma(&(-s).add_real(&rh), p)?;
        let xs = (-&s.scale(&lx)).exp();
        Ok((&(&a * &b) * &(&c * &xs)).scale(&inv))
    })
}

/// e^{x/2} W_{−ρ,σ}(x) as a Barnes integral on |σ| − 1/2 < μ < ρ.
pub fn mb_whittaker(rho: f64, sigma: f64, x: f64, c: &ContourSpec, ctx: &PrecisionContext) -> Result<Float> {
    let mu = c.abscissa;
    if !(mu > sigma.abs() - 0.5 && mu < rho) {
        return Err(Error::StripViolation(format!("need {} < μ < {rho}, got μ = {mu}", sigma.abs() - 0.5)));
    }
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("x must be positive, got {x}")));
    }
    let p = ctx.work_prec();
    let f = whittaker_integrand(rho, sigma, x, p)?;
    let target = ctx.tol * x.powf(-rho).min(1.0) / 10.0;
    Ok(vertical_line_integral(f, c, 1.5 * PI, 2.0 * mu, target, p)?.value)
}

/// The same integrand on ρ < μ′ < ρ + 1, where it equals e^{x/2} W_{−ρ,σ}(x) − x^{−ρ}.
pub fn mb_whittaker_shifted(rho: f64, sigma: f64, x: f64, c: &ContourSpec, ctx: &PrecisionContext) -> Result<Float> {
    let mu = c.abscissa;
    if !(mu > rho && mu < rho + 1.0) {
        return Err(Error::StripViolation(format!("need {rho} < μ′ < {}, got μ′ = {mu}", rho + 1.0)));
    }
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("x must be positive, got {x}")));
    }
    let p = ctx.work_prec();
    let f = whittaker_integrand(rho, sigma, x, p)?;
    let target = ctx.tol * x.powf(-rho - 1.0).min(1.0) / 10.0;
    Ok(vertical_line_integral(f, c, 1.5 * PI, 2.0 * mu, target, p)?.value)
}

/// K₀(x) = (1/8πi) ∫ Γ(s/2)² (x/2)^{−s} ds on Re s = μ > 0.
pub fn mb_k0(x: f64, c: &ContourSpec, ctx: &PrecisionContext) -> Result<Float> {
    let mu = c.abscissa;
    if !(mu > 0.0) {
        return Err(Error::StripViolation(format!("need μ > 0, got {mu}")));
    }
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("x must be positive, got {x}")));
    }
    let p = ctx.work_prec();
    let half = Float::with_val(p, 0.5);
    let quarter = Float::with_val(p, 0.25);
    let lx = Float::with_val(p, x / 2.0).ln();
    let f = |s: &Complex| -> Result<Complex> {
        let g = gamma(&s.scale(&half), p)?;
        let xs = (-&s.scale(&lx)).exp();
        Ok((&g.square() * &xs).scale(&quarter))
    };
    // relative accuracy: scale by the size of K₀(x)
    let size = ((PI / (2.0 * x)).sqrt() * (-x).exp()).min(1.0);
    let target = ctx.tol * size / 10.0;
    Ok(vertical_line_integral(f, c, 0.5 * PI, mu - 1.0, target, p)?.value)
}

/// Closed-form residue at s = (k−1)/2 of
/// Γ²(s+1/2) Γ((k−1)/2 − s) ζ_k(s+1/2) (πx)^{−s} / Γ²(k/2).
pub fn theorem_residue(k: u32, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let kh = Float::with_val(p, k as f64 / 2.0);
    let rho = Float::with_val(p, (k as f64 - 1.0) / 2.0);
    let g = gamma_real(&kh)?;
    let lphi = log_phi_k(k, &Float::with_val(p, 1), ctx)?.value;
    let l4pix = (Float::with_val(p, &pi * 4u32) * x).ln();
    let bracket = euler_gamma(p) * 2u32 + digamma_real(&kh)? - lphi * 2u32 - l4pix;
    let xr = (Float::with_val(p, x.ln_ref()) * -rho.clone()).exp();
    let first = -(Float::with_val(p, pi.sqrt_ref()) * xr / g * bracket);
    let prev = zeta_k(k - 1, &Complex::from_real(&kh), ctx)?.re;
    let pix = Float::with_val(p, &pi * x);
    let second = (Float::with_val(p, pix.ln_ref()) * -rho).exp() * prev;
    Ok(first - second)
}

/// |I(μ′) − I(k/2 − μ′) − residue| for the Theorem-1 Barnes integrand, where I(c) is
/// the line integral on Re s = c and the residue is taken in closed form.
pub fn shift_residue_check(k: u32, x: f64, mu_prime: f64, ctx: &PrecisionContext) -> Result<f64> {
    let (lo, hi) = ((k as f64 - 1.0) / 2.0, (k as f64 + 1.0) / 2.0);
    if !(mu_prime > lo && mu_prime < hi) {
        return Err(Error::StripViolation(format!("need {lo} < μ′ < {hi}, got μ′ = {mu_prime}")));
    }
    if k == 0 || !(x > 0.0) {
        return Err(Error::DomainError(format!("need k ≥ 1 and x > 0, got k={k}, x={x}")));
    }
    let p = ctx.work_prec();
    let half = Float::with_val(p, 0.5);
    let rho = Float::with_val(p, (k as f64 - 1.0) / 2.0);
    let g2 = gamma_real(&Float::with_val(p, k as f64 / 2.0))?.square();
    let inv = Float::with_val(p, g2.recip_ref());
    let lpix = (Float::with_val(p, Constant::Pi) * x).ln();
    let f = |s: &Complex| -> Result<Complex> {
        let sh = s.add_real(&half);
        let a = gamma(&sh, p)?.square();
        let b = gamma(&(-s).add_real(&rho), p)?;
        let z = zeta_k(k, &sh, ctx)?;
        let xs = (-&s.scale(&lpix)).exp();
        Ok((&(&a * &b) * &(&z * &xs)).scale(&inv))
    };
    let target = ctx.tol;
    let left = k as f64 / 2.0 - mu_prime;
    let right_line = ContourSpec::at(mu_prime);
    let left_line = ContourSpec::at(left);
    // |f| ~ |t|^{A(σ+1/2) + k/2 − 1} e^{−3π|t|/2}
    let pr = growth_exponent(k, mu_prime + 0.5) + k as f64 / 2.0 - 1.0;
    let pl = growth_exponent(k, left + 0.5) + k as f64 / 2.0 - 1.0;
    let i_right = vertical_line_integral(f, &right_line, 1.5 * PI, pr, target, p)?;
    let i_left = vertical_line_integral(f, &left_line, 1.5 * PI, pl, target, p)?;
    let res = theorem_residue(k, &Float::with_val(p, x), ctx)?;
    Ok((i_right.value - i_left.value - res).abs().to_f64())
}
