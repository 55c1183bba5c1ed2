//! Riemann ζ, ζ′ and Dirichlet β = L(·, χ₄) by accelerated alternating series.

use std::f64::consts::{LN_2, PI};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::{alternating_sum, cvz_terms, Complex, PrecisionContext};
use crate::specfun::gamma::{digamma, gamma};

/// Extra bits for the alternating acceleration at height t.
fn height_bits(s: &Complex) -> f64 {
    PI * s.im.to_f64().abs() / LN_2 + 10.0
}

/// Guard bits lost to the 0/0 structure of η(s)/(1 − 2^{1−s}) near s = 1.
fn pole_guard(s: &Complex) -> u32 {
    let d = (&s.add_real(&Float::with_val(s.prec(), -1))).abs_f64();
    if d < 1.0 {
        (-d.max(1e-300).log2()).ceil() as u32 + 8
    } else {
        0
    }
}

fn is_one(s: &Complex) -> bool {
    s.im.is_zero() && s.re == 1
}

/// Σ_{n≥0} (−1)^n (n+1)^{-s} (ln(n+1))^d for d ∈ {0, 1}.
fn eta_like(s: &Complex, d: u32, prec: u32, odd_only: bool) -> Complex {
    let extra = height_bits(s) + if d > 0 { 8.0 } else { 0.0 };
    let n = cvz_terms(prec, extra);
    let p = prec + extra as u32 + 16;
    let s = s.to_prec(p);
    let v: Complex = alternating_sum(
        n,
        |j| {
            let base = if odd_only { 2 * j + 1 } else { j + 1 };
            let l = Float::with_val(p, base).ln();
            let t = (-&s.scale(&l)).exp();
            if d == 0 {
                t
            } else {
                t.scale(&l)
            }
        },
        p,
    );
    v.to_prec(prec)
}

/// ζ(s) for complex s ≠ 1.
pub fn riemann_zeta(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    zeta_at(s, ctx.work_prec())
}

pub(crate) fn zeta_at(s: &Complex, prec: u32) -> Result<Complex> {
    if is_one(s) {
        return Err(Error::PoleAt("ζ at s = 1".into()));
    }
    if s.re.is_sign_negative() && !s.re.is_zero() {
        return reflected(s, prec);
    }
    let p = prec + pole_guard(s) + 8;
    let s = s.to_prec(p);
    let eta = eta_like(&s, 0, p, false);
    let one = Complex::one(p);
    let ln2 = Float::with_val(p, Constant::Log2);
    // 1 − 2^{1−s}
    let two_pow = (&one - &s).scale(&ln2).exp();
    let den = &one - &two_pow;
    Ok((&eta / &den).to_prec(prec))
}

/// χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s), so that ζ(s) = χ(s) ζ(1−s).
fn chi(s: &Complex, prec: u32) -> Result<Complex> {
    let p = prec;
    let one = Complex::one(p);
    let pi = Float::with_val(p, Constant::Pi);
    let ln2 = Float::with_val(p, Constant::Log2);
    let lnpi = Float::with_val(p, pi.ln_ref());
    let a = s.scale(&ln2).exp();
    let b = (&s.add_real(&Float::with_val(p, -1))).scale(&lnpi).exp();
    let half = Float::with_val(p, 0.5);
    let sn = s.times_pi().scale(&half).sin();
    let g = gamma(&(&one - s), p)?;
    Ok(&(&a * &b) * &(&sn * &g))
}

fn reflected(s: &Complex, prec: u32) -> Result<Complex> {
    let p = prec + 16;
    let s = s.to_prec(p);
    let one = Complex::one(p);
    let z = zeta_at(&(&one - &s), p)?;
    Ok((&chi(&s, p)? * &z).to_prec(prec))
}

/// ζ′(s) for complex s ≠ 1.
pub fn riemann_zeta_prime(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    zeta_prime_at(s, ctx.work_prec())
}

fn zeta_prime_at(s: &Complex, prec: u32) -> Result<Complex> {
    if is_one(s) {
        return Err(Error::PoleAt("ζ′ at s = 1".into()));
    }
    if s.re.is_sign_negative() && !s.re.is_zero() {
        // ζ′(s) = χ(s)[(χ′/χ)(s) ζ(1−s) − ζ′(1−s)],
        // χ′/χ = ln 2π + (π/2) cot(πs/2) − ψ(1−s)
        let p = prec + 16;
        let s = s.to_prec(p);
        let one = Complex::one(p);
        let r = &one - &s;
        let pi = Float::with_val(p, Constant::Pi);
        let half = Float::with_val(p, 0.5);
        let l2pi = Float::with_val(p, &pi * 2u32).ln();
        let cot = s.times_pi().scale(&half).cot().scale(&Float::with_val(p, &pi / 2u32));
        let dl = &cot.add_real(&l2pi) - &digamma(&r, p)?;
        let v = &(&dl * &zeta_at(&r, p)?) - &zeta_prime_at(&r, p)?;
        return Ok((&chi(&s, p)? * &v).to_prec(prec));
    }
    let p = prec + 2 * pole_guard(s) + 16;
    let s = s.to_prec(p);
    let one = Complex::one(p);
    let ln2 = Float::with_val(p, Constant::Log2);
    // η′(s) = −Σ (−1)^n ln(n+1) (n+1)^{-s}
    let eta_p = -&eta_like(&s, 1, p, false);
    let z = zeta_at(&s, p)?;
    let two_pow = (&one - &s).scale(&ln2).exp();
    let den = &one - &two_pow;
    // ζ′ = (η′ − ζ·2^{1−s} ln 2) / (1 − 2^{1−s})
    let v = &(&eta_p - &(&z * &two_pow).scale(&ln2)) / &den;
    Ok(v.to_prec(prec))
}

/// β(s) = Σ_{n≥0} (−1)^n (2n+1)^{-s}.
pub fn dirichlet_beta(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(eta_like(s, 0, ctx.work_prec(), true))
}

/// β′(s) = −Σ_{n≥0} (−1)^n ln(2n+1) (2n+1)^{-s}.
pub fn dirichlet_beta_prime(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(-&eta_like(s, 1, ctx.work_prec(), true))
}
