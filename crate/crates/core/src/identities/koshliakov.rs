//! Koshliakov-type identities with K₀ sums, αβ = π², and the classical
//! divisor-function formula under x ↔ 1/x.

use std::f64::consts::PI;

use rug::float::Constant;
use rug::Float;

use super::{dual_parameter, report, IdentityId, IdentityParams, IdentityReport, Side, Truncation};
use crate::arith::{divisor_d, dtilde};
use crate::error::{Error, Result};
use crate::numkernel::{sum_until, Complex, PrecisionContext, SeriesResult, TailModel};
use crate::specfun::bessel::k0_k1;
use crate::specfun::gamma::{euler_gamma, gamma_real};
use crate::specfun::lattice::{log_glaisher_a, log_phi_k};
use crate::zetafn::zeta_k;

/// Σ_{n≥1} d̃_k(n) K₀(2√n α).
fn dtilde_k0_sum(k: u32, alpha: &Float, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let p = ctx.work_prec();
    let c = 2.0 * alpha.to_f64();
    // d̃_k(n) grows at most like n^{k}; size the table for the 0.9c envelope
    let need = -ctx.tol.ln() + 20.0;
    let mut s = need / c;
    for _ in 0..6 {
        s = (need + 2.0 * k as f64 * (s + 2.0).ln() + 10.0) / (0.8 * c);
    }
    let nmax = ((s * s).ceil() as usize + 16).min(20_000_000);
    let table = dtilde(k, nmax)?;
    let a2 = Float::with_val(p, alpha * 2u32);
    sum_until(
        1,
        |n| {
            if n as usize > nmax {
                return Err(Error::NonConvergent(format!("d̃_{k} table exhausted at n={n}")));
            }
            let d = table[n as usize];
            if d == 0 {
                return Ok(Float::new(p));
            }
            let z = Float::with_val(p, n).sqrt() * &a2;
            Ok(k0_k1(&z, p).0 * d)
        },
        TailModel::StretchedExponential { c: 0.9 * c },
        ctx,
    )
}

/// 2π^{−k/2}Γ(k/2)ζ_{k−1}(k/2) + 2γ − 4 log Φ_k(1).
fn general_constant(k: u32, ctx: &PrecisionContext) -> Result<(Float, Truncation)> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let kh = Float::with_val(p, k as f64 / 2.0);
    let zeta_term = if k == 1 {
        Float::new(p)
    } else {
        let z = zeta_k(k - 1, &Complex::from_real(&kh), ctx)?.re;
        let pk = (Float::with_val(p, pi.ln_ref()) * -kh.clone()).exp();
        z * pk * gamma_real(&kh)? * 2u32
    };
    let phi = log_phi_k(k, &Float::with_val(p, 1), ctx)?;
    let v = zeta_term + euler_gamma(p) * 2u32 - Float::with_val(p, &phi.value * 4u32);
    Ok((v, Truncation::new("log_phi_k", phi.terms_used, phi.tail_bound)))
}

fn power(alpha: &Float, e: f64) -> Float {
    let p = alpha.prec();
    (Float::with_val(p, alpha.ln_ref()) * e).exp()
}

/// log(c·π²/α), the logarithm of c times the dual parameter.
fn log_dual(alpha: &Float, c: u32) -> Float {
    let p = alpha.prec();
    let pi = Float::with_val(p, Constant::Pi);
    (pi.square() * c / alpha).ln()
}

fn general_eval(k: u32, alpha: &Float, konst: &Float, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let s = dtilde_k0_sum(k, alpha, ctx)?;
    let inner = Float::with_val(p, konst - log_dual(alpha, 4) * 2u32) + Float::with_val(p, &s.value * 2u32);
    Ok(Side {
        value: inner * power(alpha, k as f64 / 2.0),
        truncations: vec![Truncation::new("dtilde_k0", s.terms_used, s.tail_bound)],
    })
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::DomainError("k must be at least 1".into()));
    }
    Ok(())
}

/// One side of the general r_k(n) Koshliakov identity at α (dual β = π²/α).
pub fn theorem2_side(k: u32, alpha: f64, ctx: &PrecisionContext) -> Result<Float> {
    check_k(k)?;
    let (a, _) = dual_parameter(alpha, None, PI * PI, ctx.work_prec())?;
    theorem2_side_at(k, &a, ctx)
}

/// [`theorem2_side`] at an α given to full precision.
pub fn theorem2_side_at(k: u32, alpha: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_k(k)?;
    if !(alpha.is_sign_positive() && !alpha.is_zero()) {
        return Err(Error::DomainError("α must be positive".into()));
    }
    let (c, _) = general_constant(k, ctx)?;
    Ok(general_eval(k, &Float::with_val(ctx.work_prec(), alpha), &c, ctx)?.value)
}

pub(crate) fn theorem2_pair(k: u32, alpha: f64, beta: Option<f64>, ctx: &PrecisionContext) -> Result<IdentityReport> {
    check_k(k)?;
    let (a, b) = dual_parameter(alpha, beta, PI * PI, ctx.work_prec())?;
    let (c, tr) = general_constant(k, ctx)?;
    let mut lhs = general_eval(k, &a, &c, ctx)?;
    let rhs = general_eval(k, &b, &c, ctx)?;
    lhs.truncations.push(tr);
    let params = IdentityParams { k: Some(k), alpha: Some(alpha), beta, ..Default::default() };
    Ok(report(IdentityId::Theorem2, params, lhs, rhs, ctx))
}

pub fn check_theorem2(k: u32, alpha: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    theorem2_pair(k, alpha, None, ctx)
}

/// √x{γ − log(4π/x) + 4Σ d(n)K₀(2πnx)}.
fn classic_eval(x: &Float, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let two_pi_x = Float::with_val(p, &pi * x) * 2u32;
    let s = sum_until(
        1,
        |n| {
            let z = Float::with_val(p, &two_pi_x * n);
            Ok(k0_k1(&z, p).0 * divisor_d(n))
        },
        TailModel::Exponential { c: 0.9 * two_pi_x.to_f64() },
        ctx,
    )?;
    let l = (Float::with_val(p, &pi * 4u32) / x).ln();
    let inner = euler_gamma(p) - l + Float::with_val(p, &s.value * 4u32);
    Ok(Side {
        value: inner * Float::with_val(p, x.sqrt_ref()),
        truncations: vec![Truncation::new("divisor_k0", s.terms_used, s.tail_bound)],
    })
}

pub fn koshliakov_classic_side(x: f64, ctx: &PrecisionContext) -> Result<Float> {
    let (a, _) = dual_parameter(x, None, 1.0, ctx.work_prec())?;
    Ok(classic_eval(&a, ctx)?.value)
}

/// [`koshliakov_classic_side`] at an x given to full precision.
pub fn koshliakov_classic_side_at(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !(x.is_sign_positive() && !x.is_zero()) {
        return Err(Error::DomainError("x must be positive".into()));
    }
    Ok(classic_eval(&Float::with_val(ctx.work_prec(), x), ctx)?.value)
}

/// x and 1/x sides; mirrored parameters give mirrored reports.
pub fn check_koshliakov_classic(x: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (a, b) = dual_parameter(x, None, 1.0, ctx.work_prec())?;
    let lhs = classic_eval(&a, ctx)?;
    let rhs = classic_eval(&b, ctx)?;
    let params = IdentityParams { x: Some(x), ..Default::default() };
    Ok(report(IdentityId::KoshliakovClassic, params, lhs, rhs, ctx))
}

/// α{γ − 4 log(Γ(1/4)/(2π^{3/4})) − log 4β + Σ d̃₂(n)K₀(2√n α)}.
fn k2_eval(alpha: &Float, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let eta_i = gamma_real(&Float::with_val(p, 0.25))? / (rug::ops::Pow::pow(pi, 0.75f64) * 2u32);
    let s = dtilde_k0_sum(2, alpha, ctx)?;
    let inner = euler_gamma(p) - eta_i.ln() * 4u32 - log_dual(alpha, 4) + &s.value;
    Ok(Side {
        value: inner * alpha,
        truncations: vec![Truncation::new("dtilde_k0", s.terms_used, s.tail_bound)],
    })
}

/// α²{2γ − 24 log A + (16/3) log 2 + 2 − 2 log(2β/π) + 2Σ d̃₄(n)K₀(2√n α)}.
fn k4_eval(alpha: &Float, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let la = log_glaisher_a(ctx)?;
    let l2 = Float::with_val(p, Constant::Log2);
    let s = dtilde_k0_sum(4, alpha, ctx)?;
    let l2b = (Float::with_val(p, &pi * 2u32) / alpha).ln();
    let inner = euler_gamma(p) * 2u32 - la * 24u32 + l2 * 16u32 / 3u32 + 2u32 - l2b * 2u32
        + Float::with_val(p, &s.value * 2u32);
    Ok(Side {
        value: inner * Float::with_val(p, alpha.square_ref()),
        truncations: vec![Truncation::new("dtilde_k0", s.terms_used, s.tail_bound)],
    })
}

pub fn koshliakov_k2_side(alpha: f64, ctx: &PrecisionContext) -> Result<Float> {
    let (a, _) = dual_parameter(alpha, None, PI * PI, ctx.work_prec())?;
    Ok(k2_eval(&a, ctx)?.value)
}

pub fn koshliakov_k4_side(alpha: f64, ctx: &PrecisionContext) -> Result<Float> {
    let (a, _) = dual_parameter(alpha, None, PI * PI, ctx.work_prec())?;
    Ok(k4_eval(&a, ctx)?.value)
}

pub(crate) fn k2_pair(alpha: f64, beta: Option<f64>, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (a, b) = dual_parameter(alpha, beta, PI * PI, ctx.work_prec())?;
    let lhs = k2_eval(&a, ctx)?;
    let rhs = k2_eval(&b, ctx)?;
    let params = IdentityParams { alpha: Some(alpha), beta, ..Default::default() };
    Ok(report(IdentityId::KoshliakovK2, params, lhs, rhs, ctx))
}

pub(crate) fn k4_pair(alpha: f64, beta: Option<f64>, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (a, b) = dual_parameter(alpha, beta, PI * PI, ctx.work_prec())?;
    let lhs = k4_eval(&a, ctx)?;
    let rhs = k4_eval(&b, ctx)?;
    let params = IdentityParams { alpha: Some(alpha), beta, ..Default::default() };
    Ok(report(IdentityId::KoshliakovK4, params, lhs, rhs, ctx))
}

pub fn check_koshliakov_k2(alpha: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    k2_pair(alpha, None, ctx)
}

pub fn check_koshliakov_k4(alpha: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    k4_pair(alpha, None, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn classic_at_two() {
        let r = check_koshliakov_classic(2.0, &ctx()).unwrap();
        assert!(r.pass && r.rel_err_f64() < 1e-20, "{}", r.rel_err);
    }

    #[test]
    fn classic_mirror() {
        let a = check_koshliakov_classic(2.0, &ctx()).unwrap();
        let b = check_koshliakov_classic(0.5, &ctx()).unwrap();
        assert_eq!(a.lhs, b.rhs);
        assert_eq!(a.rhs, b.lhs);
    }

    #[test]
    fn k1_reduces_to_classic() {
        // α = πx gives 2√π times the classical side
        let c = ctx();
        let p = c.work_prec();
        let x = Float::with_val(p, 2);
        let pi = Float::with_val(p, Constant::Pi);
        let g = theorem2_side_at(1, &Float::with_val(p, &pi * &x), &c).unwrap();
        let kc = koshliakov_classic_side_at(&x, &c).unwrap();
        let sp = pi.sqrt() * 2u32;
        assert!(((g - kc * sp).abs()).to_f64() < 1e-22);
        // the f64 entry points agree up to the rounding of πx
        let g64 = theorem2_side(1, PI * 2.0, &c).unwrap();
        assert!((g64 - theorem2_side_at(1, &Float::with_val(p, PI * 2.0), &c).unwrap()).abs().to_f64() < 1e-22);
    }

    #[test]
    fn closed_constant_routes() {
        let c = ctx();
        let g2 = theorem2_side(2, 2.0, &c).unwrap();
        let s2 = koshliakov_k2_side(2.0, &c).unwrap();
        assert!((g2 / 2u32 - s2).abs().to_f64() < 1e-20);
        let g4 = theorem2_side(4, 4.0, &c).unwrap();
        let s4 = koshliakov_k4_side(4.0, &c).unwrap();
        assert!((g4 - s4).abs().to_f64() < 1e-20);
    }

    #[test]
    fn theorem2_k2() {
        let r = check_theorem2(2, 2.0, &ctx()).unwrap();
        assert!(r.pass && r.rel_err_f64() < 1e-20, "{}", r.rel_err);
    }
}
