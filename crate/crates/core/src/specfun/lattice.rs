//! Lattice products Φ_k(y), Dedekind η on the imaginary axis, and the
//! Glaisher–Kinkelin constant.

use std::f64::consts::PI;

use rug::float::Constant;
use rug::Float;

use super::gamma::euler_gamma;
use crate::arith::rk_convolution;
use crate::error::{Error, Result};
use crate::numkernel::{sum_until, PrecisionContext, SeriesResult, TailModel};
use crate::zetafn::riemann_zeta_prime;

/// log Φ_k(y) = Σ_{n≥1} r_{k−1}(n) log(1 − e^{−2π√n y}); zero for k = 1.
pub fn log_phi_k(k: u32, y: &Float, ctx: &PrecisionContext) -> Result<SeriesResult> {
    let p = ctx.work_prec();
    if k == 0 {
        return Err(Error::DomainError("Φ_k needs k ≥ 1".into()));
    }
    if !(y.is_sign_positive() && !y.is_zero()) {
        return Err(Error::DomainError(format!("Φ_k needs y > 0, got {}", y.to_f64())));
    }
    if k == 1 {
        return Ok(SeriesResult {
            value: Float::new(p),
            terms_used: 0,
            tail_bound: 0.0,
            bound_kind: crate::numkernel::BoundKind::Rigorous,
        });
    }
    let yf = y.to_f64();
    let c = 2.0 * PI * yf;
    // table size from r_{k−1}(n) ≤ (2√n+1)^{k−1} and the target
    let need = -ctx.tol.ln() + 20.0;
    let mut sqrt_n = need / c;
    for _ in 0..4 {
        sqrt_n = (need + (k as f64 - 1.0) * (2.0 * sqrt_n + 1.0).ln()) / c;
    }
    let nmax = ((sqrt_n * sqrt_n).ceil() as usize + 16).min(50_000_000);
    let r = rk_convolution(k - 1, nmax)?;
    let two_pi_y = Float::with_val(p, Constant::Pi) * y * 2u32;
    // 0.9·c leaves room for the polynomial growth of r_{k−1}
    let res = sum_until(
        1,
        |n| {
            if n as usize > nmax {
                return Err(Error::NonConvergent(format!("Φ_{k} table exhausted at n={n}")));
            }
            let rn = r.values[n as usize];
            if rn == 0 {
                return Ok(Float::new(p));
            }
            let arg = Float::with_val(p, n).sqrt() * &two_pi_y;
            let e = -Float::with_val(p, -arg).exp();
            Ok(e.ln_1p() * rn)
        },
        TailModel::StretchedExponential { c: 0.9 * c },
        ctx,
    )?;
    Ok(res)
}

pub fn phi_k(k: u32, y: &Float, ctx: &PrecisionContext) -> Result<Float> {
    Ok(log_phi_k(k, y, ctx)?.value.exp())
}

/// log η(iy) = −πy/12 + Σ_{m≥1} log(1 − e^{−2πmy}).
pub fn log_dedekind_eta_imag(y: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !(y.is_sign_positive() && !y.is_zero()) {
        return Err(Error::DomainError(format!("η(iy) needs y > 0, got {}", y.to_f64())));
    }
    let p = ctx.work_prec();
    let two_pi_y = Float::with_val(p, Constant::Pi) * y * 2u32;
    let res = sum_until(
        1,
        |m| {
            let e = -Float::with_val(p, -Float::with_val(p, &two_pi_y * m)).exp();
            Ok(e.ln_1p())
        },
        TailModel::Exponential { c: 2.0 * PI * y.to_f64() },
        ctx,
    )?;
    Ok(res.value - Float::with_val(p, &two_pi_y / 24u32))
}

pub fn dedekind_eta_imag(y: &Float, ctx: &PrecisionContext) -> Result<Float> {
    Ok(log_dedekind_eta_imag(y, ctx)?.exp())
}

/// log A = (γ + log 2π − 6ζ′(2)/π²)/12.
pub fn log_glaisher_a(ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let two = crate::numkernel::Complex::with_val(p, 2.0, 0.0);
    let zp2 = riemann_zeta_prime(&two, ctx)?.re;
    let l2pi = Float::with_val(p, &pi * 2u32).ln();
    let v = euler_gamma(p) + l2pi - zp2 * 6u32 / pi.square();
    Ok(v / 12u32)
}

pub fn glaisher_a(ctx: &PrecisionContext) -> Result<Float> {
    Ok(log_glaisher_a(ctx)?.exp())
}

/// Finite-n quotient from the limit definition:
/// log(Π_{j≤n} j^j) − (n²/2 + n/2 + 1/12) log n + n²/4 → log A.
pub fn glaisher_quotient_log(n: u64, prec: u32) -> Float {
    let mut s = Float::new(prec);
    for j in 2..=n {
        s += Float::with_val(prec, j).ln() * j;
    }
    let nf = Float::with_val(prec, n);
    let ln = Float::with_val(prec, nf.ln_ref());
    let e = Float::with_val(prec, nf.square_ref()) / 2u32 + Float::with_val(prec, &nf / 2u32)
        + Float::with_val(prec, 12u32).recip();
    s - e * ln + Float::with_val(prec, nf.square_ref()) / 4u32
}
