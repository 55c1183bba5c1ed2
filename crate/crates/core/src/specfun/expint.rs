//! Exponential integral E₁(x) = ∫_x^∞ e^{-u}/u du and Ei(−x) = −E₁(x).

use std::f64::consts::LN_2;

use rug::Float;

use super::gamma::euler_gamma;
use crate::error::{Error, Result};
use crate::numkernel::{log2_abs, PrecisionContext};

/// Below this argument the ascending series is used.
const SERIES_MAX_X: f64 = 2.0;

/// E₁(x) = −γ − ln x − Σ_{k≥1} (−x)^k/(k·k!), with guard bits for the cancellation.
pub fn e1_series(x: &Float, prec: u32) -> Float {
    let xf = x.to_f64();
    let p = prec + (2.0 * xf / LN_2).ceil() as u32 + 16;
    let x = Float::with_val(p, x);
    let mut pw = Float::with_val(p, 1); // (−x)^k/k!
    let mut sum = Float::new(p);
    let stop = -(p as f64);
    let mut k = 1u64;
    loop {
        pw *= &x;
        pw /= k;
        pw = -pw;
        let t = Float::with_val(p, &pw / k);
        sum += &t;
        if (k as f64) > xf && log2_abs(&t) < stop {
            break;
        }
        k += 1;
    }
    let v = -euler_gamma(p) - Float::with_val(p, x.ln_ref()) - sum;
    Float::with_val(prec, v)
}

/// E₁(x) = e^{-x} / (x+1 − 1²/(x+3 − 2²/(x+5 − …))) by the modified Lentz method.
pub fn e1_cf(x: &Float, prec: u32) -> Result<Float> {
    let p = prec + 16;
    let x = Float::with_val(p, x);
    let tiny = Float::with_val(p, Float::i_exp(1, -(p as i32) * 4));
    let b0 = Float::with_val(p, &x + 1u32);
    let mut f = b0.clone();
    let mut c = b0;
    let mut d = Float::new(p);
    let stop = -(p as f64) + 2.0;
    for n in 1..2_000_000u64 {
        let a = -Float::with_val(p, n * n);
        let b = Float::with_val(p, &x + (2 * n + 1));
        d = Float::with_val(p, &a * &d) + &b;
        if d.is_zero() {
            d = tiny.clone();
        }
        d.recip_mut();
        c = Float::with_val(p, &a / &c) + &b;
        if c.is_zero() {
            c = tiny.clone();
        }
        let delta = Float::with_val(p, &c * &d);
        f *= &delta;
        if log2_abs(&Float::with_val(p, &delta - 1u32)) < stop {
            let v = Float::with_val(p, -&x).exp() / f;
            return Ok(Float::with_val(prec, v));
        }
    }
    Err(Error::NonConvergent(format!("E1 continued fraction at x={}", x.to_f64())))
}

pub fn exp_integral_e1(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !(x.is_finite() && x.is_sign_positive() && !x.is_zero()) {
        return Err(Error::DomainError(format!("E1 needs x > 0, got {}", x.to_f64())));
    }
    let prec = ctx.work_prec();
    if x.to_f64() < SERIES_MAX_X {
        Ok(e1_series(x, prec))
    } else {
        e1_cf(x, prec)
    }
}

/// Ei(−x) for x > 0.
pub fn exp_integral_ei_neg(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    Ok(-exp_integral_e1(x, ctx)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_continued_fraction_agree_at_one() {
        let p = 300;
        let x = Float::with_val(p, 1);
        let s = e1_series(&x, p);
        let c = e1_cf(&x, p).unwrap();
        assert!(Float::with_val(p, &s - &c).abs().to_f64() < 1e-80);
    }

    #[test]
    fn matches_mpfr_eint() {
        let ctx = PrecisionContext::default();
        let p = ctx.work_prec();
        for &x in &[0.1, 1.5, 2.5, 9.0, 40.0] {
            let xf = Float::with_val(p, x);
            let v = exp_integral_e1(&xf, &ctx).unwrap();
            // E₁(x) = −Ei(−x)
            let oracle = -Float::with_val(p, -&xf).eint();
            let rel = (Float::with_val(p, &v - &oracle) / &oracle).abs().to_f64();
            assert!(rel < 1e-60, "x={x}: {rel}");
        }
    }

    #[test]
    fn leading_asymptotic_at_large_argument() {
        let ctx = PrecisionContext::default();
        let p = ctx.work_prec();
        let x = Float::with_val(p, 1e4);
        let v = exp_integral_e1(&x, &ctx).unwrap();
        let r = v * Float::with_val(p, x.exp_ref()) * &x;
        assert!((r - 1u32).abs().to_f64() < 1e-3);
    }

    #[test]
    fn rejects_nonpositive() {
        let ctx = PrecisionContext::default();
        assert!(exp_integral_e1(&Float::with_val(64, -1), &ctx).is_err());
    }
}
