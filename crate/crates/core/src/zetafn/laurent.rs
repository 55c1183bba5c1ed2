//! Residue and constant term of ζ_k at its pole s = k/2.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::epstein::zeta_k;
use crate::error::Result;
use crate::numkernel::{neville_at_zero, Complex, PrecisionContext};
use crate::specfun::gamma::{digamma_real, euler_gamma, gamma_real};
use crate::specfun::lattice::{log_dedekind_eta_imag, log_glaisher_a, log_phi_k};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaurentMethod {
    ClosedForm,
    NumericalLimit,
}

/// ζ_k(s) = residue/(s − k/2) + constant + O(s − k/2).
#[derive(Clone, Debug)]
pub struct LaurentData {
    pub k: u32,
    pub pole: f64,
    pub residue: Float,
    pub constant: Float,
    pub method: LaurentMethod,
    /// The constant obtained the other way, when both were computed.
    pub cross_check: Option<Float>,
}

/// Steps for the symmetric limit.  The first three are always used; later ones only
/// until successive extrapolations agree to tol/100, so results are reproducible.
pub const LIMIT_STEPS: [f64; 7] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// π^{k/2}/Γ(k/2).
pub fn residue(k: u32, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.work_prec();
    let h = Float::with_val(p, k as f64 / 2.0);
    let pi = Float::with_val(p, Constant::Pi);
    Ok(Float::with_val(p, Pow::pow(&pi, &h)) / gamma_real(&h)?)
}

/// (π^{k/2}/Γ(k/2))(γ − 2 ln 2 − ψ(k/2) − 2 ln Φ_k(1)) + ζ_{k−1}(k/2).
pub fn laurent_closed_form(k: u32, ctx: &PrecisionContext) -> Result<LaurentData> {
    let p = ctx.work_prec();
    let h = Float::with_val(p, k as f64 / 2.0);
    let res = residue(k, ctx)?;
    let ln2 = Float::with_val(p, Constant::Log2);
    let lphi = log_phi_k(k, &Float::with_val(p, 1), ctx)?.value;
    let bracket = euler_gamma(p) - ln2 * 2u32 - digamma_real(&h)? - lphi * 2u32;
    let prev = zeta_k(k - 1, &Complex::from_real(&h), ctx)?.re;
    let constant = Float::with_val(p, &res * &bracket) + prev;
    Ok(LaurentData {
        k,
        pole: k as f64 / 2.0,
        residue: res,
        constant,
        method: LaurentMethod::ClosedForm,
        cross_check: None,
    })
}

/// lim_{ε→0} [ζ_k(k/2+ε) − R/ε], from the even combination
/// g(ε) = ½[f(ε) + f(−ε)] = C + O(ε²) extrapolated in ε².
pub fn laurent_numerical_limit(k: u32, ctx: &PrecisionContext) -> Result<LaurentData> {
    let p = ctx.work_prec();
    let res = residue(k, ctx)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut last: Option<Float> = None;
    let mut best = Float::new(p);
    for (i, &e) in LIMIT_STEPS.iter().enumerate() {
        let eps = Float::with_val(p, e);
        let mut g = Float::new(p);
        for sign in [1i32, -1] {
            let se = Float::with_val(p, &eps * sign);
            let s = Complex::from_real(&(Float::with_val(p, k as f64 / 2.0) + &se));
            let z = zeta_k(k, &s, ctx)?.re;
            g += z - Float::with_val(p, &res / &se);
        }
        ys.push(g / 2u32);
        xs.push(Float::with_val(p, eps.square_ref()));
        best = neville_at_zero(&xs, &ys);
        if i >= 2 {
            if let Some(prev) = &last {
                if Float::with_val(p, &best - prev).abs().to_f64() < ctx.tol / 100.0 {
                    break;
                }
            }
        }
        last = Some(best.clone());
    }
    Ok(LaurentData {
        k,
        pole: k as f64 / 2.0,
        residue: res,
        constant: best,
        method: LaurentMethod::NumericalLimit,
        cross_check: None,
    })
}

/// The constant term in its classical shape where one is known:
/// k = 1: 2γ; k = 2: π(2γ − 2 ln 2 − 4 ln η(i)); k = 4: π²(2γ + ln 2π − 12 ln A + (2/3) ln 2),
/// with A the Glaisher–Kinkelin constant.
pub fn laurent_known_constant(k: u32, ctx: &PrecisionContext) -> Result<Option<Float>> {
    let p = ctx.work_prec();
    let g2 = euler_gamma(p) * 2u32;
    let pi = Float::with_val(p, Constant::Pi);
    let ln2 = Float::with_val(p, Constant::Log2);
    Ok(match k {
        1 => Some(g2),
        2 => {
            let le = log_dedekind_eta_imag(&Float::with_val(p, 1), ctx)?;
            Some(pi * (g2 - ln2 * 2u32 - le * 4u32))
        }
        4 => {
            let l2pi = Float::with_val(p, &pi * 2u32).ln();
            let inner = g2 + l2pi - log_glaisher_a(ctx)? * 12u32 + ln2 * 2u32 / 3u32;
            Some(pi.square() * inner)
        }
        _ => None,
    })
}

/// Closed-form data with the numerical limit attached as a cross-check.
pub fn laurent_at_pole(k: u32, ctx: &PrecisionContext) -> Result<LaurentData> {
    let mut d = laurent_closed_form(k, ctx)?;
    d.cross_check = Some(laurent_numerical_limit(k, ctx)?.constant);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn k1_constant_is_twice_euler_gamma() {
        let d = laurent_closed_form(1, &ctx()).unwrap();
        let p = ctx().work_prec();
        assert!((d.constant - euler_gamma(p) * 2u32).abs().to_f64() < 1e-60);
        assert!((d.residue - 1u32).abs().to_f64() < 1e-60);
    }

    #[test]
    fn k2_kronecker_value() {
        let c = ctx();
        let p = c.work_prec();
        let d = laurent_closed_form(2, &c).unwrap();
        let pi = Float::with_val(p, Constant::Pi);
        // η(i) = Γ(1/4) / (2π^{3/4})
        let eta = gamma_real(&Float::with_val(p, 0.25)).unwrap()
            / (Float::with_val(p, Pow::pow(&pi, &Float::with_val(p, 0.75))) * 2u32);
        let ln2 = Float::with_val(p, Constant::Log2);
        let e = Float::with_val(p, &pi) * (euler_gamma(p) * 2u32 - ln2 * 2u32 - eta.ln() * 4u32);
        assert!((Float::with_val(p, &d.constant - &e)).abs().to_f64() < 1e-25);
        let known = laurent_known_constant(2, &c).unwrap().unwrap();
        assert!((known - e).abs().to_f64() < 1e-25);
    }

    #[test]
    fn k4_glaisher_value() {
        let c = ctx();
        let d = laurent_closed_form(4, &c).unwrap();
        let e = laurent_known_constant(4, &c).unwrap().unwrap();
        assert!((d.constant - e).abs().to_f64() < 1e-22);
        assert!(laurent_known_constant(3, &c).unwrap().is_none());
    }

    #[test]
    fn numerical_limit_agrees_for_small_k() {
        let c = ctx();
        for k in 1..=3 {
            let a = laurent_closed_form(k, &c).unwrap();
            let b = laurent_numerical_limit(k, &c).unwrap();
            assert!((a.constant - b.constant).abs().to_f64() < 1e-12, "k={k}");
        }
    }
}
