//! Ferrar-type identities F(α) = F(β), αβ = 1: the general r_k(n) form with
//! Whittaker brackets and its k = 1, 2, 3 reductions through K₀, K₁ and E₁.

use rug::float::Constant;
use rug::Float;

use super::{asymptotic_cut, asymptotic_tail, lattice_tail_shared, dual_parameter, report, zeta_tail, IdentityId, IdentityParams, IdentityReport, Side, Truncation};
use crate::arith::rk_convolution;
use crate::error::{Error, Result};
use crate::numkernel::{Complex, PrecisionContext};
use crate::specfun::bessel::k0_k1;
use crate::specfun::expint::exp_integral_e1;
use crate::specfun::gamma::{digamma_real, euler_gamma, gamma_real};
use crate::specfun::lattice::{log_dedekind_eta_imag, log_phi_k};
use crate::specfun::whittaker::WhittakerKernel;
use crate::zetafn::{dirichlet_beta, riemann_zeta, zeta_k};

/// Coefficient of y^{−j} in e^y K_ν(y) √(2y/π): Π_{i≤j}(4ν² − (2i−1)²) / (j! 8^j).
pub(crate) fn bessel_asymptotic_coef(four_nu_sq: i64, j: u32, prec: u32) -> Float {
    let mut c = Float::with_val(prec, 1);
    for i in 1..=j as i64 {
        c *= four_nu_sq - (2 * i - 1) * (2 * i - 1);
        c /= 8 * i;
    }
    c
}

/// α-independent pieces of the general side.
struct GeneralConstants {
    /// π^{(1−k)/2} ζ_{k−1}(k/2), zero for k = 1
    zeta_term: Float,
    /// √π / Γ(k/2)
    gamma_factor: Float,
    /// 2γ + ψ(k/2) − 2 log Φ_k(1)
    bracket: Float,
    truncations: Vec<Truncation>,
}

impl GeneralConstants {
    fn new(k: u32, ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.work_prec();
        let pi = Float::with_val(p, Constant::Pi);
        let kh = Float::with_val(p, k as f64 / 2.0);
        let rho = Float::with_val(p, (k as f64 - 1.0) / 2.0);
        let zeta_term = if k == 1 {
            Float::new(p)
        } else {
            let z = zeta_k(k - 1, &Complex::from_real(&kh), ctx)?.re;
            z * (Float::with_val(p, pi.ln_ref()) * -rho).exp()
        };
        let gamma_factor = Float::with_val(p, pi.sqrt_ref()) / gamma_real(&kh)?;
        let phi = log_phi_k(k, &Float::with_val(p, 1), ctx)?;
        let bracket = euler_gamma(p) * 2u32 + digamma_real(&kh)? - Float::with_val(p, &phi.value * 2u32);
        let truncations = vec![Truncation::new("log_phi_k", phi.terms_used, phi.tail_bound)];
        Ok(GeneralConstants { zeta_term, gamma_factor, bracket, truncations })
    }
}

/// α^{k/2−1} Σ r_k(n){e^{πnα²/2} W_{(1−k)/2,0}(πnα²)/√n − π^{(1−k)/2}/(n^{k/2}α^{k−1})} plus the
/// ζ_{k−1}, γ, ψ, Φ_k terms.
fn general_side(k: u32, alpha: &Float, c: &GeneralConstants, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let x1 = Float::with_val(p, alpha.square_ref()) * &pi;
    let rho = Float::with_val(p, (k as f64 - 1.0) / 2.0);
    let kh = k as f64 / 2.0;
    let n = asymptotic_cut(x1.to_f64(), 1.0, k, ctx.tol);
    let table = rk_convolution(k, n)?;
    // e^{X/2} W_{−ρ,0}(X) = √X U(k/2, 1, X)
    let mut kernel = WhittakerKernel::new(kh, 1.0, ctx)?;
    let mut direct = Float::new(p);
    for m in 1..=n {
        let r = table.values[m];
        if r == 0 {
            continue;
        }
        let x = Float::with_val(p, &x1 * m as u32);
        let w = kernel.u(&x)? * Float::with_val(p, x.sqrt_ref());
        let lead = (Float::with_val(p, x.ln_ref()) * -rho.clone()).exp();
        direct += (w - lead) * r / Float::with_val(p, m).sqrt();
    }
    // beyond n: e^{X/2}W − X^{−ρ} ~ Σ_{j≥1} c_j X^{−ρ−j}, c_j = (−1)^j ((k/2)_j)² / j!
    let lx1 = Float::with_val(p, x1.ln_ref());
    let coef = |j: u32| {
        let mut c = Float::with_val(p, 1);
        for i in 0..j {
            let a = kh + i as f64;
            c *= a * a;
            c /= -(i as f64 + 1.0);
        }
        c * (Float::with_val(p, &lx1 * -(rho.clone() + j)).exp())
    };
    let tail = |j: u32, prec: u32, tol: f64| lattice_tail_shared(k, &Float::with_val(prec, kh + j as f64), &table, n, prec, tol, ctx);
    let (t, tr) = asymptotic_tail("theorem1_bracket_tail", 1, coef, tail, ctx.tol / 100.0, p)?;
    let series = direct + t;
    let la = Float::with_val(p, alpha.ln_ref());
    let a_pow = |e: f64| Float::with_val(p, &la * e).exp();
    let l4pia2 = (Float::with_val(p, &x1 * 4u32)).ln();
    let value = series * a_pow(kh - 1.0)
        + Float::with_val(p, &c.zeta_term * a_pow(-kh))
        + Float::with_val(p, &c.gamma_factor * a_pow(-kh)) * (Float::with_val(p, &c.bracket - &l4pia2));
    Ok(Side {
        value,
        truncations: vec![Truncation::new("theorem1_bracket", n as u64, tr.tail_bound), tr],
    })
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::DomainError("k must be at least 1".into()));
    }
    Ok(())
}

/// One side of the general r_k(n) Ferrar identity at α.
pub fn theorem1_side(k: u32, alpha: f64, ctx: &PrecisionContext) -> Result<Float> {
    check_k(k)?;
    let c = GeneralConstants::new(k, ctx)?;
    let (a, _) = dual_parameter(alpha, None, 1.0, ctx.work_prec())?;
    Ok(general_side(k, &a, &c, ctx)?.value)
}

pub(crate) fn theorem1_pair(k: u32, alpha: f64, beta: Option<f64>, ctx: &PrecisionContext) -> Result<IdentityReport> {
    check_k(k)?;
    let (a, b) = dual_parameter(alpha, beta, 1.0, ctx.work_prec())?;
    let c = GeneralConstants::new(k, ctx)?;
    let mut lhs = general_side(k, &a, &c, ctx)?;
    let rhs = general_side(k, &b, &c, ctx)?;
    lhs.truncations.extend(c.truncations);
    let params = IdentityParams { k: Some(k), alpha: Some(alpha), beta, ..Default::default() };
    Ok(report(IdentityId::Theorem1, params, lhs, rhs, ctx))
}

pub fn check_theorem1(k: u32, alpha: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    theorem1_pair(k, alpha, None, ctx)
}

/// 2√α Σ{e^{y}K₀(y) − 1/(αn)} + (γ − log 16π − 2 log α)/√α with y = πn²α²/2.
fn ferrar_eval(alpha: &Float, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let y1 = Float::with_val(p, alpha.square_ref()) * &pi / 2u32;
    let n = asymptotic_cut(y1.to_f64(), 2.0, 1, ctx.tol);
    let inv_a = Float::with_val(p, alpha.recip_ref());
    let mut direct = Float::new(p);
    for m in 1..=n {
        let y = Float::with_val(p, &y1 * (m * m) as u32);
        let (k0, _) = k0_k1(&y, p);
        let e = Float::with_val(p, y.exp_ref()) * k0;
        direct += e - Float::with_val(p, &inv_a / m as u32);
    }
    // e^y K₀(y) − 1/(αn) ~ (1/(αn)) Σ_{j≥1} A_j y^{−j}
    let ly1 = Float::with_val(p, y1.ln_ref());
    let coef = |j: u32| bessel_asymptotic_coef(0, j, p) * Float::with_val(p, &ly1 * -(j as i32)).exp() * &inv_a;
    let tail = |j: u32, prec: u32, _tol: f64| zeta_tail(&Float::with_val(prec, 2 * j + 1), n, prec);
    let (t, tr) = asymptotic_tail("ferrar_bracket_tail", 1, coef, tail, ctx.tol / 100.0, p)?;
    let sa = Float::with_val(p, alpha.sqrt_ref());
    let l16pi = Float::with_val(p, &pi * 16u32).ln();
    let konst = euler_gamma(p) - l16pi - Float::with_val(p, alpha.ln_ref()) * 2u32;
    let value = (direct + t) * Float::with_val(p, &sa * 2u32) + konst / &sa;
    Ok(Side { value, truncations: vec![Truncation::new("ferrar_bracket", n as u64, tr.tail_bound), tr] })
}

pub fn ferrar_side(alpha: f64, ctx: &PrecisionContext) -> Result<Float> {
    let (a, _) = dual_parameter(alpha, None, 1.0, ctx.work_prec())?;
    Ok(ferrar_eval(&a, ctx)?.value)
}

pub(crate) fn ferrar_pair(alpha: f64, beta: Option<f64>, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (a, b) = dual_parameter(alpha, beta, 1.0, ctx.work_prec())?;
    let lhs = ferrar_eval(&a, ctx)?;
    let rhs = ferrar_eval(&b, ctx)?;
    let params = IdentityParams { alpha: Some(alpha), beta, ..Default::default() };
    Ok(report(IdentityId::FerrarClassic, params, lhs, rhs, ctx))
}

pub fn check_ferrar_classic(alpha: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    ferrar_pair(alpha, None, ctx)
}

/// The two closed forms of the r₂ constant at α:
/// γ − 4 log η(i) − log(4πα²) and γ − 2 log(Γ(1/4)² α / 2π).
pub fn r2_constant_forms(alpha: f64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let a = Float::with_val(p, alpha);
    let g = euler_gamma(p);
    let leta = log_dedekind_eta_imag(&Float::with_val(p, 1), ctx)?;
    let l4pia2 = (Float::with_val(p, a.square_ref()) * &pi * 4u32).ln();
    let eta_form = Float::with_val(p, &g - leta * 4u32) - l4pia2;
    let g14 = gamma_real(&Float::with_val(p, 0.25))?;
    let arg = g14.square() * &a / (pi * 2u32);
    let gamma_form = g - arg.ln() * 2u32;
    Ok((eta_form, gamma_form))
}

/// α Σ r₂(n){e^{X}Ei(−X) + 1/X} − (γ − 4 log η(i) − log 4πα²)/α with X = πnα².
fn r2_eval(alpha: &Float, leta: &Float, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let x1 = Float::with_val(p, alpha.square_ref()) * &pi;
    let n = asymptotic_cut(x1.to_f64(), 1.0, 2, ctx.tol);
    let table = rk_convolution(2, n)?;
    let mut direct = Float::new(p);
    for m in 1..=n {
        let r = table.values[m];
        if r == 0 {
            continue;
        }
        let x = Float::with_val(p, &x1 * m as u32);
        let ee = exp_integral_e1(&x, ctx)? * Float::with_val(p, x.exp_ref());
        direct += (Float::with_val(p, x.recip_ref()) - ee) * r;
    }
    // e^X E₁(X) ~ Σ_{j≥0} (−1)^j j! X^{−j−1}
    let lx1 = Float::with_val(p, x1.ln_ref());
    let coef = |j: u32| {
        let mut f = Float::with_val(p, 1);
        for i in 1..=j {
            f *= i;
        }
        if j % 2 == 0 {
            f = -f;
        }
        f * Float::with_val(p, &lx1 * -(j as i32 + 1)).exp()
    };
    let tail = |j: u32, prec: u32, tol: f64| lattice_tail_shared(2, &Float::with_val(prec, j + 1), &table, n, prec, tol, ctx);
    let (t, tr) = asymptotic_tail("r2_bracket_tail", 1, coef, tail, ctx.tol / 100.0, p)?;
    let konst = Float::with_val(p, euler_gamma(p) - Float::with_val(p, leta * 4u32)) - (Float::with_val(p, &x1 * 4u32)).ln();
    let value = (direct + t) * alpha - konst / alpha;
    Ok(Side { value, truncations: vec![Truncation::new("r2_bracket", n as u64, tr.tail_bound), tr] })
}

pub fn r2_side(alpha: f64, ctx: &PrecisionContext) -> Result<Float> {
    let (a, _) = dual_parameter(alpha, None, 1.0, ctx.work_prec())?;
    let leta = log_dedekind_eta_imag(&Float::with_val(ctx.work_prec(), 1), ctx)?;
    Ok(r2_eval(&a, &leta, ctx)?.value)
}

pub(crate) fn r2_pair(alpha: f64, beta: Option<f64>, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (a, b) = dual_parameter(alpha, beta, 1.0, ctx.work_prec())?;
    let leta = log_dedekind_eta_imag(&Float::with_val(ctx.work_prec(), 1), ctx)?;
    let lhs = r2_eval(&a, &leta, ctx)?;
    let rhs = r2_eval(&b, &leta, ctx)?;
    let params = IdentityParams { alpha: Some(alpha), beta, ..Default::default() };
    Ok(report(IdentityId::R2Ei, params, lhs, rhs, ctx))
}

pub fn check_r2_ei(alpha: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    r2_pair(alpha, None, ctx)
}

struct R3Constants {
    /// 4 ζ(3/2) L(3/2, χ₄) / π
    zeta_term: Float,
    /// 2(γ + 2 − 2 log 2 − 2 log Φ₃(1))
    bracket: Float,
    truncations: Vec<Truncation>,
}

impl R3Constants {
    fn new(ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.work_prec();
        let pi = Float::with_val(p, Constant::Pi);
        let s = Complex::with_val(p, 1.5, 0.0);
        let zl = riemann_zeta(&s, ctx)?.re * dirichlet_beta(&s, ctx)?.re;
        let zeta_term = zl * 4u32 / pi;
        let phi = log_phi_k(3, &Float::with_val(p, 1), ctx)?;
        let l2 = Float::with_val(p, Constant::Log2);
        let bracket = (euler_gamma(p) + 2u32 - l2 * 2u32 - Float::with_val(p, &phi.value * 2u32)) * 2u32;
        Ok(R3Constants {
            zeta_term,
            bracket,
            truncations: vec![Truncation::new("log_phi_k", phi.terms_used, phi.tail_bound)],
        })
    }
}

/// The r₃ side in its K₀/K₁ form, y = πnα²/2.
fn r3_eval(alpha: &Float, c: &R3Constants, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let y1 = Float::with_val(p, alpha.square_ref()) * &pi / 2u32;
    let n = asymptotic_cut(y1.to_f64(), 1.0, 3, ctx.tol);
    let table = rk_convolution(3, n)?;
    let two_a = Float::with_val(p, alpha * 2u32);
    let pia2 = Float::with_val(p, &y1 * 2u32);
    let mut direct = Float::new(p);
    for m in 1..=n {
        let r = table.values[m];
        if r == 0 {
            continue;
        }
        let y = Float::with_val(p, &y1 * m as u32);
        let (k0, k1) = k0_k1(&y, p);
        let e = Float::with_val(p, y.exp_ref());
        let two_y = Float::with_val(p, &y * 2u32);
        let main = (Float::with_val(p, &two_y * Float::with_val(p, &k0 - &k1)) + k0) * e * &two_a;
        let mf = Float::with_val(p, m);
        let sub = Float::with_val(p, &pia2 * Float::with_val(p, mf.sqrt_ref()) * &mf).recip();
        direct += (main - sub) * r;
    }
    // 2α e^y[(2y+1)K₀ − 2yK₁] ~ 2α√(π/2) Σ_j d_j y^{−j−1/2}, d_j = A_j + 2(A_{j+1} − B_{j+1});
    // the j = 1 term cancels the subtracted power exactly
    let half_pi = Float::with_val(p, &pi / 2u32).sqrt();
    let scale = Float::with_val(p, &two_a * &half_pi);
    let ly1 = Float::with_val(p, y1.ln_ref());
    let coef = |j: u32| {
        let d = bessel_asymptotic_coef(0, j, p)
            + (bessel_asymptotic_coef(0, j + 1, p) - bessel_asymptotic_coef(4, j + 1, p)) * 2u32;
        d * &scale * Float::with_val(p, &ly1 * -(j as f64 + 0.5)).exp()
    };
    let tail = |j: u32, prec: u32, tol: f64| lattice_tail_shared(3, &Float::with_val(prec, j as f64 + 0.5), &table, n, prec, tol, ctx);
    let (t, tr) = asymptotic_tail("r3_bracket_tail", 2, coef, tail, ctx.tol / 100.0, p)?;
    let sa = Float::with_val(p, alpha.sqrt_ref());
    let a32 = Float::with_val(p, &sa * alpha);
    let l4pia2 = Float::with_val(p, &pia2 * 4u32).ln();
    let value = (direct + t) * &sa
        + Float::with_val(p, &c.zeta_term / &a32)
        + (Float::with_val(p, &c.bracket - l4pia2 * 2u32)) / &a32;
    Ok(Side { value, truncations: vec![Truncation::new("r3_bracket", n as u64, tr.tail_bound), tr] })
}

pub fn r3_side(alpha: f64, ctx: &PrecisionContext) -> Result<Float> {
    let (a, _) = dual_parameter(alpha, None, 1.0, ctx.work_prec())?;
    let c = R3Constants::new(ctx)?;
    Ok(r3_eval(&a, &c, ctx)?.value)
}

pub(crate) fn r3_pair(alpha: f64, beta: Option<f64>, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (a, b) = dual_parameter(alpha, beta, 1.0, ctx.work_prec())?;
    let c = R3Constants::new(ctx)?;
    let mut lhs = r3_eval(&a, &c, ctx)?;
    let rhs = r3_eval(&b, &c, ctx)?;
    lhs.truncations.extend(c.truncations);
    let params = IdentityParams { alpha: Some(alpha), beta, ..Default::default() };
    Ok(report(IdentityId::R3, params, lhs, rhs, ctx))
}

pub fn check_r3(alpha: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    r3_pair(alpha, None, ctx)
}
