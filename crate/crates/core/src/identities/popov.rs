//! Popov's r_k(n) Bessel expansion, Watson's k = 1 case and the theta transformation.

use rug::float::Constant;
use rug::Float;

use super::{asymptotic_tail, lattice_tail_shared, report, zeta_tail, IdentityId, IdentityParams, IdentityReport, Side, Truncation};
use crate::arith::rk_convolution;
use crate::error::{Error, Result};
use crate::numkernel::{sum_until, PrecisionContext, TailModel};
use crate::specfun::bessel::bessel_k;
use crate::specfun::gamma::gamma_real;

/// Coefficient of t^j in (1 + t)^{−s}.
fn binomial_neg(s: &Float, j: u32) -> Float {
    let mut c = Float::with_val(s.prec(), 1);
    for i in 0..j {
        c *= Float::with_val(s.prec(), s + i);
        c /= -(i as i32 + 1);
    }
    c
}

fn power(x: &Float, e: &Float) -> Float {
    (Float::with_val(x.prec(), x.ln_ref()) * e).exp()
}

/// Table size for a sum with terms ~ n^{growth} e^{−c√n}.
fn stretched_table_size(c: f64, growth: f64, tol: f64) -> usize {
    let need = -tol.ln() + 20.0;
    let mut s = need / c;
    for _ in 0..6 {
        s = (need + 2.0 * growth * (s + 2.0).ln() + 10.0) / (0.8 * c);
    }
    (s * s).ceil() as usize + 16
}

/// Both sides of Popov's formula:
/// β^{ν/2}Γ(ν+k/2)/(2π^{ν+k/2}) Σ_{n≥0} r_k(n)(n+β)^{−ν−k/2}
/// and Γ(ν)/(2π^ν β^{ν/2}) + Σ_{n≥1} r_k(n) n^{ν/2} K_ν(2π√(nβ)).
pub fn popov_sides(k: u32, nu: f64, beta: f64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let (l, r) = popov_eval(k, nu, beta, ctx)?;
    Ok((l.value, r.value))
}

fn popov_eval(k: u32, nu: f64, beta: f64, ctx: &PrecisionContext) -> Result<(Side, Side)> {
    if k == 0 || !(nu > 0.0) || !(beta > 0.0) {
        return Err(Error::DomainError(format!("need k ≥ 1, ν > 0, β > 0; got k={k}, ν={nu}, β={beta}")));
    }
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let b = Float::with_val(p, beta);
    let nuf = Float::with_val(p, nu);
    let s = Float::with_val(p, nu + k as f64 / 2.0);

    // Dirichlet side: direct terms up to n, then the binomial expansion in β/m
    let n = (40.0 * beta).ceil().max(64.0) as usize;
    let table = rk_convolution(k, n)?;
    let neg_s = Float::with_val(p, -&s);
    let mut direct = power(&b, &neg_s);
    for m in 1..=n {
        let r = table.values[m];
        if r == 0 {
            continue;
        }
        direct += power(&Float::with_val(p, &b + m as u32), &neg_s) * r;
    }
    let coef = |j: u32| binomial_neg(&s, j) * power(&b, &Float::with_val(p, j));
    let tail = |j: u32, prec: u32, tol: f64| lattice_tail_shared(k, &Float::with_val(prec, &s + j), &table, n, prec, tol, ctx);
    let (t, tr) = asymptotic_tail("popov_dirichlet_tail", 0, coef, tail, ctx.tol / 100.0, p)?;
    let pref = power(&b, &Float::with_val(p, &nuf / 2u32)) * gamma_real(&s)?
        / (power(&pi, &s) * 2u32);
    let lhs = Side {
        value: (direct + t) * pref,
        truncations: vec![Truncation::new("popov_dirichlet", n as u64, tr.tail_bound), tr],
    };

    // Bessel side
    let c = 2.0 * std::f64::consts::PI * beta.sqrt();
    let nmax = stretched_table_size(c, k as f64 / 2.0 + nu / 2.0, ctx.tol).min(20_000_000);
    let rt = rk_convolution(k, nmax)?;
    let two_pi_sb = Float::with_val(p, &pi * 2u32) * Float::with_val(p, b.sqrt_ref());
    let half_nu = Float::with_val(p, nu / 2.0);
    let sum = sum_until(
        1,
        |m| {
            if m as usize > nmax {
                return Err(Error::NonConvergent(format!("r_{k} table exhausted at n={m}")));
            }
            let r = rt.values[m as usize];
            if r == 0 {
                return Ok(Float::new(p));
            }
            let mf = Float::with_val(p, m);
            let z = Float::with_val(p, mf.sqrt_ref()) * &two_pi_sb;
            Ok(bessel_k(nu, &z, ctx)? * power(&mf, &half_nu) * r)
        },
        TailModel::StretchedExponential { c: 0.9 * c },
        ctx,
    )?;
    let gterm = gamma_real(&nuf)? / (power(&pi, &nuf) * power(&b, &half_nu) * 2u32);
    let rhs = Side {
        value: gterm + &sum.value,
        truncations: vec![Truncation::new("popov_bessel", sum.terms_used, sum.tail_bound)],
    };
    Ok((lhs, rhs))
}

pub fn check_popov(k: u32, nu: f64, beta: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (lhs, rhs) = popov_eval(k, nu, beta, ctx)?;
    let params = IdentityParams { k: Some(k), nu: Some(nu), beta: Some(beta), ..Default::default() };
    Ok(report(IdentityId::Popov, params, lhs, rhs, ctx))
}

/// Σ_{n∈ℤ}(n² + x²)^{−ν} and √π x^{1−2ν}Γ(ν−1/2)/Γ(ν) + 4π^ν x^{1/2−ν}/Γ(ν) Σ n^{ν−1/2}K_{ν−1/2}(2πnx).
pub fn watson_sides(nu: f64, x: f64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let (l, r) = watson_eval(nu, x, ctx)?;
    Ok((l.value, r.value))
}

fn watson_eval(nu: f64, x: f64, ctx: &PrecisionContext) -> Result<(Side, Side)> {
    if !(nu > 0.5) || !(x > 0.0) {
        return Err(Error::DomainError(format!("need ν > 1/2, x > 0; got ν={nu}, x={x}")));
    }
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let xf = Float::with_val(p, x);
    let nuf = Float::with_val(p, nu);
    let x2 = Float::with_val(p, xf.square_ref());
    let neg_nu = Float::with_val(p, -&nuf);

    let n = (10.0 * x).ceil().max(32.0) as usize;
    let mut direct = Float::new(p);
    for m in 1..=n {
        direct += power(&Float::with_val(p, &x2 + (m * m) as u32), &neg_nu);
    }
    // Σ_{m>n}(m² + x²)^{−ν} = Σ_j binom(−ν, j) x^{2j} Σ_{m>n} m^{−2ν−2j}
    let coef = |j: u32| binomial_neg(&nuf, j) * power(&x2, &Float::with_val(p, j));
    let tail = |j: u32, prec: u32, _tol: f64| zeta_tail(&Float::with_val(prec, 2.0 * nu + 2.0 * j as f64), n, prec);
    let (t, tr) = asymptotic_tail("watson_power_tail", 0, coef, tail, ctx.tol / 100.0, p)?;
    let lhs = Side {
        value: power(&x2, &neg_nu) + (direct + t) * 2u32,
        truncations: vec![Truncation::new("watson_power", n as u64, tr.tail_bound), tr],
    };

    let order = nu - 0.5;
    let ordf = Float::with_val(p, order);
    let two_pi_x = Float::with_val(p, &pi * &xf) * 2u32;
    let sum = sum_until(
        1,
        |m| {
            let z = Float::with_val(p, &two_pi_x * m);
            Ok(bessel_k(order, &z, ctx)? * power(&Float::with_val(p, m), &ordf))
        },
        TailModel::Exponential { c: 0.9 * two_pi_x.to_f64() },
        ctx,
    )?;
    let g = gamma_real(&nuf)?;
    let first = Float::with_val(p, pi.sqrt_ref()) * power(&xf, &Float::with_val(p, 1.0 - 2.0 * nu)) * gamma_real(&ordf)? / &g;
    let second = power(&pi, &nuf) * power(&xf, &Float::with_val(p, 0.5 - nu)) * 4u32 / &g * &sum.value;
    let rhs = Side {
        value: first + second,
        truncations: vec![Truncation::new("watson_bessel", sum.terms_used, sum.tail_bound)],
    };
    Ok((lhs, rhs))
}

pub fn check_watson(nu: f64, x: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let (lhs, rhs) = watson_eval(nu, x, ctx)?;
    let params = IdentityParams { nu: Some(nu), x: Some(x), ..Default::default() };
    Ok(report(IdentityId::Watson, params, lhs, rhs, ctx))
}

/// Σ_{n∈ℤ} e^{−πn²x}.
fn theta_eval(x: &Float, ctx: &PrecisionContext) -> Result<Side> {
    let p = ctx.work_prec();
    let pix = Float::with_val(p, Constant::Pi) * x;
    let s = sum_until(
        1,
        |n| Ok(Float::with_val(p, -Float::with_val(p, &pix * (n * n))).exp()),
        TailModel::Exponential { c: pix.to_f64() },
        ctx,
    )?;
    Ok(Side {
        value: s.value * 2u32 + 1u32,
        truncations: vec![Truncation::new("theta", s.terms_used, s.tail_bound)],
    })
}

/// θ(x) against x^{−1/2} θ(1/x).
pub fn check_theta(x: f64, ctx: &PrecisionContext) -> Result<IdentityReport> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("x must be positive, got {x}")));
    }
    let p = ctx.work_prec();
    let xf = Float::with_val(p, x);
    let lhs = theta_eval(&xf, ctx)?;
    let mut rhs = theta_eval(&Float::with_val(p, xf.recip_ref()), ctx)?;
    rhs.value /= Float::with_val(p, xf.sqrt_ref());
    let params = IdentityParams { x: Some(x), ..Default::default() };
    Ok(report(IdentityId::Theta, params, lhs, rhs, ctx))
}
