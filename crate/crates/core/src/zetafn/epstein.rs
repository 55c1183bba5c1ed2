//! ζ_k(s) = Σ r_k(n) n^{-s} continued to the whole plane by peeling one square
//! at a time:
//!
//! ζ_L(s) = ζ_{L−1}(s) + P(s)·F(u) + 2P(s)·Σ_q K_u(2π√q) q^{u/2} c_q(u),
//!
//! with u = s − (L−1)/2, P(s) = 2π^s/Γ(s), F(w) = π^{-w}Γ(w)ζ(2w) and
//! c_q(u) = Σ_{n²|q} r_{L−1}(q/n²) n^{-2u}.  Unrolled from ζ_0 = 0 this gives
//! one F term per level and one Bessel sum per level L ≥ 2.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::Float;

use super::riemann::zeta_at;
use crate::arith::{rk_convolution, rk_convolution_all, RkTable};
use crate::error::{Error, Result};
use crate::numkernel::{
    sum_until_target, BoundKind, Complex, PrecisionContext, SeriesResult, TailModel,
};
use crate::specfun::bessel::BesselKOrder;
use crate::specfun::gamma::{euler_gamma, gamma, recip_gamma};

/// Half-width of the window around s = L/2 in which the F terms of levels L and L+1
/// are combined before evaluation.
const PAIR_RADIUS: f64 = 0.1;

/// F(w) = π^{-w} Γ(w) ζ(2w), using F(w) = F(1/2 − w) to stay in Re w ≥ 1/4.
pub fn completed_riemann(w: &Complex, prec: u32) -> Result<Complex> {
    let p = prec + 16;
    let quarter = Float::with_val(p, 0.25);
    let w = if w.re < quarter {
        let half = Complex::with_val(p, 0.5, 0.0);
        &half - &w.to_prec(p)
    } else {
        w.to_prec(p)
    };
    if w.im.is_zero() && w.re == 0.5 {
        return Err(Error::PoleAt("π^{-w}Γ(w)ζ(2w) at w = 1/2".into()));
    }
    let lnpi = Float::with_val(p, Constant::Pi).ln();
    let a = (-&w.scale(&lnpi)).exp();
    let g = gamma(&w, p)?;
    let two = Float::with_val(p, 2);
    let z = zeta_at(&w.scale(&two), p)?;
    Ok((&(&a * &g) * &z).to_prec(prec))
}

/// F(1/2 + δ) + F(1/2 − δ), regular at δ = 0 where it equals γ − ln 4π.
pub fn completed_riemann_pair(delta: &Complex, prec: u32) -> Result<Complex> {
    let d = delta.log2_abs();
    if 2.0 * d < -(prec as f64) - 8.0 {
        // the pair is even in δ, so the error here is O(δ²)
        let p = prec;
        let four_pi = Float::with_val(p, Constant::Pi) * 4u32;
        return Ok(Complex::from_real(&(euler_gamma(p) - four_pi.ln())));
    }
    let guard = (-d).max(0.0).ceil() as u32 + 12;
    let p = prec + guard;
    let half = Complex::with_val(p, 0.5, 0.0);
    let delta = delta.to_prec(p);
    let a = completed_riemann(&(&half + &delta), p)?;
    let b = completed_riemann(&(&half - &delta), p)?;
    Ok((&a + &b).to_prec(prec))
}

/// Working state for one ζ_k evaluation.
struct Plan {
    k: u32,
    prec: u32,
    log2_target: f64,
}

impl Plan {
    fn bessel_sum(&self, level: u32, u: &Complex, tables: &[RkTable], qmax: usize) -> Result<Complex> {
        let p = self.prec;
        let r = &tables[level as usize - 2].values; // r_{level−1}
        // n^{-2u} for n ≤ √qmax
        let nmax = (qmax as f64).sqrt() as usize + 1;
        let two_u = u.scale(&Float::with_val(p, 2));
        let npow: Vec<Complex> = (0..=nmax)
            .map(|n| {
                if n == 0 {
                    Complex::zero(p)
                } else {
                    let l = Float::with_val(p, n).ln();
                    (-&two_u.scale(&l)).exp()
                }
            })
            .collect();
        let half_u = u.scale(&Float::with_val(p, 0.5));
        let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
        let mut kq = BesselKOrder::new(u.clone(), p);
        let log2_target = self.log2_target;
        let res: SeriesResult<Complex> = sum_until_target(
            1,
            |q| {
                let q = q as usize;
                if q > qmax {
                    return Err(Error::NonConvergent(format!("ζ_{} Bessel sum passed q={qmax}", self.k)));
                }
                let mut c = Complex::zero(p);
                let mut n = 1usize;
                while n * n <= q {
                    if q % (n * n) == 0 {
                        let rv = r[q / (n * n)];
                        if rv != 0 {
                            c = &c + &npow[n].scale(&Float::with_val(p, rv));
                        }
                    }
                    n += 1;
                }
                if c.re.is_zero() && c.im.is_zero() {
                    return Ok(Complex::zero(p));
                }
                let lq = Float::with_val(p, q).ln();
                let qpow = half_u.scale(&lq).exp();
                let coef = &c * &qpow;
                let z = Float::with_val(p, q).sqrt() * &two_pi;
                let kt = log2_target - coef.log2_abs() - 12.0;
                let kv = kq.eval(&z, kt)?;
                Ok(&coef * &kv)
            },
            // K_u(2π√q) ~ e^{−2π√q}; the slack absorbs q^{u/2} and the divisor-sum growth
            TailModel::StretchedExponential { c: 2.0 * PI * 0.9 },
            log2_target.exp2(),
            qmax as u64,
            p,
        )?;
        if res.bound_kind == BoundKind::Heuristic {
            return Err(Error::NonConvergent(format!("ζ_{} Bessel sum did not reach its target", self.k)));
        }
        Ok(res.value)
    }
}

fn qmax_for(log2_target: f64, k: u32, re_u_max: f64) -> usize {
    let need = -log2_target * LN_2 + 20.0;
    let mut sq: f64 = need / (2.0 * PI * 0.9);
    for _ in 0..6 {
        let growth = (re_u_max.abs() / 2.0 + k as f64) * (sq * sq + 1.0).ln();
        sq = (need + growth) / (2.0 * PI * 0.9);
    }
    (sq * sq).ceil() as usize + 32
}

/// ζ_k(s) for complex s ≠ k/2 (ζ_0 = 0 by convention).
pub fn zeta_k(k: u32, s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    zeta_k_prec(k, s, ctx.work_prec(), ctx.tol)
}

pub(crate) fn zeta_k_prec(k: u32, s: &Complex, prec: u32, tol: f64) -> Result<Complex> {
    if k == 0 {
        return Ok(Complex::zero(prec));
    }
    let kh = k as f64 / 2.0;
    let dist_pole = (&s.add_real(&Float::with_val(s.prec().max(64), -kh))).abs_f64();
    if dist_pole == 0.0 {
        return Err(Error::PoleAt(format!("ζ_{k} at s = {kh}")));
    }
    let im = s.im.to_f64().abs();
    let mut guard = (2.3 * im).ceil() as u32 + 16;
    if dist_pole < 1.0 {
        guard += (-dist_pole.log2()).ceil() as u32 + 10;
    }
    let p = prec + guard;
    let s = s.to_prec(p);
    let lnpi = Float::with_val(p, Constant::Pi).ln();
    let pref = (&s.scale(&lnpi).exp() * &recip_gamma(&s, p)).scale(&Float::with_val(p, 2));
    let sre = s.re.to_f64();
    // pair (L, L+1) when s is near L/2
    let pair = (1..k).find(|&l| {
        let d = s.add_real(&Float::with_val(p, -(l as f64) / 2.0));
        d.abs_f64() < PAIR_RADIUS
    });
    // absolute target for each Bessel sum, referred to the prefactor 2P(s)
    let log2_tol = (tol / 1e3).log2() - ((k as f64).log2() + 1.0);
    let log2_target = log2_tol - pref.log2_abs().max(-200.0) - 1.0;
    let plan = Plan { k, prec: p, log2_target };
    let re_u_max = sre.abs() + kh;
    let qmax = qmax_for(log2_target, k, re_u_max);
    let tables = if k >= 2 { rk_convolution_all(k - 1, qmax)? } else { Vec::new() };

    let mut total = Complex::zero(p);
    for level in 1..=k {
        let shift = Float::with_val(p, -((level - 1) as f64) / 2.0);
        let u = s.add_real(&shift);
        let f_term = if pair == Some(level) {
            let delta = s.add_real(&Float::with_val(p, -(level as f64) / 2.0));
            Some(&pref * &completed_riemann_pair(&delta, p)?)
        } else if level >= 2 && pair == Some(level - 1) {
            None
        } else if level == 1 {
            let two = Float::with_val(p, 2);
            Some(zeta_at(&s.scale(&two), p)?.scale(&two))
        } else if pref.re.is_zero() && pref.im.is_zero() {
            Some(Complex::zero(p))
        } else {
            Some(&pref * &completed_riemann(&u, p)?)
        };
        if let Some(t) = f_term {
            total = &total + &t;
        }
        if level >= 2 {
            let b = plan.bessel_sum(level, &u, &tables, qmax)?;
            total = &total + &(&pref * &b).scale(&Float::with_val(p, 2));
        }
    }
    Ok(total.to_prec(prec))
}

/// Brute-force Dirichlet sum Σ_{n≤N} r_k(n) n^{-s} for Re s > k/2 + 1, with the
/// heuristic tail estimate 2·(π^{k/2}/Γ(k/2))·N^{k/2−σ}/(σ − k/2).
pub fn zeta_k_direct(k: u32, s: &Complex, n: usize, ctx: &PrecisionContext) -> Result<SeriesResult<Complex>> {
    let kh = k as f64 / 2.0;
    let sigma = s.re.to_f64();
    if k == 0 || sigma <= kh + 1.0 {
        return Err(Error::NonConvergent(format!("direct ζ_{k} sum needs Re s > {}", kh + 1.0)));
    }
    let p = ctx.work_prec();
    let r = rk_convolution(k, n)?;
    let s = s.to_prec(p);
    let mut acc = Complex::zero(p);
    for m in 1..=n {
        let rv = r.values[m];
        if rv == 0 {
            continue;
        }
        let l = Float::with_val(p, m).ln();
        acc = &acc + &(-&s.scale(&l)).exp().scale(&Float::with_val(p, rv));
    }
    let vol = PI.powf(kh) / gamma_f64(kh);
    let tail = 2.0 * vol * (n as f64).powf(kh - sigma) / (sigma - kh);
    Ok(SeriesResult { value: acc, terms_used: n as u64, tail_bound: tail, bound_kind: BoundKind::Heuristic })
}

fn gamma_f64(x: f64) -> f64 {
    let v = crate::specfun::gamma::gamma_real(&Float::with_val(64, x)).expect("positive argument");
    v.to_f64()
}

/// ζ_k(σ) for real σ, memoised on (k, σ, prec, tol). Tail corrections ask for the
/// same handful of values from both sides of every identity and every grid point.
fn zeta_k_real_cached(k: u32, sigma: &Float, prec: u32, tol: f64) -> Result<Float> {
    type Cache = Mutex<HashMap<(u32, u64, u32, u64), Float>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let sf = sigma.to_f64();
    if Float::with_val(sigma.prec(), sf) != *sigma {
        let s = Complex::from_real(&Float::with_val(prec, sigma));
        return Ok(zeta_k_prec(k, &s, prec, tol)?.re);
    }
    let key = (k, sf.to_bits(), prec, tol.to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let value = zeta_k_prec(k, &Complex::from_real(&Float::with_val(prec, sf)), prec, tol)?.re;
    cache.lock().unwrap().insert(key, value.clone());
    Ok(value)
}

/// Upper bound on Σ_{n>M} r_k(n) n^{-σ} for σ > k/2. The lattice-point count
/// A(x) ≤ V_k (√x + √k/2)^k, V_k the unit-ball volume, integrated by parts gives
/// V_k (1 + √(k/4M))^k σ M^{k/2−σ} / (σ − k/2).
pub fn lattice_remainder_bound(k: u32, sigma: f64, m: usize) -> f64 {
    let kh = k as f64 / 2.0;
    let mf = m as f64;
    let vol = PI.powf(kh) / gamma_f64(kh + 1.0);
    let widen = (1.0 + (kh / 2.0 / mf).sqrt()).powi(k as i32);
    vol * widen * sigma * (-(sigma - kh) * mf.ln()).exp() / (sigma - kh)
}

/// Largest cut the direct route of [`lattice_tail`] accepts.
fn direct_limit(n: usize) -> usize {
    (8 * n).max(4000)
}

/// Cut M ≥ n at which summing r_k(m) m^{-σ} directly up to M leaves less than `tol`,
/// when that M is small enough to be worth it.
pub fn lattice_direct_cut(k: u32, sigma: f64, n: usize, tol: f64) -> Option<usize> {
    if !(sigma > k as f64 / 2.0 + 0.5) || !(tol > 0.0) {
        return None;
    }
    let limit = direct_limit(n);
    let mut m = n.max(1);
    while lattice_remainder_bound(k, sigma, m) >= tol {
        if m >= limit {
            return None;
        }
        m = (m + m / 4 + 1).min(limit);
    }
    Some(m)
}

fn dirichlet_partial(sigma: &Float, values: &[u64], from: usize, to: usize, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for m in from..=to {
        let rv = values[m];
        if rv == 0 {
            continue;
        }
        let l = Float::with_val(prec, m).ln();
        acc += Float::with_val(prec, -Float::with_val(prec, sigma * l)).exp() * rv;
    }
    acc
}

/// Σ_{n>N} r_k(n) n^{-σ} for real σ > k/2, to absolute accuracy `tol`.
///
/// Large σ: summed directly to a cut from [`lattice_remainder_bound`]. Otherwise
/// ζ_k(σ) − Σ_{n≤N}, where `prec` and `tol` must already carry the guard needed for
/// the cancellation.
pub fn lattice_tail(k: u32, sigma: &Float, table: &RkTable, n: usize, prec: u32, tol: f64) -> Result<Float> {
    if let Some(m) = lattice_direct_cut(k, sigma.to_f64(), n, tol / 2.0) {
        let wide;
        let values = if table.values.len() > m {
            &table.values
        } else {
            wide = rk_convolution(k, m)?;
            &wide.values
        };
        return Ok(dirichlet_partial(sigma, values, n + 1, m, prec));
    }
    let z = zeta_k_real_cached(k, sigma, prec, tol)?;
    Ok(z - dirichlet_partial(sigma, &table.values, 1, n, prec))
}

/// η_k(s) = π^{-s} Γ(s) ζ_k(s).
pub fn eta_k(k: u32, s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.work_prec();
    let s = s.to_prec(p);
    let lnpi = Float::with_val(p, Constant::Pi).ln();
    let a = (-&s.scale(&lnpi)).exp();
    let g = gamma(&s, p)?;
    let z = zeta_k(k, &s, ctx)?;
    Ok(&(&a * &g) * &z)
}

/// |η_k(s) − η_k(k/2 − s)| / max(|η_k(s)|, |η_k(k/2 − s)|).
pub fn functional_equation_residual(k: u32, s: &Complex, ctx: &PrecisionContext) -> Result<f64> {
    let p = ctx.work_prec();
    let refl = Complex::with_val(p, k as f64 / 2.0, 0.0);
    let a = eta_k(k, s, ctx)?;
    let b = eta_k(k, &(&refl - &s.to_prec(p)), ctx)?;
    let diff = (&a - &b).abs();
    let scale = a.abs().max(&b.abs()).clone();
    if scale.is_zero() {
        return Ok(0.0);
    }
    Ok((diff / scale).to_f64())
}
