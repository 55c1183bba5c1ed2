//! Γ and ψ for complex arguments, Euler's constant, Bernoulli numbers.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numkernel::{log2_abs, Complex};

/// Euler–Mascheroni constant at `prec` bits, memoised per precision.
pub fn euler_gamma(prec: u32) -> Float {
    static CACHE: OnceLock<Mutex<HashMap<u32, Float>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    // computed outside the lock; concurrent fills store identical values
    let v = brent_mcmillan(prec);
    cache.lock().unwrap().entry(prec).or_insert_with(|| v.clone());
    v
}

fn brent_mcmillan(prec: u32) -> Float {
    let p = prec + 32;
    // error ~ π e^{-4n}
    let n = ((p as f64) * std::f64::consts::LN_2 / 4.0).ceil() as u64 + 2;
    let n2 = Float::with_val(p, n * n);
    let mut a = -Float::with_val(p, n).ln();
    let mut b = Float::with_val(p, 1);
    let mut u = a.clone();
    let mut v = b.clone();
    let mut k = 1u64;
    loop {
        b *= &n2;
        b /= k * k;
        a *= &n2;
        a /= k;
        a += &b;
        a /= k;
        u += &a;
        v += &b;
        if k > n && log2_abs(&b) < log2_abs(&v) - p as f64 - 8.0 {
            break;
        }
        k += 1;
    }
    Float::with_val(prec, u / v)
}

/// Tangent numbers T_1..T_m (Brent–Harvey), memoised.
fn tangent_numbers(m: usize) -> Vec<Integer> {
    static CACHE: OnceLock<Mutex<Vec<Integer>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    {
        let c = cache.lock().unwrap();
        if c.len() >= m {
            return c[..m].to_vec();
        }
    }
    let size = m.max(16).next_power_of_two();
    let mut t = vec![Integer::new(); size + 1];
    t[1] = Integer::from(1);
    for k in 2..=size {
        t[k] = Integer::from(&t[k - 1] * (k as u64 - 1));
    }
    for k in 2..=size {
        for j in k..=size {
            let a = Integer::from(&t[j - 1] * (j as u64 - k as u64));
            let b = Integer::from(&t[j] * (j as u64 - k as u64 + 2));
            t[j] = a + b;
        }
    }
    let vals: Vec<Integer> = t[1..].to_vec();
    let mut c = cache.lock().unwrap();
    if c.len() < vals.len() {
        *c = vals.clone();
    }
    vals[..m].to_vec()
}

/// B_{2n} for n = 1..=m as floats.
pub fn bernoulli_even(m: usize, prec: u32) -> Vec<Float> {
    let t = tangent_numbers(m);
    (1..=m)
        .map(|n| {
            // B_{2n} = (-1)^{n-1} 2n T_n / (4^n (4^n - 1))
            let four_n = Integer::from(Integer::u_pow_u(4, n as u32));
            let den = Integer::from(&four_n * Integer::from(&four_n - 1u32));
            let num = Integer::from(&t[n - 1] * (2 * n as u64));
            let mut v = Float::with_val(prec, &num) / Float::with_val(prec, &den);
            if n % 2 == 0 {
                v = -v;
            }
            v
        })
        .collect()
}

fn is_nonpositive_integer(z: &Complex) -> bool {
    z.im.is_zero() && z.re.is_integer() && !z.re.is_sign_positive()
        || z.im.is_zero() && z.re.is_zero()
}

/// Shift count so that |z + n| ≥ r.
fn shift_for(z: &Complex, r: f64) -> u64 {
    let re = z.re.to_f64();
    let im = z.im.to_f64();
    if re * re + im * im >= r * r {
        return 0;
    }
    let need = (r * r - im * im).max(0.0).sqrt() - re;
    need.ceil().max(0.0) as u64
}

fn stirling_radius(prec: u32) -> f64 {
    (0.2 * prec as f64).max(12.0)
}

/// log Γ(w) by the Stirling series; requires |w| large and Re w > 0.
fn ln_gamma_stirling(w: &Complex, prec: u32) -> Complex {
    let p = prec;
    let half = Float::with_val(p, 0.5);
    let ln_w = w.ln();
    let ln2pi = Float::with_val(p, Constant::Pi) * 2u32;
    let ln2pi = ln2pi.ln() * &half;
    let mut acc = &(&w.add_real(&-half.clone()) * &ln_w) - w;
    acc = acc.add_real(&ln2pi);
    let w_inv = w.recip();
    let w_inv2 = w_inv.square();
    let mut pw = w_inv.clone();
    let target = -(p as f64) - 10.0 + acc.log2_abs().max(0.0);
    let mut m = 1usize;
    let mut bern = bernoulli_even(64, p);
    loop {
        if m > bern.len() {
            bern = bernoulli_even(bern.len() * 2, p);
        }
        let coef = Float::with_val(p, &bern[m - 1] / ((2 * m * (2 * m - 1)) as u64));
        let term = pw.scale(&coef);
        let lt = term.log2_abs();
        acc = &acc + &term;
        if lt < target {
            break;
        }
        pw = &pw * &w_inv2;
        m += 1;
        if m > 4 * prec as usize {
            break;
        }
    }
    acc
}

/// Γ(z) for complex z.
pub fn gamma(z: &Complex, prec: u32) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAt(format!("Γ at {}", z.re.to_f64())));
    }
    let p = prec + 32;
    let z = z.to_prec(p);
    let half = Float::with_val(p, 0.5);
    if z.re < half {
        // Γ(z) = π / (sin(πz) Γ(1−z))
        let one = Complex::one(p);
        let g = gamma(&(&one - &z), prec)?;
        let s = z.times_pi().sin();
        let pi = Complex::from_real(&Float::with_val(p, Constant::Pi));
        return Ok((&pi / &(&s * &g)).to_prec(prec));
    }
    let n = shift_for(&z, stirling_radius(prec));
    let w = z.add_real(&Float::with_val(p, n));
    let lg = ln_gamma_stirling(&w, p);
    let mut g = lg.exp();
    if n > 0 {
        let mut prod = z.clone();
        for j in 1..n {
            prod = &prod * &z.add_real(&Float::with_val(p, j));
        }
        g = &g / &prod;
    }
    Ok(g.to_prec(prec))
}

/// Γ(x) for real x.
pub fn gamma_real(x: &Float) -> Result<Float> {
    Ok(gamma(&Complex::from_real(x), x.prec())?.re)
}

/// 1/Γ(z), entire: zero at the non-positive integers.
pub fn recip_gamma(z: &Complex, prec: u32) -> Complex {
    if is_nonpositive_integer(z) {
        return Complex::zero(prec);
    }
    gamma(z, prec).expect("poles excluded").recip()
}

/// ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: &Complex, prec: u32) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAt(format!("ψ at {}", z.re.to_f64())));
    }
    let p = prec + 32;
    let z = z.to_prec(p);
    let half = Float::with_val(p, 0.5);
    if z.re < half {
        // ψ(z) = ψ(1−z) − π cot(πz)
        let one = Complex::one(p);
        let d = digamma(&(&one - &z), prec)?.to_prec(p);
        let c = z.times_pi().cot().times_pi();
        return Ok((&d - &c).to_prec(prec));
    }
    let n = shift_for(&z, stirling_radius(prec));
    let w = z.add_real(&Float::with_val(p, n));
    // ψ(w) = ln w − 1/(2w) − Σ B_{2m} / (2m w^{2m})
    let w_inv = w.recip();
    let mut acc = &w.ln() - &w_inv.scale(&half);
    let w_inv2 = w_inv.square();
    let mut pw = w_inv2.clone();
    let target = -(p as f64) - 10.0;
    let mut bern = bernoulli_even(64, p);
    let mut m = 1usize;
    loop {
        if m > bern.len() {
            bern = bernoulli_even(bern.len() * 2, p);
        }
        let coef = Float::with_val(p, &bern[m - 1] / (2 * m as u64));
        let term = pw.scale(&coef);
        let lt = term.log2_abs();
        acc = &acc - &term;
        if lt < target || m > 4 * prec as usize {
            break;
        }
        pw = &pw * &w_inv2;
        m += 1;
    }
    for j in 0..n {
        acc = &acc - &z.add_real(&Float::with_val(p, j)).recip();
    }
    Ok(acc.to_prec(prec))
}

pub fn digamma_real(x: &Float) -> Result<Float> {
    Ok(digamma(&Complex::from_real(x), x.prec())?.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn rel(a: &Float, b: &Float) -> f64 {
        (Float::with_val(P, a - b) / b).abs().to_f64()
    }

    #[test]
    fn euler_gamma_matches_mpfr() {
        let g = euler_gamma(P);
        let oracle = Float::with_val(P, Constant::Euler);
        assert!(rel(&g, &oracle) < 1e-74);
    }

    #[test]
    fn bernoulli_leading_values() {
        let b = bernoulli_even(4, P);
        assert!(rel(&b[0], &Float::with_val(P, 1.0 / 6.0)) < 1e-15);
        assert!(rel(&b[1], &Float::with_val(P, -1.0 / 30.0)) < 1e-15);
        assert!(rel(&b[2], &Float::with_val(P, 1.0 / 42.0)) < 1e-15);
        assert!(rel(&b[3], &Float::with_val(P, -1.0 / 30.0)) < 1e-15);
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = gamma_real(&Float::with_val(P, 0.5)).unwrap();
        let sp = Float::with_val(P, Constant::Pi).sqrt();
        assert!(rel(&g, &sp) < 1e-70);
    }

    #[test]
    fn gamma_real_against_mpfr() {
        for &x in &[0.1, 1.7, 3.25, 12.5, 57.0, -2.5] {
            let xf = Float::with_val(P, x);
            let g = gamma_real(&xf).unwrap();
            let oracle = Float::with_val(P, xf.gamma_ref());
            assert!(rel(&g, &oracle) < 1e-70, "x={x}");
        }
    }

    #[test]
    fn gamma_pole_reported() {
        assert!(matches!(gamma_real(&Float::with_val(P, -3)), Err(Error::PoleAt(_))));
        assert!(matches!(gamma_real(&Float::with_val(P, 0)), Err(Error::PoleAt(_))));
    }

    #[test]
    fn digamma_special_values() {
        let g = euler_gamma(P);
        let d1 = digamma_real(&Float::with_val(P, 1)).unwrap();
        assert!(rel(&d1, &Float::with_val(P, -&g)) < 1e-70);
        let dh = digamma_real(&Float::with_val(P, 0.5)).unwrap();
        let expect = -(Float::with_val(P, Constant::Log2) * 2u32) - &g;
        assert!(rel(&dh, &expect) < 1e-70);
    }

    #[test]
    fn digamma_against_mpfr() {
        for &x in &[0.3, 2.0, 7.75, -1.5] {
            let xf = Float::with_val(P, x);
            let d = digamma_real(&xf).unwrap();
            let oracle = Float::with_val(P, xf.digamma_ref());
            assert!(rel(&d, &oracle) < 1e-68, "x={x}");
        }
    }

    #[test]
    fn complex_recurrence_and_reflection() {
        let z = Complex::with_val(P, 0.3, 4.1);
        let g = gamma(&z, P).unwrap();
        let g1 = gamma(&z.add_real(&Float::with_val(P, 1)), P).unwrap();
        assert!(((&g1 - &(&z * &g)).abs() / g1.abs()).to_f64() < 1e-70);
        let one = Complex::one(P);
        let gr = gamma(&(&one - &z), P).unwrap();
        let lhs = &g * &gr;
        let pi = Complex::from_real(&Float::with_val(P, Constant::Pi));
        let rhs = &pi / &z.times_pi().sin();
        assert!(((&lhs - &rhs).abs() / rhs.abs()).to_f64() < 1e-70);
    }
}
