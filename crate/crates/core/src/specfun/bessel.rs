//! Modified Bessel functions of the second kind.

use std::f64::consts::LN_2;

use rug::float::Constant;
use rug::Float;

use super::gamma::euler_gamma;
use crate::error::{Error, Result};
use crate::numkernel::{log2_abs, Complex, PrecisionContext};

/// Argument above which the large-x expansion is used for K_0, K_1 at `prec` bits.
/// Its optimal-truncation error is about e^{-2x}, so the switch point grows with precision.
pub fn asymptotic_threshold(prec: u32) -> f64 {
    ((prec as f64 + 12.0) * LN_2 / 2.0 + 2.0).max(8.0)
}

/// K_0(x), K_1(x) by the ascending series, with guard bits for the e^{2x} cancellation.
pub fn k01_series(x: &Float, prec: u32) -> (Float, Float) {
    let xf = x.to_f64();
    let guard = (2.0 * xf / LN_2).ceil() as u32 + 24;
    let p = prec + guard;
    let x = Float::with_val(p, x);
    let half_x = Float::with_val(p, &x / 2u32);
    let t = Float::with_val(p, half_x.square_ref());
    let g = euler_gamma(p);
    let ln_half = Float::with_val(p, half_x.ln_ref());
    // a_m = t^m/(m!)^2, b_m = t^m/(m!(m+1)!)
    let mut a = Float::with_val(p, 1);
    let mut i0 = Float::with_val(p, 1);
    let mut i1s = Float::with_val(p, 1);
    let mut h = Float::new(p); // H_m
    let mut s0 = Float::new(p); // Σ H_m a_m
    // Σ (H_m + H_{m+1} − 2γ) b_m, m ≥ 0
    let mut s1 = Float::with_val(p, 1) - Float::with_val(p, &g * 2u32);
    let stop = -(p as f64) - 4.0;
    let mut m = 1u64;
    loop {
        a *= &t;
        a /= m * m;
        h += Float::with_val(p, m).recip();
        let b = Float::with_val(p, &a / (m + 1));
        i0 += &a;
        i1s += &b;
        s0 += Float::with_val(p, &h * &a);
        let h1 = Float::with_val(p, &h + Float::with_val(p, m + 1).recip());
        let c = Float::with_val(p, &h + &h1) - Float::with_val(p, &g * 2u32);
        s1 += c * &b;
        if (m as f64) > xf && log2_abs(&a) + log2_abs(&h).max(0.0) + 4.0 < stop + log2_abs(&i0) {
            break;
        }
        m += 1;
    }
    let k0 = -(Float::with_val(p, &ln_half + &g) * &i0) + s0;
    let i1 = Float::with_val(p, &half_x * &i1s);
    let k1 = Float::with_val(p, x.recip_ref()) + Float::with_val(p, &ln_half * &i1)
        - Float::with_val(p, &half_x / 2u32) * s1;
    (Float::with_val(prec, k0), Float::with_val(prec, k1))
}

/// Large-x expansion √(π/2x) e^{-x} Σ a_j(ν) x^{-j}; returns None if the
/// terms stop decreasing before reaching the precision target.
pub fn k_asymptotic(nu: f64, x: &Float, prec: u32) -> Option<Float> {
    let p = prec + 16;
    let x = Float::with_val(p, x);
    let mu = Float::with_val(p, 4.0 * nu * nu);
    let mut term = Float::with_val(p, 1);
    let mut sum = Float::with_val(p, 1);
    let stop = -(prec as f64) - 8.0;
    let mut prev = 0.0;
    let mut j = 1u64;
    loop {
        let odd = Float::with_val(p, (2 * j - 1) * (2 * j - 1));
        term *= Float::with_val(p, &mu - &odd);
        term /= Float::with_val(p, &x * (8 * j));
        let lt = log2_abs(&term);
        if term.is_zero() || lt < stop {
            break;
        }
        if j > 2 && lt > prev {
            return None;
        }
        prev = lt;
        sum += &term;
        j += 1;
    }
    let pi = Float::with_val(p, Constant::Pi);
    let pref = (pi / Float::with_val(p, &x * 2u32)).sqrt() * Float::with_val(p, -&x).exp();
    Some(Float::with_val(prec, pref * sum))
}

pub fn k0_k1(x: &Float, prec: u32) -> (Float, Float) {
    if x.to_f64() >= asymptotic_threshold(prec) {
        if let (Some(a), Some(b)) = (k_asymptotic(0.0, x, prec), k_asymptotic(1.0, x, prec)) {
            return (a, b);
        }
    }
    k01_series(x, prec)
}

/// K_0..K_n at a common argument by upward recurrence (stable for K).
pub fn k_integer_sequence(n: u32, x: &Float, prec: u32) -> Vec<Float> {
    let p = prec + 16;
    let (k0, k1) = k0_k1(x, p);
    let mut out = vec![k0, k1];
    let two_over_x = Float::with_val(p, 2u32) / Float::with_val(p, x);
    for m in 1..n {
        let next = Float::with_val(p, &out[m as usize - 1])
            + Float::with_val(p, &two_over_x * m) * &out[m as usize];
        out.push(next);
    }
    out.truncate(n as usize + 1);
    out.into_iter().map(|v| Float::with_val(prec, v)).collect()
}

/// K_{m+1/2}(x) in closed form.
pub fn k_half_integer(m: u32, x: &Float, prec: u32) -> Float {
    let p = prec + 16;
    let x = Float::with_val(p, x);
    let inv2x = Float::with_val(p, &x * 2u32).recip();
    let mut c = Float::with_val(p, 1);
    let mut sum = Float::with_val(p, 1);
    let mut pw = Float::with_val(p, 1);
    for i in 1..=m as u64 {
        c *= (m as u64 + i) * (m as u64 - i + 1);
        c /= i;
        pw *= &inv2x;
        sum += Float::with_val(p, &c * &pw);
    }
    let pi = Float::with_val(p, Constant::Pi);
    let pref = (pi * &inv2x).sqrt() * Float::with_val(p, -&x).exp();
    Float::with_val(prec, pref * sum)
}

/// K_ν(x) for real ν ≥ 0, x > 0, relative error about ctx.tol or better.
pub fn bessel_k(nu: f64, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !(x.is_finite() && x.is_sign_positive() && !x.is_zero()) {
        return Err(Error::DomainError(format!("K_ν needs x > 0, got {}", x.to_f64())));
    }
    let nu = nu.abs();
    let prec = ctx.work_prec();
    let two_nu = 2.0 * nu;
    if two_nu.fract() == 0.0 && two_nu < 1e6 {
        let n = two_nu as u32;
        if n % 2 == 1 {
            return Ok(k_half_integer(n / 2, x, prec));
        }
        let seq = k_integer_sequence((n / 2).max(1), x, prec);
        return Ok(seq[(n / 2) as usize].clone());
    }
    let order = Complex::from_real(&Float::with_val(prec, nu));
    let mut q = BesselKOrder::new(order, prec);
    let target = log2_abs(&Float::with_val(prec, x.to_f64().min(700.0)).exp().recip()) + ctx.log2_tol() - 8.0;
    Ok(q.eval(x, target)?.re)
}

/// K_w(z) = ∫₀^∞ e^{-z cosh t} cosh(w t) dt for a fixed (complex) order and many
/// real arguments, by the trapezoidal rule with step halving.  The integrand is
/// entire and decays doubly exponentially, so the rule converges geometrically
/// in 1/h; cosh(w t) is tabulated once per order.
pub struct BesselKOrder {
    w: Complex,
    prec: u32,
    // per level: (t, cosh t, cosh(w t))
    levels: Vec<Vec<(f64, Float, Complex)>>,
    last_index: Vec<i64>,
    t_built: f64,
    min_level: usize,
}

const KQ_H0: f64 = 0.5;

impl BesselKOrder {
    pub fn new(w: Complex, prec: u32) -> Self {
        let im = w.im.to_f64().abs();
        // guard against the e^{-π|Im w|/2} cancellation in the oscillatory integrand
        let prec = prec + (1.5 * im).ceil() as u32 + 16;
        let w = w.to_prec(prec);
        // sample the oscillation cosh(i·Im(w)·t) at least a few times per period
        let mut min_level = 2;
        while KQ_H0 / ((1u64 << min_level) as f64) > 1.0 / (1.0 + im) {
            min_level += 1;
        }
        BesselKOrder { w, prec, levels: Vec::new(), last_index: Vec::new(), t_built: 0.0, min_level }
    }

    pub fn order(&self) -> &Complex {
        &self.w
    }

    fn step(level: usize) -> f64 {
        KQ_H0 / (1u64 << level) as f64
    }

    fn make_node(&self, t: f64) -> (f64, Float, Complex) {
        let p = self.prec;
        let tf = Float::with_val(p, t);
        let ch = Float::with_val(p, tf.cosh_ref());
        let wt = self.w.scale(&tf);
        (t, ch, wt.cosh())
    }

    fn ensure(&mut self, level: usize, t_max: f64) {
        let target = t_max.max(self.t_built);
        while self.levels.len() <= level {
            self.levels.push(Vec::new());
            self.last_index.push(-1);
        }
        for l in 0..=level {
            let h = Self::step(l);
            let end = (target / h).ceil() as i64;
            for j in self.last_index[l] + 1..=end {
                if l == 0 || j % 2 == 1 {
                    let node = self.make_node(j as f64 * h);
                    self.levels[l].push(node);
                }
            }
            self.last_index[l] = self.last_index[l].max(end);
        }
        self.t_built = target;
    }

    /// Truncation point: z(cosh t − 1) − |Re w| t exceeds the needed dynamic range.
    fn t_max(&self, z: f64, bits: f64) -> f64 {
        let rw = self.w.re.to_f64().abs();
        let need = bits * LN_2 + 10.0;
        let mut t: f64 = 0.5;
        while z * (t.cosh() - 1.0) - rw * t < need {
            t += 0.25;
            if t > 60.0 {
                break;
            }
        }
        t
    }

    /// K_w(z) to absolute error 2^{log2_target}.
    pub fn eval(&mut self, z: &Float, log2_target: f64) -> Result<Complex> {
        let p = self.prec;
        let zf = z.to_f64();
        // dynamic range between the integrand peak e^{-z} and the target
        let bits = (-log2_target - zf / LN_2).max(16.0) + 8.0;
        let tm = self.t_max(zf, bits);
        let z = Float::with_val(p, z);
        let mut total = Complex::zero(p);
        let mut prev: Option<Complex> = None;
        for level in 0..=24usize {
            self.ensure(level, tm);
            let h = Self::step(level);
            let mut part = Complex::zero(p);
            for (t, ch, cw) in &self.levels[level] {
                if *t > tm {
                    continue;
                }
                let e = Float::with_val(p, -(Float::with_val(p, &z * ch))).exp();
                let v = cw.scale(&e);
                if *t == 0.0 {
                    let half = Float::with_val(p, 0.5);
                    part = &part + &v.scale(&half);
                } else {
                    part = &part + &v;
                }
            }
            total = &total + &part;
            let est = total.scale(&Float::with_val(p, h));
            if let Some(pv) = &prev {
                if level >= self.min_level && (&est - pv).log2_abs() < log2_target {
                    return Ok(est);
                }
            }
            prev = Some(est);
        }
        Err(Error::QuadratureNotConverged(format!("K_w({zf}) trapezoid")))
    }
}

/// K_w(z) for complex order, real z > 0.
pub fn bessel_k_complex(w: &Complex, z: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    if !(z.is_sign_positive() && !z.is_zero()) {
        return Err(Error::DomainError("K_w needs z > 0".into()));
    }
    let mut q = BesselKOrder::new(w.clone(), ctx.work_prec());
    let scale = -z.to_f64() / LN_2;
    q.eval(z, scale + ctx.log2_tol() - 8.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn rel(a: &Float, b: &Float) -> f64 {
        (Float::with_val(a.prec(), a - b) / b).abs().to_f64()
    }

    #[test]
    fn half_order_closed_form() {
        let c = ctx();
        let p = c.work_prec();
        let x = Float::with_val(p, 1);
        let k = bessel_k(0.5, &x, &c).unwrap();
        let pi = Float::with_val(p, Constant::Pi);
        let expect = (pi / 2u32).sqrt() * Float::with_val(p, -1).exp();
        assert!(rel(&k, &expect) < 1e-70);
    }

    #[test]
    fn k0_small_argument_log_behaviour() {
        let c = ctx();
        let p = c.work_prec();
        let x = Float::with_val(p, 1e-6);
        let k = bessel_k(0.0, &x, &c).unwrap();
        let approx = -(Float::with_val(p, &x / 2u32).ln()) - euler_gamma(p);
        // next term is O(x² log x)
        assert!(Float::with_val(p, &k - &approx).abs().to_f64() < 1e-10);
    }

    #[test]
    fn series_and_quadrature_agree() {
        let c = ctx();
        let p = c.work_prec();
        for &x in &[0.3, 2.0, 7.0, 15.0] {
            let xf = Float::with_val(p, x);
            let (k0, k1) = k01_series(&xf, p);
            let mut q0 = BesselKOrder::new(Complex::zero(p), p);
            let mut q1 = BesselKOrder::new(Complex::one(p), p);
            let target = -x / LN_2 - 100.0;
            assert!(rel(&k0, &q0.eval(&xf, target).unwrap().re) < 1e-26, "K0 x={x}");
            assert!(rel(&k1, &q1.eval(&xf, target).unwrap().re) < 1e-26, "K1 x={x}");
        }
    }

    #[test]
    fn branches_overlap_near_threshold() {
        let p = 256;
        let xc = asymptotic_threshold(p);
        for &dx in &[-4.0, 0.0, 4.0] {
            let x = Float::with_val(p + 64, xc + dx);
            let (s0, s1) = k01_series(&x, p + 64);
            let a0 = k_asymptotic(0.0, &x, p).unwrap();
            let a1 = k_asymptotic(1.0, &x, p).unwrap();
            assert!(rel(&a0, &s0) < 1e-60);
            assert!(rel(&a1, &s1) < 1e-60);
        }
    }

    #[test]
    fn integer_recurrence_matches_quadrature() {
        let p = 256;
        let x = Float::with_val(p, 3.5);
        let seq = k_integer_sequence(6, &x, p);
        let mut q = BesselKOrder::new(Complex::with_val(p, 6.0, 0.0), p);
        let v = q.eval(&x, -120.0).unwrap().re;
        assert!(rel(&seq[6], &v) < 1e-30);
    }

    #[test]
    fn half_integer_matches_quadrature() {
        let p = 256;
        let x = Float::with_val(p, 2.25);
        let k = k_half_integer(3, &x, p);
        let mut q = BesselKOrder::new(Complex::with_val(p, 3.5, 0.0), p);
        let v = q.eval(&x, -120.0).unwrap().re;
        assert!(rel(&k, &v) < 1e-30);
    }

    #[test]
    fn complex_order_is_even_and_conjugate_symmetric() {
        let c = ctx();
        let p = c.work_prec();
        let z = Float::with_val(p, 6.3);
        let w = Complex::with_val(p, 0.7, 3.0);
        let a = bessel_k_complex(&w, &z, &c).unwrap();
        let b = bessel_k_complex(&(-&w), &z, &c).unwrap();
        let d = bessel_k_complex(&w.conj(), &z, &c).unwrap();
        assert!((&a - &b).abs_f64() < 1e-30);
        assert!((&a.conj() - &d).abs_f64() < 1e-30);
    }

    #[test]
    fn domain_error_for_nonpositive_argument() {
        let c = ctx();
        assert!(matches!(bessel_k(0.0, &Float::with_val(64, 0), &c), Err(Error::DomainError(_))));
    }
}
