//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 9 reruns 1-5 at 512 bits / 1e-40 and compares every recorded error
//! against its default-precision value.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use ferrar_core::arith::{rk_convolution, rk_enumerate};
use ferrar_core::identities::{
    check_ferrar_classic, check_koshliakov_classic, check_koshliakov_k2, check_koshliakov_k4, check_popov, check_r2_ei,
    check_r3, check_theorem1, check_theorem2, check_watson, ferrar_side, koshliakov_classic_side_at,
    koshliakov_k2_side, koshliakov_k4_side, r2_side, r3_side, theorem1_side, theorem2_side, theorem2_side_at,
    watson_sides, IdentityReport,
};
use ferrar_core::mellin::{mb_k0, mb_whittaker, shift_residue_check, ContourSpec};
use ferrar_core::numkernel::Complex;
use ferrar_core::specfun::{euler_gamma, gamma_real, glaisher_a, k0_k1, phi_k, whittaker_w_scaled, WhittakerParams};
use ferrar_core::zetafn::{
    dirichlet_beta, functional_equation_residual, laurent_at_pole, riemann_zeta, zeta_k,
};
use ferrar_core::{PrecisionContext, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Named error measurements with their thresholds.
#[derive(Default)]
struct Record {
    errors: BTreeMap<String, (f64, f64)>,
    notes: Vec<String>,
}

impl Record {
    fn add(&mut self, label: impl Into<String>, err: f64, limit: f64) {
        self.errors.insert(label.into(), (err, limit));
    }

    fn report(&mut self, label: impl Into<String>, r: Result<IdentityReport>, limit: f64) {
        let label = label.into();
        match r {
            Ok(r) => self.add(label, r.rel_err_f64(), limit),
            Err(e) => {
                self.notes.push(format!("{label}: {e}"));
                self.add(label, f64::NAN, limit);
            }
        }
    }

    fn value(&mut self, label: impl Into<String>, r: Result<f64>, limit: f64) {
        let label = label.into();
        match r {
            Ok(v) => self.add(label, v, limit),
            Err(e) => {
                self.notes.push(format!("{label}: {e}"));
                self.add(label, f64::NAN, limit);
            }
        }
    }

    fn pass(&self) -> bool {
        self.notes.is_empty() && self.errors.values().all(|(e, l)| *e < *l)
    }

    fn worst(&self) -> (String, f64) {
        self.errors
            .iter()
            .map(|(k, (e, _))| (k.clone(), *e))
            .fold((String::new(), 0.0), |acc, (k, e)| if e.is_nan() || e > acc.1 { (k, e) } else { acc })
    }

    fn failures(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .errors
            .iter()
            .filter(|(_, (e, l))| !(*e < *l))
            .map(|(k, (e, l))| format!("{k}: {e:e} (limit {l:e})"))
            .collect();
        v.extend(self.notes.iter().cloned());
        v
    }
}

fn relative(a: &Float, b: &Float) -> f64 {
    let p = a.prec().max(b.prec());
    let scale = Float::with_val(p, a.abs_ref()).max(&Float::with_val(p, b.abs_ref())).max(&Float::with_val(p, 1));
    (Float::with_val(p, a - b).abs() / scale).to_f64()
}

fn route(r: &mut Record, label: &str, a: Result<Float>, b: Result<Float>, limit: f64) {
    let v = match (a, b) {
        (Ok(a), Ok(b)) => Ok(relative(&a, &b)),
        (Err(e), _) | (_, Err(e)) => Err(e),
    };
    r.value(label, v, limit);
}

const ALPHAS_1: [f64; 5] = [0.5, 0.8, 1.0, 1.3, 2.0];

fn criterion1(ctx: &PrecisionContext) -> (Record, Duration) {
    let t = Instant::now();
    let mut r = Record::default();
    for k in 1..=6 {
        let limit = if k >= 3 { 1e-9 } else { 1e-10 };
        for a in ALPHAS_1 {
            r.report(format!("theorem1 k={k} alpha={a}"), check_theorem1(k, a, ctx), limit);
        }
    }
    (r, t.elapsed())
}

fn criterion2(ctx: &PrecisionContext) -> (Record, Duration) {
    let t = Instant::now();
    let mut r = Record::default();
    for k in 1..=4 {
        for a in [1.0, 2.0, PI, 5.0] {
            r.report(format!("theorem2 k={k} alpha={a}"), check_theorem2(k, a, ctx), 1e-10);
        }
    }
    (r, t.elapsed())
}

fn criterion3(ctx: &PrecisionContext) -> Record {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let sqrt_pi = Float::with_val(p, pi.sqrt_ref());
    let mut r = Record::default();
    for a in [0.5, 1.3, 2.0] {
        r.report(format!("ferrar_classic alpha={a}"), check_ferrar_classic(a, ctx), 1e-9);
        route(&mut r, &format!("ferrar_classic route alpha={a}"), ferrar_side(a, ctx), theorem1_side(1, a, ctx), 1e-9);
    }
    for x in [0.5, 1.3, 2.0] {
        r.report(format!("koshliakov_classic x={x}"), check_koshliakov_classic(x, ctx), 1e-9);
        let xf = Float::with_val(p, x);
        let classic = koshliakov_classic_side_at(&xf, ctx).map(|v| v * Float::with_val(p, &sqrt_pi * 2u32));
        let general = theorem2_side_at(1, &Float::with_val(p, &pi * &xf), ctx);
        route(&mut r, &format!("koshliakov_classic route x={x}"), classic, general, 1e-9);
    }
    for a in [0.5, 0.9, 2.0] {
        r.report(format!("r2_ei alpha={a}"), check_r2_ei(a, ctx), 1e-9);
        let special = r2_side(a, ctx).map(|v| -(v * &sqrt_pi));
        route(&mut r, &format!("r2_ei route alpha={a}"), special, theorem1_side(2, a, ctx), 1e-9);
    }
    for a in [0.6, 1.2, 2.0] {
        r.report(format!("r3 alpha={a}"), check_r3(a, ctx), 1e-9);
        route(&mut r, &format!("r3 route alpha={a}"), r3_side(a, ctx), theorem1_side(3, a, ctx), 1e-9);
    }
    for a in [1.0, 2.0, 5.0] {
        r.report(format!("koshliakov_k2 alpha={a}"), check_koshliakov_k2(a, ctx), 1e-9);
        let general = theorem2_side(2, a, ctx).map(|v| v / 2u32);
        route(&mut r, &format!("koshliakov_k2 route alpha={a}"), koshliakov_k2_side(a, ctx), general, 1e-9);
        r.report(format!("koshliakov_k4 alpha={a}"), check_koshliakov_k4(a, ctx), 1e-9);
        route(&mut r, &format!("koshliakov_k4 route alpha={a}"), koshliakov_k4_side(a, ctx), theorem2_side(4, a, ctx), 1e-9);
    }
    r
}

fn criterion4(ctx: &PrecisionContext) -> Record {
    let p = ctx.work_prec();
    let mut r = Record::default();
    for k in 1..=3 {
        for nu in [0.5, 1.0, 2.5] {
            for beta in [0.5, 1.0, 3.0] {
                r.report(format!("popov k={k} nu={nu} beta={beta}"), check_popov(k, nu, beta, ctx), 1e-9);
            }
        }
    }
    for nu in [0.75, 1.5, 3.0] {
        for x in [0.5, 1.0, 4.0] {
            r.report(format!("watson nu={nu} x={x}"), check_watson(nu, x, ctx), 1e-9);
        }
    }
    // Σ_{n∈ℤ} 1/(n² + 1) = π coth π
    let pi = Float::with_val(p, Constant::Pi);
    let oracle = Float::with_val(p, pi.tanh_ref()).recip() * &pi;
    match watson_sides(1.0, 1.0, ctx) {
        Ok((lhs, rhs)) => {
            r.add("watson coth oracle lhs", relative(&lhs, &oracle), 1e-20);
            r.add("watson coth oracle rhs", relative(&rhs, &oracle), 1e-20);
        }
        Err(e) => r.value("watson coth oracle", Err(e), 1e-20),
    }
    r
}

fn criterion5(ctx: &PrecisionContext) -> Record {
    let p = ctx.work_prec();
    let pi = Float::with_val(p, Constant::Pi);
    let ln2 = Float::with_val(p, Constant::Log2);
    let gamma2 = euler_gamma(p) * 2u32;
    let mut r = Record::default();
    let mut constants = BTreeMap::new();
    for k in 1..=6u32 {
        match laurent_at_pole(k, ctx) {
            Ok(d) => {
                let limit = d.cross_check.clone().unwrap_or_else(|| Float::with_val(p, f64::NAN));
                r.add(format!("laurent k={k} closed vs limit"), relative(&d.constant, &limit), 1e-10);
                constants.insert(k, d.constant);
            }
            Err(e) => r.value(format!("laurent k={k} closed vs limit"), Err(e), 1e-10),
        }
    }
    if let Some(c1) = constants.get(&1) {
        r.add("laurent k=1 equals 2γ", Float::with_val(p, c1 - &gamma2).abs().to_f64(), 1e-20);
    }
    if let Some(c2) = constants.get(&2) {
        // η(i) = Γ(1/4) / (2π^{3/4})
        let eta = gamma_real(&Float::with_val(p, 0.25)).map(|g| {
            g / (Float::with_val(p, Pow::pow(&pi, &Float::with_val(p, 0.75))) * 2u32)
        });
        match eta {
            Ok(eta) => {
                let kron = Float::with_val(p, &pi) * (Float::with_val(p, &gamma2) - Float::with_val(p, &ln2 * 2u32) - eta.ln() * 4u32);
                r.add("laurent k=2 Kronecker value", Float::with_val(p, c2 - &kron).abs().to_f64(), 1e-15);
            }
            Err(e) => r.value("laurent k=2 Kronecker value", Err(e), 1e-15),
        }
    }
    let glaisher = glaisher_a(ctx);
    if let (Some(c4), Ok(a)) = (constants.get(&4), &glaisher) {
        let inner = Float::with_val(p, &gamma2) + Float::with_val(p, &pi * 2u32).ln() - Float::with_val(p, a.ln_ref()) * 12u32
            + Float::with_val(p, &ln2 * 2u32) / 3u32;
        let form = Float::with_val(p, pi.square_ref()) * inner;
        r.add("laurent k=4 Glaisher form", Float::with_val(p, c4 - &form).abs().to_f64(), 1e-12);
    }
    // Π_{m∈ℤ³∖0}(1 − e^{−2π|m|}) = exp(ζ₃(2)/2π²) A⁶ / (2^{4/3} √(2πe))
    let curious = (|| -> Result<f64> {
        let a = glaisher.clone()?;
        let lhs = phi_k(4, &Float::with_val(p, 1), ctx)?;
        let z3 = zeta_k(3, &Complex::with_val(p, 2.0, 0.0), ctx)?.re;
        let e = (z3 / (Float::with_val(p, pi.square_ref()) * 2u32)).exp();
        let two_pi_e = Float::with_val(p, &pi * 2u32) * Float::with_val(p, 1).exp();
        let denom = Float::with_val(p, Pow::pow(Float::with_val(p, 2), &(Float::with_val(p, 4) / 3u32))) * two_pi_e.sqrt();
        let rhs = e * Pow::pow(a, 6u32) / denom;
        Ok(relative(&lhs, &rhs))
    })();
    r.value("curious product identity", curious, 1e-12);
    r
}

fn criterion6(ctx: &PrecisionContext) -> Record {
    let p = ctx.work_prec();
    let mut r = Record::default();
    let mut rng = StdRng::seed_from_u64(0x5eed_f00d);
    for k in 1..=6u32 {
        let kh = k as f64 / 2.0;
        let mut n = 0;
        while n < 20 {
            let re = rng.gen_range(-1.0..kh + 1.0);
            let im = rng.gen_range(-10.0..=10.0);
            let near = |c: f64| ((re - c).powi(2) + im * im).sqrt() < 1e-2;
            if near(0.0) || near(kh) {
                continue;
            }
            let s = Complex::with_val(p, re, im);
            r.value(format!("k={k} s={re:.4}{im:+.4}i"), functional_equation_residual(k, &s, ctx), 1e-18);
            n += 1;
        }
    }
    r
}

fn criterion7(ctx: &PrecisionContext) -> Record {
    let p = ctx.work_prec();
    let mut r = Record::default();
    for x in [0.25, 1.0, 4.0, 16.0] {
        let direct = k0_k1(&Float::with_val(p, x), p).0;
        for mu in [0.5, 2.5] {
            let v = mb_k0(x, &ContourSpec::at(mu), ctx).map(|v| relative(&v, &direct) / direct.to_f64().min(1.0));
            r.value(format!("mb_k0 x={x} mu={mu}"), v, 1e-18);
        }
        for rho in [0.5, 1.0, 1.5] {
            let direct = whittaker_w_scaled(&WhittakerParams::new(-rho, 0.0, x), ctx);
            let mb = mb_whittaker(rho, 0.0, x, &ContourSpec::at(rho - 0.25), ctx);
            let v = match (mb, direct) {
                (Ok(a), Ok(b)) => Ok(relative(&a, &b) / b.to_f64().abs().min(1.0)),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
            r.value(format!("mb_whittaker rho={rho} x={x}"), v, 1e-18);
        }
    }
    let shift_ctx = PrecisionContext::new(128, 1e-18);
    for (k, x, mu) in [(1, 0.7, 0.6), (2, 1.0, 1.2), (4, 2.0, 2.3)] {
        r.value(format!("shift_residue_check k={k}"), shift_residue_check(k, x, mu, &shift_ctx), 1e-12);
    }
    r
}

fn criterion8(ctx: &PrecisionContext) -> Record {
    let p = ctx.work_prec();
    let mut r = Record::default();
    for k in 1..=6 {
        let same = match (rk_convolution(k, 2000), rk_enumerate(k, 2000)) {
            (Ok(a), Ok(b)) => Ok(if a.values == b.values { 0.0 } else { 1.0 }),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        r.value(format!("r_{k} convolution = enumeration, N=2000"), same, 0.5);
    }
    for s in [2.5, 3.0, 4.0] {
        let sc = Complex::with_val(p, s, 0.0);
        let two = (|| -> Result<f64> {
            let z2 = zeta_k(2, &sc, ctx)?;
            let rhs = (&riemann_zeta(&sc, ctx)? * &dirichlet_beta(&sc, ctx)?).scale(&Float::with_val(p, 4));
            Ok((&z2 - &rhs).abs_f64() / rhs.abs_f64())
        })();
        r.value(format!("zeta_2 = 4 zeta L(chi_4) at s={s}"), two, 1e-12);
        let four = (|| -> Result<f64> {
            let z4 = zeta_k(4, &sc, ctx)?;
            let f = 1.0 - 2f64.powf(2.0 - 2.0 * s);
            let shifted = Complex::with_val(p, s - 1.0, 0.0);
            let rhs = (&riemann_zeta(&sc, ctx)? * &riemann_zeta(&shifted, ctx)?).scale(&Float::with_val(p, 8.0 * f));
            Ok((&z4 - &rhs).abs_f64() / rhs.abs_f64())
        })();
        r.value(format!("zeta_4 = 8(1-2^(2-2s)) zeta(s) zeta(s-1) at s={s}"), four, 1e-12);
    }
    r
}

fn line(n: u32, name: &str, r: &Record, extra: &str) -> bool {
    let pass = r.pass();
    let (label, worst) = r.worst();
    println!(
        "criterion {n} [{name}]: {}  ({} checks, worst {worst:.2e} at {label}{extra})",
        if pass { "PASS" } else { "FAIL" },
        r.errors.len()
    );
    for f in r.failures() {
        println!("    {f}");
    }
    pass
}

fn main() {
    let ctx = PrecisionContext::default();
    let mut all = true;

    let (r1, t1) = criterion1(&ctx);
    let mut ok1 = r1.pass() && t1 < Duration::from_secs(600);
    ok1 &= line(1, "theorem1 suite", &r1, &format!(", {:.1}s of 600s", t1.as_secs_f64()));
    all &= ok1;

    let (r2, t2) = criterion2(&ctx);
    let mut ok2 = r2.pass() && t2 < Duration::from_secs(300);
    ok2 &= line(2, "theorem2 suite", &r2, &format!(", {:.1}s of 300s", t2.as_secs_f64()));
    all &= ok2;

    let r3 = criterion3(&ctx);
    all &= line(3, "classical reductions and routes", &r3, "");
    let r4 = criterion4(&ctx);
    all &= line(4, "popov and watson", &r4, "");
    let r5 = criterion5(&ctx);
    all &= line(5, "laurent data", &r5, "");
    all &= line(6, "functional equation", &criterion6(&ctx), "");
    all &= line(7, "mellin-barnes cross-validation", &criterion7(&ctx), "");
    all &= line(8, "arithmetic oracles", &criterion8(&ctx), "");

    // 9: same verdicts at 512 bits, and every error at least 10x smaller (or already
    // below the high-precision tolerance)
    let hi = PrecisionContext::new(512, 1e-40);
    let highs = [criterion1(&hi).0, criterion2(&hi).0, criterion3(&hi), criterion4(&hi), criterion5(&hi)];
    let lows = [&r1, &r2, &r3, &r4, &r5];
    let mut r9 = Record::default();
    for (i, (lo, hi_r)) in lows.iter().zip(highs.iter()).enumerate() {
        for (label, (e_lo, limit)) in &lo.errors {
            let e_hi = hi_r.errors.get(label).map_or(f64::NAN, |v| v.0);
            let same_verdict = (*e_lo < *limit) == (e_hi < *limit);
            let shrink = if e_lo.is_nan() || e_hi.is_nan() { f64::NAN } else { e_hi / (e_lo / 10.0).max(hi.tol) };
            // ≤ 1 means shrunk tenfold or below 1e-40
            let v = if same_verdict { shrink } else { f64::INFINITY };
            r9.add(format!("c{} {label}", i + 1), v, 1.0 + 1e-12);
        }
        r9.notes.extend(hi_r.notes.iter().map(|n| format!("c{} @512: {n}", i + 1)));
    }
    all &= line(9, "precision robustness (ratio to max(err/10, 1e-40))", &r9, "");

    if !all {
        std::process::exit(1);
    }
}
