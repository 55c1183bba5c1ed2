//! Property tests for the invariants of the arithmetic tables, special functions,
//! ζ_k and the identity checkers.

use ferrar_core::arith::{dtilde, rk_convolution, rk_enumerate};
use ferrar_core::identities::{check, check_koshliakov_classic, check_theta, IdentityId, IdentityParams};
use ferrar_core::numkernel::{sum_until, Complex, TailModel};
use ferrar_core::specfun::{gamma, phi_k};
use ferrar_core::zetafn::{functional_equation_residual, zeta_k};
use ferrar_core::PrecisionContext;
use proptest::prelude::*;
use rug::Float;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convolution_matches_enumeration(k in 1u32..=6, n in 0usize..=2000) {
        prop_assert_eq!(rk_convolution(k, n).unwrap().values, rk_enumerate(k, n).unwrap().values);
    }

    #[test]
    fn theta_power_series_reproduces_table(k in 1u32..=6, n in 1usize..=400) {
        // (Σ_j q^{j²})^k truncated at q^n
        let mut theta = vec![0u64; n + 1];
        let mut j = 0usize;
        while j * j <= n {
            theta[j * j] += if j == 0 { 1 } else { 2 };
            j += 1;
        }
        let mut power = vec![0u64; n + 1];
        power[0] = 1;
        for _ in 0..k {
            let mut next = vec![0u64; n + 1];
            for (a, &pa) in power.iter().enumerate().filter(|(_, v)| **v != 0) {
                for (b, &tb) in theta.iter().enumerate().take(n + 1 - a).filter(|(_, v)| **v != 0) {
                    next[a + b] += pa * tb;
                }
            }
            power = next;
        }
        prop_assert_eq!(power, rk_convolution(k, n).unwrap().values);
    }

    #[test]
    fn dtilde_one_lives_on_squares(n in 1usize..=3000) {
        let d = dtilde(1, n).unwrap();
        for (m, &v) in d.iter().enumerate().skip(1) {
            let r = (m as f64).sqrt().round() as usize;
            prop_assert!(v == 0 || r * r == m, "d̃₁({}) = {}", m, v);
        }
    }

    #[test]
    fn gamma_recurrence(re in -4.5f64..6.0, im in -8.0f64..8.0) {
        let p = 256;
        let z = Complex::with_val(p, re, im);
        prop_assume!(z.abs_f64() > 1e-3);
        let g = gamma(&z, p).unwrap();
        let g1 = gamma(&z.add_real(&Float::with_val(p, 1)), p).unwrap();
        let zg = &z * &g;
        let rel = (&g1 - &zg).abs_f64() / zg.abs_f64();
        prop_assert!(rel < 1e-60, "rel {:e}", rel);
    }

    #[test]
    fn phi_increases_towards_one(k in 2u32..=5, y in 0.3f64..3.0) {
        let c = ctx();
        let p = c.work_prec();
        let a = phi_k(k, &Float::with_val(p, y), &c).unwrap();
        let b = phi_k(k, &Float::with_val(p, y * 1.25), &c).unwrap();
        prop_assert!(a < b && b < 1u32);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn functional_equation_in_strip(k in 1u32..=6, u in 0.0f64..1.0, im in -10.0f64..10.0) {
        let kh = k as f64 / 2.0;
        let re = -1.0 + u * (kh + 2.0);
        let near = |c: f64| ((re - c).powi(2) + im * im).sqrt() < 1e-2;
        prop_assume!(!near(0.0) && !near(kh));
        let s = Complex::with_val(ctx().work_prec(), re, im);
        let r = functional_equation_residual(k, &s, &ctx()).unwrap();
        prop_assert!(r < 1e-18, "k={} s={}{:+}i residual {:e}", k, re, im, r);
    }

    #[test]
    fn precision_doubling_is_stable(k in 1u32..=4, sigma in -0.8f64..4.0) {
        prop_assume!((sigma - k as f64 / 2.0).abs() > 0.05);
        let lo = PrecisionContext::new(128, 1e-25);
        let hi = PrecisionContext::new(256, 1e-25);
        let a = zeta_k(k, &Complex::with_val(160, sigma, 0.0), &lo).unwrap();
        let b = zeta_k(k, &Complex::with_val(288, sigma, 0.0), &hi).unwrap();
        prop_assert!((&a.to_prec(288) - &b).abs_f64() <= 1e-25);
    }

    #[test]
    fn tail_bound_brackets_doubled_budget(c in 0.05f64..2.0, m in 5u64..60) {
        let mut small = ctx();
        small.max_terms = m;
        let mut big = ctx();
        big.max_terms = 2 * m;
        let p = small.work_prec();
        let term = |n: u64| Ok(Float::with_val(p, -c * n as f64).exp());
        let a = sum_until(1, term, TailModel::Exponential { c }, &small).unwrap();
        let b = sum_until(1, term, TailModel::Exponential { c }, &big).unwrap();
        let gap = Float::with_val(p, &b.value - &a.value).abs().to_f64();
        prop_assert!(gap <= a.tail_bound * (1.0 + 1e-9) + 1e-60, "gap {:e} bound {:e}", gap, a.tail_bound);
    }

    #[test]
    fn theta_inversion(x in 0.05f64..20.0) {
        let r = check_theta(x, &ctx()).unwrap();
        prop_assert!(r.pass && r.rel_err_f64() < 1e-24, "x={} rel {}", x, r.rel_err);
    }

    #[test]
    fn truncation_is_monotone(x in 0.03f64..0.3, m in 2u64..40) {
        let mut small = ctx();
        small.max_terms = m;
        let mut big = ctx();
        big.max_terms = 4 * m;
        let a = check_theta(x, &small).unwrap();
        let b = check_theta(x, &big).unwrap();
        let bound: f64 = a.truncations.iter().map(|t| t.tail_bound).sum();
        prop_assert!(b.rel_err_f64() <= a.rel_err_f64() + bound + 1e-30,
            "x={} m={}: {} then {} (bound {:e})", x, m, a.rel_err, b.rel_err, bound);
        let a = check_koshliakov_classic(x * 3.0, &small).unwrap();
        let b = check_koshliakov_classic(x * 3.0, &big).unwrap();
        let bound: f64 = a.truncations.iter().map(|t| t.tail_bound).sum();
        prop_assert!(b.rel_err_f64() <= a.rel_err_f64() + 10.0 * bound + 1e-30);
    }
}

const DUAL_IDS: [(IdentityId, Option<u32>); 9] = [
    (IdentityId::Theorem1, Some(1)),
    (IdentityId::Theorem1, Some(2)),
    (IdentityId::Theorem2, Some(3)),
    (IdentityId::FerrarClassic, None),
    (IdentityId::R2Ei, None),
    (IdentityId::R3, None),
    (IdentityId::Theorem2, Some(1)),
    (IdentityId::KoshliakovK2, None),
    (IdentityId::KoshliakovK4, None),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dual_parameter_involution(which in 0usize..DUAL_IDS.len(), t in 0.6f64..1.6) {
        let (id, k) = DUAL_IDS[which];
        let c = id.dual_product().unwrap();
        let alpha = t * c.sqrt();
        let beta = c / alpha;
        let at = |a: f64, b: f64| check(id, &IdentityParams { k, alpha: Some(a), beta: Some(b), ..Default::default() }, &ctx()).unwrap();
        let fwd = at(alpha, beta);
        let back = at(beta, alpha);
        prop_assert_eq!(&fwd.lhs, &back.rhs);
        prop_assert_eq!(&fwd.rhs, &back.lhs);
        prop_assert!(fwd.pass && back.pass, "{} {}", fwd.rel_err, back.rel_err);
    }

    #[test]
    fn classic_koshliakov_mirror(j in -3i32..=3) {
        let x = 2f64.powi(j);
        let a = check_koshliakov_classic(x, &ctx()).unwrap();
        let b = check_koshliakov_classic(1.0 / x, &ctx()).unwrap();
        prop_assert_eq!(&a.lhs, &b.rhs);
        prop_assert_eq!(&a.rhs, &b.lhs);
    }
}
