use std::f64::consts::LN_2;

use rug::Float;
use serde::{Deserialize, Serialize};

use super::complex::{log2_abs, Complex};
use super::PrecisionContext;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct SeriesResult<T = Float> {
    pub value: T,
    pub terms_used: u64,
    pub tail_bound: f64,
    pub bound_kind: BoundKind,
}

/// Decay hypothesis for |term(n)|, used to bound the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailModel {
    /// |t_n| ≤ C e^{-c n}
    Exponential { c: f64 },
    /// |t_n| ≤ C e^{-c √n}
    StretchedExponential { c: f64 },
    /// |t_n| ≤ C n^{-p}, p > 1
    Power { p: f64 },
}

impl TailModel {
    /// log2 of the envelope factor that turns |t_n| into the constant C.
    fn log2_weight(&self, n: u64) -> f64 {
        let n = n as f64;
        match *self {
            TailModel::Exponential { c } => c * n / LN_2,
            TailModel::StretchedExponential { c } => c * n.sqrt() / LN_2,
            TailModel::Power { p } => p * n.max(1.0).log2(),
        }
    }

    /// log2 of the bound on Σ_{m>n} C·envelope(m), given log2 C.
    fn log2_tail(&self, log2_c: f64, n: u64) -> f64 {
        let nf = n as f64;
        match *self {
            TailModel::Exponential { c } => {
                log2_c - c * (nf + 1.0) / LN_2 - (1.0 - (-c).exp()).log2()
            }
            TailModel::StretchedExponential { c } => {
                let s = nf.sqrt();
                log2_c + 1.0 - c * s / LN_2 + (s / c + 1.0 / (c * c)).log2()
            }
            TailModel::Power { p } => log2_c + (1.0 - p) * nf.max(1.0).log2() - (p - 1.0).log2(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TailModel::Power { p } if p <= 1.0 => Err(Error::NonConvergent(format!(
                "power decay exponent {p} is not above 1"
            ))),
            TailModel::Exponential { c } | TailModel::StretchedExponential { c } if c <= 0.0 => {
                Err(Error::NonConvergent(format!("decay rate {c} is not positive")))
            }
            _ => Ok(()),
        }
    }
}

/// Values that can be accumulated by the series drivers.
pub trait Summand: Clone {
    fn zero_like(prec: u32) -> Self;
    fn acc(&mut self, other: &Self);
    fn log2_magnitude(&self) -> f64;
    fn scaled(&self, f: &Float) -> Self;
}

impl Summand for Float {
    fn zero_like(prec: u32) -> Self {
        Float::new(prec)
    }
    fn acc(&mut self, other: &Self) {
        *self += other;
    }
    fn log2_magnitude(&self) -> f64 {
        log2_abs(self)
    }
    fn scaled(&self, f: &Float) -> Self {
        Float::with_val(self.prec(), self * f)
    }
}

impl Summand for Complex {
    fn zero_like(prec: u32) -> Self {
        Complex::zero(prec)
    }
    fn acc(&mut self, other: &Self) {
        self.re += &other.re;
        self.im += &other.im;
    }
    fn log2_magnitude(&self) -> f64 {
        self.log2_abs()
    }
    fn scaled(&self, f: &Float) -> Self {
        self.scale(f)
    }
}

/// Sum term(n) for n ≥ n0 until the decay-model tail bound drops below ctx.tol/10.
pub fn sum_until<T, F>(n0: u64, term: F, decay: TailModel, ctx: &PrecisionContext) -> Result<SeriesResult<T>>
where
    T: Summand,
    F: FnMut(u64) -> Result<T>,
{
    sum_until_target(n0, term, decay, ctx.tol / 10.0, ctx.max_terms, ctx.work_prec())
}

/// As [`sum_until`] with an explicit absolute target and term budget.
pub fn sum_until_target<T, F>(
    n0: u64,
    mut term: F,
    decay: TailModel,
    target: f64,
    max_terms: u64,
    prec: u32,
) -> Result<SeriesResult<T>>
where
    T: Summand,
    F: FnMut(u64) -> Result<T>,
{
    decay.validate()?;
    let log2_target = target.log2();
    let mut acc = T::zero_like(prec);
    let mut log2_c = f64::NEG_INFINITY;
    let mut n = n0;
    let mut used = 0u64;
    loop {
        let t = term(n)?;
        let lm = t.log2_magnitude();
        if lm.is_finite() {
            log2_c = log2_c.max(lm + decay.log2_weight(n));
            acc.acc(&t);
        } else if lm == f64::INFINITY {
            return Err(Error::NonConvergent(format!("non-finite term at index {n}")));
        }
        used += 1;
        let bound = decay.log2_tail(log2_c, n);
        // a handful of terms before trusting the envelope
        if used >= 4 && log2_c.is_finite() && bound < log2_target {
            return Ok(SeriesResult {
                value: acc,
                terms_used: used,
                tail_bound: bound.exp2(),
                bound_kind: BoundKind::Rigorous,
            });
        }
        if used >= max_terms {
            return Ok(SeriesResult {
                value: acc,
                terms_used: used,
                tail_bound: bound.exp2(),
                bound_kind: BoundKind::Heuristic,
            });
        }
        n += 1;
    }
}

/// Number of Cohen–Villegas–Zagier steps for `bits` correct bits, plus
/// `extra_log2` bits of headroom for growth of the summand family.
pub fn cvz_terms(bits: u32, extra_log2: f64) -> u64 {
    // error ≈ 2·(3+√8)^{-n}
    ((bits as f64 + extra_log2 + 4.0) / 5.828_427_124_746_19_f64.log2()).ceil() as u64 + 1
}

/// Σ_{k≥0} (-1)^k a_k by the Cohen–Villegas–Zagier acceleration using n terms.
/// Accurate for totally monotone a_k (and their analytic continuation in a parameter).
pub fn alternating_sum<T, F>(n: u64, mut a: F, prec: u32) -> T
where
    T: Summand,
    F: FnMut(u64) -> T,
{
    let sq8 = Float::with_val(prec, 8).sqrt();
    let base = Float::with_val(prec, 3) + sq8;
    let d = Float::with_val(prec, rug::ops::Pow::pow(&base, n as u32));
    let d = Float::with_val(prec, &d + Float::with_val(prec, d.recip_ref())) / 2u32;
    let mut b = Float::with_val(prec, -1);
    let mut c = Float::with_val(prec, -&d);
    let mut s = T::zero_like(prec);
    let nn = n as i64;
    for k in 0..n {
        c = Float::with_val(prec, &b - &c);
        s.acc(&a(k).scaled(&c));
        let kk = k as i64;
        // b ← (k+n)(k−n)·b / ((k+1/2)(k+1)) = 2(k+n)(k−n)·b / ((2k+1)(k+1))
        b *= 2 * (kk + nn) * (kk - nn);
        b /= (2 * kk + 1) * (kk + 1);
    }
    let inv = Float::with_val(prec, d.recip_ref());
    s.scaled(&inv)
}

/// Polynomial extrapolation of (x_i, y_i) to x = 0 by Neville's scheme.
pub fn neville_at_zero(xs: &[Float], ys: &[Float]) -> Float {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let mut p: Vec<Float> = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            // p_i ← (x_{i+m} p_i − x_i p_{i+1}) / (x_{i+m} − x_i)
            let num = Float::with_val(p[i].prec(), &xs[i + m] * &p[i])
                - Float::with_val(p[i].prec(), &xs[i] * &p[i + 1]);
            let den = Float::with_val(p[i].prec(), &xs[i + m] - &xs[i]);
            p[i] = num / den;
        }
    }
    p[0].clone()
}
