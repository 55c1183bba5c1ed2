//! Numerical verification of modular-type summation identities.
//!
//! Every checker evaluates the two sides of an identity independently at the working
//! precision and reports the residual. Identities of the form F(α) = F(β) under a
//! constraint αβ = c evaluate F at α and at β with no shared partial sums.

mod ferrar;
mod grid;
mod koshliakov;
mod popov;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{log2_abs, PrecisionContext};
use crate::arith::RkTable;
use crate::zetafn::{lattice_direct_cut, lattice_tail};
use crate::zetafn::riemann::zeta_at;

pub use ferrar::{
    check_ferrar_classic, check_r2_ei, check_r3, check_theorem1, ferrar_side, r2_constant_forms, r2_side, r3_side,
    theorem1_side,
};
pub use grid::{run_grid, GridEntry, GridSpec, GridSummary};
pub use koshliakov::{
    check_koshliakov_classic, check_koshliakov_k2, check_koshliakov_k4, check_theorem2, koshliakov_classic_side,
    koshliakov_classic_side_at, koshliakov_k2_side, koshliakov_k4_side, theorem2_side, theorem2_side_at,
};
pub use popov::{check_popov, check_theta, check_watson, popov_sides, watson_sides};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Theorem1,
    Theorem2,
    FerrarClassic,
    R2Ei,
    R3,
    KoshliakovClassic,
    KoshliakovK2,
    KoshliakovK4,
    Popov,
    Watson,
    Theta,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::Theorem1,
        IdentityId::Theorem2,
        IdentityId::FerrarClassic,
        IdentityId::R2Ei,
        IdentityId::R3,
        IdentityId::KoshliakovClassic,
        IdentityId::KoshliakovK2,
        IdentityId::KoshliakovK4,
        IdentityId::Popov,
        IdentityId::Watson,
        IdentityId::Theta,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Theorem1 => "theorem1",
            IdentityId::Theorem2 => "theorem2",
            IdentityId::FerrarClassic => "ferrar_classic",
            IdentityId::R2Ei => "r2_ei",
            IdentityId::R3 => "r3",
            IdentityId::KoshliakovClassic => "koshliakov_classic",
            IdentityId::KoshliakovK2 => "koshliakov_k2",
            IdentityId::KoshliakovK4 => "koshliakov_k4",
            IdentityId::Popov => "popov",
            IdentityId::Watson => "watson",
            IdentityId::Theta => "theta",
        }
    }

    /// Parameters a check of this identity requires.
    pub fn signature(&self) -> &'static [&'static str] {
        match self {
            IdentityId::Theorem1 | IdentityId::Theorem2 => &["k", "alpha"],
            IdentityId::FerrarClassic
            | IdentityId::R2Ei
            | IdentityId::R3
            | IdentityId::KoshliakovK2
            | IdentityId::KoshliakovK4 => &["alpha"],
            IdentityId::KoshliakovClassic | IdentityId::Theta => &["x"],
            IdentityId::Popov => &["k", "nu", "beta"],
            IdentityId::Watson => &["nu", "x"],
        }
    }

    /// Value of αβ for identities of the form F(α) = F(β).
    pub fn dual_product(&self) -> Option<f64> {
        match self {
            IdentityId::Theorem1 | IdentityId::FerrarClassic | IdentityId::R2Ei | IdentityId::R3 => Some(1.0),
            IdentityId::Theorem2 | IdentityId::KoshliakovK2 | IdentityId::KoshliakovK4 => {
                Some(std::f64::consts::PI * std::f64::consts::PI)
            }
            _ => None,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::DomainError(format!("unknown identity '{s}'")))
    }
}

/// Parameter values for one check; unused entries stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub k: Option<u32>,
    pub alpha: Option<f64>,
    /// Explicit dual parameter; when given, the constraint αβ = c is checked.
    pub beta: Option<f64>,
    pub nu: Option<f64>,
    pub x: Option<f64>,
}

impl IdentityParams {
    pub fn has(&self, name: &str) -> bool {
        match name {
            "k" => self.k.is_some(),
            "alpha" => self.alpha.is_some(),
            "beta" => self.beta.is_some(),
            "nu" => self.nu.is_some(),
            "x" => self.x.is_some(),
            _ => false,
        }
    }

    /// Names in `signature` that have no value.
    pub fn missing(&self, id: IdentityId) -> Vec<&'static str> {
        id.signature().iter().copied().filter(|n| !self.has(n)).collect()
    }

    fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        if let Some(k) = self.k {
            m.insert("k".into(), k.to_string());
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("nu", self.nu), ("x", self.x)] {
            if let Some(v) = v {
                m.insert(name.to_string(), format!("{v:?}"));
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub series: String,
    pub terms_used: u64,
    pub tail_bound: f64,
}

impl Truncation {
    pub fn new(series: impl Into<String>, terms_used: u64, tail_bound: f64) -> Self {
        Truncation { series: series.into(), terms_used, tail_bound }
    }
}

/// Outcome of one check. Numbers are decimal strings with 40 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: String,
    pub rel_err: String,
    pub truncations: Vec<Truncation>,
    pub ctx_echo: PrecisionContext,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl IdentityReport {
    pub fn rel_err_f64(&self) -> f64 {
        self.rel_err.parse().unwrap_or(f64::NAN)
    }

    pub fn abs_err_f64(&self) -> f64 {
        self.abs_err.parse().unwrap_or(f64::NAN)
    }

    pub fn lhs_f64(&self) -> f64 {
        self.lhs.parse().unwrap_or(f64::NAN)
    }

    pub fn rhs_f64(&self) -> f64 {
        self.rhs.parse().unwrap_or(f64::NAN)
    }

    /// Report for a check that could not be evaluated.
    pub fn failed(id: IdentityId, params: &IdentityParams, ctx: &PrecisionContext, err: &Error) -> Self {
        IdentityReport {
            id,
            params: params.to_map(),
            lhs: "NaN".into(),
            rhs: "NaN".into(),
            abs_err: "NaN".into(),
            rel_err: "NaN".into(),
            truncations: Vec::new(),
            ctx_echo: ctx.clone(),
            pass: false,
            error: Some(err.to_string()),
        }
    }
}

/// Pass threshold on rel_err for an identity.
pub fn acceptance_tolerance(id: IdentityId, k: Option<u32>) -> f64 {
    let deep = k.map_or(false, |k| k >= 3);
    match id {
        IdentityId::Theorem1 | IdentityId::Popov if deep => 1e-9,
        IdentityId::R3 => 1e-9,
        IdentityId::KoshliakovClassic
        | IdentityId::KoshliakovK2
        | IdentityId::KoshliakovK4
        | IdentityId::Theta => 1e-12,
        _ => 1e-10,
    }
}

/// Run the checker for `id` with the given parameters.
pub fn check(id: IdentityId, params: &IdentityParams, ctx: &PrecisionContext) -> Result<IdentityReport> {
    let missing = params.missing(id);
    if !missing.is_empty() {
        return Err(Error::DomainError(format!("{id} needs {}", missing.join(", "))));
    }
    let (k, a, nu, x) = (params.k.unwrap_or(0), params.alpha.unwrap_or(0.0), params.nu, params.x);
    let beta = params.beta;
    match id {
        IdentityId::Theorem1 => ferrar::theorem1_pair(k, a, beta, ctx),
        IdentityId::Theorem2 => koshliakov::theorem2_pair(k, a, beta, ctx),
        IdentityId::FerrarClassic => ferrar::ferrar_pair(a, beta, ctx),
        IdentityId::R2Ei => ferrar::r2_pair(a, beta, ctx),
        IdentityId::R3 => ferrar::r3_pair(a, beta, ctx),
        IdentityId::KoshliakovClassic => check_koshliakov_classic(x.unwrap(), ctx),
        IdentityId::KoshliakovK2 => koshliakov::k2_pair(a, beta, ctx),
        IdentityId::KoshliakovK4 => koshliakov::k4_pair(a, beta, ctx),
        IdentityId::Popov => check_popov(k, nu.unwrap(), beta.unwrap(), ctx),
        IdentityId::Watson => check_watson(nu.unwrap(), x.unwrap(), ctx),
        IdentityId::Theta => check_theta(x.unwrap(), ctx),
    }
}

pub(crate) struct Side {
    pub value: Float,
    pub truncations: Vec<Truncation>,
}

/// Decimal string with 40 significant digits, the format used in every report.
pub fn fmt40(x: &Float) -> String {
    x.to_string_radix(10, Some(40))
}

/// β from α under αβ = product. A supplied β is checked against the constraint to
/// 1e-12 and then used as given, so swapping α and β swaps the two sides exactly.
pub(crate) fn dual_parameter(alpha: f64, beta: Option<f64>, product: f64, prec: u32) -> Result<(Float, Float)> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::DomainError(format!("α must be positive, got {alpha}")));
    }
    if let Some(b) = beta {
        if !((alpha * b / product - 1.0).abs() <= 1e-12) {
            return Err(Error::ConstraintViolation(format!("αβ = {} but must equal {product}", alpha * b)));
        }
    }
    let a = Float::with_val(prec, alpha);
    let b = if let Some(b) = beta {
        Float::with_val(prec, b)
    } else if product == 1.0 {
        Float::with_val(prec, a.recip_ref())
    } else {
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        pi.square() / &a
    };
    Ok((a, b))
}

pub(crate) fn report(
    id: IdentityId,
    params: IdentityParams,
    lhs: Side,
    rhs: Side,
    ctx: &PrecisionContext,
) -> IdentityReport {
    let p = lhs.value.prec().max(rhs.value.prec());
    let abs = Float::with_val(p, &lhs.value - &rhs.value).abs();
    let scale = Float::with_val(p, lhs.value.abs_ref()).max(&Float::with_val(p, rhs.value.abs_ref())).max(&Float::with_val(p, 1));
    let rel = Float::with_val(p, &abs / &scale);
    let tol = acceptance_tolerance(id, params.k);
    let mut truncations = lhs.truncations;
    truncations.extend(rhs.truncations);
    IdentityReport {
        id,
        params: params.to_map(),
        lhs: fmt40(&lhs.value),
        rhs: fmt40(&rhs.value),
        abs_err: fmt40(&abs),
        pass: rel.to_f64() < tol,
        rel_err: fmt40(&rel),
        truncations,
        ctx_echo: ctx.clone(),
        error: None,
    }
}

/// Index beyond which an asymptotic expansion in 1/y is accurate to `tol`,
/// given that y grows like `scale`·n^`power`.
pub(crate) fn asymptotic_cut(scale: f64, power: f64, k: u32, tol: f64) -> usize {
    let l = -tol.ln();
    let y = l + (k as f64 + 4.0) * l.ln() + 20.0;
    ((y / scale).powf(1.0 / power).ceil() as usize).max(2)
}

/// Σ_{j ≥ j0} coef(j)·tail(j), where tail(j, prec, tol) is evaluated to absolute
/// accuracy tol. Stops at the first term below `target`.
pub(crate) fn asymptotic_tail<C, T>(
    name: &str,
    j0: u32,
    mut coef: C,
    mut tail: T,
    target: f64,
    prec: u32,
) -> Result<(Float, Truncation)>
where
    C: FnMut(u32) -> Float,
    T: FnMut(u32, u32, f64) -> Result<Float>,
{
    let mut acc = Float::new(prec);
    let mut prev = f64::INFINITY;
    let mut rising = 0;
    let mut used = 0u64;
    let mut j = j0;
    loop {
        let c = coef(j);
        if c.is_zero() {
            j += 1;
            continue;
        }
        let lc = log2_abs(&c);
        let extra = lc.max(0.0).ceil() as u32 + 16;
        let t = tail(j, prec + extra, target * (-lc).exp2() / 4.0)?;
        let term = Float::with_val(prec, c * t);
        let m = term.clone().abs().to_f64();
        acc += &term;
        used += 1;
        if m < target {
            return Ok((acc, Truncation::new(name, used, m)));
        }
        rising = if m > prev { rising + 1 } else { 0 };
        if rising >= 3 || used > 500 {
            return Err(Error::NonConvergent(format!("{name}: asymptotic tail stalls at {m:e}")));
        }
        prev = m;
        j += 1;
    }
}

/// Σ_{m>n} r_k(m) m^{−σ} for tail corrections. When the tail needs ζ_k(σ), requests
/// no tighter than a fixed context-derived accuracy are served at that accuracy, so
/// every side and grid point shares one memoised value and results do not depend on
/// evaluation order.
pub(crate) fn lattice_tail_shared(
    k: u32,
    sigma: &Float,
    table: &RkTable,
    n: usize,
    prec: u32,
    tol: f64,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let (cp, ct) = (ctx.work_prec() + 64, ctx.tol * 1e-20);
    if lattice_direct_cut(k, sigma.to_f64(), n, tol / 2.0).is_none() && prec <= cp && tol >= ct {
        Ok(Float::with_val(prec, lattice_tail(k, &Float::with_val(cp, sigma), table, n, cp, ct)?))
    } else {
        lattice_tail(k, sigma, table, n, prec, tol)
    }
}

/// Σ_{m>n} m^{−s} for real s > 1.
pub(crate) fn zeta_tail(s: &Float, n: usize, prec: u32) -> Result<Float> {
    let p = prec + 32;
    let z = zeta_at(&crate::numkernel::Complex::from_real(&Float::with_val(p, s)), p)?.re;
    let mut partial = Float::new(p);
    for m in 1..=n {
        let l = Float::with_val(p, m).ln();
        partial += Float::with_val(p, -Float::with_val(p, s * l)).exp();
    }
    Ok(Float::with_val(prec, z - partial))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
            let js = serde_json::to_string(&id).unwrap();
            assert_eq!(js, format!("\"{}\"", id.as_str()));
        }
        assert!("nope".parse::<IdentityId>().is_err());
    }

    #[test]
    fn zeta_tail_small_case() {
        let p = 128;
        let t = zeta_tail(&Float::with_val(p, 2), 3, p).unwrap();
        let pi2 = Float::with_val(p, rug::float::Constant::Pi).square() / 6u32;
        let e = pi2 - Float::with_val(p, 1) - Float::with_val(p, 0.25) - Float::with_val(p, 9u32).recip();
        assert!((t - e).abs().to_f64() < 1e-35);
    }

    #[test]
    fn constraint_enforced() {
        assert!(matches!(dual_parameter(2.0, Some(0.4), 1.0, 64), Err(Error::ConstraintViolation(_))));
        assert!(dual_parameter(2.0, Some(0.5), 1.0, 64).is_ok());
        assert!(matches!(dual_parameter(-1.0, None, 1.0, 64), Err(Error::DomainError(_))));
    }

    #[test]
    fn missing_parameters_listed() {
        let p = IdentityParams { k: Some(2), ..Default::default() };
        assert_eq!(p.missing(IdentityId::Theorem1), vec!["alpha"]);
        assert!(check(IdentityId::Theorem1, &p, &PrecisionContext::default()).is_err());
    }
}
