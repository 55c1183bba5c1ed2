//! Minimal complex arithmetic over MPFR floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::Float;

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn with_val(prec: u32, re: f64, im: f64) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: &Float) -> Self {
        Complex {
            re: re.clone(),
            im: Float::new(re.prec()),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::with_val(prec, 0.0, 0.0)
    }

    pub fn one(prec: u32) -> Self {
        Complex::with_val(prec, 1.0, 0.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy at a different working precision.
    pub fn to_prec(&self, prec: u32) -> Self {
        Complex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Cheap magnitude estimate as f64 (may be 0 or inf outside the double range).
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log2 of the modulus, robust against f64 underflow.
    pub fn log2_abs(&self) -> f64 {
        log2_abs(&self.abs())
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, f: &Float) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re * f),
            im: Float::with_val(p, &self.im * f),
        }
    }

    pub fn add_real(&self, f: &Float) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re + f),
            im: self.im.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let d = self.norm_sqr();
        Complex {
            re: Float::with_val(p, &self.re / &d),
            im: Float::with_val(p, -(&self.im / d)),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        if self.im.is_zero() {
            return Complex::new(r, Float::new(p));
        }
        let mut s = Float::with_val(p, &self.im);
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        Complex {
            re: Float::with_val(p, &r * &c),
            im: r * s,
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        if self.im.is_zero() && self.re.is_sign_positive() {
            return Complex::new(Float::with_val(p, self.re.ln_ref()), Float::new(p));
        }
        Complex {
            re: self.abs().ln(),
            im: self.arg(),
        }
    }

    pub fn pow(&self, w: &Complex) -> Self {
        (w * &self.ln()).exp()
    }

    pub fn pow_real(&self, w: &Float) -> Self {
        self.ln().scale(w).exp()
    }

    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.im.is_zero() && self.re.is_sign_positive() {
            return Complex::new(Float::with_val(p, self.re.sqrt_ref()), Float::new(p));
        }
        let half = Float::with_val(p, 0.5);
        self.pow_real(&half)
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let mut s = self.re.clone();
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        let mut sh = self.im.clone();
        let mut ch = Float::new(p);
        sh.sinh_cosh_mut(&mut ch);
        Complex {
            re: s * ch,
            im: c * sh,
        }
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        let mut s = self.re.clone();
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        let mut sh = self.im.clone();
        let mut ch = Float::new(p);
        sh.sinh_cosh_mut(&mut ch);
        Complex {
            re: c * ch,
            im: -(s * sh),
        }
    }

    pub fn cosh(&self) -> Self {
        let p = self.prec();
        let e = self.exp();
        let ei = e.recip();
        let half = Float::with_val(p, 0.5);
        (&e + &ei).scale(&half)
    }

    pub fn cot(&self) -> Self {
        &self.cos() / &self.sin()
    }

    /// π·z, a frequent building block.
    pub fn times_pi(&self) -> Self {
        let pi = Float::with_val(self.prec(), Constant::Pi);
        self.scale(&pi)
    }
}

/// log2|x| without leaving the MPFR exponent range.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if !x.is_finite() {
        return f64::INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}i",
            self.re.to_string_radix(10, Some(25)),
            self.im.to_string_radix(10, Some(25))
        )
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        let p = self.prec();
        if o.im.is_zero() {
            return self.scale(&o.re);
        }
        if self.im.is_zero() {
            return o.scale(&self.re).to_prec(p);
        }
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        Complex {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        if o.im.is_zero() {
            let p = self.prec();
            return Complex {
                re: Float::with_val(p, &self.re / &o.re),
                im: Float::with_val(p, &self.im / &o.re),
            };
        }
        self * &o.recip()
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, -&self.re),
            im: Float::with_val(p, -&self.im),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, o: Complex) -> Complex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Complex> for Complex {
            type Output = Complex;
            fn $m(self, o: &Complex) -> Complex {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);
