use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Complex number over two MPFR floats. Binary operations run at the larger
/// of the two operand precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct PComplex {
    pub re: Float,
    pub im: Float,
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn fl(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

/// `num/den` as a float, rounded once.
pub fn rat(prec: u32, num: i64, den: i64) -> Float {
    Float::with_val(prec, num) / den
}

impl PComplex {
    pub fn zero(prec: u32) -> Self {
        PComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        PComplex { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn i(prec: u32) -> Self {
        PComplex { re: Float::new(prec), im: Float::with_val(prec, 1) }
    }

    pub fn new(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        let mut c = PComplex { re, im };
        c.set_prec(prec);
        c
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        PComplex { re, im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        PComplex { re: fl(prec, re), im: fl(prec, im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let mut c = self.clone();
        c.set_prec(prec);
        c
    }

    pub fn conj(&self) -> Self {
        PComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        PComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        PComplex { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        PComplex { re: Float::with_val(n.prec(), &self.re / &n), im: -Float::with_val(n.prec(), &self.im / &n) }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let mut s = self.im.clone();
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        PComplex { re: c * &r, im: s * &r }
    }

    /// Principal logarithm, `Im ∈ (−π, π]`.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let mut m = self.norm_sqr();
        m.ln_mut();
        m /= 2;
        PComplex { re: m, im: Float::with_val(p, self.im.atan2_ref(&self.re)) }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return PComplex::zero(p);
        }
        let a = self.abs();
        let mut t = Float::with_val(p, self.re.abs_ref());
        t += &a;
        t /= 2;
        t.sqrt_mut();
        let half = Float::with_val(p, &self.im / &t) / 2;
        if self.re >= 0 {
            PComplex { re: t, im: half }
        } else if self.im >= 0 {
            PComplex { re: half, im: t }
        } else {
            PComplex { re: -half, im: -t }
        }
    }

    /// `z^a = exp(a·Log z)` on the principal branch.
    pub fn pow(&self, a: &PComplex) -> Self {
        (&self.ln() * a).exp()
    }

    pub fn powf(&self, a: &Float) -> Self {
        self.ln().scale(a).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = PComplex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (mut s, mut c) = (self.re.clone(), Float::new(p));
        s.sin_cos_mut(&mut c);
        let (mut sh, mut ch) = (self.im.clone(), Float::new(p));
        sh.sinh_cosh_mut(&mut ch);
        PComplex { re: s * ch, im: c * sh }
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        let (mut s, mut c) = (self.re.clone(), Float::new(p));
        s.sin_cos_mut(&mut c);
        let (mut sh, mut ch) = (self.im.clone(), Float::new(p));
        sh.sinh_cosh_mut(&mut ch);
        PComplex { re: c * ch, im: -(s * sh) }
    }

    pub fn cot(&self) -> Self {
        &self.cos() / &self.sin()
    }

    /// Decimal rendering with roughly `prec/3.32` significant digits.
    pub fn digits(&self) -> usize {
        (self.prec() as f64 / std::f64::consts::LOG2_10).floor().max(1.0) as usize
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for PComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = f.precision().unwrap_or(20);
        let re = self.re.to_string_radix(10, Some(n));
        let im = self.im.to_string_radix(10, Some(n));
        if self.im.is_sign_negative() {
            write!(f, "{re} - {}i", im.trim_start_matches('-'))
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

impl Serialize for PComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.digits();
        let mut st = serializer.serialize_struct("PComplex", 3)?;
        st.serialize_field("re", &self.re.to_string_radix(10, Some(n)))?;
        st.serialize_field("im", &self.im.to_string_radix(10, Some(n)))?;
        st.serialize_field("bits", &self.prec())?;
        st.end()
    }
}

impl<'a> Add<&'a PComplex> for &'a PComplex {
    type Output = PComplex;
    fn add(self, o: &PComplex) -> PComplex {
        let p = self.prec().max(o.prec());
        PComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a PComplex> for &'a PComplex {
    type Output = PComplex;
    fn sub(self, o: &PComplex) -> PComplex {
        let p = self.prec().max(o.prec());
        PComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a PComplex> for &'a PComplex {
    type Output = PComplex;
    fn mul(self, o: &PComplex) -> PComplex {
        let p = self.prec().max(o.prec());
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        PComplex { re, im }
    }
}

impl<'a> Div<&'a PComplex> for &'a PComplex {
    type Output = PComplex;
    fn div(self, o: &PComplex) -> PComplex {
        let n = o.norm_sqr();
        let p = self.prec().max(o.prec());
        let mut re = Float::with_val(p, &self.re * &o.re);
        re += Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.im * &o.re);
        im -= Float::with_val(p, &self.re * &o.im);
        re /= &n;
        im /= &n;
        PComplex { re, im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PComplex> for PComplex {
            type Output = PComplex;
            fn $m(self, o: PComplex) -> PComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a PComplex> for PComplex {
            type Output = PComplex;
            fn $m(self, o: &PComplex) -> PComplex {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for PComplex {
    type Output = PComplex;
    fn neg(self) -> PComplex {
        PComplex { re: -self.re, im: -self.im }
    }
}

impl<'a> AddAssign<&'a PComplex> for PComplex {
    fn add_assign(&mut self, o: &PComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl<'a> SubAssign<&'a PComplex> for PComplex {
    fn sub_assign(&mut self, o: &PComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl<'a> MulAssign<&'a PComplex> for PComplex {
    fn mul_assign(&mut self, o: &PComplex) {
        let p = self.prec();
        let t = Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        self.re *= &o.re;
        self.re -= t;
        self.im = im;
    }
}

impl MulAssign<&Float> for PComplex {
    fn mul_assign(&mut self, s: &Float) {
        self.re *= s;
        self.im *= s;
    }
}
