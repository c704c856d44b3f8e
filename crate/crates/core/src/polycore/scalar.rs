//! Coefficient domains shared by the exact and numeric polynomial paths.
//!
//! Three domains implement [`Scalar`]: `rug::Rational` (exact, real),
//! [`GaussRational`] (exact, complex) and `rug::Complex` (numeric, the
//! context carries the working precision in bits).

use std::fmt;

use rug::{Complex, Float, Rational};

/// Smallest working precision accepted for numeric values.
pub const MIN_PRECISION: u32 = 53;

/// Field operations plus the few numeric hooks the algorithms need.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// Construction context: `()` for exact domains, precision bits for numeric.
    type Ctx: Copy + fmt::Debug + PartialEq + Eq + Send + Sync;

    /// True when equality to zero is decided exactly.
    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn from_rational(r: &Rational, ctx: Self::Ctx) -> Self;
    /// `None` when the value does not live in this domain (non-real into `Rational`).
    fn from_gauss(q: &GaussRational, ctx: Self::Ctx) -> Option<Self>;
    /// Only numeric domains accept inexact values.
    fn from_complex(c: &Complex, ctx: Self::Ctx) -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;

    /// Approximate absolute value, used for tolerances and diagnostics only.
    fn magnitude(&self) -> f64;
    fn to_complex(&self, prec: u32) -> Complex;

    /// Precision used when a value from this context is handed to numeric code.
    fn work_precision(ctx: Self::Ctx) -> u32;

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one(self.ctx())).is_zero()
    }

    /// Exact zero test for exact domains, `|x| <= tol * scale` otherwise.
    fn negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol * scale
        }
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Exact complex rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::new() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Rational::from(re), Rational::from(im))
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0() == std::cmp::Ordering::Equal
    }

    /// `|z|^2` as an exact rational.
    pub fn norm2(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    fn add_ref(&self, o: &Self) -> Self {
        Self::new(Rational::from(&self.re + &o.re), Rational::from(&self.im + &o.im))
    }

    fn sub_ref(&self, o: &Self) -> Self {
        Self::new(Rational::from(&self.re - &o.re), Rational::from(&self.im - &o.im))
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        Self::new(re, im)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else if self.re.cmp0() == std::cmp::Ordering::Equal {
            write!(f, "{}i", self.im)
        } else if self.im.cmp0() == std::cmp::Ordering::Less {
            write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Scalar for Rational {
    type Ctx = ();
    const EXACT: bool = true;

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Rational::new()
    }
    fn one(_: ()) -> Self {
        Rational::from(1)
    }
    fn from_i64(v: i64, _: ()) -> Self {
        Rational::from(v)
    }
    fn from_rational(r: &Rational, _: ()) -> Self {
        r.clone()
    }
    fn from_gauss(q: &GaussRational, _: ()) -> Option<Self> {
        q.is_real().then(|| q.re.clone())
    }
    fn from_complex(_: &Complex, _: ()) -> Option<Self> {
        None
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn inv(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| Rational::from(self.recip_ref()))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (self, 0))
    }
    fn work_precision(_: ()) -> u32 {
        128
    }
}

impl Scalar for GaussRational {
    type Ctx = ();
    const EXACT: bool = true;

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Self::default()
    }
    fn one(_: ()) -> Self {
        Self::from_ints(1, 0)
    }
    fn from_i64(v: i64, _: ()) -> Self {
        Self::from_ints(v, 0)
    }
    fn from_rational(r: &Rational, _: ()) -> Self {
        Self::real(r.clone())
    }
    fn from_gauss(q: &GaussRational, _: ()) -> Option<Self> {
        Some(q.clone())
    }
    fn from_complex(_: &Complex, _: ()) -> Option<Self> {
        None
    }
    fn is_zero(&self) -> bool {
        self.re.cmp0() == std::cmp::Ordering::Equal && self.is_real()
    }
    fn add(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn neg(&self) -> Self {
        Self::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = self.norm2();
        Some(Self::new(
            Rational::from(&self.re / &n),
            Rational::from(-&self.im) / n,
        ))
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), Rational::from(-&self.im))
    }
    fn magnitude(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.re, &self.im))
    }
    fn work_precision(_: ()) -> u32 {
        128
    }
}

impl Scalar for Complex {
    type Ctx = u32;
    const EXACT: bool = false;

    fn ctx(&self) -> u32 {
        self.prec().0
    }
    fn zero(prec: u32) -> Self {
        Complex::new(prec)
    }
    fn one(prec: u32) -> Self {
        Complex::with_val(prec, 1)
    }
    fn from_i64(v: i64, prec: u32) -> Self {
        Complex::with_val(prec, v)
    }
    fn from_rational(r: &Rational, prec: u32) -> Self {
        Complex::with_val(prec, (r, 0))
    }
    fn from_gauss(q: &GaussRational, prec: u32) -> Option<Self> {
        Some(q.to_complex(prec))
    }
    fn from_complex(c: &Complex, prec: u32) -> Option<Self> {
        Some(Complex::with_val(prec, c))
    }
    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Complex::with_val(self.ctx().max(o.ctx()), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Complex::with_val(self.ctx().max(o.ctx()), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Complex::with_val(self.ctx().max(o.ctx()), self * o)
    }
    fn neg(&self) -> Self {
        Complex::with_val(self.ctx(), -self)
    }
    fn inv(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| Complex::with_val(self.ctx(), self.recip_ref()))
    }
    fn conj(&self) -> Self {
        Complex::with_val(self.ctx(), self.conj_ref())
    }
    fn magnitude(&self) -> f64 {
        Float::with_val(self.ctx(), self.abs_ref()).to_f64()
    }
    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, self)
    }
    fn work_precision(prec: u32) -> u32 {
        prec
    }
}

/// `2^-bits` as an `f64` (saturates at the subnormal range).
pub fn two_pow_neg(bits: f64) -> f64 {
    (-bits).exp2()
}
