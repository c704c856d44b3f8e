use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complex, Rational};

use super::scalar::{GaussRational, Scalar};

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// Exactly-zero leading coefficients are always stripped, so the zero
/// polynomial has an empty coefficient list and `degree() == None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
    ctx: S::Ctx,
}

/// Exact polynomial over the rationals.
pub type ExactPoly = Poly<Rational>;
/// Exact polynomial over the Gaussian rationals.
pub type GaussPoly = Poly<GaussRational>;
/// Numeric polynomial; the context is the working precision in bits.
pub type NumPoly = Poly<Complex>;

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>, ctx: S::Ctx) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, ctx }
    }

    pub fn zero(ctx: S::Ctx) -> Self {
        Self { coeffs: Vec::new(), ctx }
    }

    pub fn one(ctx: S::Ctx) -> Self {
        Self::constant(S::one(ctx))
    }

    pub fn constant(c: S) -> Self {
        let ctx = c.ctx();
        Self::new(vec![c], ctx)
    }

    /// `x - a`
    pub fn linear_root(a: &S) -> Self {
        let ctx = a.ctx();
        Self::new(vec![a.neg(), S::one(ctx)], ctx)
    }

    /// `x^k`
    pub fn monomial(k: usize, ctx: S::Ctx) -> Self {
        let mut c = vec![S::zero(ctx); k + 1];
        c[k] = S::one(ctx);
        Self::new(c, ctx)
    }

    /// Monic polynomial `∏ (x - r)`.
    pub fn from_roots(roots: &[S], ctx: S::Ctx) -> Self {
        roots
            .iter()
            .fold(Self::one(ctx), |acc, r| &acc * &Self::linear_root(r))
    }

    pub fn from_i64s(c: &[i64], ctx: S::Ctx) -> Self {
        Self::new(c.iter().map(|&v| S::from_i64(v, ctx)).collect(), ctx)
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(|| S::zero(self.ctx))
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0; only for size bookkeeping.
    pub fn len_degree(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero(self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&S::from_i64(k as i64, self.ctx)))
            .collect();
        Self::new(c, self.ctx)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut c = vec![S::zero(self.ctx)];
        for (k, a) in self.coeffs.iter().enumerate() {
            let d = S::from_i64(k as i64 + 1, self.ctx);
            c.push(a.div(&d).expect("nonzero integer"));
        }
        Self::new(c, self.ctx)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect(), self.ctx)
    }

    pub fn monic(&self) -> Option<Self> {
        let inv = self.lc()?.inv()?;
        Some(self.scale(&inv))
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.ctx), |acc, _| &acc * self)
    }

    /// Euclidean division over a field; `None` for a zero divisor.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let inv = d.lc()?.inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Self::zero(self.ctx), self.clone()));
        }
        let mut q = vec![S::zero(self.ctx); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(dc));
                }
            }
            // the leading slot is eliminated by construction; clear rounding residue
            r[k + dd] = S::zero(self.ctx);
            q[k] = c;
        }
        r.truncate(dd);
        Some((Self::new(q, self.ctx), Self::new(r, self.ctx)))
    }

    /// Synthetic division by `x - a`: returns the quotient and the remainder `P(a)`.
    pub fn deflate(&self, a: &S) -> (Self, S) {
        if self.coeffs.is_empty() {
            return (self.clone(), S::zero(self.ctx));
        }
        let n = self.coeffs.len();
        let mut q = vec![S::zero(self.ctx); n - 1];
        let mut acc = S::zero(self.ctx);
        for k in (0..n).rev() {
            acc = acc.mul(a).add(&self.coeffs[k]);
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        (Self::new(q, self.ctx), acc)
    }

    /// Monic gcd via the Euclidean algorithm (meaningful for exact domains).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic().unwrap_or(a)
    }

    /// Coefficients of `P(a + h)` in powers of `h`.
    pub fn taylor_at(&self, a: &S) -> Vec<S> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division (Horner shift)
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].mul(a);
                c[j] = c[j].add(&t);
            }
        }
        c
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// `Σ |a_k| |x|^k`, the natural scale of `|P(x)|` in rounding analysis.
    pub fn eval_scale(&self, x_abs: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x_abs + c.magnitude())
    }

    pub fn to_numeric(&self, prec: u32) -> NumPoly {
        Poly::new(self.coeffs.iter().map(|c| c.to_complex(prec)).collect(), prec)
    }

    /// Re-embed into another domain; `None` if some coefficient does not fit.
    pub fn try_map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> Option<T>) -> Option<Poly<T>> {
        let c = self.coeffs.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(Poly::new(c, ctx))
    }

    /// Max coefficient-wise distance to `other`, relative to the larger of the two norms.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let diff = (0..n)
            .map(|k| self.coeff(k).sub(&other.coeff(k)).magnitude())
            .fold(0.0, f64::max);
        let scale = self.max_magnitude().max(other.max_magnitude());
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

impl ExactPoly {
    /// Convenience constructor from `(num, den)` pairs.
    pub fn from_ratios(c: &[(i64, i64)]) -> Self {
        Poly::new(c.iter().map(|&(n, d)| Rational::from((n, d))).collect(), ())
    }

    pub fn to_gauss(&self) -> GaussPoly {
        Poly::new(self.coeffs.iter().map(|c| GaussRational::real(c.clone())).collect(), ())
    }
}

impl NumPoly {
    pub fn precision(&self) -> u32 {
        self.ctx
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, o: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect();
        Poly::new(c, self.ctx)
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, o: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect();
        Poly::new(c, self.ctx)
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, o: &Poly<S>) -> Poly<S> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.ctx);
        }
        let mut c = vec![S::zero(self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(c, self.ctx)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect(), self.ctx)
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> ExactPoly {
        Poly::from_i64s(c, ())
    }

    #[test]
    fn zero_degree_is_sentinel() {
        let z = q(&[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(q(&[5]).degree(), Some(0));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = q(&[1, 2, 3, 4]);
        let b = q(&[1, 1]);
        let (qq, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&qq * &b) + &r, a);
        assert_eq!(r.degree(), Some(0));
    }

    #[test]
    fn taylor_shift_matches_expansion() {
        // (x)^2 at a = 1: (1+h)^2 = 1 + 2h + h^2
        let p = q(&[0, 0, 1]);
        let t = p.taylor_at(&Rational::from(1));
        assert_eq!(t, vec![Rational::from(1), Rational::from(2), Rational::from(1)]);
    }

    #[test]
    fn deflate_gives_value_as_remainder() {
        let p = q(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let (qq, r) = p.deflate(&Rational::from(2));
        assert!(Scalar::is_zero(&r));
        assert_eq!(qq, q(&[3, -4, 1]));
        let (_, r) = p.deflate(&Rational::from(0));
        assert_eq!(r, Rational::from(-6));
    }

    #[test]
    fn gcd_is_monic() {
        let a = &q(&[-1, 1]) * &q(&[2, 2]);
        let b = &q(&[-1, 1]) * &q(&[3, 1]);
        assert_eq!(a.gcd(&b), q(&[-1, 1]));
    }

    #[test]
    fn integral_inverts_derivative() {
        let p = q(&[0, 3, -2, 7]);
        assert_eq!(p.derivative().integral(), p);
    }
}
