//! Resultants and discriminants in the root-product convention.
//!
//! Both inputs are normalized to monic first, so for `P = ∏(x - a_i)` and
//! `Q = ∏(x - b_j)`:
//!
//! * `Res(P, Q) = ∏ (a_i - b_j)`
//! * `Δ(P) = ∏_{i<j} (a_i - a_j)^2`, and `Δ(P) = 1` for `deg P <= 1`.
//!
//! Exact domains use the Euclidean remainder sequence; numeric domains
//! multiply out the computed roots.

use rug::Complex;

use super::poly::Poly;
use super::roots::roots;
use super::scalar::Scalar;
use super::PolyError;

/// Classical (Sylvester) resultant over a field, via Euclidean remainders.
pub fn sylvester_resultant<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> S {
    let ctx = a.ctx();
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return S::zero(ctx);
    };
    if n == 0 {
        return b.lc().unwrap().pow(m as u32);
    }
    if m == 0 {
        return a.lc().unwrap().pow(n as u32);
    }
    let (_, r) = a.div_rem(b).expect("nonzero divisor");
    let Some(dr) = r.degree() else {
        return S::zero(ctx);
    };
    // Res(A, B) = (-1)^{mn} Res(B, A) = (-1)^{mn} lc(B)^{m - deg R} Res(B, R)
    let mut v = b.lc().unwrap().pow((m - dr) as u32).mul(&sylvester_resultant(b, &r));
    if (m * n) % 2 == 1 {
        v = v.neg();
    }
    v
}

fn monic_or_err<S: Scalar>(p: &Poly<S>) -> Result<Poly<S>, PolyError> {
    p.monic().ok_or(PolyError::ZeroPolynomial)
}

fn numeric_roots<S: Scalar>(p: &Poly<S>, prec: u32) -> Result<Vec<Complex>, PolyError> {
    roots(&p.to_numeric(prec))
}

/// `Res(P, Q) = ∏(a_i - b_j)` over the roots of the monic normalizations.
pub fn resultant<S: Scalar>(p: &Poly<S>, q: &Poly<S>) -> Result<S, PolyError> {
    let (p, q) = (monic_or_err(p)?, monic_or_err(q)?);
    if S::EXACT {
        return Ok(sylvester_resultant(&p, &q));
    }
    let prec = numeric_prec(&p);
    let (ra, rb) = (numeric_roots(&p, prec)?, numeric_roots(&q, prec)?);
    let mut acc = Complex::with_val(prec, 1);
    for a in &ra {
        for b in &rb {
            acc *= Complex::with_val(prec, a - b);
        }
    }
    Ok(S::from_complex(&acc, p.ctx()).expect("numeric domain"))
}

/// `Δ(P) = ∏_{i<j}(a_i - a_j)^2` over the roots of the monic normalization.
pub fn discriminant<S: Scalar>(p: &Poly<S>) -> Result<S, PolyError> {
    let p = monic_or_err(p)?;
    let ctx = p.ctx();
    let n = p.len_degree();
    if n <= 1 {
        return Ok(S::one(ctx));
    }
    if S::EXACT {
        let r = sylvester_resultant(&p, &p.derivative());
        // Δ = (-1)^{n(n-1)/2} Res(P, P') for monic P
        return Ok(if (n * (n - 1) / 2) % 2 == 1 { r.neg() } else { r });
    }
    let prec = numeric_prec(&p);
    let rs = numeric_roots(&p, prec)?;
    let mut acc = Complex::with_val(prec, 1);
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            let d = Complex::with_val(prec, &rs[i] - &rs[j]);
            acc *= Complex::with_val(prec, d.square_ref());
        }
    }
    Ok(S::from_complex(&acc, ctx).expect("numeric domain"))
}

fn numeric_prec<S: Scalar>(p: &Poly<S>) -> u32 {
    S::work_precision(p.ctx())
}
