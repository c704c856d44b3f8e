use rug::{Complex, Float};

use super::poly::{GaussPoly, Poly};
use super::resultant::{discriminant, resultant};
use super::roots::roots;
use super::scalar::{GaussRational, Scalar};
use super::PolyError;

/// Pairwise distinct marked points `z_1, …, z_n`, always held exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedPoints {
    z: Vec<GaussRational>,
}

impl MarkedPoints {
    pub fn new(z: Vec<GaussRational>) -> Result<Self, PolyError> {
        if z.is_empty() {
            return Err(PolyError::BadMarkedPoints);
        }
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                if z[i] == z[j] {
                    return Err(PolyError::BadMarkedPoints);
                }
            }
        }
        Ok(Self { z })
    }

    pub fn from_reals(v: &[i64]) -> Result<Self, PolyError> {
        Self::new(v.iter().map(|&x| GaussRational::from_ints(x, 0)).collect())
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn points(&self) -> &[GaussRational] {
        &self.z
    }

    /// Smallest pairwise distance; infinite for a single point.
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.z.len() {
            for j in i + 1..self.z.len() {
                let d = self.z[i].sub(&self.z[j]).magnitude();
                best = best.min(d);
            }
        }
        best
    }

    /// Radius within which a numeric root is attributed to a marked point.
    pub fn capture_radius(&self) -> f64 {
        let sep = self.separation();
        if sep.is_finite() {
            sep / 4.0
        } else {
            0.25
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.z.iter().map(|z| z.magnitude()).fold(0.0, f64::max)
    }

    /// The points embedded in `S`; `None` entries cannot be roots over `S`.
    pub fn in_domain<S: Scalar>(&self, ctx: S::Ctx) -> Vec<Option<S>> {
        self.z.iter().map(|z| S::from_gauss(z, ctx)).collect()
    }

    /// `∏ (x - z_j)^{e_j}` over the Gaussian rationals.
    pub fn product(&self, e: &[usize]) -> GaussPoly {
        let mut acc = GaussPoly::one(());
        for (z, &k) in self.z.iter().zip(e) {
            acc = &acc * &GaussPoly::linear_root(z).pow(k);
        }
        acc
    }

    /// `∏ (x - z_j)^{e_j}` in an arbitrary domain (points not in the domain are skipped).
    pub fn product_in<S: Scalar>(&self, e: &[usize], ctx: S::Ctx) -> Poly<S> {
        let mut acc = Poly::one(ctx);
        for (z, &k) in self.in_domain::<S>(ctx).iter().zip(e) {
            if let Some(z) = z {
                acc = &acc * &Poly::linear_root(z).pow(k);
            }
        }
        acc
    }
}

/// Factorization `P = lc(P)·T·Z` with `Z` supported on the marked points.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedSplit<S: Scalar> {
    pub lc: S,
    pub t: Poly<S>,
    pub z: Poly<S>,
    /// Multiplicity of each marked point as a root of `P`.
    pub mult: Vec<usize>,
}

pub fn split_marked<S: Scalar>(p: &Poly<S>, z: &MarkedPoints) -> Result<MarkedSplit<S>, PolyError> {
    let lc = p.lc().ok_or(PolyError::ZeroPolynomial)?.clone();
    let mut t = p.monic().ok_or(PolyError::ZeroPolynomial)?;
    let ctx = p.ctx();
    let mut mult = vec![0; z.len()];
    if S::EXACT {
        for (j, zj) in z.in_domain::<S>(ctx).into_iter().enumerate() {
            let Some(zj) = zj else { continue };
            loop {
                if t.degree() == Some(0) {
                    break;
                }
                let (q, r) = t.deflate(&zj);
                if !r.is_zero() {
                    break;
                }
                t = q;
                mult[j] += 1;
            }
        }
        let zp = z.product_in(&mult, ctx);
        return Ok(MarkedSplit { lc, t, z: zp, mult });
    }

    let prec = S::work_precision(ctx);
    let rs = roots(&t.to_numeric(prec))?;
    let radius = z.capture_radius();
    let centres: Vec<Complex> = z.points().iter().map(|g| g.to_complex(prec)).collect();
    let mut rest = Vec::new();
    for r in rs {
        let hit = centres.iter().position(|c| {
            let d = Complex::with_val(prec, &r - c);
            Float::with_val(53, d.abs_ref()).to_f64() < radius
        });
        match hit {
            Some(j) => mult[j] += 1,
            None => rest.push(S::from_complex(&r, ctx).expect("numeric domain")),
        }
    }
    let t = Poly::from_roots(&rest, ctx);
    let zp = z.product_in(&mult, ctx);
    Ok(MarkedSplit { lc, t, z: zp, mult })
}

/// `Δ_z(P) = Δ(T)·Res(Z, T)^2`.
pub fn rel_discriminant<S: Scalar>(p: &Poly<S>, z: &MarkedPoints) -> Result<S, PolyError> {
    let s = split_marked(p, z)?;
    let r = resultant(&s.z, &s.t)?;
    Ok(discriminant(&s.t)?.mul(&r).mul(&r))
}

/// `Res_z(P_1, P_2) = Res(T_1, T_2)·Res(T_1, Z_2)·Res(T_2, Z_1)`.
pub fn rel_resultant<S: Scalar>(p1: &Poly<S>, p2: &Poly<S>, z: &MarkedPoints) -> Result<S, PolyError> {
    let a = split_marked(p1, z)?;
    let b = split_marked(p2, z)?;
    Ok(resultant(&a.t, &b.t)?
        .mul(&resultant(&a.t, &b.z)?)
        .mul(&resultant(&b.t, &a.z)?))
}
