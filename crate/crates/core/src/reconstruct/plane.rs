use serde::{Deserialize, Serialize};

use crate::polycore::linalg::{column_kernel, solve};
use crate::polycore::scalar::two_pow_neg;
use crate::polycore::{monic_wronskian, Poly, PolyError, Scalar};

use super::flag::WronskianFlag;
use super::operator::LinearOperator;
use super::ReconstructError;

/// Smallest acceptable ratio between the weakest pivot and the strongest
/// dependent column in numeric rank decisions.
pub const RANK_GAP: f64 = 1e6;

/// Relative threshold for numeric rank decisions: `2^{-prec/2}`, or 0 when exact.
pub fn rank_tolerance<S: Scalar>(ctx: S::Ctx) -> f64 {
    if S::EXACT {
        0.0
    } else {
        two_pow_neg(S::work_precision(ctx) as f64 / 2.0)
    }
}

/// A p-plane of polynomials in canonical reduced form.
///
/// `basis[l]` is monic of degree `d_l` with `d_1 < … < d_p`, and the
/// coefficient of `x^{d_l}` vanishes in every other basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct PPlane<S: Scalar> {
    basis: Vec<Poly<S>>,
}

impl<S: Scalar> PPlane<S> {
    /// Canonical form of the span of `basis`.
    pub fn new(basis: &[Poly<S>]) -> Result<Self, ReconstructError> {
        let first = basis.first().ok_or(ReconstructError::DependentBasis)?;
        let ctx = first.ctx();
        let p = basis.len();
        let top = basis.iter().map(Poly::len_degree).max().unwrap_or(0);
        // columns scanned from the top degree down: pivots are the realized degrees
        let cols: Vec<Vec<S>> = (0..=top).rev().map(|e| basis.iter().map(|b| b.coeff(e)).collect()).collect();
        let ker = column_kernel(&cols, rank_tolerance::<S>(ctx));
        if ker.pivots.len() != p {
            return Err(ReconstructError::DependentBasis);
        }
        if ker.gap < RANK_GAP {
            return Err(ReconstructError::RankGap(ker.gap));
        }
        let degs: Vec<usize> = ker.pivots.iter().map(|&c| top - c).collect();
        let bp: Vec<Vec<S>> = (0..p).map(|r| degs.iter().map(|&e| basis[r].coeff(e)).collect()).collect();
        // rows of B_P^{-1}·B, one column at a time
        let mut rows = vec![vec![S::zero(ctx); top + 1]; p];
        for e in 0..=top {
            let col: Vec<S> = basis.iter().map(|b| b.coeff(e)).collect();
            let x = solve(bp.clone(), col).ok_or(ReconstructError::DependentBasis)?;
            for (r, v) in x.into_iter().enumerate() {
                rows[r][e] = v;
            }
        }
        let mut out: Vec<(usize, Poly<S>)> = rows
            .into_iter()
            .zip(&degs)
            .map(|(mut row, &dg)| {
                // exact zeros at the pivots and above the row's own degree
                for &e in &degs {
                    row[e] = if e == dg { S::one(ctx) } else { S::zero(ctx) };
                }
                row.truncate(dg + 1);
                (dg, Poly::new(row, ctx))
            })
            .collect();
        out.sort_by_key(|(dg, _)| *dg);
        Ok(Self { basis: out.into_iter().map(|(_, b)| b).collect() })
    }

    pub fn basis(&self) -> &[Poly<S>] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.basis.iter().map(Poly::len_degree).collect()
    }

    pub fn ctx(&self) -> S::Ctx {
        self.basis[0].ctx()
    }

    /// Monic Wronskian of the first `i` basis elements.
    pub fn sub_wronskian(&self, i: usize) -> Result<Poly<S>, PolyError> {
        monic_wronskian(&self.basis[..i])
    }

    pub fn wronskian(&self) -> Result<Poly<S>, PolyError> {
        self.sub_wronskian(self.len())
    }

    /// Orders of vanishing at `a` realized by the span of the first `i` basis elements, ascending.
    pub fn orders_at(&self, a: &S, i: usize) -> Vec<usize> {
        let shifted: Vec<Vec<S>> = self.basis[..i].iter().map(|b| b.taylor_at(a)).collect();
        let top = shifted.iter().map(Vec::len).max().unwrap_or(0);
        let ctx = self.ctx();
        let cols: Vec<Vec<S>> = (0..top)
            .map(|k| shifted.iter().map(|c| c.get(k).cloned().unwrap_or_else(|| S::zero(ctx))).collect())
            .collect();
        column_kernel(&cols, rank_tolerance::<S>(ctx)).pivots
    }

    /// Largest coefficient-wise distance, relative to the largest coefficient; infinite if the degrees differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.degrees() != other.degrees() {
            return f64::INFINITY;
        }
        let scale = self.basis.iter().chain(&other.basis).map(Poly::max_magnitude).fold(0.0, f64::max);
        let diff = self
            .basis
            .iter()
            .zip(&other.basis)
            .map(|(a, b)| (a - b).max_magnitude())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    pub fn digest(&self) -> PlaneDigest {
        PlaneDigest { degrees: self.degrees(), basis: self.basis.iter().map(|b| b.to_string()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneDigest {
    pub degrees: Vec<usize>,
    pub basis: Vec<String>,
}

/// Polynomial solutions of degree at most `d`, by linear algebra on the monomial basis.
pub fn kernel_plane<S: Scalar>(op: &LinearOperator<S>, d: usize) -> Result<PPlane<S>, ReconstructError> {
    let ctx = op.ctx();
    let images: Vec<Poly<S>> = (0..=d).map(|k| op.apply(&Poly::monomial(k, ctx))).collect();
    let rows = images.iter().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
    let cols: Vec<Vec<S>> = images.iter().map(|p| (0..rows).map(|k| p.coeff(k)).collect()).collect();
    let ker = column_kernel(&cols, rank_tolerance::<S>(ctx));
    if ker.free.len() != op.order() {
        return Err(ReconstructError::KernelDimension { expected: op.order(), found: ker.free.len() });
    }
    if ker.gap < RANK_GAP {
        return Err(ReconstructError::RankGap(ker.gap));
    }
    let basis: Vec<Poly<S>> = ker.vectors.into_iter().map(|v| Poly::new(v, ctx)).collect();
    PPlane::new(&basis)
}

/// `G` with `∫ N/T^2 = G/T`, for monic `T` with the given simple roots.
///
/// Fails when a residue of `N/T^2` does not vanish.
fn integrate_over_square<S: Scalar>(
    n: &Poly<S>,
    t: &Poly<S>,
    roots: &[S],
    level: usize,
) -> Result<Poly<S>, ReconstructError> {
    let ctx = n.ctx();
    if roots.is_empty() {
        return Ok(n.integral());
    }
    let (q, _) = n.div_rem(&(t * t)).ok_or(ReconstructError::DependentBasis)?;
    let mut g = t * &q.integral();
    let (dn, dt, ddt) = (n.derivative(), t.derivative(), t.nth_derivative(2));
    let tol = super::verify::check_tolerance::<S>(ctx);
    for r in roots {
        let d1 = dt.eval(r);
        let d1_inv = d1.inv().ok_or_else(|| ReconstructError::NonSimpleRoot(format!("{r} (root of T at level {level})")))?;
        let nv = n.eval(r);
        // N/T^2 = a/(x-r)^2 + b/(x-r) + regular
        let a = nv.mul(&d1_inv).mul(&d1_inv);
        let b_num = dn.eval(r).mul(&d1).sub(&nv.mul(&ddt.eval(r)));
        let b = b_num.mul(&d1_inv).mul(&d1_inv).mul(&d1_inv);
        let ra = r.magnitude();
        let scale = (dn.eval_scale(ra) * d1.magnitude() + n.eval_scale(ra) * ddt.eval_scale(ra)) * d1_inv.magnitude().powi(3);
        if !b.negligible(scale.max(f64::MIN_POSITIVE), tol) {
            return Err(ReconstructError::Residue { level, root: r.to_string(), value: b.magnitude() });
        }
        let (cof, _) = t.deflate(r);
        g = &g - &cof.scale(&a);
    }
    Ok(g)
}

/// The plane spanned by the nested antiderivatives of the flag, integration constants 0.
pub fn iterated_integral_plane<S: Scalar>(flag: &WronskianFlag<S>) -> Result<PPlane<S>, ReconstructError> {
    let p = flag.p;
    let mut basis = vec![flag.w[1].clone()];
    for i in 1..p {
        let mut g = flag.t[p - i - 1].clone();
        for l in (1..=i).rev() {
            let n = &(&flag.y[l] * &flag.t[p - l + 1]) * &g;
            g = integrate_over_square(&n, &flag.t[p - l], &flag.roots[p - l], l)?;
        }
        basis.push(g);
    }
    PPlane::new(&basis)
}
