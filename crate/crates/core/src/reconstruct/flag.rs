use rug::Complex;

use crate::master::{BethePoint, CriticalOrbit, SchubertProblem};
use crate::polycore::{Poly, Scalar};

use super::ReconstructError;

/// Wronskians `W_0 = 1, W_1, …, W_p` of the flag attached to a critical point.
#[derive(Clone, Debug, PartialEq)]
pub struct WronskianFlag<S: Scalar> {
    pub p: usize,
    /// `w[i] = W_i = Z_i·T_{p-i}`.
    pub w: Vec<Poly<S>>,
    /// `t[i] = T_i`, monic; `T_0 = T_p = 1`.
    pub t: Vec<Poly<S>>,
    /// `roots[i]` are the roots of `T_i`.
    pub roots: Vec<Vec<S>>,
    /// `y[l] = Z_{l-1}Z_{l+1}/Z_l^2`, a polynomial by the exponent condition; ones at the ends.
    pub y: Vec<Poly<S>>,
}

impl<S: Scalar> WronskianFlag<S> {
    pub fn ctx(&self) -> S::Ctx {
        self.w[0].ctx()
    }
}

pub fn flag_from_point<S: Scalar>(
    prob: &SchubertProblem,
    pt: &BethePoint<S>,
    ctx: S::Ctx,
) -> Result<WronskianFlag<S>, ReconstructError> {
    let p = prob.p;
    if pt.t.iter().map(Vec::len).ne(prob.k.k.iter().copied()) {
        return Err(ReconstructError::Shape);
    }
    if prob.z.in_domain::<S>(ctx).iter().any(Option::is_none) {
        return Err(ReconstructError::Domain);
    }
    let mut roots = vec![Vec::new(); p + 1];
    for i in 1..p {
        roots[i] = pt.t[i - 1].clone();
    }
    let t: Vec<Poly<S>> = roots.iter().map(|r| Poly::from_roots(r, ctx)).collect();
    let z: Vec<Poly<S>> = (0..=p)
        .map(|i| prob.z.product_in(&prob.mgrid.iter().map(|g| g[i]).collect::<Vec<_>>(), ctx))
        .collect();
    let w = (0..=p).map(|i| &z[i] * &t[p - i]).collect();
    let mut y = vec![Poly::one(ctx); p + 1];
    for (l, yl) in y.iter_mut().enumerate().take(p).skip(1) {
        let e: Vec<usize> = prob
            .mgrid
            .iter()
            .map(|g| g[l - 1] + g[l + 1] - 2 * g[l])
            .collect();
        *yl = prob.z.product_in(&e, ctx);
    }
    Ok(WronskianFlag { p, w, t, roots, y })
}

/// Numeric flag at the precision the orbit was certified at.
pub fn flag_from_orbit(prob: &SchubertProblem, orbit: &CriticalOrbit) -> Result<WronskianFlag<Complex>, ReconstructError> {
    flag_from_point(prob, &orbit.rep, orbit.precision)
}

/// Largest `|W_l''/W_l' - W_{l+1}'/W_{l+1} - W_{l-1}'/W_{l-1}|` over the unmarked roots of `W_1, …, W_{p-1}`.
pub fn residue_identity_defect<S: Scalar>(flag: &WronskianFlag<S>) -> Result<f64, ReconstructError> {
    let p = flag.p;
    let d1: Vec<Poly<S>> = flag.w.iter().map(Poly::derivative).collect();
    let d2: Vec<Poly<S>> = d1.iter().map(Poly::derivative).collect();
    let mut worst: f64 = 0.0;
    for l in 1..p {
        for (s, t) in flag.roots[p - l].iter().enumerate() {
            let at = || format!("{t} (root {} of W_{l})", s + 1);
            let wp = d1[l].eval(t);
            let ratio = |num: &Poly<S>, den: &Poly<S>| num.eval(t).div(&den.eval(t));
            let own = d2[l].eval(t).div(&wp).ok_or_else(|| ReconstructError::NonSimpleRoot(at()))?;
            let up = ratio(&d1[l + 1], &flag.w[l + 1]).ok_or_else(|| ReconstructError::SharedRoot(at()))?;
            let down = ratio(&d1[l - 1], &flag.w[l - 1]).ok_or_else(|| ReconstructError::SharedRoot(at()))?;
            worst = worst.max(own.sub(&up).sub(&down).magnitude());
        }
    }
    Ok(worst)
}
