use rug::Complex;

use crate::polycore::scalar::two_pow_neg;
use crate::polycore::Scalar;

use super::problem::SchubertProblem;
use super::MasterError;

/// Values of the Bethe variables; `t[i-1]` holds the `k_i` roots of `T_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BethePoint<S: Scalar> {
    pub t: Vec<Vec<S>>,
}

pub type NumPoint = BethePoint<Complex>;

impl<S: Scalar> BethePoint<S> {
    pub fn new(prob: &SchubertProblem, t: Vec<Vec<S>>) -> Result<Self, MasterError> {
        let sizes: Vec<usize> = t.iter().map(|g| g.len()).collect();
        if sizes != prob.k.k {
            return Err(MasterError::GroupSizes { expected: prob.k.k.clone(), got: sizes });
        }
        Ok(Self { t })
    }

    pub fn flat(&self) -> Vec<S> {
        self.t.iter().flatten().cloned().collect()
    }

    pub fn from_flat(prob: &SchubertProblem, v: &[S]) -> Self {
        let mut t = Vec::with_capacity(prob.p - 1);
        let mut at = 0;
        for &k in &prob.k.k {
            t.push(v[at..at + k].to_vec());
            at += k;
        }
        Self { t }
    }

    pub fn len(&self) -> usize {
        self.t.iter().map(|g| g.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl NumPoint {
    pub fn precision(&self) -> u32 {
        self.t.iter().flatten().map(|c| c.prec().0).max().unwrap_or(crate::polycore::MIN_PRECISION)
    }

    /// Residuals in flat order; collisions give infinite entries.
    pub fn flat_residuals(&self, prob: &SchubertProblem) -> Vec<Complex> {
        match bethe_residuals(prob, self) {
            Ok(r) => r.into_iter().flatten().collect(),
            Err(_) => vec![Complex::with_val(self.precision(), f64::INFINITY); self.len()],
        }
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self { t: self.t.iter().map(|g| g.iter().map(|c| Complex::with_val(prec, c)).collect()).collect() }
    }
}

/// `2^{-prec/3}`: distances below this (relative to `1 + |t|`) count as coincidences.
pub fn sep_tol(prec: u32) -> f64 {
    two_pow_neg(prec as f64 / 3.0)
}

fn marked_in<S: Scalar>(prob: &SchubertProblem, ctx: S::Ctx) -> Result<Vec<S>, MasterError> {
    prob.z
        .in_domain::<S>(ctx)
        .into_iter()
        .map(|z| z.ok_or(MasterError::Domain))
        .collect()
}

fn ctx_of<S: Scalar>(t: &BethePoint<S>) -> Option<S::Ctx> {
    t.t.iter().flatten().next().map(|c| c.ctx())
}

/// Every factor of the master function, as `(base, exponent)`.
fn factors<S: Scalar>(prob: &SchubertProblem, t: &BethePoint<S>, zs: &[S]) -> Vec<(S, i64)> {
    let mut out = Vec::new();
    let p = prob.p;
    for i in 0..p - 1 {
        let g = &t.t[i];
        for l in 0..g.len() {
            for s in l + 1..g.len() {
                out.push((g[l].sub(&g[s]), 2));
            }
        }
        if i + 1 < p - 1 {
            for a in g {
                for b in &t.t[i + 1] {
                    out.push((a.sub(b), -1));
                }
            }
        }
        for a in g {
            for (j, z) in zs.iter().enumerate() {
                let e = prob.expo[i][j];
                if e != 0 {
                    out.push((a.sub(z), e));
                }
            }
        }
    }
    out
}

/// `log Φ` at a numeric point with flags for vanishing and polar factors.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterValue {
    /// Sum of principal logarithms; `None` when a factor is zero.
    pub log: Option<Complex>,
    /// A factor with positive exponent vanishes: the critical value would be 0.
    pub zero: bool,
    /// A factor with negative exponent vanishes: `Φ` is undefined.
    pub pole: bool,
}

pub fn master_log_value(prob: &SchubertProblem, t: &NumPoint) -> MasterValue {
    let prec = t.precision();
    let zs = marked_in::<Complex>(prob, prec).expect("numeric domain holds every point");
    let mut acc = Complex::new(prec);
    let (mut zero, mut pole) = (false, false);
    for (base, e) in factors(prob, t, &zs) {
        if Scalar::is_zero(&base) {
            if e > 0 {
                zero = true;
            } else {
                pole = true;
            }
            continue;
        }
        acc += Complex::with_val(prec, base.ln_ref()) * e;
    }
    MasterValue { log: (!zero && !pole).then_some(acc), zero, pole }
}

/// `Φ` itself in any domain; `None` at a pole.
pub fn master_value<S: Scalar>(prob: &SchubertProblem, t: &BethePoint<S>, ctx: S::Ctx) -> Result<Option<S>, MasterError> {
    let zs = marked_in::<S>(prob, ctx)?;
    let mut acc = S::one(ctx);
    for (base, e) in factors(prob, t, &zs) {
        if e >= 0 {
            acc = acc.mul(&base.pow(e as u32));
        } else {
            match base.inv() {
                Some(inv) => acc = acc.mul(&inv.pow((-e) as u32)),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(acc))
}

/// Left-hand sides of the Bethe equations, grouped like `t`.
pub fn bethe_residuals<S: Scalar>(prob: &SchubertProblem, t: &BethePoint<S>) -> Result<Vec<Vec<S>>, MasterError> {
    let Some(ctx) = ctx_of(t) else {
        return Ok(vec![Vec::new(); prob.p - 1]);
    };
    let zs = marked_in::<S>(prob, ctx)?;
    let p = prob.p;
    let recip = |a: &S, b: &S, what: &dyn Fn() -> String| a.sub(b).inv().ok_or_else(|| MasterError::Collision(what()));
    let mut out = Vec::with_capacity(p - 1);
    for i in 0..p - 1 {
        let g = &t.t[i];
        let mut row = Vec::with_capacity(g.len());
        for l in 0..g.len() {
            let mut acc = S::zero(ctx);
            for s in 0..g.len() {
                if s != l {
                    let r = recip(&g[l], &g[s], &|| format!("t^({})_{} = t^({})_{}", i + 1, l + 1, i + 1, s + 1))?;
                    acc = acc.add(&r.add(&r));
                }
            }
            for nb in [i.checked_sub(1), (i + 1 < p - 1).then_some(i + 1)].into_iter().flatten() {
                for (s, u) in t.t[nb].iter().enumerate() {
                    let r = recip(&g[l], u, &|| format!("t^({})_{} = t^({})_{}", i + 1, l + 1, nb + 1, s + 1))?;
                    acc = acc.sub(&r);
                }
            }
            for (j, z) in zs.iter().enumerate() {
                let e = prob.expo[i][j];
                if e != 0 {
                    let r = recip(&g[l], z, &|| format!("t^({})_{} = z_{}", i + 1, l + 1, j + 1))?;
                    acc = acc.add(&r.mul(&S::from_i64(e, ctx)));
                }
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

/// Largest residual magnitude.
pub fn residual_norm<S: Scalar>(res: &[Vec<S>]) -> f64 {
    res.iter().flatten().map(|r| r.magnitude()).fold(0.0, f64::max)
}

/// Jacobian of the Bethe residuals in flat coordinates.
pub fn bethe_jacobian(prob: &SchubertProblem, t: &NumPoint) -> Option<Vec<Vec<Complex>>> {
    let prec = t.precision();
    let zs = marked_in::<Complex>(prob, prec).ok()?;
    let p = prob.p;
    let mut offset = vec![0; p];
    for i in 0..p - 1 {
        offset[i + 1] = offset[i] + t.t[i].len();
    }
    let n = offset[p - 1];
    let mut jac = vec![vec![Complex::new(prec); n]; n];
    let inv_sq = |a: &Complex, b: &Complex| -> Option<Complex> {
        let d = Complex::with_val(prec, a - b);
        let d2 = Complex::with_val(prec, d.square_ref());
        Scalar::inv(&d2)
    };
    for i in 0..p - 1 {
        let g = &t.t[i];
        for l in 0..g.len() {
            let row = offset[i] + l;
            let mut diag = Complex::new(prec);
            for s in 0..g.len() {
                if s != l {
                    let q = inv_sq(&g[l], &g[s])?;
                    diag -= Complex::with_val(prec, &q * 2u32);
                    jac[row][offset[i] + s] += Complex::with_val(prec, &q * 2u32);
                }
            }
            for nb in [i.checked_sub(1), (i + 1 < p - 1).then_some(i + 1)].into_iter().flatten() {
                for (s, u) in t.t[nb].iter().enumerate() {
                    let q = inv_sq(&g[l], u)?;
                    diag += &q;
                    jac[row][offset[nb] + s] -= &q;
                }
            }
            for (j, z) in zs.iter().enumerate() {
                let e = prob.expo[i][j];
                if e != 0 {
                    let q = inv_sq(&g[l], z)?;
                    diag -= Complex::with_val(prec, &q * e);
                }
            }
            jac[row][row] += diag;
        }
    }
    Some(jac)
}

/// Admissibility verdict with the reasons it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub ok: bool,
    pub reasons: Vec<String>,
}

fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
    let prec = a.prec().0.max(b.prec().0);
    let d = Complex::with_val(prec, a - b).magnitude();
    d <= tol * (1.0 + a.magnitude().max(b.magnitude()))
}

/// Distinct values inside each group, no value shared by neighbouring groups,
/// and no value at a marked point, all decided at tolerance `tol`.
pub fn is_admissible(prob: &SchubertProblem, t: &NumPoint, tol: f64) -> Admissibility {
    let prec = t.precision();
    let zs = marked_in::<Complex>(prob, prec).expect("numeric domain holds every point");
    let mut reasons = Vec::new();
    let p = prob.p;
    for i in 0..p - 1 {
        let g = &t.t[i];
        for l in 0..g.len() {
            for s in l + 1..g.len() {
                if close(&g[l], &g[s], tol) {
                    reasons.push(format!("repeated root in group {}: t_{} = t_{}", i + 1, l + 1, s + 1));
                }
            }
            if i + 1 < p - 1 {
                for (s, u) in t.t[i + 1].iter().enumerate() {
                    if close(&g[l], u, tol) {
                        reasons.push(format!(
                            "groups {} and {} share a value: t^({})_{} = t^({})_{}",
                            i + 1,
                            i + 2,
                            i + 1,
                            l + 1,
                            i + 2,
                            s + 1
                        ));
                    }
                }
            }
            for (j, z) in zs.iter().enumerate() {
                if close(&g[l], z, tol) {
                    reasons.push(format!("marked-point collision: t^({})_{} = z_{}", i + 1, l + 1, j + 1));
                }
            }
        }
    }
    Admissibility { ok: reasons.is_empty(), reasons }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{discriminant, resultant, GaussRational, MarkedPoints, Poly};
    use rug::Rational;

    fn worked() -> SchubertProblem {
        let z = MarkedPoints::from_reals(&[0, 1]).unwrap();
        SchubertProblem::build(2, 2, z, vec![vec![1, 0], vec![1, 0], vec![0, 0]]).unwrap()
    }

    fn c(re: f64) -> Complex {
        Complex::with_val(128, re)
    }

    #[test]
    fn worked_value_and_residual() {
        let prob = worked();
        let t = BethePoint::new(&prob, vec![vec![c(0.5)]]).unwrap();
        let v = master_log_value(&prob, &t);
        let phi = Complex::with_val(128, v.log.unwrap().exp_ref());
        assert!((phi.real().to_f64() + 4.0).abs() < 1e-30 && phi.imag().to_f64().abs() < 1e-30);
        let r = bethe_residuals(&prob, &t).unwrap();
        assert!(residual_norm(&r) < 1e-35);

        let half = GaussRational::new(Rational::from((1, 2)), Rational::new());
        let te = BethePoint::new(&prob, vec![vec![half.clone()]]).unwrap();
        assert_eq!(master_value(&prob, &te, ()).unwrap().unwrap(), GaussRational::from_ints(-4, 0));
        // Δ(T)/Res(T, W) form
        let tp = Poly::from_roots(&[half], ());
        let expect = discriminant(&tp).unwrap().div(&resultant(&tp, &prob.w_target).unwrap()).unwrap();
        assert_eq!(expect, GaussRational::from_ints(-4, 0));
    }

    #[test]
    fn degenerate_flags() {
        let z = MarkedPoints::from_reals(&[0, 1, 2, 3]).unwrap();
        let prob = SchubertProblem::from_special(2, &[1, 1, 1, 1], &[2], z).unwrap();
        let t = BethePoint::new(&prob, vec![vec![c(0.5), c(0.5)]]).unwrap();
        let v = master_log_value(&prob, &t);
        assert!(v.zero && v.log.is_none());
        let t = BethePoint::new(&prob, vec![vec![c(0.0), c(0.5)]]).unwrap();
        assert!(master_log_value(&prob, &t).pole);
        let adm = is_admissible(&prob, &t, sep_tol(128));
        assert!(!adm.ok && adm.reasons[0].contains("marked-point collision"));
        let e = bethe_residuals(&prob, &BethePoint::new(&prob, vec![vec![c(0.5), c(0.5)]]).unwrap());
        assert!(matches!(e, Err(MasterError::Collision(_))));
    }

    #[test]
    fn adjacent_groups_checked() {
        let z = MarkedPoints::from_reals(&[0, 1, 2]).unwrap();
        let prob = SchubertProblem::from_special(3, &[2, 2, 2], &[2, 1], z).unwrap();
        let t = BethePoint::new(&prob, vec![vec![c(0.3), c(0.7)], vec![c(0.7)]]).unwrap();
        let adm = is_admissible(&prob, &t, sep_tol(128));
        assert!(!adm.ok && adm.reasons[0].contains("share a value"));
    }

    #[test]
    fn three_point_sl3_residual_is_quadratic() {
        let z = MarkedPoints::from_reals(&[0, 1, 2]).unwrap();
        let prob = SchubertProblem::from_special(3, &[1, 1, 1], &[1, 0], z).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for root in [1.0 + s, 1.0 - s] {
            let t = BethePoint::new(&prob, vec![vec![c(root)], vec![]]).unwrap();
            assert!(residual_norm(&bethe_residuals(&prob, &t).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn jacobian_matches_differences() {
        let z = MarkedPoints::from_reals(&[0, 1, 3]).unwrap();
        let prob = SchubertProblem::from_special(3, &[2, 2, 2], &[2, 1], z).unwrap();
        let pt = vec![Complex::with_val(128, (0.4, 0.3)), Complex::with_val(128, (2.1, -0.2)), Complex::with_val(128, (1.3, 0.9))];
        let t = BethePoint::from_flat(&prob, &pt);
        let jac = bethe_jacobian(&prob, &t).unwrap();
        let h = 1e-12;
        for col in 0..3 {
            let mut plus = pt.clone();
            let mut minus = pt.clone();
            plus[col] += h;
            minus[col] -= h;
            let fp = BethePoint::from_flat(&prob, &plus).flat_residuals(&prob);
            let fm = BethePoint::from_flat(&prob, &minus).flat_residuals(&prob);
            for row in 0..3 {
                let fd = Complex::with_val(128, &fp[row] - &fm[row]) / (2.0 * h);
                let diff = Complex::with_val(128, &fd - &jac[row][col]).magnitude();
                assert!(diff < 1e-9 * (1.0 + jac[row][col].magnitude()), "({row},{col})");
            }
        }
    }
}
