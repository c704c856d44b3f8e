use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::master::SchubertProblem;
use crate::polycore::{ExactPoly, MarkedPoints, Poly, Scalar};
use crate::reconstruct::{check_tolerance, LinearOperator, PPlane};

use super::equation::equation_from_plane;

/// Outcome of comparing a plane's equation with the special form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialFormVerdict {
    /// Multiplicity of each `z_j` in the Wronskian.
    pub m: Vec<usize>,
    pub matches: bool,
    /// `matches` together with the degree count `Σ d_i = Σ m_j + p(p-1)/2`.
    pub certified: bool,
    pub defects: Vec<String>,
}

fn multiplicity_at<S: Scalar>(w: &Poly<S>, z: &S, tol: f64) -> usize {
    let taylor = w.taylor_at(z);
    let scale = taylor.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    taylor.iter().take_while(|c| c.negligible(scale, tol)).count()
}

/// Check that the equation of `plane` reads `∏(x - z_j) u^{(p)} + F_1 u^{(p-1)} + … + F_p u`
/// with `deg F_i <= n - i` and `F_1 = -Σ m_j ∏_{j' != j}(x - z_{j'})`.
pub fn special_form_check<S: Scalar>(plane: &PPlane<S>, z: &MarkedPoints) -> SpecialFormVerdict {
    let ctx = plane.ctx();
    let tol = check_tolerance::<S>(ctx);
    let p = plane.len();
    let n = z.len();
    let fail = |m: Vec<usize>, msg: String| SpecialFormVerdict { m, matches: false, certified: false, defects: vec![msg] };
    let Some(points) = z.in_domain::<S>(ctx).into_iter().collect::<Option<Vec<S>>>() else {
        return fail(Vec::new(), "marked points outside the coefficient domain".into());
    };
    let w = match plane.wronskian() {
        Ok(w) => w,
        Err(e) => return fail(Vec::new(), e.to_string()),
    };
    let m: Vec<usize> = points.iter().map(|zj| multiplicity_at(&w, zj, tol)).collect();
    let op = match equation_from_plane(plane) {
        Ok(op) => op,
        Err(e) => return fail(m, e.to_string()),
    };
    let mut defects = Vec::new();

    for (j, &mj) in m.iter().enumerate() {
        if mj == 0 {
            defects.push(format!("z_{} is not a root of the Wronskian", j + 1));
        }
    }
    let target = Poly::from_roots(&points, ctx);
    let close = |a: &Poly<S>, b: &Poly<S>| if S::EXACT { a == b } else { a.relative_distance(b) <= tol };
    if let Some(wm) = w.monic() {
        let expect = points
            .iter()
            .zip(&m)
            .fold(Poly::one(ctx), |acc, (zj, &mj)| &acc * &Poly::linear_root(zj).pow(mj));
        if !close(&wm, &expect) {
            defects.push(format!("Wronskian {wm} has roots away from the marked points"));
        }
    }
    if !close(&op.a[p], &target) {
        defects.push(format!("leading coefficient {} != {target}", op.a[p]));
    }
    let scale = op.a.iter().map(Poly::max_magnitude).fold(0.0, f64::max);
    for i in 1..=p {
        let f = &op.a[p - i];
        let bound = n.checked_sub(i);
        let excess = f
            .coeffs()
            .iter()
            .enumerate()
            .any(|(k, c)| bound.is_none_or(|b| k > b) && !c.negligible(scale, tol));
        if excess {
            defects.push(format!("F_{i} = {f} exceeds degree {}", n as i64 - i as i64));
        }
    }
    let mut f1 = Poly::zero(ctx);
    for (j, &mj) in m.iter().enumerate() {
        let others: Vec<S> = points.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, z)| z.clone()).collect();
        f1 = &f1 - &Poly::from_roots(&others, ctx).scale(&S::from_i64(mj as i64, ctx));
    }
    if p >= 1 && !close(&op.a[p - 1], &f1) {
        defects.push(format!("F_1 = {} != {f1}", op.a[p - 1]));
    }

    let matches = defects.is_empty();
    let deg_sum: usize = plane.degrees().iter().sum();
    let certified = matches && deg_sum == m.iter().sum::<usize>() + p * (p - 1) / 2;
    SpecialFormVerdict { m, matches, certified, defects }
}

/// The unique plane with two special points at `0` and `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypergeometricCase {
    pub degrees: Vec<usize>,
    /// The constant coefficient of `u^{(p-2)}`.
    pub c: i64,
    pub operator: LinearOperator<Rational>,
    pub problem: SchubertProblem,
}

/// Forced degrees `(0, 1, …, p-3, m_1+m_2-d+2p-3, d)` and the operator
/// `x(x-1)u^{(p)} + (m_1 - (m_1+m_2)x)u^{(p-1)} + c·u^{(p-2)}`; `None` when the degrees are not admissible.
pub fn hypergeometric_case(p: usize, m1: usize, m2: usize, d: usize) -> Option<HypergeometricCase> {
    if p < 2 || m1 == 0 || m2 == 0 {
        return None;
    }
    let (pi, di) = (p as i64, d as i64);
    let mid = (m1 + m2) as i64 - di + 2 * pi - 3;
    let mut degs: Vec<i64> = (0..pi - 2).collect();
    degs.push(mid);
    degs.push(di);
    if degs[0] < 0 || degs.windows(2).any(|x| x[0] >= x[1]) {
        return None;
    }
    let degrees: Vec<usize> = degs.iter().map(|&x| x as usize).collect();
    let winf: Vec<usize> = (1..=p).map(|l| (d + l).checked_sub(p + degrees[l - 1])).collect::<Option<_>>()?;
    let special = |mj: usize| {
        let mut v = vec![0; p];
        v[0] = mj;
        v
    };
    let z = MarkedPoints::from_reals(&[0, 1]).ok()?;
    let problem = SchubertProblem::build(p, d, z, vec![special(m1), special(m2), winf]).ok()?;
    let c = (di - pi + 2) * ((m1 + m2) as i64 + pi - di - 1);
    let mut a = vec![ExactPoly::zero(()); p + 1];
    a[p] = Poly::from_i64s(&[0, -1, 1], ());
    a[p - 1] = Poly::from_i64s(&[m1 as i64, -((m1 + m2) as i64)], ());
    a[p - 2] = Poly::from_i64s(&[c], ());
    Some(HypergeometricCase { degrees, c, operator: LinearOperator { a }, problem })
}
