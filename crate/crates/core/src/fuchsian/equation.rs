use crate::polycore::scalar::two_pow_neg;
use crate::polycore::wronskian::poly_determinant;
use crate::polycore::{Poly, Scalar};
use crate::reconstruct::{LinearOperator, PPlane};

use super::profile::clusters;
use super::FuchsError;

/// The equation whose solutions are exactly the plane: the `(p+1)×(p+1)`
/// Wronski determinant of `u, u_1, …, u_p`, expanded along the first column.
///
/// The result is scaled so the leading coefficient is monic, with common
/// factors of the coefficients removed.
pub fn equation_from_plane<S: Scalar>(plane: &PPlane<S>) -> Result<LinearOperator<S>, FuchsError> {
    let basis = plane.basis();
    let ctx = plane.ctx();
    let p = basis.len();
    // derivs[r][c] = u_c^{(r)}
    let mut derivs = vec![basis.to_vec()];
    for r in 1..=p {
        derivs.push(derivs[r - 1].iter().map(Poly::derivative).collect());
    }
    let mut a = Vec::with_capacity(p + 1);
    for r in 0..=p {
        let minor: Vec<Vec<Poly<S>>> = (0..=p).filter(|&k| k != r).map(|k| derivs[k].clone()).collect();
        let m = poly_determinant(&minor, ctx);
        a.push(if r % 2 == 0 { m } else { -&m });
    }
    if a[p].is_zero() {
        return Err(FuchsError::DependentBasis);
    }
    let op = LinearOperator { a }.normalized().ok_or(FuchsError::DependentBasis)?;
    Ok(strip_common_factor(op))
}

/// Divide out the gcd of the coefficients (exactly, or by detecting shared
/// roots of the leading coefficient when numeric).
pub fn strip_common_factor<S: Scalar>(op: LinearOperator<S>) -> LinearOperator<S> {
    let ctx = op.ctx();
    let g = if S::EXACT {
        op.a.iter().fold(Poly::zero(ctx), |g, c| g.gcd(c))
    } else {
        numeric_common_factor(&op)
    };
    if g.degree().unwrap_or(0) == 0 {
        return op;
    }
    let a = op.a.iter().map(|c| c.div_rem(&g).expect("nonzero factor").0).collect();
    LinearOperator { a }.normalized().expect("leading coefficient survives")
}

fn numeric_common_factor<S: Scalar>(op: &LinearOperator<S>) -> Poly<S> {
    let ctx = op.ctx();
    let prec = S::work_precision(ctx);
    let lead = op.a.last().expect("nonempty operator").to_numeric(prec);
    let mut g = Poly::one(ctx);
    let tol = two_pow_neg(prec as f64 / 4.0);
    let op_scale = op.a.iter().map(Poly::max_magnitude).fold(0.0, f64::max);
    let mut rest: Vec<Poly<S>> = op.a.clone();
    // a cluster centre is far more accurate than the individual roots of a near-multiple root
    for cl in clusters(&lead, prec) {
        let Some(rr) = S::from_complex(&cl.centre, ctx) else { continue };
        for _ in 0..cl.size {
            let shared = rest.iter().all(|c| {
                let scale = c.eval_scale(rr.magnitude().max(1.0)).max(op_scale);
                c.eval(&rr).magnitude() <= tol * scale
            });
            if !shared {
                break;
            }
            rest = rest.iter().map(|c| c.deflate(&rr).0).collect();
            g = &g * &Poly::linear_root(&rr);
        }
    }
    g
}
