//! Simultaneous root finding (Aberth–Ehrlich) with Newton polishing.

use rug::{Complex, Float};

use super::poly::NumPoly;
use super::scalar::{two_pow_neg, Scalar, MIN_PRECISION};
use super::PolyError;

const RETRIES: usize = 4;
const BOOTSTRAP_PREC: u32 = 64;

/// All roots of `p` with multiplicity.
///
/// Each root `r` satisfies `|P(r)| <= 2^-(prec-10) · Σ|a_k||r|^k`; for
/// `|r| <= 1` this is the max-coefficient bound.
pub fn roots(p: &NumPoly) -> Result<Vec<Complex>, PolyError> {
    let prec = p.precision();
    if prec < MIN_PRECISION {
        return Err(PolyError::Precision(prec));
    }
    let n = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    // strip roots at the origin exactly
    let lead_zeros = p.coeffs().iter().take_while(|c| Scalar::is_zero(*c)).count();
    let core = NumPoly::new(p.coeffs()[lead_zeros..].to_vec(), prec);
    let mut out: Vec<Complex> = (0..lead_zeros).map(|_| Complex::new(prec)).collect();
    let m = n - lead_zeros;
    if m == 0 {
        return Ok(out);
    }
    if m == 1 {
        let c = core.coeffs();
        out.push(Complex::with_val(prec, &c[0] / &c[1]).neg());
        return Ok(out);
    }

    let deriv = core.derivative();
    let mut worst = f64::INFINITY;
    for attempt in 0..RETRIES {
        let guesses = initial_guesses(&core, attempt);
        let boot_prec = BOOTSTRAP_PREC.min(prec);
        let low = core.to_numeric(boot_prec);
        let low_d = low.derivative();
        let mut z: Vec<Complex> = guesses.iter().map(|g| Complex::with_val(boot_prec, g)).collect();
        aberth(&low, &low_d, &mut z, 60 + 30 * m);
        let mut z: Vec<Complex> = z.iter().map(|g| Complex::with_val(prec, g)).collect();
        aberth(&core, &deriv, &mut z, 40 + 20 * m);
        polish(&core, &deriv, &mut z);
        let (ok, w) = residuals_ok(&core, &z);
        if ok {
            out.extend(z);
            return Ok(out);
        }
        worst = worst.min(w);
    }
    Err(PolyError::NoConvergence { worst_residual: worst })
}

fn initial_guesses(p: &NumPoly, attempt: usize) -> Vec<(f64, f64)> {
    let n = p.len_degree();
    let c = p.coeffs();
    let lc = c[n].magnitude();
    // Fujiwara bound on root moduli
    let mut bound: f64 = 0.0;
    for k in 0..n {
        let ratio = c[k].magnitude() / lc;
        let e = if k == 0 { 1.0 / n as f64 } else { 1.0 / (n - k) as f64 };
        let v = if k == 0 { (ratio / 2.0).powf(e) } else { ratio.powf(e) };
        bound = bound.max(v);
    }
    let radius = (2.0 * bound).max(1e-3) * (1.0 + 0.37 * attempt as f64);
    let offset = 0.4 + 0.9 * attempt as f64;
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + offset;
            let r = radius * (0.5 + 0.5 * ((k * 7 + 3) % 11) as f64 / 11.0);
            (r * theta.cos(), r * theta.sin())
        })
        .collect()
}

fn horner2(p: &NumPoly, d: &NumPoly, x: &Complex) -> (Complex, Complex) {
    (p.eval(x), d.eval(x))
}

fn aberth(p: &NumPoly, d: &NumPoly, z: &mut [Complex], max_iter: usize) {
    let prec = p.precision();
    let n = z.len();
    let tol = two_pow_neg(prec as f64 - 4.0);
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (pv, dv) = horner2(p, d, &z[i]);
            if Scalar::is_zero(&pv) {
                continue;
            }
            let ratio = if Scalar::is_zero(&dv) {
                Complex::with_val(prec, (1e-3, 1e-3))
            } else {
                Complex::with_val(prec, &pv / &dv)
            };
            let mut sum = Complex::new(prec);
            for j in 0..n {
                if j != i {
                    let diff = Complex::with_val(prec, &z[i] - &z[j]);
                    if !Scalar::is_zero(&diff) {
                        sum += diff.recip();
                    }
                }
            }
            let denom = Complex::with_val(prec, 1 - Complex::with_val(prec, &ratio * &sum));
            let step = if Scalar::is_zero(&denom) {
                ratio
            } else {
                Complex::with_val(prec, &ratio / &denom)
            };
            let scale = 1.0 + z[i].magnitude();
            max_step = max_step.max(step.magnitude() / scale);
            z[i] -= step;
        }
        if max_step <= tol {
            break;
        }
    }
}

fn polish(p: &NumPoly, d: &NumPoly, z: &mut [Complex]) {
    let prec = p.precision();
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (pv, dv) = horner2(p, d, zi);
            if Scalar::is_zero(&dv) || Scalar::is_zero(&pv) {
                break;
            }
            let cand = Complex::with_val(prec, &*zi - Complex::with_val(prec, &pv / &dv));
            if p.eval(&cand).magnitude() < pv.magnitude() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
}

fn residuals_ok(p: &NumPoly, z: &[Complex]) -> (bool, f64) {
    let prec = p.precision();
    let eps = two_pow_neg(prec as f64 - 10.0);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for r in z {
        let abs = Float::with_val(53, r.abs_ref()).to_f64();
        if !abs.is_finite() {
            return (false, f64::INFINITY);
        }
        let scale = p.eval_scale(abs).max(p.max_magnitude());
        let res = p.eval(r).magnitude() / scale;
        worst = worst.max(res);
        if res > eps {
            ok = false;
        }
    }
    (ok, worst)
}
