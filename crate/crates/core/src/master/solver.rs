//! Multistart Newton search for critical orbits of the master function.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::polycore::linalg::solve;
use crate::polycore::{GaussRational, MarkedPoints, Scalar};

use super::function::{
    bethe_jacobian, bethe_residuals, is_admissible, master_log_value, residual_norm, sep_tol, BethePoint, NumPoint,
};
use super::problem::SchubertProblem;

const SEARCH_PREC: u32 = 64;
const MAX_PREC: u32 = 1024;
const BATCH: usize = 16;
/// Iterates farther than this many search radii from the centre are abandoned.
const ESCAPE: f64 = 8.0;

/// Disk the start points are drawn from.
#[derive(Clone, Copy, Debug)]
struct Region {
    centre: (f64, f64),
    radius: f64,
}

/// Work limits for [`solve_bethe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub starts: usize,
    pub max_iter: usize,
    pub precision_bits: u32,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { starts: 512, max_iter: 100, precision_bits: 128, seed: 0 }
    }
}

/// A certified representative of one `S^k`-orbit of critical points.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalOrbit {
    /// Each group sorted by real, then imaginary part.
    pub rep: NumPoint,
    /// Largest Bethe residual at the working precision.
    pub residual_norm: f64,
    /// Largest residual re-evaluated at twice the working precision.
    pub recheck_residual: f64,
    pub log_value: Complex,
    pub precision: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub orbits: Vec<CriticalOrbit>,
    pub bound: u64,
    /// True when the number of orbits reached the bound.
    pub complete: bool,
    pub starts_used: usize,
    pub precision: u32,
}

/// Residual threshold `10^{-prec/4}`.
pub fn certification_threshold(prec: u32) -> f64 {
    10f64.powf(-(prec as f64) / 4.0)
}

fn fnorm(v: &[Complex]) -> f64 {
    v.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
}

fn point_scale(v: &[Complex]) -> f64 {
    1.0 + v.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
}

/// Newton step for the system with denominators cleared row by row.
///
/// Row `(i,l)` of the cleared system is `F_il·D_il`, where `D_il` is the product
/// of every difference appearing in a denominator of `F_il`; since
/// `∂(F D) = D(∂F + F ∂log D)`, the step solves `(J + F ⊗ ∇log D) δ = -F`.
fn cleared_step(prob: &SchubertProblem, t: &NumPoint, f: &[Complex], jac: &[Vec<Complex>]) -> Option<Vec<Complex>> {
    let prec = t.precision();
    let zs: Vec<Complex> = prob.z.points().iter().map(|z| z.to_complex(prec)).collect();
    let p = prob.p;
    let mut offset = vec![0; p];
    for i in 0..p - 1 {
        offset[i + 1] = offset[i] + t.t[i].len();
    }
    let mut a = jac.to_vec();
    for i in 0..p - 1 {
        let g = &t.t[i];
        for l in 0..g.len() {
            let row = offset[i] + l;
            let mut own = Complex::new(prec);
            let add = |col: usize, a_row: &mut Vec<Complex>, d: Complex| {
                let r = Scalar::inv(&d)?;
                a_row[col] -= Complex::with_val(prec, &f[row] * &r);
                Some(r)
            };
            for s in 0..g.len() {
                if s != l {
                    let r = add(offset[i] + s, &mut a[row], Complex::with_val(prec, &g[l] - &g[s]))?;
                    own += r;
                }
            }
            for nb in [i.checked_sub(1), (i + 1 < p - 1).then_some(i + 1)].into_iter().flatten() {
                for (s, u) in t.t[nb].iter().enumerate() {
                    let r = add(offset[nb] + s, &mut a[row], Complex::with_val(prec, &g[l] - u))?;
                    own += r;
                }
            }
            for (j, z) in zs.iter().enumerate() {
                if prob.expo[i][j] != 0 {
                    let d = Complex::with_val(prec, &g[l] - z);
                    own += Scalar::inv(&d)?;
                }
            }
            a[row][row] += Complex::with_val(prec, &f[row] * &own);
        }
    }
    solve(a, f.iter().map(|x| Complex::with_val(prec, -x)).collect())
}

fn newton_step(prob: &SchubertProblem, t: &NumPoint, f: &[Complex], cleared: bool) -> Option<Vec<Complex>> {
    let jac = bethe_jacobian(prob, t)?;
    if cleared {
        return cleared_step(prob, t, f, &jac);
    }
    let prec = t.precision();
    solve(jac, f.iter().map(|x| Complex::with_val(prec, -x)).collect())
}

fn add_step(x: &[Complex], dx: &[Complex], lambda: f64) -> Vec<Complex> {
    x.iter()
        .zip(dx)
        .map(|(a, b)| {
            let prec = a.prec().0;
            Complex::with_val(prec, a + Complex::with_val(prec, b * lambda))
        })
        .collect()
}

/// Newton from `x0` with steps capped at the search radius; `None` if it stalls or escapes.
///
/// The cleared system is polynomial, so it cannot drift to infinity the way the
/// plain residual does; it is tried first and the plain system is the fallback.
fn search_newton(prob: &SchubertProblem, x0: Vec<Complex>, max_iter: usize, region: &Region, cleared: bool) -> Option<Vec<Complex>> {
    let centre = Complex::with_val(SEARCH_PREC, region.centre);
    let mut x = x0;
    for _ in 0..max_iter {
        let t = BethePoint::from_flat(prob, &x);
        let f = t.flat_residuals(prob);
        if !fnorm(&f).is_finite() {
            return None;
        }
        let dx = newton_step(prob, &t, &f, cleared)?;
        let step = fnorm(&dx);
        if !step.is_finite() {
            return None;
        }
        let lambda = if step > region.radius { region.radius / step } else { 1.0 };
        x = add_step(&x, &dx, lambda);
        if step <= 1e-12 * point_scale(&x) {
            return Some(x);
        }
        let far = x.iter().any(|xi| Complex::with_val(SEARCH_PREC, xi - &centre).magnitude() > ESCAPE * region.radius);
        if far {
            return None;
        }
    }
    None
}

/// Full-step Newton at `prec` until the residual meets the certificate.
fn polish(prob: &SchubertProblem, x: &[Complex], prec: u32) -> Option<(Vec<Complex>, f64)> {
    let mut x: Vec<Complex> = x.iter().map(|c| Complex::with_val(prec, c)).collect();
    let target = certification_threshold(prec);
    for _ in 0..(20 + prec as usize / 16) {
        let t = BethePoint::from_flat(prob, &x);
        let f = t.flat_residuals(prob);
        let r = fnorm(&f);
        if !r.is_finite() {
            return None;
        }
        let dx = newton_step(prob, &t, &f, false).or_else(|| newton_step(prob, &t, &f, true))?;
        let small = fnorm(&dx) <= crate::polycore::scalar::two_pow_neg(prec as f64 / 2.0) * point_scale(&x);
        x = add_step(&x, &dx, 1.0);
        if r <= target && small {
            let r = fnorm(&BethePoint::from_flat(prob, &x).flat_residuals(prob));
            return (r <= target).then_some((x, r));
        }
    }
    None
}

fn cmp_tol(a: &Complex, b: &Complex, tol: f64) -> Ordering {
    let scale = 1.0 + a.magnitude().max(b.magnitude());
    let (ar, br) = (a.real().to_f64(), b.real().to_f64());
    if (ar - br).abs() > tol * scale {
        return ar.partial_cmp(&br).unwrap_or(Ordering::Equal);
    }
    let (ai, bi) = (a.imag().to_f64(), b.imag().to_f64());
    ai.partial_cmp(&bi).unwrap_or(Ordering::Equal)
}

/// Sort every group by real part, then imaginary part (ties at `tol`).
pub fn canonicalize(t: &NumPoint, tol: f64) -> NumPoint {
    let mut out = t.clone();
    for g in out.t.iter_mut() {
        g.sort_by(|a, b| cmp_tol(a, b, tol));
    }
    out
}

/// Largest relative distance between two points after matching within groups.
pub fn orbit_distance(a: &NumPoint, b: &NumPoint) -> f64 {
    let mut worst: f64 = 0.0;
    for (ga, gb) in a.t.iter().zip(&b.t) {
        let mut used = vec![false; gb.len()];
        for x in ga {
            let mut best = f64::INFINITY;
            let mut at = None;
            for (k, y) in gb.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let prec = x.prec().0.max(y.prec().0);
                let d = Complex::with_val(prec, x - y).magnitude() / (1.0 + x.magnitude());
                if d < best {
                    best = d;
                    at = Some(k);
                }
            }
            if let Some(k) = at {
                used[k] = true;
            }
            worst = worst.max(best);
        }
    }
    worst
}

fn certify(prob: &SchubertProblem, x: Vec<Complex>, prec: u32) -> Option<CriticalOrbit> {
    let tol = sep_tol(prec);
    let rep = canonicalize(&BethePoint::from_flat(prob, &x), tol);
    if !is_admissible(prob, &rep, tol).ok {
        return None;
    }
    let value = master_log_value(prob, &rep);
    let log_value = value.log?;
    let residual = residual_norm(&bethe_residuals(prob, &rep).ok()?);
    let recheck = residual_norm(&bethe_residuals(prob, &rep.with_precision(2 * prec)).ok()?);
    let threshold = certification_threshold(prec);
    if residual > threshold || recheck > threshold {
        return None;
    }
    Some(CriticalOrbit { rep, residual_norm: residual, recheck_residual: recheck, log_value, precision: prec })
}

/// Polish and certify one converged search point, escalating precision on failure.
fn finish(prob: &SchubertProblem, x: &[Complex], prec: u32) -> Option<CriticalOrbit> {
    let mut p = prec;
    while p <= MAX_PREC {
        if let Some((y, _)) = polish(prob, x, p) {
            if let Some(o) = certify(prob, y, p) {
                return Some(o);
            }
        }
        p *= 2;
    }
    None
}

/// Re-polish and re-certify an orbit at (at least) `prec` bits.
pub fn refine_orbit(prob: &SchubertProblem, orbit: &CriticalOrbit, prec: u32) -> Option<CriticalOrbit> {
    let out = finish(prob, &orbit.rep.flat(), prec.max(orbit.precision))?;
    // a refinement that moves the point is a different point, not a polished one
    (orbit_distance(&out.rep, &orbit.rep) <= certification_threshold(orbit.precision).sqrt()).then_some(out)
}

fn run_start(prob: &SchubertProblem, start: &[(f64, f64)], budget: &Budget, region: &Region) -> Option<CriticalOrbit> {
    let x0: Vec<Complex> = start.iter().map(|&(re, im)| Complex::with_val(SEARCH_PREC, (re, im))).collect();
    // the cleared system also converges to collisions, which `finish` rejects
    [true, false].into_iter().find_map(|cleared| {
        let found = search_newton(prob, x0.clone(), budget.max_iter, region, cleared)?;
        finish(prob, &found, budget.precision_bits)
    })
}

fn search_region(z: &MarkedPoints) -> Region {
    let n = z.len() as f64;
    let (mut cr, mut ci) = (0.0, 0.0);
    for p in z.points() {
        cr += p.re.to_f64();
        ci += p.im.to_f64();
    }
    let (cr, ci) = (cr / n, ci / n);
    let spread = z
        .points()
        .iter()
        .map(|p| (p.re.to_f64() - cr).hypot(p.im.to_f64() - ci))
        .fold(0.0, f64::max);
    Region { centre: (cr, ci), radius: if spread > 0.0 { 1.25 * spread } else { 1.0 } }
}

/// Merge a candidate into the orbit list; returns true if it was new.
fn merge(prob: &SchubertProblem, orbits: &mut Vec<CriticalOrbit>, cand: CriticalOrbit) -> bool {
    let mut cand = cand;
    loop {
        let tol = sep_tol(cand.precision);
        let mut ambiguous = None;
        for (k, o) in orbits.iter().enumerate() {
            let d = orbit_distance(&o.rep, &cand.rep);
            if d <= tol {
                return false;
            }
            if d <= 10.0 * tol {
                ambiguous = Some(k);
            }
        }
        let Some(k) = ambiguous else {
            orbits.push(cand);
            return true;
        };
        // too close to call: redo both at doubled precision
        let next = cand.precision * 2;
        if next > MAX_PREC {
            return false;
        }
        let redo = |o: &CriticalOrbit| finish(prob, &o.rep.flat(), next);
        match (redo(&orbits[k]), redo(&cand)) {
            (Some(a), Some(b)) => {
                orbits[k] = a;
                cand = b;
            }
            _ => return false,
        }
    }
}

/// Search for critical orbits with nonzero critical value.
///
/// Deterministic for a fixed budget: start points come from a seeded stream,
/// batches run in parallel, and results are merged in start order. The search
/// stops once the number of orbits reaches the intersection number.
pub fn solve_bethe(prob: &SchubertProblem, budget: &Budget) -> SolveOutcome {
    let bound = prob.lr_bound();
    let prec = budget.precision_bits.max(crate::polycore::MIN_PRECISION);
    let budget = Budget { precision_bits: prec, ..*budget };
    let mut orbits = Vec::new();
    if bound == 0 {
        return SolveOutcome { orbits, bound, complete: true, starts_used: 0, precision: prec };
    }
    if prob.unknowns() == 0 {
        let rep = BethePoint { t: vec![Vec::new(); prob.p - 1] };
        orbits.push(CriticalOrbit {
            rep,
            residual_norm: 0.0,
            recheck_residual: 0.0,
            log_value: Complex::new(prec),
            precision: prec,
        });
        return SolveOutcome { complete: orbits.len() as u64 == bound, orbits, bound, starts_used: 0, precision: prec };
    }

    let region = search_region(&prob.z);
    let ((cr, ci), radius) = (region.centre, region.radius);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let dim = prob.unknowns();
    let mut used = 0;
    while used < budget.starts && (orbits.len() as u64) < bound {
        let take = BATCH.min(budget.starts - used);
        let starts: Vec<Vec<(f64, f64)>> = (0..take)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let r = radius * rng.gen::<f64>().sqrt();
                        let th = std::f64::consts::TAU * rng.gen::<f64>();
                        (cr + r * th.cos(), ci + r * th.sin())
                    })
                    .collect()
            })
            .collect();
        let results: Vec<Option<CriticalOrbit>> =
            starts.par_iter().map(|s| run_start(prob, s, &budget, &region)).collect();
        for (k, r) in results.into_iter().enumerate() {
            if let Some(o) = r {
                merge(prob, &mut orbits, o);
                if orbits.len() as u64 >= bound {
                    used += k + 1;
                    break;
                }
            }
            if k + 1 == take {
                used += take;
            }
        }
    }
    orbits.sort_by(|a, b| {
        let (fa, fb) = (a.rep.flat(), b.rep.flat());
        for (x, y) in fa.iter().zip(&fb) {
            match cmp_tol(x, y, sep_tol(prec)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    });
    let precision = orbits.iter().map(|o| o.precision).max().unwrap_or(prec);
    SolveOutcome { complete: orbits.len() as u64 == bound, orbits, bound, starts_used: used, precision }
}

fn rationalize(x: &Float, max_den: &Integer) -> Rational {
    // continued-fraction convergents, stopping at the denominator cap
    let Some(mut rem) = x.to_rational() else {
        return Rational::new();
    };
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let tol = Float::with_val(x.prec(), Float::i_exp(1, -(x.prec() as i32) * 3 / 4));
    for _ in 0..200 {
        let a = Integer::from(rem.floor_ref());
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if &k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = Rational::from((h1.clone(), k1.clone()));
        let err = Float::with_val(x.prec(), x - &approx).abs();
        if err <= tol.clone() * (Float::with_val(53, x.abs_ref()) + 1u32) {
            return approx;
        }
        let frac = Rational::from(&rem - &a);
        if frac.cmp0() == Ordering::Equal {
            return approx;
        }
        rem = frac.recip();
    }
    if k1.cmp0() == Ordering::Equal {
        return Rational::new();
    }
    Rational::from((h1, k1))
}

/// Nearest Gaussian rational with denominators below `2^{bits}`, by continued fractions.
pub(crate) fn rationalize_complex(c: &Complex, bits: u32) -> GaussRational {
    let max_den = Integer::from(1) << bits;
    GaussRational::new(rationalize(c.real(), &max_den), rationalize(c.imag(), &max_den))
}

/// Exact Gaussian-rational reconstruction of an orbit, if its coordinates are
/// rational with small denominators and satisfy the Bethe equations exactly.
pub fn rationalize_point(prob: &SchubertProblem, orbit: &CriticalOrbit) -> Option<BethePoint<GaussRational>> {
    let t: Vec<Vec<GaussRational>> = orbit
        .rep
        .t
        .iter()
        .map(|g| g.iter().map(|c| rationalize_complex(c, orbit.precision / 4)).collect())
        .collect();
    let pt = BethePoint::new(prob, t).ok()?;
    let res = bethe_residuals(prob, &pt).ok()?;
    res.iter().flatten().all(Scalar::is_zero).then_some(pt)
}

/// `n` marked points with rational coordinates in the unit box, pairwise at least `1/100` apart.
pub fn generic_points(n: usize, rng: &mut impl Rng) -> MarkedPoints {
    loop {
        let mut pts = Vec::with_capacity(n);
        for _ in 0..n {
            let mut coord = || {
                let den: i64 = rng.gen_range(1..=10_000);
                let num: i64 = rng.gen_range(0..=den);
                Rational::from((num, den))
            };
            pts.push(GaussRational::new(coord(), coord()));
        }
        if let Ok(z) = MarkedPoints::new(pts) {
            if z.separation() >= 1e-2 {
                return z;
            }
        }
    }
}
