use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::master::solver::rationalize_complex;
use crate::polycore::scalar::two_pow_neg;
use crate::polycore::{roots, NumPoly, Poly, Scalar};
use crate::reconstruct::PPlane;
use crate::schubert::GrassmannBox;

const EXACT_ROOT_BITS: u32 = 256;
const CLUSTER_BITS: u32 = 256;

/// A finite singular point of the equation of a plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub location: String,
    pub re: f64,
    pub im: f64,
    /// True when the location is an exact root of the Wronskian.
    pub exact: bool,
    /// Multiplicity as a root of the Wronskian.
    pub multiplicity: usize,
    /// Realized root orders, decreasing.
    pub exponents: Vec<usize>,
    /// `w_i = ρ_i + i - p`.
    pub index: Vec<usize>,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfinityPoint {
    /// Realized degrees `d_1 < … < d_p`; the exponents are their negatives.
    pub degrees: Vec<usize>,
    pub index: Vec<usize>,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuchsProfile {
    pub p: usize,
    pub d: usize,
    /// Monic Wronskian of the plane.
    pub wronskian: String,
    pub finite: Vec<SingularPoint>,
    pub infinity: InfinityPoint,
    /// `p(d+1-p) - deg W`.
    pub inf_multiplicity: usize,
    /// Failed invariants, empty when all hold.
    pub violations: Vec<String>,
}

impl FuchsProfile {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Sum of the codimensions over all singular points, infinity included.
    pub fn total_codim(&self) -> usize {
        self.finite.iter().map(|s| s.codim).sum::<usize>() + self.infinity.codim
    }

    /// Schubert indices of the finite points followed by infinity.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.finite.iter().map(|s| s.index.clone()).collect();
        out.push(self.infinity.index.clone());
        out
    }
}

/// Decreasing exponents of the plane at `a`.
pub fn exponents_at<S: Scalar>(plane: &PPlane<S>, a: &S) -> Vec<usize> {
    let mut e = plane.orders_at(a, plane.len());
    e.reverse();
    e
}

/// `w_i = ρ_i + i - p` from decreasing exponents; `None` if some entry is negative.
fn index_of(exponents: &[usize]) -> Option<Vec<usize>> {
    let p = exponents.len();
    exponents
        .iter()
        .enumerate()
        .map(|(i, &r)| (r + i + 1).checked_sub(p))
        .collect()
}

pub(crate) struct Cluster {
    pub centre: Complex,
    pub size: usize,
}

/// Roots of `w` grouped within `2^{-b/16}` at `b = min(prec, 256)` bits, each centre
/// polished at `prec` bits.
pub(crate) fn clusters(w: &NumPoly, prec: u32) -> Vec<Cluster> {
    // multiple roots converge slowly, so locate them coarsely and polish the centres
    let coarse = prec.min(CLUSTER_BITS);
    let Ok(rs) = roots(&w.to_numeric(coarse)) else { return Vec::new() };
    let thr = two_pow_neg(coarse as f64 / 16.0);
    let mut groups: Vec<Vec<Complex>> = Vec::new();
    for r in rs {
        match groups.iter_mut().find(|g| (Complex::with_val(prec, &g[0] - &r)).abs().real().to_f64() < thr) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mut c = Complex::new(prec);
            for r in &g {
                c += r;
            }
            c /= g.len() as u32;
            // a root of multiplicity m is a simple root of the (m-1)-th derivative
            let dw = w.nth_derivative(g.len() - 1);
            let ddw = dw.derivative();
            for _ in 0..16 {
                let Some(step) = dw.eval(&c).div(&ddw.eval(&c)) else { break };
                c -= &step;
                if step.magnitude() <= two_pow_neg(prec as f64) * (1.0 + c.magnitude()) {
                    break;
                }
            }
            Cluster { centre: c, size: g.len() }
        })
        .collect()
}

/// Exact multiplicity of `a` as a root of `w` (exact domains only), or `None` if `w(a) != 0`.
fn exact_multiplicity<S: Scalar>(w: &Poly<S>, a: &S) -> Option<usize> {
    let mut m = 0;
    let mut cur = w.clone();
    loop {
        let (q, r) = cur.deflate(a);
        if !r.is_zero() {
            return (m > 0).then_some(m);
        }
        m += 1;
        cur = q;
    }
}

fn finite_point<S: Scalar>(plane: &PPlane<S>, loc: &S, multiplicity: usize, exact: bool) -> SingularPoint {
    let exponents = exponents_at(plane, loc);
    let index = index_of(&exponents).unwrap_or_default();
    let c = loc.to_complex(64);
    SingularPoint {
        location: loc.to_string(),
        re: c.real().to_f64(),
        im: c.imag().to_f64(),
        exact,
        multiplicity,
        codim: index.iter().sum(),
        exponents,
        index,
    }
}

/// Singular points, exponents and Schubert indices of a plane in `Poly_d`.
pub fn profile<S: Scalar>(plane: &PPlane<S>, d: usize) -> FuchsProfile {
    let p = plane.len();
    let ctx = plane.ctx();
    let mut violations = Vec::new();
    let w = match plane.wronskian() {
        Ok(w) => w.monic().unwrap_or(w),
        Err(e) => {
            violations.push(format!("wronskian: {e}"));
            Poly::zero(ctx)
        }
    };
    let deg_w = w.degree().unwrap_or(0);

    let mut finite = Vec::new();
    if deg_w > 0 {
        let prec = if S::EXACT { EXACT_ROOT_BITS } else { 2 * S::work_precision(ctx) };
        let num_w = w.to_numeric(prec);
        let num_plane = if S::EXACT {
            PPlane::new(&plane.basis().iter().map(|b| b.to_numeric(prec)).collect::<Vec<_>>()).ok()
        } else {
            None
        };
        for cl in clusters(&num_w, prec) {
            if S::EXACT {
                let g = rationalize_complex(&cl.centre, prec / 4);
                if let Some(a) = S::from_gauss(&g, ctx) {
                    if let Some(m) = exact_multiplicity(&w, &a) {
                        finite.push(finite_point(plane, &a, m, true));
                        continue;
                    }
                }
                match &num_plane {
                    Some(np) => finite.push(finite_point(np, &cl.centre, cl.size, false)),
                    None => violations.push(format!("root {} could not be analysed", cl.centre)),
                }
            } else if let Some(a) = S::from_complex(&cl.centre, ctx) {
                finite.push(finite_point(plane, &a, cl.size, false));
            }
        }
        finite.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    }

    let degrees = plane.degrees();
    let bx = GrassmannBox::new(p, d).ok();
    if bx.is_none() || degrees.last().is_some_and(|&top| top > d) {
        violations.push(format!("degrees {degrees:?} do not fit in Poly_{d} with p = {p}"));
    }
    let inf_index: Vec<usize> = degrees
        .iter()
        .enumerate()
        .map(|(i, &di)| (d + i + 1).saturating_sub(p + di))
        .collect();
    let infinity = InfinityPoint { codim: inf_index.iter().sum(), index: inf_index, degrees };
    let dim = bx.map_or(0, |b| b.dim());
    let inf_multiplicity = dim.saturating_sub(deg_w);

    let fits = |w: &[usize]| bx.is_some_and(|b| b.fits(w));
    for s in &finite {
        let distinct = s.exponents.windows(2).all(|x| x[0] > x[1]);
        if s.exponents.len() != p || !distinct || s.index.len() != p {
            violations.push(format!("{}: exponents {:?} are not {p} distinct orders", s.location, s.exponents));
            continue;
        }
        if !fits(&s.index) {
            violations.push(format!("{}: index {:?} outside the box", s.location, s.index));
        }
        if s.codim != s.multiplicity {
            violations.push(format!("{}: codim {} != multiplicity {}", s.location, s.codim, s.multiplicity));
        }
        let sum: usize = s.exponents.iter().sum();
        if sum != s.multiplicity + p * (p - 1) / 2 {
            violations.push(format!("{}: exponent sum {sum} != {} + {}", s.location, s.multiplicity, p * (p - 1) / 2));
        }
    }
    if !fits(&infinity.index) {
        violations.push(format!("infinity: index {:?} outside the box", infinity.index));
    }
    if infinity.codim != inf_multiplicity {
        violations.push(format!("infinity: codim {} != multiplicity {inf_multiplicity}", infinity.codim));
    }
    let mult_sum: usize = finite.iter().map(|s| s.multiplicity).sum();
    if mult_sum != deg_w {
        violations.push(format!("root multiplicities add up to {mult_sum}, deg W = {deg_w}"));
    }
    let total = finite.iter().map(|s| s.codim).sum::<usize>() + infinity.codim;
    if total != dim {
        violations.push(format!("total codimension {total} != {dim}"));
    }

    FuchsProfile { p, d, wronskian: w.to_string(), finite, infinity, inf_multiplicity, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::ExactPoly;
    use rug::Rational;

    fn q(c: &[(i64, i64)]) -> ExactPoly {
        ExactPoly::from_ratios(c)
    }

    fn worked() -> PPlane<Rational> {
        PPlane::new(&[q(&[(-1, 2), (1, 1)]), q(&[(1, 4), (-1, 2), (1, 1)])]).unwrap()
    }

    #[test]
    fn ordinary_point() {
        let plane = PPlane::<Rational>::new(&[Poly::one(()), Poly::monomial(1, ()), Poly::monomial(2, ())]).unwrap();
        assert_eq!(exponents_at(&plane, &Rational::from((7, 3))), vec![2, 1, 0]);
        let pr = profile(&plane, 2);
        assert!(pr.holds(), "{:?}", pr.violations);
        assert!(pr.finite.is_empty());
        assert_eq!(pr.infinity.index, vec![0, 0, 0]);
    }

    #[test]
    fn worked_plane_profile() {
        let pr = profile(&worked(), 2);
        assert!(pr.holds(), "{:?}", pr.violations);
        assert_eq!(pr.wronskian, q(&[(0, 1), (-1, 1), (1, 1)]).to_string());
        assert_eq!(pr.finite.len(), 2);
        for s in &pr.finite {
            assert!(s.exact);
            assert_eq!(s.exponents, vec![2, 0]);
            assert_eq!(s.index, vec![1, 0]);
        }
        assert_eq!(pr.infinity.degrees, vec![1, 2]);
        assert_eq!(pr.infinity.index, vec![0, 0]);
        assert_eq!(pr.inf_multiplicity, 0);
        assert_eq!(pr.total_codim(), 2);
    }

    #[test]
    fn numeric_profile_matches_exact() {
        let num = PPlane::new(&worked().basis().iter().map(|b| b.to_numeric(128)).collect::<Vec<_>>()).unwrap();
        let pr = profile(&num, 2);
        assert!(pr.holds(), "{:?}", pr.violations);
        assert_eq!(pr.indices(), vec![vec![1, 0], vec![1, 0], vec![0, 0]]);
        assert!(pr.finite.iter().all(|s| !s.exact));
    }

    #[test]
    fn rational_and_multiple_roots() {
        // W = 3x^2 - 3
        let plane = PPlane::<Rational>::new(&[Poly::one(()), Poly::from_i64s(&[0, -3, 0, 1], ())]).unwrap();
        let pr = profile(&plane, 3);
        assert!(pr.holds(), "{:?}", pr.violations);
        let plane = PPlane::<Rational>::new(&[Poly::one(()), Poly::from_i64s(&[0, 0, 2, 1], ())]).unwrap();
        let pr = profile(&plane, 3);
        // W = 3x^2 + 4x: roots 0 and -4/3, both simple
        assert!(pr.holds(), "{:?}", pr.violations);
        assert_eq!(pr.finite.len(), 2);
        let plane = PPlane::<Rational>::new(&[Poly::monomial(1, ()), Poly::monomial(4, ())]).unwrap();
        let pr = profile(&plane, 4);
        assert!(pr.holds(), "{:?}", pr.violations);
        assert_eq!(pr.finite[0].exponents, vec![4, 1]);
        assert_eq!(pr.finite[0].multiplicity, 4);
        assert_eq!(pr.finite[0].index, vec![3, 1]);
        assert_eq!(pr.infinity.index, vec![2, 0]);
    }

    #[test]
    fn irrational_roots_fall_back_to_numeric() {
        // {1, x^3 - 6x}: W = 3(x^2 - 2)
        let plane = PPlane::<Rational>::new(&[Poly::one(()), Poly::from_i64s(&[0, -6, 0, 1], ())]).unwrap();
        let pr = profile(&plane, 3);
        assert!(pr.holds(), "{:?}", pr.violations);
        assert_eq!(pr.finite.len(), 2);
        assert!(pr.finite.iter().all(|s| !s.exact && s.index == vec![1, 0]));
    }
}
