use serde::Serialize;

use crate::polycore::{Poly, Scalar};

use super::flag::WronskianFlag;
use super::ReconstructError;

/// `Σ a[i](x)·u^{(i)}` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator<S: Scalar> {
    pub a: Vec<Poly<S>>,
}

impl<S: Scalar> LinearOperator<S> {
    pub fn order(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn ctx(&self) -> S::Ctx {
        self.a[0].ctx()
    }

    pub fn apply(&self, u: &Poly<S>) -> Poly<S> {
        let mut acc = Poly::zero(self.ctx());
        let mut du = u.clone();
        for a in &self.a {
            acc = &acc + &(a * &du);
            du = du.derivative();
        }
        acc
    }

    /// Scale so the leading coefficient is monic.
    pub fn normalized(&self) -> Option<Self> {
        let inv = self.a.last()?.lc()?.inv()?;
        Some(Self { a: self.a.iter().map(|c| c.scale(&inv)).collect() })
    }

    pub fn max_relative_distance(&self, other: &Self) -> f64 {
        if self.a.len() != other.a.len() {
            return f64::INFINITY;
        }
        let scale = self.a.iter().chain(&other.a).map(Poly::max_magnitude).fold(0.0, f64::max);
        let diff = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).max_magnitude())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// Coefficients as printable strings, lowest order first.
    pub fn digest(&self) -> OperatorDigest {
        OperatorDigest { coefficients: self.a.iter().map(|c| c.to_string()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct OperatorDigest {
    pub coefficients: Vec<String>,
}

/// Coefficients of an operator over the common denominator `∏ W_j^{e_j}`.
struct Fraction<'a, S: Scalar> {
    w: &'a [Poly<S>],
    num: Vec<Poly<S>>,
    e: Vec<usize>,
}

impl<S: Scalar> Fraction<'_, S> {
    /// Left-compose with `d/dx`.
    fn diff(&mut self) {
        let ctx = self.w[0].ctx();
        let active: Vec<usize> = (1..self.w.len()).filter(|&j| self.e[j] > 0).collect();
        let prod = |skip: Option<usize>| {
            active
                .iter()
                .filter(|&&j| Some(j) != skip)
                .fold(Poly::one(ctx), |acc, &j| &acc * &self.w[j])
        };
        let p = prod(None);
        // Q'/Q · P, with Q = ∏ W_j^{e_j} and P the product of the active W_j
        let mut s = Poly::zero(ctx);
        for &j in &active {
            let term = &self.w[j].derivative() * &prod(Some(j));
            s = &s + &term.scale(&S::from_i64(self.e[j] as i64, ctx));
        }
        let mut next = Vec::with_capacity(self.num.len() + 1);
        for i in 0..=self.num.len() {
            let mut c = Poly::zero(ctx);
            if let Some(n) = self.num.get(i) {
                c = &(&n.derivative() * &p) - &(n * &s);
            }
            if i > 0 {
                c = &c + &(&self.num[i - 1] * &p);
            }
            next.push(c);
        }
        self.num = next;
        for j in active {
            self.e[j] += 1;
        }
    }

    /// Left-multiply by `W_a^k`.
    fn mul_w(&mut self, a: usize, k: i64) {
        if a == 0 {
            return;
        }
        if k < 0 {
            self.e[a] += (-k) as usize;
            return;
        }
        let cancel = (k as usize).min(self.e[a]);
        self.e[a] -= cancel;
        let rest = k as usize - cancel;
        if rest > 0 {
            let f = self.w[a].pow(rest);
            self.num = self.num.iter().map(|n| n * &f).collect();
        }
    }
}

/// Expand the factored equation of the flag into polynomial coefficients.
///
/// The result is normalized so that the leading coefficient equals the monic
/// `W_p`; in exact domains any common factor of the coefficients is removed.
pub fn operator_from_flag<S: Scalar>(flag: &WronskianFlag<S>) -> Result<LinearOperator<S>, ReconstructError> {
    let p = flag.p;
    let ctx = flag.ctx();
    let mut e = vec![0; p + 1];
    e[1] = 1;
    let mut fr = Fraction { w: &flag.w, num: vec![Poly::one(ctx)], e };
    for a in 1..p {
        fr.diff();
        fr.mul_w(a, 2);
        fr.mul_w(a - 1, -1);
        fr.mul_w(a + 1, -1);
    }
    fr.diff();
    fr.mul_w(p, 2);
    fr.mul_w(p - 1, -1);
    let mut num = fr.num;
    for j in 1..=p {
        for _ in 0..fr.e[j] {
            num = num
                .iter()
                .map(|n| n.div_rem(&flag.w[j]).map(|(q, _)| q).ok_or(ReconstructError::DependentBasis))
                .collect::<Result<_, _>>()?;
        }
    }
    let mut op = LinearOperator { a: num }.normalized().ok_or(ReconstructError::DependentBasis)?;
    if S::EXACT {
        let g = op.a.iter().fold(Poly::zero(ctx), |g, c| g.gcd(c));
        if g.degree().is_some_and(|d| d > 0) {
            op = LinearOperator {
                a: op.a.iter().map(|c| c.div_rem(&g).expect("nonzero gcd").0).collect(),
            };
        }
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::{BethePoint, SchubertProblem};
    use crate::polycore::{ExactPoly, MarkedPoints};
    use crate::reconstruct::flag::flag_from_point;
    use rug::Rational;

    fn q(c: &[i64]) -> ExactPoly {
        Poly::from_i64s(c, ())
    }

    fn trivial_flag(p: usize) -> WronskianFlag<Rational> {
        let one = Poly::one(());
        WronskianFlag {
            p,
            w: vec![one.clone(); p + 1],
            t: vec![one.clone(); p + 1],
            roots: vec![Vec::new(); p + 1],
            y: vec![one; p + 1],
        }
    }

    #[test]
    fn worked_operator() {
        let z = MarkedPoints::from_reals(&[0, 1]).unwrap();
        let prob = SchubertProblem::build(2, 2, z, vec![vec![1, 0], vec![1, 0], vec![0, 0]]).unwrap();
        let pt = BethePoint::new(&prob, vec![vec![Rational::from((1, 2))]]).unwrap();
        let f = flag_from_point(&prob, &pt, ()).unwrap();
        let op = operator_from_flag(&f).unwrap();
        // x(x-1)u'' - (2x-1)u' + 2u
        assert_eq!(op.a, vec![q(&[2]), q(&[1, -2]), q(&[0, -1, 1])]);
        assert!(op.apply(&f.w[1]).is_zero());
    }

    #[test]
    fn constant_flag_gives_pure_derivative() {
        for p in 2..5 {
            let op = operator_from_flag(&trivial_flag(p)).unwrap();
            assert_eq!(op.order(), p);
            for (i, a) in op.a.iter().enumerate() {
                assert_eq!(a.is_zero(), i < p);
            }
        }
    }
}
