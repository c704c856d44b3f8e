//! Independent oracles: Schur polynomials from tableaux, Pieri counting for two rows,
//! and elimination for the two-variable Bethe system.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rug::Complex;
use schubert_bethe::polycore::wronskian::poly_determinant;
use schubert_bethe::polycore::{roots, GaussPoly, GaussRational, Poly, Scalar};

/// Monomials in `p` variables, keyed by exponent vector.
pub type MPoly = BTreeMap<Vec<usize>, i64>;

/// Schur polynomial `s_λ(x_1, …, x_p)` as a sum over semistandard tableaux with entries `<= p`.
pub fn schur(shape: &[usize], p: usize) -> MPoly {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut fill = vec![vec![0usize; shape.first().copied().unwrap_or(0)]; shape.len()];
    let mut out = MPoly::new();
    fn rec(k: usize, cells: &[(usize, usize)], fill: &mut Vec<Vec<usize>>, p: usize, out: &mut MPoly) {
        if k == cells.len() {
            let mut e = vec![0; p];
            for row in fill.iter() {
                for &v in row.iter().filter(|&&v| v > 0) {
                    e[v - 1] += 1;
                }
            }
            *out.entry(e).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[k];
        let lo_row = if c > 0 { fill[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { fill[r - 1][c] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=p {
            fill[r][c] = v;
            rec(k + 1, cells, fill, p, out);
        }
        fill[r][c] = 0;
    }
    rec(0, &cells, &mut fill, p, &mut out);
    out
}

pub fn mul(a: &MPoly, b: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Expand a symmetric polynomial in Schur functions by peeling off the lex-largest monomial.
pub fn schur_expand(mut f: MPoly, p: usize) -> BTreeMap<Vec<usize>, i64> {
    let mut out = BTreeMap::new();
    while let Some((lead, &c)) = f.iter().next_back() {
        let lead = lead.clone();
        let s = schur(&lead.iter().copied().take_while(|&x| x > 0).collect::<Vec<_>>(), p);
        for (e, v) in s {
            *f.entry(e).or_insert(0) -= c * v;
        }
        f.retain(|_, v| *v != 0);
        out.insert(lead, c);
    }
    out
}

/// `σ_u · σ_v` in `G_p(Poly_d)`, with `width = d + 1 - p`: Schur product with terms outside the box dropped.
pub fn box_product(u: &[usize], v: &[usize], p: usize, width: usize) -> BTreeMap<Vec<usize>, u64> {
    let trim = |w: &[usize]| w.iter().copied().take_while(|&x| x > 0).collect::<Vec<_>>();
    schur_expand(mul(&schur(&trim(u), p), &schur(&trim(v), p)), p)
        .into_iter()
        .filter(|(w, _)| w[0] <= width)
        .map(|(w, c)| (w, u64::try_from(c).expect("Schur coefficients are nonnegative")))
        .collect()
}

/// Number of ways to fill the `2 × width` box one box at a time: `σ_1^{2·width}` in `G_2`.
pub fn pieri_two_rows(width: usize) -> u64 {
    let mut ways = vec![vec![0u64; width + 1]; width + 1];
    ways[0][0] = 1;
    for a in 0..=width {
        for b in 0..=a {
            if a > 0 && b < a {
                ways[a][b] += ways[a - 1][b];
            }
            if b > 0 {
                ways[a][b] += ways[a][b - 1];
            }
        }
    }
    ways[width][width]
}

/// Distinct unordered critical pairs `{t_1, t_2}` of `∏_j (t_1 - z_j)^{-1} (t_2 - z_j)^{-1} (t_1 - t_2)^2`,
/// by eliminating `t` from `g(s, t) = 2P(s) - (s - t)P'(s)` and `g(t, s)`, where `P = ∏ (x - z_j)`.
///
/// The Sylvester determinant is taken over `Q(i)[s]`; marked-point factors and repeated
/// roots are removed before the roots are found at `prec` bits.
pub fn two_variable_critical_pairs(z: &[GaussRational], prec: u32) -> Vec<(Complex, Complex)> {
    let pz = GaussPoly::from_roots(z, ());
    let dp = pz.derivative();
    let two = GaussRational::from_ints(2, 0);
    let s = GaussPoly::monomial(1, ());
    // g(s, t) in t: (2P(s) - sP'(s)) + P'(s) t
    let g1: Vec<GaussPoly> = vec![&pz.scale(&two) - &(&s * &dp), dp.clone()];
    // g(t, s) in t: [2P(t) - tP'(t)] + s P'(t)
    let a = &pz.scale(&two) - &(&s * &dp);
    let mut g2: Vec<GaussPoly> = a.coeffs().iter().map(|c| Poly::constant(c.clone())).collect();
    for (k, c) in dp.coeffs().iter().enumerate() {
        g2[k] = &g2[k] + &s.scale(c);
    }
    while g2.last().is_some_and(Poly::is_zero) {
        g2.pop();
    }
    let (m, n) = (g1.len() - 1, g2.len() - 1);
    let mut syl = vec![vec![GaussPoly::zero(()); m + n]; m + n];
    for r in 0..n {
        for (k, c) in g1.iter().rev().enumerate() {
            syl[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in g2.iter().rev().enumerate() {
            syl[n + r][r + k] = c.clone();
        }
    }
    let mut res = poly_determinant(&syl, ());
    for zj in z {
        loop {
            let (q, r) = res.deflate(zj);
            if !r.is_zero() || q.is_zero() {
                break;
            }
            res = q;
        }
    }
    let sq = res.div_rem(&res.gcd(&res.derivative())).expect("nonzero divisor").0;
    let Ok(rs) = roots(&sq.to_numeric(prec)) else { return Vec::new() };
    let (pn, dpn) = (pz.to_numeric(prec), dp.to_numeric(prec));
    let two = Complex::with_val(prec, 2);
    let mut pairs: Vec<(Complex, Complex)> = Vec::new();
    for r in rs {
        // t solved from g(r, t) = 0, kept only when g(t, r) = 0 too
        let Some(t) = r.mul(&dpn.eval(&r)).sub(&pn.eval(&r).mul(&two)).div(&dpn.eval(&r)) else { continue };
        if t.sub(&r).magnitude() < 1e-12 {
            continue;
        }
        let back = pn.eval(&t).mul(&two).sub(&t.sub(&r).mul(&dpn.eval(&t)));
        if back.magnitude() > 1e-20 * (1.0 + dpn.eval(&t).magnitude()) {
            continue;
        }
        let near = |a: &Complex, b: &Complex| a.sub(b).magnitude() < 1e-20;
        if !pairs.iter().any(|(a, b)| (near(a, &r) && near(b, &t)) || (near(a, &t) && near(b, &r))) {
            pairs.push((r, t));
        }
    }
    pairs
}

/// Roots of `P'` for `P = ∏ (x - z_j)`: the critical points of `∏ (t - z_j)^{-1}`.
pub fn one_variable_critical_points(z: &[GaussRational], prec: u32) -> Vec<Complex> {
    roots(&GaussPoly::from_roots(z, ()).derivative().to_numeric(prec)).unwrap_or_default()
}

/// Largest distance from any element of `a` to its nearest element of `b`.
pub fn match_distance(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| x.sub(y).magnitude()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}
