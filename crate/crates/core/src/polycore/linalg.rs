//! Dense linear algebra over a [`Scalar`] domain, sized for desk-scale systems.

use super::scalar::Scalar;

/// Solve the square system `a·x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot vanishes exactly.
pub fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .magnitude()
                .partial_cmp(&a[j][col].magnitude())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul(&inv);
            for c in col..n {
                let t = f.mul(&a[col][c]);
                a[r][c] = a[r][c].sub(&t);
            }
            let t = f.mul(&b[col]);
            b[r] = b[r].sub(&t);
        }
    }
    let mut x = b.clone();
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc.sub(&a[r][c].mul(&x[c]));
        }
        x[r] = acc.div(&a[r][r])?;
    }
    Some(x)
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    // <a, b> = Σ conj(a_i) b_i
    let mut acc = S::zero(a[0].ctx());
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.conj().mul(y));
    }
    acc
}

fn norm<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
}

/// Column structure of a matrix scanned left to right.
#[derive(Clone, Debug)]
pub struct ColumnKernel<S: Scalar> {
    /// Columns independent of everything to their left.
    pub pivots: Vec<usize>,
    /// Columns that are combinations of earlier pivots.
    pub free: Vec<usize>,
    /// For each free column `f`, the kernel vector with a 1 at `f`, zeros at
    /// the other free columns, and the negated combination at the pivots.
    pub vectors: Vec<Vec<S>>,
    /// Smallest relative residual among pivots over the largest among free
    /// columns; infinite when either side is empty or exact.
    pub gap: f64,
}

/// Scan columns in order with Gram–Schmidt, splitting them into pivots and free columns.
///
/// A column is free when its residual against the earlier pivots is zero
/// (exact domains) or at most `tol` times the largest column norm.
pub fn column_kernel<S: Scalar>(cols: &[Vec<S>], tol: f64) -> ColumnKernel<S> {
    let ncols = cols.len();
    let scale = cols.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let mut q: Vec<Vec<S>> = Vec::new();
    let mut qq: Vec<S> = Vec::new();
    // r[k] holds the expansion of pivot k in q_0..q_k (unit diagonal)
    let mut r: Vec<Vec<S>> = Vec::new();
    let mut pivots = Vec::new();
    let mut free = Vec::new();
    let mut vectors = Vec::new();
    let mut min_piv = f64::INFINITY;
    let mut max_free: f64 = 0.0;
    for (j, c) in cols.iter().enumerate() {
        let ctx = c[0].ctx();
        let mut v = c.clone();
        let mut beta = vec![S::zero(ctx); q.len()];
        // two passes keep the numeric residual orthogonal
        let passes = if S::EXACT { 1 } else { 2 };
        for _ in 0..passes {
            for l in 0..q.len() {
                let coef = dot(&q[l], &v).div(&qq[l]).expect("pivot norm nonzero");
                for (vi, qi) in v.iter_mut().zip(&q[l]) {
                    *vi = vi.sub(&coef.mul(qi));
                }
                beta[l] = beta[l].add(&coef);
            }
        }
        let res = norm(&v);
        let is_free = if S::EXACT {
            v.iter().all(|x| x.is_zero())
        } else {
            res <= tol * scale
        };
        let rel = if scale > 0.0 { res / scale } else { 0.0 };
        if is_free {
            max_free = max_free.max(rel);
            // c_j = Σ beta_l q_l; express in pivot columns by back-substitution
            let k = q.len();
            let mut alpha = beta.clone();
            for l in (0..k).rev() {
                for m in l + 1..k {
                    let t = r[m][l].mul(&alpha[m]);
                    alpha[l] = alpha[l].sub(&t);
                }
            }
            let mut vec = vec![S::zero(ctx); ncols];
            vec[j] = S::one(ctx);
            for (l, &pc) in pivots.iter().enumerate() {
                vec[pc] = alpha[l].neg();
            }
            free.push(j);
            vectors.push(vec);
        } else {
            min_piv = min_piv.min(rel);
            let mut col = beta;
            col.push(S::one(ctx));
            r.push(col);
            qq.push(dot(&v, &v));
            q.push(v);
            pivots.push(j);
        }
    }
    let gap = if S::EXACT || free.is_empty() || pivots.is_empty() || max_free == 0.0 {
        f64::INFINITY
    } else {
        min_piv / max_free
    };
    ColumnKernel { pivots, free, vectors, gap }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::scalar::GaussRational;
    use rug::{Complex, Rational};

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve(a, vec![r(3), r(5)]).unwrap();
        assert_eq!(x, vec![Rational::from((4, 5)), Rational::from((7, 5))]);
        assert!(solve(vec![vec![r(1), r(2)], vec![r(2), r(4)]], vec![r(1), r(1)]).is_none());
    }

    #[test]
    fn kernel_of_rank_deficient_columns() {
        // columns: e0, 2e0, e1, e0 + 3e1
        let cols = vec![vec![r(1), r(0)], vec![r(2), r(0)], vec![r(0), r(1)], vec![r(1), r(3)]];
        let k = column_kernel(&cols, 0.0);
        assert_eq!(k.pivots, vec![0, 2]);
        assert_eq!(k.free, vec![1, 3]);
        assert_eq!(k.vectors[0], vec![r(-2), r(1), r(0), r(0)]);
        assert_eq!(k.vectors[1], vec![r(-1), r(0), r(-3), r(1)]);
    }

    #[test]
    fn gauss_kernel_uses_conjugate_inner_product() {
        let i = GaussRational::from_ints(0, 1);
        let one = GaussRational::from_ints(1, 0);
        let cols = vec![vec![one.clone(), i.clone()], vec![i.clone(), one.clone()], vec![one.add(&i), one.add(&i)]];
        let k = column_kernel(&cols, 0.0);
        assert_eq!(k.free, vec![2]);
        // (1+i, 1+i) = c0 + c1
        assert_eq!(k.vectors[0], vec![one.neg(), one.neg(), one.clone()]);
    }

    #[test]
    fn numeric_kernel_reports_gap() {
        let c = |re: f64| Complex::with_val(128, re);
        let cols = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)], vec![c(1.0), c(1.0)]];
        let k = column_kernel(&cols, 1e-19);
        assert_eq!(k.free, vec![2]);
        assert!(k.gap > 1e6);
    }
}
