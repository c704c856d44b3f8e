use super::poly::{ExactPoly, NumPoly, Poly};
use super::scalar::Scalar;
use super::PolyError;

/// Determinant of an `n×n` matrix by dynamic programming over column subsets.
///
/// Needs only ring operations, so it works for matrices of polynomials
/// without any division. Cost is `n·2^n` multiplications.
pub fn subset_determinant<T: Clone>(
    n: usize,
    entry: impl Fn(usize, usize) -> T,
    zero: T,
    add: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
) -> T {
    if n == 0 {
        return zero;
    }
    let full = (1usize << n) - 1;
    let mut dp: Vec<Option<T>> = vec![None; 1 << n];
    for c in 0..n {
        dp[1 << c] = Some(entry(0, c));
    }
    for mask in 1..=full {
        let Some(val) = dp[mask].clone() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            // inversions created by placing this row's column to the left of used ones
            let above = (mask >> (c + 1)).count_ones();
            let term = mul(&val, &entry(row, c));
            let next = mask | (1 << c);
            dp[next] = Some(match dp[next].take() {
                None if above % 2 == 0 => term,
                None => sub(&zero, &term),
                Some(acc) if above % 2 == 0 => add(&acc, &term),
                Some(acc) => sub(&acc, &term),
            });
        }
    }
    dp[full].take().unwrap_or(zero)
}

/// Determinant of a matrix of polynomials.
pub fn poly_determinant<S: Scalar>(m: &[Vec<Poly<S>>], ctx: S::Ctx) -> Poly<S> {
    subset_determinant(
        m.len(),
        |r, c| m[r][c].clone(),
        Poly::zero(ctx),
        |a, b| a + b,
        |a, b| a - b,
        |a, b| a * b,
    )
}

/// Determinant of a scalar matrix.
pub fn scalar_determinant<S: Scalar>(m: &[Vec<S>], ctx: S::Ctx) -> S {
    subset_determinant(
        m.len(),
        |r, c| m[r][c].clone(),
        S::zero(ctx),
        |a, b| a.add(b),
        |a, b| a.sub(b),
        |a, b| a.mul(b),
    )
}

/// Wronski determinant: entry `(r, c)` is the `r`-th derivative of `basis[c]`.
pub fn wronskian<S: Scalar>(basis: &[Poly<S>]) -> Result<Poly<S>, PolyError> {
    let first = basis.first().ok_or(PolyError::EmptyBasis)?;
    let ctx = first.ctx();
    let k = basis.len();
    let mut rows = Vec::with_capacity(k);
    let mut cur: Vec<Poly<S>> = basis.to_vec();
    for _ in 0..k {
        rows.push(cur.clone());
        cur = cur.iter().map(|p| p.derivative()).collect();
    }
    Ok(poly_determinant(&rows, ctx))
}

/// Wronskian divided by its leading coefficient.
pub fn monic_wronskian<S: Scalar>(basis: &[Poly<S>]) -> Result<Poly<S>, PolyError> {
    let w = wronskian(basis)?;
    w.monic().ok_or(PolyError::DependentBasis)
}

/// A polynomial tagged with its coefficient domain.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(ExactPoly),
    Numeric(NumPoly),
}

/// Wronskian of a basis given as tagged polynomials; all entries must share a domain.
///
/// Numeric entries at different precisions are evaluated at the highest one.
pub fn wronskian_any(basis: &[AnyPoly]) -> Result<AnyPoly, PolyError> {
    match basis.first() {
        None => Err(PolyError::EmptyBasis),
        Some(AnyPoly::Exact(_)) => {
            let polys = basis
                .iter()
                .map(|p| match p {
                    AnyPoly::Exact(e) => Ok(e.clone()),
                    AnyPoly::Numeric(_) => Err(PolyError::MixedDomain),
                })
                .collect::<Result<Vec<_>, _>>()?;
            wronskian(&polys).map(AnyPoly::Exact)
        }
        Some(AnyPoly::Numeric(_)) => {
            let mut prec = 0;
            for p in basis {
                match p {
                    AnyPoly::Numeric(n) => prec = prec.max(n.precision()),
                    AnyPoly::Exact(_) => return Err(PolyError::MixedDomain),
                }
            }
            let polys: Vec<NumPoly> = basis
                .iter()
                .map(|p| match p {
                    AnyPoly::Numeric(n) => n.to_numeric(prec),
                    AnyPoly::Exact(_) => unreachable!(),
                })
                .collect();
            wronskian(&polys).map(AnyPoly::Numeric)
        }
    }
}
