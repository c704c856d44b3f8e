use serde::{Deserialize, Serialize};

use super::index::{GrassmannBox, SchubertIndex};
use super::lr::intersection_number;
use super::SchubertError;

/// Entry `(i, j)` of the `sl_p` Cartan matrix: `(α_i, α_j)` is 2 on the diagonal,
/// -1 for neighbours and 0 otherwise.
pub const CARTAN: fn(usize, usize) -> i64 = |i, j| match i.abs_diff(j) {
    0 => 2,
    1 => -1,
    _ => 0,
};

/// Highest weight `Λ_a` in fundamental coordinates, `(Λ_a, α_i) = a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector {
    pub a: Vec<usize>,
}

/// Numbers of Bethe variables per simple root, `k_i = deg T_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelCounts {
    pub k: Vec<usize>,
}

impl WeightVector {
    pub fn new(a: Vec<usize>) -> Self {
        Self { a }
    }
}

impl LevelCounts {
    pub fn new(k: Vec<usize>) -> Self {
        Self { k }
    }

    pub fn total(&self) -> usize {
        self.k.iter().sum()
    }

    /// `k_i` with `k_0 = k_p = 0`.
    pub fn at(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.k.get(i - 1).copied().unwrap_or(0)
        }
    }
}

/// `a_i = w_i - w_{i+1}`, `1 <= i <= p-1`.
pub fn weight_of_index(w: &SchubertIndex) -> WeightVector {
    WeightVector::new(w.w().windows(2).map(|x| x[0] - x[1]).collect())
}

/// The index with differences `a` and total size `size`.
pub fn index_of_weight(a: &WeightVector, size: usize, bx: GrassmannBox) -> Result<SchubertIndex, SchubertError> {
    let overflow = || SchubertError::BoxOverflow { a: a.a.clone(), size, bx };
    if a.a.len() + 1 != bx.p {
        return Err(overflow());
    }
    // w_i = c + Σ_{l >= i} a_l
    let mut tail = vec![0; bx.p];
    for i in (0..bx.p - 1).rev() {
        tail[i] = tail[i + 1] + a.a[i];
    }
    let base: usize = tail.iter().sum();
    if size < base || !(size - base).is_multiple_of(bx.p) {
        return Err(overflow());
    }
    let c = (size - base) / bx.p;
    SchubertIndex::new(tail.iter().map(|t| t + c).collect(), bx).map_err(|_| overflow())
}

/// `a_l(n+1) = Σ_j a_l(j) + k_{l-1} - 2k_l + k_{l+1}` if every entry is nonnegative.
pub fn dominant_weight_check(weights: &[WeightVector], k: &LevelCounts) -> Option<WeightVector> {
    let r = weights.first().map(|a| a.a.len()).unwrap_or(k.k.len());
    let mut out = Vec::with_capacity(r);
    for l in 0..r {
        let mut v: i64 = weights.iter().map(|a| a.a.get(l).copied().unwrap_or(0) as i64).sum();
        for m in 0..r {
            v -= CARTAN(l, m) * k.k.get(m).copied().unwrap_or(0) as i64;
        }
        if v < 0 {
            return None;
        }
        out.push(v as usize);
    }
    Some(WeightVector::new(out))
}

/// Multiplicity of `Γ_{a(n+1)}` in `Γ_{a(1)} ⊗ … ⊗ Γ_{a(n)}`, as an intersection number.
///
/// The factors are the indices with `w_p = 0` for `a(1..n)` together with the
/// class dual to the diagram of `Λ(k)`. The box is enlarged when that diagram
/// does not fit into `bx`; the number does not depend on the box once it fits.
pub fn dim_singular(weights: &[WeightVector], k: &LevelCounts, bx: GrassmannBox) -> u64 {
    let p = bx.p;
    if dominant_weight_check(weights, k).is_none() {
        return 0;
    }
    let lambdas: Vec<Vec<usize>> = weights
        .iter()
        .map(|a| {
            let mut w = vec![0; p];
            for i in (0..p - 1).rev() {
                w[i] = w[i + 1] + a.a.get(i).copied().unwrap_or(0);
            }
            w
        })
        .collect();
    // GL_p highest weight: μ_i = Σ_j w_i(j) - k_i + k_{i-1}
    let mut mu = Vec::with_capacity(p);
    for i in 0..p {
        let s: usize = lambdas.iter().map(|w| w[i]).sum();
        let v = s as i64 - if i + 1 < p { k.at(i + 1) as i64 } else { 0 } + k.at(i) as i64;
        if v < 0 {
            return 0;
        }
        mu.push(v as usize);
    }
    let need = mu
        .iter()
        .chain(lambdas.iter().flatten())
        .copied()
        .max()
        .unwrap_or(0);
    let width = bx.width().max(need);
    let big = GrassmannBox { p, d: width + p - 1 };
    let mut classes = Vec::with_capacity(weights.len() + 1);
    for w in lambdas {
        classes.push(SchubertIndex::from_parts_unchecked(w, big));
    }
    let mu = SchubertIndex::from_parts_unchecked(mu, big);
    classes.push(mu.dual());
    intersection_number(&classes).map(|n| n.value).unwrap_or(0)
}
