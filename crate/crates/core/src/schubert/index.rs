use std::fmt;

use serde::{Deserialize, Serialize};

use super::SchubertError;

/// The Grassmannian `G_p(Poly_d)`: partitions fit in `p` rows of width `d+1-p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GrassmannBox {
    pub p: usize,
    pub d: usize,
}

impl GrassmannBox {
    pub fn new(p: usize, d: usize) -> Result<Self, SchubertError> {
        if p == 0 || p > d + 1 {
            return Err(SchubertError::BadBox { p, d });
        }
        Ok(Self { p, d })
    }

    pub fn width(&self) -> usize {
        self.d + 1 - self.p
    }

    /// `dim G_p(Poly_d) = p(d+1-p)`.
    pub fn dim(&self) -> usize {
        self.p * self.width()
    }

    pub fn fits(&self, w: &[usize]) -> bool {
        w.len() == self.p && w.windows(2).all(|x| x[0] >= x[1]) && w.first().is_none_or(|&a| a <= self.width())
    }

    /// All indices of the box, in lexicographic order.
    pub fn all_indices(&self) -> Vec<SchubertIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.p);
        fn rec(bx: &GrassmannBox, cur: &mut Vec<usize>, cap: usize, out: &mut Vec<SchubertIndex>) {
            if cur.len() == bx.p {
                out.push(SchubertIndex { w: cur.clone(), bx: *bx });
                return;
            }
            for v in 0..=cap {
                cur.push(v);
                rec(bx, cur, v, out);
                cur.pop();
            }
        }
        rec(self, &mut cur, self.width(), &mut out);
        out
    }
}

impl fmt::Display for GrassmannBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G_{}(Poly_{})", self.p, self.d)
    }
}

/// A weakly decreasing `w = (w_1, …, w_p)` with `d+1-p >= w_1` and `w_p >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchubertIndex {
    w: Vec<usize>,
    bx: GrassmannBox,
}

impl SchubertIndex {
    pub fn new(w: Vec<usize>, bx: GrassmannBox) -> Result<Self, SchubertError> {
        if !bx.fits(&w) {
            return Err(SchubertError::NotAnIndex(w, bx));
        }
        Ok(Self { w, bx })
    }

    pub fn zero(bx: GrassmannBox) -> Self {
        Self { w: vec![0; bx.p], bx }
    }

    /// The class of a point, `(d+1-p, …, d+1-p)`.
    pub fn top(bx: GrassmannBox) -> Self {
        Self { w: vec![bx.width(); bx.p], bx }
    }

    /// The special index `(m, 0, …, 0)`.
    pub fn special(m: usize, bx: GrassmannBox) -> Result<Self, SchubertError> {
        let mut w = vec![0; bx.p];
        w[0] = m;
        Self::new(w, bx)
    }

    pub fn w(&self) -> &[usize] {
        &self.w
    }

    pub fn bx(&self) -> GrassmannBox {
        self.bx
    }

    pub fn p(&self) -> usize {
        self.bx.p
    }

    /// `|w|`, the codimension of the Schubert cell.
    pub fn size(&self) -> usize {
        self.w.iter().sum()
    }

    /// `w̃_i = (d+1-p) - w_{p+1-i}`.
    pub fn dual(&self) -> Self {
        let n = self.bx.width();
        Self { w: self.w.iter().rev().map(|&x| n - x).collect(), bx: self.bx }
    }

    pub(crate) fn from_parts_unchecked(w: Vec<usize>, bx: GrassmannBox) -> Self {
        debug_assert!(bx.fits(&w));
        Self { w, bx }
    }
}

impl fmt::Display for SchubertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.w.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// `dual_index` as a free function.
pub fn dual_index(w: &SchubertIndex) -> SchubertIndex {
    w.dual()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let bx = GrassmannBox::new(2, 3).unwrap();
        assert!(SchubertIndex::new(vec![2, 1], bx).is_ok());
        assert!(SchubertIndex::new(vec![1, 2], bx).is_err());
        assert!(SchubertIndex::new(vec![3, 0], bx).is_err());
        assert!(SchubertIndex::new(vec![1], bx).is_err());
        assert!(GrassmannBox::new(5, 3).is_err());
    }

    #[test]
    fn dual_examples() {
        let bx = GrassmannBox::new(2, 3).unwrap();
        let w = SchubertIndex::new(vec![1, 0], bx).unwrap();
        assert_eq!(w.dual().w(), &[2, 1]);
        assert_eq!(SchubertIndex::zero(bx).dual(), SchubertIndex::top(bx));
        assert_eq!(SchubertIndex::top(bx).dual(), SchubertIndex::zero(bx));
    }

    #[test]
    fn box_enumeration_counts_binomial() {
        // number of partitions in a p × (d+1-p) box is C(d+1, p)
        let bx = GrassmannBox::new(3, 6).unwrap();
        assert_eq!(bx.all_indices().len(), 35);
    }
}
