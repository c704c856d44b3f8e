use crate::polycore::{GaussPoly, GaussRational, MarkedPoints};
use crate::schubert::{
    intersection_number, weight_of_index, GrassmannBox, LevelCounts, SchubertIndex, WeightVector,
};

use super::MasterError;

/// A Schubert intersection problem `σ_{w(1)}(z_1) ∩ … ∩ σ_{w(n)}(z_n) ∩ σ_{w(n+1)}(∞)`
/// together with everything derived from the indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SchubertProblem {
    pub p: usize,
    pub d: usize,
    pub z: MarkedPoints,
    /// `w(1), …, w(n)` at the marked points, then `w(n+1)` at infinity.
    pub w: Vec<SchubertIndex>,
    /// `m_j = |w(j)|` for `j <= n`.
    pub m: Vec<usize>,
    /// `mgrid[j][i] = m_j(i) = Σ_{l=p+1-i}^{p} w_l(j)` for `0 <= i <= p`.
    pub mgrid: Vec<Vec<usize>>,
    pub k: LevelCounts,
    /// `Z_0, …, Z_p` with `Z_i = ∏ (x - z_j)^{m_j(i)}`.
    pub zpolys: Vec<GaussPoly>,
    /// `rho[j][l-1] = w_l(j) + p - l`, exponents at `z_j`.
    pub rho: Vec<Vec<usize>>,
    /// `d_1 < … < d_p`, the degrees realized at infinity.
    pub degs: Vec<usize>,
    /// `W_{m,z} = ∏ (x - z_j)^{m_j}`.
    pub w_target: GaussPoly,
    /// `expo[i-1][j] = 2m_j(p-i) - m_j(p-i-1) - m_j(p-i+1)`, the exponent of
    /// `(t^{(i)} - z_j)` in the master function.
    pub expo: Vec<Vec<i64>>,
}

impl SchubertProblem {
    /// Build and validate a problem from raw indices (`w.len() == n + 1`).
    pub fn build(p: usize, d: usize, z: MarkedPoints, w: Vec<Vec<usize>>) -> Result<Self, MasterError> {
        if p < 2 {
            return Err(MasterError::Order(p));
        }
        let bx = GrassmannBox::new(p, d).map_err(MasterError::Schubert)?;
        let n = z.len();
        if w.len() != n + 1 {
            return Err(MasterError::IndexCount { points: n, indices: w.len() });
        }
        let w: Vec<SchubertIndex> = w
            .into_iter()
            .map(|v| SchubertIndex::new(v, bx))
            .collect::<Result<_, _>>()
            .map_err(MasterError::Schubert)?;
        for (j, wj) in w[..n].iter().enumerate() {
            if wj.w()[p - 1] != 0 {
                return Err(MasterError::BasePoint { point: j + 1 });
            }
        }
        let total: usize = w.iter().map(|x| x.size()).sum();
        if total != bx.dim() {
            return Err(MasterError::Codimension { total, dim: bx.dim() });
        }

        let m: Vec<usize> = w[..n].iter().map(|x| x.size()).collect();
        let mgrid: Vec<Vec<usize>> = w[..n]
            .iter()
            .map(|wj| (0..=p).map(|i| wj.w()[p - i..].iter().sum()).collect())
            .collect();
        let winf = w[n].w();

        // deg W_i = i(d+1-p) - Σ_{l<=i} w_l(∞) and W_i = Z_i T_{p-i}
        let mut k = vec![0usize; p - 1];
        for i in 1..p {
            let deg_w = (i * (d + 1 - p)) as i64 - winf[..i].iter().sum::<usize>() as i64;
            let deg_z: i64 = mgrid.iter().map(|row| row[i] as i64).sum();
            let ki = deg_w - deg_z;
            if ki < 0 {
                return Err(MasterError::NegativeLevel { i: p - i, value: ki });
            }
            k[p - i - 1] = ki as usize;
        }

        let mut expo = Vec::with_capacity(p - 1);
        for i in 1..p {
            let row: Vec<i64> = mgrid
                .iter()
                .map(|g| 2 * g[p - i] as i64 - g[p - i - 1] as i64 - g[p - i + 1] as i64)
                .collect();
            expo.push(row);
        }
        for (j, g) in mgrid.iter().enumerate() {
            for i in 1..p {
                if 2 * g[i] as i64 - g[i - 1] as i64 - g[i + 1] as i64 > 0 {
                    return Err(MasterError::Exponent { point: j + 1, i });
                }
            }
        }

        let degs: Vec<usize> = (1..=p).map(|l| d + l - p - winf[l - 1]).collect();
        if degs.windows(2).any(|x| x[0] >= x[1]) || degs[p - 1] != d {
            return Err(MasterError::Degrees(degs));
        }

        let zpolys: Vec<GaussPoly> = (0..=p)
            .map(|i| z.product(&mgrid.iter().map(|g| g[i]).collect::<Vec<_>>()))
            .collect();
        let rho = w[..n]
            .iter()
            .map(|wj| (1..=p).map(|l| wj.w()[l - 1] + p - l).collect())
            .collect();
        let w_target = z.product(&m);
        Ok(Self { p, d, z, w, m, mgrid, k: LevelCounts::new(k), zpolys, rho, degs, w_target, expo })
    }

    /// The special intersection with `w(j) = (m_j, 0, …, 0)` and prescribed level counts.
    ///
    /// `d` and `w(∞)` are recovered from `deg W_i = k_{p-i}` for `i < p` and `deg W_p = Σ m_j`.
    pub fn from_special(p: usize, m: &[usize], k: &[usize], z: MarkedPoints) -> Result<Self, MasterError> {
        if p < 2 {
            return Err(MasterError::Order(p));
        }
        if k.len() != p - 1 {
            return Err(MasterError::LevelLength { expected: p - 1, got: k.len() });
        }
        let total_m: usize = m.iter().sum();
        let deg_w: Vec<i64> = (0..=p)
            .map(|i| match i {
                0 => 0,
                _ if i == p => total_m as i64,
                _ => k[p - i - 1] as i64,
            })
            .collect();
        let degs: Vec<i64> = (1..=p).map(|i| deg_w[i] - deg_w[i - 1] + (i as i64 - 1)).collect();
        if degs[0] < 0 || degs.windows(2).any(|x| x[0] >= x[1]) {
            return Err(MasterError::SpecialForm(format!(
                "level counts {k:?} with m = {m:?} force non-increasing degrees {degs:?}"
            )));
        }
        let d = degs[p - 1] as usize;
        if d + 1 < p {
            return Err(MasterError::SpecialForm(format!("degree {d} too small for p = {p}")));
        }
        let winf: Vec<usize> = (1..=p).map(|l| (d as i64 - degs[l - 1] + l as i64 - p as i64) as usize).collect();
        let mut w: Vec<Vec<usize>> = m
            .iter()
            .map(|&mj| {
                let mut v = vec![0; p];
                v[0] = mj;
                v
            })
            .collect();
        w.push(winf);
        Self::build(p, d, z, w)
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn grassmann_box(&self) -> GrassmannBox {
        self.w[0].bx()
    }

    /// Number of Bethe variables, `k_1 + … + k_{p-1}`.
    pub fn unknowns(&self) -> usize {
        self.k.total()
    }

    /// `k_i` for `1 <= i <= p-1`, zero outside.
    pub fn level(&self, i: usize) -> usize {
        self.k.at(i)
    }

    /// Upper bound on the number of nondegenerate planes.
    pub fn lr_bound(&self) -> u64 {
        intersection_number(&self.w).map(|n| n.value).unwrap_or(0)
    }

    /// `a(j) = weight_of_index(w(j))` for the marked points.
    pub fn weights(&self) -> Vec<WeightVector> {
        self.w[..self.n()].iter().map(weight_of_index).collect()
    }

    /// `m_j(i)`.
    pub fn mji(&self, j: usize, i: usize) -> usize {
        self.mgrid[j][i]
    }

    /// True when every finite index has the form `(m, 0, …, 0)`.
    pub fn is_special(&self) -> bool {
        self.w[..self.n()].iter().all(|w| w.w()[1..].iter().all(|&x| x == 0))
    }

    pub fn infinity_index(&self) -> &SchubertIndex {
        &self.w[self.n()]
    }

    /// Marked point `z_j` (0-based).
    pub fn point(&self, j: usize) -> &GaussRational {
        &self.z.points()[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[i64]) -> MarkedPoints {
        MarkedPoints::from_reals(v).unwrap()
    }

    #[test]
    fn worked_instance() {
        let prob = SchubertProblem::build(2, 2, pts(&[0, 1]), vec![vec![1, 0], vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(prob.k.k, vec![1]);
        assert_eq!(prob.degs, vec![1, 2]);
        assert_eq!(prob.expo, vec![vec![-1, -1]]);
        assert_eq!(prob.lr_bound(), 1);
        assert_eq!(prob.rho, vec![vec![2, 0], vec![2, 0]]);
    }

    #[test]
    fn special_indices_give_trivial_z() {
        let prob = SchubertProblem::from_special(3, &[1, 1, 1], &[1, 0], pts(&[0, 1, 2])).unwrap();
        assert_eq!(prob.d, 4);
        assert_eq!(prob.degs, vec![0, 2, 4]);
        assert_eq!(prob.infinity_index().w(), &[2, 1, 0]);
        for i in 0..prob.p {
            assert_eq!(prob.zpolys[i].degree(), Some(0));
        }
        assert_eq!(prob.expo, vec![vec![-1, -1, -1], vec![0, 0, 0]]);
        assert_eq!(prob.lr_bound(), 2);
    }

    #[test]
    fn mgrid_for_non_special_index() {
        let prob = SchubertProblem::build(3, 5, pts(&[0, 1, 2]), vec![vec![2, 1, 0], vec![2, 1, 0], vec![1, 0, 0], vec![2, 0, 0]])
            .unwrap();
        assert_eq!(prob.mgrid[0], vec![0, 0, 1, 3]);
        assert_eq!(prob.zpolys[2].degree(), Some(2));
    }

    #[test]
    fn hypergeometric_special_form() {
        let prob = SchubertProblem::from_special(3, &[2, 2], &[2, 0], pts(&[0, 1])).unwrap();
        assert_eq!(prob.d, 4);
        assert_eq!(prob.degs, vec![0, 3, 4]);
    }

    #[test]
    fn rejections_name_the_violation() {
        let z = pts(&[0, 1]);
        assert!(matches!(
            SchubertProblem::build(2, 2, z.clone(), vec![vec![1, 0], vec![1, 0], vec![1, 0]]),
            Err(MasterError::Codimension { .. })
        ));
        assert!(matches!(
            SchubertProblem::build(2, 3, z.clone(), vec![vec![1, 1], vec![1, 0], vec![1, 0]]),
            Err(MasterError::BasePoint { point: 1 })
        ));
        // deg W_2 = 2·2 - 4 = 0 but deg Z_2 = 1, so k_1 = -1
        assert!(matches!(
            SchubertProblem::build(3, 4, pts(&[0]), vec![vec![1, 1, 0], vec![2, 2, 0]]),
            Err(MasterError::NegativeLevel { i: 1, value: -1 })
        ));
        assert!(matches!(
            SchubertProblem::build(2, 2, z, vec![vec![1, 0], vec![1, 0]]),
            Err(MasterError::IndexCount { .. })
        ));
    }
}
