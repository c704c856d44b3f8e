use std::collections::BTreeMap;

use super::index::{GrassmannBox, SchubertIndex};
use super::SchubertError;

/// Number of Littlewood–Richardson tableaux of shape `outer / inner` with the given content.
///
/// Partitions are given as row lengths; trailing zeros are allowed.
pub fn lr_coefficient(outer: &[usize], inner: &[usize], content: &[usize]) -> u64 {
    let rows = outer.len().max(inner.len());
    let row = |v: &[usize], r: usize| v.get(r).copied().unwrap_or(0);
    let content: Vec<usize> = content.iter().copied().filter(|&c| c > 0).collect();
    let mut cells = Vec::new();
    let mut total = 0;
    for r in 0..rows {
        let (a, b) = (row(inner, r), row(outer, r));
        if a > b {
            return 0;
        }
        // reading order: each row right to left, rows top to bottom
        for c in (a..b).rev() {
            cells.push((r, c));
        }
        total += b - a;
    }
    if total != content.iter().sum::<usize>() {
        return 0;
    }
    if content.windows(2).any(|w| w[0] < w[1]) {
        return 0;
    }
    let width = row(outer, 0);
    let mut grid = vec![vec![0usize; width]; rows];
    let mut count = vec![0usize; content.len()];
    search(&cells, 0, inner, &content, &mut grid, &mut count)
}

fn search(
    cells: &[(usize, usize)],
    pos: usize,
    inner: &[usize],
    content: &[usize],
    grid: &mut [Vec<usize>],
    count: &mut [usize],
) -> u64 {
    if pos == cells.len() {
        return 1;
    }
    let (r, c) = cells[pos];
    let inner_row = |r: usize| inner.get(r).copied().unwrap_or(0);
    // grid values are 1-based labels; 0 means "outside the skew shape"
    let mut hi = content.len();
    if c + 1 < grid[r].len() && grid[r][c + 1] > 0 {
        hi = hi.min(grid[r][c + 1]);
    }
    let mut lo = 1;
    if r > 0 && c >= inner_row(r - 1) && grid[r - 1][c] > 0 {
        lo = grid[r - 1][c] + 1;
    }
    hi = hi.min(r + 1);
    let mut total = 0;
    for v in lo..=hi {
        let k = v - 1;
        if count[k] >= content[k] || (k > 0 && count[k] >= count[k - 1]) {
            continue;
        }
        count[k] += 1;
        grid[r][c] = v;
        total += search(cells, pos + 1, inner, content, grid, count);
        grid[r][c] = 0;
        count[k] -= 1;
    }
    total
}

/// A nonnegative integer combination of Schubert classes.
pub type LrExpansion = BTreeMap<SchubertIndex, u64>;

fn product_terms(u: &[usize], v: &[usize], bx: GrassmannBox) -> Vec<(Vec<usize>, u64)> {
    let target: usize = u.iter().sum::<usize>() + v.iter().sum::<usize>();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(bx.p);
    fn rec(
        bx: GrassmannBox,
        u: &[usize],
        v: &[usize],
        target: usize,
        cur: &mut Vec<usize>,
        used: usize,
        out: &mut Vec<(Vec<usize>, u64)>,
    ) {
        let r = cur.len();
        if r == bx.p {
            if used == target {
                let c = lr_coefficient(cur, u, v);
                if c > 0 {
                    out.push((cur.clone(), c));
                }
            }
            return;
        }
        let cap = if r == 0 { bx.width() } else { cur[r - 1] };
        let lo = u[r].max(v[r]);
        for x in lo..=cap {
            if used + x > target {
                break;
            }
            cur.push(x);
            rec(bx, u, v, target, cur, used + x, out);
            cur.pop();
        }
    }
    rec(bx, u, v, target, &mut cur, 0, &mut out);
    out
}

/// `σ_u · σ_v` in the cohomology of the Grassmannian (terms outside the box dropped).
pub fn lr_product(u: &SchubertIndex, v: &SchubertIndex) -> Result<LrExpansion, SchubertError> {
    if u.bx() != v.bx() {
        return Err(SchubertError::BoxMismatch(u.bx(), v.bx()));
    }
    let bx = u.bx();
    Ok(product_terms(u.w(), v.w(), bx)
        .into_iter()
        .map(|(w, c)| (SchubertIndex::from_parts_unchecked(w, bx), c))
        .collect())
}

/// An intersection number, flagged when the codimensions do not add up to `dim G_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub value: u64,
    pub codim_mismatch: bool,
}

/// Coefficient of the point class in `σ_{w_1} ⋯ σ_{w_r}`.
pub fn intersection_number(ws: &[SchubertIndex]) -> Result<Intersection, SchubertError> {
    let Some(first) = ws.first() else {
        return Ok(Intersection { value: 0, codim_mismatch: true });
    };
    let bx = first.bx();
    for w in ws {
        if w.bx() != bx {
            return Err(SchubertError::BoxMismatch(bx, w.bx()));
        }
    }
    let total: usize = ws.iter().map(|w| w.size()).sum();
    if total != bx.dim() {
        return Ok(Intersection { value: 0, codim_mismatch: true });
    }
    // multiply the largest classes first so intermediate expansions stay small
    let mut order: Vec<&SchubertIndex> = ws.iter().collect();
    order.sort_by_key(|w| std::cmp::Reverse(w.size()));
    let mut acc: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    acc.insert(order[0].w().to_vec(), 1);
    for w in &order[1..] {
        let mut next: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (lam, c) in &acc {
            for (mu, e) in product_terms(lam, w.w(), bx) {
                *next.entry(mu).or_insert(0) += c * e;
            }
        }
        acc = next;
    }
    let top = vec![bx.width(); bx.p];
    Ok(Intersection { value: acc.get(&top).copied().unwrap_or(0), codim_mismatch: false })
}
