//! Off-diagonal double sums `Σ_{i≠j} w_i w_j k(i, j)` over a quadrature surface.
//!
//! Rows are evaluated in parallel, each sequentially, and the row totals are combined
//! in index order with compensated summation, so results do not depend on the thread
//! count. Kernels must be symmetric in `(i, j)`.

use crate::quadrature::compensated_sum;
use crate::surface_geometry::QuadratureSurface;
use rayon::prelude::*;

/// Geometry of one node pair as seen from node `i`.
pub(crate) struct Pair {
    /// `x_i − x_j`.
    pub d: [f64; 3],
    /// `|x_i − x_j|²`.
    pub r2: f64,
    pub ni: [f64; 3],
    pub nj: [f64; 3],
}

impl Pair {
    #[inline]
    pub fn r(&self) -> f64 {
        self.r2.sqrt()
    }

    /// `|ν_i − ν_j|²`, formed from the difference to avoid cancellation in `2 − 2ν_i·ν_j`.
    #[inline]
    pub fn dn2(&self) -> f64 {
        let a = self.ni[0] - self.nj[0];
        let b = self.ni[1] - self.nj[1];
        let c = self.ni[2] - self.nj[2];
        a * a + b * b + c * c
    }

    #[inline]
    pub fn dot(&self) -> f64 {
        self.ni[0] * self.nj[0] + self.ni[1] * self.nj[1] + self.ni[2] * self.nj[2]
    }

    /// `(ν_i·e)(ν_j·e)` with `e = (x_i − x_j)/|x_i − x_j|`.
    #[inline]
    pub fn projected(&self) -> f64 {
        let pi = self.ni[0] * self.d[0] + self.ni[1] * self.d[1] + self.ni[2] * self.d[2];
        let pj = self.nj[0] * self.d[0] + self.nj[1] * self.d[1] + self.nj[2] * self.d[2];
        pi * pj / self.r2
    }
}

struct Soa {
    x: Vec<[f64; 3]>,
    n: Vec<[f64; 3]>,
    w: Vec<f64>,
}

impl Soa {
    fn new(s: &QuadratureSurface) -> Self {
        Self { x: s.nodes().to_vec(), n: s.normals().to_vec(), w: s.weights().to_vec() }
    }

    /// Σ_j w_j k(i, j) · into `acc`, over `j` in `range`, skipping `i`.
    #[inline]
    fn row<F: Fn(&Pair, f64, &mut [f64])>(&self, i: usize, range: std::ops::Range<usize>, f: &F, acc: &mut [f64]) {
        let xi = self.x[i];
        let ni = self.n[i];
        for j in range {
            if j == i {
                continue;
            }
            let xj = self.x[j];
            let d = [xi[0] - xj[0], xi[1] - xj[1], xi[2] - xj[2]];
            let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            if r2 == 0.0 {
                continue;
            }
            f(&Pair { d, r2, ni, nj: self.n[j] }, self.w[j], acc);
        }
    }
}

/// Returns `[Σ_{i≠j} w_i w_j k_c(i, j)]_{c < m}`.
///
/// `f(pair, w_j, acc)` must add `w_j · k_c` into `acc[c]` for each component `c`.
pub(crate) fn pair_sums<F>(s: &QuadratureSurface, m: usize, f: F) -> Vec<f64>
where
    F: Fn(&Pair, f64, &mut [f64]) + Sync,
{
    let soa = Soa::new(s);
    let n = soa.x.len();
    let rows: Vec<Vec<f64>> = match s.rotation_fold() {
        Some(ring) => (0..n / ring)
            .into_par_iter()
            .map(|t| {
                let i = t * ring;
                let mut acc = vec![0.0; m];
                soa.row(i, 0..n, &f, &mut acc);
                let scale = soa.w[i] * ring as f64;
                acc.iter_mut().for_each(|v| *v *= scale);
                acc
            })
            .collect(),
        None => (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = vec![0.0; m];
                soa.row(i, i + 1..n, &f, &mut acc);
                let scale = 2.0 * soa.w[i];
                acc.iter_mut().for_each(|v| *v *= scale);
                acc
            })
            .collect(),
    };
    (0..m).map(|c| compensated_sum(rows.iter().map(|r| r[c]))).collect()
}

/// Returns the `m` row accumulators of every node `i`, with `j` running over all `j ≠ i`.
pub(crate) fn node_sums<F>(s: &QuadratureSurface, m: usize, f: F) -> Vec<Vec<f64>>
where
    F: Fn(&Pair, f64, &mut [f64]) + Sync,
{
    let soa = Soa::new(s);
    let n = soa.x.len();
    let row = |i: usize| {
        let mut acc = vec![0.0; m];
        soa.row(i, 0..n, &f, &mut acc);
        acc
    };
    match s.rotation_fold() {
        Some(ring) => {
            let rings: Vec<Vec<f64>> = (0..n / ring).into_par_iter().map(|t| row(t * ring)).collect();
            (0..n).map(|i| rings[i / ring].clone()).collect()
        }
        None => (0..n).into_par_iter().map(row).collect(),
    }
}

/// Number of ordered off-diagonal pairs.
pub(crate) fn pair_count(s: &QuadratureSurface) -> u64 {
    let n = s.len() as u64;
    n * n.saturating_sub(1)
}
