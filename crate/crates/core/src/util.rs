//! Small numeric helpers shared by the hull builders and the comparisons.

use nalgebra::{DMatrix, DVector};

use crate::forms::Vec4;

/// Strict convex hull of planar points, counter-clockwise, as indices.
/// Points within `tol` of a hull edge are dropped.
pub fn convex_hull_2d(pts: &[[f64; 2]], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        pts[i][0]
            .partial_cmp(&pts[j][0])
            .unwrap()
            .then(pts[i][1].partial_cmp(&pts[j][1]).unwrap())
    });
    idx.dedup_by(|a, b| (pts[*a][0] - pts[*b][0]).abs() <= tol && (pts[*a][1] - pts[*b][1]).abs() <= tol);
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        let (ox, oy) = (pts[o][0], pts[o][1]);
        let (ax, ay) = (pts[a][0] - ox, pts[a][1] - oy);
        let (bx, by) = (pts[b][0] - ox, pts[b][1] - oy);
        let len = (bx * bx + by * by).sqrt().max((ax * ax + ay * ay).sqrt()).max(1e-300);
        (ax * by - ay * bx) / len
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= tol {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= tol {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Union-find with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Result of aligning matched point sets by a linear isometry.
#[derive(Clone, Debug)]
pub struct Alignment {
    pub matrix: DMatrix<f64>,
    /// Largest Euclidean distance between mapped source and target points.
    pub max_error: f64,
    /// Largest entry of MᵀJM − J.
    pub form_defect: f64,
    pub det: f64,
}

impl Alignment {
    pub fn is_match(&self, tol: f64) -> bool {
        self.max_error <= tol && self.form_defect <= tol.max(1e-9) * 10.0 && self.det > 0.0
    }
}

/// Align `src` onto `dst` (same indexing) using a frame of `dim` well-spread
/// matched points, then measure all residuals. `diag` is the form preserved
/// by the sought isometry.
pub fn align_frames(src: &[DVector<f64>], dst: &[DVector<f64>], diag: &[f64]) -> Option<Alignment> {
    let dim = diag.len();
    if src.len() != dst.len() || src.len() < dim {
        return None;
    }
    let mut frame: Vec<usize> = Vec::new();
    for _ in 0..dim {
        let mut best = None;
        let mut best_val = 0.0;
        for i in 0..src.len() {
            if frame.contains(&i) {
                continue;
            }
            let mut cols: Vec<DVector<f64>> = frame.iter().map(|&j| src[j].clone()).collect();
            cols.push(src[i].clone());
            let m = DMatrix::from_columns(&cols);
            let g = m.transpose() * &m;
            let v = g.determinant().abs();
            if v > best_val {
                best_val = v;
                best = Some(i);
            }
        }
        frame.push(best?);
    }
    let p = DMatrix::from_columns(&frame.iter().map(|&i| src[i].clone()).collect::<Vec<_>>());
    let q = DMatrix::from_columns(&frame.iter().map(|&i| dst[i].clone()).collect::<Vec<_>>());
    let m = &q * p.try_inverse()?;
    let j = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
    let defect = (m.transpose() * &j * &m - &j).abs().max();
    let max_error = src
        .iter()
        .zip(dst)
        .map(|(s, d)| (&m * s - d).norm())
        .fold(0.0, f64::max);
    let det = m.determinant();
    Some(Alignment { matrix: m, max_error, form_defect: defect, det })
}

pub fn to_dvec(v: &Vec4, coords: &[usize]) -> DVector<f64> {
    DVector::from_iterator(coords.len(), coords.iter().map(|&i| v[i]))
}

/// Is `b` a cyclic rotation of `a` within `tol` entrywise?
pub fn cyclic_match(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    if n == 0 {
        return true;
    }
    (0..n).any(|s| {
        (0..n).all(|i| {
            a[i].len() == b[(i + s) % n].len()
                && a[i].iter().zip(&b[(i + s) % n]).all(|(x, y)| (x - y).abs() <= tol)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_square_drops_collinear() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]];
        let h = convex_hull_2d(&pts, 1e-12);
        assert_eq!(h, vec![0, 1, 3, 4]);
    }

    #[test]
    fn cyclic() {
        let a = vec![vec![1.0], vec![2.0], vec![3.0]];
        let b = vec![vec![2.0], vec![3.0], vec![1.0]];
        let c = vec![vec![3.0], vec![2.0], vec![1.0]];
        assert!(cyclic_match(&a, &b, 1e-12));
        assert!(!cyclic_match(&a, &c, 1e-12));
    }
}
