//! Complex double linear algebra, backed by nalgebra's SVD and Schur
//! decompositions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::field::Field;

pub(crate) fn to_na(m: &Mat<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

pub(crate) fn from_na(m: &DMatrix<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn singular_values(m: &Mat<Complex64>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn operator_norm(m: &Mat<Complex64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `tol · σ_max`.
pub fn rank(m: &Mat<Complex64>, tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&max) = s.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > tol * max).count()
}

/// Orthonormal kernel basis from the right singular vectors.
pub fn kernel(m: &Mat<Complex64>, tol: f64) -> Mat<Complex64> {
    let n = m.cols();
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    if m.rows() == 0 || m.max_modulus() == 0.0 {
        return Mat::identity(n);
    }
    // Pad with zero rows so the SVD yields a full n×n V.
    let rows = m.rows().max(n);
    let padded = Mat::from_fn(rows, n, |i, j| if i < m.rows() { *m.get(i, j) } else { <Complex64 as Zero>::zero() });
    let svd = to_na(&padded).svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut null: Vec<Vec<Complex64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * max)
        .map(|(i, _)| (0..n).map(|j| v_t[(i, j)].conj()).collect())
        .collect();
    // Deterministic phase: make the largest-modulus entry real positive.
    for v in &mut null {
        if let Some(pivot) = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
            if pivot.norm() > 0.0 {
                let phase = pivot.conj() / pivot.norm();
                v.iter_mut().for_each(|x| *x *= phase);
            }
        }
    }
    Mat::from_columns(n, &null)
}

pub fn inverse(m: &Mat<Complex64>, tol: f64) -> Result<Mat<Complex64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("inverse of non-square {}x{}", m.rows(), m.cols())));
    }
    if m.rows() == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    if rank(m, tol) < m.rows() {
        return Err(Error::Singular("matrix is numerically singular".into()));
    }
    to_na(m)
        .try_inverse()
        .map(|inv| from_na(&inv))
        .ok_or_else(|| Error::Singular("LU inversion failed".into()))
}

/// Minimum-norm least-squares solution of `a·x = b`.
pub fn least_squares(a: &Mat<Complex64>, b: &Mat<Complex64>, tol: f64) -> Result<Mat<Complex64>> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve: {} equations but right-hand side has {} rows",
            a.rows(),
            b.rows()
        )));
    }
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Mat::zeros(a.cols(), b.cols()));
    }
    let svd = to_na(a).svd(true, true);
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd
        .solve(&to_na(b), tol * max)
        .map_err(|e| Error::Numerical { message: e.to_string(), residual: f64::NAN })?;
    Ok(from_na(&x))
}

/// Eigenvalues from the complex Schur form, grouped by single-linkage
/// clustering with radius `cluster_tol`. Points within `cluster_tol` of the
/// origin join a cluster pinned at exactly zero.
pub fn eigenvalues(m: &Mat<Complex64>, cluster_tol: f64) -> Result<Vec<(Complex64, usize)>> {
    if !m.is_square() {
        return Err(Error::Dimension("eigenvalues of a non-square matrix".into()));
    }
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(to_na(m), f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Numerical { message: "Schur iteration did not converge".into(), residual: f64::NAN }
    })?;
    let (_, t) = schur.unpack();
    let raw: Vec<Complex64> = (0..m.rows()).map(|i| t[(i, i)]).collect();
    Ok(cluster(&raw, cluster_tol))
}

pub(crate) fn cluster(points: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    // Node n is the origin.
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for i in 0..n {
        if points[i].norm() <= tol {
            union(&mut parent, i, n);
        }
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= tol {
                union(&mut parent, i, j);
            }
        }
    }
    let origin = find(&mut parent, n);
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += points[i];
                g.2 += 1;
            }
            None => groups.push((root, points[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(root, sum, k)| {
            let centroid = if root == origin { <Complex64 as Zero>::zero() } else { sum / k as f64 };
            (centroid, k)
        })
        .collect();
    out.sort_by(|a, b| Complex64::canonical_cmp(&a.0, &b.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Mat<Complex64>;

    #[test]
    fn norms() {
        assert!((operator_norm(&M::identity(5)) - 1.0).abs() < 1e-12);
        let d = M::diag(&[Complex64::new(3.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!((operator_norm(&d) - 3.0).abs() < 1e-12);
        let j = M::jordan_cell(2).scale(&Complex64::new(2.0, 0.0));
        assert!((operator_norm(&j) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn float_rank_and_kernel() {
        assert_eq!(rank(&M::jordan_cell(4), 1e-9), 3);
        let k = kernel(&M::jordan_cell(3), 1e-9);
        assert_eq!(k.cols(), 1);
        assert!(M::jordan_cell(3).matmul(&k).max_modulus() < 1e-12);
        let wide = M::from_i64_rows(&[&[1, 1, 0]]);
        let k = kernel(&wide, 1e-9);
        assert_eq!(k.cols(), 2);
        assert!(wide.matmul(&k).max_modulus() < 1e-12);
    }

    #[test]
    fn clustering_pins_origin() {
        let pts = [
            Complex64::new(1e-9, 0.0),
            Complex64::new(-1e-9, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(2.0 + 1e-9, 0.0),
        ];
        let c = cluster(&pts, 1e-7);
        assert_eq!(c, vec![(Complex64::new(2.0 + 5e-10, 0.0), 2), (Complex64::new(0.0, 0.0), 2)]);
    }

    #[test]
    fn rotation_eigenvalues() {
        let r = M::from_i64_rows(&[&[0, -1], &[1, 0]]);
        let ev = eigenvalues(&r, 1e-7).unwrap();
        assert_eq!(ev.len(), 2);
        assert!((ev[0].0 - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((ev[1].0 - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }
}
