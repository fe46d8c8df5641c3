//! Exact linear algebra over ℚ(i).
//!
//! Rank and determinant use fraction-free (Bareiss) elimination over the
//! Gaussian integers after clearing row denominators; kernels, inverses and
//! solves use reduced row echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::scalar::GaussRational;

#[derive(Clone, Debug, PartialEq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// Exact quotient; the Bareiss invariant guarantees divisibility.
    fn div_exact(&self, o: &GaussInt) -> GaussInt {
        let n = &o.re * &o.re + &o.im * &o.im;
        let p = self.mul(&GaussInt { re: o.re.clone(), im: -&o.im });
        let (qr, rr) = p.re.div_rem(&n);
        let (qi, ri) = p.im.div_rem(&n);
        debug_assert!(rr.is_zero() && ri.is_zero(), "inexact Bareiss division");
        GaussInt { re: qr, im: qi }
    }
}

/// Each row as Gaussian integers together with its denominator lcm.
fn scaled_rows(m: &Mat<GaussRational>) -> Vec<(Vec<GaussInt>, BigInt)> {
    (0..m.rows())
        .map(|i| {
            let l = m.row_slice(i).iter().fold(BigInt::one(), |acc, z| acc.lcm(&z.denom_lcm()));
            let row = m
                .row_slice(i)
                .iter()
                .map(|z| GaussInt {
                    re: z.re.numer() * (&l / z.re.denom()),
                    im: z.im.numer() * (&l / z.im.denom()),
                })
                .collect();
            (row, l)
        })
        .collect()
}

/// Product with one reduction per entry: rows of `a` and columns of `b` are
/// cleared of denominators and multiplied over the Gaussian integers.
pub fn matmul(a: &Mat<GaussRational>, b: &Mat<GaussRational>) -> Mat<GaussRational> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions differ");
    let rows = scaled_rows(a);
    let cols = scaled_rows(&b.transpose());
    let mut data = Vec::with_capacity(a.rows() * b.cols());
    for (r, lr) in &rows {
        for (c, lc) in &cols {
            let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
            for (x, y) in r.iter().zip(c) {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                re += &x.re * &y.re - &x.im * &y.im;
                im += &x.re * &y.im + &x.im * &y.re;
            }
            if re.is_zero() && im.is_zero() {
                data.push(GaussRational::zero());
                continue;
            }
            let den = lr * lc;
            data.push(GaussRational::new(BigRational::new(re, den.clone()), BigRational::new(im, den)));
        }
    }
    Mat::from_vec(a.rows(), b.cols(), data)
}

/// Scale each row to Gaussian integers. Returns the rows and the product of
/// the row multipliers.
fn integer_rows(m: &Mat<GaussRational>) -> (Vec<Vec<GaussInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let l = m.row_slice(i).iter().fold(BigInt::one(), |acc, z| acc.lcm(&z.denom_lcm()));
            scale *= &l;
            let lr = BigRational::from_integer(l);
            m.row_slice(i)
                .iter()
                .map(|z| GaussInt {
                    re: (&z.re * &lr).to_integer(),
                    im: (&z.im * &lr).to_integer(),
                })
                .collect()
        })
        .collect();
    (rows, scale)
}

/// Fraction-free forward elimination. Returns (rank, last pivot, row-swap parity).
fn bareiss(a: &mut [Vec<GaussInt>], cols: usize) -> (usize, GaussInt, bool) {
    let rows = a.len();
    let mut prev = GaussInt { re: BigInt::one(), im: BigInt::zero() };
    let mut r = 0;
    let mut odd = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            odd = !odd;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            for j in c + 1..cols {
                let v = pivot_row[c].mul(&row[j]).sub(&row[c].mul(&pivot_row[j]));
                row[j] = v.div_exact(&prev);
            }
            row[c] = GaussInt { re: BigInt::zero(), im: BigInt::zero() };
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, prev, odd)
}

pub fn rank(m: &Mat<GaussRational>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let (mut rows, _) = integer_rows(m);
    bareiss(&mut rows, m.cols()).0
}

pub fn determinant(m: &Mat<GaussRational>) -> Result<GaussRational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(GaussRational::one());
    }
    let (mut rows, scale) = integer_rows(m);
    let (rank, last, odd) = bareiss(&mut rows, n);
    if rank < n {
        return Ok(GaussRational::zero());
    }
    let s = BigRational::from_integer(scale);
    let mut det = GaussRational::new(
        BigRational::from_integer(last.re) / &s,
        BigRational::from_integer(last.im) / &s,
    );
    if odd {
        det = det.neg();
    }
    Ok(det)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Mat<GaussRational>) -> (Mat<GaussRational>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a.get(r, c).recip();
        for j in c..cols {
            let v = a.get(r, j).mul(&inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..cols {
                if a.get(r, j).is_zero() {
                    continue;
                }
                let v = a.get(i, j).sub(&f.mul(a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Kernel basis: one vector per free column, with a 1 in that column.
pub fn kernel(m: &Mat<GaussRational>) -> Mat<GaussRational> {
    let cols = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<GaussRational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![GaussRational::zero(); cols];
            v[f] = GaussRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = r.get(row, f).neg();
            }
            v
        })
        .collect();
    Mat::from_columns(cols, &vectors)
}

pub fn inverse(m: &Mat<GaussRational>) -> Result<Mat<GaussRational>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("inverse of non-square {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let aug = m.hcat(&Mat::identity(n));
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular("matrix is not invertible".into()));
    }
    Ok(r.submatrix(0, n, n, n))
}

/// Solve `a·x = b` exactly; free variables are set to zero.
pub fn solve(a: &Mat<GaussRational>, b: &Mat<GaussRational>) -> Result<Mat<GaussRational>> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve: {} equations but right-hand side has {} rows",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.cols();
    let (r, pivots) = rref(&a.hcat(b));
    if pivots.iter().any(|&p| p >= n) {
        return Err(Error::Singular("inconsistent linear system".into()));
    }
    let mut x = Mat::zeros(n, b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, r.get(row, n + j).clone());
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Mat<GaussRational>;

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::from_ratio(n, d)
    }

    #[test]
    fn cleared_product_matches_naive() {
        let a = M::from_fn(3, 4, |i, j| {
            GaussRational::new(
                BigRational::new((i as i64 - 2 * j as i64).into(), (j as i64 + 1).into()),
                BigRational::new((i as i64 * j as i64 % 3).into(), (i as i64 + 2).into()),
            )
        });
        let b = M::from_fn(4, 2, |i, j| q(i as i64 * 3 - j as i64, (i + j + 1) as i64));
        assert_eq!(matmul(&a, &b), a.matmul_naive(&b));
        assert_eq!(matmul(&M::zeros(2, 0), &M::zeros(0, 3)), M::zeros(2, 3));
    }

    #[test]
    fn ranks_of_small_matrices() {
        assert_eq!(rank(&M::zeros(3, 3)), 0);
        assert_eq!(rank(&M::jordan_cell(4)), 3);
        assert_eq!(rank(&M::jordan_cell(4).pow(2)), 2);
        assert_eq!(rank(&M::from_i64_rows(&[&[1, 2], &[2, 4], &[0, 0]])), 1);
    }

    #[test]
    fn rank_with_skipped_columns() {
        let m = M::from_i64_rows(&[&[0, 1, 2, 3], &[0, 2, 4, 7], &[0, 3, 6, 1]]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn determinant_with_fractions_and_i() {
        let m = M::from_rows(vec![
            vec![q(1, 2), GaussRational::i()],
            vec![GaussRational::from_integers(0, 2), q(3, 1)],
        ]);
        // 3/2 - i·2i = 3/2 + 2
        assert_eq!(determinant(&m).unwrap(), q(7, 2));
        let swap = M::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&swap).unwrap(), q(-1, 1));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&M::identity(2)).cols(), 0);
        let k = kernel(&M::jordan_cell(2));
        assert_eq!(k, M::from_i64_rows(&[&[1], &[0]]));
        let k = kernel(&M::diag(&[q(1, 1), q(0, 1), q(0, 1)]));
        assert_eq!(k.cols(), 2);
        assert!(M::diag(&[q(1, 1), q(0, 1), q(0, 1)]).matmul(&k).is_zero());
    }

    #[test]
    fn inverse_and_solve() {
        let m = M::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.matmul(&inv), M::identity(2));
        assert!(inverse(&M::jordan_cell(2)).is_err());
        let b = M::from_i64_rows(&[&[3], &[2]]);
        assert_eq!(m.matmul(&solve(&m, &b).unwrap()), b);
        let bad = M::from_i64_rows(&[&[1], &[1]]);
        assert!(solve(&M::jordan_cell(2), &bad).is_err());
    }
}
