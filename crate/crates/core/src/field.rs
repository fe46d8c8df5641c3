//! The scalar field abstraction shared by both backends.
//!
//! Algorithms that are identical over ℚ(i) and over complex doubles (Jordan
//! chains, witness assembly, perturbation) are written once against [`Field`];
//! the backend-specific pieces (rank, kernel, eigenvalues) are trait methods.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_complex::Complex64;

use crate::config::ToleranceConfig;
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Backend, GaussRational, Scalar};
use crate::{exact, float};

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Literal zero (no tolerance).
    fn is_exact_zero(&self) -> bool;
    fn modulus(&self) -> f64;
    fn to_c64(&self) -> Complex64;

    fn into_scalar(self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Result<Self>;
    fn wrap(m: Mat<Self>) -> Matrix;
    fn unwrap(m: &Matrix) -> Result<&Mat<Self>>;

    fn product(a: &Mat<Self>, b: &Mat<Self>) -> Mat<Self> {
        a.matmul_naive(b)
    }

    fn rank(m: &Mat<Self>, cfg: &ToleranceConfig) -> usize;
    /// Columns span the kernel.
    fn kernel(m: &Mat<Self>, cfg: &ToleranceConfig) -> Mat<Self>;
    fn inverse(m: &Mat<Self>, cfg: &ToleranceConfig) -> Result<Mat<Self>>;
    /// Exact solution (exact backend) or least-squares solution (float).
    fn solve(a: &Mat<Self>, b: &Mat<Self>, cfg: &ToleranceConfig) -> Result<Mat<Self>>;
    /// Distinct eigenvalues with algebraic multiplicities, in canonical order.
    fn eigenvalues(m: &Mat<Self>, cfg: &ToleranceConfig) -> Result<Vec<(Self, usize)>>;
    /// Whether two eigenvalues denote the same point of the spectrum.
    fn same_eigenvalue(a: &Self, b: &Self, cfg: &ToleranceConfig) -> bool;
    /// Whether an eigenvalue belongs to the nilpotent (zero) cluster.
    fn is_zero_eigenvalue(a: &Self, cfg: &ToleranceConfig) -> bool;
    /// Descending lexicographic order on (re, im).
    fn canonical_cmp(a: &Self, b: &Self) -> Ordering;
    /// Whether a residual matrix counts as zero.
    fn residual_ok(m: &Mat<Self>, cfg: &ToleranceConfig) -> bool;
}

impl Field for GaussRational {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        GaussRational::zero()
    }
    fn one() -> Self {
        GaussRational::one()
    }
    fn from_i64(v: i64) -> Self {
        GaussRational::from_integers(v, 0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRational::from_ratio(num, den)
    }
    fn add(&self, o: &Self) -> Self {
        GaussRational::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRational::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRational::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        GaussRational::div(self, o)
    }
    fn neg(&self) -> Self {
        GaussRational::neg(self)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        GaussRational::to_c64(self)
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }
    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Exact(z) => Ok(z.clone()),
            Scalar::Float(_) => {
                Err(Error::BackendMismatch { left: Backend::Exact, right: Backend::Float64 })
            }
        }
    }
    fn wrap(m: Mat<Self>) -> Matrix {
        Matrix::Exact(m)
    }
    fn unwrap(m: &Matrix) -> Result<&Mat<Self>> {
        match m {
            Matrix::Exact(a) => Ok(a),
            Matrix::Float(_) => {
                Err(Error::BackendMismatch { left: Backend::Exact, right: Backend::Float64 })
            }
        }
    }
    fn product(a: &Mat<Self>, b: &Mat<Self>) -> Mat<Self> {
        exact::matmul(a, b)
    }

    fn rank(m: &Mat<Self>, _cfg: &ToleranceConfig) -> usize {
        exact::rank(m)
    }
    fn kernel(m: &Mat<Self>, _cfg: &ToleranceConfig) -> Mat<Self> {
        exact::kernel(m)
    }
    fn inverse(m: &Mat<Self>, _cfg: &ToleranceConfig) -> Result<Mat<Self>> {
        exact::inverse(m)
    }
    fn solve(a: &Mat<Self>, b: &Mat<Self>, _cfg: &ToleranceConfig) -> Result<Mat<Self>> {
        exact::solve(a, b)
    }
    fn eigenvalues(m: &Mat<Self>, _cfg: &ToleranceConfig) -> Result<Vec<(Self, usize)>> {
        crate::poly::exact_eigenvalues(m)
    }
    fn same_eigenvalue(a: &Self, b: &Self, _cfg: &ToleranceConfig) -> bool {
        a == b
    }
    fn is_zero_eigenvalue(a: &Self, _cfg: &ToleranceConfig) -> bool {
        a.is_zero()
    }
    fn canonical_cmp(a: &Self, b: &Self) -> Ordering {
        b.lex_cmp(a)
    }
    fn residual_ok(m: &Mat<Self>, _cfg: &ToleranceConfig) -> bool {
        m.data().iter().all(GaussRational::is_zero)
    }
}

impl Field for Complex64 {
    const BACKEND: Backend = Backend::Float64;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Float(self)
    }
    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Float(z) => Ok(*z),
            Scalar::Exact(_) => {
                Err(Error::BackendMismatch { left: Backend::Float64, right: Backend::Exact })
            }
        }
    }
    fn wrap(m: Mat<Self>) -> Matrix {
        Matrix::Float(m)
    }
    fn unwrap(m: &Matrix) -> Result<&Mat<Self>> {
        match m {
            Matrix::Float(a) => Ok(a),
            Matrix::Exact(_) => {
                Err(Error::BackendMismatch { left: Backend::Float64, right: Backend::Exact })
            }
        }
    }
    fn rank(m: &Mat<Self>, cfg: &ToleranceConfig) -> usize {
        float::rank(m, cfg.rank_tol)
    }
    fn kernel(m: &Mat<Self>, cfg: &ToleranceConfig) -> Mat<Self> {
        float::kernel(m, cfg.rank_tol)
    }
    fn inverse(m: &Mat<Self>, cfg: &ToleranceConfig) -> Result<Mat<Self>> {
        float::inverse(m, cfg.rank_tol)
    }
    fn solve(a: &Mat<Self>, b: &Mat<Self>, cfg: &ToleranceConfig) -> Result<Mat<Self>> {
        float::least_squares(a, b, cfg.rank_tol)
    }
    fn eigenvalues(m: &Mat<Self>, cfg: &ToleranceConfig) -> Result<Vec<(Self, usize)>> {
        float::eigenvalues(m, cfg.eig_cluster_tol)
    }
    fn same_eigenvalue(a: &Self, b: &Self, cfg: &ToleranceConfig) -> bool {
        (a - b).norm() <= cfg.eig_cluster_tol
    }
    fn is_zero_eigenvalue(a: &Self, cfg: &ToleranceConfig) -> bool {
        a.norm() <= cfg.eig_cluster_tol
    }
    fn canonical_cmp(a: &Self, b: &Self) -> Ordering {
        b.re.total_cmp(&a.re).then_with(|| b.im.total_cmp(&a.im))
    }
    fn residual_ok(m: &Mat<Self>, cfg: &ToleranceConfig) -> bool {
        float::operator_norm(m) <= cfg.verify_tol
    }
}
