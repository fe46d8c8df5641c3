//! Unitary commutators: the explicit 2×2 and paired 4×4 constructions, and
//! a random search in dimension 3.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::{json, Value};

use super::fuzz::FuzzConfig;
use super::gen::trial_rng;
use crate::config::ToleranceConfig;
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::exec::{map_indices, Exec};
use crate::float::{from_na, operator_norm};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::SCHEMA;

type C = Complex64;
type M = Mat<C>;

const DEFAULT_FLOOR: f64 = 0.05;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn adjoint(m: &M) -> M {
    Mat::from_fn(m.cols(), m.rows(), |i, j| m.get(j, i).conj())
}

/// `‖m* m − I‖`.
pub(crate) fn unitarity_defect(m: &M) -> f64 {
    operator_norm(&adjoint(m).matmul(m).sub(&Mat::identity(m.rows())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitaryPair {
    pub u: Matrix,
    pub v: Matrix,
    /// `‖uv − vu − w‖`.
    pub residual: f64,
    /// Largest unitarity defect of `u` and `v`.
    pub defect: f64,
}

impl UnitaryPair {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "residual": self.residual,
            "defect": self.defect,
        })
    }
}

fn pair_of(u: M, v: M, w: &M) -> UnitaryPair {
    let residual = operator_norm(&u.commutator(&v).sub(w));
    let defect = unitarity_defect(&u).max(unitarity_defect(&v));
    UnitaryPair { u: Matrix::Float(u), v: Matrix::Float(v), residual, defect }
}

fn construct_2x2(w: &M) -> (M, M) {
    let (a, b, cc, d) = (*w.get(0, 0), *w.get(0, 1), *w.get(1, 0), *w.get(1, 1));
    let theta = (-(a * d - b * cc)).sqrt();
    let (p, q) = ((b, theta - a), (theta - d, cc));
    let (x, y) = if p.0.norm_sqr() + p.1.norm_sqr() >= q.0.norm_sqr() + q.1.norm_sqr() { p } else { q };
    let len = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let (x, y) = (x / len, y / len);
    let r = Mat::from_rows(vec![vec![x, y.conj()], vec![y, -x.conj()]]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let had = Mat::from_rows(vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]);
    let g = r.matmul(&had);
    let g_adj = adjoint(&g);
    let u0 = Mat::diag(&[theta, theta * c(0.0, 1.0)]);
    let k = c(0.5, 0.5);
    let v0 = Mat::from_rows(vec![vec![k, k], vec![-k, k]]);
    (g.matmul(&u0).matmul(&g_adj), g.matmul(&v0).matmul(&g_adj))
}

fn float_input(w: &Matrix) -> Result<M> {
    match w {
        Matrix::Float(m) => Ok(m.clone()),
        Matrix::Exact(_) => Err(Error::Precondition("unitary constructions need the float64 backend".into())),
    }
}

/// Unitary `u, v` with `uv − vu = w` for a 2×2 unitary `w` of trace zero.
pub fn unitary_commutator_2x2(w: &Matrix, cfg: &ToleranceConfig) -> Result<UnitaryPair> {
    let m = float_input(w)?;
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Dimension(format!("expected 2x2, got {}x{}", m.rows(), m.cols())));
    }
    let defect = unitarity_defect(&m);
    if defect > cfg.verify_tol {
        return Err(Error::Precondition(format!("matrix is not unitary (defect {defect:e})")));
    }
    let tr = m.trace().norm();
    if tr > cfg.verify_tol {
        return Err(Error::Precondition(format!("trace is not zero (|tr| = {tr:e})")));
    }
    let (u, v) = construct_2x2(&m);
    Ok(pair_of(u, v, &m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedUnitary {
    pub w: Matrix,
    pub pair: UnitaryPair,
}

/// `w = diag(α, −α, β, −β)` as a commutator of unitaries, block by block.
pub fn unitary_commutator_4x4_paired(alpha: &Scalar, beta: &Scalar, cfg: &ToleranceConfig) -> Result<PairedUnitary> {
    let (a, b) = (alpha.to_c64(), beta.to_c64());
    for z in [a, b] {
        if (z.norm() - 1.0).abs() > cfg.verify_tol {
            return Err(Error::Precondition(format!("|{z}| is not 1")));
        }
    }
    let w1 = Mat::diag(&[a, -a]);
    let w2 = Mat::diag(&[b, -b]);
    let (u1, v1) = construct_2x2(&w1);
    let (u2, v2) = construct_2x2(&w2);
    let w = w1.direct_sum(&w2);
    let pair = pair_of(u1.direct_sum(&u2), v1.direct_sum(&v2), &w);
    Ok(PairedUnitary { w: Matrix::Float(w), pair })
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::Float(haar(rng, n))
}

fn haar(rng: &mut impl Rng, n: usize) -> M {
    let g = DMatrix::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let (q, r) = g.qr().unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    from_na(&q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitarySearchReport {
    pub dimension: usize,
    pub trials_run: usize,
    /// Smallest `‖C*C − I‖` over sampled commutators `C = uv − vu`.
    pub min_defect: f64,
    pub floor: f64,
    pub below_floor: usize,
}

impl UnitarySearchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "dimension": self.dimension,
            "trials_run": self.trials_run,
            "min_defect": self.min_defect,
            "floor": self.floor,
            "below_floor": self.below_floor,
        })
    }
}

/// Samples random unitary pairs and records how far their commutators are
/// from unitary.
pub fn search_unitary(dim: usize, seed: u64, trials: usize, floor: f64, exec: Exec) -> UnitarySearchReport {
    let defects = map_indices(exec, trials as u64, |t| {
        let mut rng = trial_rng(seed, t);
        let u = haar(&mut rng, dim);
        let v = haar(&mut rng, dim);
        unitarity_defect(&u.commutator(&v))
    });
    UnitarySearchReport {
        dimension: dim,
        trials_run: trials,
        min_defect: defects.iter().copied().fold(f64::INFINITY, f64::min),
        floor,
        below_floor: defects.iter().filter(|&&d| d < floor).count(),
    }
}

pub fn search_unitary_3x3(cfg: &FuzzConfig) -> Result<UnitarySearchReport> {
    search_unitary_3x3_with(cfg, Exec::default())
}

pub fn search_unitary_3x3_with(cfg: &FuzzConfig, exec: Exec) -> Result<UnitarySearchReport> {
    if cfg.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    Ok(search_unitary(3, cfg.seed, cfg.trials, DEFAULT_FLOOR, exec))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlReport {
    pub trials_run: usize,
    pub max_commutator_defect: f64,
    pub max_residual: f64,
}

/// Random 2×2 trace-zero unitaries pushed through the explicit construction.
pub fn control_unitary_2x2(seed: u64, trials: usize, cfg: &ToleranceConfig) -> Result<ControlReport> {
    let mut out = ControlReport { trials_run: trials, max_commutator_defect: 0.0, max_residual: 0.0 };
    for t in 0..trials as u64 {
        let mut rng = trial_rng(seed, t);
        let g = haar(&mut rng, 2);
        let theta = C::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let w = g.matmul(&Mat::diag(&[theta, -theta])).matmul(&adjoint(&g));
        let pair = unitary_commutator_2x2(&Matrix::Float(w), cfg)?;
        let (u, v) = (pair.u.to_c64(), pair.v.to_c64());
        out.max_commutator_defect = out.max_commutator_defect.max(unitarity_defect(&u.commutator(&v)));
        out.max_residual = out.max_residual.max(pair.residual);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Backend;

    fn close(a: &Matrix, b: &M) -> f64 {
        operator_norm(&a.to_c64().sub(b))
    }

    #[test]
    fn swap_gives_reference_pair() {
        let w = Matrix::from_i64_rows(Backend::Float64, &[&[0, 1], &[1, 0]]);
        let p = unitary_commutator_2x2(&w, &ToleranceConfig::default()).unwrap();
        let k = c(0.5, 0.5);
        assert!(close(&p.u, &Mat::diag(&[c(1.0, 0.0), c(0.0, 1.0)])) < 1e-15);
        assert!(close(&p.v, &Mat::from_rows(vec![vec![k, k], vec![-k, k]])) < 1e-15);
        assert!(p.residual < 1e-15);
    }

    #[test]
    fn diagonal_and_rejections() {
        let cfg = ToleranceConfig::default();
        let w = Matrix::from_i64_rows(Backend::Float64, &[&[1, 0], &[0, -1]]);
        let p = unitary_commutator_2x2(&w, &cfg).unwrap();
        assert!(p.residual <= 1e-12 && p.defect <= 1e-12);
        let id = Matrix::identity(Backend::Float64, 2);
        assert!(matches!(unitary_commutator_2x2(&id, &cfg), Err(Error::Precondition(_))));
        let twice = Matrix::from_i64_rows(Backend::Float64, &[&[0, 2], &[2, 0]]);
        assert!(matches!(unitary_commutator_2x2(&twice, &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn paired_examples() {
        let cfg = ToleranceConfig::default();
        let one = Scalar::float(1.0, 0.0);
        let i = Scalar::float(0.0, 1.0);
        for (a, b) in [(&one, &i), (&one, &one)] {
            let p = unitary_commutator_4x4_paired(a, b, &cfg).unwrap();
            assert!(p.pair.residual <= 1e-12 && p.pair.defect <= 1e-12);
        }
        let mut rng = trial_rng(3, 0);
        for _ in 0..20 {
            let a = C::from_polar(1.0, rng.random_range(0.0..6.3));
            let b = C::from_polar(1.0, rng.random_range(0.0..6.3));
            let p = unitary_commutator_4x4_paired(&Scalar::Float(a), &Scalar::Float(b), &cfg).unwrap();
            assert!(p.pair.residual <= 1e-12);
        }
        assert!(unitary_commutator_4x4_paired(&Scalar::float(2.0, 0.0), &one, &cfg).is_err());
    }

    #[test]
    fn search_single_trial_and_control() {
        let cfg = FuzzConfig { seed: 7, trials: 1, max_dim: 3, entry_bound: 1 };
        let r = search_unitary_3x3_with(&cfg, Exec::Sequential).unwrap();
        assert_eq!(r.trials_run, 1);
        assert!(r.min_defect > 0.0);
        let ctl = control_unitary_2x2(5, 50, &ToleranceConfig::default()).unwrap();
        assert!(ctl.max_commutator_defect < 1e-12 && ctl.max_residual < 1e-12);
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = trial_rng(1, 2);
        for n in 1..=5 {
            assert!(unitarity_defect(&haar(&mut rng, n)) < 1e-12);
        }
    }
}
