//! Norm closure of c(nil₂) in finite dimensions: balanced spectra and an
//! explicit perturbation into the set.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ToleranceConfig;
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jordan::{basis_generic, with_field};
use crate::matrix::Matrix;
use crate::nil2::{decide_cnil2, Witness};
use crate::scalar::{GaussRational, Scalar};
use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub eigenvalue: Scalar,
    pub multiplicity: usize,
    pub partner_multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    pub balanced: bool,
    pub violations: Vec<Violation>,
    pub note: String,
}

const BALANCE_NOTE: &str = "finite dimension: weak and strong balance coincide";

impl BalanceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "balanced": self.balanced,
            "violations": self.violations,
            "note": self.note,
        })
    }
}

fn balance_generic<T: Field>(t: &Mat<T>, cfg: &ToleranceConfig) -> Result<BalanceReport> {
    if !t.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    let eig = T::eigenvalues(t, cfg)?;
    let mut violations = Vec::new();
    for (alpha, mu) in &eig {
        if T::is_zero_eigenvalue(alpha, cfg) {
            continue;
        }
        let target = alpha.neg();
        let partner = eig.iter().find(|(b, _)| T::same_eigenvalue(b, &target, cfg)).map_or(0, |e| e.1);
        if *mu > partner {
            violations.push(Violation {
                eigenvalue: alpha.clone().into_scalar(),
                multiplicity: *mu,
                partner_multiplicity: partner,
            });
        }
    }
    Ok(BalanceReport { balanced: violations.is_empty(), violations, note: BALANCE_NOTE.into() })
}

/// Spectrum symmetric under negation with matching algebraic multiplicities.
pub fn is_balanced(t: &Matrix, cfg: &ToleranceConfig) -> Result<BalanceReport> {
    with_field!(t, m, T => balance_generic::<T>(m, cfg))
}

/// Finite-dimensional closure membership; equivalent to balance.
pub fn in_closure_cnil2(t: &Matrix, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(is_balanced(t, cfg)?.balanced)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Approximation {
    pub x: Matrix,
    pub distance: f64,
    pub witness: Witness,
}

impl Approximation {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "x": self.x.to_json(),
            "distance": self.distance,
            "witness": self.witness.to_json(&self.x),
        })
    }
}

/// Scalar δ·k/m in either backend, with δ = 2^(−e).
trait Step: Field {
    fn step(e: u32, k: usize, m: usize) -> Self;
}

impl Step for GaussRational {
    fn step(e: u32, k: usize, m: usize) -> Self {
        let den = BigInt::from(m) << e as usize;
        GaussRational::real(BigRational::new(BigInt::from(k), den))
    }
}

impl Step for num_complex::Complex64 {
    fn step(e: u32, k: usize, m: usize) -> Self {
        num_complex::Complex64::new(k as f64 / m as f64 * 0.5f64.powi(e as i32), 0.0)
    }
}

const MAX_HALVINGS: u32 = 200;

fn approx_generic<T: Step>(t: &Mat<T>, eps: f64, cfg: &ToleranceConfig) -> Result<Approximation> {
    let n = t.rows();
    let basis = basis_generic(t, cfg)?;
    // Canonical positions of each (α, −α) pair of eigenvalue groups.
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut zero: Vec<usize> = Vec::new();
    let mut taken = vec![false; basis.spectrum.len()];
    let positions_of = |l: &T| -> Vec<usize> {
        basis
            .blocks
            .iter()
            .filter(|b| &b.eigenvalue == l)
            .flat_map(|b| b.offset..b.offset + b.size)
            .collect()
    };
    for i in 0..basis.spectrum.len() {
        let alpha = &basis.spectrum[i].0;
        if T::is_zero_eigenvalue(alpha, cfg) {
            zero.extend(positions_of(alpha));
            taken[i] = true;
            continue;
        }
        if taken[i] {
            continue;
        }
        let target = alpha.neg();
        let j = (0..basis.spectrum.len())
            .find(|&j| !taken[j] && j != i && T::same_eigenvalue(&basis.spectrum[j].0, &target, cfg))
            .ok_or_else(|| Error::Precondition("matrix is not balanced".into()))?;
        taken[i] = true;
        taken[j] = true;
        groups.push((positions_of(alpha), positions_of(&basis.spectrum[j].0)));
    }
    zero.sort_unstable();

    // Smallest distance between distinct eigenvalues, including α to −α.
    let values: Vec<_> = basis.spectrum.iter().map(|(l, _)| l.to_c64()).collect();
    let mut gap = f64::INFINITY;
    for (a, va) in values.iter().enumerate() {
        for vb in &values[a + 1..] {
            gap = gap.min((va - vb).norm());
        }
    }
    let s_inv = T::inverse(&basis.s, cfg)?;
    let cond = crate::float::operator_norm(&basis.s.to_c64()) * crate::float::operator_norm(&s_inv.to_c64());
    let bound = (eps / (2.0 * cond + n as f64)).min(gap / 2.0);
    let mut e = 0u32;
    while 0.5f64.powi(e as i32) >= bound {
        e += 1;
    }

    for _ in 0..MAX_HALVINGS {
        let mut diag = vec![T::zero(); n];
        for (own, other) in &groups {
            let m = own.len();
            for (k, (&p, &q)) in own.iter().zip(other).enumerate() {
                let d = T::step(e, k + 1, m);
                diag[p] = d.clone();
                diag[q] = d.neg();
            }
        }
        let z = zero.len();
        for (k, pair) in zero.chunks(2).enumerate() {
            if pair.len() == 2 {
                let d = T::step(e, k + 1, z);
                diag[pair[0]] = d.clone();
                diag[pair[1]] = d.neg();
            }
        }
        let pert = basis.s.matmul(&Mat::diag(&diag)).matmul(&s_inv);
        let x = t.add(&pert);
        let distance = crate::float::operator_norm(&pert.to_c64());
        if distance < eps {
            // Designed eigenvalue separation is at least δ/n; cluster tighter than that.
            let sep = 0.5f64.powi(e as i32) / (2.0 * n as f64);
            let local = ToleranceConfig { eig_cluster_tol: cfg.eig_cluster_tol.min(sep / 4.0), ..*cfg };
            let xm = T::wrap(x);
            let d = decide_cnil2(&xm, &local).map_err(|err| Error::Numerical {
                message: format!("perturbed matrix at distance {distance:e} could not be certified: {err}"),
                residual: distance,
            })?;
            let witness = d.witness.ok_or_else(|| Error::Numerical {
                message: format!("perturbed matrix at distance {distance:e} was not certified"),
                residual: distance,
            })?;
            return Ok(Approximation { x: xm, distance, witness });
        }
        e += 1;
    }
    Err(Error::Tolerance(format!("could not reach distance below {eps:e}")))
}

/// A member `x` of c(nil₂) with `‖x − t‖ < eps`, for balanced `t`.
pub fn approximate_in_cnil2(t: &Matrix, eps: f64, cfg: &ToleranceConfig) -> Result<Approximation> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Precondition(format!("eps must be positive and finite, got {eps}")));
    }
    let report = is_balanced(t, cfg)?;
    if !report.balanced {
        return Err(Error::Precondition(format!("matrix is not balanced: {:?}", report.violations)));
    }
    let d = decide_cnil2(t, cfg)?;
    if let Some(witness) = d.witness {
        return Ok(Approximation { x: t.clone(), distance: 0.0, witness });
    }
    with_field!(t, m, T => approx_generic::<T>(m, eps, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::eigenvalues;
    use crate::nil2::verify_witness;
    use crate::scalar::Backend;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn ex(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(Backend::Exact, rows)
    }

    #[test]
    fn balance_examples() {
        assert!(is_balanced(&ex(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 0]]), &cfg()).unwrap().balanced);
        let r = is_balanced(&ex(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]), &cfg()).unwrap();
        assert!(!r.balanced);
        assert_eq!(
            r.violations,
            vec![Violation { eigenvalue: Scalar::exact_int(1, 0), multiplicity: 2, partner_multiplicity: 1 }]
        );
        assert!(is_balanced(&Matrix::jordan_cell(Backend::Exact, 7), &cfg()).unwrap().balanced);
    }

    #[test]
    fn closure_examples() {
        let j4 = Matrix::jordan_cell(Backend::Exact, 4);
        assert!(in_closure_cnil2(&j4, &cfg()).unwrap());
        assert!(!decide_cnil2(&j4, &cfg()).unwrap().is_yes());
        assert!(in_closure_cnil2(&ex(&[&[2, 0], &[0, -2]]), &cfg()).unwrap());
        assert!(!in_closure_cnil2(&ex(&[&[1]]), &cfg()).unwrap());
    }

    #[test]
    fn j2_perturbation() {
        let t = Matrix::jordan_cell(Backend::Exact, 2);
        let a = approximate_in_cnil2(&t, 0.1, &cfg()).unwrap();
        let d = a.x.get(0, 0);
        let dv = d.to_c64().re;
        assert!(dv > 0.0 && dv <= 0.01);
        assert_eq!(a.x.get(1, 1), d.neg());
        assert_eq!(a.x.get(0, 1), Scalar::exact_int(1, 0));
        assert!((a.distance - dv).abs() < 1e-12 && a.distance < 0.1);
        assert!(decide_cnil2(&a.x, &cfg()).unwrap().is_yes());
    }

    #[test]
    fn member_fast_path() {
        let t = ex(&[&[1, 0], &[0, -1]]);
        let a = approximate_in_cnil2(&t, 1e-9, &cfg()).unwrap();
        assert_eq!((a.x, a.distance), (t, 0.0));
    }

    #[test]
    fn j4_perturbation() {
        let t = Matrix::jordan_cell(Backend::Exact, 4);
        let a = approximate_in_cnil2(&t, 1e-3, &cfg()).unwrap();
        assert!(a.distance < 1e-3);
        assert_eq!(eigenvalues(&a.x, &cfg()).unwrap().len(), 4);
        assert!(verify_witness(&a.x, &a.witness, &cfg()).unwrap().pass);
    }

    #[test]
    fn unbalanced_is_rejected() {
        assert!(matches!(approximate_in_cnil2(&ex(&[&[1]]), 0.1, &cfg()), Err(Error::Precondition(_))));
        assert!(approximate_in_cnil2(&ex(&[&[0]]), 0.0, &cfg()).is_err());
    }

    #[test]
    fn distances_shrink_with_eps() {
        let a = ex(&[&[1, 1], &[0, 1]]);
        let t = a.direct_sum(&ex(&[&[-1, 0], &[0, -1]])).unwrap().direct_sum(&Matrix::jordan_cell(Backend::Exact, 3)).unwrap();
        assert!(is_balanced(&t, &cfg()).unwrap().balanced);
        let mut last = f64::INFINITY;
        for k in 1..=6 {
            let eps = 10f64.powi(-k);
            let r = approximate_in_cnil2(&t, eps, &cfg()).unwrap();
            assert!(r.distance < eps && r.distance <= last);
            last = r.distance;
        }
    }

    #[test]
    fn float_perturbation() {
        let t = Matrix::jordan_cell(Backend::Float64, 3);
        let a = approximate_in_cnil2(&t, 1e-2, &cfg()).unwrap();
        assert!(a.distance < 1e-2);
        assert!(verify_witness(&a.x, &a.witness, &cfg()).unwrap().pass);
    }
}
