//! Nilpotent square roots: the existence test on block multiplicities and the
//! perfect-shuffle construction.

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ToleranceConfig;
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jordan::{basis_generic, with_field, Partition};
use crate::matrix::Matrix;
use crate::scalar::GaussRational;
use crate::SCHEMA;

/// First prefix index `b` (1-based, over distinct block sizes) where the
/// multiplicity test fails, or `None` when a nilpotent square root exists.
///
/// With distinct sizes κ₁ > ⋯ > κ_d of multiplicities μ₁, …, μ_d, the test
/// fails at `b` when μ₁ + ⋯ + μ_b is odd and the next size (0 after κ_d)
/// is at least 2 smaller.
pub fn square_root_obstruction(p: &Partition) -> Option<usize> {
    let groups = p.grouped();
    let mut prefix = 0;
    for (b, &(size, mult)) in groups.iter().enumerate() {
        prefix += mult;
        let next = groups.get(b + 1).map_or(0, |g| g.0);
        if prefix % 2 == 1 && size - next >= 2 {
            return Some(b + 1);
        }
    }
    None
}

pub fn has_nilpotent_square_root(p: &Partition) -> bool {
    square_root_obstruction(p).is_none()
}

/// Permutation listing positions 0, 2, 4, … then 1, 3, 5, …
pub fn perfect_shuffle(m: usize) -> Vec<usize> {
    (0..m).step_by(2).chain((1..m).step_by(2)).collect()
}

/// Π⁻¹ J_m Π for the perfect shuffle Π; its square is J_⌈m/2⌉ ⊕ J_⌊m/2⌋.
pub(crate) fn shuffled_cell<T: Field>(m: usize) -> Mat<T> {
    let pi = Mat::<T>::permutation(&perfect_shuffle(m));
    pi.transpose().matmul(&Mat::jordan_cell(m)).matmul(&pi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqrtCertificate {
    /// Square root in Jordan coordinates.
    pub q: Matrix,
    /// `s⁻¹ q² s` is the input.
    pub s: Matrix,
    pub note: String,
}

impl SqrtCertificate {
    /// The square root in the input's own coordinates, `s⁻¹ q s`.
    pub fn root(&self, cfg: &ToleranceConfig) -> Result<Matrix> {
        self.q.conjugate(&self.s, cfg)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "q": self.q.to_json(),
            "s": self.s.to_json(),
            "note": self.note,
        })
    }
}

fn sqrt_generic<T: Field>(j: &Mat<T>, cfg: &ToleranceConfig) -> Result<SqrtCertificate> {
    let basis = basis_generic(j, cfg)?;
    if let Some(b) = basis.blocks.iter().find(|b| !T::is_zero_eigenvalue(&b.eigenvalue, cfg)) {
        return Err(Error::Precondition(format!(
            "matrix is not nilpotent (eigenvalue {:?})",
            b.eigenvalue
        )));
    }
    let sizes: Vec<usize> = basis.blocks.iter().map(|b| b.size).collect();
    let partition = Partition::new(sizes.clone());
    if let Some(b) = square_root_obstruction(&partition) {
        return Err(Error::Precondition(format!(
            "partition {partition} has no nilpotent square root (prefix index {b})"
        )));
    }
    // Blocks come in descending size, so consecutive pairs are the padded pairs.
    let mut cells = Vec::new();
    let mut pairs = Vec::new();
    for chunk in sizes.chunks(2) {
        let m: usize = chunk.iter().sum();
        cells.push(if chunk[0] == 1 { Mat::zeros(m, m) } else { shuffled_cell::<T>(m) });
        pairs.push(format!("{chunk:?}"));
    }
    let q = Mat::block_diag(&cells);
    let s = T::inverse(&basis.s, cfg)?;
    let check = T::inverse(&s, cfg)?.matmul(&q.matmul(&q)).matmul(&s).sub(j);
    if !T::residual_ok(&check, cfg) {
        return Err(Error::Numerical {
            message: "square root certificate does not reproduce the input".into(),
            residual: crate::float::operator_norm(&check.to_c64()),
        });
    }
    Ok(SqrtCertificate {
        q: T::wrap(q),
        s: T::wrap(s),
        note: format!("shuffled cells J_(a+b) for pairs {}", pairs.join(" ")),
    })
}

pub fn nilpotent_square_root(j: &Matrix, cfg: &ToleranceConfig) -> Result<SqrtCertificate> {
    with_field!(j, m, T => sqrt_generic::<T>(m, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::partition_at;
    use crate::scalar::{Backend, Scalar};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn criterion_examples() {
        assert!(has_nilpotent_square_root(&p(&[2, 1])));
        assert!(!has_nilpotent_square_root(&p(&[3])));
        assert!(has_nilpotent_square_root(&p(&[5, 4, 2, 2, 1])));
        assert_eq!(square_root_obstruction(&p(&[4])), Some(1));
        assert_eq!(square_root_obstruction(&p(&[2, 2, 2])), Some(1));
        assert_eq!(square_root_obstruction(&p(&[3, 3, 3, 1])), Some(1));
        assert_eq!(square_root_obstruction(&p(&[3, 2, 2, 1, 1])), None);
        assert_eq!(square_root_obstruction(&p(&[5, 4, 4, 1])), Some(2));
        assert!(has_nilpotent_square_root(&p(&[])));
    }

    #[test]
    fn five_four_two_two_one_by_construction() {
        let j = Matrix::nilpotent(Backend::Exact, &[5, 4, 2, 2, 1]);
        let cert = nilpotent_square_root(&j, &cfg()).unwrap();
        let q2 = cert.q.mat_pow(2).unwrap();
        assert_eq!(q2.conjugate(&cert.s, &cfg()).unwrap(), j);
        let root = cert.root(&cfg()).unwrap();
        assert_eq!(root.mat_pow(2).unwrap(), j);
    }

    #[test]
    fn shuffle_squares_split_cells() {
        for m in 2..=20 {
            let q = shuffled_cell::<GaussRational>(m);
            let want = Mat::nilpotent(&[m.div_ceil(2), m / 2]);
            assert_eq!(q.matmul(&q), want, "m = {m}");
            let sq = Matrix::jordan_cell(Backend::Exact, m).mat_pow(2).unwrap();
            let part = partition_at(&sq, &Scalar::exact_int(0, 0), &cfg()).unwrap();
            assert_eq!(part.parts(), p(&[m.div_ceil(2), m / 2]).parts());
        }
    }

    #[test]
    fn root_examples() {
        let j = Matrix::nilpotent(Backend::Exact, &[2, 2]);
        let cert = nilpotent_square_root(&j, &cfg()).unwrap();
        let zero = Scalar::exact_int(0, 0);
        assert_eq!(partition_at(&cert.q, &zero, &cfg()).unwrap().parts(), &[4]);

        let z = Matrix::zeros(Backend::Exact, 2, 2);
        let cert = nilpotent_square_root(&z, &cfg()).unwrap();
        assert!(cert.q.is_zero());

        let j = Matrix::nilpotent(Backend::Exact, &[3, 2]);
        let cert = nilpotent_square_root(&j, &cfg()).unwrap();
        assert_eq!(partition_at(&cert.q, &zero, &cfg()).unwrap().parts(), &[5]);
        let j5sq = Matrix::jordan_cell(Backend::Exact, 5).mat_pow(2).unwrap();
        assert_eq!(partition_at(&j5sq, &zero, &cfg()).unwrap().parts(), &[3, 2]);
        assert_eq!(cert.q.mat_pow(2).unwrap().conjugate(&cert.s, &cfg()).unwrap(), j);
    }

    #[test]
    fn rejects_bad_inputs() {
        let j4 = Matrix::jordan_cell(Backend::Exact, 4);
        assert!(matches!(nilpotent_square_root(&j4, &cfg()), Err(Error::Precondition(_))));
        let d = Matrix::from_i64_rows(Backend::Exact, &[&[1, 0], &[0, 0]]);
        assert!(matches!(nilpotent_square_root(&d, &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn float_root() {
        let j = Matrix::nilpotent(Backend::Float64, &[3, 2, 1]);
        let cert = nilpotent_square_root(&j, &cfg()).unwrap();
        let back = cert.q.mat_pow(2).unwrap().conjugate(&cert.s, &cfg()).unwrap();
        assert!(back.sub(&j).unwrap().operator_norm_estimate() < 1e-12);
    }
}
