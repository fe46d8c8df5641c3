//! Similarity invariants: eigenvalues, Weyr sequences, Jordan partitions and
//! explicit Jordan bases.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::scalar::{GaussRational, Scalar};

/// Jordan block sizes at one eigenvalue, weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts descending and drops zero parts.
    pub fn new(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Transposed Young diagram.
    pub fn conjugate(&self) -> Partition {
        let top = self.0.first().copied().unwrap_or(0);
        Partition((1..=top).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Block sizes read off from nullity increments of successive powers.
    pub fn from_weyr(weyr: &[usize]) -> Partition {
        let increments: Vec<usize> = weyr
            .iter()
            .scan(0, |prev, &w| {
                let d = w - *prev;
                *prev = w;
                Some(d)
            })
            .collect();
        Partition::new(increments).conjugate()
    }

    /// Distinct sizes with multiplicities, largest size first.
    pub fn grouped(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((size, mult)) if *size == p => *mult += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl From<Vec<usize>> for Partition {
    fn from(v: Vec<usize>) -> Self {
        Partition::new(v)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub eigenvalue: Scalar,
    pub partition: Partition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanSpectrum {
    pub entries: Vec<SpectrumEntry>,
    pub dimension: usize,
}

impl JordanSpectrum {
    /// Spectrum of `−T`: eigenvalues negated, then re-sorted canonically.
    pub fn negated(&self) -> JordanSpectrum {
        let mut entries: Vec<SpectrumEntry> = self
            .entries
            .iter()
            .map(|e| SpectrumEntry { eigenvalue: e.eigenvalue.neg(), partition: e.partition.clone() })
            .collect();
        entries.sort_by(|a, b| match (&a.eigenvalue, &b.eigenvalue) {
            (Scalar::Exact(x), Scalar::Exact(y)) => GaussRational::canonical_cmp(x, y),
            (x, y) => num_complex::Complex64::canonical_cmp(&x.to_c64(), &y.to_c64()),
        });
        JordanSpectrum { entries, dimension: self.dimension }
    }

    pub fn partition_of(&self, eigenvalue: &Scalar) -> Option<&Partition> {
        self.entries.iter().find(|e| &e.eigenvalue == eigenvalue).map(|e| &e.partition)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanBasis {
    pub spectrum: JordanSpectrum,
    pub s: Matrix,
    pub canonical: Matrix,
}

// --- generic engine ---------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct Block<T> {
    pub eigenvalue: T,
    pub size: usize,
    pub offset: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Basis<T> {
    pub s: Mat<T>,
    pub canonical: Mat<T>,
    pub blocks: Vec<Block<T>>,
    pub spectrum: Vec<(T, Partition)>,
}

fn require_square<T: Field>(t: &Mat<T>) -> Result<()> {
    if t.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("expected a square matrix, got {}x{}", t.rows(), t.cols())))
    }
}

/// Nullities of (t − λI)^k, k = 1, 2, … while they still increase.
pub(crate) fn weyr<T: Field>(t: &Mat<T>, lambda: &T, cfg: &ToleranceConfig) -> Vec<usize> {
    let n = t.rows();
    let b = t.shift(&lambda.neg());
    let mut out = Vec::new();
    let mut power = Mat::identity(n);
    let mut prev = 0;
    for _ in 0..n {
        power = power.matmul(&b);
        let nul = n - T::rank(&power, cfg);
        if nul <= prev {
            break;
        }
        out.push(nul);
        prev = nul;
        if nul == n {
            break;
        }
    }
    out
}

pub(crate) fn partition_at_generic<T: Field>(
    t: &Mat<T>,
    lambda: &T,
    cfg: &ToleranceConfig,
) -> Result<Partition> {
    require_square(t)?;
    let w = weyr(t, lambda, cfg);
    if w.is_empty() {
        return Err(Error::NotAnEigenvalue(format!("{:?}", lambda)));
    }
    Ok(Partition::from_weyr(&w))
}

pub(crate) fn spectrum_generic<T: Field>(t: &Mat<T>, cfg: &ToleranceConfig) -> Result<Vec<(T, Partition)>> {
    require_square(t)?;
    spectrum_with(t, T::eigenvalues(t, cfg)?, cfg)
}

pub(crate) fn spectrum_with<T: Field>(
    t: &Mat<T>,
    eig: Vec<(T, usize)>,
    cfg: &ToleranceConfig,
) -> Result<Vec<(T, Partition)>> {
    eig.into_iter()
        .map(|(lambda, mult)| {
            let p = partition_at_generic(t, &lambda, cfg)?;
            if p.size() != mult {
                return Err(Error::Numerical {
                    message: format!(
                        "partition {p} at {lambda:?} does not match algebraic multiplicity {mult}"
                    ),
                    residual: (p.size() as f64 - mult as f64).abs(),
                });
            }
            Ok((lambda, p))
        })
        .collect()
}

fn independent<T: Field>(n: usize, vectors: &[Vec<T>], cfg: &ToleranceConfig) -> bool {
    vectors.is_empty() || T::rank(&Mat::from_columns(n, vectors), cfg) == vectors.len()
}

/// Jordan chains for one eigenvalue, top-down through the kernel filtration.
/// Returns chains ordered by decreasing length; each chain is listed bottom
/// (eigenvector) first.
fn chains_for<T: Field>(t: &Mat<T>, lambda: &T, cfg: &ToleranceConfig) -> Vec<Vec<Vec<T>>> {
    let n = t.rows();
    let b = t.shift(&lambda.neg());
    let depth = weyr(t, lambda, cfg).len();
    let mut kernels: Vec<Vec<Vec<T>>> = vec![Vec::new()];
    let mut power = Mat::identity(n);
    for _ in 0..depth {
        power = power.matmul(&b);
        kernels.push(T::kernel(&power, cfg).columns());
    }

    let mut tops: Vec<(usize, Vec<T>)> = Vec::new();
    // Images of already chosen tops that sit at the current level.
    let mut carried: Vec<Vec<T>> = Vec::new();
    for level in (1..=depth).rev() {
        let mut span: Vec<Vec<T>> = kernels[level - 1].clone();
        span.extend(carried.iter().cloned());
        let needed = kernels[level].len().saturating_sub(span.len());
        let mut fresh = Vec::new();
        for cand in &kernels[level] {
            if fresh.len() == needed {
                break;
            }
            span.push(cand.clone());
            if independent(n, &span, cfg) {
                fresh.push(cand.clone());
            } else {
                span.pop();
            }
        }
        for v in &fresh {
            tops.push((level, v.clone()));
        }
        carried = carried.iter().chain(fresh.iter()).map(|v| b.mul_vec(v)).collect();
    }

    tops.into_iter()
        .map(|(level, top)| {
            let mut chain = vec![top];
            for _ in 1..level {
                let next = b.mul_vec(chain.last().expect("nonempty"));
                chain.push(next);
            }
            chain.reverse();
            chain
        })
        .collect()
}

pub(crate) fn basis_generic<T: Field>(t: &Mat<T>, cfg: &ToleranceConfig) -> Result<Basis<T>> {
    require_square(t)?;
    basis_with(t, T::eigenvalues(t, cfg)?, cfg)
}

pub(crate) fn basis_with<T: Field>(t: &Mat<T>, eig: Vec<(T, usize)>, cfg: &ToleranceConfig) -> Result<Basis<T>> {
    let n = t.rows();
    let mut columns: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    let mut spectrum = Vec::new();
    for (lambda, mult) in eig {
        let chains = chains_for(t, &lambda, cfg);
        let sizes: Vec<usize> = chains.iter().map(Vec::len).collect();
        let partition = Partition::new(sizes.clone());
        if partition.size() != mult {
            return Err(Error::Numerical {
                message: format!("Jordan chains at {lambda:?} span {} of {mult} dimensions", partition.size()),
                residual: (partition.size() as f64 - mult as f64).abs(),
            });
        }
        for chain in chains {
            blocks.push(Block { eigenvalue: lambda.clone(), size: chain.len(), offset: columns.len() });
            columns.extend(chain);
        }
        spectrum.push((lambda, partition));
    }
    let s = Mat::from_columns(n, &columns);
    let canonical = Mat::block_diag(
        &blocks.iter().map(|b| Mat::jordan_block(&b.eigenvalue, b.size)).collect::<Vec<_>>(),
    );
    check_basis(t, &s, &canonical, cfg)?;
    Ok(Basis { s, canonical, blocks, spectrum })
}

fn check_basis<T: Field>(t: &Mat<T>, s: &Mat<T>, canonical: &Mat<T>, cfg: &ToleranceConfig) -> Result<()> {
    let inv = T::inverse(s, cfg).map_err(|_| Error::Numerical {
        message: "Jordan chains are linearly dependent".into(),
        residual: f64::INFINITY,
    })?;
    let residual = inv.matmul(t).matmul(s).sub(canonical);
    if T::residual_ok(&residual, cfg) {
        Ok(())
    } else {
        Err(Error::Numerical {
            message: "ill-conditioned Jordan chain lift".into(),
            residual: crate::float::operator_norm(&residual.to_c64()),
        })
    }
}

fn wrap_spectrum<T: Field>(n: usize, spectrum: Vec<(T, Partition)>) -> JordanSpectrum {
    JordanSpectrum {
        entries: spectrum
            .into_iter()
            .map(|(l, p)| SpectrumEntry { eigenvalue: l.into_scalar(), partition: p })
            .collect(),
        dimension: n,
    }
}

macro_rules! with_field {
    ($m:expr, $x:ident, $T:ident => $body:expr) => {
        match $m {
            Matrix::Exact($x) => {
                type $T = GaussRational;
                $body
            }
            Matrix::Float($x) => {
                type $T = num_complex::Complex64;
                $body
            }
        }
    };
}
pub(crate) use with_field;

// --- public operations ------------------------------------------------------

/// Nullities of (t − λI)^k for k = 1, 2, … up to stabilization. Empty when λ
/// is not an eigenvalue.
pub fn weyr_sequence(t: &Matrix, lambda: &Scalar, cfg: &ToleranceConfig) -> Result<Vec<usize>> {
    with_field!(t, m, T => {
        require_square(m)?;
        let l = T::from_scalar(lambda)?;
        Ok(weyr(m, &l, cfg))
    })
}

pub fn partition_at(t: &Matrix, lambda: &Scalar, cfg: &ToleranceConfig) -> Result<Partition> {
    with_field!(t, m, T => {
        let l = T::from_scalar(lambda)?;
        partition_at_generic(m, &l, cfg)
    })
}

/// Distinct eigenvalues with algebraic multiplicities.
pub fn eigenvalues(t: &Matrix, cfg: &ToleranceConfig) -> Result<Vec<(Scalar, usize)>> {
    with_field!(t, m, T => {
        require_square(m)?;
        Ok(T::eigenvalues(m, cfg)?.into_iter().map(|(l, k)| (l.into_scalar(), k)).collect())
    })
}

pub fn jordan_spectrum(t: &Matrix, cfg: &ToleranceConfig) -> Result<JordanSpectrum> {
    with_field!(t, m, T => {
        let sp: Vec<(T, Partition)> = spectrum_generic(m, cfg)?;
        Ok(wrap_spectrum(m.rows(), sp))
    })
}

/// `s⁻¹ t s = canonical`, with cells ordered by eigenvalue then decreasing size.
pub fn jordan_basis(t: &Matrix, cfg: &ToleranceConfig) -> Result<JordanBasis> {
    with_field!(t, m, T => {
        let b: Basis<T> = basis_generic(m, cfg)?;
        Ok(JordanBasis {
            spectrum: wrap_spectrum(m.rows(), b.spectrum),
            s: T::wrap(b.s),
            canonical: T::wrap(b.canonical),
        })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertibleNilpotentSplit {
    pub s: Matrix,
    /// Invertible part; may be 0×0.
    pub b: Matrix,
    /// Nilpotent part; may be 0×0.
    pub q: Matrix,
}

/// `s⁻¹ t s = b ⊕ q` with `b` invertible and `q` nilpotent.
pub fn split_invertible_nilpotent(t: &Matrix, cfg: &ToleranceConfig) -> Result<InvertibleNilpotentSplit> {
    with_field!(t, m, T => {
        let basis: Basis<T> = basis_generic(m, cfg)?;
        let (mut inv_cols, mut nil_cols) = (Vec::new(), Vec::new());
        let (mut inv_blocks, mut nil_blocks) = (Vec::new(), Vec::new());
        for blk in &basis.blocks {
            let cols = blk.offset..blk.offset + blk.size;
            let cell = Mat::jordan_block(&blk.eigenvalue, blk.size);
            if T::is_zero_eigenvalue(&blk.eigenvalue, cfg) {
                nil_cols.extend(cols);
                nil_blocks.push(Mat::jordan_cell(blk.size));
            } else {
                inv_cols.extend(cols);
                inv_blocks.push(cell);
            }
        }
        let order: Vec<usize> = inv_cols.into_iter().chain(nil_cols).collect();
        Ok(InvertibleNilpotentSplit {
            s: T::wrap(basis.s.select_columns(&order)),
            b: T::wrap(Mat::block_diag(&inv_blocks)),
            q: T::wrap(Mat::block_diag(&nil_blocks)),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Backend;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn ex(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(Backend::Exact, rows)
    }

    fn nil(p: &[usize]) -> Matrix {
        Matrix::nilpotent(Backend::Exact, p)
    }

    fn z(v: i64) -> Scalar {
        Scalar::exact_int(v, 0)
    }

    #[test]
    fn weyr_examples() {
        assert_eq!(weyr_sequence(&nil(&[3]), &z(0), &cfg()).unwrap(), vec![1, 2, 3]);
        assert_eq!(weyr_sequence(&nil(&[2, 2]), &z(0), &cfg()).unwrap(), vec![2, 4]);
        assert_eq!(weyr_sequence(&ex(&[&[5]]), &z(5), &cfg()).unwrap(), vec![1]);
        assert!(weyr_sequence(&ex(&[&[5]]), &z(1), &cfg()).unwrap().is_empty());
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition_at(&nil(&[3, 1]), &z(0), &cfg()).unwrap().parts(), &[3, 1]);
        assert_eq!(partition_at(&nil(&[2, 2]), &z(0), &cfg()).unwrap().parts(), &[2, 2]);
        let d = ex(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        assert_eq!(partition_at(&d, &z(1), &cfg()).unwrap().parts(), &[1, 1]);
        assert!(matches!(partition_at(&d, &z(3), &cfg()), Err(Error::NotAnEigenvalue(_))));
    }

    #[test]
    fn eigenvalue_examples() {
        let d = ex(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, -2]]);
        assert_eq!(eigenvalues(&d, &cfg()).unwrap(), vec![(z(2), 2), (z(-2), 1)]);
        assert_eq!(eigenvalues(&nil(&[4]), &cfg()).unwrap(), vec![(z(0), 4)]);
        let rot = ex(&[&[0, -1], &[1, 0]]);
        assert_eq!(
            eigenvalues(&rot, &cfg()).unwrap(),
            vec![(Scalar::exact_int(0, 1), 1), (Scalar::exact_int(0, -1), 1)]
        );
    }

    #[test]
    fn spectrum_examples() {
        let sp = jordan_spectrum(&ex(&[&[1, 0], &[0, -1]]), &cfg()).unwrap();
        assert_eq!(sp.entries.len(), 2);
        assert_eq!(sp.entries[0].eigenvalue, z(1));
        assert_eq!(sp.entries[1].eigenvalue, z(-1));
        let sp = jordan_spectrum(&nil(&[2, 2, 2]), &cfg()).unwrap();
        assert_eq!(sp.entries[0].partition.parts(), &[2, 2, 2]);
    }

    #[test]
    fn spectrum_of_a_plus_minus_a_matches_rank_oracle() {
        // A = J₂ + I; T = A ⊕ −A.
        let a = ex(&[&[1, 1], &[0, 1]]);
        let t = a.direct_sum(&a.neg()).unwrap();
        let sp = jordan_spectrum(&t, &cfg()).unwrap();
        // Oracle: ranks of (T ∓ I)^k computed directly.
        for (lambda, entry) in [(1, &sp.entries[0]), (-1, &sp.entries[1])] {
            assert_eq!(entry.eigenvalue, z(lambda));
            let b = t.shift(&z(-lambda)).unwrap();
            let r1 = b.rank(&cfg());
            let r2 = b.mat_pow(2).unwrap().rank(&cfg());
            assert_eq!((r1, r2), (3, 2));
            assert_eq!(entry.partition.parts(), &[2]);
        }
    }

    #[test]
    fn basis_examples() {
        let d = ex(&[&[3, 0], &[0, -3]]);
        let jb = jordan_basis(&d, &cfg()).unwrap();
        assert_eq!(jb.canonical, d);
        assert_eq!(jb.s, Matrix::identity(Backend::Exact, 2));
        assert_eq!(d.conjugate(&jb.s, &cfg()).unwrap(), jb.canonical);

        let t = ex(&[&[0, 2], &[0, 0]]);
        let jb = jordan_basis(&t, &cfg()).unwrap();
        assert_eq!(jb.canonical, nil(&[2]));
        assert_eq!(t.conjugate(&jb.s, &cfg()).unwrap(), jb.canonical);
    }

    #[test]
    fn basis_round_trip_through_random_similarity() {
        let p = ex(&[&[1, 2, 0, -1, 1], &[0, 1, 3, 0, 0], &[1, 0, 1, 2, 0], &[0, 0, 1, 1, -2], &[2, 1, 0, 0, 1]]);
        let j = nil(&[3, 2]);
        let t = j.conjugate(&p.inverse(&cfg()).unwrap(), &cfg()).unwrap();
        let jb = jordan_basis(&t, &cfg()).unwrap();
        assert_eq!(jb.canonical, j);
        assert_eq!(t.conjugate(&jb.s, &cfg()).unwrap(), j);
    }

    #[test]
    fn split_examples() {
        let s = split_invertible_nilpotent(&nil(&[3]), &cfg()).unwrap();
        assert_eq!((s.b.rows(), s.q), (0, nil(&[3])));
        let d = ex(&[&[1, 0], &[0, -1]]);
        let s = split_invertible_nilpotent(&d, &cfg()).unwrap();
        assert_eq!((s.b.clone(), s.q.rows()), (d.clone(), 0));
        assert_eq!(d.conjugate(&s.s, &cfg()).unwrap(), s.b);
    }

    #[test]
    fn split_agrees_with_sylvester_decoupling() {
        // T = [[2, 2], [0, 0]]: B = [2], Q = [0], coupling C = [2].
        let t = ex(&[&[2, 2], &[0, 0]]);
        let split = split_invertible_nilpotent(&t, &cfg()).unwrap();
        let bq = split.b.direct_sum(&split.q).unwrap();
        assert_eq!(t.conjugate(&split.s, &cfg()).unwrap(), bq);
        assert_eq!((split.b, split.q), (ex(&[&[2]]), ex(&[&[0]])));
        // Independent route: B·X − X·Q = −C gives X = −1, and
        // S = [[1, X], [0, 1]] decouples T.
        let x = -1;
        let sylvester = ex(&[&[1, x], &[0, 1]]);
        assert_eq!(t.conjugate(&sylvester, &cfg()).unwrap(), bq);
    }

    #[test]
    fn partition_helpers() {
        assert_eq!(Partition::new(vec![1, 3, 0, 2]).parts(), &[3, 2, 1]);
        assert_eq!(Partition::new(vec![3, 1]).conjugate().parts(), &[2, 1, 1]);
        assert_eq!(Partition::from_weyr(&[2, 3, 4]).parts(), &[3, 1]);
        assert_eq!(Partition::all_of(5).len(), 7);
        assert_eq!(Partition::new(vec![3, 3, 1]).grouped(), vec![(3, 2), (1, 1)]);
    }

    #[test]
    fn float_basis_of_diagonalizable_matrix() {
        let t = Matrix::from_i64_rows(Backend::Float64, &[&[2, 1], &[0, -2]]);
        let jb = jordan_basis(&t, &cfg()).unwrap();
        let back = t.conjugate(&jb.s, &cfg()).unwrap();
        let diff = back.sub(&jb.canonical).unwrap();
        assert!(diff.operator_norm_estimate() < 1e-12);
    }
}
