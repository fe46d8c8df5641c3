//! Membership in c(nil₂), the commutators of square-zero pairs: decision,
//! witness synthesis and verification.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ToleranceConfig;
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jordan::{basis_with, spectrum_with, with_field, Basis, Partition};
use crate::matrix::Matrix;
use crate::scalar::{GaussRational, Scalar};
use crate::sqroot::square_root_obstruction;
use crate::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// α ≠ 0 is an eigenvalue and −α is not.
    UnpairedNonzeroSpectrum { eigenvalue: Scalar },
    /// α and −α carry different Jordan partitions.
    PartitionMismatch { eigenvalue: Scalar, partition: Partition, partner: Partition },
    /// The nilpotent part fails the multiplicity test at this prefix index.
    NoNilpotentSquareRoot { prefix_index: usize, partition: Partition },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub m: Matrix,
    pub n: Matrix,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certifies {
    pub dimension: usize,
    pub digest: String,
}

impl Certifies {
    pub fn of(t: &Matrix) -> Certifies {
        let text = serde_json::to_string(&t.to_json()).expect("matrix JSON");
        Certifies { dimension: t.rows(), digest: hex::encode(Sha256::digest(text.as_bytes())) }
    }
}

impl Witness {
    /// Witness file body, stamped with the digest of the certified matrix.
    pub fn to_json(&self, certified: &Matrix) -> Value {
        json!({
            "schema": SCHEMA,
            "m": self.m.to_json(),
            "n": self.n.to_json(),
            "note": self.note,
            "certifies": Certifies::of(certified),
        })
    }

    pub fn from_json(v: &Value) -> Result<(Witness, Option<Certifies>)> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("witness lacks \"{k}\"")));
        let m = Matrix::from_json(field("m")?)?;
        let n = Matrix::from_json(field("n")?)?;
        let note = v.get("note").and_then(Value::as_str).unwrap_or_default().to_string();
        let certifies = match v.get("certifies") {
            None | Some(Value::Null) => None,
            Some(c) => Some(serde_json::from_value(c.clone())?),
        };
        Ok((Witness { m, n, note }, certifies))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub obstruction: Option<Obstruction>,
    pub witness: Option<Witness>,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "verdict": self.verdict,
            "obstruction": self.obstruction,
            "witness": self.witness,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    /// ‖m²‖, ‖n²‖, ‖[m,n] − t‖ in operator norm.
    pub residuals: [f64; 3],
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        json!({ "schema": SCHEMA, "pass": self.pass, "residuals": self.residuals })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareZeroCanonical {
    pub s: Matrix,
    pub rank_s: usize,
}

/// Padded-pair test: append a 0 to an odd number of parts, then every
/// consecutive pair may differ by at most 1.
pub fn nilpotent_partition_in_cnil2(p: &Partition) -> bool {
    let mut parts = p.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    parts.chunks(2).all(|pair| pair[0] - pair[1] <= 1)
}

// --- decision -------------------------------------------------------------

enum Structure<T> {
    Member { pairs: Vec<(T, T)> },
    Obstructed(Obstruction),
}

fn classify<T: Field>(spectrum: &[(T, Partition)], cfg: &ToleranceConfig) -> Structure<T> {
    let mut zero = Vec::new();
    let mut nonzero = Vec::new();
    for (l, p) in spectrum {
        if T::is_zero_eigenvalue(l, cfg) {
            zero.extend_from_slice(p.parts());
        } else {
            nonzero.push((l.clone(), p.clone()));
        }
    }
    let mut used = vec![false; nonzero.len()];
    let mut pairs = Vec::new();
    for i in 0..nonzero.len() {
        if used[i] {
            continue;
        }
        let (alpha, part) = &nonzero[i];
        let target = alpha.neg();
        let partner = (0..nonzero.len())
            .filter(|&j| j != i && !used[j] && T::same_eigenvalue(&nonzero[j].0, &target, cfg))
            .min_by(|&a, &b| {
                let da = nonzero[a].0.sub(&target).modulus();
                let db = nonzero[b].0.sub(&target).modulus();
                da.total_cmp(&db)
            });
        let Some(j) = partner else {
            return Structure::Obstructed(Obstruction::UnpairedNonzeroSpectrum {
                eigenvalue: alpha.clone().into_scalar(),
            });
        };
        if &nonzero[j].1 != part {
            return Structure::Obstructed(Obstruction::PartitionMismatch {
                eigenvalue: alpha.clone().into_scalar(),
                partition: part.clone(),
                partner: nonzero[j].1.clone(),
            });
        }
        used[i] = true;
        used[j] = true;
        pairs.push((alpha.clone(), nonzero[j].0.clone()));
    }
    let zero = Partition::new(zero);
    if !nilpotent_partition_in_cnil2(&zero) {
        let prefix_index = square_root_obstruction(&zero).expect("both nilpotent criteria agree");
        return Structure::Obstructed(Obstruction::NoNilpotentSquareRoot { prefix_index, partition: zero });
    }
    Structure::Member { pairs }
}

fn sign_diag<T: Field>(n: usize) -> Mat<T> {
    Mat::diag(&(0..n).map(|i| if i % 2 == 0 { T::one() } else { T::one().neg() }).collect::<Vec<_>>())
}

fn reversal<T: Field>(n: usize) -> Mat<T> {
    Mat::permutation(&(0..n).rev().collect::<Vec<_>>())
}

/// `[[0, a], [0, 0]]` and `[[0, 0], [b, 0]]` on a (rows a) + (cols a) split.
fn split_pair<T: Field>(a: &Mat<T>, b: &Mat<T>) -> (Mat<T>, Mat<T>) {
    let (p, q) = (a.rows(), a.cols());
    let n = p + q;
    let m = Mat::from_fn(n, n, |i, j| if i < p && j >= p { a.get(i, j - p).clone() } else { T::zero() });
    let nn = Mat::from_fn(n, n, |i, j| if i >= p && j < p { b.get(i - p, j).clone() } else { T::zero() });
    (m, nn)
}

/// Local witness pieces, each acting on a list of canonical basis positions.
struct Piece<T> {
    positions: Vec<usize>,
    m: Mat<T>,
    n: Mat<T>,
}

fn conj_pair<T: Field>(m0: Mat<T>, n0: Mat<T>, s: &Mat<T>, s_inv: &Mat<T>) -> (Mat<T>, Mat<T>) {
    (s_inv.matmul(&m0).matmul(s), s_inv.matmul(&n0).matmul(s))
}

fn nonzero_piece<T: Field>(basis: &Basis<T>, alpha: &T, partner: &T) -> Piece<T> {
    let own: Vec<_> = basis.blocks.iter().filter(|b| &b.eigenvalue == alpha).collect();
    let other: Vec<_> = basis.blocks.iter().filter(|b| &b.eigenvalue == partner).collect();
    let a = Mat::block_diag(&own.iter().map(|b| Mat::jordan_block(alpha, b.size)).collect::<Vec<_>>());
    let k = a.rows();
    let d = Mat::block_diag(&own.iter().map(|b| sign_diag::<T>(b.size)).collect::<Vec<_>>());
    let e = Mat::identity(k).direct_sum(&d);
    let (m0, n0) = split_pair(&a, &Mat::identity(k));
    let (m, n) = conj_pair(m0, n0, &e, &e);
    let positions = own
        .iter()
        .chain(other.iter())
        .flat_map(|b| b.offset..b.offset + b.size)
        .collect();
    Piece { positions, m, n }
}

fn nilpotent_piece<T: Field>(big: usize, small: usize, positions: Vec<usize>) -> Piece<T> {
    if small == 0 {
        return Piece { positions, m: Mat::zeros(1, 1), n: Mat::zeros(1, 1) };
    }
    let k = small;
    if big == small {
        let (m0, n0) = split_pair(&Mat::identity(k), &Mat::jordan_cell(k));
        let e = Mat::identity(k).direct_sum(&sign_diag(k));
        let (m, n) = conj_pair(m0, n0, &e, &e);
        Piece { positions, m, n }
    } else {
        // A = [0; I_k], Y = [I_k 0] give AY ⊕ −YA = J*_{k+1} ⊕ −J*_k.
        let a = Mat::from_fn(k + 1, k, |i, j| if i == j + 1 { T::one() } else { T::zero() });
        let y = Mat::from_fn(k, k + 1, |i, j| if i == j { T::one() } else { T::zero() });
        let (m0, n0) = split_pair(&a, &y);
        let (r1, r0, d) = (reversal::<T>(k + 1), reversal::<T>(k), sign_diag::<T>(k));
        let s = r1.direct_sum(&r0.matmul(&d));
        let s_inv = r1.direct_sum(&d.matmul(&r0));
        let (m, n) = conj_pair(m0, n0, &s, &s_inv);
        Piece { positions, m, n }
    }
}

fn synthesize_generic<T: Field>(
    t: &Mat<T>,
    basis: &Basis<T>,
    pairs: &[(T, T)],
    cfg: &ToleranceConfig,
) -> Result<Witness> {
    let n = t.rows();
    if t.is_zero() {
        return Ok(Witness { m: T::wrap(Mat::zeros(n, n)), n: T::wrap(Mat::zeros(n, n)), note: "zero matrix".into() });
    }
    let mut pieces = Vec::new();
    for (alpha, partner) in pairs {
        pieces.push(nonzero_piece(basis, alpha, partner));
    }
    let zero_blocks: Vec<_> = basis.blocks.iter().filter(|b| T::is_zero_eigenvalue(&b.eigenvalue, cfg)).collect();
    let mut nil_pairs = Vec::new();
    for chunk in zero_blocks.chunks(2) {
        let positions: Vec<usize> = chunk.iter().flat_map(|b| b.offset..b.offset + b.size).collect();
        let (big, small) = (chunk[0].size, chunk.get(1).map_or(0, |b| b.size));
        nil_pairs.push(format!("({big},{small})"));
        pieces.push(nilpotent_piece::<T>(big, small, positions));
    }
    let order: Vec<usize> = pieces.iter().flat_map(|p| p.positions.iter().copied()).collect();
    let m_blk = Mat::block_diag(&pieces.iter().map(|p| p.m.clone()).collect::<Vec<_>>());
    let n_blk = Mat::block_diag(&pieces.iter().map(|p| p.n.clone()).collect::<Vec<_>>());
    let w = basis.s.select_columns(&order);
    let w_inv = T::inverse(&w, cfg)?;
    let m = w.matmul(&m_blk).matmul(&w_inv);
    let nn = w.matmul(&n_blk).matmul(&w_inv);
    let note = format!(
        "{} nonzero ±α pair(s); nilpotent pairs {}",
        pairs.len(),
        if nil_pairs.is_empty() { "none".to_string() } else { nil_pairs.join(" ") }
    );
    Ok(Witness { m: T::wrap(m), n: T::wrap(nn), note })
}

fn decide_generic<T: Field>(t: &Mat<T>, cfg: &ToleranceConfig) -> Result<Decision> {
    if !t.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    let eig = T::eigenvalues(t, cfg)?;
    let spectrum = spectrum_with(t, eig.clone(), cfg)?;
    let pairs = match classify(&spectrum, cfg) {
        Structure::Obstructed(o) => {
            return Ok(Decision { verdict: Verdict::No, obstruction: Some(o), witness: None })
        }
        Structure::Member { pairs } => pairs,
    };
    let basis = basis_with(t, eig, cfg)?;
    let witness = synthesize_generic(t, &basis, &pairs, cfg)?;
    let report = verify_generic(t, T::unwrap(&witness.m)?, T::unwrap(&witness.n)?, cfg)?;
    if !report.pass {
        return Err(Error::Numerical {
            message: "synthesized witness fails verification".into(),
            residual: report.residuals.iter().copied().fold(0.0, f64::max),
        });
    }
    Ok(Decision { verdict: Verdict::Yes, obstruction: None, witness: Some(witness) })
}

fn residual<T: Field>(r: &Mat<T>) -> f64 {
    if r.data().iter().all(T::is_exact_zero) {
        0.0
    } else {
        crate::float::operator_norm(&r.to_c64())
    }
}

fn verify_generic<T: Field>(t: &Mat<T>, m: &Mat<T>, n: &Mat<T>, cfg: &ToleranceConfig) -> Result<VerifyReport> {
    let k = t.rows();
    for (name, x) in [("t", t), ("m", m), ("n", n)] {
        if x.rows() != k || x.cols() != k {
            return Err(Error::Dimension(format!("{name} is {}x{}, expected {k}x{k}", x.rows(), x.cols())));
        }
    }
    let rs = [m.matmul(m), n.matmul(n), m.commutator(n).sub(t)];
    let pass = rs.iter().all(|r| T::residual_ok(r, cfg));
    Ok(VerifyReport { pass, residuals: [residual(&rs[0]), residual(&rs[1]), residual(&rs[2])] })
}

// --- public operations ------------------------------------------------------

pub fn decide_cnil2(t: &Matrix, cfg: &ToleranceConfig) -> Result<Decision> {
    with_field!(t, m, T => decide_generic::<T>(m, cfg))
}

/// Explicit square-zero pair with commutator `t`; fails on non-members.
pub fn synthesize_witness(t: &Matrix, cfg: &ToleranceConfig) -> Result<Witness> {
    let d = decide_cnil2(t, cfg)?;
    match (d.witness, d.obstruction) {
        (Some(w), _) => Ok(w),
        (None, o) => Err(Error::Precondition(format!("matrix is not a commutator of square-zero matrices: {o:?}"))),
    }
}

pub fn verify_witness(t: &Matrix, w: &Witness, cfg: &ToleranceConfig) -> Result<VerifyReport> {
    with_field!(t, a, T => verify_generic::<T>(a, T::unwrap(&w.m)?, T::unwrap(&w.n)?, cfg))
}

/// `mt + tm = 0` and `nt + tn = 0`.
pub fn anticommutation_check(t: &Matrix, w: &Witness, cfg: &ToleranceConfig) -> Result<bool> {
    with_field!(t, a, T => {
        let (m, n) = (T::unwrap(&w.m)?, T::unwrap(&w.n)?);
        if m.rows() != a.rows() || n.rows() != a.rows() || !a.is_square() {
            return Err(Error::Dimension("witness does not match the matrix".into()));
        }
        Ok(T::residual_ok(&m.anticommutator(a), cfg) && T::residual_ok(&n.anticommutator(a), cfg))
    })
}

fn independent<T: Field>(n: usize, cols: &[Vec<T>], cfg: &ToleranceConfig) -> bool {
    T::rank(&Mat::from_columns(n, cols), cfg) == cols.len()
}

fn square_zero_generic<T: Field>(m: &Mat<T>, cfg: &ToleranceConfig) -> Result<SquareZeroCanonical> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    if !T::residual_ok(&m.matmul(m), cfg) {
        return Err(Error::Precondition("matrix is not square-zero".into()));
    }
    let r = T::rank(m, cfg);
    let mut picked: Vec<usize> = Vec::new();
    let mut images: Vec<Vec<T>> = Vec::new();
    for j in 0..n {
        if picked.len() == r {
            break;
        }
        images.push(m.column(j));
        if independent(n, &images, cfg) {
            picked.push(j);
        } else {
            images.pop();
        }
    }
    let units: Vec<Vec<T>> = picked
        .iter()
        .map(|&j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut cols: Vec<Vec<T>> = images.into_iter().chain(units).collect();
    for k in T::kernel(m, cfg).columns() {
        if cols.len() == n {
            break;
        }
        cols.push(k);
        if !independent(n, &cols, cfg) {
            cols.pop();
        }
    }
    if cols.len() != n {
        return Err(Error::Numerical { message: "could not complete a basis".into(), residual: f64::NAN });
    }
    Ok(SquareZeroCanonical { s: T::wrap(Mat::from_columns(n, &cols)), rank_s: r })
}

/// Basis `s` with `s⁻¹ m s = [[0, I_r], [0, 0]] ⊕ 0`.
pub fn square_zero_canonical(m: &Matrix, cfg: &ToleranceConfig) -> Result<SquareZeroCanonical> {
    with_field!(m, a, T => square_zero_generic::<T>(a, cfg))
}

impl SquareZeroCanonical {
    /// The target form `[[0, I_r], [0, 0]] ⊕ 0` of the same size as `s`.
    pub fn form(&self) -> Matrix {
        let (n, r) = (self.s.rows(), self.rank_s);
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(i < r && j == i + r)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Matrix::from_i64_rows(self.s.backend(), &refs)
    }
}
