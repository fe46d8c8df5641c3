//! Backend-tagged matrices and the JSON matrix format.
//!
//! ```text
//! {"backend":"exact","rows":m,"cols":n,"data":[[["re_num","re_den","im_num","im_den"], ...], ...]}
//! {"backend":"float64","rows":m,"cols":n,"data":[[[re,im], ...], ...]}
//! ```

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::config::ToleranceConfig;
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::scalar::{Backend, GaussRational, Scalar};
use crate::{exact, float};

#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Exact(Mat<GaussRational>),
    Float(Mat<Complex64>),
}

macro_rules! map1 {
    ($m:expr, $x:ident => $body:expr) => {
        match $m {
            Matrix::Exact($x) => Matrix::Exact($body),
            Matrix::Float($x) => Matrix::Float($body),
        }
    };
}

macro_rules! zip2 {
    ($a:expr, $b:expr, $x:ident, $y:ident => $body:expr) => {
        match ($a, $b) {
            (Matrix::Exact($x), Matrix::Exact($y)) => Ok(Matrix::Exact($body)),
            (Matrix::Float($x), Matrix::Float($y)) => Ok(Matrix::Float($body)),
            (l, r) => Err(Error::BackendMismatch { left: l.backend(), right: r.backend() }),
        }
    };
}

impl Matrix {
    pub fn backend(&self) -> Backend {
        match self {
            Matrix::Exact(_) => Backend::Exact,
            Matrix::Float(_) => Backend::Float64,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            Matrix::Exact(m) => m.rows(),
            Matrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Exact(m) => m.cols(),
            Matrix::Float(m) => m.cols(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn from_i64_rows(backend: Backend, rows: &[&[i64]]) -> Matrix {
        match backend {
            Backend::Exact => Matrix::Exact(Mat::from_i64_rows(rows)),
            Backend::Float64 => Matrix::Float(Mat::from_i64_rows(rows)),
        }
    }

    pub fn identity(backend: Backend, n: usize) -> Matrix {
        match backend {
            Backend::Exact => Matrix::Exact(Mat::identity(n)),
            Backend::Float64 => Matrix::Float(Mat::identity(n)),
        }
    }

    pub fn zeros(backend: Backend, rows: usize, cols: usize) -> Matrix {
        match backend {
            Backend::Exact => Matrix::Exact(Mat::zeros(rows, cols)),
            Backend::Float64 => Matrix::Float(Mat::zeros(rows, cols)),
        }
    }

    pub fn jordan_cell(backend: Backend, n: usize) -> Matrix {
        match backend {
            Backend::Exact => Matrix::Exact(Mat::jordan_cell(n)),
            Backend::Float64 => Matrix::Float(Mat::jordan_cell(n)),
        }
    }

    /// Direct sum of nilpotent Jordan cells.
    pub fn nilpotent(backend: Backend, partition: &[usize]) -> Matrix {
        match backend {
            Backend::Exact => Matrix::Exact(Mat::nilpotent(partition)),
            Backend::Float64 => Matrix::Float(Mat::nilpotent(partition)),
        }
    }

    pub fn diag(values: &[Scalar]) -> Result<Matrix> {
        let backend = values.first().map_or(Backend::Exact, Scalar::backend);
        match backend {
            Backend::Exact => {
                let v: Result<Vec<_>> = values.iter().map(GaussRational::from_scalar).collect();
                Ok(Matrix::Exact(Mat::diag(&v?)))
            }
            Backend::Float64 => {
                let v: Result<Vec<_>> = values.iter().map(Complex64::from_scalar).collect();
                Ok(Matrix::Float(Mat::diag(&v?)))
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self {
            Matrix::Exact(m) => Scalar::Exact(m.get(i, j).clone()),
            Matrix::Float(m) => Scalar::Float(*m.get(i, j)),
        }
    }

    /// Convert to the float backend (identity on float input).
    pub fn to_float(&self) -> Matrix {
        match self {
            Matrix::Exact(m) => Matrix::Float(m.to_c64()),
            Matrix::Float(_) => self.clone(),
        }
    }

    pub fn to_c64(&self) -> Mat<Complex64> {
        match self {
            Matrix::Exact(m) => m.to_c64(),
            Matrix::Float(m) => m.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Matrix::Exact(m) => m.is_zero(),
            Matrix::Float(m) => m.is_zero(),
        }
    }

    fn check_dims(&self, o: &Matrix, op: &str, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                o.rows(),
                o.cols()
            )))
        }
    }

    pub fn mat_mul(&self, o: &Matrix) -> Result<Matrix> {
        self.check_dims(o, "mat_mul", self.cols() == o.rows())?;
        zip2!(self, o, a, b => a.matmul(b))
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.check_dims(o, "add", (self.rows(), self.cols()) == (o.rows(), o.cols()))?;
        zip2!(self, o, a, b => a.add(b))
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.check_dims(o, "sub", (self.rows(), self.cols()) == (o.rows(), o.cols()))?;
        zip2!(self, o, a, b => a.sub(b))
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, o: &Matrix) -> Result<Matrix> {
        self.check_dims(
            o,
            "commutator",
            self.is_square() && o.is_square() && self.rows() == o.rows(),
        )?;
        zip2!(self, o, a, b => a.commutator(b))
    }

    pub fn direct_sum(&self, o: &Matrix) -> Result<Matrix> {
        zip2!(self, o, a, b => a.direct_sum(b))
    }

    pub fn neg(&self) -> Matrix {
        map1!(self, a => a.neg())
    }

    pub fn transpose(&self) -> Matrix {
        map1!(self, a => a.transpose())
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Result<Matrix> {
        match (self, c) {
            (Matrix::Exact(a), Scalar::Exact(z)) => Ok(Matrix::Exact(a.scale(z))),
            (Matrix::Float(a), Scalar::Float(z)) => Ok(Matrix::Float(a.scale(z))),
            _ => Err(Error::BackendMismatch { left: self.backend(), right: c.backend() }),
        }
    }

    /// `self + c·I`.
    pub fn shift(&self, c: &Scalar) -> Result<Matrix> {
        match (self, c) {
            (Matrix::Exact(a), Scalar::Exact(z)) => Ok(Matrix::Exact(a.shift(z))),
            (Matrix::Float(a), Scalar::Float(z)) => Ok(Matrix::Float(a.shift(z))),
            _ => Err(Error::BackendMismatch { left: self.backend(), right: c.backend() }),
        }
    }

    pub fn trace(&self) -> Result<Scalar> {
        self.require_square("trace")?;
        Ok(match self {
            Matrix::Exact(a) => Scalar::Exact(a.trace()),
            Matrix::Float(a) => Scalar::Float(a.trace()),
        })
    }

    pub fn mat_pow(&self, k: u32) -> Result<Matrix> {
        self.require_square("mat_pow")?;
        Ok(map1!(self, a => a.pow(k)))
    }

    pub fn rank(&self, cfg: &ToleranceConfig) -> usize {
        match self {
            Matrix::Exact(a) => exact::rank(a),
            Matrix::Float(a) => float::rank(a, cfg.rank_tol),
        }
    }

    /// Columns span the kernel; `cols − rank` of them.
    pub fn kernel_basis(&self, cfg: &ToleranceConfig) -> Matrix {
        match self {
            Matrix::Exact(a) => Matrix::Exact(exact::kernel(a)),
            Matrix::Float(a) => Matrix::Float(float::kernel(a, cfg.rank_tol)),
        }
    }

    /// Largest singular value, computed in double precision.
    pub fn operator_norm_estimate(&self) -> f64 {
        float::operator_norm(&self.to_c64())
    }

    pub fn inverse(&self, cfg: &ToleranceConfig) -> Result<Matrix> {
        match self {
            Matrix::Exact(a) => exact::inverse(a).map(Matrix::Exact),
            Matrix::Float(a) => float::inverse(a, cfg.rank_tol).map(Matrix::Float),
        }
    }

    /// `s⁻¹ · self · s`.
    pub fn conjugate(&self, s: &Matrix, cfg: &ToleranceConfig) -> Result<Matrix> {
        self.require_square("conjugate")?;
        self.check_dims(s, "conjugate", s.is_square() && s.rows() == self.rows())?;
        let inv = s.inverse(cfg)?;
        inv.mat_mul(self)?.mat_mul(s)
    }

    pub fn solve(&self, b: &Matrix, cfg: &ToleranceConfig) -> Result<Matrix> {
        zip2!(self, b, a, rhs => Field::solve(a, rhs, cfg)?)
    }

    pub fn determinant(&self) -> Result<Scalar> {
        match self {
            Matrix::Exact(a) => exact::determinant(a).map(Scalar::Exact),
            Matrix::Float(a) => {
                self.require_square("determinant")?;
                Ok(Scalar::Float(float::to_na(a).determinant()))
            }
        }
    }

    fn require_square(&self, op: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!("{op} needs a square matrix, got {}x{}", self.rows(), self.cols())))
        }
    }

    pub fn to_json(&self) -> Value {
        let data: Vec<Value> = match self {
            Matrix::Exact(m) => (0..m.rows())
                .map(|i| Value::Array(m.row_slice(i).iter().map(exact_entry_json).collect()))
                .collect(),
            Matrix::Float(m) => (0..m.rows())
                .map(|i| Value::Array(m.row_slice(i).iter().map(|z| json!([z.re, z.im])).collect()))
                .collect(),
        };
        json!({
            "backend": self.backend().as_str(),
            "rows": self.rows(),
            "cols": self.cols(),
            "data": data,
        })
    }

    pub fn from_json(v: &Value) -> Result<Matrix> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("matrix must be a JSON object".into()))?;
        let backend: Backend = obj
            .get("backend")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing string field `backend`".into()))?
            .parse()?;
        let dim = |key: &str| -> Result<usize> {
            let d = obj
                .get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("missing integer field `{key}`")))?;
            if d == 0 {
                return Err(Error::Parse(format!("`{key}` must be positive")));
            }
            Ok(d as usize)
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let data = obj
            .get("data")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `data`".into()))?;
        if data.len() != rows {
            return Err(Error::Parse(format!("expected {rows} rows, found {}", data.len())));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for (i, row) in data.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
            if row.len() != cols {
                return Err(Error::Parse(format!("row {i}: expected {cols} entries, found {}", row.len())));
            }
            entries.extend(row.iter());
        }
        match backend {
            Backend::Exact => {
                let v: Result<Vec<GaussRational>> = entries.into_iter().map(parse_exact_entry).collect();
                Ok(Matrix::Exact(Mat::from_vec(rows, cols, v?)))
            }
            Backend::Float64 => {
                let v: Result<Vec<Complex64>> = entries.into_iter().map(parse_float_entry).collect();
                Ok(Matrix::Float(Mat::from_vec(rows, cols, v?)))
            }
        }
    }
}

fn exact_entry_json(z: &GaussRational) -> Value {
    json!([
        z.re.numer().to_string(),
        z.re.denom().to_string(),
        z.im.numer().to_string(),
        z.im.denom().to_string()
    ])
}

fn parse_exact_entry(v: &Value) -> Result<GaussRational> {
    let parts = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| Error::Parse(format!("exact entry must be [re_num,re_den,im_num,im_den], got {v}")))?;
    let mut ints = Vec::with_capacity(4);
    for p in parts {
        let s = p.as_str().ok_or_else(|| Error::Parse(format!("exact integers are decimal strings, got {p}")))?;
        let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad integer `{s}`")))?;
        ints.push(n);
    }
    if !ints[1].is_positive() || !ints[3].is_positive() {
        return Err(Error::Parse(format!("denominators must be positive in {v}")));
    }
    let mut it = ints.into_iter();
    let (rn, rd, inum, id) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    Ok(GaussRational::new(BigRational::new(rn, rd), BigRational::new(inum, id)))
}

fn parse_float_entry(v: &Value) -> Result<Complex64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Error::Parse(format!("float entry must be [re,im] numbers, got {v}"))),
        },
        _ => Err(Error::Parse(format!("float entry must be [re,im], got {v}"))),
    }
}

impl Scalar {
    /// Same encoding as a matrix entry of the matching backend.
    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Exact(z) => exact_entry_json(z),
            Scalar::Float(z) => json!([z.re, z.im]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Scalar> {
        match v.as_array().map(Vec::as_slice) {
            Some([first, ..]) if first.is_string() => parse_exact_entry(v).map(Scalar::Exact),
            _ => parse_float_entry(v).map(Scalar::Float),
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Matrix::from_json(&v).map_err(D::Error::custom)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Scalar::from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(Backend::Exact, rows)
    }

    #[test]
    fn identity_product_and_square_zero_cell() {
        let x = ex(&[&[1, 2], &[3, 4]]);
        assert_eq!(Matrix::identity(Backend::Exact, 2).mat_mul(&x).unwrap(), x);
        let j = ex(&[&[0, 1], &[0, 0]]);
        assert!(j.mat_mul(&j).unwrap().is_zero());
    }

    #[test]
    fn commutator_examples() {
        let x = ex(&[&[1, 2], &[3, 4]]);
        assert!(x.commutator(&x).unwrap().is_zero());
        let m = ex(&[&[0, 1], &[0, 0]]);
        let n = ex(&[&[0, 0], &[1, 0]]);
        assert_eq!(m.commutator(&n).unwrap(), ex(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn errors_on_mismatch() {
        let a = ex(&[&[1, 2]]);
        assert!(matches!(a.mat_mul(&a), Err(Error::Dimension(_))));
        let f = Matrix::identity(Backend::Float64, 1);
        assert!(matches!(ex(&[&[1]]).mat_mul(&f), Err(Error::BackendMismatch { .. })));
        assert!(ex(&[&[1, 2], &[3, 4]]).commutator(&ex(&[&[1]])).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let cfg = ToleranceConfig::default();
        let t = ex(&[&[1, 2], &[3, 4]]);
        assert_eq!(t.conjugate(&Matrix::identity(Backend::Exact, 2), &cfg).unwrap(), t);
        let d = ex(&[&[1, 0], &[0, -1]]);
        let swap = ex(&[&[0, 1], &[1, 0]]);
        assert_eq!(d.conjugate(&swap, &cfg).unwrap(), ex(&[&[-1, 0], &[0, 1]]));
        let j2 = ex(&[&[0, 1], &[0, 0]]);
        assert_eq!(j2.conjugate(&ex(&[&[1, 0], &[0, 2]]), &cfg).unwrap(), ex(&[&[0, 2], &[0, 0]]));
        assert!(matches!(t.conjugate(&j2, &cfg), Err(Error::Singular(_))));
    }

    #[test]
    fn operator_norm_of_exact_input() {
        assert!((ex(&[&[3, 0], &[0, -1]]).operator_norm_estimate() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn json_layout_is_bit_exact() {
        let z = Matrix::Exact(Mat::from_rows(vec![vec![GaussRational::new(
            BigRational::new((-1).into(), 2.into()),
            BigRational::new(3.into(), 1.into()),
        )]]));
        assert_eq!(
            serde_json::to_string(&z).unwrap(),
            r#"{"backend":"exact","rows":1,"cols":1,"data":[[["-1","2","3","1"]]]}"#
        );
        let f = Matrix::Float(Mat::from_rows(vec![vec![Complex64::new(0.5, -2.0)]]));
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"backend":"float64","rows":1,"cols":1,"data":[[[0.5,-2.0]]]}"#
        );
    }

    #[test]
    fn json_rejects_bad_input() {
        for bad in [
            r#"{"backend":"exact","rows":1,"cols":1,"data":[[["1","0","0","1"]]]}"#,
            r#"{"backend":"exact","rows":1,"cols":1,"data":[[["1","-2","0","1"]]]}"#,
            r#"{"backend":"exact","rows":1,"cols":2,"data":[[["1","1","0","1"]]]}"#,
            r#"{"backend":"exact","rows":1,"cols":1,"data":[[[1,1,0,1]]]}"#,
            r#"{"backend":"quad","rows":1,"cols":1,"data":[[[1,0]]]}"#,
            r#"{"backend":"float64","rows":0,"cols":0,"data":[]}"#,
        ] {
            let v: Value = serde_json::from_str(bad).unwrap();
            assert!(Matrix::from_json(&v).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_normalizes_fractions() {
        let v: Value =
            serde_json::from_str(r#"{"backend":"exact","rows":1,"cols":1,"data":[[["4","6","0","5"]]]}"#).unwrap();
        let m = Matrix::from_json(&v).unwrap();
        assert_eq!(m.get(0, 0), Scalar::Exact(GaussRational::from_ratio(2, 3)));
    }
}
