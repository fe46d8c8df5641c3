//! Scalars: exact Gaussian rationals and complex doubles.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float64,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float64 => "float64",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float64" => Ok(Backend::Float64),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }
    }
}

/// An element of ℚ(i). `BigRational` keeps both parts in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        GaussRational {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRational {
            re: BigRational::new(num.into(), den.into()),
            im: BigRational::zero(),
        }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRational { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussRational { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -&self.im }
    }

    /// |z|², exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::real(&self.re * &o.re);
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// Panics on division by zero; callers check pivots first.
    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero in ℚ(i)");
        if o.im.is_zero() {
            return GaussRational { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        let n = o.norm_sqr();
        let p = self.mul(&o.conj());
        GaussRational { re: p.re / &n, im: p.im / n }
    }

    pub fn neg(&self) -> Self {
        GaussRational { re: -&self.re, im: -&self.im }
    }

    pub fn recip(&self) -> Self {
        GaussRational::one().div(self)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Lexicographic order on (re, im).
    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        self.re.cmp(&o.re).then_with(|| self.im.cmp(&o.im))
    }

    /// lcm of the denominators of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.re.denom().lcm(self.im.denom())
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerator/denominator: shift both down to a comparable size.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as usize;
    let shift_d = (db - 60).max(0) as usize;
    let n = (r.numer().abs() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    let v = n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// A backend-tagged scalar.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussRational),
    Float(Complex64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float64,
        }
    }

    pub fn exact_int(re: i64, im: i64) -> Self {
        Scalar::Exact(GaussRational::from_integers(re, im))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => z.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Float(z) => *z == Complex64::new(0.0, 0.0),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(z.neg()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }

    fn zip<F, G>(&self, o: &Scalar, exact: F, float: G) -> Result<Scalar>
    where
        F: FnOnce(&GaussRational, &GaussRational) -> GaussRational,
        G: FnOnce(Complex64, Complex64) -> Complex64,
    {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(exact(a, b))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(float(*a, *b))),
            _ => Err(Error::BackendMismatch { left: self.backend(), right: o.backend() }),
        }
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar> {
        self.zip(o, |a, b| a.add(b), |a, b| a + b)
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar> {
        self.zip(o, |a, b| a.sub(b), |a, b| a - b)
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar> {
        self.zip(o, |a, b| a.mul(b), |a, b| a * b)
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        if o.is_zero() {
            return Err(Error::Singular("division by zero scalar".into()));
        }
        self.zip(o, |a, b| a.div(b), |a, b| a / b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => write!(f, "{z}"),
            Scalar::Float(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}
