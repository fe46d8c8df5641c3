//! Exact polynomials over ℚ(i) and Gaussian-rational root finding.
//!
//! Roots are found without factoring integers: the squarefree part is scaled
//! to a monic polynomial over ℤ[i], its roots are located modulo a prime
//! q ≡ 3 (mod 4) (where ℤ[i]/q is the field with q² elements), Hensel-lifted
//! past the Cauchy root bound, and checked by exact evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::scalar::GaussRational as Q;

/// Coefficients, lowest degree first. The zero polynomial is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    fn trimmed(mut c: Vec<Q>) -> Poly {
        while c.last().is_some_and(Q::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Poly {
        Poly::trimmed(
            self.0.iter().enumerate().skip(1).map(|(k, c)| c.mul(&Q::from_integers(k as i64, 0))).collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.recip();
                Poly(self.0.iter().map(|c| c.mul(&inv)).collect())
            }
        }
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly(Vec::new()), Poly::trimmed(rem));
        }
        let lead_inv = d.0[dd].recip();
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dc));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::trimmed(quot), Poly::trimmed(rem))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Q) -> usize {
        let lin = Poly(vec![r.neg(), Q::one()]);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }
}

/// Characteristic polynomial det(xI − m), interpolated from fraction-free
/// determinants at x = 0, 1, …, n.
pub fn charpoly(m: &Mat<Q>) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Poly(vec![Q::one()]);
    }
    let neg = m.neg();
    let mut diffs: Vec<Q> = (0..=n)
        .map(|x| crate::exact::determinant(&neg.shift(&Q::from_integers(x as i64, 0))).expect("square"))
        .collect();
    // Newton form on nodes 0..n: a_k = Δᵏf(0) / k!.
    let mut newton = Vec::with_capacity(n + 1);
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
        }
        newton.push(diffs[0].mul(&Q::real(BigRational::new(BigInt::one(), fact.clone()))));
        for i in 0..diffs.len() - 1 {
            diffs[i] = diffs[i + 1].sub(&diffs[i]);
        }
        diffs.pop();
    }
    // Horner in the Newton basis x(x − 1)⋯(x − k + 1).
    let mut acc = vec![newton[n].clone()];
    for k in (0..n).rev() {
        let shift = Q::from_integers(k as i64, 0);
        let mut next = vec![Q::zero(); acc.len() + 1];
        for (d, c) in acc.iter().enumerate() {
            next[d + 1] = next[d + 1].add(c);
            next[d] = next[d].sub(&c.mul(&shift));
        }
        next[0] = next[0].add(&newton[k]);
        acc = next;
    }
    Poly::trimmed(acc)
}

#[cfg(test)]
/// Characteristic polynomial det(xI − m) via exact Hessenberg reduction.
fn charpoly_hessenberg(m: &Mat<Q>) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let mut h = m.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
            continue;
        };
        h.swap_rows(p, j + 1);
        h.swap_cols(p, j + 1);
        let piv_inv = h.get(j + 1, j).recip();
        for i in j + 2..n {
            if h.get(i, j).is_zero() {
                continue;
            }
            let u = h.get(i, j).mul(&piv_inv);
            for c in 0..n {
                if h.get(j + 1, c).is_zero() {
                    continue;
                }
                let v = h.get(i, c).sub(&u.mul(h.get(j + 1, c)));
                h.set(i, c, v);
            }
            for r in 0..n {
                if h.get(r, i).is_zero() {
                    continue;
                }
                let v = h.get(r, j + 1).add(&u.mul(h.get(r, i)));
                h.set(r, j + 1, v);
            }
        }
    }
    // p_k = (x − h_kk) p_{k−1} − Σ_{i<k} h_ik (Π_{m=i+1..k} h_{m,m−1}) p_{i−1}
    let mut ps: Vec<Vec<Q>> = vec![vec![Q::one()]];
    for k in 0..n {
        let prev = &ps[k];
        let mut next = vec![Q::zero(); k + 2];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] = next[d + 1].add(c);
            next[d] = next[d].sub(&c.mul(h.get(k, k)));
        }
        let mut prod = Q::one();
        for i in (0..k).rev() {
            prod = prod.mul(h.get(i + 1, i));
            if prod.is_zero() {
                break;
            }
            let coef = h.get(i, k).mul(&prod);
            if coef.is_zero() {
                continue;
            }
            for (d, c) in ps[i].iter().enumerate() {
                next[d] = next[d].sub(&coef.mul(c));
            }
        }
        ps.push(next);
    }
    Poly::trimmed(ps.pop().expect("nonempty"))
}

// --- arithmetic in (ℤ/Nℤ)[i] -------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
struct Gi {
    re: BigInt,
    im: BigInt,
}

impl Gi {
    fn zero() -> Gi {
        Gi { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn reduce(&self, n: &BigInt) -> Gi {
        Gi { re: self.re.mod_floor(n), im: self.im.mod_floor(n) }
    }

    fn add(&self, o: &Gi) -> Gi {
        Gi { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Gi) -> Gi {
        Gi { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Gi) -> Gi {
        Gi {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Inverse modulo `n = q^k` with q ≡ 3 (mod 4).
    fn inv_mod(&self, n: &BigInt) -> Option<Gi> {
        let norm = (&self.re * &self.re + &self.im * &self.im).mod_floor(n);
        let ext = norm.extended_gcd(n);
        if !ext.gcd.is_one() {
            return None;
        }
        let ninv = ext.x.mod_floor(n);
        Some(Gi { re: &self.re * &ninv, im: -&self.im * &ninv }.reduce(n))
    }
}

fn eval_mod(coeffs: &[Gi], y: &Gi, n: &BigInt) -> Gi {
    coeffs.iter().rev().fold(Gi::zero(), |acc, c| acc.mul(y).add(c).reduce(n))
}

fn eval_exact(coeffs: &[Gi], y: &Gi) -> Gi {
    coeffs.iter().rev().fold(Gi::zero(), |acc, c| acc.mul(y).add(c))
}

// --- arithmetic in F_{q²} = F_q[i] with small q --------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
struct Fq2 {
    a: i64,
    b: i64,
}

struct SmallField {
    q: i64,
}

impl SmallField {
    fn norm(&self, x: i64) -> i64 {
        x.rem_euclid(self.q)
    }
    fn add(&self, x: Fq2, y: Fq2) -> Fq2 {
        Fq2 { a: self.norm(x.a + y.a), b: self.norm(x.b + y.b) }
    }
    fn sub(&self, x: Fq2, y: Fq2) -> Fq2 {
        Fq2 { a: self.norm(x.a - y.a), b: self.norm(x.b - y.b) }
    }
    fn mul(&self, x: Fq2, y: Fq2) -> Fq2 {
        Fq2 { a: self.norm(x.a * y.a - x.b * y.b), b: self.norm(x.a * y.b + x.b * y.a) }
    }
    fn inv(&self, x: Fq2) -> Fq2 {
        let n = self.norm(x.a * x.a + x.b * x.b);
        let ninv = pow_mod(n, self.q - 2, self.q);
        Fq2 { a: self.norm(x.a * ninv), b: self.norm(-x.b * ninv) }
    }
    fn is_zero(&self, x: Fq2) -> bool {
        x.a == 0 && x.b == 0
    }
    fn trim(&self, mut p: Vec<Fq2>) -> Vec<Fq2> {
        while p.last().is_some_and(|&c| self.is_zero(c)) {
            p.pop();
        }
        p
    }
    fn rem(&self, a: &[Fq2], d: &[Fq2]) -> Vec<Fq2> {
        let mut r = a.to_vec();
        let dd = d.len() - 1;
        let li = self.inv(d[dd]);
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let c = self.mul(r[r.len() - 1], li);
            for (j, &dc) in d.iter().enumerate() {
                r[k + j] = self.sub(r[k + j], self.mul(c, dc));
            }
            r.pop();
            r = self.trim(r);
        }
        self.trim(r)
    }
    fn gcd_degree(&self, a: Vec<Fq2>, b: Vec<Fq2>) -> usize {
        let (mut a, mut b) = (self.trim(a), self.trim(b));
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        a.len().saturating_sub(1)
    }
    fn eval(&self, p: &[Fq2], y: Fq2) -> Fq2 {
        p.iter().rev().fold(Fq2 { a: 0, b: 0 }, |acc, &c| self.add(self.mul(acc, y), c))
    }
}

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

const MAX_PRIME: i64 = 4000;

/// Gaussian-rational roots of a monic squarefree polynomial.
fn gaussian_rational_roots(g: &Poly) -> Vec<Q> {
    let Some(d) = g.degree() else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    // y = L·x turns g into a monic polynomial over ℤ[i].
    let l = g.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    let lr = BigRational::from_integer(l.clone());
    let mut scale = BigRational::one();
    let mut h: Vec<Gi> = vec![Gi::zero(); d + 1];
    for j in (0..=d).rev() {
        let c = &g.0[j];
        h[j] = Gi { re: (&c.re * &scale).to_integer(), im: (&c.im * &scale).to_integer() };
        debug_assert!((&c.re * &scale).is_integer() && (&c.im * &scale).is_integer());
        scale *= &lr;
    }
    let bound = h.iter().map(|c| c.re.abs() + c.im.abs()).max().unwrap_or_default() + BigInt::one();

    let dh: Vec<Gi> = h
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| Gi { re: &c.re * k, im: &c.im * k })
        .collect();

    let mut q = 3;
    while q <= MAX_PRIME {
        if q % 4 == 3 && is_prime(q) {
            let field = SmallField { q };
            let qb = BigInt::from(q);
            let to_small = |c: &Gi| {
                let r = c.reduce(&qb);
                Fq2 { a: i64::try_from(&r.re).unwrap(), b: i64::try_from(&r.im).unwrap() }
            };
            let hs: Vec<Fq2> = h.iter().map(to_small).collect();
            let dhs: Vec<Fq2> = dh.iter().map(to_small).collect();
            if field.gcd_degree(hs.clone(), dhs) == 0 {
                let mut roots = Vec::new();
                for a in 0..q {
                    for b in 0..q {
                        let y = Fq2 { a, b };
                        if field.is_zero(field.eval(&hs, y)) {
                            if let Some(r) = lift(&h, &dh, y, q, &bound) {
                                roots.push(Q::new(
                                    BigRational::new(r.re, l.clone()),
                                    BigRational::new(r.im, l.clone()),
                                ));
                            }
                        }
                    }
                }
                return roots;
            }
        }
        q += 4;
    }
    Vec::new()
}

/// Hensel-lift a simple root mod q until q^k > 2·bound, then test it in ℤ[i].
fn lift(h: &[Gi], dh: &[Gi], root: Fq2, q: i64, bound: &BigInt) -> Option<Gi> {
    let target: BigInt = bound * 2 + 1;
    let mut modulus = BigInt::from(q);
    let mut y = Gi { re: root.a.into(), im: root.b.into() };
    while modulus <= target {
        modulus = &modulus * &modulus;
        let f = eval_mod(h, &y, &modulus);
        let fp = eval_mod(dh, &y, &modulus);
        let inv = fp.inv_mod(&modulus)?;
        y = y.sub(&f.mul(&inv)).reduce(&modulus);
    }
    let half = &modulus / 2;
    let sym = |v: &BigInt| if v > &half { v - &modulus } else { v.clone() };
    let cand = Gi { re: sym(&y.re), im: sym(&y.im) };
    eval_exact(h, &cand).is_zero().then_some(cand)
}

/// Distinct eigenvalues and algebraic multiplicities, sorted by descending
/// (re, im). Fails unless every eigenvalue lies in ℚ(i).
pub fn exact_eigenvalues(m: &Mat<Q>) -> Result<Vec<(Q, usize)>> {
    if !m.is_square() {
        return Err(Error::Dimension("eigenvalues of a non-square matrix".into()));
    }
    let n = m.rows();
    let p = charpoly(m);
    let zeros = p.0.iter().take_while(|c| c.is_zero()).count();
    let reduced = Poly(p.0[zeros..].to_vec());
    let mut out = Vec::new();
    if zeros > 0 {
        out.push((Q::zero(), zeros));
    }
    let mut found = zeros;
    if reduced.degree().unwrap_or(0) > 0 {
        let g = reduced.squarefree_part();
        for r in gaussian_rational_roots(&g) {
            let k = reduced.root_multiplicity(&r);
            found += k;
            out.push((r, k));
        }
    }
    if found != n {
        return Err(Error::SpectralIrrationality { found, degree: n });
    }
    out.sort_by(|a, b| b.0.lex_cmp(&a.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Mat<Q>;

    fn z(re: i64, im: i64) -> Q {
        Q::from_integers(re, im)
    }

    #[test]
    fn interpolated_charpoly_matches_hessenberg() {
        let m = M::from_fn(5, 5, |i, j| {
            Q::new(
                BigRational::new((i as i64 * 3 - j as i64).into(), (j as i64 + 1).into()),
                BigRational::new(((i + j) as i64 % 3 - 1).into(), 2.into()),
            )
        });
        assert_eq!(charpoly(&m), charpoly_hessenberg(&m));
        assert_eq!(charpoly(&M::zeros(0, 0)), Poly(vec![Q::one()]));
    }

    #[test]
    fn charpoly_of_companion_like_matrix() {
        // x³ − 6x² + 11x − 6
        let m = M::from_i64_rows(&[&[0, 0, 6], &[1, 0, -11], &[0, 1, 6]]);
        assert_eq!(charpoly(&m), Poly(vec![z(-6, 0), z(11, 0), z(-6, 0), z(1, 0)]));
    }

    #[test]
    fn charpoly_matches_brute_force_determinant() {
        // det(xI − m) at several integer points against Bareiss determinants.
        let m = M::from_i64_rows(&[&[1, 2, 0, -1], &[0, 3, 1, 2], &[4, -1, 0, 1], &[2, 2, -3, 0]]);
        let p = charpoly(&m);
        for x in -3..=3 {
            let shifted = m.neg().shift(&z(x, 0));
            assert_eq!(p.eval(&z(x, 0)), crate::exact::determinant(&shifted).unwrap());
        }
    }

    #[test]
    fn diag_eigenvalues() {
        let m = M::diag(&[z(2, 0), z(2, 0), z(-2, 0)]);
        assert_eq!(exact_eigenvalues(&m).unwrap(), vec![(z(2, 0), 2), (z(-2, 0), 1)]);
        assert_eq!(exact_eigenvalues(&M::jordan_cell(4)).unwrap(), vec![(z(0, 0), 4)]);
    }

    #[test]
    fn rotation_has_gaussian_eigenvalues() {
        let r = M::from_i64_rows(&[&[0, -1], &[1, 0]]);
        assert_eq!(exact_eigenvalues(&r).unwrap(), vec![(z(0, 1), 1), (z(0, -1), 1)]);
    }

    #[test]
    fn irrational_spectrum_is_reported() {
        let m = M::from_i64_rows(&[&[0, 2], &[1, 0]]);
        assert!(matches!(
            exact_eigenvalues(&m),
            Err(Error::SpectralIrrationality { found: 0, degree: 2 })
        ));
    }

    #[test]
    fn fractional_roots_with_large_denominators() {
        let big = |e: u32| BigRational::new(BigInt::from(7) * BigInt::from(3).pow(e), BigInt::from(2).pow(40));
        let vals = [
            Q::new(big(20), BigRational::zero()),
            Q::new(-big(20), BigRational::from_integer(1.into())),
            Q::new(BigRational::new(1.into(), 3.into()), big(5)),
        ];
        let m = M::diag(&vals);
        let mut got = exact_eigenvalues(&m).unwrap();
        got.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let mut want: Vec<(Q, usize)> = vals.iter().map(|v| (v.clone(), 1)).collect();
        want.sort_by(|a, b| a.0.lex_cmp(&b.0));
        assert_eq!(got, want);
    }
}
