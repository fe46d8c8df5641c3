//! Seeded exact random matrices with known structure.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::dense::Mat;
use crate::exact;
use crate::jordan::Partition;
use crate::scalar::GaussRational;

type Q = GaussRational;
type M = Mat<Q>;

/// Independent stream for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `p/q` with Gaussian-integer `p`, `|re p|, |im p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn gauss_rational(rng: &mut impl Rng, bound: i64) -> Q {
    let re = rng.random_range(-bound..=bound);
    let im = rng.random_range(-bound..=bound);
    let den = BigInt::from(rng.random_range(1..=bound));
    Q::new(BigRational::new(re.into(), den.clone()), BigRational::new(im.into(), den))
}

pub fn small_int(rng: &mut impl Rng, bound: i64) -> Q {
    Q::from_integers(rng.random_range(-bound..=bound), 0)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> M {
    Mat::from_fn(rows, cols, |_, _| gauss_rational(rng, bound))
}

/// Upper triangular with random entries on and above the diagonal.
pub fn random_upper(rng: &mut impl Rng, n: usize, bound: i64) -> M {
    Mat::from_fn(n, n, |i, j| if j >= i { gauss_rational(rng, bound) } else { Q::zero() })
}

pub fn random_strict_upper(rng: &mut impl Rng, n: usize, bound: i64) -> M {
    Mat::from_fn(n, n, |i, j| if j > i { gauss_rational(rng, bound) } else { Q::zero() })
}

fn unit_triangular(rng: &mut impl Rng, n: usize, upper: bool) -> M {
    Mat::from_fn(n, n, |i, j| match (i == j, (j > i) == upper) {
        (true, _) => Q::one(),
        (false, true) => small_int(rng, 2),
        (false, false) => Q::zero(),
    })
}

/// Unit-upper times unit-lower with small integer entries; determinant 1.
pub fn random_similarity(rng: &mut impl Rng, n: usize) -> (M, M) {
    let u = unit_triangular(rng, n, true);
    let l = unit_triangular(rng, n, false);
    let p = u.matmul(&l);
    let inv = exact::inverse(&p).expect("unimodular");
    (p, inv)
}

/// `p · t · p⁻¹`.
pub fn conjugate_by(t: &M, p: &M, p_inv: &M) -> M {
    p.matmul(t).matmul(p_inv)
}

/// `[[0, a], [0, 0]]` on `a.rows() + a.cols()` dimensions.
pub fn upper_corner(a: &M) -> M {
    let (p, q) = (a.rows(), a.cols());
    Mat::from_fn(p + q, p + q, |i, j| if i < p && j >= p { a.get(i, j - p).clone() } else { Q::zero() })
}

pub fn lower_corner(b: &M) -> M {
    let (p, q) = (b.rows(), b.cols());
    Mat::from_fn(p + q, p + q, |i, j| if i >= q && j < q { b.get(i - q, j).clone() } else { Q::zero() })
}

/// Square-zero `[[0, A], [0, 0]] ⊕ 0` with A of random rank ≤ ⌊n/2⌋,
/// conjugated by a random unimodular similarity.
pub fn random_square_zero(rng: &mut impl Rng, n: usize, bound: i64) -> M {
    let k = n / 2;
    if k == 0 {
        return Mat::zeros(n, n);
    }
    let r = rng.random_range(0..=k);
    let b = random_matrix(rng, k, r, bound);
    let c = random_matrix(rng, r, n - k, bound);
    let a = if r == 0 { Mat::zeros(k, n - k) } else { b.matmul(&c) };
    let (p, p_inv) = random_similarity(rng, n);
    conjugate_by(&upper_corner(&a), &p, &p_inv)
}

/// Square-zero pair whose commutator has a Gaussian-rational spectrum:
/// a split pair with triangular corners, plus a strictly upper triangular
/// pair, under one common similarity.
pub fn random_pair(rng: &mut impl Rng, n: usize, bound: i64) -> (M, M) {
    let a = rng.random_range(0..=n / 2);
    let (ta, tb) = (random_upper(rng, a, bound), random_upper(rng, a, bound));
    let (m1, n1) = (upper_corner(&ta), lower_corner(&tb));
    let rest = n - 2 * a;
    let m2 = strict_square_zero(rng, rest, bound);
    let n2 = strict_square_zero(rng, rest, bound);
    let m = m1.direct_sum(&m2);
    let nn = if rng.random_ratio(1, 20) { m.clone() } else { n1.direct_sum(&n2) };
    let (p, p_inv) = random_similarity(rng, n);
    (conjugate_by(&m, &p, &p_inv), conjugate_by(&nn, &p, &p_inv))
}

fn strict_square_zero(rng: &mut impl Rng, n: usize, bound: i64) -> M {
    let h = n / 2;
    let c = random_matrix(rng, h, n - h, bound);
    let u = unit_triangular(rng, n, true);
    let u_inv = exact::inverse(&u).expect("unit triangular");
    u_inv.matmul(&upper_corner(&c)).matmul(&u)
}

/// Upper triangular with diagonal from `{±1, ±2, ±i, 1 ± i, 1/2}`, conjugated
/// by a unimodular similarity: invertible with Gaussian-rational spectrum.
pub fn random_invertible(rng: &mut impl Rng, n: usize, bound: i64) -> M {
    let pool = [(1, 1, 0), (-1, 1, 0), (2, 1, 0), (-2, 1, 0), (0, 1, 1), (0, 1, -1), (1, 1, 1), (1, 1, -1), (1, 2, 0)];
    let mut t = random_strict_upper(rng, n, bound);
    for i in 0..n {
        let (re, den, im) = pool[rng.random_range(0..pool.len())];
        let v = Q::new(BigRational::new(re.into(), den.into()), BigRational::new(im.into(), den.into()));
        *t.get_mut(i, i) = v;
    }
    let (q, q_inv) = random_similarity(rng, n);
    conjugate_by(&t, &q, &q_inv)
}

/// `P · ((A ⊕ −A) ⊕ L²) · P⁻¹` with invertible `A` and strictly upper `L`.
pub fn random_member(rng: &mut impl Rng, n: usize, bound: i64) -> M {
    let a = rng.random_range(0..=n / 2);
    let block = random_invertible(rng, a, bound);
    let l = random_strict_upper(rng, n - 2 * a, bound);
    let core = block.direct_sum(&block.neg()).direct_sum(&l.matmul(&l));
    let (p, p_inv) = random_similarity(rng, n);
    conjugate_by(&core, &p, &p_inv)
}

fn random_partition(rng: &mut impl Rng, size: usize) -> Partition {
    let all = Partition::all_of(size);
    all[rng.random_range(0..all.len())].clone()
}

fn jordan_data(groups: &[(Q, Partition)]) -> M {
    let blocks: Vec<M> = groups
        .iter()
        .flat_map(|(l, p)| p.parts().iter().map(move |&k| Mat::jordan_block(l, k)))
        .collect();
    Mat::block_diag(&blocks)
}

/// Balanced matrix from Jordan data: ±α groups of equal total multiplicity
/// (partitions drawn independently) and a random nilpotent part.
pub fn random_balanced(rng: &mut impl Rng, n: usize) -> M {
    let pool = [(1, 0), (2, 0), (0, 1), (1, 1), (3, -1)];
    let mut groups = Vec::new();
    let mut left = n;
    let mut used = Vec::new();
    while left >= 2 && rng.random_ratio(2, 3) {
        let (re, im) = pool[rng.random_range(0..pool.len())];
        if used.contains(&(re, im)) {
            continue;
        }
        used.push((re, im));
        let mult = rng.random_range(1..=left / 2);
        let alpha = Q::from_integers(re, im);
        groups.push((alpha.clone(), random_partition(rng, mult)));
        groups.push((alpha.neg(), random_partition(rng, mult)));
        left -= 2 * mult;
    }
    if left > 0 {
        groups.push((Q::zero(), random_partition(rng, left)));
    }
    let (p, p_inv) = random_similarity(rng, n);
    conjugate_by(&jordan_data(&groups), &p, &p_inv)
}

/// Mixed corpus for invariance checks: members, balanced non-members and
/// unbalanced invertible matrices.
pub fn random_any(rng: &mut impl Rng, n: usize, bound: i64) -> M {
    match rng.random_range(0..3) {
        0 => random_member(rng, n, bound),
        1 => random_balanced(rng, n),
        _ => random_invertible(rng, n, bound),
    }
}
