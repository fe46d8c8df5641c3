//! Acceptance criteria 1 to 8. Each prints one PASS/FAIL line with its
//! elapsed time against the pinned limit.

use std::time::{Duration, Instant};

use nil2kit::jordan::jordan_spectrum;
use nil2kit::oracle::fuzz::{fuzz_membership, FuzzConfig};
use nil2kit::oracle::gen;
use nil2kit::oracle::unitary::{
    control_unitary_2x2, search_unitary_3x3, unitary_commutator_2x2, unitary_commutator_4x4_paired,
};
use nil2kit::*;
use num_complex::Complex64;
use rand::Rng;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let ok = out.ok && elapsed < limit;
    let tag = if ok { "PASS" } else { "FAIL" };
    println!(
        "{tag} criterion {id}: {name}: {} ({:.2}s, limit {}s)",
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn single_cells() -> Outcome {
    for n in 1..=12 {
        let j = Matrix::jordan_cell(Backend::Exact, n);
        let yes = decide_cnil2(&j, &cfg()).unwrap().is_yes();
        if yes != (n == 1) {
            return fail(format!("J_{n} decided {yes}"));
        }
    }
    pass("J_1 yes, J_2..J_12 no")
}

fn parity_law() -> Outcome {
    for mu in 1..=8 {
        let j = Matrix::nilpotent(Backend::Exact, &vec![2; mu]);
        let yes = decide_cnil2(&j, &cfg()).unwrap().is_yes();
        if yes != (mu % 2 == 0) {
            return fail(format!("mu = {mu} decided {yes}"));
        }
    }
    pass("J_2 repeated mu times is a member iff mu is even, mu <= 8")
}

fn criterion_sweep() -> Outcome {
    let mut roots = 0;
    let mut total = 0;
    for n in 0..=10 {
        for p in Partition::all_of(n) {
            total += 1;
            let member = nilpotent_partition_in_cnil2(&p);
            if member != has_nilpotent_square_root(&p) {
                return fail(format!("criteria disagree on {p}"));
            }
            if !member {
                continue;
            }
            let j = Matrix::nilpotent(Backend::Exact, p.parts());
            let cert = match nilpotent_square_root(&j, &cfg()) {
                Ok(c) => c,
                Err(e) => return fail(format!("{p}: {e}")),
            };
            if cert.q.mat_pow(2).unwrap().conjugate(&cert.s, &cfg()).unwrap() != j {
                return fail(format!("{p}: certificate does not square to the input"));
            }
            roots += 1;
        }
    }
    pass(format!("{total} partitions, {roots} exact roots"))
}

fn witness_round_trip() -> Outcome {
    for seed in 0..200u64 {
        let mut rng = gen::trial_rng(seed, 4);
        let n = rng.random_range(1..=10);
        let t = Matrix::Exact(gen::random_member(&mut rng, n, 3));
        let d = decide_cnil2(&t, &cfg()).unwrap();
        let Some(w) = d.witness.as_ref() else {
            return fail(format!("seed {seed}: decided no"));
        };
        let rep = verify_witness(&t, w, &cfg()).unwrap();
        if !rep.pass || rep.residuals != [0.0; 3] {
            return fail(format!("seed {seed}: residuals {:?}", rep.residuals));
        }
    }
    pass("200 members, all witnesses exact")
}

fn fuzz_soundness() -> Outcome {
    for seed in 1..=5 {
        let r = fuzz_membership(&FuzzConfig { seed, trials: 200, max_dim: 10, entry_bound: 3 }).unwrap();
        if !r.failures.is_empty() {
            let f = &r.failures[0];
            return fail(format!("seed {seed}: {} failures, first trial {} ({})", r.failures.len(), f.trial, f.property));
        }
    }
    pass("seeds 1..5 x 200 trials, no failures")
}

fn closure_approximation() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let mut rng = gen::trial_rng(seed, 6);
        let n = rng.random_range(1..=10);
        let t = Matrix::Exact(gen::random_balanced(&mut rng, n));
        for eps in [1e-2, 1e-4, 1e-6] {
            let a = match approximate_in_cnil2(&t, eps, &cfg()) {
                Ok(a) => a,
                Err(e) => return fail(format!("seed {seed}, eps {eps:e}: {e}")),
            };
            if a.distance >= eps {
                return fail(format!("seed {seed}: distance {:e} >= {eps:e}", a.distance));
            }
            if a.x.backend() != Backend::Exact || !decide_cnil2(&a.x, &cfg()).unwrap().is_yes() {
                return fail(format!("seed {seed}, eps {eps:e}: exact re-check failed"));
            }
            worst = worst.max(a.distance / eps);
        }
    }
    pass(format!("100 balanced matrices x 3 eps, max distance/eps {worst:.3}"))
}

fn trace_zero_unitary(rng: &mut impl Rng) -> Matrix {
    let u = nil2kit::oracle::unitary::random_unitary(rng, 2);
    let theta = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let d = Matrix::diag(&[Scalar::Float(theta), Scalar::Float(-theta)]).unwrap();
    let u_adj = Matrix::Float(nil2kit::dense::Mat::from_fn(2, 2, |i, j| u.get(j, i).to_c64().conj()));
    u.mat_mul(&d).unwrap().mat_mul(&u_adj).unwrap()
}

fn unitary_constructions() -> Outcome {
    let mut rng = gen::trial_rng(7, 7);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let w = trace_zero_unitary(&mut rng);
        let p = match unitary_commutator_2x2(&w, &cfg()) {
            Ok(p) => p,
            Err(e) => return fail(format!("2x2 sample {k}: {e}")),
        };
        worst = worst.max(p.residual).max(p.defect);
        let a = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let b = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let q = unitary_commutator_4x4_paired(&Scalar::Float(a), &Scalar::Float(b), &cfg()).unwrap();
        worst = worst.max(q.pair.residual).max(q.pair.defect);
    }
    if worst > 1e-12 {
        return fail(format!("construction error {worst:e} > 1e-12"));
    }
    let search = search_unitary_3x3(&FuzzConfig { seed: 7, trials: 10_000, max_dim: 3, entry_bound: 1 }).unwrap();
    if search.min_defect < 0.05 {
        return fail(format!("3x3 min defect {:e} below floor", search.min_defect));
    }
    let control = control_unitary_2x2(7, 50, &cfg()).unwrap();
    if control.max_commutator_defect > 1e-12 {
        return fail(format!("2x2 control defect {:e}", control.max_commutator_defect));
    }
    pass(format!(
        "2x2/4x4 max error {worst:.1e}; 3x3 min defect {:.3} over 10000; 2x2 control defect {:.1e}",
        search.min_defect, control.max_commutator_defect
    ))
}

fn similarity_invariance() -> Outcome {
    for seed in 0..100u64 {
        let mut rng = gen::trial_rng(seed, 8);
        let n = rng.random_range(1..=8);
        let t = gen::random_any(&mut rng, n, 3);
        let (p, p_inv) = gen::random_similarity(&mut rng, n);
        let moved = Matrix::Exact(gen::conjugate_by(&t, &p, &p_inv));
        let t = Matrix::Exact(t);
        let same = decide_cnil2(&t, &cfg()).unwrap().verdict == decide_cnil2(&moved, &cfg()).unwrap().verdict
            && is_balanced(&t, &cfg()).unwrap() == is_balanced(&moved, &cfg()).unwrap()
            && jordan_spectrum(&t, &cfg()).unwrap() == jordan_spectrum(&moved, &cfg()).unwrap();
        if !same {
            return fail(format!("seed {seed}: invariants differ"));
        }
    }
    pass("100 similar pairs agree on verdict, balance and spectrum")
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "single-cell rejection", s(1), single_cells),
        run(2, "parity law", s(1), parity_law),
        run(3, "criterion sweep", s(30), criterion_sweep),
        run(4, "witness round-trip", s(120), witness_round_trip),
        run(5, "fuzz soundness", s(300), fuzz_soundness),
        run(6, "closure approximation", s(120), closure_approximation),
        run(7, "unitary constructions", s(60), unitary_constructions),
        run(8, "similarity invariance", s(60), similarity_invariance),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
