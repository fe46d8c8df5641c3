use nil2kit::exec::Exec;
use nil2kit::oracle::fuzz::{fuzz_membership, fuzz_membership_with, FuzzConfig};
use nil2kit::oracle::unitary::{control_unitary_2x2, search_unitary, search_unitary_3x3};
use nil2kit::ToleranceConfig;

#[test]
fn shipped_seeds_have_no_failures() {
    for seed in [1, 2, 3] {
        let cfg = FuzzConfig { seed, trials: 100, max_dim: 8, entry_bound: 3 };
        let r = fuzz_membership(&cfg).unwrap();
        assert_eq!(r.trials_run, 100);
        assert!(r.failures.is_empty(), "seed {seed}: {:?}", r.failures);
    }
}

#[test]
fn reports_are_byte_identical() {
    let cfg = FuzzConfig { seed: 42, trials: 30, max_dim: 7, entry_bound: 2 };
    let a = serde_json::to_string(&fuzz_membership_with(&cfg, Exec::Sequential).unwrap().to_json()).unwrap();
    let b = serde_json::to_string(&fuzz_membership_with(&cfg, Exec::Parallel).unwrap().to_json()).unwrap();
    let c = serde_json::to_string(&fuzz_membership(&cfg).unwrap().to_json()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn three_by_three_defect_stays_above_floor() {
    let cfg = FuzzConfig { seed: 7, trials: 10_000, max_dim: 3, entry_bound: 1 };
    let r = search_unitary_3x3(&cfg).unwrap();
    eprintln!("3x3 min defect {}", r.min_defect);
    assert_eq!(r.below_floor, 0);
    assert!(r.min_defect >= r.floor);
}

#[test]
fn two_by_two_control_reaches_zero() {
    let ctl = control_unitary_2x2(7, 200, &ToleranceConfig::default()).unwrap();
    assert!(ctl.max_commutator_defect < 1e-12);
    let r = search_unitary(2, 7, 10, 0.05, Exec::Sequential);
    assert_eq!(r.dimension, 2);
}
