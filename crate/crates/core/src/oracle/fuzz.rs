//! Randomized soundness checks on commutators of generated square-zero pairs.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::gen;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::exec::{map_indices, Exec};
use crate::jordan::{eigenvalues, jordan_spectrum};
use crate::matrix::Matrix;
use crate::nil2::{anticommutation_check, decide_cnil2, Witness};
use crate::scalar::{Backend, Scalar};
use crate::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub entry_bound: i64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { seed: 1, trials: 100, max_dim: 8, entry_bound: 3 }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        if self.max_dim < 2 {
            return Err(Error::Precondition("max_dim must be at least 2".into()));
        }
        if self.entry_bound < 1 {
            return Err(Error::Precondition("entry_bound must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub trial: usize,
    pub property: String,
    pub inputs: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub trials_run: usize,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn to_json(&self) -> Value {
        json!({ "schema": SCHEMA, "trials_run": self.trials_run, "failures": self.failures })
    }
}

/// Exact square-zero matrix of size `n` drawn from `rng`.
pub fn random_square_zero(n: usize, cfg: &FuzzConfig, rng: &mut impl Rng) -> Matrix {
    Matrix::Exact(gen::random_square_zero(rng, n, cfg.entry_bound))
}

/// `nul (t − αI)^k = nul (t + αI)^k`.
pub fn nullity_identity_check(t: &Matrix, alpha: &Scalar, k: u32, cfg: &ToleranceConfig) -> Result<bool> {
    if alpha.is_zero() {
        return Err(Error::Precondition("alpha must be nonzero".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let n = t.rows();
    let minus = t.shift(&alpha.neg())?.mat_pow(k)?;
    let plus = t.shift(alpha)?.mat_pow(k)?;
    Ok(n - minus.rank(cfg) == n - plus.rank(cfg))
}

/// Nullities of `(t − αI)^k` for `k = 1..=kmax`, powering incrementally and
/// stopping once the kernel chain stabilizes.
fn nullity_profile(t: &Matrix, alpha: &Scalar, kmax: u32, cfg: &ToleranceConfig) -> Result<Vec<usize>> {
    let n = t.rows();
    let base = t.shift(&alpha.neg())?;
    let mut pow = base.clone();
    let mut out: Vec<usize> = Vec::new();
    for _ in 0..kmax {
        let nul = n - pow.rank(cfg);
        if out.last() == Some(&nul) {
            out.resize(kmax as usize, nul);
            break;
        }
        out.push(nul);
        if out.len() < kmax as usize {
            pow = pow.mat_mul(&base)?;
        }
    }
    Ok(out)
}

fn check_pair(m: &Matrix, n: &Matrix, cfg: &ToleranceConfig) -> std::result::Result<(), String> {
    let fail = |p: &str| Err(p.to_string());
    let err = |p: &str, e: Error| format!("{p}: {e}");
    let t = m.commutator(n).map_err(|e| err("commutator", e))?;
    if !(m.mat_pow(2).map_err(|e| err("square", e))?.is_zero() && n.mat_pow(2).map_err(|e| err("square", e))?.is_zero()) {
        return fail("generator not square-zero");
    }
    let d = decide_cnil2(&t, cfg).map_err(|e| err("decide", e))?;
    if !d.is_yes() {
        return fail("decide_yes");
    }
    if !t.trace().map_err(|e| err("trace", e))?.is_zero() {
        return fail("trace_zero");
    }
    let sp = jordan_spectrum(&t, cfg).map_err(|e| err("spectrum", e))?;
    let sp_neg = jordan_spectrum(&t.neg(), cfg).map_err(|e| err("spectrum", e))?;
    if sp != sp_neg {
        return fail("similar_to_negative");
    }
    let generating = Witness { m: m.clone(), n: n.clone(), note: String::new() };
    let synthesized = d.witness.expect("yes carries a witness");
    for w in [&generating, &synthesized] {
        if !anticommutation_check(&t, w, cfg).map_err(|e| err("anticommutation", e))? {
            return fail("anticommutation");
        }
    }
    let dim = t.rows() as u32;
    let mut nilpotent = true;
    for (alpha, _) in eigenvalues(&t, cfg).map_err(|e| err("eigenvalues", e))? {
        if alpha.is_zero() {
            continue;
        }
        nilpotent = false;
        let minus = nullity_profile(&t, &alpha, dim, cfg).map_err(|e| err("nullity", e))?;
        let plus = nullity_profile(&t, &alpha.neg(), dim, cfg).map_err(|e| err("nullity", e))?;
        if minus != plus {
            return fail("nullity_identity");
        }
    }
    if nilpotent {
        let s = m.add(n).and_then(|x| x.mat_pow(2)).map_err(|e| err("jordan_product", e))?;
        if !decide_cnil2(&s, cfg).map_err(|e| err("jordan_product", e))?.is_yes() {
            return fail("jordan_product");
        }
    }
    Ok(())
}

fn run_trial(cfg: &FuzzConfig, trial: usize) -> Option<FuzzFailure> {
    let mut rng = gen::trial_rng(cfg.seed, trial as u64);
    let n = rng.random_range(2..=cfg.max_dim);
    let (m, nn) = gen::random_pair(&mut rng, n, cfg.entry_bound);
    let (m, nn) = (Matrix::Exact(m), Matrix::Exact(nn));
    check_pair(&m, &nn, &ToleranceConfig::default()).err().map(|property| FuzzFailure {
        trial,
        property,
        inputs: json!({ "m": m.to_json(), "n": nn.to_json() }),
    })
}

pub fn fuzz_membership(cfg: &FuzzConfig) -> Result<FuzzReport> {
    fuzz_membership_with(cfg, Exec::default())
}

pub fn fuzz_membership_with(cfg: &FuzzConfig, exec: Exec) -> Result<FuzzReport> {
    cfg.validate()?;
    let failures = map_indices(exec, cfg.trials as u64, |i| run_trial(cfg, i as usize))
        .into_iter()
        .flatten()
        .collect();
    Ok(FuzzReport { trials_run: cfg.trials, failures })
}

/// Checks a caller-supplied pair with the same battery as a fuzz trial.
pub fn check_square_zero_pair(m: &Matrix, n: &Matrix) -> std::result::Result<(), String> {
    if m.backend() != Backend::Exact || n.backend() != Backend::Exact {
        return Err("exact backend required".into());
    }
    check_pair(m, n, &ToleranceConfig::default())
}
