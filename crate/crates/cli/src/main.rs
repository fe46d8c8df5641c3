use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nil2kit::jordan::jordan_spectrum;
use nil2kit::nil2::Certifies;
use nil2kit::oracle::fuzz::{fuzz_membership, FuzzConfig};
use nil2kit::oracle::unitary::unitary_commutator_2x2;
use nil2kit::{
    approximate_in_cnil2, decide_cnil2, has_nilpotent_square_root, is_balanced, nilpotent_square_root,
    verify_witness, Backend, Error, Matrix, Obstruction, ToleranceConfig, Witness, SCHEMA,
};
use serde_json::{Map, Value};

/// Exit codes.
const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INPUT: u8 = 2;
const NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "nil2kit", version, about = "Commutators of square-zero matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Matrix JSON file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// exact or float64; defaults to the input's backend.
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    rank_tol: Option<f64>,
    #[arg(long)]
    eig_tol: Option<f64>,
    #[arg(long)]
    verify_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Membership verdict with witness or obstruction.
    Decide(Common),
    /// Witness pair; fails when the verdict is no.
    Witness(Common),
    /// Check a witness file against a matrix.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        witness: PathBuf,
    },
    /// Jordan spectrum.
    Jordan(Common),
    /// Balance report.
    Balanced(Common),
    /// Nearby member of the commutator set.
    Approx {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
    },
    /// Nilpotent square root certificate.
    Sqrt(Common),
    /// Randomized soundness run.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        entry_bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unitary pair whose commutator is a given 2x2 trace-zero unitary.
    Unitary2(Common),
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numerical { .. } | Error::Singular(_) => NUMERICAL,
            _ => INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: INPUT, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn with_schema(v: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), Value::from(SCHEMA));
    if let Value::Object(m) = v {
        out.extend(m.into_iter().filter(|(k, _)| k != "schema"));
    }
    Value::Object(out)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

impl Common {
    fn tolerances(&self) -> Result<ToleranceConfig, Failure> {
        let d = ToleranceConfig::default();
        Ok(ToleranceConfig::new(
            self.rank_tol.unwrap_or(d.rank_tol),
            self.eig_tol.unwrap_or(d.eig_cluster_tol),
            self.verify_tol.unwrap_or(d.verify_tol),
        )?)
    }

    fn raw_matrix(&self) -> Result<Matrix, Failure> {
        Ok(Matrix::from_json(&read_json(&self.input)?)?)
    }

    fn matrix(&self) -> Result<Matrix, Failure> {
        apply_backend(self.raw_matrix()?, self.backend.as_deref())
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

fn apply_backend(m: Matrix, choice: Option<&str>) -> Result<Matrix, Failure> {
    let Some(name) = choice else { return Ok(m) };
    let wanted: Backend = name.parse()?;
    match (m.backend(), wanted) {
        (a, b) if a == b => Ok(m),
        (Backend::Exact, Backend::Float64) => Ok(m.to_float()),
        _ => Err(input_error("cannot convert a float64 matrix to the exact backend")),
    }
}

fn decide(c: &Common) -> Outcome {
    let (t, cfg) = (c.matrix()?, c.tolerances()?);
    let d = decide_cnil2(&t, &cfg)?;
    emit(&d.to_json(), c.out())?;
    match &d.obstruction {
        None => {
            eprintln!("verdict: yes");
            Ok(OK)
        }
        Some(o) => {
            let kind = match o {
                Obstruction::UnpairedNonzeroSpectrum { .. } => "unpaired_nonzero_spectrum",
                Obstruction::PartitionMismatch { .. } => "partition_mismatch",
                Obstruction::NoNilpotentSquareRoot { .. } => "no_nilpotent_square_root",
            };
            eprintln!("verdict: no ({kind})");
            Ok(NEGATIVE)
        }
    }
}

fn witness(c: &Common) -> Outcome {
    let (t, cfg) = (c.matrix()?, c.tolerances()?);
    let d = decide_cnil2(&t, &cfg)?;
    let Some(w) = d.witness else {
        eprintln!("verdict: no; no witness exists");
        return Ok(NEGATIVE);
    };
    emit(&w.to_json(&t), c.out())?;
    eprintln!("witness for a {}x{} matrix", t.rows(), t.cols());
    Ok(OK)
}

fn verify(c: &Common, witness_path: &Path) -> Outcome {
    let raw = c.raw_matrix()?;
    let (t, cfg) = (apply_backend(raw.clone(), c.backend.as_deref())?, c.tolerances()?);
    let (w, certifies): (Witness, Option<Certifies>) = Witness::from_json(&read_json(witness_path)?)?;
    let w = Witness {
        m: apply_backend(w.m, c.backend.as_deref())?,
        n: apply_backend(w.n, c.backend.as_deref())?,
        note: w.note,
    };
    let digest_ok = certifies.as_ref().is_none_or(|cert| cert == &Certifies::of(&raw));
    let report = verify_witness(&t, &w, &cfg)?;
    let pass = report.pass && digest_ok;
    let mut v = report.to_json();
    v["pass"] = Value::from(pass);
    v["digest_match"] = Value::from(digest_ok);
    emit(&v, c.out())?;
    eprintln!("verify: {} (residuals {:?})", if pass { "pass" } else { "fail" }, report.residuals);
    Ok(match (pass, t.backend()) {
        (true, _) => OK,
        (false, Backend::Float64) if digest_ok => NUMERICAL,
        _ => NEGATIVE,
    })
}

fn jordan(c: &Common) -> Outcome {
    let (t, cfg) = (c.matrix()?, c.tolerances()?);
    let sp = jordan_spectrum(&t, &cfg)?;
    emit(&with_schema(serde_json::to_value(&sp).expect("serializable")), c.out())?;
    eprintln!("{} distinct eigenvalues", sp.entries.len());
    Ok(OK)
}

fn balanced(c: &Common) -> Outcome {
    let (t, cfg) = (c.matrix()?, c.tolerances()?);
    let r = is_balanced(&t, &cfg)?;
    emit(&r.to_json(), c.out())?;
    eprintln!("balanced: {}", r.balanced);
    Ok(if r.balanced { OK } else { NEGATIVE })
}

fn approx(c: &Common, eps: f64) -> Outcome {
    let (t, cfg) = (c.matrix()?, c.tolerances()?);
    if !is_balanced(&t, &cfg)?.balanced {
        eprintln!("not balanced: outside the closure");
        return Ok(NEGATIVE);
    }
    let a = approximate_in_cnil2(&t, eps, &cfg)?;
    emit(&a.to_json(), c.out())?;
    eprintln!("distance {:e} < eps {eps:e}", a.distance);
    Ok(OK)
}

fn sqrt(c: &Common) -> Outcome {
    let (t, cfg) = (c.matrix()?, c.tolerances()?);
    let sp = jordan_spectrum(&t, &cfg)?;
    let nilpotent = sp.entries.iter().all(|e| e.eigenvalue.is_zero());
    if !nilpotent {
        return Err(input_error("matrix is not nilpotent"));
    }
    if let Some(e) = sp.entries.first() {
        if !has_nilpotent_square_root(&e.partition) {
            eprintln!("partition {} has no nilpotent square root", e.partition);
            return Ok(NEGATIVE);
        }
    }
    let cert = nilpotent_square_root(&t, &cfg)?;
    emit(&cert.to_json(), c.out())?;
    eprintln!("{}", cert.note);
    Ok(OK)
}

fn fuzz(cfg: FuzzConfig, out: Option<&Path>) -> Outcome {
    let r = fuzz_membership(&cfg)?;
    emit(&r.to_json(), out)?;
    eprintln!("{} trials, {} failures", r.trials_run, r.failures.len());
    Ok(if r.failures.is_empty() { OK } else { NEGATIVE })
}

fn unitary2(c: &Common) -> Outcome {
    let cfg = c.tolerances()?;
    let w = match c.matrix()? {
        m @ Matrix::Float(_) => m,
        m => m.to_float(),
    };
    let p = unitary_commutator_2x2(&w, &cfg)?;
    emit(&p.to_json(), c.out())?;
    eprintln!("residual {:e}", p.residual);
    Ok(if p.residual <= cfg.verify_tol { OK } else { NUMERICAL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decide(c) => decide(c),
        Command::Witness(c) => witness(c),
        Command::Verify { common, witness } => verify(common, witness),
        Command::Jordan(c) => jordan(c),
        Command::Balanced(c) => balanced(c),
        Command::Approx { common, eps } => approx(common, *eps),
        Command::Sqrt(c) => sqrt(c),
        Command::Fuzz { seed, trials, max_dim, entry_bound, out } => fuzz(
            FuzzConfig { seed: *seed, trials: *trials, max_dim: *max_dim, entry_bound: *entry_bound },
            out.as_deref(),
        ),
        Command::Unitary2(c) => unitary2(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
