//! Commutators of square-zero matrices: membership decisions, explicit
//! witnesses, nilpotent square roots and closure approximation, over exact
//! Gaussian rationals or complex doubles.

pub mod closure;
pub mod config;
pub mod dense;
pub mod error;
pub mod exact;
pub mod field;
pub mod float;
pub mod jordan;
pub mod matrix;
pub mod exec;
pub mod nil2;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod sqroot;

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "nil2kit/v1";

pub use closure::{approximate_in_cnil2, in_closure_cnil2, is_balanced, Approximation, BalanceReport};
pub use config::ToleranceConfig;
pub use error::{Error, Result};
pub use jordan::{JordanBasis, JordanSpectrum, Partition, SpectrumEntry};
pub use matrix::Matrix;
pub use scalar::{Backend, GaussRational, Scalar};
pub use nil2::{
    anticommutation_check, decide_cnil2, nilpotent_partition_in_cnil2, square_zero_canonical,
    synthesize_witness, verify_witness, Decision, Obstruction, Verdict, VerifyReport, Witness,
};
pub use sqroot::{has_nilpotent_square_root, nilpotent_square_root, SqrtCertificate};
