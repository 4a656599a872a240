//! The `sdc` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage and
//! input errors. Data goes to `-o` or standard output, diagnostics to
//! standard error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bases::{
    certify_not_clock_shift, clock_shift_basis, matching_basis, pauli_tensor_basis,
    verify_orthogonal_unitary_basis, werner3_basis, UnitaryBasis,
};
use crate::io;
use crate::numkit::Complex64;
use crate::protocol::{random_scrambled_bw, verify_errorless};
use crate::randlab::{
    distinguishability_experiment_with, kolmogorov_distance, mean_sqrt_esd, random_protocol_esd,
    ExperimentOptions, MPParams,
};
use crate::rigidity::{canonicalize, verify_decomposition};

/// Parsed command line. Together with the build it determines every output
/// byte.
#[derive(Debug, Clone, Parser)]
#[command(name = "sdc", version, about = "Superdense coding workbench")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Orthogonal unitary bases.
    #[command(subcommand)]
    Basis(BasisCommand),
    /// Protocols and their canonical decompositions.
    #[command(subcommand)]
    Protocol(ProtocolCommand),
    /// Random protocols and their spectra.
    #[command(subcommand)]
    Random(RandomCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    ClockShift,
    PauliTensor,
    Matching,
    Werner3,
}

#[derive(Debug, Clone, Subcommand)]
pub enum BasisCommand {
    /// Build a basis and write it as JSON.
    Build {
        #[arg(long, value_enum)]
        kind: BasisKind,
        /// Dimension; ignored by werner3, a power of two for pauli-tensor.
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Phase angle of the werner3 parameter.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3, allow_negative_numbers = true)]
        beta_angle: f64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check unitarity and orthogonality.
    Check {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// List certificates of non-equivalence to the clock and shift basis.
    Certify {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum ProtocolCommand {
    /// Write a random local scramble of a planted errorless protocol.
    Scramble {
        #[arg(long = "a-prime", default_value_t = 2)]
        a_prime: usize,
        #[arg(long = "b-prime", default_value_t = 2)]
        b_prime: usize,
        #[arg(long, default_value_t = 2)]
        blocks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Also write the planted decomposition.
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Check errorlessness, and a decomposition if one is given.
    Verify {
        input: PathBuf,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Compute and verify a canonical decomposition.
    Canonicalize {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum RandomCommand {
    /// Run independent trials and summarize them as JSON.
    Run {
        #[arg(long, default_value_t = 8)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest `d` for which the square-root measurement is computed.
        #[arg(long, default_value_t = 16)]
        pgm_max_d: usize,
        /// Write the pooled eigenvalues here.
        #[arg(long)]
        esd_csv: Option<PathBuf>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Compare one spectrum with the square Marchenko-Pastur law.
    Mp {
        #[arg(long, default_value_t = 32)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        esd_csv: Option<PathBuf>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

/// Parses `argv` (program name first) and runs it.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&config) {
        Ok(()) => 0,
        Err(Failure::Verification(msg)) => {
            eprintln!("sdc: verification failed: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("sdc: error: {msg}");
            2
        }
    }
}

fn dispatch(config: &RunConfig) -> Result<(), Failure> {
    match &config.command {
        Command::Basis(c) => basis(c),
        Command::Protocol(c) => protocol(c),
        Command::Random(c) => random(c),
    }
}

pub fn build_basis(kind: BasisKind, d: usize, beta_angle: f64) -> Result<UnitaryBasis, crate::bases::BasisError> {
    match kind {
        BasisKind::ClockShift => clock_shift_basis(d),
        BasisKind::PauliTensor => {
            if !d.is_power_of_two() || d < 2 {
                return Err(crate::bases::BasisError::Invalid(format!(
                    "pauli-tensor needs a power of two >= 2, got {d}"
                )));
            }
            pauli_tensor_basis(d.trailing_zeros())
        }
        BasisKind::Matching => matching_basis(d),
        BasisKind::Werner3 => werner3_basis(Complex64::from_polar(1.0, beta_angle)),
    }
}

fn basis(c: &BasisCommand) -> Result<(), Failure> {
    match c {
        BasisCommand::Build {
            kind,
            d,
            beta_angle,
            output,
        } => {
            let b = build_basis(*kind, *d, *beta_angle).map_err(usage)?;
            emit(output.as_deref(), &io::basis_to_json(&b))
        }
        BasisCommand::Check { input, tol } => {
            let b = io::load_basis(input)?;
            let r = verify_orthogonal_unitary_basis(&b, *tol);
            emit(
                None,
                &json_text(&json!({
                    "d": r.d,
                    "count": r.count,
                    "max_unitarity_violation": r.max_unitarity_violation,
                    "max_inner_violation": r.max_inner_violation,
                    "pass": r.pass,
                })),
            )?;
            if r.pass {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "max violation {:e} exceeds {tol:e}",
                    r.max_violation()
                )))
            }
        }
        BasisCommand::Certify { input, tol, output } => {
            let b = io::load_basis(input)?;
            let certs = certify_not_clock_shift(&b, *tol).map_err(|e| Failure::Verification(e.to_string()))?;
            if certs.is_empty() {
                eprintln!("sdc: no certificate fired; this proves nothing");
            }
            let list: Vec<_> = certs
                .iter()
                .map(|c| {
                    json!({
                        "kind": c.kind.name(),
                        "witness": c.witness,
                        "value": c.witness_value.to_string(),
                    })
                })
                .collect();
            emit(output.as_deref(), &json_text(&json!({ "certificates": list })))
        }
    }
}

fn protocol(c: &ProtocolCommand) -> Result<(), Failure> {
    match c {
        ProtocolCommand::Scramble {
            a_prime,
            b_prime,
            blocks,
            seed,
            output,
            decomposition,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let (p, dec) = random_scrambled_bw(&mut rng, *a_prime, *b_prime, *blocks).map_err(usage)?;
            if let Some(path) = decomposition {
                io::save_decomposition(path, &dec)?;
            }
            emit(output.as_deref(), &io::protocol_to_json(&p))
        }
        ProtocolCommand::Verify {
            input,
            decomposition,
            tol,
        } => {
            let p = io::load_protocol(input)?;
            let dec = decomposition.as_deref().map(io::load_decomposition).transpose()?;
            let r = verify_errorless(&p, *tol);
            let mut out = json!({
                "max_state_overlap": r.max_state_overlap,
                "worst_pair": [r.worst_pair.0, r.worst_pair.1],
                "max_operator_violation": r.max_operator_violation,
                "errorless": r.pass,
            });
            let mut pass = r.pass;
            if let Some(dec) = dec {
                let dr = verify_decomposition(&p, &dec, *tol);
                out["decomposition_residual"] = json!(dr.max_residual());
                out["decomposition_pass"] = json!(dr.pass);
                pass &= dr.pass;
            }
            emit(None, &json_text(&out))?;
            if pass {
                Ok(())
            } else {
                Err(Failure::Verification(format!("tolerance {tol:e}")))
            }
        }
        ProtocolCommand::Canonicalize { input, tol, output } => {
            let p = io::load_protocol(input)?;
            let dec = canonicalize(&p, *tol).map_err(|e| Failure::Verification(e.to_string()))?;
            let r = verify_decomposition(&p, &dec, *tol);
            if !r.pass {
                return Err(Failure::Verification(format!(
                    "decomposition residual {:e}",
                    r.max_residual()
                )));
            }
            eprintln!(
                "sdc: {} blocks, residual {:.3e}",
                dec.blocks.len(),
                r.max_residual()
            );
            emit(output.as_deref(), &io::decomposition_to_json(&dec))
        }
    }
}

fn random(c: &RandomCommand) -> Result<(), Failure> {
    match c {
        RandomCommand::Run {
            d,
            trials,
            seed,
            pgm_max_d,
            esd_csv,
            output,
        } => {
            let opts = ExperimentOptions { pgm_max_d: *pgm_max_d };
            let stats = distinguishability_experiment_with(*d, *trials, *seed, &opts).map_err(usage)?;
            if let Some(path) = esd_csv {
                io::save_esd_csv(path, &stats.pooled)?;
            }
            let mut text = serde_json::to_string_pretty(&stats).expect("plain data");
            text.push('\n');
            emit(output.as_deref(), &text)
        }
        RandomCommand::Mp {
            d,
            seed,
            esd_csv,
            output,
        } => {
            if *d < 2 {
                return Err(usage(format!("need d >= 2, got {d}")));
            }
            // Stream 0 matches trial 0 of `random run` with the same seed.
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(0);
            let s = random_protocol_esd(*d, &mut rng, *seed).map_err(usage)?;
            if let Some(path) = esd_csv {
                io::save_esd_csv(path, &s)?;
            }
            let out = json!({
                "d": s.d,
                "n": s.n,
                "seed": s.seed,
                "mean_sqrt_eig": mean_sqrt_esd(&s, 1e-9).map_err(usage)?,
                "max_eig": s.max(),
                "trace": s.trace(),
                "ks_distance": kolmogorov_distance(&s, &MPParams::square()).map_err(usage)?,
            });
            emit(output.as_deref(), &json_text(&out))
        }
    }
}
