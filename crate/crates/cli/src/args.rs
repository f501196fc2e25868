use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sumcx",
    version,
    about = "Homology and collapsibility of sum complexes X_A on Z_n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, env = "SUMCX_THREADS", global = true)]
    pub threads: Option<usize>,

    /// Include wall-clock time in the record (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti numbers or integral homology from boundary matrices.
    Homology {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
    },
    /// Betti number from kernel dimensions of Fourier submatrices.
    Theorem1 {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value = "qomega")]
        field: FieldSpec,
        /// Also run the boundary method and exit with code 3 if they differ.
        #[arg(long)]
        cross_check: bool,
    },
    /// Decide collapsibility, with a trace or certificate.
    Collapse {
        #[command(flatten)]
        instance: Instance,
        /// Step budget for the search used when n is composite.
        #[arg(long, default_value_t = sumcomplex::collapse::DEFAULT_BUDGET)]
        budget: u64,
        /// Write the collapse steps to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Look for singular square submatrices of the Fourier matrix over Q(ω).
    Chebotarev {
        #[arg(long)]
        n: u64,
        /// Largest submatrix order (default: n for n <= 11, else 4).
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// One row per (k+1)-subset A of Z_n.
    Survey {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        /// Only one representative per affine equivalence class.
        #[arg(long)]
        classes: bool,
        /// Prime for the h_km1_fp column.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = sumcomplex::collapse::DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
pub struct Instance {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated residues, e.g. 0,1,3.
    #[arg(long = "A", value_name = "A")]
    pub a: String,
}

/// `q`, `qomega`, `fp:<p>`, `fpext:<p>` or `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Q,
    QOmega,
    Fp(u64),
    FpExt(u64),
    Z,
}

impl FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let prime = |p: &str| {
            p.parse::<u64>()
                .map_err(|e| format!("bad prime {p:?}: {e}"))
        };
        match s {
            "q" => Ok(FieldSpec::Q),
            "qomega" => Ok(FieldSpec::QOmega),
            "z" => Ok(FieldSpec::Z),
            _ => {
                if let Some(p) = s.strip_prefix("fpext:") {
                    Ok(FieldSpec::FpExt(prime(p)?))
                } else if let Some(p) = s.strip_prefix("fp:") {
                    Ok(FieldSpec::Fp(prime(p)?))
                } else {
                    Err(format!(
                        "unknown field {s:?}; expected q, qomega, fp:<p>, fpext:<p> or z"
                    ))
                }
            }
        }
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Q => f.write_str("q"),
            FieldSpec::QOmega => f.write_str("qomega"),
            FieldSpec::Fp(p) => write!(f, "fp:{p}"),
            FieldSpec::FpExt(p) => write!(f, "fpext:{p}"),
            FieldSpec::Z => f.write_str("z"),
        }
    }
}
