use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod formats;
mod selftest;

use config::RunConfig;

/// Exact p-adic, cyclotomic and CM-form computations.
#[derive(Parser, Debug)]
#[command(name = "cmrig", version, about, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Global {
    /// Residue characteristic p.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Absolute p-adic precision N.
    #[arg(long, global = true)]
    pub prec: Option<i64>,
    /// Series truncation L.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Comma-separated tower levels.
    #[arg(long, global = true, value_delimiter = ',')]
    pub levels: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Index t of the place above p, prime to p − 1.
    #[arg(long, global = true)]
    pub place: Option<u64>,
    #[arg(long = "loxton-c", global = true)]
    pub loxton_c: Option<f64>,
    #[arg(long = "loxton-d", global = true)]
    pub loxton_d: Option<f64>,
    /// Input file.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Global {
    pub fn config(&self) -> RunConfig {
        let d = RunConfig::default();
        RunConfig {
            p: self.p.unwrap_or(d.p),
            prec: self.prec.unwrap_or(d.prec),
            trunc: self.trunc.unwrap_or(d.trunc),
            levels: self.levels.clone().unwrap_or(d.levels),
            loxton_c: self.loxton_c.unwrap_or(d.loxton_c),
            loxton_d: self.loxton_d.unwrap_or(d.loxton_d),
            place: self.place.unwrap_or(d.place),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weierstrass preparation of a series file.
    Wprep,
    /// Evaluate a series file at t of positive valuation.
    Eval {
        /// t as a cyclotomic integer `n; c0,…` with n a power of p.
        #[arg(long)]
        t: String,
    },
    /// The binomial series (1+T)^e.
    Binom {
        /// The exponent e.
        #[arg(long, conflicts_with = "unit")]
        e: Option<String>,
        /// A unit u; e is taken with ⟨u⟩ = (1+p)^e.
        #[arg(long)]
        unit: Option<String>,
    },
    /// Evaluate a series file at an arithmetic point.
    Specialize {
        /// `k=<weight> zeta=<r>:<a>`.
        #[arg(long)]
        point: String,
        /// Report the value in the larger ring Z_p[ζ_{p^r}].
        #[arg(long)]
        embed: Option<u32>,
    },
    /// Newton polygon of a polynomial file.
    Newton {
        /// Read a probe file and report vertex sets at t = ζ_{p^r} − 1 for r in --levels.
        #[arg(long)]
        probe: bool,
    },
    /// House of a cyclotomic integer, with its Galois orbit.
    House {
        alpha: String,
        #[arg(long, default_value_t = cmrig::cyclo::DEFAULT_HOUSE_BITS)]
        bits: u32,
        /// Conductor of the fixed subfield for the orbit and trace.
        #[arg(long)]
        base: Option<u64>,
    },
    /// Least number of roots of unity summing to α.
    Nroi {
        alpha: String,
        #[arg(long)]
        search: u64,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Loxton lower bound for the squared house.
    Loxton {
        #[arg(long)]
        n: u64,
    },
    /// Reduce an element of Z[ζ_{p^n}] into F_p[y]/(y^{p^m} − 1).
    Quotient {
        alpha: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Second element; checks the homomorphism property on the pair.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Recover an exponential form from a tower of sample sets.
    Fit {
        /// Maximum number of terms B.
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Fit a single monomial to the first sample set.
        #[arg(long, conflicts_with = "probe")]
        single: bool,
        /// Cancellation patterns of the first sample set at level m.
        #[arg(long)]
        probe: Option<u32>,
    },
    /// Check a form file against a sample set.
    Verify {
        #[arg(long)]
        form: PathBuf,
    },
    /// Choose roots of unity with an invertible Vandermonde-type matrix.
    Vandermonde,
    /// Recover π_i^{k−1} from weight-k samples by Cramer's rule.
    Cramer {
        #[arg(long)]
        k: u32,
    },
    /// Theta series of the built-in Hecke character of Q(√−D).
    Theta {
        #[arg(long = "E")]
        disc: u64,
        /// Largest coefficient index.
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// CM vanishing of an eigensystem file, or the CM family coefficient at ℓ.
    Cm {
        #[arg(long = "E")]
        disc: u64,
        /// Print the family coefficient at this split prime instead.
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Ramanujan, trivial and weight-one ordinarity bounds of an eigensystem file.
    Bounds {
        /// Primes to test; defaults to all stored primes.
        #[arg(long, value_delimiter = ',')]
        ell: Option<Vec<u64>>,
    },
    /// Ordinary p-stabilization of an eigensystem file.
    Stabilize,
    /// Slope of the U_p eigenvalue of an eigensystem file.
    Slope,
    /// Degree of the Hecke field over the character field.
    HeckeDegree {
        /// Upper bound to compare against, such as a rank over Λ.
        #[arg(long)]
        rank: Option<u64>,
    },
    /// Characteristic polynomial of a Galois orbit of Frobenius pairs.
    Charpoly {
        /// Build the pair from the built-in character of Q(√−D) at --ell.
        #[arg(long = "E", requires = "ell")]
        disc: Option<u64>,
        #[arg(long)]
        ell: Option<u64>,
        /// Expand the first pair to its full orbit over Q(ζ_base).
        #[arg(long)]
        orbit: bool,
        /// Weight for the house bounds.
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// End-to-end recovery of π_i from CM family samples.
    Pipeline {
        #[arg(long = "E")]
        disc: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        ell: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Run the invariant suites and the coverage audit.
    Selftest,
}

/// Outcome of a subcommand: its report and whether every verdict held.
pub struct Outcome {
    pub report: String,
    pub ok: bool,
}

impl Outcome {
    pub fn pass(report: String) -> Self {
        Outcome { report, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.global.config();
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::dispatch(&cli, &cfg) {
        Ok(out) => {
            if let Some(path) = &cli.global.out {
                if let Err(e) = std::fs::write(path, &out.report) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.report);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
