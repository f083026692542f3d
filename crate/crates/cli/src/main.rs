//! Command-line front end: JSON in, JSON report out, deterministic for a
//! fixed (input, seed). Exit codes: 0 ok, 2 schema/input error, 3
//! math-contract violation, 4 precision exhaustion.

mod commands;
mod dto;

use clap::{Args, Parser, Subcommand};
use sharpflat_core::error::Error;
use sharpflat_core::ring::StructKind;
use sharpflat_core::theta::LambdaChoice;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sharpflat",
    version,
    about = "Exact sharp/flat factorization toolkit over truncated Iwasawa algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural polynomials and ring operations
    Ring(RingArgs),
    /// Sharp/flat factorization of a norm-compatible sequence
    Decompose {
        /// NormSeq JSON file
        #[arg(long)]
        input: PathBuf,
    },
    /// Finite-level logarithm matrix with convergence diagnostics
    Logmatrix {
        #[arg(long)]
        p: u64,
        /// eigenvalue residue (must have positive p-valuation)
        #[arg(long)]
        ap: u64,
        #[arg(long)]
        m: u32,
        /// working precision exponent
        #[arg(long = "N")]
        working_prec: u32,
        /// trusted digits required of the represented value
        #[arg(long, default_value_t = 1)]
        target_n: u32,
        /// optional X-truncation bound for the stored entries
        #[arg(long)]
        x_trunc: Option<usize>,
    },
    /// p-stabilization of a norm-compatible sequence along a Hecke root
    Pstab {
        /// NormSeq JSON file (working precision must cover n + M + 2)
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_lambda)]
        lambda: LambdaChoice,
        /// trusted digits required of the stabilized values
        #[arg(long, default_value_t = 1)]
        target_n: u32,
    },
    /// Assemble theta tables and check the norm relation
    Theta {
        /// ThetaSeq JSON file
        #[arg(long)]
        input: PathBuf,
    },
    /// Q-system checks and mock Coleman factorization
    Mock {
        /// QSystem JSON file
        #[arg(long)]
        input: PathBuf,
    },
    /// Scan for n-admissible primes against an eigenvalue table
    Admissible {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// fundamental discriminant of the imaginary quadratic field
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
        #[arg(long)]
        bound: u64,
        /// EigenTable JSON file
        #[arg(long)]
        table: PathBuf,
    },
    /// Generate an eigenvalue table by naive point counting (offline
    /// helper writing the same EigenTable format as ingested tables)
    EigenTable {
        /// long Weierstrass coefficients a1,a2,a3,a4,a6
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        curve: Vec<i64>,
        /// conductor (bad primes are skipped)
        #[arg(long)]
        n0: u64,
        #[arg(long)]
        bound: u64,
    },
    /// Coordinate-vector factorization and reciprocity checkers
    Euler {
        #[command(subcommand)]
        sub: EulerCmd,
    },
    /// Run the full invariant suite
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// optional extra randomized sweep at this prime
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "M")]
        horizon: Option<u32>,
    },
}

#[derive(Subcommand)]
enum EulerCmd {
    /// Coordinatewise sharp/flat factorization
    Decompose {
        /// CoordSeq JSON file
        #[arg(long)]
        input: PathBuf,
    },
    /// First reciprocity congruence (verify or solve the unit slot)
    CheckRec1 {
        /// Rec1 JSON file
        #[arg(long)]
        input: PathBuf,
    },
    /// Second reciprocity congruence (monomial unit slots)
    CheckRec2 {
        /// Rec2 JSON file
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct RingOpGroup {
    /// omega_m = (1+X)^{p^m} - 1
    #[arg(long)]
    omega: bool,
    /// Phi_m = omega_m / omega_{m-1}
    #[arg(long)]
    phi: bool,
    /// product of Phi_j over even j <= m
    #[arg(long)]
    tilde_plus: bool,
    /// product of Phi_j over odd j <= m
    #[arg(long)]
    tilde_minus: bool,
    /// X * tilde_plus
    #[arg(long)]
    omega_plus: bool,
    /// X * tilde_minus
    #[arg(long)]
    omega_minus: bool,
    /// project an input element to this level
    #[arg(long)]
    project: Option<u32>,
    /// norm an input element one level up
    #[arg(long)]
    norm: bool,
    /// apply the involution gamma -> gamma^{-1} to an input element
    #[arg(long)]
    involute: bool,
    /// evaluate an input element at a level-j character
    #[arg(long)]
    eval_char: Option<u32>,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// level for structural polynomials
    #[arg(long)]
    m: Option<u32>,
    #[command(flatten)]
    op: RingOpGroup,
    /// IwasawaElem JSON file for element operations
    #[arg(long)]
    input: Option<PathBuf>,
}

fn parse_lambda(s: &str) -> Result<LambdaChoice, String> {
    match s {
        "alpha" => Ok(LambdaChoice::Alpha),
        "beta" => Ok(LambdaChoice::Beta),
        _ => Err("lambda must be 'alpha' or 'beta'".into()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let data = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&data)
        .map_err(|e| Error::Input(format!("invalid JSON in {}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(serde_json::Value, bool), Error> {
    match &cli.cmd {
        Cmd::Ring(args) => {
            let g = &args.op;
            let kind = [
                (g.omega, StructKind::Omega),
                (g.phi, StructKind::Phi),
                (g.tilde_plus, StructKind::TildePlus),
                (g.tilde_minus, StructKind::TildeMinus),
                (g.omega_plus, StructKind::OmegaPlus),
                (g.omega_minus, StructKind::OmegaMinus),
            ]
            .into_iter()
            .find_map(|(flag, k)| flag.then_some(k));
            if let Some(kind) = kind {
                let m = args
                    .m
                    .ok_or_else(|| Error::Input("structural polynomials need --m".into()))?;
                return Ok((commands::ring_struct(args.p, args.n, kind, m)?, true));
            }
            let input_path = args
                .input
                .as_ref()
                .ok_or_else(|| Error::Input("element operations need --input".into()))?;
            let elem: dto::IwasawaElemDto = read_json(input_path)?;
            let op = if let Some(t) = g.project {
                commands::ElemOp::Project(t)
            } else if g.norm {
                commands::ElemOp::Norm
            } else if g.involute {
                commands::ElemOp::Involute
            } else if let Some(j) = g.eval_char {
                commands::ElemOp::EvalChar(j)
            } else {
                return Err(Error::Input("no ring operation selected".into()));
            };
            Ok((commands::ring_elem_op(&elem, op)?, true))
        }
        Cmd::Decompose { input } => {
            let seq: dto::NormSeqDto = read_json(input)?;
            Ok((commands::decompose(&seq)?, true))
        }
        Cmd::Logmatrix { p, ap, m, working_prec, target_n, x_trunc } => Ok((
            commands::logmatrix_cmd(*p, *ap, *m, *working_prec, *target_n, *x_trunc)?,
            true,
        )),
        Cmd::Pstab { input, lambda, target_n } => {
            let seq: dto::NormSeqDto = read_json(input)?;
            Ok((commands::pstab(&seq, *lambda, *target_n)?, true))
        }
        Cmd::Theta { input } => {
            let seq: dto::ThetaSeqDto = read_json(input)?;
            Ok((commands::theta_cmd(&seq)?, true))
        }
        Cmd::Mock { input } => {
            let model: dto::QSystemDto = read_json(input)?;
            Ok((commands::mock(&model)?, true))
        }
        Cmd::Admissible { p, n, dk, bound, table } => {
            let t: dto::EigenTableDto = read_json(table)?;
            Ok((commands::admissible_scan(&t, *p, *n, *dk, *bound)?, true))
        }
        Cmd::EigenTable { curve, n0, bound } => {
            let coeffs: [i64; 5] = curve
                .as_slice()
                .try_into()
                .map_err(|_| Error::Input("curve needs exactly five coefficients".into()))?;
            Ok((commands::eigen_table(coeffs, *n0, *bound)?, true))
        }
        Cmd::Euler { sub } => match sub {
            EulerCmd::Decompose { input } => {
                let coords: dto::CoordSeqDto = read_json(input)?;
                Ok((commands::euler_decompose(&coords)?, true))
            }
            EulerCmd::CheckRec1 { input } => {
                let rec: dto::Rec1InputDto = read_json(input)?;
                Ok((commands::euler_rec1(&rec)?, true))
            }
            EulerCmd::CheckRec2 { input } => {
                let rec: dto::Rec2InputDto = read_json(input)?;
                Ok((commands::euler_rec2(&rec)?, true))
            }
        },
        Cmd::Selftest { seed, p, n, horizon } => {
            let sweep = match (p, n, horizon) {
                (Some(p), Some(n), Some(m)) => Some((*p, *n, *m)),
                (None, None, None) => None,
                _ => {
                    return Err(Error::Input(
                        "selftest sweep needs all of --p, --n and --M".into(),
                    ))
                }
            };
            commands::selftest(*seed, sweep)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, ok)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                // selftest ran to completion but a criterion failed
                ExitCode::from(3)
            }
        }
        Err(e) => {
            let (code, kind) = match &e {
                Error::Input(_) => (2, "schema"),
                Error::Contract(_) => (3, "math-contract"),
                Error::Precision(_) => (4, "precision"),
            };
            let obj = serde_json::json!({
                "error": { "kind": kind, "message": e.to_string() },
            });
            eprintln!("{}", serde_json::to_string_pretty(&obj).expect("error serializes"));
            ExitCode::from(code)
        }
    }
}
