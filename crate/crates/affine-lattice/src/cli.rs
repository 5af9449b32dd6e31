//! Command-line front end: one binary with subcommands for counting,
//! fitting, volume, complex verification, and the decay demonstration.
//!
//! Exit statuses are a stable contract for CI use: 0 success (and
//! verification PASS), 1 verification FAIL, 2 input or usage error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::format_rational;
use crate::complex::{builtins, AffineComplex};
use crate::io;
use crate::lattice;
use crate::poisson::{self, BumpFunction};
use crate::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Parser, Debug)]
#[command(
    name = "affine-lattice",
    version,
    about = "Exact lattice-point counting on rational polytopes and glued complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text", env = "AL_FORMAT")]
    format: Format,

    /// Worker threads for parallel sections (defaults to the CPU count).
    #[arg(long, global = true, env = "AL_WORKERS")]
    workers: Option<usize>,

    /// Cap on the ambient dimension for hull and vertex enumeration.
    #[arg(long, global = true, default_value_t = crate::DEFAULT_DIM_CAP, env = "AL_DIM_CAP")]
    dim_cap: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the points of (1/m)Z^n in a polytope.
    Count {
        /// Path to a polytope file.
        input: PathBuf,
        /// Dilation denominator m.
        #[arg(long, default_value_t = 1, env = "AL_M")]
        m: u64,
        /// Also list the points.
        #[arg(long)]
        points: bool,
    },
    /// Exact volume of a polytope.
    Volume {
        /// Path to a polytope file.
        input: PathBuf,
    },
    /// Fit and print the quasi-polynomial m -> L_P(m).
    Ehrhart {
        /// Path to a polytope file.
        input: PathBuf,
        /// Override the fitting period (defaults to the lcm of vertex denominators).
        #[arg(long)]
        period: Option<u64>,
    },
    /// Count the points of (1/m)Z^n on a glued complex.
    ComplexCount {
        /// Path to a complex file, or builtin:NAME.
        input: String,
        /// Dilation denominator m.
        #[arg(long, default_value_t = 1, env = "AL_M")]
        m: u64,
    },
    /// Check L_M(m) = vol(M)*m^n on a glued complex.
    Verify {
        /// Path to a complex file, or builtin:NAME.
        input: String,
        /// Largest m checked directly (defaults to the smallest admissible window).
        #[arg(long, env = "AL_M_MAX")]
        m_max: Option<u64>,
    },
    /// Demonstrate the decay of the lattice-sum error for a smooth bump.
    Poisson(PoissonArgs),
    /// Inspect the builtin complexes.
    Builtin {
        #[command(subcommand)]
        action: BuiltinAction,
    },
}

#[derive(Args, Debug)]
struct PoissonArgs {
    /// Ambient dimension of the bump (1 to 3).
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Bump center, comma-separated (defaults to the origin).
    #[arg(long, value_delimiter = ',')]
    center: Option<Vec<f64>>,
    /// Bump radius.
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    radius: f64,
    /// Bump amplitude.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Values of m, comma-separated and ascending.
    #[arg(long = "m-values", value_delimiter = ',', default_values_t = [4u64, 8, 16, 32])]
    m_values: Vec<u64>,
    /// Write plot data (columns: m, |e(m)|) to this path.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BuiltinAction {
    /// List the builtin complexes.
    List,
    /// Print a builtin complex as a complex file.
    Show {
        /// Builtin name, e.g. torus:2,1.
        name: String,
    },
}

/// Parses arguments, runs the requested command, and returns the process
/// exit status. Output goes to stdout, errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be at least 1");
            return EXIT_INPUT_ERROR;
        }
        // Ignore the error when a global pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn load_complex_input(input: &str, dim_cap: usize) -> Result<AffineComplex, Error> {
    if let Some(name) = input.strip_prefix("builtin:") {
        builtins::by_name(name)
    } else {
        io::load_complex(Path::new(input), dim_cap)
    }
}

#[derive(Serialize)]
struct CountOutput {
    m: u64,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct VolumeOutput {
    volume: String,
}

#[derive(Serialize)]
struct EhrhartOutput {
    quasipolynomial: io::QuasiPolynomialFile,
    rendered: String,
    validated_up_to: u64,
}

#[derive(Serialize)]
struct DecayRowOutput {
    m: u64,
    lattice_sum: f64,
    scaled_integral: f64,
    error: f64,
}

#[derive(Serialize)]
struct DecayOutput {
    dim: usize,
    integral: f64,
    quadrature_error: f64,
    rows: Vec<DecayRowOutput>,
    tail_monotone: Option<bool>,
    halving: Vec<(u64, bool)>,
    consistent: bool,
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Count { input, m, points } => {
            if m == 0 {
                return Err(Error::InvalidInput("m must be at least 1".into()));
            }
            let p = io::load_polytope(&input, cli.dim_cap)?;
            let point_list = if points {
                Some(lattice::enumerate_points(&p, m)?)
            } else {
                None
            };
            let count = match &point_list {
                Some(list) => list.len() as u64,
                None => lattice::count(&p, m)?,
            };
            match cli.format {
                Format::Text => {
                    println!("{count}");
                    if let Some(list) = &point_list {
                        for point in list {
                            println!(
                                "({})",
                                point.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                            );
                        }
                    }
                }
                Format::Structured => {
                    let output = CountOutput {
                        m,
                        count,
                        points: point_list.map(|list| {
                            list.iter()
                                .map(|p| p.iter().map(format_rational).collect())
                                .collect()
                        }),
                    };
                    println!("{}", io::to_structured(&output)?);
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Volume { input } => {
            let p = io::load_polytope(&input, cli.dim_cap)?;
            let volume = p.volume();
            match cli.format {
                Format::Text => println!("{}", format_rational(&volume)),
                Format::Structured => println!(
                    "{}",
                    io::to_structured(&VolumeOutput {
                        volume: format_rational(&volume),
                    })?
                ),
            }
            Ok(EXIT_PASS)
        }
        Command::Ehrhart { input, period } => {
            let p = io::load_polytope(&input, cli.dim_cap)?;
            let report = lattice::ehrhart_report(&p, period)?;
            match cli.format {
                Format::Text => {
                    println!("{}", report.fitted);
                    println!("validated against direct counts up to m = {}", report.validated_up_to);
                }
                Format::Structured => {
                    let output = EhrhartOutput {
                        quasipolynomial: io::QuasiPolynomialFile::from_quasipoly(&report.fitted),
                        rendered: report.fitted.to_string(),
                        validated_up_to: report.validated_up_to,
                    };
                    println!("{}", io::to_structured(&output)?);
                }
            }
            Ok(EXIT_PASS)
        }
        Command::ComplexCount { input, m } => {
            if m == 0 {
                return Err(Error::InvalidInput("m must be at least 1".into()));
            }
            let c = load_complex_input(&input, cli.dim_cap)?;
            let count = c.count_union_find(m)?;
            match cli.format {
                Format::Text => println!("{count}"),
                Format::Structured => println!(
                    "{}",
                    io::to_structured(&CountOutput {
                        m,
                        count,
                        points: None,
                    })?
                ),
            }
            Ok(EXIT_PASS)
        }
        Command::Verify { input, m_max } => {
            let c = load_complex_input(&input, cli.dim_cap)?;
            let m_max = m_max.unwrap_or_else(|| {
                let period = c
                    .charts()
                    .iter()
                    .map(crate::polytope::RationalPolytope::vertex_denominator_lcm)
                    .fold(1u64, |a, b| num::Integer::lcm(&a, &b));
                ((c.ambient_dim() as u64 + 2) * period).max(12)
            });
            let report = c.verify(m_max)?;
            match cli.format {
                Format::Text => println!("{report}"),
                Format::Structured => println!(
                    "{}",
                    io::to_structured(&io::VerificationFile::from_report(&report))?
                ),
            }
            Ok(if report.passed { EXIT_PASS } else { EXIT_VERIFY_FAIL })
        }
        Command::Poisson(args) => {
            if args.dim < 1 || args.dim > 3 {
                return Err(Error::InvalidInput("--dim must be 1, 2, or 3".into()));
            }
            let center = args.center.unwrap_or_else(|| vec![0.0; args.dim]);
            if center.len() != args.dim {
                return Err(Error::InvalidInput(format!(
                    "--center must have {} coordinates",
                    args.dim
                )));
            }
            let bump = BumpFunction::new(center, args.radius, args.amplitude)?;
            let report = poisson::decay_report(&bump, &args.m_values)?;
            if let Some(path) = &args.plot_data {
                let mut data = String::new();
                for (m, e) in report.plot_data() {
                    data.push_str(&format!("{m} {e:e}\n"));
                }
                std::fs::write(path, data)
                    .map_err(|e| Error::from(e).in_field(path.display().to_string()))?;
            }
            match cli.format {
                Format::Text => print!("{report}"),
                Format::Structured => {
                    let output = DecayOutput {
                        dim: report.dim,
                        integral: report.integral,
                        quadrature_error: report.quadrature_error,
                        rows: report
                            .rows
                            .iter()
                            .map(|r| DecayRowOutput {
                                m: r.m,
                                lattice_sum: r.lattice_sum,
                                scaled_integral: r.scaled_integral,
                                error: r.error,
                            })
                            .collect(),
                        tail_monotone: report.tail_monotone,
                        halving: report.halving.clone(),
                        consistent: report.consistent(),
                    };
                    println!("{}", io::to_structured(&output)?);
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Builtin { action } => match action {
            BuiltinAction::List => {
                for (name, description) in builtins::list() {
                    println!("{name:<18} {description}");
                }
                Ok(EXIT_PASS)
            }
            BuiltinAction::Show { name } => {
                let c = builtins::by_name(&name)?;
                println!("{}", io::to_structured(&io::ComplexFile::from_complex(&c))?);
                Ok(EXIT_PASS)
            }
        },
    }
}
