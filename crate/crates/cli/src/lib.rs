//! Front end for `genbell`: triangles, sequences, normal forms, certified
//! series values and cross-route verification suites.

pub mod output;
pub mod table;
pub mod verify;

use clap::{Parser, Subcommand};
use genbell::{Params, Rational};

pub use output::{OutputFormat, SeriesForm};
pub use table::{Perturbation, Table};
pub use verify::{run_suite, Bounds, Report, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "genbell",
    version,
    about = "Generalized Stirling and Bell numbers from boson normal ordering"
)]
pub struct Cli {
    /// Working precision in bits for series and Fock-space evaluations.
    #[arg(long, global = true, default_value_t = 256)]
    pub prec: u32,

    /// Seed for the randomized rewrite strategy.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Emit JSON regardless of --format.
    #[arg(long, global = true)]
    pub json: bool,

    /// Add one to S_{r,s}(n,k), given as r,s,n,k. For mutation testing.
    #[arg(long, global = true, hide = true)]
    pub perturb: Option<Perturbation>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rows 1..=n_max of S_{r,s}(n,k).
    Triangle {
        r: u32,
        s: u32,
        n_max: u32,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// B_{r,s}(0..=n_max).
    Bell {
        r: u32,
        s: u32,
        n_max: u32,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        rmax: Option<u32>,
        #[arg(long)]
        nmax: Option<u32>,
        /// Truncation order of the exponential generating functions.
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        /// Fock-space truncation.
        #[arg(long, default_value_t = 128)]
        dim: usize,
    },
    /// Normal form of a word over {a, A}, A being the creation operator.
    Normalize {
        word: String,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Exact Bell polynomial B_{r,s}(n, t) at a rational t.
    Poly {
        r: u32,
        s: u32,
        n: u32,
        t: Rational,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Certified evaluation of a series representation of B_{r,s}(n).
    Series {
        #[arg(value_enum)]
        form: SeriesForm,
        r: u32,
        s: u32,
        n: u32,
        /// Bell polynomial argument (dobinski form only).
        #[arg(long, default_value = "1")]
        t: Rational,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

/// What a command printed and how the process should exit.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }
}

pub fn run(cli: &Cli) -> genbell::Result<Outcome> {
    let table = Table::new(cli.perturb)?;
    let fmt = |f: OutputFormat| if cli.json { OutputFormat::Json } else { f };
    match &cli.command {
        Command::Triangle {
            r,
            s,
            n_max,
            format,
        } => output::cmd_triangle(&table, Params::new(*r, *s)?, *n_max, fmt(*format))
            .map(Outcome::ok),
        Command::Bell {
            r,
            s,
            n_max,
            format,
        } => output::cmd_bell(&table, Params::new(*r, *s)?, *n_max, fmt(*format)).map(Outcome::ok),
        Command::Normalize { word, format } => {
            output::cmd_normalize(word, fmt(*format)).map(Outcome::ok)
        }
        Command::Poly { r, s, n, t, format } => {
            output::cmd_poly(&table, Params::new(*r, *s)?, *n, t, fmt(*format)).map(Outcome::ok)
        }
        Command::Series {
            form,
            r,
            s,
            n,
            t,
            format,
        } => output::cmd_series(
            &table,
            *form,
            Params::new(*r, *s)?,
            *n,
            t,
            cli.prec,
            fmt(*format),
        )
        .map(Outcome::ok),
        Command::Verify {
            suite,
            rmax,
            nmax,
            kmax,
            dim,
        } => {
            let bounds = Bounds {
                rmax: *rmax,
                nmax: *nmax,
                kmax: *kmax,
                dim: *dim,
                prec: cli.prec,
                seed: cli.seed,
            };
            let report = run_suite(*suite, &bounds, &table);
            let stdout = if cli.json {
                serde_json::to_string_pretty(&report).expect("serializable") + "\n"
            } else {
                report.render_plain()
            };
            let stderr = report
                .failures()
                .map(|c| {
                    format!(
                        "counterexample: {} [{}]: {}\n",
                        c.identity, c.case, c.detail
                    )
                })
                .collect();
            Ok(Outcome {
                stdout,
                stderr,
                code: if report.passed { 0 } else { 1 },
            })
        }
    }
}
