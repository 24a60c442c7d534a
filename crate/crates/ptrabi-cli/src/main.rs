//! Command-line front end over the quasi-exact solution library: exact
//! constraint polynomials, slice roots, degeneracy tables, null-space
//! solves, independent Floquet verification, curve tracing, and plot-data
//! bundles. Exit code 0 on success, 1 when a mathematical precondition is
//! violated (the message names it), 2 on usage errors.

mod figures;
mod grid;
mod opts;
mod render;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use opts::{Cli, Command, Format};
use ptrabi_core::constraint::{self, DimensionlessPoint, RabiParams};
use ptrabi_core::{floquet, sl2, spectrum, Error};
use render::{FixedCoordinate, RootsReport, Sl2Report, VerifyReport};

enum CliError {
    Domain(Error),
    Io { path: PathBuf, source: std::io::Error },
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Picks the output format: an explicit shorthand switch wins, then the
/// global flag, then the subcommand's natural default.
fn effective(global: Option<Format>, json: bool, pretty: bool, natural: Format) -> Format {
    if json {
        Format::Json
    } else if pretty {
        Format::Pretty
    } else {
        global.unwrap_or(natural)
    }
}

fn no_csv(format: Format, what: &str) -> Result<Format, CliError> {
    if format == Format::Csv {
        Err(CliError::Usage(format!("csv output is not defined for {what}")))
    } else {
        Ok(format)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let content = match cli.command {
        Command::Constraint { n, json, pretty } => {
            let poly = constraint::constraint_polynomial(n);
            match no_csv(effective(cli.format, json, pretty, Format::Json), "constraint")? {
                Format::Json => render::to_json(&render::polynomial_terms(&poly)),
                Format::Pretty => {
                    let mut s = poly.pretty();
                    s.push('\n');
                    s
                }
                Format::Csv => unreachable!(),
            }
        }

        Command::Roots { n, g, x, method } => {
            let report = match (g, x) {
                (Some(g), None) => RootsReport {
                    n,
                    fixed: FixedCoordinate::G(g),
                    roots: spectrum::roots_in_x_with(n, g, method.into())?,
                },
                (None, Some(x)) => RootsReport {
                    n,
                    fixed: FixedCoordinate::X(x),
                    roots: spectrum::roots_in_g_with(n, x, method.into())?,
                },
                _ => {
                    return Err(CliError::Usage(
                        "exactly one of --g or --x must be given".into(),
                    ))
                }
            };
            match no_csv(effective(cli.format, false, false, Format::Json), "roots")? {
                Format::Json => render::to_json(&report),
                Format::Pretty => render::roots_pretty(&report),
                Format::Csv => unreachable!(),
            }
        }

        Command::Degeneracies { n, json, pretty } => {
            let rows = render::degeneracy_rows(&spectrum::degenerate_gamma_values(n)?);
            match no_csv(effective(cli.format, json, pretty, Format::Json), "degeneracies")? {
                Format::Json => render::to_json(&rows),
                Format::Pretty => render::degeneracies_pretty(n, &rows),
                Format::Csv => unreachable!(),
            }
        }

        Command::Solve { n, x, g, omega } => {
            let point = DimensionlessPoint::new(x, g)?;
            let sol = spectrum::null_space_coefficients(n, &point, omega)?;
            let report = render::SolveReport::from_solution(&sol);
            match no_csv(effective(cli.format, false, false, Format::Json), "solve")? {
                Format::Json => render::to_json(&report),
                Format::Pretty => render::solve_pretty(&report),
                Format::Csv => unreachable!(),
            }
        }

        Command::Verify { n, g, x, omega } => {
            let branches = match x {
                Some(x) => vec![x],
                None => spectrum::roots_in_x(n, g)?,
            };
            let mut reports = Vec::with_capacity(branches.len());
            for x in branches {
                let point = DimensionlessPoint::new(x, g)?;
                let sol = spectrum::null_space_coefficients(n, &point, omega)?;
                let params = constraint::params_from_point(n, &point, omega)?;
                let rep = floquet::verify_quasi_exact(&sol, &params, cli.tol)?;
                reports.push(VerifyReport {
                    x,
                    g,
                    max_residual: rep.max_residual,
                    multiplier_error: rep.multiplier_error,
                    trace: [rep.monodromy_trace.re, rep.monodromy_trace.im],
                    phase: rep.phase.to_string(),
                });
            }
            match no_csv(effective(cli.format, false, false, Format::Json), "verify")? {
                Format::Json => render::to_json(&reports),
                Format::Pretty => render::verify_pretty(&reports),
                Format::Csv => unreachable!(),
            }
        }

        Command::Curve { n, gmax, samples } => {
            let points = grid::trace(n, gmax, samples, cli.threads)?;
            match effective(cli.format, false, false, Format::Csv) {
                Format::Csv => render::curve_csv(&points, &[]),
                Format::Json => render::to_json(&render::curve_rows_json(&points)),
                Format::Pretty => render::curve_pretty(&points),
            }
        }

        Command::Floquet { nu0, nu1, gamma, omega } => {
            let params = RabiParams::new(nu0, nu1, gamma, omega)?;
            let mono = floquet::monodromy(&params, cli.tol)?;
            let report = render::MonodromyJson::from_result(&mono);
            match no_csv(effective(cli.format, false, false, Format::Json), "floquet")? {
                Format::Json => render::to_json(&report),
                Format::Pretty => render::monodromy_pretty(&report),
                Format::Csv => unreachable!(),
            }
        }

        Command::Sl2Check { n } => {
            let all_exact = (0..=n).all(|k| sl2::commutator_check(&sl2::generators(k)));
            let report = Sl2Report { n_max: n, all_exact };
            let content =
                match no_csv(effective(cli.format, false, false, Format::Json), "sl2-check")? {
                    Format::Json => render::to_json(&report),
                    Format::Pretty => format!(
                        "commutation relations exact for all n <= {n}: {all_exact}\n"
                    ),
                    Format::Csv => unreachable!(),
                };
            if !all_exact {
                write_output(&cli.out, &content)?;
                return Err(CliError::Domain(Error::Precondition(
                    "commutation relations violated".into(),
                )));
            }
            content
        }

        Command::Figures { ns, gmax, samples, out_dir, doublet } => {
            let manifest = figures::emit(&ns, gmax, samples, &out_dir, doublet, cli.threads)?;
            render::to_json(&manifest)
        }
    };
    write_output(&cli.out, &content)
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, content).map_err(|source| CliError::Io { path: p.clone(), source })
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
